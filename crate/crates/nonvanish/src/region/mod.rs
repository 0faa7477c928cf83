//! The compact set K: closed Jordan components, filaments (compact arcs with
//! empty interior), and isolated points, with membership classification,
//! boundary sampling, exterior displacement, and the component-tree
//! combinatorics used by the gluing construction.

mod component;
mod tree;

pub use component::{
    point_segment, starlike_radius, starlike_radius_prime, BoundingBox, ComponentShape,
    JordanComponent, MIN_AREA,
};
pub use tree::{build_component_trees, ComponentTree};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// A compact arc with empty interior, stored as a polyline.
#[derive(Debug, Clone)]
pub struct Filament {
    points: Vec<Complex64>,
    cumlen: Vec<f64>,
}

impl Filament {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidRegion("filament needs at least 2 points".into()));
        }
        let mut cumlen = Vec::with_capacity(points.len());
        cumlen.push(0.0);
        for i in 1..points.len() {
            cumlen.push(cumlen[i - 1] + (points[i] - points[i - 1]).norm());
        }
        if *cumlen.last().expect("nonempty") <= 0.0 {
            return Err(Error::InvalidRegion("filament has zero length".into()));
        }
        Ok(Filament { points, cumlen })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn length(&self) -> f64 {
        *self.cumlen.last().expect("nonempty")
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() - 1 {
            let (d, _) = point_segment(z, self.points[i], self.points[i + 1]);
            best = best.min(d);
        }
        best
    }

    /// Nearest point plus escape directions: segment perpendiculars, and the
    /// axial continuation when the nearest point is an endpoint.
    pub fn nearest(&self, z: Complex64) -> (Complex64, Vec<Complex64>) {
        let mut best = (f64::INFINITY, self.points[0], 0usize);
        for i in 0..self.points.len() - 1 {
            let (d, p) = point_segment(z, self.points[i], self.points[i + 1]);
            if d < best.0 {
                best = (d, p, i);
            }
        }
        let (_, p, i) = best;
        let dir = self.points[i + 1] - self.points[i];
        let len = dir.norm();
        let t = if len == 0.0 { Complex64::new(1.0, 0.0) } else { dir / len };
        let perp = Complex64::new(-t.im, t.re);
        let mut dirs = vec![perp, -perp];
        if (p - self.points[0]).norm() == 0.0 {
            dirs.push(-t);
        }
        if (p - *self.points.last().expect("nonempty")).norm() == 0.0 {
            dirs.push(t);
        }
        (p, dirs)
    }

    /// `n` arclength-equidistributed samples, endpoints included.
    pub fn samples(&self, n: usize) -> Vec<Complex64> {
        let n = n.max(2);
        let total = self.length();
        (0..n)
            .map(|k| {
                let target = total * k as f64 / (n - 1) as f64;
                let idx = match self.cumlen.binary_search_by(|x| x.partial_cmp(&target).expect("finite")) {
                    Ok(i) => i.min(self.points.len() - 2),
                    Err(i) => i.saturating_sub(1).min(self.points.len() - 2),
                };
                let seg = self.cumlen[idx + 1] - self.cumlen[idx];
                let frac = if seg == 0.0 { 0.0 } else { (target - self.cumlen[idx]) / seg };
                self.points[idx] + (self.points[idx + 1] - self.points[idx]) * frac
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct CompactRegion {
    pub components: Vec<JordanComponent>,
    pub filaments: Vec<Filament>,
    pub points: Vec<Complex64>,
    bbox: BoundingBox,
    hash: String,
}

impl CompactRegion {
    pub fn new(
        components: Vec<JordanComponent>,
        filaments: Vec<Filament>,
        points: Vec<Complex64>,
    ) -> Result<Self> {
        if components.is_empty() && filaments.is_empty() && points.is_empty() {
            return Err(Error::InvalidRegion("region is empty".into()));
        }
        let mut bbox = BoundingBox::empty();
        for c in &components {
            bbox.merge(c.bbox());
        }
        for f in &filaments {
            for &p in f.points() {
                bbox.include(p);
            }
        }
        for &p in &points {
            bbox.include(p);
        }

        // Pairwise-disjoint interiors, checked on sampled interior grids.
        for i in 0..components.len() {
            for j in 0..components.len() {
                if i == j {
                    continue;
                }
                for z in components[i].interior_samples(24) {
                    if components[j].interior_contains(z) {
                        return Err(Error::InvalidRegion(format!(
                            "interiors of components {} and {} overlap near {z}",
                            components[i].id, components[j].id
                        )));
                    }
                }
            }
        }
        // Filaments and isolated points must not sit inside a component.
        for (fi, f) in filaments.iter().enumerate() {
            for z in f.samples(64) {
                if components.iter().any(|c| c.interior_contains(z)) {
                    return Err(Error::InvalidRegion(format!(
                        "filament {fi} passes through a component interior near {z}"
                    )));
                }
            }
        }
        for &p in &points {
            if components.iter().any(|c| c.interior_contains(p)) {
                return Err(Error::InvalidRegion(format!(
                    "isolated point {p} lies inside a component interior"
                )));
            }
        }

        let hash = geometry_hash(&components, &filaments, &points);
        Ok(CompactRegion { components, filaments, points, bbox, hash })
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn diameter(&self) -> f64 {
        self.bbox.diagonal()
    }

    /// Hash of the exact geometry, recorded in reports.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// Scale-relative tolerance separating "numerically on the boundary"
    /// from "genuinely interior": polynomial roots, displacement guards, and
    /// nudge classification all share it.
    pub fn boundary_classification_tol(&self) -> f64 {
        1e-7 * self.diameter()
    }

    pub fn has_interior(&self) -> bool {
        !self.components.is_empty()
    }

    /// Nearest point of the boundary set to `z`: used to pin min-modulus
    /// scans at the boundary points closest to polynomial roots.
    pub fn nearest_boundary_point(&self, z: Complex64) -> Complex64 {
        let mut best = (f64::INFINITY, z);
        for c in &self.components {
            let (p, _) = c.nearest_boundary(z);
            let d = (z - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
        for f in &self.filaments {
            let (p, _) = f.nearest(z);
            let d = (z - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
        for &p in &self.points {
            let d = (z - p).norm();
            if d < best.0 {
                best = (d, p);
            }
        }
        best.1
    }

    /// Distance from `z` to the boundary set: component boundaries,
    /// filaments, and isolated points.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for c in &self.components {
            best = best.min(c.boundary_distance(z));
        }
        for f in &self.filaments {
            best = best.min(f.distance(z));
        }
        for &p in &self.points {
            best = best.min((z - p).norm());
        }
        best
    }

    /// Membership classification. Boundary wins within `tol` of the boundary
    /// set; otherwise a point interior to any component is interior.
    pub fn contains(&self, z: Complex64, tol: f64) -> Membership {
        let mut within = false;
        for c in &self.components {
            if c.boundary_distance_bounded(z, tol) <= tol {
                within = true;
                break;
            }
        }
        if !within {
            for f in &self.filaments {
                if f.distance(z) <= tol {
                    within = true;
                    break;
                }
            }
        }
        if !within && self.points.iter().any(|&p| (z - p).norm() <= tol) {
            within = true;
        }
        if within {
            return Membership::Boundary;
        }
        if self.components.iter().any(|c| c.interior_contains(z)) {
            return Membership::Interior;
        }
        Membership::Outside
    }

    /// Quasi-uniform samples: `n` per component boundary, `n` per filament
    /// (endpoints included), plus every isolated point.
    pub fn boundary_samples(&self, n_per_component: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        for c in &self.components {
            out.extend(c.boundary_samples(n_per_component));
        }
        for f in &self.filaments {
            out.extend(f.samples(n_per_component));
        }
        out.extend(self.points.iter().copied());
        out
    }

    /// Interior grid samples across all components.
    pub fn interior_samples(&self, resolution: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        for c in &self.components {
            out.extend(c.interior_samples(resolution));
        }
        out
    }

    /// A point `z'` outside K with |z' - z| <= delta, reached by probing the
    /// outward boundary normal first, then perpendicular and fan directions,
    /// halving the step until a probe classifies outside.
    pub fn exterior_displacement(&self, z: Complex64, delta: f64) -> Result<Complex64> {
        if delta <= 0.0 {
            return Err(Error::DomainError("displacement delta must be positive".into()));
        }
        // Points a rounding error inside the boundary are legitimate nudge
        // inputs; only genuinely interior points are rejected.
        if self.contains(z, self.boundary_classification_tol()) == Membership::Interior {
            return Err(Error::InteriorZero { z });
        }

        // Candidate directions, nearest geometry first.
        let mut dirs: Vec<Complex64> = Vec::new();
        let push = |d: Complex64, dirs: &mut Vec<Complex64>| {
            if d.norm() > 0.0 {
                let u = d / d.norm();
                if !dirs.iter().any(|e| (e - u).norm() < 1e-9) {
                    dirs.push(u);
                }
            }
        };
        let near_tol = 1e-9 * (1.0 + self.diameter());
        let mut elements: Vec<(f64, Vec<Complex64>)> = Vec::new();
        for c in &self.components {
            let d = c.boundary_distance(z);
            let (_, normal) = c.nearest_boundary(z);
            elements.push((d, vec![normal, -normal, normal * Complex64::new(0.0, 1.0), normal * Complex64::new(0.0, -1.0)]));
        }
        for f in &self.filaments {
            let d = f.distance(z);
            let (_, escape) = f.nearest(z);
            elements.push((d, escape));
        }
        for &p in &self.points {
            let d = (z - p).norm();
            if d > 0.0 {
                elements.push((d, vec![(z - p) / d]));
            } else {
                elements.push((0.0, vec![]));
            }
        }
        elements.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite distances"));
        for (dist, ds) in &elements {
            // Directions from far-away geometry are noise; only nearby
            // elements constrain the escape.
            if *dist <= near_tol.max(delta) {
                for &d in ds {
                    push(d, &mut dirs);
                }
            }
        }
        for k in 0..16 {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
            push(Complex64::from_polar(1.0, angle), &mut dirs);
        }

        let mut step = delta;
        let mut probes = 0usize;
        let cap = delta * (1.0 + 1e-12);
        for _ in 0..60 {
            for &d in &dirs {
                probes += 1;
                let candidate = z + d * step;
                if self.contains(candidate, 0.0) == Membership::Outside && (candidate - z).norm() <= cap {
                    return Ok(candidate);
                }
            }
            step *= 0.5;
            if step < 1e-280 {
                break;
            }
        }
        Err(Error::NoExteriorPointFound { z, probes })
    }

    /// Grid flood-fill connectivity heuristic for the complement, over a box
    /// twice the bounding box. Resolution must be at least 64.
    pub fn complement_connected(&self, grid_resolution: usize) -> Result<bool> {
        if grid_resolution < 64 {
            return Err(Error::DomainError(format!(
                "grid resolution {grid_resolution} below minimum 64"
            )));
        }
        let res = grid_resolution;
        let big = self.bbox.scaled(2.0);
        // Degenerate boxes (single point / horizontal filament) still need
        // two-dimensional probing room.
        let pad = 0.25 * (1.0 + self.diameter());
        let (min_re, max_re) = (big.min_re - pad, big.max_re + pad);
        let (min_im, max_im) = (big.min_im - pad, big.max_im + pad);
        let cell = |i: usize, j: usize| -> Complex64 {
            Complex64::new(
                min_re + (max_re - min_re) * (i as f64 + 0.5) / res as f64,
                min_im + (max_im - min_im) * (j as f64 + 0.5) / res as f64,
            )
        };
        let mut outside = vec![false; res * res];
        for i in 0..res {
            for j in 0..res {
                outside[j * res + i] = self.contains(cell(i, j), 0.0) == Membership::Outside;
            }
        }
        if !outside[0] {
            // Corner of the doubled box should always be outside K.
            return Err(Error::DomainError("flood-fill seed cell is not outside the region".into()));
        }
        let mut seen = vec![false; res * res];
        let mut stack = vec![(0usize, 0usize)];
        seen[0] = true;
        while let Some((i, j)) = stack.pop() {
            let mut visit = |i2: usize, j2: usize, stack: &mut Vec<(usize, usize)>| {
                let idx = j2 * res + i2;
                if outside[idx] && !seen[idx] {
                    seen[idx] = true;
                    stack.push((i2, j2));
                }
            };
            if i > 0 {
                visit(i - 1, j, &mut stack);
            }
            if i + 1 < res {
                visit(i + 1, j, &mut stack);
            }
            if j > 0 {
                visit(i, j - 1, &mut stack);
            }
            if j + 1 < res {
                visit(i, j + 1, &mut stack);
            }
        }
        Ok((0..res * res).all(|idx| !outside[idx] || seen[idx]))
    }
}

fn geometry_hash(components: &[JordanComponent], filaments: &[Filament], points: &[Complex64]) -> String {
    let mut hasher = Sha256::new();
    let push_f64 = |hasher: &mut Sha256, x: f64| hasher.update(x.to_le_bytes());
    for c in components {
        match &c.shape {
            ComponentShape::Disc { center, radius } => {
                hasher.update(b"disc");
                push_f64(&mut hasher, center.re);
                push_f64(&mut hasher, center.im);
                push_f64(&mut hasher, *radius);
            }
            ComponentShape::Polygon { vertices } => {
                hasher.update(b"polygon");
                for v in vertices {
                    push_f64(&mut hasher, v.re);
                    push_f64(&mut hasher, v.im);
                }
            }
            ComponentShape::Starlike { center, cos_coeffs, sin_coeffs } => {
                hasher.update(b"starlike");
                push_f64(&mut hasher, center.re);
                push_f64(&mut hasher, center.im);
                for &a in cos_coeffs {
                    push_f64(&mut hasher, a);
                }
                hasher.update(b"/");
                for &b in sin_coeffs {
                    push_f64(&mut hasher, b);
                }
            }
        }
        hasher.update(b";");
    }
    for f in filaments {
        hasher.update(b"filament");
        for p in f.points() {
            push_f64(&mut hasher, p.re);
            push_f64(&mut hasher, p.im);
        }
        hasher.update(b";");
    }
    for p in points {
        hasher.update(b"point");
        push_f64(&mut hasher, p.re);
        push_f64(&mut hasher, p.im);
        hasher.update(b";");
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(center: (f64, f64), radius: f64) -> JordanComponent {
        JordanComponent::new(0, ComponentShape::Disc {
            center: Complex64::new(center.0, center.1),
            radius,
        })
        .unwrap()
    }

    fn unit_disc_region() -> CompactRegion {
        CompactRegion::new(vec![disc((0.0, 0.0), 1.0)], vec![], vec![]).unwrap()
    }

    fn segment_region() -> CompactRegion {
        let f = Filament::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        CompactRegion::new(vec![], vec![f], vec![]).unwrap()
    }

    fn two_tangent_discs() -> CompactRegion {
        let a = JordanComponent::new(0, ComponentShape::Disc { center: Complex64::new(-1.0, 0.0), radius: 1.0 })
            .unwrap();
        let b = JordanComponent::new(1, ComponentShape::Disc { center: Complex64::new(1.0, 0.0), radius: 1.0 })
            .unwrap();
        CompactRegion::new(vec![a, b], vec![], vec![]).unwrap()
    }

    #[test]
    fn membership_unit_disc() {
        let k = unit_disc_region();
        assert_eq!(k.contains(Complex64::new(0.0, 0.0), 0.0), Membership::Interior);
        assert_eq!(k.contains(Complex64::new(1.0, 0.0), 1e-9), Membership::Boundary);
        assert_eq!(k.contains(Complex64::new(1.5, 0.0), 0.0), Membership::Outside);
    }

    #[test]
    fn filament_samples_match_linspace() {
        let k = segment_region();
        let s = k.boundary_samples(5);
        let expected = [-1.0, -0.5, 0.0, 0.5, 1.0];
        assert_eq!(s.len(), 5);
        for (got, want) in s.iter().zip(expected) {
            assert!((got.re - want).abs() < 1e-12 && got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn exterior_displacement_radial_on_disc() {
        let k = unit_disc_region();
        let z = k.exterior_displacement(Complex64::new(1.0, 0.0), 1e-3).unwrap();
        assert!((z - Complex64::new(1.0 + 1e-3, 0.0)).norm() < 1e-15);
        assert_eq!(k.contains(z, 0.0), Membership::Outside);
    }

    #[test]
    fn exterior_displacement_perpendicular_on_filament() {
        let k = segment_region();
        let z = k.exterior_displacement(Complex64::new(0.0, 0.0), 1e-3).unwrap();
        assert!(z.re.abs() < 1e-15);
        assert!((z.im.abs() - 1e-3).abs() < 1e-15, "expected +-1e-3i, got {z}");
    }

    #[test]
    fn exterior_displacement_escapes_tangency_vertically() {
        let k = two_tangent_discs();
        let z = k.exterior_displacement(Complex64::new(0.0, 0.0), 1e-3).unwrap();
        assert!(z.norm() <= 1e-3 + 1e-15);
        assert_eq!(k.contains(z, 0.0), Membership::Outside);
    }

    #[test]
    fn exterior_displacement_rejects_interior() {
        let k = unit_disc_region();
        assert!(matches!(
            k.exterior_displacement(Complex64::new(0.0, 0.0), 1e-3),
            Err(Error::InteriorZero { .. })
        ));
    }

    #[test]
    fn complement_connected_disc() {
        let k = unit_disc_region();
        assert!(k.complement_connected(64).unwrap());
    }

    #[test]
    fn complement_connected_two_tangent_discs() {
        let k = two_tangent_discs();
        assert!(k.complement_connected(512).unwrap());
    }

    #[test]
    fn complement_disconnected_frame_with_unresolved_slit() {
        // A square frame with a 1e-7-wide slit: topologically the complement
        // is connected, but the slit is far below grid resolution, so the
        // heuristic reports the enclosed pocket as cut off.
        let eps = 1e-7;
        let outer = 2.0;
        let inner = 1.0;
        let vertices = vec![
            Complex64::new(-outer, -outer),
            Complex64::new(outer, -outer),
            Complex64::new(outer, outer),
            Complex64::new(eps, outer),
            Complex64::new(eps, inner),
            Complex64::new(inner, inner),
            Complex64::new(inner, -inner),
            Complex64::new(-inner, -inner),
            Complex64::new(-inner, inner),
            Complex64::new(-eps, inner),
            Complex64::new(-eps, outer),
            Complex64::new(-outer, outer),
        ];
        let frame = JordanComponent::new(0, ComponentShape::Polygon { vertices }).unwrap();
        let k = CompactRegion::new(vec![frame], vec![], vec![]).unwrap();
        assert!(!k.complement_connected(128).unwrap());
    }

    #[test]
    fn boundary_samples_classify_boundary() {
        let k = two_tangent_discs();
        let n = 128;
        let samples = k.boundary_samples(n);
        let spacing = 2.0 * std::f64::consts::PI / n as f64;
        for &z in &samples {
            assert_eq!(k.contains(z, 2.0 * spacing), Membership::Boundary);
        }
    }

    #[test]
    fn overlapping_interiors_rejected() {
        let a = JordanComponent::new(0, ComponentShape::Disc { center: Complex64::new(0.0, 0.0), radius: 1.0 })
            .unwrap();
        let b = JordanComponent::new(1, ComponentShape::Disc { center: Complex64::new(0.5, 0.0), radius: 1.0 })
            .unwrap();
        assert!(CompactRegion::new(vec![a, b], vec![], vec![]).is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let k1 = unit_disc_region();
        let k2 = unit_disc_region();
        assert_eq!(k1.hash(), k2.hash());
        let k3 = CompactRegion::new(vec![disc((0.0, 0.0), 1.5)], vec![], vec![]).unwrap();
        assert_ne!(k1.hash(), k3.hash());
    }
}
