//! Jordan components: discs, simple polygons, and star-like domains given by
//! a Fourier radial profile. Each component caches a dense boundary polyline
//! with a cumulative arclength table; distances and sampling run off that
//! table except where an exact formula exists (discs, polygon segments).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense polyline resolution for curved boundaries. The sagitta of a unit
/// circle at this resolution is ~7e-8, well below the default contact
/// tolerance of 1e-6 * diam(K).
const DENSE_BOUNDARY: usize = 8192;

pub const MIN_AREA: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_re: f64,
    pub min_im: f64,
    pub max_re: f64,
    pub max_im: f64,
}

impl BoundingBox {
    pub fn empty() -> Self {
        BoundingBox {
            min_re: f64::INFINITY,
            min_im: f64::INFINITY,
            max_re: f64::NEG_INFINITY,
            max_im: f64::NEG_INFINITY,
        }
    }

    pub fn include(&mut self, z: Complex64) {
        self.min_re = self.min_re.min(z.re);
        self.min_im = self.min_im.min(z.im);
        self.max_re = self.max_re.max(z.re);
        self.max_im = self.max_im.max(z.im);
    }

    pub fn merge(&mut self, other: &BoundingBox) {
        self.min_re = self.min_re.min(other.min_re);
        self.min_im = self.min_im.min(other.min_im);
        self.max_re = self.max_re.max(other.max_re);
        self.max_im = self.max_im.max(other.max_im);
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.min_re + self.max_re), 0.5 * (self.min_im + self.max_im))
    }

    pub fn diagonal(&self) -> f64 {
        let dre = self.max_re - self.min_re;
        let dim = self.max_im - self.min_im;
        (dre * dre + dim * dim).sqrt()
    }

    /// Box scaled by `factor` about its center.
    pub fn scaled(&self, factor: f64) -> BoundingBox {
        let c = self.center();
        let hw = 0.5 * (self.max_re - self.min_re) * factor;
        let hh = 0.5 * (self.max_im - self.min_im) * factor;
        BoundingBox {
            min_re: c.re - hw,
            min_im: c.im - hh,
            max_re: c.re + hw,
            max_im: c.im + hh,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.min_re && z.re <= self.max_re && z.im >= self.min_im && z.im <= self.max_im
    }
}

/// Distance from `z` to the segment `[a, b]`, plus the nearest point.
pub fn point_segment(z: Complex64, a: Complex64, b: Complex64) -> (f64, Complex64) {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return ((z - a).norm(), a);
    }
    let t = ((z - a).re * ab.re + (z - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    let p = a + ab * t;
    ((z - p).norm(), p)
}

/// Proper or touching intersection test for segments `[a,b]` and `[c,d]`.
fn segments_intersect(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    fn orient(p: Complex64, q: Complex64, r: Complex64) -> f64 {
        (q.re - p.re) * (r.im - p.im) - (q.im - p.im) * (r.re - p.re)
    }
    fn on_segment(p: Complex64, q: Complex64, r: Complex64) -> bool {
        q.re <= p.re.max(r.re) && q.re >= p.re.min(r.re) && q.im <= p.im.max(r.im) && q.im >= p.im.min(r.im)
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0)) && o1 != 0.0 && o2 != 0.0 && o3 != 0.0 && o4 != 0.0 {
        return true;
    }
    (o1 == 0.0 && on_segment(a, c, b))
        || (o2 == 0.0 && on_segment(a, d, b))
        || (o3 == 0.0 && on_segment(c, a, d))
        || (o4 == 0.0 && on_segment(c, b, d))
}

fn shoelace(points: &[Complex64]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        acc += a.re * b.im - b.re * a.im;
    }
    0.5 * acc
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentShape {
    Disc { center: Complex64, radius: f64 },
    Polygon { vertices: Vec<Complex64> },
    Starlike { center: Complex64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64> },
}

impl ComponentShape {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ComponentShape::Disc { .. } => "disc",
            ComponentShape::Polygon { .. } => "polygon",
            ComponentShape::Starlike { .. } => "starlike",
        }
    }
}

/// Radial profile of a star-like shape at angle `theta`.
pub fn starlike_radius(cos_coeffs: &[f64], sin_coeffs: &[f64], theta: f64) -> f64 {
    let mut r = 0.0;
    for (k, a) in cos_coeffs.iter().enumerate() {
        r += a * (k as f64 * theta).cos();
    }
    for (k, b) in sin_coeffs.iter().enumerate() {
        r += b * ((k + 1) as f64 * theta).sin();
    }
    r
}

/// Derivative of the radial profile.
pub fn starlike_radius_prime(cos_coeffs: &[f64], sin_coeffs: &[f64], theta: f64) -> f64 {
    let mut d = 0.0;
    for (k, a) in cos_coeffs.iter().enumerate().skip(1) {
        d -= a * k as f64 * (k as f64 * theta).sin();
    }
    for (k, b) in sin_coeffs.iter().enumerate() {
        let m = (k + 1) as f64;
        d += b * m * (m * theta).cos();
    }
    d
}

#[derive(Debug, Clone)]
pub struct JordanComponent {
    pub id: u32,
    pub shape: ComponentShape,
    /// Closed dense polyline, positively oriented; wraps around.
    polyline: Vec<Complex64>,
    /// Cumulative arclength over the polyline, length `polyline.len() + 1`.
    cumlen: Vec<f64>,
    area: f64,
    bbox: BoundingBox,
    /// cos of the max angle between the radial direction and the boundary
    /// normal; turns the radial gap into a distance lower bound for
    /// star-like shapes (1.0 for discs, unused for polygons).
    radial_cone_factor: f64,
}

impl JordanComponent {
    pub fn new(id: u32, shape: ComponentShape) -> Result<Self> {
        let polyline = match &shape {
            ComponentShape::Disc { center, radius } => {
                if !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidRegion(format!(
                        "component {id}: disc radius must be positive, got {radius}"
                    )));
                }
                (0..DENSE_BOUNDARY)
                    .map(|k| {
                        let t = 2.0 * std::f64::consts::PI * k as f64 / DENSE_BOUNDARY as f64;
                        center + Complex64::from_polar(*radius, t)
                    })
                    .collect()
            }
            ComponentShape::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidRegion(format!(
                        "component {id}: polygon needs at least 3 vertices"
                    )));
                }
                let mut vs = vertices.clone();
                if shoelace(&vs) < 0.0 {
                    vs.reverse();
                }
                // Simplicity: no two non-adjacent edges may intersect.
                let n = vs.len();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                        if adjacent {
                            continue;
                        }
                        if segments_intersect(vs[i], vs[(i + 1) % n], vs[j], vs[(j + 1) % n]) {
                            return Err(Error::InvalidRegion(format!(
                                "component {id}: polygon edges {i} and {j} intersect; boundary must be a simple closed curve"
                            )));
                        }
                    }
                }
                vs
            }
            ComponentShape::Starlike { center, cos_coeffs, sin_coeffs } => {
                if cos_coeffs.is_empty() {
                    return Err(Error::InvalidRegion(format!(
                        "component {id}: starlike profile needs at least the constant term"
                    )));
                }
                let mut pts = Vec::with_capacity(DENSE_BOUNDARY);
                for k in 0..DENSE_BOUNDARY {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / DENSE_BOUNDARY as f64;
                    let r = starlike_radius(cos_coeffs, sin_coeffs, t);
                    if !r.is_finite() || r <= 0.0 {
                        return Err(Error::InvalidRegion(format!(
                            "component {id}: starlike radius nonpositive at theta = {t:.4}"
                        )));
                    }
                    pts.push(center + Complex64::from_polar(r, t));
                }
                pts
            }
        };

        let area = match &shape {
            ComponentShape::Disc { radius, .. } => std::f64::consts::PI * radius * radius,
            _ => shoelace(&polyline),
        };
        if area <= MIN_AREA {
            return Err(Error::InvalidRegion(format!(
                "component {id}: enclosed area {area:.3e} below minimum {MIN_AREA:.0e}"
            )));
        }

        let mut cumlen = Vec::with_capacity(polyline.len() + 1);
        cumlen.push(0.0);
        for i in 0..polyline.len() {
            let a = polyline[i];
            let b = polyline[(i + 1) % polyline.len()];
            cumlen.push(cumlen[i] + (b - a).norm());
        }

        let mut bbox = BoundingBox::empty();
        for &p in &polyline {
            bbox.include(p);
        }

        let radial_cone_factor = match &shape {
            ComponentShape::Disc { .. } => 1.0,
            ComponentShape::Polygon { .. } => 0.0,
            ComponentShape::Starlike { center: _, cos_coeffs, sin_coeffs } => {
                let mut max_slope = 0.0f64;
                for k in 0..DENSE_BOUNDARY {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / DENSE_BOUNDARY as f64;
                    let r = starlike_radius(cos_coeffs, sin_coeffs, t);
                    let rp = starlike_radius_prime(cos_coeffs, sin_coeffs, t);
                    max_slope = max_slope.max((rp / r).abs());
                }
                1.0 / (1.0 + max_slope * max_slope).sqrt()
            }
        };

        Ok(JordanComponent { id, shape, polyline, cumlen, area, bbox, radial_cone_factor })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn bbox(&self) -> &BoundingBox {
        &self.bbox
    }

    pub fn perimeter(&self) -> f64 {
        *self.cumlen.last().expect("cumlen nonempty")
    }

    pub fn polyline(&self) -> &[Complex64] {
        &self.polyline
    }

    /// Anchor used to normalize conformal maps: the disc/starlike center, or
    /// the polygon vertex centroid.
    pub fn anchor(&self) -> Complex64 {
        match &self.shape {
            ComponentShape::Disc { center, .. } => *center,
            ComponentShape::Starlike { center, .. } => *center,
            ComponentShape::Polygon { vertices } => {
                vertices.iter().sum::<Complex64>() / vertices.len() as f64
            }
        }
    }

    /// Strict interior test (boundary excluded up to floating point).
    pub fn interior_contains(&self, z: Complex64) -> bool {
        match &self.shape {
            ComponentShape::Disc { center, radius } => (z - center).norm() < *radius,
            ComponentShape::Starlike { center, cos_coeffs, sin_coeffs } => {
                let d = z - center;
                let r = d.norm();
                if r == 0.0 {
                    return true;
                }
                r < starlike_radius(cos_coeffs, sin_coeffs, d.arg())
            }
            ComponentShape::Polygon { .. } => {
                if !self.bbox.contains(z) {
                    return false;
                }
                // Even-odd ray cast to the right; half-open edge intervals
                // avoid double-counting shared vertices.
                let vs = &self.polyline;
                let n = vs.len();
                let mut crossings = 0usize;
                for i in 0..n {
                    let a = vs[i];
                    let b = vs[(i + 1) % n];
                    if a.im == b.im {
                        continue;
                    }
                    let (lo, hi) = if a.im < b.im { (a.im, b.im) } else { (b.im, a.im) };
                    if z.im < lo || z.im >= hi {
                        continue;
                    }
                    let t = (z.im - a.im) / (b.im - a.im);
                    let x = a.re + t * (b.re - a.re);
                    if x > z.re {
                        crossings += 1;
                    }
                }
                crossings % 2 == 1
            }
        }
    }

    /// Distance from `z` to the boundary curve.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match &self.shape {
            ComponentShape::Disc { center, radius } => ((z - center).norm() - radius).abs(),
            ComponentShape::Polygon { .. } | ComponentShape::Starlike { .. } => {
                let vs = &self.polyline;
                let n = vs.len();
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let (d, _) = point_segment(z, vs[i], vs[(i + 1) % n]);
                    best = best.min(d);
                }
                best
            }
        }
    }

    /// Boundary distance with an early exit: any return value strictly above
    /// `cutoff` certifies the true distance also exceeds `cutoff`. Turns
    /// membership grids over star-like shapes from polyline scans into O(1)
    /// radial-gap checks.
    pub fn boundary_distance_bounded(&self, z: Complex64, cutoff: f64) -> f64 {
        match &self.shape {
            ComponentShape::Disc { center, radius } => ((z - center).norm() - radius).abs(),
            ComponentShape::Starlike { center, cos_coeffs, sin_coeffs } => {
                let d = z - center;
                let rho = d.norm();
                let theta = if rho == 0.0 { 0.0 } else { d.arg() };
                let gap = (rho - starlike_radius(cos_coeffs, sin_coeffs, theta)).abs();
                let lower = gap * self.radial_cone_factor;
                if lower > cutoff {
                    lower
                } else {
                    self.boundary_distance(z)
                }
            }
            ComponentShape::Polygon { .. } => self.boundary_distance(z),
        }
    }

    /// Nearest boundary point and the outward unit normal there.
    pub fn nearest_boundary(&self, z: Complex64) -> (Complex64, Complex64) {
        match &self.shape {
            ComponentShape::Disc { center, radius } => {
                let d = z - center;
                let u = if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() };
                (center + u * *radius, u)
            }
            ComponentShape::Polygon { .. } | ComponentShape::Starlike { .. } => {
                let vs = &self.polyline;
                let n = vs.len();
                let mut best = (f64::INFINITY, vs[0], Complex64::new(1.0, 0.0));
                for i in 0..n {
                    let a = vs[i];
                    let b = vs[(i + 1) % n];
                    let (d, p) = point_segment(z, a, b);
                    if d < best.0 {
                        let dir = b - a;
                        let len = dir.norm();
                        // Positive orientation: outward normal is the
                        // tangent rotated by -90 degrees.
                        let normal = if len == 0.0 {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(dir.im / len, -dir.re / len)
                        };
                        best = (d, p, normal);
                    }
                }
                (best.1, best.2)
            }
        }
    }

    /// Point at arclength fraction `t` in [0, 1) along the boundary.
    pub fn boundary_point(&self, t: f64) -> Complex64 {
        match &self.shape {
            ComponentShape::Disc { center, radius } => {
                center + Complex64::from_polar(*radius, 2.0 * std::f64::consts::PI * t)
            }
            _ => {
                let total = self.perimeter();
                let target = (t.rem_euclid(1.0)) * total;
                // cumlen is sorted; binary search for the segment.
                let idx = match self.cumlen.binary_search_by(|x| x.partial_cmp(&target).expect("finite")) {
                    Ok(i) => i.min(self.polyline.len() - 1),
                    Err(i) => i.saturating_sub(1).min(self.polyline.len() - 1),
                };
                let a = self.polyline[idx];
                let b = self.polyline[(idx + 1) % self.polyline.len()];
                let seg = self.cumlen[idx + 1] - self.cumlen[idx];
                let frac = if seg == 0.0 { 0.0 } else { (target - self.cumlen[idx]) / seg };
                a + (b - a) * frac
            }
        }
    }

    /// `n` arclength-equidistributed boundary samples starting at t = 0.
    pub fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        (0..n).map(|k| self.boundary_point(k as f64 / n as f64)).collect()
    }

    /// Interior grid samples at the given per-axis resolution.
    pub fn interior_samples(&self, resolution: usize) -> Vec<Complex64> {
        let mut out = Vec::new();
        let res = resolution.max(2);
        for i in 0..res {
            for j in 0..res {
                let x = self.bbox.min_re
                    + (self.bbox.max_re - self.bbox.min_re) * (i as f64 + 0.5) / res as f64;
                let y = self.bbox.min_im
                    + (self.bbox.max_im - self.bbox.min_im) * (j as f64 + 0.5) / res as f64;
                let z = Complex64::new(x, y);
                if self.interior_contains(z) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// Exact closure distance to another component where geometry allows,
    /// dense polyline distance otherwise. Also returns the nearest pair.
    pub fn closure_distance(&self, other: &JordanComponent) -> (f64, Complex64, Complex64) {
        if let (ComponentShape::Disc { center: c1, radius: r1 }, ComponentShape::Disc { center: c2, radius: r2 }) =
            (&self.shape, &other.shape)
        {
            let d = (c2 - c1).norm();
            if d == 0.0 {
                return (0.0, *c1, *c2);
            }
            let u = (c2 - c1) / d;
            let a = c1 + u * *r1;
            let b = c2 - u * *r2;
            return ((d - r1 - r2).max(0.0), a, b);
        }
        let mut best = (f64::INFINITY, self.polyline[0], other.polyline[0]);
        let pa = &self.polyline;
        let pb = &other.polyline;
        for &p in pa {
            let n = pb.len();
            for i in 0..n {
                let (d, q) = point_segment(p, pb[i], pb[(i + 1) % n]);
                if d < best.0 {
                    best = (d, p, q);
                }
            }
        }
        for &p in pb {
            let n = pa.len();
            for i in 0..n {
                let (d, q) = point_segment(p, pa[i], pa[(i + 1) % n]);
                if d < best.0 {
                    best = (d, q, p);
                }
            }
        }
        best
    }

    /// All touch loci against `other` within `tol`: midpoints of close
    /// boundary pairs, clustered so separated loci can be detected.
    pub fn touch_loci(&self, other: &JordanComponent, tol: f64) -> Vec<Complex64> {
        let mut midpoints: Vec<Complex64> = Vec::new();
        if let (ComponentShape::Disc { .. }, ComponentShape::Disc { .. }) = (&self.shape, &other.shape) {
            let (d, a, b) = self.closure_distance(other);
            if d <= tol {
                midpoints.push((a + b) * 0.5);
            }
        } else {
            let pb = &other.polyline;
            let n = pb.len();
            // Stride the scan; the polyline is much denser than any
            // realistic touching locus.
            for &p in self.polyline.iter().step_by(8) {
                let mut best = (f64::INFINITY, pb[0]);
                for i in 0..n {
                    let (d, q) = point_segment(p, pb[i], pb[(i + 1) % n]);
                    if d < best.0 {
                        best = (d, q);
                    }
                }
                if best.0 <= tol {
                    midpoints.push((p + best.1) * 0.5);
                }
            }
        }
        // Cluster by single linkage with threshold 100 * tol.
        let mut clusters: Vec<Complex64> = Vec::new();
        for m in midpoints {
            if !clusters.iter().any(|c| (c - m).norm() <= 100.0 * tol) {
                clusters.push(m);
            }
        }
        clusters
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_disc() -> JordanComponent {
        JordanComponent::new(0, ComponentShape::Disc { center: Complex64::new(0.0, 0.0), radius: 1.0 }).unwrap()
    }

    #[test]
    fn disc_membership_and_distance() {
        let d = unit_disc();
        assert!(d.interior_contains(Complex64::new(0.0, 0.0)));
        assert!(!d.interior_contains(Complex64::new(1.5, 0.0)));
        assert!((d.boundary_distance(Complex64::new(1.0, 0.0))).abs() < 1e-15);
        assert!((d.boundary_distance(Complex64::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disc_boundary_samples_gap() {
        let d = unit_disc();
        let s = d.boundary_samples(4);
        assert_eq!(s.len(), 4);
        for k in 0..4 {
            let gap = (s[(k + 1) % 4] - s[k]).norm();
            let expected = (std::f64::consts::PI / 2.0).sin() * 2.0 * (0.5f64).sqrt() * (0.5f64).sqrt();
            // chord of a quarter arc = sqrt(2)
            assert!((gap - std::f64::consts::SQRT_2).abs() < 1e-9, "gap {gap} expected sqrt2 {expected}");
        }
    }

    #[test]
    fn polygon_simplicity_rejected() {
        // Bowtie: self-intersecting.
        let shape = ComponentShape::Polygon {
            vertices: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
            ],
        };
        assert!(JordanComponent::new(0, shape).is_err());
    }

    #[test]
    fn polygon_orientation_normalized() {
        // Clockwise square still builds, and membership works.
        let shape = ComponentShape::Polygon {
            vertices: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(1.0, 0.0),
            ],
        };
        let p = JordanComponent::new(0, shape).unwrap();
        assert!(p.area() > 0.0);
        assert!(p.interior_contains(Complex64::new(0.5, 0.5)));
        assert!(!p.interior_contains(Complex64::new(1.5, 0.5)));
    }

    #[test]
    fn degenerate_area_rejected() {
        let shape = ComponentShape::Polygon {
            vertices: vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(2.0, 0.0),
            ],
        };
        assert!(JordanComponent::new(0, shape).is_err());
    }

    #[test]
    fn starlike_arclength_equidistribution() {
        // r(theta) = 1 + 0.2 cos 2theta; max gap <= 1.5x mean gap.
        let s = JordanComponent::new(
            0,
            ComponentShape::Starlike {
                center: Complex64::new(0.0, 0.0),
                cos_coeffs: vec![1.0, 0.0, 0.2],
                sin_coeffs: vec![],
            },
        )
        .unwrap();
        let pts = s.boundary_samples(256);
        let gaps: Vec<f64> = (0..256).map(|k| (pts[(k + 1) % 256] - pts[k]).norm()).collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        let max = gaps.iter().cloned().fold(0.0, f64::max);
        assert!(max <= 1.5 * mean, "max gap {max:.5} vs mean {mean:.5}");
    }

    #[test]
    fn tangent_disc_distance_is_exact() {
        let a = unit_disc();
        let b = JordanComponent::new(1, ComponentShape::Disc { center: Complex64::new(2.0, 0.0), radius: 1.0 })
            .unwrap();
        let (d, pa, pb) = a.closure_distance(&b);
        assert!(d.abs() < 1e-15);
        assert!((pa - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((pb - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn nearest_boundary_normal_points_outward() {
        let d = unit_disc();
        let (p, n) = d.nearest_boundary(Complex64::new(0.5, 0.0));
        assert!((p - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((n - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
