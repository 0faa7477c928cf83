//! The end-to-end constructions: dilate f through the conformal map until
//! boundary zeros clear the closure, extend to all of K, fit a polynomial,
//! and nudge any remaining on-K zeros just outside. Multi-component regions
//! are glued over their component trees first.

use std::sync::Arc;

use num_complex::Complex64;

use crate::conformal::{disc_to_domain, ConformalMap, DilatedMap};
use crate::error::{Error, Result};
use crate::poly::{self, ComplexPolynomial, RootSet};
use crate::region::{build_component_trees, CompactRegion, Membership};

use super::fit::bounding_circle;
use super::glue::glue_components_impl;
use super::report::{ApproximationReport, GlueSummary, StageEntry};
use super::target::TargetFunction;

const XI_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub degree_cap: usize,
    /// Fit samples per boundary element.
    pub fit_samples: usize,
    /// Verification samples per component boundary (and per filament).
    pub boundary_samples: usize,
    /// Per-axis interior grid resolution, per component.
    pub interior_resolution: usize,
    /// Grid resolution of the complement connectivity check.
    pub complement_resolution: usize,
    /// Contact tolerance for tree building; 0 means 1e-6 * diam(K).
    pub contact_tol: f64,
    /// Recorded in reports; the pipelines themselves are deterministic.
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            degree_cap: poly::DEGREE_CAP,
            fit_samples: 256,
            boundary_samples: 2048,
            interior_resolution: 128,
            complement_resolution: 256,
            contact_tol: 0.0,
            seed: 0,
        }
    }
}

/// Lowest-id component whose closure contains `z`, if any.
fn closure_owner(region: &CompactRegion, z: Complex64) -> Option<usize> {
    let ctol = 1e-12 * (1.0 + region.diameter());
    region
        .components
        .iter()
        .position(|c| c.interior_contains(z) || c.boundary_distance_bounded(z, ctol) <= ctol)
}

/// Closure-sample cache for one single-component region: boundary plus
/// interior grid, with conformal preimages resolved once.
struct ClosureCache {
    f_values: Vec<Complex64>,
    preimages: Vec<Complex64>,
}

fn closure_cache(
    f: &TargetFunction,
    map: &ConformalMap,
    region: &CompactRegion,
    cfg: &PipelineConfig,
) -> Result<ClosureCache> {
    let mut points = Vec::new();
    for c in &region.components {
        points.extend(c.boundary_samples(cfg.boundary_samples));
        points.extend(c.interior_samples(cfg.interior_resolution));
    }
    let f_values = points.iter().map(|&z| f.eval(z)).collect();
    let preimages = points
        .iter()
        .map(|&z| map.inverse(z))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClosureCache { f_values, preimages })
}

/// Smallest xi in the halving sequence 1/2, 1/4, ... whose dilation gap
/// sup |H - f| on the component closure meets the budget. Returns (xi, gap).
pub fn choose_xi(
    f: &TargetFunction,
    map: &Arc<ConformalMap>,
    region: &CompactRegion,
    budget: f64,
) -> Result<(f64, f64)> {
    choose_xi_with(f, map, region, budget, &PipelineConfig::default())
}

pub fn choose_xi_with(
    f: &TargetFunction,
    map: &Arc<ConformalMap>,
    region: &CompactRegion,
    budget: f64,
    cfg: &PipelineConfig,
) -> Result<(f64, f64)> {
    if !(budget > 0.0) {
        return Err(Error::DomainError(format!("dilation budget must be positive, got {budget}")));
    }
    let cache = closure_cache(f, map, region, cfg)?;
    let mut xi = 0.5;
    let mut best_gap = f64::INFINITY;
    while xi >= XI_FLOOR {
        let mut gap = 0.0f64;
        for (u, fv) in cache.preimages.iter().zip(&cache.f_values) {
            let h = f.eval(map.forward(u * (1.0 - xi)));
            gap = gap.max((h - fv).norm());
        }
        if gap <= budget {
            return Ok((xi, gap));
        }
        best_gap = best_gap.min(gap);
        xi *= 0.5;
    }
    Err(Error::XiUnderflow { limit: XI_FLOOR, budget, gap: best_gap })
}

/// H(z) = f(phi((1 - xi) phi^{-1}(z))): nonvanishing on the closure whenever
/// f is nonvanishing in the open component.
pub fn dilate(f: &TargetFunction, map: &Arc<ConformalMap>, xi: f64) -> Result<TargetFunction> {
    let kernel = DilatedMap::new(Arc::clone(map), xi)?;
    let inner = f.clone();
    Ok(TargetFunction::custom("dilated", move |z| match kernel.eval(z) {
        Ok(w) => inner.eval(w),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }))
}

/// Continuous extension by nearest-point projection: on the closures the
/// parts win verbatim; elsewhere the value is taken at the nearest closure
/// point, ties resolved toward the lowest component id.
pub fn tietze_extend(parts: &[(usize, TargetFunction)], region: &CompactRegion) -> TargetFunction {
    let mut sorted: Vec<(usize, TargetFunction)> = parts.to_vec();
    sorted.sort_by_key(|(i, _)| *i);
    join_parts(sorted, region)
}

/// Internal form of the extension; assumes parts sorted by component index.
pub(crate) fn join_parts(parts: Vec<(usize, TargetFunction)>, region: &CompactRegion) -> TargetFunction {
    let region = Arc::new(region.clone());
    let parts = Arc::new(parts);
    TargetFunction::custom("extended", move |z| {
        if let Some(owner) = closure_owner(&region, z) {
            if let Some((_, part)) = parts.iter().find(|(i, _)| *i == owner) {
                return part.eval(z);
            }
        }
        let mut best: Option<(f64, usize, Complex64)> = None;
        for (i, _) in parts.iter() {
            let (p, _) = region.components[*i].nearest_boundary(z);
            let d = (z - p).norm();
            if best.map(|(bd, _, _)| d < bd).unwrap_or(true) {
                best = Some((d, *i, p));
            }
        }
        match best {
            Some((_, i, p)) => {
                parts.iter().find(|(j, _)| *j == i).expect("index present").1.eval(p)
            }
            None => Complex64::new(f64::NAN, f64::NAN),
        }
    })
}

/// Replaces every root of `p` classified on the boundary of K by a nearby
/// exterior point, halving the displacement until the reconstruction stays
/// within `budget` of `p` on the samples. Roots strictly inside K are fatal;
/// roots already outside are untouched. When nothing needs nudging the input
/// is returned unchanged.
pub fn nudge_zeros(
    p: &ComplexPolynomial,
    region: &CompactRegion,
    delta_step: f64,
    budget: f64,
) -> Result<ComplexPolynomial> {
    if !(delta_step > 0.0) || !(budget > 0.0) {
        return Err(Error::DomainError("nudge step and budget must be positive".into()));
    }
    let cfg = PipelineConfig::default();
    let mut pts = region.boundary_samples(cfg.boundary_samples);
    pts.extend(region.interior_samples(cfg.interior_resolution));
    let p_vals: Vec<Complex64> = pts.iter().map(|&z| p.eval(z)).collect();
    let (nudged, _) = nudge_worker(p, region, budget, &pts, &p_vals, Some(delta_step))?;
    Ok(nudged)
}

fn nudge_worker(
    p: &ComplexPolynomial,
    region: &CompactRegion,
    budget: f64,
    pts: &[Complex64],
    p_vals: &[Complex64],
    delta_start: Option<f64>,
) -> Result<(ComplexPolynomial, f64)> {
    if p.degree() == 0 {
        if p.is_zero() {
            // The identically-zero fit still admits a nonvanishing
            // approximation within any positive budget.
            let c = ComplexPolynomial::constant(Complex64::new(budget / 2.0, 0.0));
            return Ok((c, budget / 2.0));
        }
        return Ok((p.clone(), 0.0));
    }
    let roots = poly::find_roots(p)?;
    let boundary_tol = region.boundary_classification_tol();
    let mut to_nudge: Vec<usize> = Vec::new();
    for (k, &r) in roots.roots.iter().enumerate() {
        match region.contains(r, boundary_tol) {
            Membership::Interior => return Err(Error::InteriorZero { z: r }),
            Membership::Boundary => to_nudge.push(k),
            Membership::Outside => {}
        }
    }
    if to_nudge.is_empty() {
        return Ok((p.clone(), 0.0));
    }

    // Initial displacement from measured root sensitivities: moving root k by
    // delta changes p by at most delta * sup |p(z)/(z - r_k)| on the samples.
    let lead = roots.leading_coefficient.norm();
    let mut sensitivity = 0.0f64;
    for &k in &to_nudge {
        let mut s = 0.0f64;
        for &z in pts {
            let mut prod = lead;
            for (j, &rj) in roots.roots.iter().enumerate() {
                if j != k {
                    prod *= (z - rj).norm();
                }
            }
            s = s.max(prod);
        }
        sensitivity += s;
    }
    let mut delta = delta_start.unwrap_or_else(|| {
        if sensitivity > 0.0 {
            (0.1 * budget / sensitivity).min(0.05 * region.diameter())
        } else {
            0.05 * region.diameter()
        }
    });

    for _ in 0..60 {
        let mut displaced = roots.roots.clone();
        for &k in &to_nudge {
            displaced[k] = region.exterior_displacement(roots.roots[k], delta)?;
        }
        let candidate =
            poly::from_roots(&RootSet { roots: displaced, leading_coefficient: roots.leading_coefficient });
        let gap = pts
            .iter()
            .zip(p_vals)
            .map(|(&z, &pv)| (candidate.eval(z) - pv).norm())
            .fold(0.0, f64::max);
        if gap <= budget {
            // Certificate: dense minimum plus root classification must agree.
            let min_modulus = pts.iter().map(|&z| candidate.eval(z).norm()).fold(f64::INFINITY, f64::min);
            let verified = poly::find_roots(&candidate)?
                .roots
                .iter()
                .all(|&r| region.contains(r, 0.0) == Membership::Outside);
            if min_modulus > 0.0 && verified {
                return Ok((candidate, gap));
            }
            return Err(Error::NonvanishingCheckFailed(format!(
                "nudged polynomial failed its certificate (min modulus {min_modulus:.3e}, roots outside: {verified})"
            )));
        }
        delta *= 0.5;
    }
    Err(Error::NonvanishingCheckFailed(format!(
        "nudge displacement underflowed without meeting budget {budget:.3e}"
    )))
}

/// Theorem-5 entry point: K must have exactly one interior component (plus
/// optional filaments and points).
pub fn approx_jordan(f: &TargetFunction, region: &CompactRegion, epsilon: f64) -> Result<ApproximationReport> {
    approx_jordan_with(f, region, epsilon, &PipelineConfig::default())
}

pub fn approx_jordan_with(
    f: &TargetFunction,
    region: &CompactRegion,
    epsilon: f64,
    cfg: &PipelineConfig,
) -> Result<ApproximationReport> {
    if region.components.len() != 1 {
        return Err(Error::DomainError(format!(
            "approx_jordan needs exactly one component, region has {}",
            region.components.len()
        )));
    }
    run_pipeline(f, region, epsilon, cfg)
}

/// The general orchestrator: decomposes the interior into component trees,
/// glues, extends, fits, and nudges. Empty-interior regions skip straight to
/// fit plus nudge.
pub fn nonvanishing_approx(
    f: &TargetFunction,
    region: &CompactRegion,
    epsilon: f64,
) -> Result<ApproximationReport> {
    run_pipeline(f, region, epsilon, &PipelineConfig::default())
}

pub fn nonvanishing_approx_with(
    f: &TargetFunction,
    region: &CompactRegion,
    epsilon: f64,
    cfg: &PipelineConfig,
) -> Result<ApproximationReport> {
    run_pipeline(f, region, epsilon, cfg)
}

fn run_pipeline(
    f: &TargetFunction,
    region: &CompactRegion,
    epsilon: f64,
    cfg: &PipelineConfig,
) -> Result<ApproximationReport> {
    if !(epsilon > 0.0) {
        return Err(Error::DomainError(format!("epsilon must be positive, got {epsilon}")));
    }
    f.validate_for_region(region)?;

    // Interior nonvanishing precondition (grid check; the declared flag on
    // the target is advisory only).
    for z in region.interior_samples(cfg.interior_resolution) {
        if f.eval(z).norm() == 0.0 {
            return Err(Error::NonvanishingCheckFailed(format!(
                "target vanishes at interior grid point {z}"
            )));
        }
    }

    let trees = if region.has_interior() {
        build_component_trees(region, cfg.contact_tol)?
    } else {
        Vec::new()
    };
    if !region.complement_connected(cfg.complement_resolution)? {
        return Err(Error::ComplementDisconnected { resolution: cfg.complement_resolution });
    }

    // Verification sample set and target values.
    let mut pts = region.boundary_samples(cfg.boundary_samples);
    pts.extend(region.interior_samples(cfg.interior_resolution));
    let f_vals: Vec<Complex64> = pts.iter().map(|&z| f.eval(z)).collect();
    let owners: Vec<Option<usize>> = pts.iter().map(|&z| closure_owner(region, z)).collect();
    let has_glued_tree = trees.iter().any(|t| t.node_count() > 1);

    // Multi-component trees may need a smaller xi_glue when the outer fit
    // cannot resolve the glued seams at the degree cap.
    let mut xi_glue_start = epsilon / 3.0;
    let mut last_error: Option<Error> = None;
    for _attempt in 0..6 {
        match pipeline_attempt(
            f, region, epsilon, cfg, &trees, &pts, &f_vals, &owners, xi_glue_start,
        ) {
            Ok(report) => return Ok(report),
            Err(e @ Error::DegreeCapExceeded { .. }) if has_glued_tree => {
                xi_glue_start *= 0.25;
                last_error = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_error.expect("loop exits early unless an error was recorded"))
}

#[allow(clippy::too_many_arguments)]
fn pipeline_attempt(
    f: &TargetFunction,
    region: &CompactRegion,
    epsilon: f64,
    cfg: &PipelineConfig,
    trees: &[crate::region::ComponentTree],
    pts: &[Complex64],
    f_vals: &[Complex64],
    owners: &[Option<usize>],
    xi_glue_start: f64,
) -> Result<ApproximationReport> {
    let budget_stage = epsilon / 3.0;

    // Closure approximant per tree: plain dilation for single components,
    // glued approximants otherwise.
    let mut parts: Vec<(usize, TargetFunction)> = Vec::new();
    let mut xi_used: Option<f64> = None;
    let mut glue_summary: Option<GlueSummary> = None;
    for tree in trees {
        if tree.node_count() == 1 {
            let idx = region
                .components
                .iter()
                .position(|c| c.id == tree.root)
                .ok_or_else(|| Error::InvalidRegion(format!("tree root {} missing", tree.root)))?;
            let comp_region =
                CompactRegion::new(vec![region.components[idx].clone()], vec![], vec![])?;
            let map = Arc::new(disc_to_domain(&region.components[idx])?);
            let (xi, _gap) = choose_xi_with(f, &map, &comp_region, budget_stage, cfg)?;
            parts.push((idx, dilate(f, &map, xi)?));
            if region.components.len() == 1 {
                xi_used = Some(xi);
            }
        } else {
            let outcome = glue_components_impl(f, region, tree, epsilon, cfg, xi_glue_start)?;
            let summary = GlueSummary {
                xi_glue: outcome.state.xi_glue,
                c_max: outcome.state.c_max,
                delta_contact: outcome.state.delta_contact,
                rescale_factors: outcome
                    .state
                    .tree
                    .order
                    .iter()
                    .map(|id| {
                        let l = outcome.state.rescale_factors[id];
                        [l.re, l.im]
                    })
                    .collect(),
                contact_points: outcome
                    .state
                    .tree
                    .order
                    .iter()
                    .skip(1)
                    .map(|id| {
                        let z = outcome.state.tree.contact_points[id];
                        [z.re, z.im]
                    })
                    .collect(),
                continuity_residual: outcome.state.continuity_residual,
            };
            glue_summary = match glue_summary.take() {
                None => Some(summary),
                Some(mut acc) => {
                    acc.xi_glue = acc.xi_glue.max(summary.xi_glue);
                    acc.delta_contact = acc.delta_contact.min(summary.delta_contact);
                    acc.rescale_factors.extend(summary.rescale_factors);
                    acc.contact_points.extend(summary.contact_points);
                    acc.continuity_residual = acc.continuity_residual.max(summary.continuity_residual);
                    Some(acc)
                }
            };
            parts.extend(outcome.parts);
        }
    }
    parts.sort_by_key(|(i, _)| *i);

    // Extension to all of K, in difference form so the eps/3 bound survives
    // off the closures: H_ext = f + Tietze(H - f).
    let h_ext: TargetFunction = if parts.is_empty() {
        f.clone()
    } else {
        let f_inner = f.clone();
        let diff_parts: Vec<(usize, TargetFunction)> = parts
            .iter()
            .map(|(i, part)| {
                let part = part.clone();
                let f_local = f_inner.clone();
                (*i, TargetFunction::custom("closure_difference", move |z| part.eval(z) - f_local.eval(z)))
            })
            .collect();
        let extension = join_parts(diff_parts, region);
        let f_outer = f.clone();
        TargetFunction::custom("extended_target", move |z| f_outer.eval(z) + extension.eval(z))
    };

    let h_vals: Vec<Complex64> = pts.iter().map(|&z| h_ext.eval(z)).collect();
    let dilation_gap = h_vals
        .iter()
        .zip(f_vals)
        .map(|(h, f)| (h - f).norm())
        .fold(0.0, f64::max);

    // delta = min |H| over closure samples; the fit budget keeps P zero-free
    // on the closures.
    let delta_used: Option<f64> = if parts.is_empty() {
        None
    } else {
        let d = pts
            .iter()
            .zip(&h_vals)
            .zip(owners)
            .filter(|(_, o)| o.is_some())
            .map(|((_, h), _)| h.norm())
            .fold(f64::INFINITY, f64::min);
        if !(d > 0.0) {
            return Err(Error::NonvanishingCheckFailed(
                "dilated target vanishes on a closure sample".into(),
            ));
        }
        Some(d)
    };

    // Pointwise fit budgets. Single-component and empty-interior regions use
    // the uniform min(eps/3, delta/2); glued regions relax to the pointwise
    // min(eps/3, |H(z)|/2) on closures, which keeps P zero-free there while
    // staying attainable across the contact seams.
    let glued = trees.iter().any(|t| t.node_count() > 1);
    let allowed: Vec<f64> = pts
        .iter()
        .enumerate()
        .map(|(i, _)| match (glued, owners[i], delta_used) {
            (true, Some(_), _) => budget_stage.min(h_vals[i].norm() / 2.0),
            (false, _, Some(d)) => budget_stage.min(d / 2.0),
            _ => budget_stage,
        })
        .collect();

    // Fit sample set with matching pointwise budgets.
    let fit_pts = region.boundary_samples(cfg.fit_samples.max(4));
    let fit_vals: Vec<Complex64> = fit_pts.iter().map(|&z| h_ext.eval(z)).collect();
    let fit_allowed: Vec<f64> = fit_pts
        .iter()
        .zip(&fit_vals)
        .map(|(&z, h)| match (glued, closure_owner(region, z), delta_used) {
            (true, Some(_), _) => budget_stage.min(h.norm() / 2.0).max(1e-300),
            (false, _, Some(d)) => budget_stage.min(d / 2.0),
            _ => budget_stage,
        })
        .collect();
    let (center, radius) = bounding_circle(region);

    let mut degrees: Vec<usize> = vec![0, 1, 2];
    let mut d = 4usize;
    while d < cfg.degree_cap {
        degrees.push(d);
        d *= 2;
    }
    degrees.push(cfg.degree_cap);
    let mut fitted: Option<ComplexPolynomial> = None;
    let mut best_gap = f64::INFINITY;
    for &degree in &degrees {
        let candidate =
            super::fit::sup_refined_fit(&fit_pts, &fit_vals, degree, center, radius, &fit_allowed, 8)?;
        let mut ok = true;
        let mut gap = 0.0f64;
        for (i, &z) in pts.iter().enumerate() {
            let err = (candidate.eval(z) - h_vals[i]).norm();
            gap = gap.max(err);
            if err > allowed[i] {
                ok = false;
            }
        }
        best_gap = best_gap.min(gap);
        if ok {
            fitted = Some(candidate);
            break;
        }
    }
    let fitted = fitted.ok_or(Error::DegreeCapExceeded {
        cap: cfg.degree_cap,
        budget: budget_stage,
        gap: best_gap,
    })?;

    let fitted_vals: Vec<Complex64> = pts.iter().map(|&z| fitted.eval(z)).collect();
    let approx_gap = fitted_vals
        .iter()
        .zip(&h_vals)
        .map(|(p, h)| (p - h).norm())
        .fold(0.0, f64::max);

    let (final_poly, nudge_gap) = nudge_worker(&fitted, region, budget_stage, pts, &fitted_vals, None)?;

    let sup_error = pts
        .iter()
        .zip(f_vals)
        .map(|(&z, &fv)| (final_poly.eval(z) - fv).norm())
        .fold(0.0, f64::max);
    if !(sup_error < epsilon) {
        return Err(Error::NonvanishingCheckFailed(format!(
            "final audit failed: sup error {sup_error:.6e} not below epsilon {epsilon:.6e}"
        )));
    }

    // Min modulus with the boundary points nearest each root pinned in.
    let mut min_modulus = pts.iter().map(|&z| final_poly.eval(z).norm()).fold(f64::INFINITY, f64::min);
    if final_poly.degree() >= 1 {
        for &root in &poly::find_roots(&final_poly)?.roots {
            let pin = region.nearest_boundary_point(root);
            min_modulus = min_modulus.min(final_poly.eval(pin).norm());
        }
    }
    if !(min_modulus > 0.0) {
        return Err(Error::NonvanishingCheckFailed(format!(
            "final audit failed: min modulus {min_modulus:.3e}"
        )));
    }

    Ok(ApproximationReport {
        schema: "1".into(),
        status: "ok".into(),
        epsilon,
        polynomial: final_poly.to_pairs(),
        degree: final_poly.degree(),
        sup_error,
        min_modulus,
        stage_ledger: vec![
            StageEntry { stage: "dilation".into(), contribution: dilation_gap },
            StageEntry { stage: "approximation".into(), contribution: approx_gap },
            StageEntry { stage: "nudge".into(), contribution: nudge_gap },
        ],
        xi_used,
        delta_used,
        boundary_samples_per_component: cfg.boundary_samples,
        interior_grid_resolution: cfg.interior_resolution,
        complement_grid_resolution: cfg.complement_resolution,
        region_hash: region.hash().to_string(),
        seed: cfg.seed,
        glue: glue_summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{ComponentShape, Filament, JordanComponent};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc_region(center: (f64, f64), radius: f64) -> CompactRegion {
        let comp = JordanComponent::new(0, ComponentShape::Disc {
            center: c(center.0, center.1),
            radius,
        })
        .unwrap();
        CompactRegion::new(vec![comp], vec![], vec![]).unwrap()
    }

    fn segment_region() -> CompactRegion {
        let f = Filament::new(vec![c(-1.0, 0.0), c(1.0, 0.0)]).unwrap();
        CompactRegion::new(vec![], vec![f], vec![]).unwrap()
    }

    fn two_tangent_discs() -> CompactRegion {
        let a = JordanComponent::new(0, ComponentShape::Disc { center: c(-1.0, 0.0), radius: 1.0 }).unwrap();
        let b = JordanComponent::new(1, ComponentShape::Disc { center: c(1.0, 0.0), radius: 1.0 }).unwrap();
        CompactRegion::new(vec![a, b], vec![], vec![]).unwrap()
    }

    fn z_minus_one() -> TargetFunction {
        TargetFunction::poly(ComplexPolynomial::new(vec![c(-1.0, 0.0), c(1.0, 0.0)]))
    }

    #[test]
    fn choose_xi_constant_accepts_immediately() {
        let k = disc_region((0.0, 0.0), 1.0);
        let map = Arc::new(disc_to_domain(&k.components[0]).unwrap());
        let f = TargetFunction::constant(c(5.0, -1.0));
        let (xi, gap) = choose_xi(&f, &map, &k, 0.01).unwrap();
        assert_eq!(xi, 0.5);
        assert_eq!(gap, 0.0);
    }

    #[test]
    fn choose_xi_affine_target_exact_gap() {
        // |(1-xi) z - 1 - (z - 1)| = xi |z| <= xi on the closed unit disc, so
        // budget 0.01 lands on xi = 1/128.
        let k = disc_region((0.0, 0.0), 1.0);
        let map = Arc::new(disc_to_domain(&k.components[0]).unwrap());
        let (xi, gap) = choose_xi(&z_minus_one(), &map, &k, 0.01).unwrap();
        assert_eq!(xi, 1.0 / 128.0);
        assert!((gap - xi).abs() <= 1e-12, "gap {gap} vs xi {xi}");
    }

    #[test]
    fn choose_xi_exp_gap_bounded_by_e_xi() {
        let k = disc_region((0.0, 0.0), 1.0);
        let map = Arc::new(disc_to_domain(&k.components[0]).unwrap());
        let (xi, gap) = choose_xi(&TargetFunction::exp(), &map, &k, 1e-3).unwrap();
        assert!(gap <= 1e-3);
        assert!(std::f64::consts::E * xi >= gap, "e*xi = {} < gap {gap}", std::f64::consts::E * xi);
    }

    #[test]
    fn dilate_affine_algebra() {
        let k = disc_region((0.0, 0.0), 1.0);
        let map = Arc::new(disc_to_domain(&k.components[0]).unwrap());
        let h = dilate(&z_minus_one(), &map, 0.1).unwrap();
        // H(z) = 0.9 z - 1.
        for z in [c(1.0, 0.0), c(0.0, 1.0), c(-0.3, 0.4)] {
            assert!((h.eval(z) - (z * 0.9 - 1.0)).norm() < 1e-12);
        }
        // min modulus on the closed disc is at z = 1: |0.9 - 1| = 0.1.
        let mut min_mod = f64::INFINITY;
        for j in 0..512 {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 512.0);
            min_mod = min_mod.min(h.eval(z).norm());
        }
        assert!((min_mod - 0.1).abs() < 1e-3);
    }

    #[test]
    fn dilate_constant_unchanged() {
        let k = disc_region((0.0, 0.0), 1.0);
        let map = Arc::new(disc_to_domain(&k.components[0]).unwrap());
        let h = dilate(&TargetFunction::constant(c(3.0, 2.0)), &map, 0.3).unwrap();
        assert_eq!(h.eval(c(0.7, 0.1)), c(3.0, 2.0));
    }

    #[test]
    fn dilate_exp_identity_map() {
        let k = disc_region((0.0, 0.0), 1.0);
        let map = Arc::new(disc_to_domain(&k.components[0]).unwrap());
        let h = dilate(&TargetFunction::exp(), &map, 0.5).unwrap();
        assert!((h.eval(c(1.0, 0.0)) - c(0.5f64.exp(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn tietze_noop_on_pure_closure() {
        let k = disc_region((0.0, 0.0), 1.0);
        let h = TargetFunction::exp();
        let ext = tietze_extend(&[(0, h.clone())], &k);
        for z in [c(0.0, 0.0), c(0.5, 0.5), c(1.0, 0.0)] {
            assert!((ext.eval(z) - h.eval(z)).norm() < 1e-14);
        }
    }

    #[test]
    fn tietze_projects_to_nearest_closure_point() {
        // Disc plus filament [1, 2]: at z = 1.5 the value comes from z = 1.
        let comp = JordanComponent::new(0, ComponentShape::Disc { center: c(0.0, 0.0), radius: 1.0 }).unwrap();
        let fil = Filament::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let k = CompactRegion::new(vec![comp], vec![fil], vec![]).unwrap();
        let h = TargetFunction::exp();
        let ext = tietze_extend(&[(0, h.clone())], &k);
        let got = ext.eval(c(1.5, 0.0));
        assert!((got - h.eval(c(1.0, 0.0))).norm() < 1e-9, "got {got}");
    }

    #[test]
    fn tietze_constant_everywhere() {
        let comp = JordanComponent::new(0, ComponentShape::Disc { center: c(0.0, 0.0), radius: 1.0 }).unwrap();
        let fil = Filament::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let k = CompactRegion::new(vec![comp], vec![fil], vec![]).unwrap();
        let ext = tietze_extend(&[(0, TargetFunction::constant(c(4.0, -1.0)))], &k);
        for z in [c(0.0, 0.0), c(1.5, 0.0), c(2.0, 0.0)] {
            assert!((ext.eval(z) - c(4.0, -1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn nudge_segment_constant_shift() {
        let k = segment_region();
        let p = ComplexPolynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let nudged = nudge_zeros(&p, &k, 1e-3, 1.0).unwrap();
        // Root moves to +-1e-3 i; sup |p_n - p| over the segment equals 1e-3.
        let roots = poly::find_roots(&nudged).unwrap();
        assert_eq!(roots.roots.len(), 1);
        assert!(roots.roots[0].re.abs() < 1e-15);
        assert!((roots.roots[0].im.abs() - 1e-3).abs() < 1e-15);
        let mut sup = 0.0f64;
        for j in 0..1001 {
            let x = -1.0 + 2.0 * j as f64 / 1000.0;
            sup = sup.max((nudged.eval(c(x, 0.0)) - p.eval(c(x, 0.0))).norm());
        }
        assert!((sup - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn nudge_identity_when_roots_outside() {
        let k = disc_region((0.0, 0.0), 1.0);
        let p = ComplexPolynomial::new(vec![c(-5.0, 0.0), c(1.0, 0.0)]);
        let nudged = nudge_zeros(&p, &k, 1e-3, 1.0).unwrap();
        assert_eq!(nudged, p);
    }

    #[test]
    fn nudge_boundary_pair_expansion_oracle() {
        // z^2 - 1 on the unit disc: roots +-1 move radially to +-(1 + delta),
        // so p - P = 1 - (1 + delta)^2 exactly.
        let k = disc_region((0.0, 0.0), 1.0);
        let p = ComplexPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let delta = 1e-3;
        let nudged = nudge_zeros(&p, &k, delta, 1.0).unwrap();
        let expansion = (1.0 + delta) * (1.0 + delta) - 1.0;
        for z in [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(-0.6, 0.3)] {
            let diff = (nudged.eval(z) - p.eval(z)).norm();
            assert!((diff - expansion).abs() < 1e-12, "at {z}: {diff} vs {expansion}");
        }
    }

    #[test]
    fn nudge_rejects_interior_zero() {
        let k = disc_region((0.0, 0.0), 1.0);
        let p = ComplexPolynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(nudge_zeros(&p, &k, 1e-3, 1.0), Err(Error::InteriorZero { .. })));
    }

    #[test]
    fn approx_constant_on_disc() {
        let k = disc_region((0.0, 0.0), 1.0);
        let f = TargetFunction::constant(c(1.0, 0.0));
        let report = approx_jordan(&f, &k, 1e-3).unwrap();
        assert_eq!(report.degree, 0);
        assert!(report.sup_error <= 1e-13);
        assert!((report.min_modulus - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn approx_boundary_zero_target_on_disc() {
        let k = disc_region((0.0, 0.0), 1.0);
        let report = approx_jordan(&z_minus_one(), &k, 0.05).unwrap();
        assert!(report.sup_error < 0.05);
        assert!(report.min_modulus > 0.0);
        for entry in &report.stage_ledger {
            assert!(entry.contribution <= 0.05 / 3.0 + 1e-12, "{}: {}", entry.stage, entry.contribution);
        }
        let p = report.polynomial();
        for r in poly::find_roots(&p).unwrap().roots {
            assert_eq!(k.contains(r, 0.0), Membership::Outside);
        }
    }

    #[test]
    fn approx_exp_tight_tolerance() {
        let k = disc_region((0.0, 0.0), 1.0);
        let report = approx_jordan(&TargetFunction::exp(), &k, 1e-4).unwrap();
        assert!(report.sup_error < 1e-4);
        assert!(report.min_modulus >= (-1.0f64).exp() - 1e-4);
    }

    #[test]
    fn approx_rejects_interior_zero_target() {
        let k = disc_region((0.0, 0.0), 1.0);
        let f = TargetFunction::poly(ComplexPolynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        match approx_jordan(&f, &k, 0.05) {
            Err(Error::InteriorZero { z }) => assert!(z.norm() < 1e-6),
            other => panic!("expected InteriorZero, got {other:?}"),
        }
    }

    #[test]
    fn lavrentiev_segment_with_zero() {
        let k = segment_region();
        let f = TargetFunction::poly(ComplexPolynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]));
        let report = nonvanishing_approx(&f, &k, 0.01).unwrap();
        assert!(report.sup_error < 0.01);
        assert!(report.min_modulus > 0.0);
        assert!(report.xi_used.is_none());
        assert!(report.delta_used.is_none());
        let p = report.polynomial();
        for r in poly::find_roots(&p).unwrap().roots {
            assert_eq!(k.contains(r, 0.0), Membership::Outside);
        }
    }

    #[test]
    fn glued_tangent_discs() {
        let k = two_tangent_discs();
        let f = TargetFunction::poly(ComplexPolynomial::new(vec![c(2.0, 0.0), c(1.0, 0.0)]));
        let report = nonvanishing_approx(&f, &k, 0.05).unwrap();
        assert!(report.sup_error < 0.05);
        assert!(report.min_modulus > 0.0);
        let glue = report.glue.as_ref().expect("glue summary present");
        assert!(glue.continuity_residual <= 1e-9);
        let band = 0.05 / (3.0 * glue.c_max);
        for lf in &glue.rescale_factors {
            let modulus = (lf[0] * lf[0] + lf[1] * lf[1]).sqrt();
            assert!(modulus >= 1.0 - band && modulus <= 1.0 + band, "lambda modulus {modulus}");
        }
        assert!((glue.delta_contact - 2.0).abs() < 1e-6);
    }

    #[test]
    fn three_tangent_discs_cycle_detected() {
        let h = 3.0f64.sqrt();
        let a = JordanComponent::new(0, ComponentShape::Disc { center: c(-1.0, 0.0), radius: 1.0 }).unwrap();
        let b = JordanComponent::new(1, ComponentShape::Disc { center: c(1.0, 0.0), radius: 1.0 }).unwrap();
        let d = JordanComponent::new(2, ComponentShape::Disc { center: c(0.0, h), radius: 1.0 }).unwrap();
        let k = CompactRegion::new(vec![a, b, d], vec![], vec![]).unwrap();
        let f = TargetFunction::constant(c(1.0, 0.0));
        assert!(matches!(nonvanishing_approx(&f, &k, 0.05), Err(Error::CycleDetected { .. })));
    }

    #[test]
    fn mixed_region_disc_filament_point() {
        let comp = JordanComponent::new(0, ComponentShape::Disc { center: c(0.0, 0.0), radius: 1.0 }).unwrap();
        let fil = Filament::new(vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let k = CompactRegion::new(vec![comp], vec![fil], vec![c(0.0, 1.5)]).unwrap();
        let report = nonvanishing_approx(&TargetFunction::exp(), &k, 0.05).unwrap();
        assert!(report.sup_error < 0.05, "sup_error {}", report.sup_error);
        assert!(report.min_modulus > 0.0);
    }

    #[test]
    fn zero_target_on_point_region() {
        let k = CompactRegion::new(vec![], vec![], vec![c(0.3, 0.4)]).unwrap();
        let f = TargetFunction::constant(c(0.0, 0.0));
        let report = nonvanishing_approx(&f, &k, 0.01).unwrap();
        assert!(report.sup_error < 0.01);
        assert!(report.min_modulus > 0.0);
    }
}
