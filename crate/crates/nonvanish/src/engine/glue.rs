//! Gluing per-component approximants across a component tree. Each component
//! gets a nonvanishing polynomial approximant from the single-component
//! pipeline at tolerance xi_glue; walking the tree in BFS order, each child's
//! approximant is rescaled so parent and child agree exactly at the contact
//! point. xi_glue is halved until every cumulative rescale factor sits inside
//! [1 - eps/(3C), 1 + eps/(3C)] and the glued function tracks f to eps/3 on
//! the closures.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPolynomial;
use crate::region::{CompactRegion, ComponentTree};

use super::pipeline::{approx_jordan_with, PipelineConfig};
use super::target::TargetFunction;

#[derive(Debug, Clone)]
pub struct GlueState {
    pub tree: ComponentTree,
    pub xi_glue: f64,
    /// C = max |f| over K (dense estimate).
    pub c_max: f64,
    /// min |f| over the tree's contact points.
    pub delta_contact: f64,
    /// Cumulative rescale factor per component id.
    pub rescale_factors: BTreeMap<u32, Complex64>,
    /// Per-component nonvanishing approximants f_n.
    pub approximants: BTreeMap<u32, ComplexPolynomial>,
    /// Worst |parent value - child value| over contact points.
    pub continuity_residual: f64,
}

pub(crate) struct GlueOutcome {
    pub state: GlueState,
    /// (component index, lambda_n * f_n) pairs covering the tree.
    pub parts: Vec<(usize, TargetFunction)>,
}

fn component_index_by_id(region: &CompactRegion, id: u32) -> Result<usize> {
    region
        .components
        .iter()
        .position(|c| c.id == id)
        .ok_or_else(|| Error::InvalidRegion(format!("component id {id} not present in region")))
}

pub(crate) fn glue_components_impl(
    f: &TargetFunction,
    region: &CompactRegion,
    tree: &ComponentTree,
    epsilon: f64,
    cfg: &PipelineConfig,
    xi_glue_start: f64,
) -> Result<GlueOutcome> {
    let c_max = {
        let mut pts = region.boundary_samples(cfg.boundary_samples);
        pts.extend(region.interior_samples(cfg.interior_resolution));
        pts.iter().map(|&z| f.eval(z).norm()).fold(0.0, f64::max)
    };
    if !(c_max > 0.0) {
        return Err(Error::NonvanishingCheckFailed("target is identically zero on K".into()));
    }

    let mut delta_contact = f64::INFINITY;
    for (&child, &z) in &tree.contact_points {
        let modulus = f.eval(z).norm();
        if modulus <= 1e-12 * c_max.max(1.0) {
            return Err(Error::ContactZero { z, modulus });
        }
        let _ = child;
        delta_contact = delta_contact.min(modulus);
    }
    if tree.contact_points.is_empty() {
        delta_contact = c_max;
    }

    // Closure samples per tree member, for the glue-gap criterion.
    let mut members: Vec<usize> = Vec::new();
    for &id in &tree.order {
        members.push(component_index_by_id(region, id)?);
    }
    let closure_samples: Vec<Vec<Complex64>> = members
        .iter()
        .map(|&idx| {
            let comp = &region.components[idx];
            let mut pts = comp.boundary_samples(cfg.boundary_samples);
            pts.extend(comp.interior_samples(cfg.interior_resolution));
            pts
        })
        .collect();

    let lambda_lo = 1.0 - epsilon / (3.0 * c_max);
    let lambda_hi = 1.0 + epsilon / (3.0 * c_max);

    let mut xi_glue = xi_glue_start.min(epsilon / 3.0).min(delta_contact / 4.0);
    let mut best_failure = String::new();
    for _ in 0..40 {
        match glue_attempt(
            f,
            region,
            tree,
            &members,
            &closure_samples,
            xi_glue,
            epsilon,
            lambda_lo,
            lambda_hi,
            c_max,
            delta_contact,
            cfg,
        ) {
            Ok(outcome) => return Ok(outcome),
            Err(GlueAttemptFailure::Retryable(reason)) => {
                best_failure = reason;
                xi_glue *= 0.5;
                if xi_glue < 1e-12 {
                    break;
                }
            }
            Err(GlueAttemptFailure::Fatal(e)) => return Err(e),
        }
    }
    Err(Error::XiUnderflow {
        limit: 1e-12,
        budget: epsilon / 3.0,
        gap: f64::NAN,
    })
    .map_err(|e| {
        log::debug!("glue failed after halvings: {best_failure}");
        e
    })
}

enum GlueAttemptFailure {
    Retryable(String),
    Fatal(Error),
}

#[allow(clippy::too_many_arguments)]
fn glue_attempt(
    f: &TargetFunction,
    region: &CompactRegion,
    tree: &ComponentTree,
    members: &[usize],
    closure_samples: &[Vec<Complex64>],
    xi_glue: f64,
    epsilon: f64,
    lambda_lo: f64,
    lambda_hi: f64,
    c_max: f64,
    delta_contact: f64,
    cfg: &PipelineConfig,
) -> std::result::Result<GlueOutcome, GlueAttemptFailure> {
    // Theorem-5 sub-pipeline per component at tolerance xi_glue.
    let mut approximants: BTreeMap<u32, ComplexPolynomial> = BTreeMap::new();
    for &idx in members {
        let comp = region.components[idx].clone();
        let id = comp.id;
        let sub_region = CompactRegion::new(vec![comp], vec![], vec![])
            .map_err(GlueAttemptFailure::Fatal)?;
        let report = approx_jordan_with(f, &sub_region, xi_glue, cfg)
            .map_err(GlueAttemptFailure::Fatal)?;
        approximants.insert(id, report.polynomial());
    }

    // Cumulative rescale factors along the tree.
    let mut lambdas: BTreeMap<u32, Complex64> = BTreeMap::new();
    lambdas.insert(tree.root, Complex64::new(1.0, 0.0));
    for &id in tree.order.iter().skip(1) {
        let parent = tree.parent[&id];
        let z_n = tree.contact_points[&id];
        let parent_value = lambdas[&parent] * approximants[&parent].eval(z_n);
        let child_raw = approximants[&id].eval(z_n);
        if child_raw.norm() == 0.0 {
            return Err(GlueAttemptFailure::Retryable(format!(
                "approximant of component {id} vanishes at contact point {z_n}"
            )));
        }
        lambdas.insert(id, parent_value / child_raw);
    }

    for (&id, lambda) in &lambdas {
        let modulus = lambda.norm();
        if !(lambda_lo <= modulus && modulus <= lambda_hi) {
            return Err(GlueAttemptFailure::Retryable(format!(
                "rescale factor of component {id} has modulus {modulus:.6} outside [{lambda_lo:.6}, {lambda_hi:.6}]"
            )));
        }
    }

    // Glue-gap criterion: sup |lambda_n f_n - f| <= eps/3 on each closure.
    let mut glue_gap = 0.0f64;
    for (pos, &idx) in members.iter().enumerate() {
        let id = region.components[idx].id;
        let lambda = lambdas[&id];
        let poly = &approximants[&id];
        for &z in &closure_samples[pos] {
            glue_gap = glue_gap.max((lambda * poly.eval(z) - f.eval(z)).norm());
        }
    }
    if glue_gap > epsilon / 3.0 {
        return Err(GlueAttemptFailure::Retryable(format!(
            "glued sup gap {glue_gap:.3e} above eps/3 = {:.3e}",
            epsilon / 3.0
        )));
    }

    // Continuity residual: parent vs child value at each contact point.
    let mut continuity_residual = 0.0f64;
    for &id in tree.order.iter().skip(1) {
        let parent = tree.parent[&id];
        let z_n = tree.contact_points[&id];
        let parent_value = lambdas[&parent] * approximants[&parent].eval(z_n);
        let child_value = lambdas[&id] * approximants[&id].eval(z_n);
        continuity_residual = continuity_residual.max((parent_value - child_value).norm());
    }

    let parts: Vec<(usize, TargetFunction)> = members
        .iter()
        .map(|&idx| {
            let id = region.components[idx].id;
            let lambda = lambdas[&id];
            let poly = approximants[&id].clone();
            (idx, TargetFunction::custom("glued", move |z| lambda * poly.eval(z)))
        })
        .collect();

    Ok(GlueOutcome {
        state: GlueState {
            tree: tree.clone(),
            xi_glue,
            c_max,
            delta_contact,
            rescale_factors: lambdas,
            approximants,
            continuity_residual,
        },
        parts,
    })
}

/// Public surface: glues approximants over one component tree, returning the
/// glued evaluator on the union of closures plus the audit state.
pub fn glue_components(
    f: &TargetFunction,
    region: &CompactRegion,
    tree: &ComponentTree,
    epsilon: f64,
) -> Result<(TargetFunction, GlueState)> {
    let cfg = PipelineConfig::default();
    let outcome = glue_components_impl(f, region, tree, epsilon, &cfg, epsilon / 3.0)?;
    let h = super::pipeline::join_parts(outcome.parts, region);
    Ok((h, outcome.state))
}
