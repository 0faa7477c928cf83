//! Polynomial extraction from a zero-free zeta shift: certify zero-freeness
//! of zeta(. + iT) on K0 = 3/4 + eps K by the argument principle, take the
//! Taylor polynomial of the shifted function by Cauchy quadrature on a circle
//! of radius 1.2, escalate the degree until the unit-disc gap clears
//! min(eps/2, delta/2), and pull back to K via p(z) = q(3/4 + eps z).
//!
//! The pipeline accepts any analytic evaluator, so the construction is
//! testable without hunting for astronomically large shifts.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{self, ComplexPolynomial};
use crate::region::{CompactRegion, Membership};

use super::{count_zeros_generic, Rectangle, ZetaEvaluator};

const TAYLOR_RADIUS: f64 = 1.2;
const QUADRATURE_POINTS: usize = 2048;
const CIRCLE_TEST_POINTS: usize = 512;
const K0_CENTER: f64 = 0.75;

/// An analytic function on the closed quadrature disc |z| <= 1.2.
pub trait AnalyticEvaluator {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
    fn label(&self) -> String;
}

/// F(z) = zeta(z + iT), evaluated through a widened Euler-Maclaurin strip so
/// the quadrature circle (Re down to -1.2) is reachable.
pub struct ShiftedZeta {
    ev: ZetaEvaluator,
    t: f64,
}

impl ShiftedZeta {
    pub fn new(ev: &ZetaEvaluator, t: f64) -> Result<Self> {
        if t <= 2.0 {
            return Err(Error::OutOfValidity(format!(
                "shift T must exceed 2 so the pole at 1 - iT clears the Taylor circle, got {t}"
            )));
        }
        if t + TAYLOR_RADIUS > ev.t_max {
            return Err(Error::OutOfValidity(format!(
                "shift T = {t} exceeds the evaluator cap {}",
                ev.t_max
            )));
        }
        Ok(ShiftedZeta { ev: ev.with_min_re(-1.5), t })
    }
}

impl AnalyticEvaluator for ShiftedZeta {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let s = z + Complex64::new(0.0, self.t);
        let pole_distance = (s - Complex64::new(1.0, 0.0)).norm();
        if pole_distance < 1e-8 {
            return Err(Error::PoleProximity { distance: pole_distance });
        }
        Ok(self.ev.euler_maclaurin(s))
    }

    fn label(&self) -> String {
        format!("zeta shifted by i*{}", self.t)
    }
}

impl<F> AnalyticEvaluator for F
where
    F: Fn(Complex64) -> Complex64,
{
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self(z))
    }

    fn label(&self) -> String {
        "custom analytic evaluator".into()
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ExtractionReport {
    pub evaluator: String,
    pub epsilon: f64,
    /// min |F| over the rescaled set K0 (dense samples).
    pub delta: f64,
    pub degree: usize,
    /// Measured sup |q - F| on the unit circle (= unit disc by maximum
    /// modulus), which the budget min(eps/2, delta/2) must cover.
    pub gap: f64,
    pub budget: f64,
    pub taylor_radius: f64,
    pub quadrature_points: usize,
    pub k0_center: f64,
    pub k0_scale: f64,
    pub min_modulus_on_k: f64,
    pub roots_outside: bool,
}

/// Dense K samples used both for the K0 minimum and the final certificate.
fn dense_region_samples(region: &CompactRegion) -> Vec<Complex64> {
    let mut pts = region.boundary_samples(1024);
    pts.extend(region.interior_samples(48));
    pts
}

pub fn extract_polynomial_with(
    f: &dyn AnalyticEvaluator,
    region: &CompactRegion,
    epsilon: f64,
) -> Result<(ComplexPolynomial, ExtractionReport)> {
    if !(epsilon > 0.0) {
        return Err(Error::DomainError(format!("epsilon must be positive, got {epsilon}")));
    }
    let k_samples = dense_region_samples(region);
    let reach = k_samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if epsilon * reach > 0.125 {
        return Err(Error::DomainError(format!(
            "K0 = 3/4 + {epsilon} K leaves the disc |z - 3/4| <= 1/8 (reach {reach:.3})"
        )));
    }

    // Zero-free certificate on a rectangle covering K0.
    let bbox = region.bbox();
    let pad = 1e-3 * epsilon.max(1e-3);
    let rect = Rectangle::new(
        K0_CENTER + epsilon * bbox.min_re - pad,
        K0_CENTER + epsilon * bbox.max_re + pad,
        epsilon * bbox.min_im - pad,
        epsilon * bbox.max_im + pad,
    )?;
    let h = 1e-6;
    let deriv = |z: Complex64| -> Result<Complex64> {
        Ok((f.eval(z + Complex64::new(h, 0.0))? - f.eval(z - Complex64::new(h, 0.0))?) / (2.0 * h))
    };
    let zero_count = count_zeros_generic(&|z| f.eval(z), &deriv, rect, None)?;
    if zero_count.count != 0 {
        return Err(Error::ZeroOnK0 { count: zero_count.count });
    }

    // delta = min |F| on K0.
    let mut delta = f64::INFINITY;
    for &z in &k_samples {
        let w = Complex64::new(K0_CENTER, 0.0) + z * epsilon;
        delta = delta.min(f.eval(w)?.norm());
    }
    if !(delta > 0.0) {
        return Err(Error::ZeroOnK0 { count: 0 });
    }
    let budget = (epsilon / 2.0).min(delta / 2.0);

    // Taylor coefficients by trapezoid Cauchy quadrature on |z| = 1.2.
    let cap = poly::DEGREE_CAP;
    let mut ring_values = Vec::with_capacity(QUADRATURE_POINTS);
    for j in 0..QUADRATURE_POINTS {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / QUADRATURE_POINTS as f64;
        ring_values.push(f.eval(Complex64::from_polar(TAYLOR_RADIUS, theta))?);
    }
    let mut coeffs = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in ring_values.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / QUADRATURE_POINTS as f64;
            acc += v * Complex64::from_polar(1.0, -(k as f64) * theta);
        }
        coeffs.push(acc / (QUADRATURE_POINTS as f64 * TAYLOR_RADIUS.powi(k as i32)));
    }

    // Circle reference values for the gap measurement.
    let mut circle = Vec::with_capacity(CIRCLE_TEST_POINTS);
    for j in 0..CIRCLE_TEST_POINTS {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / CIRCLE_TEST_POINTS as f64);
        circle.push((z, f.eval(z)?));
    }

    // Degree escalation: doubling, then the cap itself.
    let mut degrees: Vec<usize> = vec![0];
    let mut d = 1usize;
    while d < cap {
        degrees.push(d);
        d *= 2;
    }
    degrees.push(cap);
    let mut best_gap = f64::INFINITY;
    let mut chosen: Option<(usize, f64, ComplexPolynomial)> = None;
    for &deg in &degrees {
        let q = ComplexPolynomial::new(coeffs[..=deg].to_vec());
        let gap = circle.iter().map(|&(z, fv)| (q.eval(z) - fv).norm()).fold(0.0, f64::max);
        best_gap = best_gap.min(gap);
        if gap <= budget {
            chosen = Some((deg, gap, q));
            break;
        }
    }
    let (degree, gap, q) = chosen.ok_or(Error::DegreeCapExceeded { cap, budget, gap: best_gap })?;

    // Pull back: p(z) = q(3/4 + eps z).
    let p = q.compose_affine(Complex64::new(epsilon, 0.0), Complex64::new(K0_CENTER, 0.0));

    // Nonvanishing certificate on K: dense minimum plus root classification.
    // The roots of p are the roots of q pulled through the same affine map;
    // rooting q directly avoids the wildly scaled pullback coefficients.
    let mut min_modulus_on_k = f64::INFINITY;
    for &z in &k_samples {
        min_modulus_on_k = min_modulus_on_k.min(p.eval(z).norm());
    }
    let roots_outside = poly::find_roots(&q)?
        .roots
        .iter()
        .map(|&r| (r - Complex64::new(K0_CENTER, 0.0)) / epsilon)
        .all(|r| region.contains(r, 0.0) == Membership::Outside);
    if !(min_modulus_on_k > 0.0) || !roots_outside {
        return Err(Error::NonvanishingCheckFailed(format!(
            "extracted polynomial vanishes on K (min modulus {min_modulus_on_k:.3e}, roots outside: {roots_outside})"
        )));
    }

    let report = ExtractionReport {
        evaluator: f.label(),
        epsilon,
        delta,
        degree,
        gap,
        budget,
        taylor_radius: TAYLOR_RADIUS,
        quadrature_points: QUADRATURE_POINTS,
        k0_center: K0_CENTER,
        k0_scale: epsilon,
        min_modulus_on_k,
        roots_outside,
    };
    Ok((p, report))
}

/// The real-zeta entry point of the Theorem 4(ii) machinery.
pub fn extract_polynomial_from_shift(
    ev: &ZetaEvaluator,
    t_shift: f64,
    region: &CompactRegion,
    epsilon: f64,
) -> Result<(ComplexPolynomial, ExtractionReport)> {
    let shifted = ShiftedZeta::new(ev, t_shift)?;
    extract_polynomial_with(&shifted, region, epsilon)
}
