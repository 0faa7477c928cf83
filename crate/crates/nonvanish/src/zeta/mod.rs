//! Riemann zeta numerics: Euler-Maclaurin evaluation, rectangle zero counts
//! by the argument principle, the Ingham density exponent, shift scanning,
//! and polynomial extraction from zero-free shifts.

mod extract;
mod scan;

pub use extract::{extract_polynomial_from_shift, extract_polynomial_with, AnalyticEvaluator, ExtractionReport, ShiftedZeta};
pub use scan::{
    compose_universality, density_for, scan_shifts, scan_shifts_to_csv, CompositionVerdict,
    ScanConfig, ScanOutcome, ScanRecord, SCAN_CHECKPOINT_INTERVAL,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// B_{2k} as (numerator, denominator), k = 1..=9.
const BERNOULLI: [(f64, f64); 9] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
];

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Euler-Maclaurin zeta evaluator. The truncation point scales with |Im(s)|
/// so the stated accuracy holds across the validity strip.
#[derive(Debug, Clone)]
pub struct ZetaEvaluator {
    /// Base truncation N of the Dirichlet sum.
    pub truncation: usize,
    /// Number of Bernoulli correction terms M.
    pub correction_order: usize,
    /// Lower real-part edge of the declared validity region.
    pub min_re: f64,
    /// Largest |Im(s)| accepted.
    pub t_max: f64,
}

impl Default for ZetaEvaluator {
    fn default() -> Self {
        ZetaEvaluator { truncation: 64, correction_order: 8, min_re: 0.25, t_max: 1000.0 }
    }
}

impl ZetaEvaluator {
    /// Same evaluator with a widened validity strip; the Euler-Maclaurin
    /// representation continues zeta analytically well past Re(s) = 0, which
    /// the Taylor extraction needs for its quadrature circle.
    pub fn with_min_re(&self, min_re: f64) -> ZetaEvaluator {
        ZetaEvaluator { min_re, ..self.clone() }
    }

    /// zeta(s) with the validity gates of this evaluator.
    pub fn zeta(&self, s: Complex64) -> Result<Complex64> {
        let pole_distance = (s - Complex64::new(1.0, 0.0)).norm();
        if pole_distance < 1e-8 {
            return Err(Error::PoleProximity { distance: pole_distance });
        }
        if s.re <= self.min_re {
            return Err(Error::OutOfValidity(format!(
                "Re(s) = {} at or below the validity edge {}",
                s.re, self.min_re
            )));
        }
        if s.im.abs() > self.t_max {
            return Err(Error::OutOfValidity(format!(
                "|Im(s)| = {} above the configured cap {}",
                s.im.abs(),
                self.t_max
            )));
        }
        Ok(self.euler_maclaurin(s))
    }

    /// The raw Euler-Maclaurin value, no gates. Callers own the validity
    /// argument (extraction quadrature, derivative stencils).
    pub fn euler_maclaurin(&self, s: Complex64) -> Complex64 {
        let n = self.truncation + (1.5 * s.im.abs()).ceil() as usize;
        let m = self.correction_order.min(BERNOULLI.len());
        let nf = n as f64;

        let mut sum = Complex64::new(0.0, 0.0);
        for k in 1..=n {
            sum += (-s * (k as f64).ln()).exp();
        }
        let n_pow_minus_s = (-s * nf.ln()).exp();
        // Tail integral and endpoint correction.
        sum += n_pow_minus_s * nf / (s - 1.0);
        sum -= n_pow_minus_s * 0.5;

        // Bernoulli corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
        let mut pochhammer = s;
        for (k, &(num, den)) in BERNOULLI.iter().take(m).enumerate() {
            let order = 2 * (k + 1);
            let coeff = num / den / factorial(order);
            sum += n_pow_minus_s * pochhammer * coeff * nf.powi(-(order as i32) + 1);
            // Extend the product s(s+1)... by the next two factors.
            pochhammer *= (s + (order - 1) as f64) * (s + order as f64);
        }
        sum
    }

    /// Central-difference derivative, step 1e-6.
    fn zeta_prime(&self, s: Complex64) -> Complex64 {
        let h = 1e-6;
        (self.euler_maclaurin(s + Complex64::new(h, 0.0)) - self.euler_maclaurin(s - Complex64::new(h, 0.0)))
            / (2.0 * h)
    }
}

/// Ingham's zero-density exponent 3(1-sigma)/(2-sigma) on (1/2, 1).
pub fn ingham_exponent(sigma: f64) -> Result<f64> {
    if !(0.5 < sigma && sigma < 1.0) {
        return Err(Error::DomainError(format!(
            "ingham exponent defined for sigma in (1/2, 1), got {sigma}"
        )));
    }
    Ok(3.0 * (1.0 - sigma) / (2.0 - sigma))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rectangle {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max)
            || !re_min.is_finite()
            || !re_max.is_finite()
            || !im_min.is_finite()
            || !im_max.is_finite()
        {
            return Err(Error::DomainError(format!(
                "degenerate rectangle [{re_min},{re_max}]x[{im_min},{im_max}]"
            )));
        }
        Ok(Rectangle { re_min, re_max, im_min, im_max })
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn contains(&self, z: Complex64) -> bool {
        self.re_min <= z.re && z.re <= self.re_max && self.im_min <= z.im && z.im <= self.im_max
    }

    fn inflated(&self, pad: f64) -> Rectangle {
        Rectangle {
            re_min: self.re_min - pad,
            re_max: self.re_max + pad,
            im_min: self.im_min - pad,
            im_max: self.im_max + pad,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ZeroCountResult {
    pub rectangle: Rectangle,
    pub count: i64,
    pub contour_samples: usize,
    pub winding_residual: f64,
}

/// Counts zeros of zeta inside a rectangle by integrating zeta'/zeta along
/// the boundary (trapezoid rule, adaptive refinement until the integral sits
/// within 0.1 of an integer multiple of 2 pi i). A contour running too close
/// to a zero is perturbed outward and retried.
pub fn count_zeros_rectangle(ev: &ZetaEvaluator, rect: Rectangle) -> Result<ZeroCountResult> {
    count_zeros_generic(&|s| Ok(ev.euler_maclaurin(s)), &|s| Ok(ev.zeta_prime(s)), rect, Some(ev))
}

/// Argument-principle count for any analytic evaluator: used by the mock
/// injection seam of the extraction pipeline.
pub(crate) fn count_zeros_generic(
    f: &dyn Fn(Complex64) -> Result<Complex64>,
    fprime: &dyn Fn(Complex64) -> Result<Complex64>,
    rect: Rectangle,
    gates: Option<&ZetaEvaluator>,
) -> Result<ZeroCountResult> {
    if let Some(ev) = gates {
        if rect.re_min <= ev.min_re {
            return Err(Error::OutOfValidity(format!(
                "rectangle edge Re = {} at or below the validity edge {}",
                rect.re_min, ev.min_re
            )));
        }
        if rect.im_min.abs() > ev.t_max || rect.im_max.abs() > ev.t_max {
            return Err(Error::OutOfValidity(format!(
                "rectangle leaves |Im(s)| <= {}",
                ev.t_max
            )));
        }
        let pole = Complex64::new(1.0, 0.0);
        if rect.inflated(1e-3).contains(pole) {
            return Err(Error::PoleProximity {
                distance: (rect.re_min - 1.0).abs().min((rect.re_max - 1.0).abs()),
            });
        }
    }

    const RETRIES: usize = 3;
    let mut last_min = f64::INFINITY;
    for retry in 0..=RETRIES {
        let r = rect.inflated(retry as f64 * 1e-3);
        let mut samples_per_edge = 64usize;
        while samples_per_edge <= 16384 {
            let corners = r.corners();
            let mut nodes: Vec<Complex64> = Vec::with_capacity(4 * samples_per_edge);
            for e in 0..4 {
                let a = corners[e];
                let b = corners[(e + 1) % 4];
                for j in 0..samples_per_edge {
                    nodes.push(a + (b - a) * (j as f64 / samples_per_edge as f64));
                }
            }
            let total = nodes.len();
            let mut min_mod = f64::INFINITY;
            let mut integrand: Vec<Complex64> = Vec::with_capacity(total);
            for &s in &nodes {
                let v = f(s)?;
                min_mod = min_mod.min(v.norm());
                if v.norm() == 0.0 {
                    break;
                }
                integrand.push(fprime(s)? / v);
            }
            last_min = min_mod;
            // Zero practically on the contour: no refinement will help.
            if min_mod < 1e-6 {
                break;
            }
            let mut integral = Complex64::new(0.0, 0.0);
            for j in 0..total {
                let a = nodes[j];
                let b = nodes[(j + 1) % total];
                integral += (integrand[j] + integrand[(j + 1) % total]) * 0.5 * (b - a);
            }
            let winding = integral.im / (2.0 * std::f64::consts::PI);
            let count = winding.round() as i64;
            let residual =
                (integral - Complex64::new(0.0, 2.0 * std::f64::consts::PI * count as f64)).norm();
            if residual <= 0.1 {
                return Ok(ZeroCountResult {
                    rectangle: r,
                    count,
                    contour_samples: total,
                    winding_residual: residual,
                });
            }
            samples_per_edge *= 2;
        }
    }
    Err(Error::ContourThroughZero { min_modulus: last_min, retries: RETRIES })
}
