//! Complex polynomial arithmetic, evaluation, and root finding.
//!
//! Polynomials are stored as coefficient vectors in ascending degree. The
//! root finder is a simultaneous Aberth-Ehrlich iteration, adequate for the
//! degrees this crate produces (default cap 64); reconstruction from roots
//! expands `c0 * prod (z - z_k)` term by term.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default degree cap. Monomial-basis conditioning degrades beyond this.
pub const DEGREE_CAP: usize = 64;

const ROOT_ITERATION_CAP: usize = 200;
const ROOT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coefficients: Vec<Complex64>,
}

/// Roots with multiplicity (repeated entries) plus the leading coefficient,
/// enough to reconstruct the polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub leading_coefficient: Complex64,
}

impl ComplexPolynomial {
    /// Builds a polynomial from ascending-degree coefficients, trimming
    /// exactly-zero leading coefficients.
    pub fn new(mut coefficients: Vec<Complex64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&Complex64::new(0.0, 0.0)) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(Complex64::new(0.0, 0.0));
        }
        ComplexPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        ComplexPolynomial::new(vec![Complex64::new(0.0, 0.0)])
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexPolynomial::new(vec![c])
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|c| c.norm() == 0.0)
    }

    pub fn leading_coefficient(&self) -> Complex64 {
        *self.coefficients.last().expect("nonempty by construction")
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Upper bound on rounding noise of Horner evaluation at `z`, used as a
    /// convergence floor by the root finder.
    fn eval_noise_floor(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let mut scale = 0.0;
        let mut rk = 1.0;
        for c in &self.coefficients {
            scale += c.norm() * rk;
            rk *= r;
        }
        4.0 * (self.coefficients.len() as f64) * f64::EPSILON * scale
    }

    pub fn add(&self, other: &ComplexPolynomial) -> ComplexPolynomial {
        let n = self.coefficients.len().max(other.coefficients.len());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &c) in self.coefficients.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coefficients.iter().enumerate() {
            out[i] += c;
        }
        ComplexPolynomial::new(out)
    }

    pub fn scale(&self, factor: Complex64) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coefficients.iter().map(|&c| c * factor).collect())
    }

    pub fn mul(&self, other: &ComplexPolynomial) -> ComplexPolynomial {
        if self.is_zero() || other.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out =
            vec![Complex64::new(0.0, 0.0); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }

    /// Coefficients of `p(a*z + b)`.
    pub fn compose_affine(&self, a: Complex64, b: Complex64) -> ComplexPolynomial {
        // Horner in the polynomial ring: result = (...(c_n*(az+b) + c_{n-1})*(az+b) ...).
        let affine = ComplexPolynomial::new(vec![b, a]);
        let mut acc = ComplexPolynomial::zero();
        for &c in self.coefficients.iter().rev() {
            acc = acc.mul(&affine).add(&ComplexPolynomial::constant(c));
        }
        acc
    }

    /// Serializes to the interchange form: array of `[re, im]` pairs,
    /// ascending degree.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.coefficients.iter().map(|c| [c.re, c.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        ComplexPolynomial::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect())
    }
}

/// Expands `c0 * prod_k (z - z_k)`.
pub fn from_roots(roots: &RootSet) -> ComplexPolynomial {
    let mut coeffs = vec![roots.leading_coefficient];
    for &r in &roots.roots {
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        coeffs = next;
    }
    ComplexPolynomial::new(coeffs)
}

/// All complex roots with multiplicity, by simultaneous Aberth-Ehrlich
/// iteration (cap 200, tolerance 1e-12). Fails with `NonConvergence` when
/// the iteration stalls, which signals ill-conditioned input.
pub fn find_roots(p: &ComplexPolynomial) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let degree = p.degree();
    if degree == 0 {
        return Ok(RootSet { roots: Vec::new(), leading_coefficient: p.leading_coefficient() });
    }

    // Factor out exact zero roots so the iteration never divides by zero at
    // the origin cluster.
    let zero_roots = p.coefficients.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = ComplexPolynomial::new(p.coefficients[zero_roots..].to_vec());
    let m = reduced.degree();
    let mut roots = vec![Complex64::new(0.0, 0.0); zero_roots];
    if m == 0 {
        return Ok(RootSet { roots, leading_coefficient: p.leading_coefficient() });
    }

    // Fujiwara bound: max |root| <= 2 max_k (|c_{m-k}/c_m|)^{1/k}. Scales
    // correctly even when coefficients span many orders of magnitude.
    let lead = reduced.leading_coefficient();
    let mut radius = 0.0f64;
    for k in 1..=m {
        let ratio = (reduced.coefficients[m - k] / lead).norm();
        if ratio > 0.0 {
            radius = radius.max(ratio.powf(1.0 / k as f64));
        }
    }
    let radius = (2.0 * radius).max(1e-3);

    let mut z: Vec<Complex64> = (0..m)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64) + 0.43;
            radius * Complex64::from_polar(1.0, angle)
        })
        .collect();
    let mut converged = vec![false; m];
    let mut last_residual = f64::INFINITY;

    for _ in 0..ROOT_ITERATION_CAP {
        let mut moved = 0.0f64;
        for k in 0..m {
            if converged[k] {
                continue;
            }
            let (pv, dpv) = reduced.eval_with_derivative(z[k]);
            if pv.norm() <= reduced.eval_noise_floor(z[k]) {
                converged[k] = true;
                continue;
            }
            let newton = if dpv.norm() == 0.0 {
                // Critical point: kick off it deterministically.
                Complex64::new(ROOT_TOLERANCE.sqrt(), ROOT_TOLERANCE.sqrt())
            } else {
                pv / dpv
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != k {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let correction = if denom.norm() < 1e-300 { newton } else { newton / denom };
            z[k] -= correction;
            let rel = correction.norm() / (1.0 + z[k].norm());
            moved = moved.max(rel);
            if rel <= ROOT_TOLERANCE {
                converged[k] = true;
            }
        }
        last_residual = moved;
        if converged.iter().all(|&c| c) {
            break;
        }
    }

    if !converged.iter().all(|&c| c) {
        return Err(Error::NonConvergence { iterations: ROOT_ITERATION_CAP, residual: last_residual });
    }

    // Certify every root against the residual contract.
    let max_coeff = p.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for &r in &z {
        let bound = 1e-10 * (1.0 + max_coeff) * (1.0 + r.norm()).powi(degree as i32);
        let residual = p.eval(r).norm();
        if residual > bound {
            return Err(Error::NonConvergence { iterations: ROOT_ITERATION_CAP, residual });
        }
    }

    roots.extend(z);
    // Deterministic order: by real part, then imaginary.
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite roots"));
    Ok(RootSet { roots, leading_coefficient: p.leading_coefficient() })
}

/// Max |p(z)| over a nonempty sample set.
pub fn sup_norm(p: &ComplexPolynomial, samples: &[Complex64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    Ok(samples.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max))
}
