//! Boundary least squares in an Arnoldi-orthogonalized Krylov basis: the
//! numerical stand-in for Mergelyan approximation on the supported region
//! classes. Sample points are shifted and scaled to the unit disc of the
//! region's bounding circle before orthogonalization, and the fitted
//! combination is converted back to monomial coefficients in the original
//! variable through the recorded Hessenberg recurrence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{ComplexPolynomial, DEGREE_CAP};
use crate::region::CompactRegion;

use super::target::TargetFunction;

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Least-squares polynomial fit of prescribed degree through sampled values.
/// `center`/`radius` define the shift-and-scale normalization. Optional
/// per-sample weights steer the residual distribution (used to enforce
/// pointwise error budgets); `None` means uniform.
pub fn fit_samples(
    points: &[Complex64],
    values: &[Complex64],
    degree: usize,
    center: Complex64,
    radius: f64,
    weights: Option<&[f64]>,
) -> Result<ComplexPolynomial> {
    if degree > DEGREE_CAP {
        return Err(Error::DomainError(format!(
            "degree {degree} above the cap {DEGREE_CAP}"
        )));
    }
    if points.len() != values.len() || points.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    if let Some(ws) = weights {
        if ws.len() != points.len() || ws.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::DomainError("weights must be positive and match the samples".into()));
        }
    }
    if points.len() < degree + 1 {
        return Err(Error::IllConditioned { column: points.len(), residual: f64::INFINITY });
    }
    let m = points.len();
    let r = if radius > 0.0 { radius } else { 1.0 };
    let w: Vec<Complex64> = points.iter().map(|&z| (z - center) / r).collect();

    // Weighted system: fit Q c ~ sqrt(w) values with the basis columns
    // carrying the weights, so the recurrence stays a plain polynomial one.
    let sqrt_w: Vec<f64> = match weights {
        Some(ws) => ws.iter().map(|x| x.sqrt()).collect(),
        None => vec![1.0; m],
    };
    let weighted_values: Vec<Complex64> =
        values.iter().zip(&sqrt_w).map(|(&v, &sw)| v * sw).collect();

    // Arnoldi orthogonalization of the sample Vandermonde system, with a
    // reorthogonalization pass, tracking both the discrete basis vectors and
    // their polynomial coefficients in the scaled variable.
    let col0: Vec<Complex64> = sqrt_w.iter().map(|&sw| Complex64::new(sw, 0.0)).collect();
    let n0 = norm(&col0);
    let scale0 = 1.0 / n0;
    let mut basis: Vec<Vec<Complex64>> =
        vec![col0.iter().map(|&c| c * scale0).collect()];
    let mut basis_polys: Vec<ComplexPolynomial> =
        vec![ComplexPolynomial::constant(Complex64::new(scale0, 0.0))];

    for k in 0..degree {
        let mut v: Vec<Complex64> = basis[k].iter().zip(&w).map(|(&q, &wi)| q * wi).collect();
        let initial_norm = norm(&v);
        let mut poly = shift_up(&basis_polys[k]);
        for j in 0..=k {
            let h = inner(&basis[j], &v);
            for (vi, qi) in v.iter_mut().zip(&basis[j]) {
                *vi -= h * qi;
            }
            poly = poly.add(&basis_polys[j].scale(-h));
        }
        for j in 0..=k {
            let h2 = inner(&basis[j], &v);
            for (vi, qi) in v.iter_mut().zip(&basis[j]) {
                *vi -= h2 * qi;
            }
            poly = poly.add(&basis_polys[j].scale(-h2));
        }
        let sub = norm(&v);
        if !(sub > 1e-14 * initial_norm.max(1e-300)) {
            return Err(Error::IllConditioned { column: k + 1, residual: sub });
        }
        let inv = Complex64::new(1.0 / sub, 0.0);
        for vi in v.iter_mut() {
            *vi *= inv;
        }
        basis.push(v);
        basis_polys.push(poly.scale(inv));
    }

    // Orthogonality residual check across a deterministic pair sample.
    let cols = basis.len();
    let mut ortho_residual = 0.0f64;
    for i in 0..cols {
        ortho_residual = ortho_residual.max((norm(&basis[i]) - 1.0).abs());
        let j = (i + cols / 2) % cols;
        if j != i {
            ortho_residual = ortho_residual.max(inner(&basis[i], &basis[j]).norm());
        }
    }
    if ortho_residual > 1e-8 {
        return Err(Error::IllConditioned { column: cols, residual: ortho_residual });
    }

    let mut combined = ComplexPolynomial::zero();
    for (q, p) in basis.iter().zip(&basis_polys) {
        let coeff = inner(q, &weighted_values);
        combined = combined.add(&p.scale(coeff));
    }

    // Back to the original variable: p(z) = combined((z - center)/r).
    Ok(combined.compose_affine(Complex64::new(1.0 / r, 0.0), -center / r))
}

fn shift_up(p: &ComplexPolynomial) -> ComplexPolynomial {
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend_from_slice(p.coefficients());
    ComplexPolynomial::new(coeffs)
}

/// Lawson-reweighted least squares: repeated weighted fits with weights
/// scaled by the residuals push the solution from the L2 optimum toward the
/// discrete minimax of |residual| / allowed. Returns the iterate with the
/// best worst-case ratio.
pub fn sup_refined_fit(
    points: &[Complex64],
    values: &[Complex64],
    degree: usize,
    center: Complex64,
    radius: f64,
    allowed: &[f64],
    iterations: usize,
) -> Result<ComplexPolynomial> {
    if allowed.len() != points.len() || allowed.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::DomainError("allowed-error budgets must be positive per sample".into()));
    }
    let mut weights: Vec<f64> = allowed.iter().map(|e| 1.0 / (e * e)).collect();
    let mut best: Option<(f64, ComplexPolynomial)> = None;
    for _ in 0..iterations.max(1) {
        let candidate = fit_samples(points, values, degree, center, radius, Some(&weights))?;
        let ratios: Vec<f64> = points
            .iter()
            .zip(values)
            .zip(allowed)
            .map(|((&z, &v), &e)| (candidate.eval(z) - v).norm() / e)
            .collect();
        let worst = ratios.iter().cloned().fold(0.0, f64::max);
        if best.as_ref().map(|(b, _)| worst < *b).unwrap_or(true) {
            best = Some((worst, candidate));
        }
        // Lawson update, guarded against collapse.
        let mut total = 0.0;
        for (w, r) in weights.iter_mut().zip(&ratios) {
            *w *= r.max(1e-6);
            total += *w;
        }
        if !(total > 0.0) || !total.is_finite() {
            break;
        }
        let scale = weights.len() as f64 / total;
        for w in weights.iter_mut() {
            *w *= scale;
        }
    }
    Ok(best.expect("at least one iteration ran").1)
}

/// Bounding-circle normalization for a region: center of the bounding box
/// and half its diagonal.
pub fn bounding_circle(region: &CompactRegion) -> (Complex64, f64) {
    let bbox = region.bbox();
    let center = bbox.center();
    let radius = (0.5 * bbox.diagonal()).max(1e-12);
    (center, radius)
}

/// Fits `f` on quasi-uniform boundary samples of K (components, filaments,
/// and isolated points), `samples` per element, at the given degree. A few
/// Lawson reweighting rounds pull the plain least-squares solution toward
/// the discrete minimax, which is what the sup-norm contracts care about.
pub fn polynomial_least_squares(
    f: &TargetFunction,
    region: &CompactRegion,
    degree: usize,
    samples: usize,
) -> Result<ComplexPolynomial> {
    let points = region.boundary_samples(samples);
    if points.len() < 4 * degree.max(1) {
        return Err(Error::DomainError(format!(
            "need at least {} samples for degree {degree}, got {}",
            4 * degree.max(1),
            points.len()
        )));
    }
    let values: Vec<Complex64> = points.iter().map(|&z| f.eval(z)).collect();
    let (center, radius) = bounding_circle(region);
    let allowed = vec![1.0; points.len()];
    sup_refined_fit(&points, &values, degree, center, radius, &allowed, 12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{CompactRegion, ComponentShape, Filament, JordanComponent};

    fn unit_disc_region() -> CompactRegion {
        let c = JordanComponent::new(0, ComponentShape::Disc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        })
        .unwrap();
        CompactRegion::new(vec![c], vec![], vec![]).unwrap()
    }

    fn segment_region() -> CompactRegion {
        let f = Filament::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        CompactRegion::new(vec![], vec![f], vec![]).unwrap()
    }

    #[test]
    fn exact_recovery_of_cubic() {
        let k = unit_disc_region();
        let target = ComplexPolynomial::new(vec![
            Complex64::new(1.0, -0.5),
            Complex64::new(0.0, 2.0),
            Complex64::new(-3.0, 0.1),
            Complex64::new(0.7, 0.7),
        ]);
        let f = TargetFunction::poly(target.clone());
        let fit = polynomial_least_squares(&f, &k, 3, 128).unwrap();
        for (a, b) in fit.coefficients().iter().zip(target.coefficients()) {
            assert!((a - b).norm() <= 1e-10, "coefficient mismatch {a} vs {b}");
        }
    }

    #[test]
    fn exp_on_disc_close_to_taylor_tail() {
        let k = unit_disc_region();
        let f = TargetFunction::exp();
        let fit = polynomial_least_squares(&f, &k, 8, 512).unwrap();
        // Oracle: the degree-8 Taylor truncation tail of exp on |z| <= 1.
        let mut tail = 0.0;
        let mut factorial = 40320.0; // 8!
        for j in 9..40 {
            factorial *= j as f64;
            tail += 1.0 / factorial;
        }
        let mut sup = 0.0f64;
        for j in 0..4096 {
            let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 4096.0);
            sup = sup.max((fit.eval(z) - z.exp()).norm());
        }
        assert!(sup <= 2.0 * tail, "fit error {sup:.3e} vs tail {tail:.3e}");
    }

    #[test]
    fn absolute_value_on_segment() {
        let k = segment_region();
        let f = TargetFunction::custom("abs", |z: Complex64| Complex64::new(z.re.abs(), 0.0));
        let fit = polynomial_least_squares(&f, &k, 10, 512).unwrap();
        let mut sup = 0.0f64;
        for j in 0..10_000 {
            let x = -1.0 + 2.0 * j as f64 / 9_999.0;
            sup = sup.max((fit.eval(Complex64::new(x, 0.0)).re - x.abs()).abs());
        }
        assert!(sup <= 0.05, "sup error {sup:.4}");
    }

    #[test]
    fn insufficient_samples_rejected() {
        let k = unit_disc_region();
        let f = TargetFunction::exp();
        assert!(polynomial_least_squares(&f, &k, 10, 16).is_err());
    }

    #[test]
    fn degenerate_samples_are_ill_conditioned() {
        // All sample points identical: the Krylov column collapses.
        let pts = vec![Complex64::new(0.5, 0.5); 32];
        let vals = vec![Complex64::new(1.0, 0.0); 32];
        let result = fit_samples(&pts, &vals, 3, Complex64::new(0.0, 0.0), 1.0, None);
        assert!(matches!(result, Err(Error::IllConditioned { .. })));
    }
}
