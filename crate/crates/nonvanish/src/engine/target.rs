//! Target functions: the f being approximated. A small closed catalog plus a
//! custom-closure escape hatch used internally for dilated, extended, and
//! glued intermediates.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{self, ComplexPolynomial};
use crate::region::{CompactRegion, Membership};
use crate::zeta::ZetaEvaluator;

#[derive(Clone)]
pub enum TargetKind {
    Const(Complex64),
    Poly(ComplexPolynomial),
    Exp,
    Rational { num: ComplexPolynomial, den: ComplexPolynomial },
    ZetaShift { t: f64, ev: ZetaEvaluator },
    Compose { outer: Box<TargetFunction>, inner: Box<TargetFunction> },
    Custom { label: String, f: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync> },
}

#[derive(Clone)]
pub struct TargetFunction {
    pub kind: TargetKind,
    /// Advisory flag from the function schema; pipelines still verify.
    pub zero_free_interior: bool,
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TargetFunction({})", self.catalog_tag())
    }
}

impl TargetFunction {
    pub fn constant(c: Complex64) -> Self {
        TargetFunction { kind: TargetKind::Const(c), zero_free_interior: c.norm() > 0.0 }
    }

    pub fn poly(p: ComplexPolynomial) -> Self {
        TargetFunction { kind: TargetKind::Poly(p), zero_free_interior: false }
    }

    pub fn exp() -> Self {
        TargetFunction { kind: TargetKind::Exp, zero_free_interior: true }
    }

    pub fn rational(num: ComplexPolynomial, den: ComplexPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidFunction("rational denominator is the zero polynomial".into()));
        }
        Ok(TargetFunction { kind: TargetKind::Rational { num, den }, zero_free_interior: false })
    }

    pub fn zeta_shift(t: f64, ev: ZetaEvaluator) -> Self {
        TargetFunction { kind: TargetKind::ZetaShift { t, ev }, zero_free_interior: false }
    }

    pub fn compose(outer: TargetFunction, inner: TargetFunction) -> Self {
        TargetFunction {
            kind: TargetKind::Compose { outer: Box::new(outer), inner: Box::new(inner) },
            zero_free_interior: false,
        }
    }

    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        TargetFunction {
            kind: TargetKind::Custom { label: label.into(), f: Arc::new(f) },
            zero_free_interior: false,
        }
    }

    pub fn with_zero_free_flag(mut self, flag: bool) -> Self {
        self.zero_free_interior = flag;
        self
    }

    pub fn catalog_tag(&self) -> &str {
        match &self.kind {
            TargetKind::Const(_) => "constant",
            TargetKind::Poly(_) => "polynomial",
            TargetKind::Exp => "exp",
            TargetKind::Rational { .. } => "rational",
            TargetKind::ZetaShift { .. } => "zeta_shift",
            TargetKind::Compose { .. } => "composite",
            TargetKind::Custom { label, .. } => label,
        }
    }

    /// Total evaluation. Zeta shifts use the raw Euler-Maclaurin form;
    /// region-level validity is checked once by `validate_for_region`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match &self.kind {
            TargetKind::Const(c) => *c,
            TargetKind::Poly(p) => p.eval(z),
            TargetKind::Exp => z.exp(),
            TargetKind::Rational { num, den } => num.eval(z) / den.eval(z),
            TargetKind::ZetaShift { t, ev } => ev.euler_maclaurin(z + Complex64::new(0.0, *t)),
            TargetKind::Compose { outer, inner } => outer.eval(inner.eval(z)),
            TargetKind::Custom { f, .. } => f(z),
        }
    }

    /// Construction-time checks against the region the function will be
    /// approximated on: declared rational poles must lie outside K, zeta
    /// shifts must keep K inside the evaluator validity strip, and every
    /// catalog evaluator must be finite on a regional sample set.
    pub fn validate_for_region(&self, region: &CompactRegion) -> Result<()> {
        match &self.kind {
            TargetKind::Rational { den, .. } => {
                let roots = poly::find_roots(den)?;
                for r in roots.roots {
                    if region.contains(r, 0.0) != Membership::Outside {
                        return Err(Error::InvalidFunction(format!(
                            "rational pole at {r} lies on the region"
                        )));
                    }
                }
            }
            TargetKind::ZetaShift { t, ev } => {
                let bbox = region.bbox();
                if bbox.min_re <= ev.min_re {
                    return Err(Error::OutOfValidity(format!(
                        "region reaches Re = {} at or below the zeta validity edge {}",
                        bbox.min_re, ev.min_re
                    )));
                }
                let worst_im = t.abs() + bbox.min_im.abs().max(bbox.max_im.abs());
                if worst_im > ev.t_max {
                    return Err(Error::OutOfValidity(format!(
                        "shifted region reaches |Im| = {worst_im} above the cap {}",
                        ev.t_max
                    )));
                }
                let pole = Complex64::new(1.0, -t);
                if region.contains(pole, 1e-6) != Membership::Outside {
                    return Err(Error::PoleProximity { distance: 0.0 });
                }
            }
            TargetKind::Compose { outer, inner } => {
                inner.validate_for_region(region)?;
                // The outer factor is only checked pointwise below.
                let _ = outer;
            }
            _ => {}
        }
        for z in region.boundary_samples(64).into_iter().chain(region.interior_samples(16)) {
            let v = self.eval(z);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidFunction(format!(
                    "evaluator not finite at {z} (tag {})",
                    self.catalog_tag()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{ComponentShape, JordanComponent};

    fn unit_disc_region() -> CompactRegion {
        let c = JordanComponent::new(0, ComponentShape::Disc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        })
        .unwrap();
        CompactRegion::new(vec![c], vec![], vec![]).unwrap()
    }

    #[test]
    fn catalog_evaluation() {
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(TargetFunction::constant(Complex64::new(2.0, 1.0)).eval(z), Complex64::new(2.0, 1.0));
        assert!((TargetFunction::exp().eval(z) - z.exp()).norm() < 1e-15);
        let p = ComplexPolynomial::new(vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((TargetFunction::poly(p.clone()).eval(z) - (z - 1.0)).norm() < 1e-15);
        let composed = TargetFunction::compose(TargetFunction::exp(), TargetFunction::poly(p));
        assert!((composed.eval(z) - (z - 1.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn rational_pole_on_region_rejected() {
        let k = unit_disc_region();
        let num = ComplexPolynomial::constant(Complex64::new(1.0, 0.0));
        let den = ComplexPolynomial::new(vec![Complex64::new(-0.5, 0.0), Complex64::new(1.0, 0.0)]);
        let f = TargetFunction::rational(num, den).unwrap();
        assert!(f.validate_for_region(&k).is_err());
    }

    #[test]
    fn rational_pole_outside_region_accepted() {
        let k = unit_disc_region();
        let num = ComplexPolynomial::constant(Complex64::new(1.0, 0.0));
        let den = ComplexPolynomial::new(vec![Complex64::new(-5.0, 0.0), Complex64::new(1.0, 0.0)]);
        let f = TargetFunction::rational(num, den).unwrap();
        assert!(f.validate_for_region(&k).is_ok());
    }

    #[test]
    fn zeta_shift_validity_depends_on_region_strip() {
        // Unit disc at the origin leaves the validity strip.
        let k = unit_disc_region();
        let f = TargetFunction::zeta_shift(100.0, ZetaEvaluator::default());
        assert!(f.validate_for_region(&k).is_err());
    }
}
