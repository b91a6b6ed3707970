//! Properties of the scalar functions `f_e` with `Δ(λe) = f_e(λ)Δ(e)`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::numerics::complex_normal;
use crate::preserver::map::ScalarFunction;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyCheck {
    pub holds: bool,
    pub checks: usize,
    pub max_residual: f64,
}

impl PropertyCheck {
    fn new() -> Self {
        PropertyCheck { holds: true, checks: 0, max_residual: 0.0 }
    }

    fn record(&mut self, lhs: Complex64, rhs: Complex64, tol: f64) {
        let r = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0);
        self.checks += 1;
        self.max_residual = self.max_residual.max(r);
        if r.is_nan() || r > tol {
            self.holds = false;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeReport {
    /// `f(0) = 0`.
    pub fixes_zero: PropertyCheck,
    /// `|λ| = 1 ⇒ |f(λ)| = 1`.
    pub preserves_circle: PropertyCheck,
    /// `f(λ²μ̄) = f(λ)² conj(f(μ))`.
    pub triple_multiplicative: PropertyCheck,
    /// `f(λ²) = f(λ)²`.
    pub squares: PropertyCheck,
    /// `f(λ̄) = conj(f(λ))`.
    pub conjugation: PropertyCheck,
    /// `f(λμ) = f(λ)f(μ)`.
    pub multiplicative: PropertyCheck,
    /// `f(r) = r` for real `r`.
    pub fixes_reals: PropertyCheck,
    /// `f(λ + μ) = f(λ) + f(μ)`.
    pub additive: PropertyCheck,
    /// Distinct samples have distinct images.
    pub injective: PropertyCheck,
}

/// Sample scalars mixing generic, real and unimodular values.
pub fn gauge_samples<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<Complex64> {
    (0..count)
        .map(|k| match k % 4 {
            0 => Complex64::from(rng.random_range(-4.0..4.0)),
            1 => Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)),
            _ => complex_normal(rng) * 2.0,
        })
        .collect()
}

/// Evaluates each property on all pairs of consecutive samples.
pub fn gauge_properties(f: &ScalarFunction, samples: &[Complex64], tol: f64) -> GaugeReport {
    let mut r = GaugeReport {
        fixes_zero: PropertyCheck::new(),
        preserves_circle: PropertyCheck::new(),
        triple_multiplicative: PropertyCheck::new(),
        squares: PropertyCheck::new(),
        conjugation: PropertyCheck::new(),
        multiplicative: PropertyCheck::new(),
        fixes_reals: PropertyCheck::new(),
        additive: PropertyCheck::new(),
        injective: PropertyCheck::new(),
    };
    let zero = Complex64::default();
    r.fixes_zero.record(f.apply(zero), zero, tol);
    for (i, &l) in samples.iter().enumerate() {
        let m = samples[(i + 1) % samples.len()];
        let (fl, fm) = (f.apply(l), f.apply(m));
        if l == zero || m == zero {
            continue;
        }
        let unit = l / l.norm();
        r.preserves_circle.record(Complex64::from(f.apply(unit).norm()), Complex64::from(1.0), tol);
        r.triple_multiplicative.record(f.apply(l * l * m.conj()), fl * fl * fm.conj(), tol);
        r.squares.record(f.apply(l * l), fl * fl, tol);
        r.conjugation.record(f.apply(l.conj()), fl.conj(), tol);
        r.multiplicative.record(f.apply(l * m), fl * fm, tol);
        r.fixes_reals.record(f.apply(Complex64::from(l.re)), Complex64::from(l.re), tol);
        r.additive.record(f.apply(l + m), fl + fm, tol);
        if (l - m).norm() > tol {
            r.injective.checks += 1;
            if (fl - fm).norm() <= tol * fl.norm().max(1.0) {
                r.injective.holds = false;
            }
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn report(f: ScalarFunction) -> GaugeReport {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        gauge_properties(&f, &gauge_samples(400, &mut rng), 1e-12)
    }

    #[test]
    fn identity_and_conjugation_have_every_property() {
        for f in [ScalarFunction::Identity, ScalarFunction::Conjugation] {
            let r = report(f);
            for p in [
                &r.fixes_zero,
                &r.preserves_circle,
                &r.triple_multiplicative,
                &r.squares,
                &r.conjugation,
                &r.multiplicative,
                &r.fixes_reals,
                &r.additive,
                &r.injective,
            ] {
                assert!(p.holds && p.checks > 0);
            }
        }
    }

    #[test]
    fn inverse_gauge_is_multiplicative_but_not_additive() {
        let r = report(ScalarFunction::InverseOrZero);
        assert!(r.fixes_zero.holds && r.preserves_circle.holds);
        assert!(r.multiplicative.holds && r.conjugation.holds && r.triple_multiplicative.holds);
        assert!(r.injective.holds);
        assert!(!r.additive.holds);
        assert!(!r.fixes_reals.holds);
    }

    #[test]
    fn inverse_gauge_by_hand() {
        let f = ScalarFunction::InverseOrZero;
        let z = Complex64::new(0.0, 2.0);
        assert!((f.apply(z) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert_eq!(f.apply(Complex64::default()), Complex64::default());
    }

    #[test]
    fn table_permutes_its_support() {
        let a = Complex64::new(2.0, 0.0);
        let b = Complex64::new(0.0, 3.0);
        let f = ScalarFunction::table(vec![(a, b), (b, a)]).unwrap();
        assert_eq!(f.apply(a), b);
        assert_eq!(f.inverse().apply(b), a);
        assert_eq!(f.apply(Complex64::new(1.0, 1.0)), Complex64::new(1.0, 1.0));
        assert!(ScalarFunction::table(vec![(a, b)]).is_err());
        assert!(ScalarFunction::table(vec![(a, Complex64::default()), (Complex64::default(), a)]).is_err());
    }
}
