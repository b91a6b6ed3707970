//! Linearity classification of a candidate map.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::factor::{JbElement, SumElement, SumSpace};
use crate::numerics::{complex_normal, Tolerance, I};
use crate::preserver::map::PreserverMap;
use crate::preserver::trial::trial_rng;
use crate::spectral::resolve;

/// Residual bound for triple-product preservation and isometry of linear verdicts.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// How a map treats multiplication by `i` on one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorTag {
    L,
    Cl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "tags", rename_all = "snake_case")]
pub enum LinearityVerdict {
    ComplexLinear,
    ConjugateLinear,
    RealLinearSplit(Vec<FactorTag>),
    Nonlinear,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub verdict: LinearityVerdict,
    /// Additivity on pairs of orthogonal minimal tripotents.
    pub orthogonal_additive: bool,
    /// Real homogeneity on minimal tripotent lines.
    pub line_homogeneous: bool,
    /// Additivity on general and basis pairs.
    pub additive: bool,
    pub real_homogeneous: bool,
    pub factor_tags: Vec<Option<FactorTag>>,
    pub triple_preserving: Option<bool>,
    pub isometric: Option<bool>,
    pub max_triple_residual: Option<f64>,
    pub max_norm_defect: Option<f64>,
    pub first_failure: Option<String>,
}

struct Tally<'a> {
    tol: &'a Tolerance,
    first_failure: Option<String>,
}

impl Tally<'_> {
    fn check(&mut self, ok: &mut bool, lhs: &SumElement, rhs: &SumElement, what: &str) {
        if !lhs.approx_eq(rhs, self.tol) {
            *ok = false;
            if self.first_failure.is_none() {
                self.first_failure = Some(format!("{what} (residual {:.3e})", lhs.residual(rhs)));
            }
        }
    }
}

fn random_real<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let t: f64 = rng.random_range(0.25..3.0);
    if rng.random_bool(0.5) {
        -t
    } else {
        t
    }
}

fn in_factor<R: Rng + ?Sized>(space: &SumSpace, k: usize, rng: &mut R) -> Result<SumElement> {
    space.embed(k, space.random(rng).part(k).clone())
}

/// Determines the tag of factor `k`: `Δ(λx) = λΔ(x)` or `Δ(λx) = λ̄Δ(x)`
/// for every sample and every complex `λ`.
pub fn factor_tag(map: &PreserverMap, k: usize, samples: usize, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<Option<FactorTag>> {
    let mut linear = true;
    let mut conj = true;
    for s in 0..samples {
        let x = if s % 2 == 0 {
            in_factor(&map.domain, k, rng)?
        } else {
            let y = in_factor(&map.domain, k, rng)?;
            resolve(&y, tol)?.pieces.remove(0).1
        };
        let lambda = if s % 3 == 0 { I } else { complex_normal(rng) };
        let dx = map.apply(&x)?;
        let lhs = map.apply(&x.scale(lambda))?;
        linear &= lhs.approx_eq(&dx.scale(lambda), tol);
        conj &= lhs.approx_eq(&dx.scale(lambda.conj()), tol);
    }
    Ok(match (linear, conj) {
        (true, false) => Some(FactorTag::L),
        (false, true) => Some(FactorTag::Cl),
        _ => None,
    })
}

/// Classifies `map` from `samples` draws per test. Homogeneity is tested on
/// minimal lines and additivity on orthogonal minimal pairs first, then on
/// general pairs and on pairs of real basis vectors.
pub fn classify(map: &PreserverMap, samples: usize, seed: u64, tol: &Tolerance) -> Result<Classification> {
    let mut rng = trial_rng(seed, 64, 0);
    let space = &map.domain;
    let mut tally = Tally { tol, first_failure: None };

    let mut orthogonal_additive = true;
    let mut line_homogeneous = true;
    for _ in 0..samples {
        let pieces = resolve(&space.random(&mut rng), tol)?.pieces;
        for (_, e) in &pieces {
            let t = random_real(&mut rng);
            tally.check(&mut line_homogeneous, &map.apply(&e.real(t))?, &map.apply(e)?.real(t), "real homogeneity on a minimal line");
        }
        if pieces.len() >= 2 {
            let i = rng.random_range(0..pieces.len());
            let j = (i + rng.random_range(1..pieces.len())) % pieces.len();
            let (a, b) = (pieces[i].1.scale(complex_normal(&mut rng)), pieces[j].1.scale(complex_normal(&mut rng)));
            let lhs = map.apply(&a.plus(&b))?;
            let rhs = map.apply(&a)?.plus(&map.apply(&b)?);
            tally.check(&mut orthogonal_additive, &lhs, &rhs, "additivity on orthogonal minimal tripotents");
        }
    }

    let mut additive = true;
    let mut real_homogeneous = true;
    for _ in 0..samples {
        let (x, y) = (space.random(&mut rng), space.random(&mut rng));
        let lhs = map.apply(&x.plus(&y))?;
        tally.check(&mut additive, &lhs, &map.apply(&x)?.plus(&map.apply(&y)?), "additivity on general pairs");
        let t = random_real(&mut rng);
        tally.check(&mut real_homogeneous, &map.apply(&x.real(t))?, &map.apply(&x)?.real(t), "real homogeneity");
    }
    let basis = space.zero().real_basis();
    let images: Vec<SumElement> = basis.iter().map(|b| map.apply(b)).collect::<Result<_>>()?;
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let lhs = map.apply(&basis[i].plus(&basis[j]))?;
            tally.check(&mut additive, &lhs, &images[i].plus(&images[j]), "additivity on basis pairs");
        }
    }

    let factor_tags: Vec<Option<FactorTag>> =
        (0..space.len()).map(|k| factor_tag(map, k, samples.max(4), &mut rng, tol)).collect::<Result<_>>()?;
    if factor_tags.iter().any(|t| t.is_none()) && tally.first_failure.is_none() {
        tally.first_failure = Some("a factor is neither linear nor conjugate-linear".into());
    }

    let linear = orthogonal_additive && line_homogeneous && additive && real_homogeneous;
    let verdict = match factor_tags.iter().copied().collect::<Option<Vec<_>>>() {
        Some(tags) if linear => {
            if tags.iter().all(|t| *t == FactorTag::L) {
                LinearityVerdict::ComplexLinear
            } else if tags.iter().all(|t| *t == FactorTag::Cl) {
                LinearityVerdict::ConjugateLinear
            } else {
                LinearityVerdict::RealLinearSplit(tags)
            }
        }
        _ => LinearityVerdict::Nonlinear,
    };

    let (mut triple_preserving, mut isometric, mut max_triple_residual, mut max_norm_defect) = (None, None, None, None);
    if verdict != LinearityVerdict::Nonlinear {
        let (mut tr, mut nd) = (0.0f64, 0.0f64);
        for _ in 0..samples {
            let (a, b, c) = (space.random(&mut rng), space.random(&mut rng), space.random(&mut rng));
            let lhs = map.apply(&SumElement::triple(&a, &b, &c)?)?;
            let rhs = SumElement::triple(&map.apply(&a)?, &map.apply(&b)?, &map.apply(&c)?)?;
            tr = tr.max(lhs.residual(&rhs));
            let x = a.scale(Complex64::from(rng.random_range(0.1..3.0)));
            nd = nd.max((map.apply(&x)?.norm() - x.norm()).abs() / x.norm().max(1.0));
        }
        triple_preserving = Some(tr <= STRUCTURE_TOL);
        isometric = Some(nd <= STRUCTURE_TOL);
        max_triple_residual = Some(tr);
        max_norm_defect = Some(nd);
    }

    Ok(Classification {
        verdict,
        orthogonal_additive,
        line_homogeneous,
        additive,
        real_homogeneous,
        factor_tags,
        triple_preserving,
        isometric,
        max_triple_residual,
        max_norm_defect,
        first_failure: tally.first_failure,
    })
}
