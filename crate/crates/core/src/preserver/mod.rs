//! Candidate maps `Δ`, the both-directions test for preservation of
//! truncations of triple products, consequence checks, and classification.

pub mod classify;
pub mod consequences;
pub mod gauge;
pub mod map;
pub mod matching;
pub mod spec;
pub mod trial;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use classify::{classify, Classification, FactorTag, LinearityVerdict};
pub use consequences::{verify_consequences, ConsequenceReport, LemmaCheck, CONSEQUENCE_IDS};
pub use gauge::{gauge_properties, gauge_samples, GaugeReport};
pub use map::{Linearity, PreserverMap, Recipe, ScalarFunction};
pub use matching::{factor_matching, rank_one_preserver_check, FactorMatching, RankOneReport};
pub use spec::MapSpec;
pub use trial::{preserves_truncation_of_triple_products, TrialReport, Verdict, Witness};

use crate::error::Result;
use crate::factor::{Element, Factor, SumElement, SumSpace};
use crate::numerics::Tolerance;

/// A map together with the linearity type it was built with.
#[derive(Debug, Clone)]
pub struct CatalogueEntry {
    pub map: PreserverMap,
    pub expected: LinearityVerdict,
}

fn m2() -> Factor {
    Factor::Rect { m: 2, n: 2 }
}

/// Triple isomorphisms: each must pass the preservation test.
pub fn soundness_catalogue(seed: u64) -> Result<Vec<CatalogueEntry>> {
    use LinearityVerdict::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym2 = Factor::Sym { n: 2 };
    let spin3 = Factor::Spin { n: 3 };
    let entry = |map, expected| CatalogueEntry { map, expected };
    let split = PreserverMap::direct_sum(vec![
        PreserverMap::random_unitary_multiplier(m2(), &mut rng)?,
        PreserverMap::conjugation(sym2)?,
        PreserverMap::random_spin_orthogonal(spin3, &mut rng)?,
    ])?;
    let rect23 = Factor::Rect { m: 2, n: 3 };
    Ok(vec![
        entry(PreserverMap::random_unitary_multiplier(m2(), &mut rng)?, ComplexLinear),
        entry(PreserverMap::conjugation(m2())?, ConjugateLinear),
        entry(PreserverMap::transpose(m2())?, ComplexLinear),
        entry(PreserverMap::random_spin_orthogonal(spin3, &mut rng)?, ComplexLinear),
        entry(PreserverMap::random_congruence(sym2, &mut rng)?, ComplexLinear),
        entry(PreserverMap::factor_swap(m2())?, ComplexLinear),
        entry(split, RealLinearSplit(vec![FactorTag::L, FactorTag::Cl, FactorTag::L])),
        entry(PreserverMap::random_congruence(Factor::Antisym { n: 4 }, &mut rng)?, ComplexLinear),
        entry(
            PreserverMap::compose(vec![
                PreserverMap::random_unitary_multiplier(rect23, &mut rng)?,
                PreserverMap::transpose(rect23)?,
                PreserverMap::conjugation(Factor::Rect { m: 3, n: 2 })?,
            ])?,
            ConjugateLinear,
        ),
    ])
}

/// Bijections that are not preservers; each must be refuted with a witness.
pub fn broken_catalogue(tol: &Tolerance) -> Result<Vec<PreserverMap>> {
    let space = SumSpace::single(m2());
    let e = |i, j| SumElement::single(Element::matrix_unit(2, 2, i, j));
    Ok(vec![
        PreserverMap::norm_shift(PreserverMap::identity(space.clone()), 0.1, e(0, 0))?,
        PreserverMap::coordinate_conjugation(m2(), 0)?,
        PreserverMap::peirce_swap()?,
        PreserverMap::inverse_gauge_e11(m2(), tol)?,
        PreserverMap::point_swaps(PreserverMap::identity(space), vec![(e(0, 0), e(1, 1))])?,
    ])
}

/// `λ ↦ λ⁻¹`, `0 ↦ 0` on the one-dimensional factor `ℂ = Rect(1,1)`.
pub fn inverse_gauge_on_c(tol: &Tolerance) -> Result<PreserverMap> {
    PreserverMap::inverse_gauge_e11(Factor::Rect { m: 1, n: 1 }, tol)
}
