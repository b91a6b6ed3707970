//! Recovering the factor bijection of a preserver between ℓ∞-sums, and the
//! rank-one Hilbert space check.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{Factor, JbElement, SumElement, SumSpace};
use crate::lattice::{orthogonal, Tripotent};
use crate::numerics::{complex_normal, Tolerance};
use crate::preserver::classify::{factor_tag, FactorTag};
use crate::preserver::map::{PreserverMap, Probe};
use crate::preserver::trial::{line_scalar, trial_rng};
use crate::spectral::resolve;

#[derive(Debug, Clone, Serialize)]
pub struct FactorMatching {
    /// `sigma[i]` is the codomain factor receiving domain factor `i`.
    pub sigma: Vec<Option<usize>>,
    pub domain_ranks: Vec<usize>,
    pub codomain_ranks: Vec<usize>,
    /// Ranks of `C_i` and `D_σ(i)` agree for every matched factor.
    pub ranks_match: bool,
    pub tags: Vec<Option<FactorTag>>,
    pub violations: Vec<String>,
}

impl FactorMatching {
    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty() && self.ranks_match
    }
}

fn support(x: &SumElement, tol: &Tolerance) -> Vec<usize> {
    let scale = x.max_abs().max(1.0);
    x.parts().iter().enumerate().filter(|(_, p)| p.max_abs() > tol.eq_tol * scale).map(|(i, _)| i).collect()
}

fn in_factor<R: Rng + ?Sized>(space: &SumSpace, k: usize, rng: &mut R) -> Result<SumElement> {
    space.embed(k, space.random(rng).part(k).clone())
}

/// Largest family of pairwise orthogonal minimal tripotents found greedily
/// among the spectral pieces of random elements of factor `k`.
pub fn greedy_rank<R: Rng + ?Sized>(space: &SumSpace, k: usize, rounds: usize, rng: &mut R, tol: &Tolerance) -> Result<usize> {
    let mut best = 0;
    let mut chosen: Vec<SumElement> = Vec::new();
    for _ in 0..rounds {
        let x = in_factor(space, k, rng)?;
        for (_, u) in resolve(&x, tol)?.pieces {
            if !Tripotent::new(u.clone(), tol)?.is_minimal()? {
                continue;
            }
            let mut fits = true;
            for c in &chosen {
                fits &= orthogonal(c, &u, tol)?;
            }
            if fits {
                chosen.push(u);
            }
        }
        best = best.max(chosen.len());
        chosen.clear();
    }
    Ok(best)
}

/// Tracks one minimal tripotent per domain factor to recover `σ`, checks
/// `Δ(C_i) ⊆ D_σ(i)` on samples, and compares greedy ranks.
pub fn factor_matching(map: &PreserverMap, samples: usize, seed: u64, tol: &Tolerance) -> Result<FactorMatching> {
    let mut rng = trial_rng(seed, 96, 0);
    let n = map.domain.len();
    let mut sigma = vec![None; n];
    let mut violations = Vec::new();
    for (k, slot) in sigma.iter_mut().enumerate() {
        let x = in_factor(&map.domain, k, &mut rng)?;
        let e = resolve(&x, tol)?.pieces.remove(0).1;
        let s = support(&map.apply(&e)?, tol);
        match s.as_slice() {
            [j] => *slot = Some(*j),
            [] => violations.push(format!("a minimal tripotent of factor {k} maps to zero")),
            _ => violations.push(format!("image of factor {k} straddles factors {s:?}")),
        }
        if let Some(j) = *slot {
            for _ in 0..samples {
                let y = in_factor(&map.domain, k, &mut rng)?;
                let s = support(&map.apply(&y)?, tol);
                if s.iter().any(|&i| i != j) {
                    violations.push(format!("image of factor {k} leaves factor {j}"));
                    break;
                }
            }
        }
    }
    let mut seen = vec![false; map.codomain.len()];
    for j in sigma.iter().flatten() {
        if std::mem::replace(&mut seen[*j], true) {
            violations.push(format!("two factors map into factor {j}"));
        }
    }
    let rounds = 8;
    let domain_ranks: Vec<usize> = (0..n).map(|k| greedy_rank(&map.domain, k, rounds, &mut rng, tol)).collect::<Result<_>>()?;
    let codomain_ranks: Vec<usize> =
        (0..map.codomain.len()).map(|k| greedy_rank(&map.codomain, k, rounds, &mut rng, tol)).collect::<Result<_>>()?;
    let ranks_match = sigma.iter().enumerate().all(|(i, s)| s.is_none_or(|j| domain_ranks[i] == codomain_ranks[j]));
    let tags = (0..n).map(|k| factor_tag(map, k, samples.max(4), &mut rng, tol)).collect::<Result<_>>()?;
    Ok(FactorMatching { sigma, domain_ranks, codomain_ranks, ranks_match, tags, violations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerProductBehaviour {
    Preserved,
    Conjugated,
    Mixed,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankOneReport {
    pub factor: Factor,
    pub samples: usize,
    pub behaviour: InnerProductBehaviour,
    pub max_preserved_residual: f64,
    pub max_conjugated_residual: f64,
    pub isometric: bool,
    /// Continuity on rank-one factors cannot be sampled; it is assumed.
    pub continuity_assumed: bool,
    pub consistent: bool,
}

/// For `Δ` on a Hilbert space `Rect(1,n)` or `Rect(n,1)`, `n ≥ 2`: compares
/// `⟨Δa|Δe⟩` with `⟨a|e⟩` and its conjugate for unit vectors `e`.
pub fn rank_one_preserver_check(map: &PreserverMap, samples: usize, seed: u64, tol: &Tolerance) -> Result<RankOneReport> {
    let factor = match map.domain.factors() {
        [f @ Factor::Rect { m, n }] if (*m == 1 || *n == 1) && m.max(n) >= &2 => *f,
        _ => {
            return Err(Error::NotInFactor {
                factor: map.domain.to_string(),
                reason: "expected a Hilbert space Rect(1,n) or Rect(n,1) with n ≥ 2".into(),
            })
        }
    };
    let mut rng: ChaCha8Rng = trial_rng(seed, 128, 0);
    let probes = map.probes();
    let (mut pres, mut conj, mut norm_defect) = (0.0f64, 0.0f64, 0.0f64);
    for s in 0..samples {
        let a = match (s % 2, probes.get(s % probes.len().max(1))) {
            (0, Some(Probe::Line(e))) => e.scale(line_scalar(&mut rng)),
            (0, Some(Probe::Point(p))) => p.clone(),
            _ => map.domain.random(&mut rng),
        };
        let v = map.domain.random(&mut rng).scale(complex_normal(&mut rng));
        let e = v.real(1.0 / v.norm());
        let (da, de) = (map.apply(&a)?, map.apply(&e)?);
        let lhs = da.inner(&de);
        let rhs = a.inner(&e);
        let scale = a.norm().max(1.0);
        pres = pres.max((lhs - rhs).norm() / scale);
        conj = conj.max((lhs - rhs.conj()).norm() / scale);
        norm_defect = norm_defect.max((da.norm() - a.norm()).abs() / scale);
    }
    let behaviour = if pres <= tol.eq_tol {
        InnerProductBehaviour::Preserved
    } else if conj <= tol.eq_tol {
        InnerProductBehaviour::Conjugated
    } else {
        InnerProductBehaviour::Mixed
    };
    let isometric = norm_defect <= tol.eq_tol;
    Ok(RankOneReport {
        factor,
        samples,
        behaviour,
        max_preserved_residual: pres,
        max_conjugated_residual: conj,
        isometric,
        continuity_assumed: true,
        consistent: behaviour != InnerProductBehaviour::Mixed && isometric,
    })
}
