//! Randomized campaigns for the both-directions truncation relation.

use num_complex::Complex64;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::factor::{quad, JbElement, SumElement, SumSpace};
use crate::lattice::{peirce_project, random_subtripotent};
use crate::numerics::{complex_normal, Tolerance};
use crate::preserver::map::{PreserverMap, Probe};
use crate::spectral::{range_tripotent, resolve};
use crate::truncation::triple_truncation_residual;

/// Nontrivial positives each direction needs before a pass is declared.
pub const MIN_POSITIVES: usize = 100;

/// Witnesses kept per report.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Where a sampled triple came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Random,
    Engineered,
    Tripotent,
    Boundary,
    Targeted,
}

const KINDS: [SampleKind; 5] =
    [SampleKind::Random, SampleKind::Engineered, SampleKind::Tripotent, SampleKind::Boundary, SampleKind::Targeted];

/// A sampled triple `(a, b, c)` for which `a` is a truncation of `Q(b)(c)`
/// while the image relation fails.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub direction: Direction,
    pub trial: u64,
    pub sampler: SampleKind,
    pub a: SumElement,
    pub b: SumElement,
    pub c: SumElement,
    pub residual: f64,
    pub image_residual: f64,
    /// The violation was reproduced from the stored triple alone.
    pub rechecked: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DirectionStats {
    pub trials: usize,
    pub positives: usize,
    pub nontrivial_positives: usize,
    pub violations: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub map: String,
    pub seed: u64,
    pub trials: usize,
    pub forward: DirectionStats,
    pub backward: DirectionStats,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
    pub verdict: Verdict,
}

/// Outcome of one trial.
enum Outcome {
    Skipped,
    Negative,
    Positive { trivial: bool, witness: Option<Witness> },
}

/// Independent generator for trial `index` in direction `dir`.
pub fn trial_rng(seed: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream << 40) | index);
    rng
}

fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Random scalar for probing a line: mostly generic, sometimes real or unimodular.
pub fn line_scalar<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    match rng.random_range(0..4) {
        0 => Complex64::from(rng.random_range(-3.0..3.0)),
        1 => unit_phase(rng),
        _ => complex_normal(rng) * 1.5,
    }
}

/// Nonempty random partial sum of the spectral pieces of a random element,
/// rotated by a random phase.
pub fn random_tripotent<T: JbElement, R: Rng + ?Sized>(template: &T, rng: &mut R, tol: &Tolerance) -> Result<T> {
    let x = template.random_like(rng);
    let pieces = resolve(&x, tol)?.pieces;
    let mut s = template.zero_like();
    for (_, u) in &pieces {
        if rng.random_bool(0.5) {
            s = s.plus(u);
        }
    }
    if s.is_zero(tol) {
        s = pieces[0].1.clone();
    }
    Ok(s.scale(unit_phase(rng)))
}

/// Sum of all pieces of a random element: a maximal tripotent.
pub fn complete_tripotent<T: JbElement, R: Rng + ?Sized>(template: &T, rng: &mut R, tol: &Tolerance) -> Result<T> {
    let x = template.random_like(rng);
    Ok(resolve(&x, tol)?.sum_where(|_| true))
}

/// Truncation-positive triple with `a = P₂(w)(Q(b)(c))` for a random `w ≤ r(Q(b)(c))`.
pub fn engineered_triple<T: JbElement, R: Rng + ?Sized>(b: T, c: T, rng: &mut R, tol: &Tolerance) -> Result<(T, T, T)> {
    let d = quad(&b, &c)?;
    if d.is_zero(tol) {
        return Ok((d.zero_like(), b, c));
    }
    let r = range_tripotent(&d, tol)?;
    let w = random_subtripotent(r.element(), rng, tol)?;
    let a = peirce_project(&w, 2, &d)?;
    Ok((a, b, c))
}

/// A triple `(a, b, c)` with `a` a truncation of `Q(b)(c)` for the given `a`:
/// `b = r(a) + z₀`, `c = Q(r(a))(a) + w₀` with `z₀, w₀ ∈ E₀(r(a))`.
pub fn targeted_triple<T: JbElement, R: Rng + ?Sized>(a: &T, rng: &mut R, tol: &Tolerance) -> Result<(T, T, T)> {
    if a.is_zero(tol) {
        return Ok((a.clone(), a.random_like(rng), a.random_like(rng)));
    }
    let u = range_tripotent(a, tol)?;
    let z0 = u.project(0, &a.random_like(rng))?;
    let w0 = u.project(0, &a.random_like(rng))?;
    let b = u.element().plus(&z0);
    let c = quad(u.element(), a)?.plus(&w0);
    Ok((a.clone(), b, c))
}

/// Draws one triple of the given kind in `space`, aimed at `probes` when targeted.
pub fn sample_triple<R: Rng + ?Sized>(
    kind: SampleKind,
    space: &SumSpace,
    probes: &[Probe],
    rng: &mut R,
    tol: &Tolerance,
) -> Result<(SumElement, SumElement, SumElement)> {
    let rand = |rng: &mut R| space.random(rng);
    let template = space.zero();
    match kind {
        SampleKind::Random => {
            let a = rand(rng);
            Ok((a, rand(rng), rand(rng)))
        }
        SampleKind::Engineered => {
            let (b, c) = (rand(rng), rand(rng));
            engineered_triple(b, c, rng, tol)
        }
        SampleKind::Tripotent => {
            let v = random_tripotent(&template, rng, tol)?;
            let a = if rng.random_bool(0.75) {
                random_subtripotent(&v, rng, tol)?
            } else {
                random_tripotent(&template, rng, tol)?
            };
            Ok((a, v.clone(), v))
        }
        SampleKind::Boundary => match rng.random_range(0..4) {
            0 => Ok((template.clone(), rand(rng), rand(rng))),
            1 => Ok((rand(rng), template.clone(), rand(rng))),
            2 => {
                let u = complete_tripotent(&template, rng, tol)?;
                Ok((u.clone(), u.clone(), u))
            }
            _ => {
                let u = complete_tripotent(&template, rng, tol)?;
                let w = random_subtripotent(&u, rng, tol)?;
                let omega = unit_phase(rng);
                Ok((w.scale(omega.conj()), u.clone(), u.scale(omega)))
            }
        },
        SampleKind::Targeted => {
            let probe = match probes.choose(rng) {
                Some(Probe::Line(e)) => e.scale(line_scalar(rng)),
                Some(Probe::Point(p)) => p.clone(),
                None => rand(rng),
            };
            if probes.is_empty() || rng.random_bool(0.5) {
                targeted_triple(&probe, rng, tol)
            } else if rng.random_bool(0.5) {
                engineered_triple(probe, rand(rng), rng, tol)
            } else {
                let b = rand(rng);
                engineered_triple(b, probe, rng, tol)
            }
        }
    }
}

fn run_trial(map: &PreserverMap, dir: Direction, seed: u64, index: u64, probes: &[Probe], tol: &Tolerance) -> Outcome {
    let stream = match dir {
        Direction::Forward => 1,
        Direction::Backward => 2,
    };
    let mut rng = trial_rng(seed, stream, index);
    let kind = KINDS[(index % KINDS.len() as u64) as usize];
    let mut attempt = || -> Result<Outcome> {
        let (a, b, c) = sample_triple(kind, &map.domain, probes, &mut rng, tol)?;
        let residual = triple_truncation_residual(&a, &b, &c)?;
        if residual > tol.eq_tol {
            return Ok(Outcome::Negative);
        }
        let trivial = a.is_zero(tol);
        let image_residual = triple_truncation_residual(&map.apply(&a)?, &map.apply(&b)?, &map.apply(&c)?)?;
        let witness = (image_residual > tol.eq_tol).then(|| {
            let rechecked = recheck(map, &a, &b, &c, tol).unwrap_or(false);
            Witness { direction: dir, trial: index, sampler: kind, a, b, c, residual, image_residual, rechecked }
        });
        Ok(Outcome::Positive { trivial, witness })
    };
    attempt().unwrap_or(Outcome::Skipped)
}

/// Re-evaluates a witness from scratch: the source relation holds and the image relation fails.
pub fn recheck(map: &PreserverMap, a: &SumElement, b: &SumElement, c: &SumElement, tol: &Tolerance) -> Result<bool> {
    let src = triple_truncation_residual(a, b, c)?;
    let img = triple_truncation_residual(&map.apply(a)?, &map.apply(b)?, &map.apply(c)?)?;
    Ok(src <= tol.eq_tol && img > tol.eq_tol)
}

fn run_direction(
    map: &PreserverMap,
    dir: Direction,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> (DirectionStats, Vec<Witness>) {
    let probes = map.probes();
    let outcomes: Vec<Outcome> =
        (0..trials as u64).into_par_iter().map(|i| run_trial(map, dir, seed, i, &probes, tol)).collect();
    let mut stats = DirectionStats { trials, ..Default::default() };
    let mut witnesses = Vec::new();
    for o in outcomes {
        match o {
            Outcome::Skipped => stats.skipped += 1,
            Outcome::Negative => {}
            Outcome::Positive { trivial, witness } => {
                stats.positives += 1;
                if !trivial {
                    stats.nontrivial_positives += 1;
                }
                if let Some(w) = witness {
                    stats.violations += 1;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push(w);
                    }
                }
            }
        }
    }
    (stats, witnesses)
}

/// Tests "a is a truncation of Q(b)(c) ⇒ Δ(a) is a truncation of Q(Δb)(Δc)"
/// on `trials` samples for `Δ` and, independently, for `Δ⁻¹`.
pub fn preserves_truncation_of_triple_products(
    map: &PreserverMap,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> TrialReport {
    let inverse = map.invert();
    let (forward, mut witnesses) = run_direction(map, Direction::Forward, trials, seed, tol);
    let (backward, back_w) = run_direction(&inverse, Direction::Backward, trials, seed, tol);
    witnesses.extend(back_w.into_iter().take(MAX_WITNESSES.saturating_sub(witnesses.len()).max(1)));
    let failures = forward.violations + backward.violations;
    let verdict = if failures > 0 {
        Verdict::Fail
    } else if forward.nontrivial_positives >= MIN_POSITIVES && backward.nontrivial_positives >= MIN_POSITIVES {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    TrialReport { map: map.name.clone(), seed, trials, forward, backward, failures, witnesses, verdict }
}
