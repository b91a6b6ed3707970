//! Structural consequences every truncation preserver must satisfy, checked
//! on sampled inputs against a candidate map.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::factor::{quad, JbElement, SumElement, SumSpace};
use crate::lattice::{is_tripotent, leq, orthogonal, peirce_project, random_subtripotent, tripotent_residual, Tripotent};
use crate::numerics::Tolerance;
use crate::preserver::map::PreserverMap;
use crate::preserver::trial::{complete_tripotent, random_tripotent, trial_rng, Verdict};
use crate::spectral::{cube_root, generalized_inverse, range_tripotent, resolve};
use crate::truncation::{in_inner_annihilator, is_truncation};

/// Identifiers of the consequence checks, in report order.
pub const CONSEQUENCE_IDS: [&str; 9] = [
    "annihilator-preservation",
    "regularity-preservation",
    "tripotent-order-preservation",
    "tripotent-truncation-preservation",
    "peirce-10-preservation",
    "almost-orthogonal-additivity",
    "orthogonal-additivity",
    "peirce-2-preservation",
    "unitary-preservation",
];

#[derive(Debug, Clone, Serialize)]
pub struct ConsequenceWitness {
    pub check: String,
    pub residual: f64,
    pub inputs: Vec<SumElement>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaCheck {
    pub id: String,
    pub checks: usize,
    pub failures: usize,
    pub skipped: usize,
    pub max_residual: f64,
    pub passed: bool,
    pub witness: Option<ConsequenceWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsequenceReport {
    pub map: String,
    pub lemmas: Vec<LemmaCheck>,
    pub all_passed: bool,
    /// A consequence failed although the map passed the preservation test.
    pub inconsistent: bool,
}

impl ConsequenceReport {
    pub fn lemma(&self, id: &str) -> Option<&LemmaCheck> {
        self.lemmas.iter().find(|l| l.id == id)
    }
}

/// One evaluated instance of a consequence.
struct Record {
    ok: bool,
    residual: f64,
    check: &'static str,
    inputs: Vec<SumElement>,
}

#[derive(Default)]
struct Records(Vec<Record>);

impl Records {
    fn push(&mut self, ok: bool, residual: f64, check: &'static str, inputs: &[&SumElement]) {
        self.0.push(Record { ok, residual, check, inputs: inputs.iter().map(|x| (*x).clone()).collect() });
    }

    fn fail(&mut self, check: &'static str, inputs: &[&SumElement]) {
        self.push(false, f64::INFINITY, check, inputs);
    }
}

/// `Δ` together with the space it acts on.
struct Side<'a> {
    map: &'a PreserverMap,
    space: &'a SumSpace,
}

fn scaled_zero_residual(x: &SumElement, scale: f64) -> f64 {
    x.max_abs() / scale.max(1.0)
}

/// Projections of O(1) samples carry rounding noise where the exact value is
/// zero; a nonlinear map must see the exact zero.
fn snap(x: SumElement, tol: &Tolerance) -> SumElement {
    if x.max_abs() <= tol.eq_tol {
        x.zero_like()
    } else {
        x
    }
}

fn tripotent_of(x: &SumElement, tol: &Tolerance) -> Option<Tripotent<SumElement>> {
    Tripotent::new(x.clone(), tol).ok()
}

/// Two orthogonal elements assembled from disjoint sets of spectral pieces.
fn orthogonal_pair(space: &SumSpace, rng: &mut ChaCha8Rng, tol: &Tolerance) -> Result<Option<(SumElement, SumElement)>> {
    let pieces = resolve(&space.random(rng), tol)?.pieces;
    if pieces.len() < 2 {
        return Ok(None);
    }
    let split = rng.random_range(1..pieces.len());
    let zero = space.zero();
    let mut a = zero.clone();
    let mut b = zero;
    for (k, (_, u)) in pieces.iter().enumerate() {
        let s = rng.random_range(0.2..3.0);
        if k < split {
            a = a.plus(&u.real(s));
        } else {
            b = b.plus(&u.real(s));
        }
    }
    Ok(Some((a, b)))
}

fn check_annihilators(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let zero = side.space.zero();
    let dz = d.apply(&zero)?;
    out.push(dz.is_zero(tol), dz.max_abs(), "image of zero", &[&zero]);

    let a = side.space.random(rng);
    let r = range_tripotent(&a, tol)?;
    let killed = snap(r.project(0, &side.space.random(rng))?.plus(&r.project(1, &side.space.random(rng))?), tol);
    let (da, dk) = (d.apply(&a)?, d.apply(&killed)?);
    let res = scaled_zero_residual(&quad(&da, &dk)?, da.max_abs().powi(2) * dk.max_abs());
    out.push(in_inner_annihilator(&dk, &da, tol)?, res, "Q(a)(b) = 0 carried to images", &[&a, &killed]);

    let b = side.space.random(rng);
    let db = d.apply(&b)?;
    let before = in_inner_annihilator(&b, &a, tol)?;
    let after = in_inner_annihilator(&db, &da, tol)?;
    out.push(before == after, 0.0, "Q(a)(b) = 0 iff Q(Δa)(Δb) = 0", &[&a, &b]);

    if let Some((p, q)) = orthogonal_pair(side.space, rng, tol)? {
        let (dp, dq) = (d.apply(&p)?, d.apply(&q)?);
        let ok = in_inner_annihilator(&dq, &dp, tol)? && in_inner_annihilator(&dp, &dq, tol)?;
        let res = scaled_zero_residual(&quad(&dp, &dq)?, dp.max_abs().powi(2) * dq.max_abs())
            .max(scaled_zero_residual(&quad(&dq, &dp)?, dq.max_abs().powi(2) * dp.max_abs()));
        out.push(ok, res, "orthogonal elements have mutually annihilating images", &[&p, &q]);
    }
    Ok(())
}

fn check_regularity(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let x = side.space.random(rng);
    let pieces = resolve(&x, tol)?.pieces;
    let keep = rng.random_range(1..=pieces.len());
    let a = pieces.iter().take(keep).fold(side.space.zero(), |acc, (s, u)| acc.plus(&u.real(*s)));
    let ad = generalized_inverse(&a, tol)?;
    let (da, dad) = (side.map.apply(&a)?, side.map.apply(&ad)?);
    let r1 = quad(&da, &dad)?.residual(&da);
    let r2 = quad(&dad, &da)?.residual(&dad);
    out.push(r1.max(r2) <= tol.eq_tol, r1.max(r2), "Δ(a†) is a generalized inverse witness for Δ(a)", &[&a]);
    Ok(())
}

fn check_tripotent_order(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let template = side.space.zero();
    let v = random_tripotent(&template, rng, tol)?;
    let w = random_subtripotent(&v, rng, tol)?;
    let e = random_tripotent(&template, rng, tol)?;
    let (dv, dw, de) = (d.apply(&v)?, d.apply(&w)?, d.apply(&e)?);
    for (x, dx) in [(&v, &dv), (&w, &dw), (&e, &de)] {
        let res = tripotent_residual(dx);
        out.push(is_tripotent(dx, tol), res, "image of a tripotent is a tripotent", &[x]);
    }
    let (Some(tv), Some(tw), Some(te)) = (tripotent_of(&dv, tol), tripotent_of(&dw, tol), tripotent_of(&de, tol)) else {
        return Ok(());
    };
    out.push(leq(&tw, &tv)?, 0.0, "w ≤ v carried to images", &[&w, &v]);
    let src = leq(&Tripotent::new(e.clone(), tol)?, &Tripotent::new(v.clone(), tol)?)?;
    out.push(src == leq(&te, &tv)?, 0.0, "e ≤ v iff Δe ≤ Δv", &[&e, &v]);

    let minimal = resolve(&side.space.random(rng), tol)?.pieces.remove(0).1;
    let dm = d.apply(&minimal)?;
    match tripotent_of(&dm, tol) {
        Some(t) => out.push(t.is_minimal()?, 0.0, "minimal tripotents map to minimal tripotents", &[&minimal]),
        None => out.fail("minimal tripotents map to minimal tripotents", &[&minimal]),
    }
    let complete = complete_tripotent(&template, rng, tol)?;
    let dc = d.apply(&complete)?;
    match tripotent_of(&dc, tol) {
        Some(t) => out.push(t.is_complete()?, 0.0, "maximal tripotents map to maximal tripotents", &[&complete]),
        None => out.fail("maximal tripotents map to maximal tripotents", &[&complete]),
    }
    Ok(())
}

fn check_tripotent_truncation(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let template = side.space.zero();
    let e = random_tripotent(&template, rng, tol)?;
    let w = random_subtripotent(&e, rng, tol)?;
    let r = random_tripotent(&template, rng, tol)?;
    let p = snap(peirce_project(&r, 2, &e)?, tol);
    let de = d.apply(&e)?;
    for a in [w, p] {
        if is_truncation(&a, &e, tol)? {
            let da = d.apply(&a)?;
            let res = da.cube().residual(&quad(&da, &de)?);
            out.push(res <= tol.eq_tol, res, "truncation of a tripotent carried to images", &[&a, &e]);
        }
    }
    Ok(())
}

fn check_peirce_10(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let e = random_tripotent(&side.space.zero(), rng, tol)?;
    let x = peirce_project(&e, 1, &side.space.random(rng))?.plus(&peirce_project(&e, 0, &side.space.random(rng))?);
    let x = snap(x, tol);
    let (de, dx) = (d.apply(&e)?, d.apply(&x)?);
    let res = scaled_zero_residual(&quad(&de, &dx)?, de.max_abs().powi(2) * dx.max_abs());
    out.push(in_inner_annihilator(&dx, &de, tol)?, res, "E₁(e) ⊕ E₀(e) maps into F₁(Δe) ⊕ F₀(Δe)", &[&e, &x]);
    Ok(())
}

fn check_almost_orthogonal(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let Some((a, b)) = orthogonal_pair(side.space, rng, tol)? else {
        return Ok(());
    };
    let s = cube_root(&a, tol)?.plus(&cube_root(&b, tol)?);
    let (da, db) = (d.apply(&a)?, d.apply(&b)?);
    let z = d.apply(&s)?.cube().minus(&da).minus(&db);
    let ok = in_inner_annihilator(&z, &da, tol)? && in_inner_annihilator(&z, &db, tol)?;
    let res = scaled_zero_residual(&quad(&da, &z)?, da.max_abs().powi(2) * z.max_abs())
        .max(scaled_zero_residual(&quad(&db, &z)?, db.max_abs().powi(2) * z.max_abs()));
    out.push(ok, res, "Δ(a^[1/3] + b^[1/3])^[3] − Δa − Δb annihilated by Δa and Δb", &[&a, &b]);
    Ok(())
}

fn check_orthogonal_additivity(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let pieces: Vec<SumElement> = resolve(&side.space.random(rng), tol)?
        .pieces
        .into_iter()
        .map(|(_, u)| u.scale(num_complex::Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))))
        .collect();
    if pieces.len() < 2 {
        return Ok(());
    }
    let sum = pieces.iter().fold(side.space.zero(), |acc, u| acc.plus(u));
    let images: Vec<SumElement> = pieces.iter().map(|u| d.apply(u)).collect::<Result<_>>()?;
    let image_sum = images.iter().fold(d.codomain.zero(), |acc, u| acc.plus(u));
    let ds = d.apply(&sum)?;
    let res = ds.residual(&image_sum);
    let inputs: Vec<&SumElement> = pieces.iter().collect();
    out.push(res <= tol.eq_tol, res, "Δ(e₁ + … + eₙ) = Δe₁ + … + Δeₙ", &inputs);
    let mut ok = true;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            ok &= orthogonal(&images[i], &images[j], tol)?;
        }
    }
    out.push(ok, 0.0, "images of orthogonal tripotents are orthogonal", &inputs);
    Ok(())
}

fn check_peirce_2(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let d = side.map;
    let e = random_tripotent(&side.space.zero(), rng, tol)?;
    let x = snap(peirce_project(&e, 2, &side.space.random(rng))?, tol);
    let (de, dx) = (d.apply(&e)?, d.apply(&x)?);
    if !is_tripotent(&de, tol) {
        out.fail("E₂(e) maps into F₂(Δe)", &[&e, &x]);
        return Ok(());
    }
    let res = peirce_project(&de, 2, &dx)?.residual(&dx);
    out.push(res <= tol.eq_tol, res, "E₂(e) maps into F₂(Δe)", &[&e, &x]);
    Ok(())
}

fn check_unitaries(side: &Side, rng: &mut ChaCha8Rng, tol: &Tolerance, out: &mut Records) -> Result<()> {
    let u = complete_tripotent(&side.space.zero(), rng, tol)?;
    if !Tripotent::new(u.clone(), tol)?.is_unitary()? {
        return Ok(());
    }
    let du = side.map.apply(&u)?;
    match tripotent_of(&du, tol) {
        Some(t) => out.push(t.is_unitary()?, tripotent_residual(&du), "unitaries map to unitaries", &[&u]),
        None => out.push(false, tripotent_residual(&du), "unitaries map to unitaries", &[&u]),
    }
    Ok(())
}

type CheckFn = fn(&Side, &mut ChaCha8Rng, &Tolerance, &mut Records) -> Result<()>;

fn check_fn(id: &str) -> Option<CheckFn> {
    Some(match id {
        "annihilator-preservation" => check_annihilators,
        "regularity-preservation" => check_regularity,
        "tripotent-order-preservation" => check_tripotent_order,
        "tripotent-truncation-preservation" => check_tripotent_truncation,
        "peirce-10-preservation" => check_peirce_10,
        "almost-orthogonal-additivity" => check_almost_orthogonal,
        "orthogonal-additivity" => check_orthogonal_additivity,
        "peirce-2-preservation" => check_peirce_2,
        "unitary-preservation" => check_unitaries,
        _ => return None,
    })
}

fn run_lemma(id: &str, index: u64, map: &PreserverMap, inverse: &PreserverMap, trials: usize, seed: u64, tol: &Tolerance) -> LemmaCheck {
    let f = check_fn(id).expect("registered id");
    let forward = Side { map, space: &map.domain };
    let backward = Side { map: inverse, space: &inverse.domain };
    let per_trial: Vec<(Records, usize)> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut out = Records::default();
            let mut skipped = 0;
            for (k, side) in [&forward, &backward].into_iter().enumerate() {
                let mut rng = trial_rng(seed, 16 + 2 * index + k as u64, i);
                if f(side, &mut rng, tol, &mut out).is_err() {
                    skipped += 1;
                }
            }
            (out, skipped)
        })
        .collect();
    let mut report = LemmaCheck {
        id: id.to_string(),
        checks: 0,
        failures: 0,
        skipped: 0,
        max_residual: 0.0,
        passed: true,
        witness: None,
    };
    for (records, skipped) in per_trial {
        report.skipped += skipped;
        for r in records.0 {
            report.checks += 1;
            if r.residual.is_finite() {
                report.max_residual = report.max_residual.max(r.residual);
            }
            if !r.ok {
                report.failures += 1;
                if report.witness.is_none() {
                    report.witness = Some(ConsequenceWitness { check: r.check.to_string(), residual: r.residual, inputs: r.inputs });
                }
            }
        }
    }
    report.passed = report.failures == 0;
    report
}

/// Checks each consequence with `trials` samples per direction.
///
/// `ids` restricts the run to the listed checks (all when empty). Pass the
/// preservation verdict to flag failures that contradict a passing map.
pub fn verify_consequences(
    map: &PreserverMap,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
    ids: &[&str],
    preservation: Option<Verdict>,
) -> ConsequenceReport {
    let inverse = map.invert();
    let lemmas: Vec<LemmaCheck> = CONSEQUENCE_IDS
        .iter()
        .enumerate()
        .filter(|(_, id)| ids.is_empty() || ids.contains(id))
        .map(|(k, id)| run_lemma(id, k as u64, map, &inverse, trials, seed, tol))
        .collect();
    let all_passed = lemmas.iter().all(|l| l.passed);
    ConsequenceReport {
        map: map.name.clone(),
        inconsistent: preservation == Some(Verdict::Pass) && !all_passed,
        all_passed,
        lemmas,
    }
}
