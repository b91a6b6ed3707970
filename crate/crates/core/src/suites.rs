//! Registered invariant suites. Each suite samples one family of identities
//! on a list of factors and reports residual statistics.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{Element, Factor, JbElement, SpinEmbedding};
use crate::lattice::{canonical_quadrangle, canonical_trangle, leq, minimal_projection, random_subtripotent, Tripotent};
use crate::numerics::{Tolerance, ONE};
use crate::preserver::trial::{random_tripotent, trial_rng};
use crate::spectral::{range_tripotent, resolve};
use crate::truncation::{annihilator_element_formula_check, characterize, in_inner_annihilator, is_truncation, ttp};

pub const SUITE_IDS: [&str; 8] = [
    "peirce-rules",
    "quadratic-annihilator",
    "truncation-characterizations",
    "tripotent-truncation-order",
    "spin-embedding",
    "gelfand-naimark",
    "jordan-identity",
    "ttp-values",
];

/// Residual statistics for one factor (or fixed instance) of a suite.
#[derive(Debug, Clone, Serialize)]
pub struct FactorStats {
    pub factor: String,
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub id: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub per_factor: Vec<FactorStats>,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    checks: usize,
    failures: usize,
    residuals: usize,
    max_residual: f64,
    sum_residual: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn fail(&mut self, what: String) {
        self.failures += 1;
        self.first_failure.get_or_insert(what);
    }

    /// A numeric check passing when `r ≤ limit`.
    fn residual(&mut self, r: f64, limit: f64, what: impl FnOnce() -> String) {
        self.checks += 1;
        self.residuals += 1;
        self.max_residual = self.max_residual.max(r);
        self.sum_residual += r;
        if r.is_nan() || r > limit {
            self.fail(format!("{}: residual {r:.3e} > {limit:.1e}", what()));
        }
    }

    fn flag(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn error(e: Error) -> Self {
        let mut t = Tally { checks: 1, ..Default::default() };
        t.fail(format!("error: {e}"));
        t
    }

    fn merge(&mut self, o: Tally) {
        self.checks += o.checks;
        self.failures += o.failures;
        self.residuals += o.residuals;
        self.max_residual = self.max_residual.max(o.max_residual);
        self.sum_residual += o.sum_residual;
        if self.first_failure.is_none() {
            self.first_failure = o.first_failure;
        }
    }

    fn stats(&self, factor: String) -> FactorStats {
        let mean_residual = if self.residuals == 0 { 0.0 } else { self.sum_residual / self.residuals as f64 };
        FactorStats { factor, checks: self.checks, failures: self.failures, max_residual: self.max_residual, mean_residual }
    }
}

/// `‖lhs − rhs‖∞` relative to the largest term.
fn relative(lhs: &Element, terms: &[&Element], rhs: &Element) -> f64 {
    let scale = terms.iter().map(|t| t.max_abs()).fold(lhs.max_abs().max(rhs.max_abs()), f64::max).max(1.0);
    lhs.max_abs_diff(rhs) / scale
}

/// `{a,b,{x,y,z}} = {{a,b,x},y,z} − {x,{b,a,y},z} + {x,y,{a,b,z}}`.
pub fn jordan_identity_residual(a: &Element, b: &Element, x: &Element, y: &Element, z: &Element) -> Result<f64> {
    let t = Element::triple;
    let lhs = t(a, b, &t(x, y, z)?)?;
    let p = t(&t(a, b, x)?, y, z)?;
    let q = t(x, &t(b, a, y)?, z)?;
    let r = t(x, y, &t(a, b, z)?)?;
    let rhs = p.minus(&q).plus(&r);
    Ok(relative(&lhs, &[&p, &q, &r], &rhs))
}

/// `|‖x^[3]‖ − ‖x‖³| / max(1, ‖x‖³)`.
pub fn gelfand_naimark_residual<T: JbElement>(x: &T) -> f64 {
    let n3 = x.norm().powi(3);
    (x.cube().norm() - n3).abs() / n3.max(1.0)
}

/// Largest violation of `{E_i,E_j,E_k} ⊆ E_{i−j+k}` (with `E_m = 0` outside
/// `0..=2`) and of `{E₀,E₂,E} = {E₂,E₀,E} = 0`, on random Peirce components.
pub fn peirce_rule_residual<R: Rng + ?Sized>(e: &Tripotent<Element>, rng: &mut R) -> Result<f64> {
    let f = e.element().factor();
    let comp: Vec<Element> = (0..3).map(|j| e.project(j, &Element::random(f, rng))).collect::<Result<_>>()?;
    let w = Element::random(f, rng);
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let t = Element::triple(&comp[i], &comp[j], &comp[k])?;
                let m = i as i64 - j as i64 + k as i64;
                let outside = if (0..=2).contains(&m) { t.minus(&e.project(m as usize, &t)?) } else { t };
                let scale = (comp[i].max_abs() * comp[j].max_abs() * comp[k].max_abs()).max(1.0);
                worst = worst.max(outside.max_abs() / scale);
            }
        }
    }
    for (p, q) in [(&comp[0], &comp[2]), (&comp[2], &comp[0])] {
        let scale = (p.max_abs() * q.max_abs() * w.max_abs()).max(1.0);
        worst = worst.max(Element::triple(p, q, &w)?.max_abs() / scale);
    }
    Ok(worst)
}

/// `z ∈ E₀(e) ⊕ E₁(e)` iff `Q(e)(z) = 0`, on the real Peirce bases. Returns
/// the number of basis elements checked.
pub fn annihilator_basis_check(e: &Tripotent<Element>) -> Result<(usize, bool)> {
    let pd = e.peirce()?;
    let tol = e.tolerance();
    let mut n = 0;
    for j in 0..3 {
        for z in pd.basis(j, e.element()) {
            n += 1;
            if in_inner_annihilator(&z, e.element(), tol)? != (j < 2) {
                return Ok((n, false));
            }
        }
    }
    Ok((n, true))
}

/// Intertwining and norm residuals of the spin/matrix identification.
pub fn embedding_residuals(emb: &SpinEmbedding, x: &Element, y: &Element, z: &Element) -> Result<(f64, f64)> {
    let lhs = emb.embed(&Element::triple(x, y, z)?)?;
    let rhs = Element::triple(&emb.embed(x)?, &emb.embed(y)?, &emb.embed(z)?)?;
    let n = x.norm();
    Ok((lhs.residual(&rhs), (emb.embed(x)?.norm() - n).abs() / n.max(1.0)))
}

/// A random element of rank below the maximum about half the time: a random
/// subset of the spectral pieces of a random element with fresh singular values.
pub fn random_degenerate<R: Rng + ?Sized>(f: Factor, rng: &mut R, tol: &Tolerance) -> Result<Element> {
    let pieces = resolve(&Element::random(f, rng), tol)?.pieces;
    let mut a = Element::zero(f);
    for (k, (_, u)) in pieces.iter().enumerate() {
        if k == 0 || rng.random_bool(0.6) {
            a = a.plus(&u.real(rng.random_range(0.1..3.0)));
        }
    }
    Ok(a)
}

/// `(a, b)` with `a = P₂(w)(b)` for a random `w ≤ r(b)`: a truncation of `b`.
pub fn engineered_truncation<R: Rng + ?Sized>(b: &Element, rng: &mut R, tol: &Tolerance) -> Result<Element> {
    let r = range_tripotent(b, tol)?;
    let w = Tripotent::new(random_subtripotent(r.element(), rng, tol)?, tol)?;
    w.project(2, b)
}

fn run_factor(
    stream: u64,
    trials: usize,
    seed: u64,
    body: impl Fn(&mut ChaCha8Rng, &mut Tally) -> Result<()> + Sync,
) -> Tally {
    let parts: Vec<Tally> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, stream, i);
            let mut t = Tally::default();
            match body(&mut rng, &mut t) {
                Ok(()) => t,
                Err(e) => Tally::error(e),
            }
        })
        .collect();
    parts.into_iter().fold(Tally::default(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

fn suite_body(id: &str, f: Factor, tol: &Tolerance) -> impl Fn(&mut ChaCha8Rng, &mut Tally) -> Result<()> + Sync {
    let id = id.to_string();
    let tol = *tol;
    move |rng, t| {
        let lim = tol.eq_tol;
        match id.as_str() {
            "peirce-rules" => {
                let e = Tripotent::new(random_tripotent(&Element::zero(f), rng, &tol)?, &tol)?;
                t.residual(peirce_rule_residual(&e, rng)?, lim, || format!("Peirce rule in {f}"));
            }
            "quadratic-annihilator" => {
                let e = Tripotent::new(random_tripotent(&Element::zero(f), rng, &tol)?, &tol)?;
                let (n, ok) = annihilator_basis_check(&e)?;
                t.flag(ok, || format!("annihilator of a tripotent in {f} differs from E₀ ⊕ E₁ ({n} basis elements)"));
                let a = random_degenerate(f, rng, &tol)?;
                t.flag(annihilator_element_formula_check(&a, &tol)?, || format!("annihilator of an element of {f} differs from ker P₂(r(a))"));
            }
            "truncation-characterizations" => {
                let b = Element::random(f, rng);
                let a = if rng.random_bool(0.5) { engineered_truncation(&b, rng, &tol)? } else { Element::random(f, rng) };
                let c = characterize(&a, &b, &tol)?;
                t.flag(c.agree(), || format!("characterizations disagree in {f}: {c:?}"));
                if c.definition {
                    t.residual(c.definition_residual, lim, || format!("truncation residual in {f}"));
                }
            }
            "tripotent-truncation-order" => {
                let v = Tripotent::new(random_tripotent(&Element::zero(f), rng, &tol)?, &tol)?;
                let e = match rng.random_range(0..3) {
                    0 => random_subtripotent(v.element(), rng, &tol)?,
                    1 => random_tripotent(&Element::zero(f), rng, &tol)?,
                    _ => v.element().scale(Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))),
                };
                let e = Tripotent::new(e, &tol)?;
                let (tr, le) = (is_truncation(e.element(), v.element(), &tol)?, leq(&e, &v)?);
                t.flag(tr == le, || format!("truncation ({tr}) and order ({le}) disagree in {f}"));
            }
            "gelfand-naimark" => {
                let x = Element::random(f, rng);
                t.residual(gelfand_naimark_residual(&x), lim, || format!("norm of x^[3] in {f}"));
            }
            "jordan-identity" => {
                let v: Vec<Element> = (0..5).map(|_| Element::random(f, rng)).collect();
                let r = jordan_identity_residual(&v[0], &v[1], &v[2], &v[3], &v[4])?;
                t.residual(r, lim, || format!("Jordan identity in {f}"));
            }
            "spin-embedding" => {
                let emb = SpinEmbedding::new(match f {
                    Factor::Spin { n } => n,
                    _ => return Err(Error::InvalidFactor(f.to_string())),
                })?;
                let s = emb.source();
                let (x, y, z) = (Element::random(s, rng), Element::random(s, rng), Element::random(s, rng));
                let (ip, nm) = embedding_residuals(&emb, &x, &y, &z)?;
                t.residual(ip, lim, || format!("intertwining for {s}"));
                t.residual(nm, lim, || format!("norm under embedding for {s}"));
            }
            other => return Err(Error::OutOfRange(format!("unknown suite {other}"))),
        }
        Ok(())
    }
}

/// Transition values of the canonical minimal projections and the canonical
/// quadrangle and trangle.
fn ttp_values(tol: &Tolerance) -> Tally {
    let mut t = Tally::default();
    let lim = tol.eq_tol.min(1e-12);
    let m2 = Factor::Rect { m: 2, n: 2 };
    let run = |t: &mut Tally| -> Result<()> {
        let p1 = minimal_projection(0.5, ONE, m2, tol)?;
        let p2 = minimal_projection(0.5, Complex64::new(0.0, 1.0), m2, tol)?;
        let e11 = Tripotent::new(Element::matrix_unit(2, 2, 0, 0), tol)?;
        t.residual((ttp(&p1, &e11)? - 0.5).norm(), lim, || "ttp(p1, e11) = 1/2".into());
        t.residual((ttp(&p2, &p1)? - 0.5).norm(), lim, || "ttp(p2, p1) = 1/2".into());
        t.residual((ttp(&e11, &e11)? - 1.0).norm(), lim, || "ttp(e11, e11) = 1".into());
        let e = |i, j| Element::matrix_unit(2, 2, i, j);
        let q = Element::triple(&e(0, 0), &e(0, 1), &e(1, 1))?;
        t.residual(q.max_abs_diff(&e(1, 0).real(0.5)), lim, || "{e11, e12, e22} = e21/2".into());
        t.flag(canonical_quadrangle(tol).is_ok(), || "canonical quadrangle".into());
        t.flag(canonical_trangle(tol).is_ok(), || "canonical trangle".into());
        Ok(())
    };
    if let Err(e) = run(&mut t) {
        t.merge(Tally::error(e));
    }
    t
}

/// Runs suite `id` with `trials` samples per factor.
pub fn run_suite(id: &str, factors: &[Factor], trials: usize, seed: u64, tol: &Tolerance) -> Result<SuiteResult> {
    let index = SUITE_IDS.iter().position(|s| *s == id).ok_or_else(|| Error::OutOfRange(format!("unknown suite {id}")))?;
    let mut per_factor = Vec::new();
    let mut total = Tally::default();
    let mut push = |label: String, t: Tally| {
        per_factor.push(t.stats(label));
        total.merge(t);
    };
    match id {
        "ttp-values" => push("Rect(2,2)".into(), ttp_values(tol)),
        "spin-embedding" => {
            for (k, n) in [3, 4].into_iter().enumerate() {
                let f = Factor::Spin { n };
                push(f.to_string(), run_factor(512 + 16 * index as u64 + k as u64, trials, seed, suite_body(id, f, tol)));
            }
        }
        _ => {
            for (k, f) in factors.iter().enumerate() {
                push(f.to_string(), run_factor(512 + 16 * index as u64 + k as u64, trials, seed, suite_body(id, *f, tol)));
            }
        }
    }
    Ok(SuiteResult {
        id: id.to_string(),
        passed: total.failures == 0,
        checks: total.checks,
        failures: total.failures,
        max_residual: total.max_residual,
        per_factor,
        first_failure: total.first_failure,
    })
}
