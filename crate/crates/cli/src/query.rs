//! Single-query subcommands on element files.

use std::fmt::Write as _;
use std::path::Path;

use jbtriple::lattice::tripotent_residual;
use jbtriple::spectral::{cube_root, generalized_inverse, inverse_residuals, range_tripotent};
use jbtriple::truncation::{characterize, ttp, Characterizations};
use jbtriple::{AnyElement, JbElement, SumElement, Tolerance, Tripotent};
use serde::Serialize;

use crate::error::CliResult;
use crate::io::{read_element, render};
use crate::{Outcome, EXIT_ERROR, EXIT_NO, EXIT_OK};

fn emit<T: Serialize>(command: &str, json: bool, body: T, human: String, code: i32) -> CliResult<Outcome> {
    let text = if json { render(command, body)? } else { human };
    Ok(Outcome::new(code, text))
}

fn compact(x: &AnyElement) -> CliResult<String> {
    Ok(serde_json::to_string(x)?)
}

#[derive(Serialize)]
struct TruncationBody {
    characterizations: Characterizations,
    agree: bool,
    truncation: bool,
}

pub fn check_truncation(a: &Path, b: &Path, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let (a, b) = (read_element(a)?.into_sum(), read_element(b)?.into_sum());
    let c = characterize(&a, &b, tol)?;
    let agree = c.agree();
    let mut h = String::new();
    writeln!(h, "definition     {{a,a,a}} = {{a,b,a}}       {:<5}  residual {:.3e}", c.definition, c.definition_residual).ok();
    writeln!(h, "decomposition  Q(a)(b - a) = 0           {:<5}", c.decomposition).ok();
    writeln!(h, "peirce         P2(r(a))(b) = a           {:<5}  residual {:.3e}", c.peirce, c.peirce_residual).ok();
    let code = if !agree {
        writeln!(h, "error: characterizations disagree at eq_tol {:e}", tol.eq_tol).ok();
        EXIT_ERROR
    } else if c.definition {
        writeln!(h, "verdict: a is a truncation of b").ok();
        EXIT_OK
    } else {
        writeln!(h, "verdict: a is not a truncation of b").ok();
        EXIT_NO
    };
    emit("check-truncation", json, TruncationBody { characterizations: c, agree, truncation: agree && c.definition }, h, code)
}

#[derive(Serialize)]
struct ElementBody<'a> {
    operation: &'a str,
    input: AnyElement,
    result: AnyElement,
    #[serde(flatten)]
    residuals: serde_json::Map<String, serde_json::Value>,
}

fn element_result(
    command: &str,
    input: AnyElement,
    result: SumElement,
    residuals: Vec<(&str, f64)>,
    json: bool,
) -> CliResult<Outcome> {
    let result = input.rewrap(result);
    let mut h = format!("{}\n", compact(&result)?);
    let mut map = serde_json::Map::new();
    for (k, v) in residuals {
        writeln!(h, "{k}: {v:.3e}").ok();
        map.insert(k.to_string(), serde_json::json!(v));
    }
    emit(command, json, ElementBody { operation: command, input, result, residuals: map }, h, EXIT_OK)
}

pub fn range(x: &Path, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let input = read_element(x)?;
    let r = range_tripotent(&input.clone().into_sum(), tol)?.into_element();
    let res = tripotent_residual(&r);
    element_result("range-tripotent", input, r, vec![("tripotent_residual", res)], json)
}

pub fn cube_root_cmd(x: &Path, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let input = read_element(x)?;
    let a = input.clone().into_sum();
    let c = cube_root(&a, tol)?;
    let res = c.cube().residual(&a);
    element_result("cube-root", input, c, vec![("cube_residual", res)], json)
}

pub fn gen_inverse(x: &Path, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let input = read_element(x)?;
    let a = input.clone().into_sum();
    let b = generalized_inverse(&a, tol)?;
    let r = inverse_residuals(&a, &b)?;
    let res = vec![("q_a_residual", r.q_a), ("q_b_residual", r.q_b), ("commutator_residual", r.commutator)];
    element_result("gen-inverse", input, b, res, json)
}

#[derive(Serialize)]
struct TripotentFacts {
    minimal: bool,
    complete: bool,
    unitary: bool,
    peirce_dims: [usize; 3],
}

fn facts(e: &Tripotent<SumElement>) -> CliResult<TripotentFacts> {
    Ok(TripotentFacts {
        minimal: e.is_minimal()?,
        complete: e.is_complete()?,
        unitary: e.is_unitary()?,
        peirce_dims: e.peirce()?.complex_dims(),
    })
}

fn facts_line(f: &TripotentFacts) -> String {
    format!(
        "Peirce dimensions (E0, E1, E2) = ({}, {}, {})\nminimal: {}  complete: {}  unitary: {}\n",
        f.peirce_dims[0], f.peirce_dims[1], f.peirce_dims[2], f.minimal, f.complete, f.unitary
    )
}

#[derive(Serialize)]
struct PeirceBody {
    #[serde(flatten)]
    facts: TripotentFacts,
    projections: Option<[AnyElement; 3]>,
}

pub fn peirce(e: &Path, x: Option<&Path>, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let wrap = read_element(e)?;
    let t = Tripotent::new(wrap.clone().into_sum(), tol)?;
    let f = facts(&t)?;
    let mut h = facts_line(&f);
    let projections = match x {
        Some(p) => {
            let x = read_element(p)?.into_sum();
            let mut out = Vec::new();
            for j in 0..3 {
                let y = wrap.rewrap(t.project(j, &x)?);
                writeln!(h, "P{j}(e)(x) = {}", compact(&y)?).ok();
                out.push(y);
            }
            Some([out[0].clone(), out[1].clone(), out[2].clone()])
        }
        None => None,
    };
    emit("peirce", json, PeirceBody { facts: f, projections }, h, EXIT_OK)
}

#[derive(Serialize)]
struct TripotentBody {
    tripotent: bool,
    residual: f64,
    #[serde(flatten)]
    facts: Option<TripotentFacts>,
}

pub fn tripotent_check(x: &Path, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let x = read_element(x)?.into_sum();
    let residual = tripotent_residual(&x);
    let (tripotent, facts) = match Tripotent::new(x, tol) {
        Ok(t) => (true, Some(facts(&t)?)),
        Err(jbtriple::Error::NotTripotent(_)) => (false, None),
        Err(e) => return Err(e.into()),
    };
    let mut h = format!("tripotent: {tripotent}  residual {residual:.3e}\n");
    if let Some(f) = &facts {
        h.push_str(&facts_line(f));
    }
    let code = if tripotent { EXIT_OK } else { EXIT_NO };
    emit("tripotent-check", json, TripotentBody { tripotent, residual, facts }, h, code)
}

#[derive(Serialize)]
struct TtpBody {
    re: f64,
    im: f64,
}

pub fn ttp_cmd(e: &Path, v: &Path, tol: &Tolerance, json: bool) -> CliResult<Outcome> {
    let e = Tripotent::new(read_element(e)?.into_sum(), tol)?;
    let v = Tripotent::new(read_element(v)?.into_sum(), tol)?;
    let z = ttp(&e, &v)?;
    let h = format!("ttp(e, v) = {} {} {}i\n", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs());
    emit("ttp", json, TtpBody { re: z.re, im: z.im }, h, EXIT_OK)
}
