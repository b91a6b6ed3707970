//! The falsification campaign driver.

use std::fmt::Write as _;
use std::path::Path;

use jbtriple::preserver::{
    classify, factor_matching, preserves_truncation_of_triple_products, rank_one_preserver_check, verify_consequences,
    Classification, ConsequenceReport, FactorMatching, MapSpec, RankOneReport, TrialReport, Verdict,
};
use jbtriple::{Factor, Tolerance};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::io::{read_json, render, write_file};
use crate::{Outcome, EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_NO, EXIT_OK};

/// Classification sample count.
const CLASSIFY_SAMPLES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct FalsifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub eq_tol: f64,
    pub consequence_trials: usize,
}

impl FalsifyConfig {
    pub fn new(trials: usize, seed: u64, tol: &Tolerance) -> Self {
        Self { trials, seed, eq_tol: tol.eq_tol, consequence_trials: (trials / 10).clamp(10, 200) }
    }
}

#[derive(Debug, Serialize)]
pub struct FalsifyReport {
    pub map: String,
    pub config: FalsifyConfig,
    pub verdict: Verdict,
    pub preservation: TrialReport,
    pub consequences: ConsequenceReport,
    pub classification: Classification,
    pub factor_matching: Option<FactorMatching>,
    pub rank_one: Option<RankOneReport>,
    /// Continuity of the map on rank-one factors is not sampled.
    pub assumptions: Vec<String>,
}

fn is_hilbert(f: &Factor) -> bool {
    matches!(f, Factor::Rect { m, n } if (*m == 1 || *n == 1) && (*m).max(*n) >= 2)
}

pub fn campaign(spec: &MapSpec, cfg: &FalsifyConfig, tol: &Tolerance) -> CliResult<FalsifyReport> {
    if cfg.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let map = spec.build(tol)?;
    let preservation = preserves_truncation_of_triple_products(&map, cfg.trials, cfg.seed, tol);
    let consequences = verify_consequences(&map, cfg.consequence_trials, cfg.seed, tol, &[], Some(preservation.verdict));
    let classification = classify(&map, CLASSIFY_SAMPLES, cfg.seed, tol)?;
    let factor_matching =
        if map.domain.len() > 1 || map.codomain.len() > 1 { Some(factor_matching(&map, CLASSIFY_SAMPLES, cfg.seed, tol)?) } else { None };
    let rank_one = match map.domain.factors() {
        [f] if is_hilbert(f) => Some(rank_one_preserver_check(&map, 4 * CLASSIFY_SAMPLES, cfg.seed, tol)?),
        _ => None,
    };
    let mut assumptions = Vec::new();
    if map.domain.factors().iter().any(|f| f.rank() == 1) {
        assumptions.push("continuity on rank-one factors is assumed, not sampled".to_string());
    }
    let verdict = match preservation.verdict {
        Verdict::Pass if !consequences.all_passed => Verdict::Fail,
        v => v,
    };
    Ok(FalsifyReport {
        map: map.name.clone(),
        config: cfg.clone(),
        verdict,
        preservation,
        consequences,
        classification,
        factor_matching,
        rank_one,
        assumptions,
    })
}

fn summary(r: &FalsifyReport) -> String {
    let mut h = String::new();
    let p = &r.preservation;
    writeln!(h, "map: {}", r.map).ok();
    for (name, d) in [("forward", &p.forward), ("backward", &p.backward)] {
        writeln!(
            h,
            "{name:<8} trials {:>6}  positives {:>6}  nontrivial {:>6}  violations {:>5}  skipped {:>4}",
            d.trials, d.positives, d.nontrivial_positives, d.violations, d.skipped
        )
        .ok();
    }
    for l in &r.consequences.lemmas {
        let mark = if l.passed { "ok  " } else { "FAIL" };
        writeln!(h, "  {mark} {:<36} checks {:>5}  failures {:>4}  max residual {:.3e}", l.id, l.checks, l.failures, l.max_residual).ok();
    }
    writeln!(h, "classification: {}", serde_json::to_string(&r.classification.verdict).unwrap_or_default()).ok();
    if let Some(m) = &r.factor_matching {
        writeln!(h, "factor matching: sigma {:?}  consistent {}", m.sigma, m.is_consistent()).ok();
    }
    if let Some(o) = &r.rank_one {
        writeln!(h, "rank-one: {:?}  consistent {}", o.behaviour, o.consistent).ok();
    }
    if let Some(w) = p.witnesses.first() {
        writeln!(h, "witness ({:?}, trial {}): residual {:.3e} -> image residual {:.3e}", w.direction, w.trial, w.residual, w.image_residual).ok();
    } else if let Some(w) = r.consequences.lemmas.iter().find_map(|l| l.witness.as_ref()) {
        writeln!(h, "consequence witness: {} residual {:.3e}", w.check, w.residual).ok();
    }
    for a in &r.assumptions {
        writeln!(h, "assumption: {a}").ok();
    }
    writeln!(h, "verdict: {}", serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()).ok();
    h
}

pub fn falsify(map: &Path, cfg: &FalsifyConfig, tol: &Tolerance, report: Option<&Path>, json: bool) -> CliResult<Outcome> {
    let spec: MapSpec = read_json(map)?;
    let r = match campaign(&spec, cfg, tol) {
        Err(CliError::Core(e @ jbtriple::Error::NotInvertible(_))) => {
            return Ok(Outcome::with_note(EXIT_ERROR, String::new(), format!("error: {e}")));
        }
        other => other?,
    };
    let rendered = render("falsify", &r)?;
    if let Some(p) = report {
        write_file(p, &rendered)?;
    }
    let code = match r.verdict {
        Verdict::Pass => EXIT_OK,
        Verdict::Fail => EXIT_NO,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    };
    Ok(Outcome::new(code, if json { rendered } else { summary(&r) }))
}
