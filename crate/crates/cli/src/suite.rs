//! The lemma-verification suite runner.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use jbtriple::suites::{run_suite, SuiteResult, SUITE_IDS};
use jbtriple::{Factor, Tolerance};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{read_json, render, write_file};
use crate::{Outcome, EXIT_NO, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub factors: Vec<Factor>,
    pub trials: usize,
    pub seed: u64,
    pub eq_tol: Option<f64>,
    pub rank_tol: Option<f64>,
    /// Suite ids to run; all when empty.
    pub lemmas: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            factors: vec![Factor::Rect { m: 2, n: 2 }, Factor::Sym { n: 2 }, Factor::Spin { n: 3 }],
            trials: 1000,
            seed: 42,
            eq_tol: None,
            rank_tol: None,
            lemmas: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn from_file(path: &Path) -> CliResult<Self> {
        read_json(path)
    }

    pub fn tolerance(&self) -> CliResult<Tolerance> {
        let d = Tolerance::default();
        Ok(match (self.eq_tol, self.rank_tol) {
            (None, None) => d,
            (Some(e), None) => Tolerance::with_eq_tol(e)?,
            (e, r) => Tolerance::new(e.unwrap_or(d.eq_tol), r.unwrap_or(d.rank_tol))?,
        })
    }

    /// Selected suite ids in registration order.
    pub fn selected(&self) -> CliResult<Vec<&'static str>> {
        if let Some(bad) = self.lemmas.iter().find(|l| !SUITE_IDS.contains(&l.as_str())) {
            return Err(CliError::Usage(format!("unknown lemma id {bad:?}; known ids: {}", SUITE_IDS.join(", "))));
        }
        Ok(SUITE_IDS.iter().copied().filter(|id| self.lemmas.is_empty() || self.lemmas.iter().any(|l| l == id)).collect())
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        if self.factors.is_empty() {
            return Err(CliError::Usage("at least one factor is required".into()));
        }
        for f in &self.factors {
            f.validate()?;
        }
        self.tolerance()?;
        self.selected()?;
        Ok(())
    }
}

#[derive(Debug, Serialize)]
pub struct LemmaReport {
    pub config: SuiteConfig,
    pub eq_tol: f64,
    pub rank_tol: f64,
    pub all_passed: bool,
    pub failing: Vec<String>,
    pub lemmas: BTreeMap<String, SuiteResult>,
}

pub fn verify(config: &SuiteConfig) -> CliResult<LemmaReport> {
    config.validate()?;
    let tol = config.tolerance()?;
    let mut lemmas = BTreeMap::new();
    let mut failing = Vec::new();
    for id in config.selected()? {
        let r = run_suite(id, &config.factors, config.trials, config.seed, &tol)?;
        if !r.passed {
            failing.push(id.to_string());
        }
        lemmas.insert(id.to_string(), r);
    }
    Ok(LemmaReport {
        config: config.clone(),
        eq_tol: tol.eq_tol,
        rank_tol: tol.rank_tol,
        all_passed: failing.is_empty(),
        failing,
        lemmas,
    })
}

pub fn verify_lemmas(config: &SuiteConfig, report: Option<&Path>, json: bool) -> CliResult<Outcome> {
    let r = verify(config)?;
    let rendered = render("verify-lemmas", &r)?;
    if let Some(p) = report {
        write_file(p, &rendered)?;
    }
    let code = if r.all_passed { EXIT_OK } else { EXIT_NO };
    let text = if json {
        rendered
    } else {
        let mut h = String::new();
        for (id, s) in &r.lemmas {
            let mark = if s.passed { "PASS" } else { "FAIL" };
            writeln!(h, "{mark} {id:<30} checks {:>6}  failures {:>5}  max residual {:.3e}", s.checks, s.failures, s.max_residual).ok();
            if let Some(f) = &s.first_failure {
                writeln!(h, "     first failure: {f}").ok();
            }
        }
        if r.all_passed {
            writeln!(h, "all {} suites passed", r.lemmas.len()).ok();
        } else {
            writeln!(h, "failing: {}", r.failing.join(", ")).ok();
        }
        h
    };
    if r.all_passed {
        Ok(Outcome::new(code, text))
    } else {
        Ok(Outcome::with_note(code, text, format!("failing lemma ids: {}", r.failing.join(", "))))
    }
}
