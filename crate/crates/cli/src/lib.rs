//! Command-line front end: element queries, the lemma-verification suites
//! and the falsification driver.

pub mod error;
pub mod falsify;
pub mod io;
pub mod query;
pub mod suite;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use jbtriple::{Factor, Tolerance};

pub use error::{CliError, CliResult};
pub use falsify::{campaign, FalsifyConfig, FalsifyReport};
pub use suite::{verify, LemmaReport, SuiteConfig};

pub const EXIT_OK: i32 = 0;
/// Negative answer, failing suite, or refuted map.
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

const DEFAULT_SEED: u64 = 42;
const DEFAULT_FALSIFY_TRIALS: usize = 2000;

/// Result of a subcommand: exit code, stdout text, optional stderr note.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub note: Option<String>,
}

impl Outcome {
    pub fn new(code: i32, text: String) -> Self {
        Self { code, text, note: None }
    }

    pub fn with_note(code: i32, text: String, note: String) -> Self {
        Self { code, text, note: Some(note) }
    }
}

#[derive(Debug, Parser)]
#[command(name = "jbt", version, about = "Computations in finite-dimensional JB*-triples")]
pub struct Cli {
    /// Equality tolerance (eq_tol).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Random seed.
    #[arg(long, global = true, env = "JBT_SEED")]
    pub seed: Option<u64>,

    /// Number of sampled trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,

    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether A is a truncation of B (exit 0 yes, 1 no, 2 error).
    CheckTruncation { a: PathBuf, b: PathBuf },
    /// Range tripotent r(x).
    RangeTripotent { x: PathBuf },
    /// Cube root x^[1/3].
    CubeRoot { x: PathBuf },
    /// Generalized inverse x† with its witness residuals.
    GenInverse { x: PathBuf },
    /// Peirce decomposition of a tripotent E, optionally projecting X.
    Peirce { e: PathBuf, x: Option<PathBuf> },
    /// Tripotency test with lattice facts (exit 0 tripotent, 1 not).
    TripotentCheck { x: PathBuf },
    /// Transition value TTP(E, V) of two minimal tripotents.
    Ttp { e: PathBuf, v: PathBuf },
    /// Run the registered invariant suites (exit 0 iff all pass).
    VerifyLemmas {
        /// JSON suite configuration; flags override its fields.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Factor to sample, e.g. "Rect(2,2)", "Sym(2)", "Spin(3)"; repeatable.
        #[arg(long = "factor")]
        factors: Vec<Factor>,
        /// Suite id to run; repeatable.
        #[arg(long = "lemma")]
        lemmas: Vec<String>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Test a map recipe for preservation of truncations of triple products
    /// (exit 0 pass, 1 fail, 3 inconclusive, 2 error).
    Falsify {
        map: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

impl Cli {
    fn tolerance(&self) -> CliResult<Tolerance> {
        match self.tol {
            Some(t) => Ok(Tolerance::with_eq_tol(t)?),
            None => Ok(Tolerance::default()),
        }
    }

    fn suite_config(&self, config: Option<&PathBuf>, factors: &[Factor], lemmas: &[String]) -> CliResult<SuiteConfig> {
        let mut c = match config {
            Some(p) => SuiteConfig::from_file(p)?,
            None => SuiteConfig::default(),
        };
        if !factors.is_empty() {
            c.factors = factors.to_vec();
        }
        if !lemmas.is_empty() {
            c.lemmas = lemmas.to_vec();
        }
        if let Some(t) = self.trials {
            c.trials = t;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(t) = self.tol {
            c.eq_tol = Some(t);
            c.rank_tol = None;
        }
        Ok(c)
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let tol = cli.tolerance()?;
    let json = cli.json;
    match &cli.command {
        Command::CheckTruncation { a, b } => query::check_truncation(a, b, &tol, json),
        Command::RangeTripotent { x } => query::range(x, &tol, json),
        Command::CubeRoot { x } => query::cube_root_cmd(x, &tol, json),
        Command::GenInverse { x } => query::gen_inverse(x, &tol, json),
        Command::Peirce { e, x } => query::peirce(e, x.as_deref(), &tol, json),
        Command::TripotentCheck { x } => query::tripotent_check(x, &tol, json),
        Command::Ttp { e, v } => query::ttp_cmd(e, v, &tol, json),
        Command::VerifyLemmas { config, factors, lemmas, report } => {
            let c = cli.suite_config(config.as_ref(), factors, lemmas)?;
            suite::verify_lemmas(&c, report.as_deref(), json)
        }
        Command::Falsify { map, report } => {
            let cfg = FalsifyConfig::new(
                cli.trials.unwrap_or(DEFAULT_FALSIFY_TRIALS),
                cli.seed.unwrap_or(DEFAULT_SEED),
                &tol,
            );
            falsify::falsify(map, &cfg, &tol, report.as_deref(), json)
        }
    }
}

/// Parses `args`, runs, and returns the outcome; errors map to exit code 2.
pub fn main_with<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli).unwrap_or_else(|e| Outcome::with_note(EXIT_ERROR, String::new(), format!("error: {e}"))),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::with_note(code, String::new(), rendered)
            } else {
                Outcome::new(code, rendered)
            }
        }
    }
}
