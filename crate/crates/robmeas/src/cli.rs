//! Command-line interface. [`run`] executes a parsed command and writes
//! its primary output; the binary only handles exit codes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use robmeas_core::combinatorics::{Convention, DEFAULT_BUDGET};
use robmeas_core::measurement::{
    corruptions_within, run_campaign, verify_guarantee, CampaignStats, GuaranteeReport, NoiseModel,
};
use robmeas_core::qec::{
    plan_syndrome_extraction, syndrome_asymptotic_bounds, ConventionChoice, QecParams,
};
use robmeas_core::readout::{binary_error_rate, ReadoutConfig};
use robmeas_core::ClassicalCode;
use serde::Serialize;

use crate::config::{builtin_code, CampaignConfig, CodeSource, PovmSource, StateSource};
use crate::error::{Error, Result};
use crate::formats::{finish_csv, format_code, read_code, to_json};
use crate::tables::{rows_csv, rows_json, table_one, table_two};
use crate::SCHEMA_VERSION;

/// Environment variable holding the default search budget.
pub const BUDGET_ENV: &str = "ROBMEAS_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "robmeas",
    version,
    about = "Robust projective measurements from commuting observables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summarize a classical code and check its decoder.
    Codes(CodesArgs),
    /// Plan robust syndrome extraction for a QEC code.
    Plan(PlanArgs),
    /// Run a seeded measurement campaign.
    Simulate(SimulateArgs),
    /// Reproduce the tables of minimum observable counts.
    Tables(TablesArgs),
    /// Misclassification of the coherent-state readout versus |alpha|^2.
    Readout(ReadoutArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[group(id = "code_source", required = true, multiple = false)]
pub struct CodeChoice {
    /// Built-in code (`c6`).
    #[arg(long)]
    pub builtin: Option<String>,
    /// Repetition code, e.g. `--repetition q=3 t=1`.
    #[arg(long, num_args = 2, value_names = ["q=Q", "t=T"])]
    pub repetition: Option<Vec<String>>,
    /// Code file (`q n M` header, then one codeword per line).
    #[arg(long = "code-file", alias = "file")]
    pub code_file: Option<PathBuf>,
}

impl CodeChoice {
    fn source(&self) -> Result<CodeSource> {
        if let Some(name) = &self.builtin {
            builtin_code(name)?;
            return Ok(CodeSource::Builtin(name.clone()));
        }
        if let Some(kv) = &self.repetition {
            let (q, t) = parse_repetition(kv)?;
            return Ok(CodeSource::Repetition { q, t });
        }
        let path = self
            .code_file
            .clone()
            .expect("clap enforces one code source");
        Ok(CodeSource::File(path))
    }
}

fn parse_repetition(kv: &[String]) -> Result<(usize, usize)> {
    let (mut q, mut t) = (None, None);
    for item in kv {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{item}`")))?;
        let v: usize = value
            .parse()
            .map_err(|_| Error::Config(format!("`{value}` is not a non-negative integer")))?;
        match key {
            "q" => q = Some(v),
            "t" => t = Some(v),
            _ => {
                return Err(Error::Config(format!(
                    "unknown repetition parameter `{key}`"
                )))
            }
        }
    }
    match (q, t) {
        (Some(q), Some(t)) => Ok((q, t)),
        _ => Err(Error::Config("repetition needs both q=.. and t=..".into())),
    }
}

#[derive(Debug, Args)]
pub struct CodesArgs {
    #[command(flatten)]
    pub code: CodeChoice,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Also list the codewords.
    #[arg(long)]
    pub words: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Qudit,
    Binomial,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Strict,
    Even,
    Both,
}

impl From<ConventionArg> for ConventionChoice {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Strict => Self::Strict,
            ConventionArg::Even => Self::Even,
            ConventionArg::Both => Self::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Qudit dimension of the QEC code.
    #[arg(long)]
    pub p: Option<usize>,
    /// Number of qudits.
    #[arg(long)]
    pub m: Option<usize>,
    /// Corrected errors (qudit) or dephasing order (binomial).
    #[arg(long)]
    pub k: Option<usize>,
    /// Loss order; defaults to `k`.
    #[arg(long)]
    pub g0: Option<usize>,
    /// Gain order; defaults to `k`.
    #[arg(long)]
    pub g1: Option<usize>,
    /// Outcome count of the syndrome measurement (explicit family).
    #[arg(long)]
    pub povm_size: Option<u64>,
    /// Outcome errors to correct.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Outcomes per observable.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, value_enum, default_value = "both")]
    pub convention: ConventionArg,
    /// Outcome-error fraction for the asymptotic estimate (qudit family).
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseArg {
    Noiseless,
    Adversarial,
    Independent,
    Homodyne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateArg {
    Mixed,
    Random,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Campaign config (JSON). Replaces the other input flags.
    #[arg(long, conflicts_with_all = ["builtin", "repetition", "code_file", "povm_file", "dim"])]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long, num_args = 2, value_names = ["q=Q", "t=T"])]
    pub repetition: Option<Vec<String>>,
    #[arg(long = "code-file")]
    pub code_file: Option<PathBuf>,
    /// POVM file (JSON).
    #[arg(long = "povm-file", conflicts_with = "dim")]
    pub povm_file: Option<PathBuf>,
    /// Dimension of a random POVM.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub povm_seed: u64,
    #[arg(long, value_enum, default_value = "mixed")]
    pub state: StateArg,
    #[arg(long, default_value_t = 0)]
    pub state_seed: u64,
    #[arg(long, value_enum, default_value = "noiseless")]
    pub noise: NoiseArg,
    /// Corrupted symbols per trial (adversarial noise).
    #[arg(long)]
    pub t: Option<usize>,
    /// 1-based positions to corrupt (adversarial noise).
    #[arg(long, value_delimiter = ',')]
    pub positions: Option<Vec<usize>>,
    /// Symbol replacement probability (independent noise).
    #[arg(long)]
    pub p: Option<f64>,
    /// Real coherent amplitude (homodyne noise).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-trial CSV.
    #[arg(long)]
    pub records: Option<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "I", alias = "1", alias = "i")]
    One,
    #[value(name = "II", alias = "2", alias = "ii")]
    Two,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    /// Search budget per cell and convention.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReadoutArgs {
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Mean photon numbers |alpha|^2 to evaluate.
    #[arg(
        long = "alpha-sq",
        value_delimiter = ',',
        default_value = "0.0625,0.25,0.5,1,2,4"
    )]
    pub alpha_sq: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Samples per symbol and amplitude.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Outcome of a successful command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A trial inside the correction guarantee failed.
    GuaranteeViolated,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<Status> {
    let (text, output, status) = match cli.command {
        Command::Codes(a) => (cmd_codes(&a)?, a.output, Status::Ok),
        Command::Plan(a) => (cmd_plan(&a)?, a.output, Status::Ok),
        Command::Simulate(a) => {
            let (text, status) = cmd_simulate(&a)?;
            (text, a.output, status)
        }
        Command::Tables(a) => (cmd_tables(&a)?, a.output, Status::Ok),
        Command::Readout(a) => (cmd_readout(&a)?, a.output, Status::Ok),
    };
    match output {
        Some(path) => write_file(&path, &text)?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e))?,
    }
    Ok(status)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
pub struct CodeSummary {
    pub q: usize,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub d: Option<usize>,
    pub t: Option<usize>,
}

impl CodeSummary {
    pub fn of(code: &ClassicalCode) -> Self {
        Self {
            q: code.q(),
            n: code.length(),
            m: code.size(),
            d: code.min_distance().ok(),
            t: code.error_radius().ok(),
        }
    }
}

#[derive(Debug, Serialize)]
struct DecoderCheck {
    radius: usize,
    words_checked: usize,
    failures: usize,
}

fn decoder_check(code: &ClassicalCode) -> Result<DecoderCheck> {
    let radius = code.error_radius().unwrap_or(code.length());
    let mut check = DecoderCheck {
        radius,
        words_checked: 0,
        failures: 0,
    };
    for (i, x) in code.codewords().iter().enumerate() {
        for y in corruptions_within(x, code.q(), radius) {
            check.words_checked += 1;
            if code.decode_nearest(&y)?.index != i + 1 {
                check.failures += 1;
            }
        }
    }
    Ok(check)
}

#[derive(Debug, Serialize)]
struct CodesReport {
    schema_version: u32,
    code: CodeSummary,
    decoder: DecoderCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    codewords: Option<Vec<String>>,
}

fn word_string(w: &[u8]) -> String {
    if w.iter().all(|&s| s < 10) {
        w.iter().map(|s| char::from(b'0' + s)).collect()
    } else {
        w.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
    }
}

fn cmd_codes(a: &CodesArgs) -> Result<String> {
    let code = match a.code.source()? {
        CodeSource::File(p) => read_code(&p)?,
        other => other.load(Path::new("."))?,
    };
    let report = CodesReport {
        schema_version: SCHEMA_VERSION,
        code: CodeSummary::of(&code),
        decoder: decoder_check(&code)?,
        codewords: a
            .words
            .then(|| code.codewords().iter().map(|w| word_string(w)).collect()),
    };
    match a.format {
        Format::Json => Ok(to_json(&report)),
        Format::Csv => Err(Error::Config("codes supports text or json output".into())),
        Format::Text => {
            let opt = |v: Option<usize>| v.map_or("undefined".to_string(), |v| v.to_string());
            let c = &report.code;
            let mut s = format!(
                "q = {}\nn = {}\nM = {}\nd = {}\nt = {}\ndecoder: {} of {} words within radius {} decode correctly\n",
                c.q,
                c.n,
                c.m,
                opt(c.d),
                opt(c.t),
                report.decoder.words_checked - report.decoder.failures,
                report.decoder.words_checked,
                report.decoder.radius
            );
            if a.words {
                s.push_str(&format_code(&code));
            }
            Ok(s)
        }
    }
}

#[derive(Debug, Serialize)]
struct LengthEntry {
    convention: &'static str,
    d: usize,
    n: String,
    exact: bool,
    n_lower: u64,
    n_upper: Option<u64>,
    witness_available: bool,
    work: u64,
}

#[derive(Debug, Serialize)]
struct PlanReport {
    schema_version: u32,
    params: QecParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    binomial_gap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    binomial_order: Option<usize>,
    correctible_set_size: Option<u64>,
    /// `|K| + 1`, the default planning bound.
    povm_size_with_uncorrectable: u64,
    /// `|K|`, valid when the correctable spaces span everything.
    povm_size_correctable_only: u64,
    outcomes: u64,
    t: usize,
    q: usize,
    budget: u64,
    lengths: Vec<LengthEntry>,
    unprotected_observables: u64,
    repetition_baseline: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    asymptotic_estimate: Option<AsymptoticEstimate>,
}

#[derive(Debug, Serialize)]
struct AsymptoticEstimate {
    epsilon_frac: f64,
    lower: f64,
    upper: f64,
    note: &'static str,
}

fn require<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("--{flag} is required for the {family} family")))
}

fn cmd_plan(a: &PlanArgs) -> Result<String> {
    let params = match a.family {
        Family::Qudit => QecParams::QuditDistance {
            p: require(a.p, "p", "qudit")?,
            m: require(a.m, "m", "qudit")?,
            k: require(a.k, "k", "qudit")?,
        },
        Family::Binomial => {
            let k = require(a.k, "k", "binomial")?;
            QecParams::Binomial {
                g0: a.g0.unwrap_or(k),
                g1: a.g1.unwrap_or(k),
                k,
            }
        }
        Family::Explicit => QecParams::ExplicitPovmSize {
            size: require(a.povm_size, "povm-size", "explicit")?,
        },
    };
    let plan = plan_syndrome_extraction(&params, a.t, a.q, a.convention.into(), a.budget)?;
    let lengths = Convention::BOTH
        .iter()
        .filter_map(|&c| plan.length(c).map(|cert| (c, cert)))
        .map(|(c, cert)| LengthEntry {
            convention: c.name(),
            d: cert.d,
            n: cert.result.to_string(),
            exact: cert.result.exact().is_some(),
            n_lower: cert.result.lower(),
            n_upper: cert.result.upper(),
            witness_available: cert.witness_available(),
            work: cert.work,
        })
        .collect();
    let asymptotic_estimate = match (a.epsilon, params) {
        (Some(eps), QecParams::QuditDistance { p, m, k }) => {
            let (lower, upper) = syndrome_asymptotic_bounds(p, m, k, eps, a.q)?;
            Some(AsymptoticEstimate {
                epsilon_frac: eps,
                lower,
                upper,
                note: "asymptotic estimate; o(1) terms dropped",
            })
        }
        (Some(_), _) => {
            return Err(Error::Config(
                "--epsilon applies to the qudit family only".into(),
            ))
        }
        (None, _) => None,
    };
    Ok(to_json(&PlanReport {
        schema_version: SCHEMA_VERSION,
        params,
        binomial_gap: params.binomial_gap(),
        binomial_order: params.binomial_order(),
        correctible_set_size: plan.correctible_set_size,
        povm_size_with_uncorrectable: plan.povm_size.with_uncorrectable,
        povm_size_correctable_only: plan.povm_size.correctable_only,
        outcomes: plan.outcomes,
        t: plan.t,
        q: plan.q,
        budget: a.budget,
        lengths,
        unprotected_observables: plan.unprotected_observables,
        repetition_baseline: plan.repetition_baseline,
        asymptotic_estimate,
    }))
}

impl SimulateArgs {
    /// The campaign described by the flags (or the config file) and the
    /// directory relative paths resolve against.
    pub fn campaign_config(&self) -> Result<(CampaignConfig, PathBuf)> {
        if let Some(path) = &self.config {
            return CampaignConfig::read(path);
        }
        let code = CodeChoice {
            builtin: self.builtin.clone(),
            repetition: self.repetition.clone(),
            code_file: self.code_file.clone(),
        };
        let sources = [
            code.builtin.is_some(),
            code.repetition.is_some(),
            code.code_file.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(Error::Config(
                "give exactly one of --builtin, --repetition, --code-file or --config".into(),
            ));
        }
        let code = code.source()?;
        let povm = match (&self.povm_file, self.dim) {
            (Some(p), _) => PovmSource::File(p.clone()),
            (None, Some(dim)) => PovmSource::Random {
                dim,
                seed: self.povm_seed,
            },
            (None, None) => return Err(Error::Config("give --povm-file or --dim".into())),
        };
        let state = match self.state {
            StateArg::Mixed => StateSource::MaximallyMixed,
            StateArg::Random => StateSource::Random {
                seed: self.state_seed,
            },
        };
        let noise = match self.noise {
            NoiseArg::Noiseless => NoiseModel::Noiseless,
            NoiseArg::Adversarial => NoiseModel::Adversarial {
                t: match (&self.positions, self.t) {
                    (_, Some(t)) => t,
                    (Some(p), None) => p.len(),
                    (None, None) => {
                        return Err(Error::Config(
                            "adversarial noise needs --t or --positions".into(),
                        ))
                    }
                },
                positions: self.positions.clone(),
            },
            NoiseArg::Independent => NoiseModel::Independent {
                p: require(self.p, "p", "independent noise")?,
            },
            NoiseArg::Homodyne => {
                let alpha = require(self.alpha, "alpha", "homodyne noise")?;
                let q = code.load(Path::new("."))?.q();
                NoiseModel::Homodyne {
                    readout: ReadoutConfig::new(q, Complex64::new(alpha, 0.0), self.gamma)?,
                }
            }
        };
        let cfg = CampaignConfig {
            code,
            povm,
            state,
            noise,
            trials: self.trials,
            seed: self.seed,
        };
        Ok((cfg, PathBuf::from(".")))
    }
}

#[derive(Debug, Serialize)]
struct SimulationReport<'a> {
    schema_version: u32,
    config: &'a CampaignConfig,
    code: CodeSummary,
    dim: usize,
    stats: &'a CampaignStats,
    /// Exhaustive audit of every codeword and every corruption within the
    /// correction radius.
    guarantee: GuaranteeReport,
    guarantee_holds: bool,
}

#[derive(Debug, Serialize)]
struct RecordRow {
    trial: u64,
    true_index: usize,
    clean_word: String,
    corrupted_word: String,
    errors: usize,
    decoded_index: usize,
    distance: usize,
    beyond_radius: bool,
    within_guarantee: bool,
    success: bool,
}

fn cmd_simulate(a: &SimulateArgs) -> Result<(String, Status)> {
    let (cfg, base) = a.campaign_config()?;
    let campaign = cfg.prepare(&base)?;
    let set = &campaign.set;
    let stats = run_campaign(
        &campaign.state,
        set,
        &cfg.noise,
        cfg.trials,
        cfg.seed,
        a.records.is_some(),
    )?;
    let radius = set.code().error_radius().unwrap_or(set.code().length());
    let guarantee = verify_guarantee(&campaign.state, set, radius)?;
    let guarantee_holds = guarantee.passed() && stats.guaranteed_failures == 0;
    if let Some(path) = &a.records {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &stats.records {
            w.serialize(RecordRow {
                trial: r.trial,
                true_index: r.true_index,
                clean_word: word_string(&r.clean_word),
                corrupted_word: word_string(&r.corrupted_word),
                errors: r.errors,
                decoded_index: r.decoded_index,
                distance: r.distance,
                beyond_radius: r.beyond_radius,
                within_guarantee: r.within_guarantee,
                success: r.success,
            })?;
        }
        write_file(path, &finish_csv(w)?)?;
    }
    let mut summary = stats.clone();
    summary.records.clear();
    let report = SimulationReport {
        schema_version: SCHEMA_VERSION,
        config: &cfg,
        code: CodeSummary::of(set.code()),
        dim: set.dim(),
        stats: &summary,
        guarantee,
        guarantee_holds,
    };
    let status = if guarantee_holds {
        Status::Ok
    } else {
        Status::GuaranteeViolated
    };
    Ok((to_json(&report), status))
}

fn cmd_tables(a: &TablesArgs) -> Result<String> {
    let (name, rows) = match a.which {
        Which::One => ("I", table_one(a.budget)?),
        Which::Two => ("II", table_two(a.budget)?),
    };
    match a.format {
        Format::Csv => rows_csv(&rows),
        Format::Json => Ok(rows_json(name, a.budget, &rows)),
        Format::Text => Err(Error::Config("tables supports csv or json output".into())),
    }
}

#[derive(Debug, Serialize)]
struct ReadoutRow {
    q: usize,
    alpha_sq: f64,
    alpha_abs: f64,
    trials_per_symbol: u64,
    misclassification: f64,
    standard_error: f64,
    /// Closed form, binary readout only.
    binary_theory: Option<f64>,
    weak_signal: bool,
}

fn cmd_readout(a: &ReadoutArgs) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, &a2) in a.alpha_sq.iter().enumerate() {
        if !(a2.is_finite() && a2 > 0.0) {
            return Err(Error::Config(format!("|alpha|^2 = {a2} must be positive")));
        }
        let alpha = a2.sqrt();
        let cfg = ReadoutConfig::new(a.q, Complex64::new(alpha, 0.0), a.gamma)?;
        let est = cfg.estimate_misclassification(a.trials, a.seed.wrapping_add(i as u64))?;
        w.serialize(ReadoutRow {
            q: a.q,
            alpha_sq: a2,
            alpha_abs: alpha,
            trials_per_symbol: a.trials,
            misclassification: est.average,
            standard_error: est.standard_error,
            binary_theory: (a.q == 2).then(|| binary_error_rate(alpha)),
            weak_signal: cfg.weak_signal(),
        })?;
    }
    finish_csv(w)
}
