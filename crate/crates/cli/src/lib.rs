//! `knent` command-line frontend: entropy reports, parameter sweeps,
//! verification suites and the grid maxent experiment.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use knent::entropy::entropy_report;
use knent::json::{g17, G17};
use knent::knmean::KnFunction;
use knent::pmf::io::{parse, InputFormat, ReadOptions};
use knent::pmf::{Pmf, DEFAULT_NORMALIZATION_TOLERANCE};
use knent::qalgebra::QParam;
use knent::report::{LabConfig, DEFAULT_COUNTEREXAMPLE_THRESHOLD, DEFAULT_PASS_THRESHOLD};
use knent::theoremlab::{
    cell_distance, maxent_argmax, search_renyi_concavity_violation, verify_axioms, verify_corollary2,
    verify_theorem2, verify_theorem3, verify_theorem4, verify_tsallis_concavity, Check, Expectation,
    MaxentResult, Objective, DEFAULT_GRID_RESOLUTION,
};
use knent::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_DISTRIBUTION: i32 = 3;
pub const EXIT_VERIFICATION_FAILED: i32 = 4;
pub const EXIT_INFEASIBLE: i32 = 5;

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_BUDGET: u64 = 1000;
/// Concavity runs use more mixture triples by default.
pub const DEFAULT_CONCAVITY_BUDGET: u64 = 2000;
pub const TSALLIS_CONCAVITY_QS: [f64; 4] = [0.5, 1.5, 2.0, 5.0];
pub const RENYI_CONTROL_ALPHAS: [f64; 2] = [0.5, 10.0];
pub const DEFAULT_MAX_SUPPORT: usize = 8;

pub const SUITES: [&str; 7] = ["all", "theorem2", "theorem3", "theorem4", "corollary2", "axioms", "concavity"];

#[derive(Debug, Parser)]
#[command(name = "knent", version, about = "Generalized entropies and quasilinear means")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shannon, Rényi and Tsallis entropies of a distribution, one JSON line per q
    Entropy(EntropyArgs),
    /// CSV table of the entropies over a q grid
    Sweep(SweepArgs),
    /// Run verification suites, streaming one JSON report per line
    Verify(VerifyArgs),
    /// Grid maximum-entropy distribution on a three-point support
    Maxent(MaxentArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Distribution file (CSV `label,value` rows or a JSON object); `-` reads stdin
    #[arg(long, default_value = "-")]
    pub input: String,
    #[arg(long, default_value = "auto", value_parser = parse_format)]
    pub format: InputFormat,
    /// Rescale probabilities that do not sum to one
    #[arg(long)]
    pub normalize: bool,
    /// Allowed deviation of the probability sum from one
    #[arg(long, default_value_t = DEFAULT_NORMALIZATION_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Entropic index (comma-separated list allowed)
    #[arg(long = "q", visible_alias = "alpha", value_delimiter = ',', default_value = "2")]
    pub q: Vec<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.5)]
    pub q_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub q_max: f64,
    #[arg(long, default_value_t = 16)]
    pub steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all, theorem2, theorem3, theorem4, corollary2, axioms or concavity
    #[arg(value_name = "SUITE")]
    pub suite_arg: Option<String>,
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Trials per check (concavity defaults to 2000)
    #[arg(long)]
    pub budget: Option<u64>,
    /// Rényi orders for the concavity search
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    /// Largest alphabet in the Rényi concavity search
    #[arg(long, default_value_t = DEFAULT_MAX_SUPPORT)]
    pub max_n: usize,
    #[arg(long, default_value_t = DEFAULT_PASS_THRESHOLD)]
    pub pass_threshold: f64,
    #[arg(long, default_value_t = DEFAULT_COUNTEREXAMPLE_THRESHOLD)]
    pub counterexample_threshold: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MaxentArgs {
    /// shannon, renyi or tsallis
    #[arg(long, default_value = "shannon")]
    pub objective: String,
    #[arg(long = "q", visible_alias = "alpha", default_value_t = 2.0)]
    pub q: f64,
    #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
    pub support: Vec<f64>,
    #[arg(long)]
    pub mean: f64,
    /// Cells per barycentric coordinate
    #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION)]
    pub grid: u64,
    /// Two objectives to solve and compare, e.g. `tsallis,renyi`
    #[arg(long, value_delimiter = ',')]
    pub compare: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_format(s: &str) -> Result<InputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidDistribution(_)
            | Error::NotNormalized { .. }
            | Error::UnknownLabel(_)
            | Error::InfiniteInformation { .. } => EXIT_INVALID_DISTRIBUTION,
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn qparam(v: f64) -> Result<QParam, Failure> {
    Ok(QParam::new(v)?)
}

fn read_pmf(args: &InputArgs) -> Result<(String, Pmf), Failure> {
    let (id, text) = if args.input == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        ("stdin".to_string(), text)
    } else {
        let path = PathBuf::from(&args.input);
        let text = fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{}: {e}", args.input)))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| args.input.clone());
        (id, text)
    };
    let opts = ReadOptions {
        normalize: args.normalize,
        tolerance: args.tolerance,
    };
    Ok((id, parse(&text, args.format, opts)?))
}

/// Runs `f` against the requested sink, stdout or a file.
fn with_sink(output: &OutputArgs, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> CmdResult) -> CmdResult {
    match &output.output {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path)?);
            let code = f(&mut file)?;
            file.flush()?;
            Ok(code)
        }
        None => f(stdout),
    }
}

pub fn cmd_entropy(args: &EntropyArgs, out: &mut dyn Write) -> CmdResult {
    let (id, pmf) = read_pmf(&args.input)?;
    let qs = args.q.iter().map(|&v| qparam(v)).collect::<Result<Vec<_>, _>>()?;
    with_sink(&args.output, out, |w| {
        for q in qs {
            writeln!(w, "{}", entropy_report(&id, &pmf, q).to_json_line())?;
        }
        Ok(EXIT_OK)
    })
}

/// `steps` points from `q_min` to `q_max`, both endpoints exact.
pub fn q_grid(q_min: f64, q_max: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if !(q_min > 0.0 && q_max > q_min && q_max.is_finite()) {
        return Err(Failure::usage(format!(
            "need 0 < q-min < q-max, got q-min = {q_min}, q-max = {q_max}"
        )));
    }
    if steps < 2 {
        return Err(Failure::usage(format!("need at least 2 steps, got {steps}")));
    }
    let last = steps - 1;
    Ok((0..steps)
        .map(|i| match i {
            0 => q_min,
            i if i == last => q_max,
            i => q_min + (q_max - q_min) * i as f64 / last as f64,
        })
        .collect())
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let (id, pmf) = read_pmf(&args.input)?;
    let grid = q_grid(args.q_min, args.q_max, args.steps)?;
    with_sink(&args.output, out, |w| {
        writeln!(w, "q,shannon,renyi,tsallis,phi_q_residual")?;
        for v in grid {
            let r = entropy_report(&id, &pmf, qparam(v)?);
            writeln!(
                w,
                "{},{},{},{},{}",
                g17(v),
                g17(r.shannon),
                g17(r.renyi),
                g17(r.tsallis),
                g17(r.phi_q_residual)
            )?;
        }
        Ok(EXIT_OK)
    })
}

/// KN-functions run through the axiom checks. `φ_q` enters with `q < 1`:
/// for `q > 1` it saturates on the sampling window and its round trip alone
/// costs more than the certainty tolerance.
pub fn axiom_functions() -> Vec<KnFunction> {
    let q = QParam::new(0.5).expect("valid q");
    [
        KnFunction::identity(),
        KnFunction::linear(2.0, 1.0).expect("valid"),
        KnFunction::exponential(2.0).expect("valid"),
        KnFunction::exponential(0.5).expect("valid"),
        KnFunction::exponential(2.0).and_then(|f| f.negated()).expect("valid"),
        KnFunction::power(2.0).expect("valid"),
        KnFunction::power(0.5).expect("valid"),
        KnFunction::phi_q(q).expect("valid"),
    ]
    .into()
}

/// Checks of one named suite. `alphas` overrides the Rényi orders of the
/// concavity search.
pub fn suite_checks(suite: &str, cfg: &LabConfig, alphas: &[f64], max_n: usize) -> Result<Vec<Check>, Failure> {
    let checks = match suite {
        "theorem2" => verify_theorem2(cfg)?,
        "theorem3" => verify_theorem3(cfg)?,
        "theorem4" => verify_theorem4(cfg)?,
        "corollary2" => verify_corollary2(cfg)?,
        "axioms" => axiom_functions()
            .iter()
            .map(|psi| Ok(Check::new(verify_axioms(psi, cfg)?, Expectation::Pass)))
            .collect::<Result<_, Error>>()?,
        "concavity" => {
            let alphas = if alphas.is_empty() { &RENYI_CONTROL_ALPHAS[..] } else { alphas };
            let mut checks = Vec::new();
            for &a in alphas {
                let r = search_renyi_concavity_violation(qparam(a)?, max_n, cfg)?;
                checks.push(Check::new(r, Expectation::Control));
            }
            for &q in &TSALLIS_CONCAVITY_QS {
                checks.push(Check::new(verify_tsallis_concavity(qparam(q)?, cfg)?, Expectation::Pass));
            }
            checks
        }
        other => return Err(Failure::usage(format!("unknown suite {other:?}; expected one of {SUITES:?}"))),
    };
    Ok(checks)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let suite = args
        .suite
        .as_deref()
        .or(args.suite_arg.as_deref())
        .unwrap_or("all")
        .to_ascii_lowercase();
    if !SUITES.contains(&suite.as_str()) {
        return Err(Failure::usage(format!("unknown suite {suite:?}; expected one of {SUITES:?}")));
    }
    if args.budget == Some(0) {
        return Err(Failure::usage("budget must be at least 1"));
    }
    for (flag, t) in [("--pass-threshold", args.pass_threshold), ("--counterexample-threshold", args.counterexample_threshold)] {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::usage(format!("{flag} must be finite and >= 0, got {t}")));
        }
    }
    let names: Vec<&str> = if suite == "all" { SUITES[1..].to_vec() } else { vec![suite.as_str()] };
    with_sink(&args.output, out, |w| {
        let (mut total, mut unmet) = (0usize, 0usize);
        for name in names {
            let default_budget = if name == "concavity" { DEFAULT_CONCAVITY_BUDGET } else { DEFAULT_BUDGET };
            let cfg = LabConfig {
                budget: args.budget.unwrap_or(default_budget),
                seed: args.seed,
                pass_threshold: args.pass_threshold,
                counterexample_threshold: args.counterexample_threshold,
            };
            for check in suite_checks(name, &cfg, &args.alpha, args.max_n)? {
                total += 1;
                if !check.met() {
                    unmet += 1;
                    writeln!(err, "unexpected verdict for {}: {}", check.report.theorem_id, check.report.verdict)?;
                }
                writeln!(w, "{}", check.report.to_json_line())?;
            }
            w.flush()?;
        }
        writeln!(err, "{total} checks, {unmet} unexpected")?;
        Ok(if unmet == 0 { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
    })
}

fn maxent_json(r: &MaxentResult, support: &[f64], mean: f64) -> Value {
    json!({
        "objective": r.objective.to_string(),
        "support": support.iter().map(|&x| G17(x)).collect::<Vec<_>>(),
        "mean_target": G17(mean),
        "pmf": r.pmf.probs().iter().map(|&p| G17(p)).collect::<Vec<_>>(),
        "objective_value": G17(r.objective_value),
        "cell": r.cell,
        "resolution": r.resolution,
        "coarse_cell": r.coarse_cell,
        "coarse_resolution": r.coarse_resolution,
    })
}

pub fn cmd_maxent(args: &MaxentArgs, out: &mut dyn Write) -> CmdResult {
    let q = qparam(args.q)?;
    let solve = |name: &str| -> Result<MaxentResult, Failure> {
        Ok(maxent_argmax(Objective::parse(name, q)?, &args.support, args.mean, args.grid)?)
    };
    let value = match args.compare.as_slice() {
        [] => maxent_json(&solve(&args.objective)?, &args.support, args.mean),
        [a, b] => {
            let (ra, rb) = (solve(a)?, solve(b)?);
            json!({
                "results": [maxent_json(&ra, &args.support, args.mean), maxent_json(&rb, &args.support, args.mean)],
                "cell_distance": cell_distance((ra.cell, ra.resolution), (rb.cell, rb.resolution))?,
                "coarse_cell_distance": cell_distance(
                    (ra.coarse_cell, ra.coarse_resolution),
                    (rb.coarse_cell, rb.coarse_resolution),
                )?,
            })
        }
        other => return Err(Failure::usage(format!("--compare takes two objectives, got {}", other.len()))),
    };
    with_sink(&args.output, out, |w| {
        writeln!(w, "{value}")?;
        Ok(EXIT_OK)
    })
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match &cli.command {
        Command::Entropy(a) => cmd_entropy(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Maxent(a) => cmd_maxent(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "knent: {}", f.message);
            f.code
        }
    }
}
