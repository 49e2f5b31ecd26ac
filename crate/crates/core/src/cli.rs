//! The `gm-series` command line.
//!
//! Every command writes one JSON document (`--format json`, the default) or a
//! CSV table with a header row (`--format csv`). JSON output is an envelope
//! `{"command", "version", "metadata", "result"}` where `metadata` records
//! every default the run depended on. With `--format csv --output PATH` the
//! same envelope, minus the per-row arrays, goes to `PATH.meta.json`.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 verdict failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classes::{
    membership_profile, BSchedule, BetaSpec, ClassParams, ClassSpec, MembershipProfile, ProfileOptions, Verdict,
    DEFAULT_M_CAP, DEFAULT_TAIL_CAP,
};
use crate::convergence::{
    decay_condition, divergence_demo, log_integral_bound, pointwise_condition, tail_probe, DecayKind, Method,
    PointwiseVerdict, SeriesKind, SeriesSpec, XGrid, DEFAULT_X_COUNT, OSC_TOL,
};
use crate::grid::geometric_grid;
use crate::kernels::{sbp_sweep, EPS_SING, SBP_TOL, SWEEP_MIN_MARGIN};
use crate::report::{csv_f64, write_csv};
use crate::sequences::{Sequence, SequenceDescriptor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERDICT: i32 = 2;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "GM_SERIES_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "gm-series",
    version,
    about = "General monotone sequences and uniform convergence of trigonometric series"
)]
pub struct Cli {
    /// Output file (stdout when absent).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for grid sweeps.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership profile of a sequence in a class such as `gm(p=2,beta3,q=1,r=3)`.
    Classify(ClassifyArgs),
    /// Randomized check of the summation-by-parts identities against direct sums.
    SbpVerify(SbpVerifyArgs),
    /// Windowed sup over x of series tails, paired with the n ln n decay statistic.
    TailProbe(TailProbeArgs),
    /// Partial sums at the points 2lπ/r.
    Pointwise(PointwiseArgs),
    /// The bound ∫ dk/(k ln k) over [n + N^{1/p}, n + N] ≤ ln p.
    Lemma3(Lemma3Args),
    /// Reproduce the mod-6 counterexample: class profiles and divergence at 2π/3.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Args)]
pub struct SequenceArgs {
    /// Sequence descriptor as JSON, or `@path` to read it from a file.
    #[arg(long, conflicts_with = "family")]
    pub sequence: Option<String>,
    /// Family name; parameters come from --p0, --expr and --exponent.
    #[arg(long)]
    pub family: Option<String>,
    /// `p` of the counterexample family.
    #[arg(long)]
    pub p0: Option<f64>,
    /// Expression for the closed_form family.
    #[arg(long)]
    pub expr: Option<String>,
    /// Exponent for the alternating_harmonic family.
    #[arg(long)]
    pub exponent: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    /// Class specification, e.g. `gm(p=2,beta3,q=1,r=3)`, `gms`, `rbvs(tail=4096)`.
    #[arg(long)]
    pub class: String,
    /// m grid: `a,b,c`, `a..b` (inclusive) or `geom:start:ratio:count`.
    #[arg(long, default_value = "geom:4:2:13")]
    pub m_grid: String,
    /// Exit 2 unless the verdict matches.
    #[arg(long)]
    pub expect: Option<Verdict>,
}

#[derive(Debug, Args)]
pub struct SbpVerifyArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TailProbeArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long, default_value = "sine")]
    pub kind: SeriesKind,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Tail starts: `a,b,c`, `a..b` or `geom:start:ratio:count`.
    #[arg(long, default_value = "geom:16:4:5")]
    pub n_grid: String,
    /// Each tail is Σ_{k=n}^{n+K}.
    #[arg(long, default_value_t = 10_000)]
    pub window: u64,
    /// Uniform x-grid size.
    #[arg(long, default_value_t = DEFAULT_X_COUNT, conflicts_with = "x")]
    pub x_count: usize,
    /// Explicit x points, comma separated.
    #[arg(long)]
    pub x: Option<String>,
    /// Evaluate with summation by parts of this step instead of direct sums.
    #[arg(long)]
    pub sbp_r: Option<u64>,
    /// Exit 2 unless the sup strictly decreases along the n grid.
    #[arg(long)]
    pub expect_decreasing: bool,
}

#[derive(Debug, Args)]
pub struct PointwiseArgs {
    #[command(flatten)]
    pub seq: SequenceArgs,
    #[arg(long, default_value = "sine")]
    pub kind: SeriesKind,
    #[arg(long)]
    pub r: u64,
    /// Comma separated l values (all admissible l when absent).
    #[arg(long)]
    pub l: Option<String>,
    #[arg(long, default_value_t = 1 << 20)]
    pub n_max: u64,
    /// Exit 2 unless the overall verdict matches.
    #[arg(long)]
    pub expect: Option<ExpectPointwise>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpectPointwise {
    Convergent,
    Inconclusive,
    DivergentTrend,
}

#[derive(Debug, Args)]
pub struct Lemma3Args {
    #[arg(long)]
    pub n: u64,
    #[arg(long = "N")]
    pub big_n: u64,
    #[arg(long)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p0: f64,
    /// Block counts N for the partial sums S(N) over k ≤ 6N + 5.
    #[arg(long, default_value = "100,1000,10000,100000")]
    pub big_n_grid: String,
    #[arg(long, default_value = "geom:4:2:13")]
    pub m_grid: String,
}

/// A usage or parameter error, reported with exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Parses a grid: `a,b,c`, `a..b` (inclusive) or `geom:start:ratio:count`.
pub fn parse_grid(text: &str) -> Result<Vec<u64>, UsageError> {
    let text = text.trim();
    let num = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| UsageError(format!("grid entry '{s}' is not a nonnegative integer")))
    };
    let grid = if let Some(rest) = text.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [start, ratio, count] = parts.as_slice() else {
            return Err(UsageError(format!(
                "geometric grid needs geom:start:ratio:count, got '{text}'"
            )));
        };
        let (start, ratio, count) = (num(start)?, num(ratio)?, num(count)?);
        if start == 0 || ratio < 2 || count == 0 || count > 64 {
            return Err(UsageError(
                "geometric grid needs start >= 1, ratio >= 2 and 1 <= count <= 64".into(),
            ));
        }
        let g = geometric_grid(start, ratio, count as usize);
        if g.len() != count as usize {
            return Err(UsageError("geometric grid overflows".into()));
        }
        g
    } else if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b || b - a > 10_000_000 {
            return Err(UsageError(format!("range {a}..{b} is empty or too long")));
        }
        (a..=b).collect()
    } else {
        text.split(',').map(num).collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err(UsageError("grid is empty".into()));
    }
    Ok(grid)
}

fn parse_floats(text: &str) -> Result<Vec<f64>, UsageError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| UsageError(format!("'{s}' is not a finite number")))
        })
        .collect()
}

impl SequenceArgs {
    fn descriptor(&self) -> Result<SequenceDescriptor, UsageError> {
        if let Some(text) = &self.sequence {
            if self.p0.is_some() || self.expr.is_some() || self.exponent.is_some() {
                return Err(UsageError(
                    "--sequence cannot be combined with --p0, --expr or --exponent".into(),
                ));
            }
            let text = match text.strip_prefix('@') {
                Some(path) => std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read descriptor file '{path}': {e}")))?,
                None => text.clone(),
            };
            let desc: SequenceDescriptor =
                serde_json::from_str(&text).map_err(|e| UsageError(format!("invalid sequence descriptor: {e}")))?;
            return Ok(desc);
        }
        let Some(family) = &self.family else {
            return Err(UsageError("a sequence is required: pass --sequence or --family".into()));
        };
        let mut params = serde_json::Map::new();
        if let Some(p) = self.p0 {
            params.insert("p".into(), json!(p));
        }
        if let Some(e) = &self.expr {
            params.insert("expr".into(), json!(e));
        }
        if let Some(e) = self.exponent {
            params.insert("exponent".into(), json!(e));
        }
        Ok(SequenceDescriptor {
            family: family.clone(),
            params: Value::Object(params),
        })
    }

    fn build(&self) -> Result<(Sequence, SequenceDescriptor), UsageError> {
        let desc = self.descriptor()?;
        let seq = desc.build()?;
        let described = SequenceDescriptor::describe(&seq);
        Ok((seq, described))
    }
}

/// What a command produced.
struct Outcome {
    command: &'static str,
    metadata: Value,
    result: Value,
    csv_header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
    /// Whether the run met its verdict expectations.
    passed: bool,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    version: &'a str,
    metadata: &'a Value,
    result: &'a Value,
}

/// Keys holding per-row arrays; dropped from the CSV sidecar.
const ROW_KEYS: [&str; 4] = ["rows", "samples", "cases", "lines"];

fn strip_rows(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| !ROW_KEYS.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), strip_rows(v)))
                .collect(),
        ),
        other => other.clone(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, UsageError> {
    Ok(serde_json::to_value(v)?)
}

fn profile_defaults() -> Value {
    json!({
        "profile_options": ProfileOptions::default(),
        "m_cap": DEFAULT_M_CAP,
        "tail_cap": DEFAULT_TAIL_CAP,
    })
}

fn profile_csv(profile: &MembershipProfile) -> Vec<Vec<String>> {
    profile
        .samples
        .iter()
        .map(|s| {
            vec![
                s.m.to_string(),
                csv_f64(s.variation),
                csv_f64(s.beta),
                csv_f64(s.ratio),
                s.beta_argmax.map(|a| a.to_string()).unwrap_or_default(),
                s.beta_at_cap.to_string(),
            ]
        })
        .collect()
}

const PROFILE_HEADER: [&str; 6] = ["m", "variation", "beta", "ratio", "beta_argmax", "beta_at_cap"];

fn classify(args: &ClassifyArgs) -> Result<Outcome, UsageError> {
    let (seq, descriptor) = args.seq.build()?;
    let spec = ClassSpec::parse(&args.class)?;
    let m_grid = parse_grid(&args.m_grid)?;
    let options = ProfileOptions::default();
    let profile = spec.evaluate(&seq, &m_grid, &options)?;
    let passed = args.expect.is_none_or(|v| v == profile.verdict);
    let mut metadata = profile_defaults();
    metadata["sequence"] = to_value(&descriptor)?;
    metadata["class"] = json!(spec.to_string());
    metadata["m_grid"] = json!(m_grid);
    metadata["expect"] = json!(args.expect);
    Ok(Outcome {
        command: "classify",
        metadata,
        csv_header: PROFILE_HEADER.to_vec(),
        csv_rows: profile_csv(&profile),
        result: to_value(&profile)?,
        passed,
    })
}

fn sbp_verify(args: &SbpVerifyArgs) -> Result<Outcome, UsageError> {
    if args.trials == 0 || args.trials > 1_000_000 {
        return Err(UsageError(format!(
            "--trials must be in 1..=1000000, got {}",
            args.trials
        )));
    }
    let report = sbp_sweep(args.trials, args.seed);
    let rows = report
        .cases
        .iter()
        .map(|c| {
            vec![
                c.trial.to_string(),
                c.kind.name().to_string(),
                c.len.to_string(),
                c.n.to_string(),
                c.m.to_string(),
                c.r.to_string(),
                csv_f64(c.x),
                csv_f64(c.margin),
                csv_f64(c.direct.re),
                csv_f64(c.direct.im),
                csv_f64(c.sbp.re),
                csv_f64(c.sbp.im),
                csv_f64(c.abs_err),
                csv_f64(c.bound),
                c.pass.to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        command: "sbp-verify",
        metadata: json!({
            "trials": args.trials,
            "seed": args.seed,
            "tolerance": SBP_TOL,
            "min_margin": SWEEP_MIN_MARGIN,
            "eps_sing": EPS_SING,
        }),
        passed: report.pass,
        result: to_value(&report)?,
        csv_header: vec![
            "trial",
            "kind",
            "len",
            "n",
            "m",
            "r",
            "x",
            "margin",
            "direct_re",
            "direct_im",
            "sbp_re",
            "sbp_im",
            "abs_err",
            "bound",
            "pass",
        ],
        csv_rows: rows,
    })
}

fn tail_probe_cmd(args: &TailProbeArgs) -> Result<Outcome, UsageError> {
    let (seq, descriptor) = args.seq.build()?;
    let spec = SeriesSpec::new(args.kind, seq.clone(), args.c)?;
    let n_grid = parse_grid(&args.n_grid)?;
    let grid = match &args.x {
        Some(text) => XGrid::Points(parse_floats(text)?),
        None => XGrid::Uniform { count: args.x_count },
    };
    let method = match args.sbp_r {
        Some(r) => Method::Sbp { r },
        None => Method::Direct,
    };
    let report = tail_probe(&spec, &n_grid, args.window, &grid, method)?;
    let decay = decay_condition(&seq, DecayKind::NLogN, &n_grid)?;
    let rows = report
        .rows
        .iter()
        .zip(&decay.rows)
        .map(|(t, d)| {
            vec![
                t.n.to_string(),
                csv_f64(t.grid_sup),
                csv_f64(t.sup),
                csv_f64(t.argmax_x),
                csv_f64(d.statistic),
            ]
        })
        .collect();
    Ok(Outcome {
        command: "tail-probe",
        metadata: json!({
            "sequence": descriptor,
            "kind": args.kind,
            "c": args.c,
            "n_grid": n_grid,
            "window": args.window,
            "x_count": if args.x.is_some() { Value::Null } else { json!(args.x_count) },
            "method": method,
            "eps_sing": EPS_SING,
            "expect_decreasing": args.expect_decreasing,
        }),
        passed: !args.expect_decreasing || report.strictly_decreasing,
        result: json!({ "tail": report, "decay": decay }),
        csv_header: vec!["n", "grid_sup", "sup", "argmax_x", "nlogn_statistic"],
        csv_rows: rows,
    })
}

fn pointwise_cmd(args: &PointwiseArgs) -> Result<Outcome, UsageError> {
    let (seq, descriptor) = args.seq.build()?;
    let ls: Vec<u64> = match &args.l {
        Some(text) => parse_grid(text)?,
        None => Vec::new(),
    };
    let report = pointwise_condition(&seq, args.kind, args.r, &ls, args.n_max)?;
    let passed = args.expect.is_none_or(|e| {
        let want = match e {
            ExpectPointwise::Convergent => PointwiseVerdict::Convergent,
            ExpectPointwise::Inconclusive => PointwiseVerdict::Inconclusive,
            ExpectPointwise::DivergentTrend => PointwiseVerdict::DivergentTrend,
        };
        want == report.verdict
    });
    let rows = report
        .lines
        .iter()
        .flat_map(|line| {
            line.rows.iter().map(move |row| {
                vec![
                    line.l.to_string(),
                    csv_f64(line.x),
                    row.n.to_string(),
                    csv_f64(row.re),
                    csv_f64(row.im),
                ]
            })
        })
        .collect();
    Ok(Outcome {
        command: "pointwise",
        metadata: json!({
            "sequence": descriptor,
            "kind": args.kind,
            "r": args.r,
            "l": ls,
            "n_max": args.n_max,
            "osc_tol": OSC_TOL,
            "heuristic": true,
        }),
        passed,
        result: to_value(&report)?,
        csv_header: vec!["l", "x", "n", "re", "im"],
        csv_rows: rows,
    })
}

fn lemma3_cmd(args: &Lemma3Args) -> Result<Outcome, UsageError> {
    let r = log_integral_bound(args.n, args.big_n, args.p)?;
    Ok(Outcome {
        command: "lemma3",
        metadata: json!({ "n": args.n, "N": args.big_n, "p": args.p, "slack": 1e-12, "quadrature_tol": 1e-8 }),
        passed: r.ok && r.quadrature_agrees,
        result: to_value(&r)?,
        csv_header: vec![
            "n",
            "N",
            "p",
            "lower",
            "upper",
            "integral",
            "quadrature",
            "bound",
            "ok",
            "quadrature_agrees",
        ],
        csv_rows: vec![vec![
            r.n.to_string(),
            r.big_n.to_string(),
            csv_f64(r.p),
            csv_f64(r.lower),
            csv_f64(r.upper),
            csv_f64(r.integral),
            csv_f64(r.quadrature),
            csv_f64(r.bound),
            r.ok.to_string(),
            r.quadrature_agrees.to_string(),
        ]],
    })
}

fn counterexample_cmd(args: &CounterexampleArgs) -> Result<Outcome, UsageError> {
    let big_n_grid = parse_grid(&args.big_n_grid)?;
    let m_grid = parse_grid(&args.m_grid)?;
    let seq = Sequence::counterexample(args.p0)?;
    let beta = BetaSpec::Beta3 {
        q: 1.0,
        b_schedule: BSchedule::Identity,
        m_cap: DEFAULT_M_CAP,
    };
    let options = ProfileOptions::default();
    let inside = membership_profile(&seq, &ClassParams::new(args.p0, beta, 3)?, &m_grid, &options)?;
    let outside = membership_profile(&seq, &ClassParams::new(1.0, beta, 3)?, &m_grid, &options)?;
    let divergence = divergence_demo(args.p0, &big_n_grid)?;
    let passed = inside.verdict == Verdict::BoundedConsistent
        && outside.verdict == Verdict::GrowingInconsistent
        && divergence.bound_holds
        && divergence.strictly_increasing;
    let rows = divergence
        .rows
        .iter()
        .map(|r| {
            vec![
                r.big_n.to_string(),
                r.terms.to_string(),
                csv_f64(r.s),
                csv_f64(r.lower_bound),
                csv_f64(r.regrouped),
                r.above_bound.to_string(),
            ]
        })
        .collect();
    let mut metadata = profile_defaults();
    metadata["p0"] = json!(args.p0);
    metadata["big_n_grid"] = json!(big_n_grid);
    metadata["m_grid"] = json!(m_grid);
    metadata["classes"] = json!([
        ClassSpec::Gm(inside.class_params).to_string(),
        ClassSpec::Gm(outside.class_params).to_string()
    ]);
    Ok(Outcome {
        command: "counterexample",
        metadata,
        passed,
        result: json!({
            "member": inside,
            "non_member": outside,
            "divergence": divergence,
        }),
        csv_header: vec!["N", "terms", "s", "lower_bound", "regrouped", "above_bound"],
        csv_rows: rows,
    })
}

fn execute(command: &Command) -> Result<Outcome, UsageError> {
    match command {
        Command::Classify(a) => classify(a),
        Command::SbpVerify(a) => sbp_verify(a),
        Command::TailProbe(a) => tail_probe_cmd(a),
        Command::Pointwise(a) => pointwise_cmd(a),
        Command::Lemma3(a) => lemma3_cmd(a),
        Command::Counterexample(a) => counterexample_cmd(a),
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn emit(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write) -> Result<(), UsageError> {
    let envelope = |result: &Value| -> Result<Vec<u8>, UsageError> {
        let mut bytes = serde_json::to_vec_pretty(&Envelope {
            command: outcome.command,
            version: env!("CARGO_PKG_VERSION"),
            metadata: &outcome.metadata,
            result,
        })?;
        bytes.push(b'\n');
        Ok(bytes)
    };
    let bytes = match cli.format {
        Format::Json => envelope(&outcome.result)?,
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, &outcome.csv_header, &outcome.csv_rows)?;
            buf
        }
    };
    match &cli.output {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| UsageError(format!("cannot write '{}': {e}", path.display())))?;
            if cli.format == Format::Csv {
                let meta = sidecar_path(path);
                std::fs::write(&meta, envelope(&strip_rows(&outcome.result))?)
                    .map_err(|e| UsageError(format!("cannot write '{}': {e}", meta.display())))?;
            }
        }
        None => stdout.write_all(&bytes)?,
    }
    Ok(())
}

/// Runs the command line with explicit arguments and streams; returns the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let threads = match cli.threads {
        Some(0) => {
            let _ = writeln!(stderr, "error: --threads / {THREADS_ENV} must be at least 1");
            return EXIT_USAGE;
        }
        Some(n) => n,
        None => 0, // rayon default
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = match pool.install(|| execute(&cli.command)) {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    if let Err(UsageError(msg)) = emit(&cli, &outcome, stdout) {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    if outcome.passed {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "verdict check failed for {}", outcome.command);
        EXIT_VERDICT
    }
}

/// Entry point used by the binary.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax() {
        assert_eq!(parse_grid("1,2, 5").unwrap(), vec![1, 2, 5]);
        assert_eq!(parse_grid("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_grid("geom:4:2:3").unwrap(), vec![4, 8, 16]);
        for bad in [
            "",
            "a",
            "5..2",
            "geom:0:2:3",
            "geom:1:1:3",
            "geom:1:2",
            "geom:2:10:30",
            "1,,2",
        ] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sidecar_drops_rows() {
        let v = json!({"verdict": "x", "samples": [1], "inner": {"rows": [2], "k": 1}});
        assert_eq!(strip_rows(&v), json!({"verdict": "x", "inner": {"k": 1}}));
        assert_eq!(
            sidecar_path(Path::new("/tmp/a.csv")),
            PathBuf::from("/tmp/a.csv.meta.json")
        );
    }

    #[test]
    fn sequence_flags() {
        let args = SequenceArgs {
            sequence: None,
            family: Some("counterexample".into()),
            p0: Some(2.0),
            expr: None,
            exponent: None,
        };
        assert_eq!(args.descriptor().unwrap().params, json!({"p": 2.0}));
        let missing = SequenceArgs {
            sequence: None,
            family: None,
            p0: None,
            expr: None,
            exponent: None,
        };
        assert!(missing.descriptor().is_err());
    }
}
