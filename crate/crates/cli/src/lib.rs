//! Command-line front end for `cube-sobolev`.
//!
//! Exit codes: 0 on success, 1 when a verification reported a violation
//! (the report is still written), 2 on usage or domain errors (nothing is
//! written).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use cube_sobolev::ball::{ball_lambda_star, ball_minimizer};
use cube_sobolev::codes::{asymptotic_rate_bound, code_size_bound};
use cube_sobolev::series::{
    verify_coefficient_properties, verify_hprop_required_series, verify_hprop_series,
};
use cube_sobolev::special::{c_alpha, c_explicit, LN_2};
use cube_sobolev::spectral::{lambda_star, SolverConfig};
use cube_sobolev::subset::{parse_mask_file, SubsetSpec};
use cube_sobolev::verify::{
    run_suite, scan_all_subsets, split_generators, tightness_sweep, GeneratorKind, Inequality,
    VerificationReport,
};

pub const THREADS_ENV: &str = "CUBE_SOBOLEV_THREADS";

/// Largest allowed `|C_alpha - C_explicit|` in a `cfun` row.
const CFUN_AGREEMENT: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "cube-sobolev",
    version,
    about = "Log-Sobolev constants, fundamental tones and Faber-Krahn checks on the Hamming cube"
)]
pub struct Cli {
    /// Seed for every randomized suite.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Record `wall_time_ms` as 0 so that reports are byte-for-byte reproducible.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of C(rho) in both representations: rho,C_explicit,C_alpha,abs_diff.
    Cfun {
        #[arg(long, allow_negative_numbers = true)]
        start: f64,
        #[arg(long, allow_negative_numbers = true)]
        end: f64,
        #[arg(long, allow_negative_numbers = true)]
        step: f64,
    },
    /// Fundamental tone lambda* of a vertex subset.
    LambdaStar {
        #[command(subcommand)]
        subset: SubsetCommand,
    },
    /// Run a verification suite and emit its JSON report.
    Verify {
        #[command(subcommand)]
        suite: VerifyCommand,
    },
    /// Code-size bound from Hamming balls (JSON), or the asymptotic rate curve (CSV).
    CodeBound(CodeBoundArgs),
    /// Smallest lambda* per cardinality over all subsets (CSV).
    ScanExtremal {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Subsets up to this size use a dense eigensolve.
    #[arg(long, default_value_t = SolverConfig::default().dense_threshold)]
    pub dense_threshold: usize,
    /// Residual tolerance of the iterative eigensolver.
    #[arg(long, default_value_t = SolverConfig::default().tol)]
    pub tol: f64,
    /// Print the full result as JSON instead of the bare value.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum SubsetCommand {
    /// Hamming ball of radius r around the origin (radial reduction).
    Ball {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Also write the extremal radial profile as CSV k,g_k.
        #[arg(long, value_name = "PATH")]
        emit_minimizer: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Subcube with the first t coordinates fixed to 0.
    Subcube {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Explicit vertex list: a `n=<int>` header, then one vertex index per line.
    Mask {
        #[arg(long, value_name = "PATH")]
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    /// Total number of generated functions.
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Dimensions 1..=max-n are used.
    #[arg(long, default_value_t = 10)]
    pub max_n: usize,
    /// Generator kinds, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    pub kinds: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// D^2(f) >= C(rho) Ent(f^2).
    Logsob(SuiteArgs),
    /// D^2(f) >= 4 K^2(f) phi(Ent(f^2) / K^2(f)).
    Tech(SuiteArgs),
    /// Ent(f^2) <= 2 log 2 K^2(f).
    Entk(SuiteArgs),
    /// Functional isoperimetric inequality.
    Isop(SuiteArgs),
    /// Faber-Krahn bound on every nonempty subset (n <= 4).
    FkScan {
        #[arg(long)]
        n: usize,
    },
    /// Power-series coefficient properties and closed forms.
    Series {
        #[arg(long)]
        kmax: usize,
    },
    /// Coefficientwise nonnegativity of the series inequality.
    Hprop {
        #[arg(long)]
        kmax: usize,
        /// Check the (1 + t^2)-weighted form instead of the stated one.
        #[arg(long)]
        weighted: bool,
    },
    /// Ball tone versus the Faber-Krahn bound along increasing n.
    Tightness {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long)]
        ratio: f64,
    },
}

#[derive(Debug, Args)]
pub struct CodeBoundArgs {
    #[arg(long, required_unless_present = "asymptotic", conflicts_with = "asymptotic")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "asymptotic", conflicts_with = "asymptotic")]
    pub d: Option<usize>,
    /// Emit the asymptotic rate curve instead of a single bound.
    #[arg(long, requires = "delta_grid")]
    pub asymptotic: bool,
    /// Grid `start:end:step` of relative distances in (0, 1/2).
    #[arg(long, value_name = "START:END:STEP")]
    pub delta_grid: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(cube_sobolev::Error),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Library(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<cube_sobolev::Error> for CliError {
    fn from(e: cube_sobolev::Error) -> Self {
        CliError::Library(e)
    }
}

/// Result of a command: the text to emit, side files, and whether every
/// check passed.
struct Output {
    text: String,
    extra: Vec<(PathBuf, String)>,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            extra: Vec::new(),
            ok: true,
        }
    }
}

/// Formats a value rounded to 10 decimals, always with a decimal point.
pub fn format_value(x: f64) -> String {
    let rounded = (x * 1e10).round() / 1e10;
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded:?}")
}

/// Number of grid points in `start..=end` with spacing `step`, tolerating
/// rounding in the last step.
fn grid_points(start: f64, end: f64, step: f64) -> usize {
    ((end - start) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1
}

fn grid_value(start: f64, step: f64, i: usize, end: f64) -> f64 {
    let x = start + step * i as f64;
    ((x * 1e12).round() / 1e12).min(end)
}

fn cfun_table(start: f64, end: f64, step: f64) -> Result<Output, CliError> {
    if !(step.is_finite() && step > 0.0) {
        return Err(CliError::Usage(format!("step must be positive, got {step}")));
    }
    if !(0.0 <= start && start <= end && end <= LN_2 + 1e-12) {
        return Err(CliError::Usage(format!(
            "need 0 <= start <= end <= log 2, got start = {start}, end = {end}"
        )));
    }
    let end = end.min(LN_2);
    let mut text = String::from("rho,C_explicit,C_alpha,abs_diff\n");
    let mut ok = true;
    for i in 0..grid_points(start, end, step) {
        let rho = grid_value(start, step, i, end);
        let (e, a) = (c_explicit(rho)?, c_alpha(rho)?);
        let diff = (e - a).abs();
        ok &= diff <= CFUN_AGREEMENT;
        text.push_str(&format!("{rho},{e},{a},{diff}\n"));
    }
    Ok(Output {
        text,
        extra: Vec::new(),
        ok,
    })
}

fn solver_config(args: &SolverArgs) -> Result<SolverConfig, CliError> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::Usage(format!("tol must be positive, got {}", args.tol)));
    }
    Ok(SolverConfig {
        dense_threshold: args.dense_threshold,
        tol: args.tol,
        minimizer: false,
        ..SolverConfig::default()
    })
}

fn spectral_output(spec: &SubsetSpec, solver: &SolverArgs) -> Result<Output, CliError> {
    let res = lambda_star(spec, &solver_config(solver)?)?;
    let text = if solver.json {
        let mut value = serde_json::to_value(&res).expect("result serializes");
        value["subset"] = serde_json::to_value(spec).expect("subset serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("minimizer");
        }
        format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
    } else {
        format!("{}\n", format_value(res.lambda_star))
    };
    Ok(Output::ok(text))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn lambda_star_command(cmd: &SubsetCommand) -> Result<Output, CliError> {
    match cmd {
        SubsetCommand::Ball {
            n,
            r,
            emit_minimizer,
            json,
        } => {
            let lambda = ball_lambda_star(*n, *r)?;
            let mut extra = Vec::new();
            if let Some(path) = emit_minimizer {
                extra.push((path.clone(), ball_minimizer(*n, *r)?.to_csv()));
            }
            let text = if *json {
                let spec = SubsetSpec::ball(*n, *r)?;
                let share = (spec.log_cardinality() - *n as f64 * LN_2).exp();
                let value = serde_json::json!({
                    "lambda_star": lambda,
                    "frac_boundary": share * lambda,
                    "method": "radial",
                    "subset": spec,
                });
                format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
            } else {
                format!("{}\n", format_value(lambda))
            };
            Ok(Output {
                text,
                extra,
                ok: true,
            })
        }
        SubsetCommand::Subcube { n, t, solver } => {
            spectral_output(&SubsetSpec::subcube(*n, *t)?, solver)
        }
        SubsetCommand::Mask { file, solver } => {
            let spec = parse_mask_file(&read_file(file)?)?;
            spectral_output(&spec, solver)
        }
    }
}

fn parse_kinds(names: &[String]) -> Result<Vec<GeneratorKind>, CliError> {
    if names.is_empty() {
        return Ok(GeneratorKind::ALL.to_vec());
    }
    let mut kinds: Vec<GeneratorKind> = Vec::new();
    for name in names {
        let kind: GeneratorKind = name.trim().parse()?;
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    Ok(kinds)
}

fn suite_report(ineq: Inequality, args: &SuiteArgs, seed: u64) -> Result<VerificationReport, CliError> {
    let kinds = parse_kinds(&args.kinds)?;
    let generators = split_generators(&kinds, args.count, args.max_n, seed)?;
    let mut report = run_suite(ineq, &generators, seed);
    report.set_param("count", args.count);
    report.set_param("max_n", args.max_n);
    report.set_param(
        "kinds",
        kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
    );
    Ok(report)
}

fn verify_command(cmd: &VerifyCommand, seed: u64) -> Result<VerificationReport, CliError> {
    let report = match cmd {
        VerifyCommand::Logsob(args) => suite_report(Inequality::LogSobolev, args, seed)?,
        VerifyCommand::Tech(args) => suite_report(Inequality::Technical, args, seed)?,
        VerifyCommand::Entk(args) => suite_report(Inequality::EntK2, args, seed)?,
        VerifyCommand::Isop(args) => suite_report(Inequality::FunctionalIsop, args, seed)?,
        VerifyCommand::FkScan { n } => scan_all_subsets(*n, seed)?.report,
        VerifyCommand::Series { kmax } => {
            let mut r = verify_coefficient_properties(*kmax)?;
            r.seed = seed;
            r
        }
        VerifyCommand::Hprop { kmax, weighted } => {
            let mut r = if *weighted {
                verify_hprop_required_series(*kmax)?
            } else {
                verify_hprop_series(*kmax)?
            };
            r.seed = seed;
            r
        }
        VerifyCommand::Tightness { n_list, ratio } => tightness_sweep(n_list, *ratio, seed)?,
    };
    Ok(report)
}

fn parse_grid(spec: &str) -> Result<(f64, f64, f64), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad number {s:?} in grid {spec:?}")))
    };
    match parts.as_slice() {
        [a, b, c] => Ok((parse(a)?, parse(b)?, parse(c)?)),
        _ => Err(CliError::Usage(format!(
            "grid must be START:END:STEP, got {spec:?}"
        ))),
    }
}

fn code_bound_command(args: &CodeBoundArgs) -> Result<Output, CliError> {
    if args.asymptotic {
        let grid = args.delta_grid.as_deref().expect("clap requires the grid");
        let (start, end, step) = parse_grid(grid)?;
        if !(step.is_finite() && step > 0.0 && start <= end) {
            return Err(CliError::Usage(format!(
                "need start <= end and step > 0, got {grid:?}"
            )));
        }
        let mut text = String::from("delta,rate_bound_bits\n");
        for i in 0..grid_points(start, end, step) {
            let delta = grid_value(start, step, i, end);
            text.push_str(&format!("{delta},{}\n", asymptotic_rate_bound(delta)?));
        }
        return Ok(Output::ok(text));
    }
    let (n, d) = (args.n.expect("clap requires n"), args.d.expect("clap requires d"));
    let res = code_size_bound(n, d)?;
    Ok(Output::ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&res).expect("json")
    )))
}

fn report_output(mut report: VerificationReport, started: Instant, timing: bool) -> Output {
    report.wall_time_ms = if timing {
        started.elapsed().as_millis() as u64
    } else {
        0
    };
    Output {
        ok: report.all_passed(),
        text: format!("{}\n", report.to_json()),
        extra: Vec::new(),
    }
}

fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    let started = Instant::now();
    let timing = !cli.no_timing;
    match &cli.command {
        Command::Cfun { start, end, step } => cfun_table(*start, *end, *step),
        Command::LambdaStar { subset } => lambda_star_command(subset),
        Command::Verify { suite } => {
            Ok(report_output(verify_command(suite, cli.seed)?, started, timing))
        }
        Command::CodeBound(args) => code_bound_command(args),
        Command::ScanExtremal { n } => {
            let scan = scan_all_subsets(*n, cli.seed)?;
            Ok(Output {
                ok: scan.report.all_passed(),
                text: scan.table_csv(),
                extra: Vec::new(),
            })
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a nonnegative integer, got {raw:?}")))?;
    // 0 keeps rayon's default of one worker per core
    if threads > 0 {
        // a pool configured earlier in the process is left alone
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    Ok(())
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(path.to_owned(), e))
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    let result = configure_threads().and_then(|()| dispatch(&cli));
    let output = match result {
        Ok(output) => output,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let written = output
        .extra
        .iter()
        .try_for_each(|(path, text)| write_output(path, text))
        .and_then(|()| match &cli.out {
            Some(path) => write_output(path, &output.text),
            None => stdout
                .write_all(output.text.as_bytes())
                .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
        });
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    if output.ok {
        0
    } else {
        let _ = writeln!(stderr, "verification failed");
        1
    }
}
