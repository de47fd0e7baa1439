//! The `heiskern` command line.
//!
//! `run` never panics on bad input and never calls `process::exit`; it
//! returns the exit code: 0 on success, 1 when a verification fails or an
//! evaluation does not converge, 2 on usage errors.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, LevelFilter};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{folland_closed, folland_integral_with, green_r0_with, resolvent, validated_fast_path, KernelQuery, PsiRoute};
use crate::special::ValidatedFastPath;
use crate::verify::{axis_point, format_number, run_suite, to_json, write_csv, Suite, SuiteOutcome};
use crate::{Complex, Point, QuadConfig};

/// Environment variable selecting log verbosity: `quiet`, `info` or `debug`.
pub const LOG_ENV: &str = "HEISKERN_LOG";

#[derive(Debug, Parser)]
#[command(name = "heiskern", version, about = "Heisenberg-group kernel evaluation and verification")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a kernel at one point.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Run a verification suite and write its reports.
    Verify(VerifyArgs),
    /// Compare closed form and integral representation over a grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
enum EvalCommand {
    /// Folland's fundamental solution G(z, tau).
    Folland(FollandArgs),
    /// Resolvent kernel R(zeta; (z, tau), (w, s)).
    Resolvent(ResolventArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Integral,
    Green,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Chain,
    Kernels,
    Distributional,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Chain => Suite::Chain,
            SuiteArg::Kernels => Suite::Kernels,
            SuiteArg::Distributional => Suite::Distributional,
        }
    }
}

#[derive(Debug, Args)]
struct FollandArgs {
    #[arg(long)]
    n: usize,
    /// Complex coordinates as "re:im;re:im;...".
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, allow_hyphen_values = true)]
    tau: f64,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    /// Relative tolerance of the quadratures.
    #[arg(long)]
    tol: Option<f64>,
    /// Use the validated Bessel closed form for the inner function.
    #[arg(long)]
    fast: bool,
}

#[derive(Debug, Args)]
struct ResolventArgs {
    #[arg(long)]
    n: usize,
    /// Spectral parameter as "re:im", with re < 0.
    #[arg(long, allow_hyphen_values = true)]
    zeta: String,
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    #[arg(long, allow_hyphen_values = true)]
    tau: f64,
    /// Source point coordinates; the origin when absent.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    s: f64,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// CSV report path.
    #[arg(long, default_value = "report.csv")]
    out: PathBuf,
    /// Also write the reports as a JSON document.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2")]
    zmag: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,1,4,10")]
    tau: Vec<f64>,
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    #[arg(long)]
    tol: Option<f64>,
    /// Use the validated Bessel closed form for the inner function.
    #[arg(long)]
    fast: bool,
}

/// Parameters of a grid sweep.
#[derive(Debug, Clone)]
pub struct SweepPlan {
    pub n_values: Vec<usize>,
    pub z_magnitudes: Vec<f64>,
    pub tau_values: Vec<f64>,
    pub cfg: QuadConfig,
    pub output_path: PathBuf,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n_values.is_empty() || self.z_magnitudes.is_empty() || self.tau_values.is_empty() {
            return Err(Error::InvalidConfig("sweep lists must be non-empty".into()));
        }
        if self.n_values.contains(&0) {
            return Err(Error::InvalidConfig("n must be positive".into()));
        }
        if self.z_magnitudes.iter().any(|&z| !(z > 0.0 && z.is_finite())) {
            return Err(Error::InvalidConfig("|z| values must be positive".into()));
        }
        if self.tau_values.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidConfig("tau values must be finite".into()));
        }
        self.cfg.validate()
    }

    /// Grid points in output order: `n`, then `|z|`, then `tau`.
    pub fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut pts = Vec::new();
        for &n in &self.n_values {
            for &zmag in &self.z_magnitudes {
                for &tau in &self.tau_values {
                    pts.push((n, zmag, tau));
                }
            }
        }
        pts
    }
}

/// One line of the sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub zmag: f64,
    pub tau: f64,
    pub closed: f64,
    pub integral: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub evaluations: usize,
    pub seconds: f64,
    pub converged: bool,
}

pub const SWEEP_COLUMNS: [&str; 9] = ["n", "zmag", "tau", "closed", "integral", "abs_err", "rel_err", "evaluations", "seconds"];

/// Evaluates every grid point (in parallel), rows in grid order.
pub fn run_sweep(plan: &SweepPlan, fast: bool) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let mut tokens: Vec<(usize, ValidatedFastPath)> = Vec::new();
    if fast {
        let mut ns = plan.n_values.clone();
        ns.sort_unstable();
        ns.dedup();
        for n in ns {
            tokens.push((n, validated_fast_path(n, &plan.cfg)?));
        }
    }
    plan.points()
        .par_iter()
        .map(|&(n, zmag, tau)| {
            let route = tokens
                .iter()
                .find(|(m, _)| *m == n)
                .map_or(PsiRoute::Nested, |(_, t)| PsiRoute::Fast(t));
            let p = axis_point(n, zmag, tau);
            let start = Instant::now();
            let closed = folland_closed(&p, n)?;
            let r = folland_integral_with(&p, n, &plan.cfg, route)
                .map_err(|e| e.context(format!("n = {}, |z| = {}, tau = {}", n, zmag, tau)))?;
            let abs_err = (r.value - closed).abs();
            Ok(SweepRow {
                n,
                zmag,
                tau,
                closed,
                integral: r.value,
                abs_err,
                rel_err: abs_err / closed.abs(),
                evaluations: r.evaluations,
                seconds: start.elapsed().as_secs_f64(),
                converged: r.converged,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidConfig(format!("writing CSV: {}", e));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            format_number(r.zmag),
            format_number(r.tau),
            format_number(r.closed),
            format_number(r.integral),
            format_number(r.abs_err),
            format_number(r.rel_err),
            r.evaluations.to_string(),
            format_number(r.seconds),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidConfig(format!("writing CSV: {}", e)))
}

/// Parses `"re:im;re:im;..."`; a bare `"re"` means `im = 0`.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex>> {
    text.split(';').map(|s| parse_complex(s.trim())).collect()
}

/// Parses `"re:im"`.
pub fn parse_complex(text: &str) -> Result<Complex> {
    let bad = || Error::InvalidConfig(format!("expected a complex literal 're:im', got '{}'", text));
    let mut parts = text.split(':');
    let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let im: f64 = match parts.next() {
        Some(s) => s.trim().parse().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(Complex::new(re, im))
}

fn init_logging() {
    let level = match std::env::var(LOG_ENV).as_deref() {
        Ok("debug") => LevelFilter::Debug,
        Ok("info") => LevelFilter::Info,
        Ok("quiet") => LevelFilter::Off,
        _ => LevelFilter::Warn,
    };
    // a second call (tests running `run` repeatedly) is harmless
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::InvalidConfig(_) | Error::DimensionMismatch { .. } | Error::Precondition { .. } | Error::Domain { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Run(e.to_string()),
        }
    }
}

/// Entry point: parses `argv` (including the program name) and runs the
/// subcommand, returning the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("usage error"));
            return 2;
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Eval(EvalCommand::Folland(args)) => eval_folland(&args, &mut out),
        Command::Eval(EvalCommand::Resolvent(args)) => eval_resolvent(&args, &mut out),
        Command::Verify(args) => verify(&args, &mut out),
        Command::Sweep(args) => sweep(&args, &mut out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {}", msg);
            2
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {}", msg);
            1
        }
    }
}

fn config(tol: Option<f64>) -> std::result::Result<QuadConfig, Failure> {
    let cfg = match tol {
        Some(t) => QuadConfig::default().with_rel_tol(t),
        None => QuadConfig::default(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn point(n: usize, z: &str, tau: f64) -> std::result::Result<Point, Failure> {
    let z = parse_complex_list(z)?;
    if z.len() != n {
        return Err(Failure::Usage(format!("--n {} but {} complex coordinates given", n, z.len())));
    }
    Ok(Point::new(z, tau)?)
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Run(format!("writing output: {}", e))
}

fn eval_folland(args: &FollandArgs, out: &mut impl Write) -> std::result::Result<i32, Failure> {
    let cfg = config(args.tol)?;
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let p = point(args.n, &args.z, args.tau)?;
    let method = match args.method {
        Method::Closed => "closed",
        Method::Integral => "integral",
        Method::Green => "green",
    };
    let token = if args.fast && args.method != Method::Closed && p.z_norm_sqr() > 0.0 {
        Some(validated_fast_path(args.n, &cfg)?)
    } else {
        None
    };
    let route = token.as_ref().map_or(PsiRoute::Nested, PsiRoute::Fast);
    let mut note = None;
    let (value, error, evaluations, converged) = match args.method {
        Method::Closed => (folland_closed(&p, args.n)?, 0.0, 0, true),
        _ if p.z_norm_sqr() == 0.0 => {
            note = Some("closed-form fallback (z=0)");
            (folland_closed(&p, args.n)?, 0.0, 0, true)
        }
        Method::Integral => {
            let r = folland_integral_with(&p, args.n, &cfg, route)?;
            (r.value, r.error_estimate, r.evaluations, r.converged)
        }
        Method::Green => {
            // R_0(p, 0) = (sqrt(pi)/2) G(p)
            let scale = 2.0 / PI.sqrt();
            let r = green_r0_with(&p, &Point::identity(args.n), args.n, &cfg, route)?;
            (scale * r.value, scale * r.error_estimate, r.evaluations, r.converged)
        }
    };
    let mut line = format!(
        "value={} error_estimate={} method={} evaluations={} converged={}",
        format_number(value),
        format_number(error),
        method,
        evaluations,
        converged
    );
    if let Some(note) = note {
        line.push_str(&format!(" note=\"{}\"", note));
    }
    writeln!(out, "{}", line).map_err(io_failure)?;
    Ok(if converged { 0 } else { 1 })
}

fn eval_resolvent(args: &ResolventArgs, out: &mut impl Write) -> std::result::Result<i32, Failure> {
    let cfg = config(args.tol)?;
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let zeta = parse_complex(&args.zeta)?;
    let p = point(args.n, &args.z, args.tau)?;
    let mut query = KernelQuery::new(args.n, p).with_zeta(zeta).with_cfg(cfg);
    if let Some(w) = &args.w {
        query = query.with_source(point(args.n, w, args.s)?);
    } else if args.s != 0.0 {
        query = query.with_source(Point::new(vec![Complex::new(0.0, 0.0); args.n], args.s)?);
    }
    let r = resolvent(&query)?;
    writeln!(
        out,
        "value_re={} value_im={} error_estimate={} method=integral evaluations={} converged={}",
        format_number(r.value.re),
        format_number(r.value.im),
        format_number(r.error_estimate),
        r.evaluations,
        r.converged
    )
    .map_err(io_failure)?;
    Ok(if r.converged { 0 } else { 1 })
}

fn create(path: &Path) -> std::result::Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {}", path.display(), e)))
}

fn print_summary(outcome: &SuiteOutcome, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{:<30} {:>8} {:>8}", "identity", "passed", "total")?;
    for (id, passed, total) in outcome.summary() {
        writeln!(out, "{:<30} {:>8} {:>8}", id, passed, total)?;
    }
    if let Some(c) = outcome.reports.iter().find(|r| r.identity_id == "distributional_constant") {
        if let Some(k) = c.parameter("constant") {
            writeln!(
                out,
                "normalization finding: cubature / phi(0) = {} across test functions (spread {:.1e})",
                format_number(k),
                c.rel_residual
            )?;
        }
    }
    for (label, e) in &outcome.errors {
        writeln!(out, "ERROR {}: {}", label, e)?;
    }
    let failed = outcome.failures().count();
    writeln!(
        out,
        "{} reports, {} failed, {} errors",
        outcome.reports.len(),
        failed,
        outcome.errors.len()
    )
}

fn verify(args: &VerifyArgs, out: &mut impl Write) -> std::result::Result<i32, Failure> {
    let start = Instant::now();
    let outcome = run_suite(args.suite.into(), args.seed);
    info!("suite finished in {:.1} s", start.elapsed().as_secs_f64());
    let mut csv_out = create(&args.out)?;
    write_csv(&outcome.reports, &mut csv_out)?;
    csv_out.flush().map_err(io_failure)?;
    if let Some(path) = &args.json {
        let mut json_out = create(path)?;
        writeln!(json_out, "{}", to_json(&outcome.reports)?).map_err(io_failure)?;
    }
    print_summary(&outcome, out).map_err(io_failure)?;
    Ok(if outcome.all_passed() { 0 } else { 1 })
}

fn sweep(args: &SweepArgs, out: &mut impl Write) -> std::result::Result<i32, Failure> {
    let plan = SweepPlan {
        n_values: args.n.clone(),
        z_magnitudes: args.zmag.clone(),
        tau_values: args.tau.clone(),
        cfg: config(args.tol)?,
        output_path: args.out.clone(),
    };
    plan.validate()?;
    let rows = run_sweep(&plan, args.fast)?;
    let mut file = create(&plan.output_path)?;
    write_sweep_csv(&rows, &mut file)?;
    file.flush().map_err(io_failure)?;
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    writeln!(
        out,
        "{} points written to {}; worst relative deviation {}; {} not converged",
        rows.len(),
        plan.output_path.display(),
        format_number(worst),
        unconverged
    )
    .map_err(io_failure)?;
    Ok(if unconverged == 0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1:-2.5").unwrap(), Complex::new(1.0, -2.5));
        assert_eq!(parse_complex("-3").unwrap(), Complex::new(-3.0, 0.0));
        assert!(parse_complex("1:2:3").is_err());
        assert!(parse_complex("a:b").is_err());
        assert_eq!(parse_complex_list("1:0; 0:1").unwrap().len(), 2);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["heiskern", "frobnicate"]), 2);
        assert_eq!(run(["heiskern", "eval", "folland", "--n", "1"]), 2);
        assert_eq!(run(["heiskern", "eval", "folland", "--n", "2", "--z", "1:0", "--tau", "0"]), 2);
        assert_eq!(run(["heiskern", "eval", "folland", "--n", "1", "--z", "x", "--tau", "0"]), 2);
    }

    #[test]
    fn eval_exit_codes() {
        assert_eq!(run(["heiskern", "eval", "folland", "--n", "1", "--z", "1:0", "--tau", "0"]), 0);
        assert_eq!(
            run(["heiskern", "eval", "folland", "--n", "1", "--z", "0:0", "--tau", "2", "--method", "integral"]),
            0
        );
        // the identity is a singularity of the kernel
        assert_eq!(run(["heiskern", "eval", "folland", "--n", "1", "--z", "0:0", "--tau", "0"]), 1);
        assert_eq!(
            run(["heiskern", "eval", "resolvent", "--n", "1", "--zeta", "-1:0", "--z", "1:0", "--tau", "-0.5"]),
            0
        );
    }

    #[test]
    fn sweep_spec_validation() {
        let plan = SweepPlan {
            n_values: vec![1],
            z_magnitudes: vec![],
            tau_values: vec![0.0],
            cfg: QuadConfig::default(),
            output_path: "x.csv".into(),
        };
        assert!(plan.validate().is_err());
        let plan = SweepPlan {
            z_magnitudes: vec![1.0, 2.0],
            tau_values: vec![0.0, 1.0, 2.0],
            ..plan
        };
        assert_eq!(plan.points().len(), 6);
        assert_eq!(plan.points()[1], (1, 1.0, 1.0));
    }
}
