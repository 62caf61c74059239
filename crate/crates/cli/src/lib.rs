//! Command line front end. [`run`] is the whole program minus process plumbing, so
//! tests can drive it with in-memory streams.

use std::fs::File;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use skewinfo::fisher::FisherFunction;
use skewinfo::membership::VerifyConfig;
use skewinfo::order::{self, OrderMethod};
use skewinfo::output::{format_number, write_csv, write_records};
use skewinfo::quadrature::QuadratureConfig;
use skewinfo::suites::{run_suites, ObservableKind, Suite, SuiteConfig};
use skewinfo::weight::{figure1_curve, reconstruct_f, WeightFunction};
use skewinfo::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "QSI_SEED";

const RANGE_HELP: &str = "Grid: `start:stop:count` (linear), `log<start>:stop:count` (log-spaced) \
                          or a comma separated list";

#[derive(Parser, Debug)]
#[command(name = "skewinfo", version, about = "Metric adjusted skew information and representing functions")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate f, f(0)/f, the tilde transform and f(0) on a t grid.
    Eval {
        /// Function spec: min | max | sqrt | wyd:<p> | bridge:<p>.
        #[arg(long, short)]
        function: String,
        #[arg(long, default_value = "log0.01:100:9", help = RANGE_HELP)]
        t: String,
    },
    /// Run seeded randomized inequality suites.
    Verify(VerifyArgs),
    /// Decide f ⪯ g. Exit 0 when it holds, 1 when it does not.
    Order {
        /// Exactly two function specs.
        specs: Vec<String>,
        /// auto | weight | phi | both.
        #[arg(long, default_value = "auto")]
        method: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Evaluate f, g, their meet and their join on a t grid.
    Lattice {
        specs: Vec<String>,
        #[arg(long, default_value = "log0.01:100:9", help = RANGE_HELP)]
        t: String,
    },
    /// Emit the weight function of a representing function on a λ grid.
    Weights {
        /// Function spec.
        #[arg(long, short, conflicts_with = "weight")]
        function: Option<String>,
        /// Weight spec: const:<v> | wydh:<p> | steph:<p> | grid:<file.csv>.
        #[arg(long, short)]
        weight: Option<String>,
        #[arg(long, default_value = "0.01:0.99:99", help = RANGE_HELP)]
        lambda: String,
        /// Compare the reconstruction from the weight with the closed form on the t grid.
        #[arg(long)]
        reconstruct: bool,
        #[arg(long, default_value = "log0.01:100:40", help = RANGE_HELP)]
        t: String,
        /// Largest acceptable relative reconstruction error.
        #[arg(long, default_value_t = 1e-6)]
        max_error: f64,
    },
    /// The curve p ↦ h_p(λ) as CSV.
    Figure1 {
        #[arg(long, default_value_t = 0.5)]
        lambda: f64,
        #[arg(long, default_value = "0.02:0.98:49", help = RANGE_HELP)]
        p: String,
    },
}

#[derive(Args, Debug)]
struct CommonArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// basic | matrix | det | pmono | convexity | all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Function spec; repeat for several functions.
    #[arg(long, short, default_value = "max")]
    function: Vec<String>,
    /// Matrix dimensions, comma separated; cycled over the trials.
    #[arg(long, default_value = "3", value_delimiter = ',')]
    dim: Vec<usize>,
    /// Tuple size for the matrix and determinant suites.
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// hermitian | non-hermitian | mixed.
    #[arg(long, default_value = "mixed")]
    observables: String,
    /// p grid for the p-monotonicity suite (default: 33 points in [0.02, 0.98]).
    #[arg(long, help = RANGE_HELP)]
    p_grid: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

/// A failure that maps to an exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::usage(format!("io error: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses a grid spec.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| format!("invalid number `{s}` in grid `{spec}`"));
    if spec.contains(':') {
        let (log, body) = match spec.strip_prefix("log") {
            Some(rest) => (true, rest),
            None => (false, spec),
        };
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid `{spec}` must be start:stop:count"));
        }
        let (a, b) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| format!("invalid count in grid `{spec}`"))?;
        if n == 0 {
            return Err(format!("grid `{spec}` has no points"));
        }
        if log && !(a > 0.0 && b > 0.0) {
            return Err(format!("log grid `{spec}` needs positive endpoints"));
        }
        let point = |i: usize| {
            let s = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
            if log {
                (a.ln() + (b.ln() - a.ln()) * s).exp()
            } else {
                a + (b - a) * s
            }
        };
        let mut out: Vec<f64> = (0..n).map(point).collect();
        // exact endpoints
        out[0] = a;
        if n > 1 {
            out[n - 1] = b;
        }
        return Ok(out);
    }
    spec.split(',').map(num).collect()
}

fn grid(spec: &str, name: &str) -> CliResult<Vec<f64>> {
    parse_range(spec).map_err(|e| Failure::usage(format!("--{name}: {e}")))
}

fn function(spec: &str) -> CliResult<FisherFunction> {
    FisherFunction::parse(spec).map_err(|e| Failure::usage(format!("{spec}: {e}")))
}

fn resolve_seed(flag: u64, env: Option<&str>) -> CliResult<u64> {
    match env {
        Some(v) => v.trim().parse().map_err(|_| Failure::usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        None => Ok(flag),
    }
}

/// Runs the program on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut buffer = Vec::new();
    let result = dispatch(&cli, env_seed, &mut buffer, err);
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    let written = match &cli.output {
        Some(path) if !buffer.is_empty() => File::create(path).and_then(|mut f| f.write_all(&buffer)),
        Some(_) => Ok(()),
        None => out.write_all(&buffer),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    code
}

fn dispatch(cli: &Cli, env_seed: Option<&str>, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Eval { function: spec, t } => cmd_eval(spec, t, cli.format.unwrap_or(Format::Csv), out),
        Command::Verify(args) => cmd_verify(args, env_seed, cli.format.unwrap_or(Format::Json), out, err),
        Command::Order { specs, method, common } => {
            cmd_order(specs, method, common, env_seed, cli.format.unwrap_or(Format::Text), out)
        }
        Command::Lattice { specs, t } => cmd_lattice(specs, t, cli.format.unwrap_or(Format::Csv), out),
        Command::Weights { function, weight, lambda, reconstruct, t, max_error } => cmd_weights(
            WeightsArgs { function, weight, lambda, reconstruct: *reconstruct, t, max_error: *max_error },
            cli.format.unwrap_or(Format::Csv),
            out,
            err,
        ),
        Command::Figure1 { lambda, p } => cmd_figure1(*lambda, p, cli.format.unwrap_or(Format::Csv), out),
    }
}

/// Emits a numeric table in the requested format.
fn emit_table(format: Format, header: &[&str], rows: &[Vec<f64>], out: &mut Vec<u8>) -> CliResult<()> {
    match format {
        Format::Csv => write_csv(&mut *out, header, rows)?,
        Format::Json => {
            let objects: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let map: serde_json::Map<String, serde_json::Value> =
                        header.iter().zip(r).map(|(h, &v)| (h.to_string(), json!(v))).collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&objects).expect("numbers serialize"))?;
        }
        Format::Text => {
            writeln!(out, "{}", header.iter().map(|h| format!("{h:>22}")).collect::<String>())?;
            for r in rows {
                writeln!(out, "{}", r.iter().map(|&v| format!("{:>22}", format_number(v))).collect::<String>())?;
            }
        }
    }
    Ok(())
}

fn cmd_eval(spec: &str, t: &str, format: Format, out: &mut Vec<u8>) -> CliResult<i32> {
    let f = function(spec)?;
    let f0 = f.f_zero();
    let mut rows = Vec::new();
    for t in grid(t, "t")? {
        let v = f.eval(t)?;
        // for non-regular f these are the formulas at f(0) = 0
        let check = f0 / v;
        let tilde = 0.5 * (t + 1.0) - (t - 1.0).powi(2) * f0 / (2.0 * v);
        rows.push(vec![t, v, check, tilde, f0]);
    }
    emit_table(format, &["t", "f", "check_f", "tilde_f", "f_zero"], &rows, out)?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    args: &VerifyArgs,
    env_seed: Option<&str>,
    format: Format,
    out: &mut Vec<u8>,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let suites = Suite::parse(&args.suite)?;
    let functions = args.function.iter().map(|s| function(s)).collect::<CliResult<Vec<_>>>()?;
    let mut cfg = SuiteConfig {
        dims: args.dim.clone(),
        trials: args.common.trials,
        seed: resolve_seed(args.common.seed, env_seed)?,
        tol: args.common.tol,
        k: args.k,
        observables: ObservableKind::parse(&args.observables)?,
        ..SuiteConfig::default()
    };
    if let Some(p) = &args.p_grid {
        cfg.p_grid = grid(p, "p-grid")?;
    }
    cfg.validate()?;
    let mut reports = Vec::new();
    for (i, f) in functions.iter().enumerate() {
        // p monotonicity does not depend on the function; run it once
        let applicable: Vec<Suite> = suites.iter().copied().filter(|&s| s != Suite::Pmono || i == 0).collect();
        reports.extend(run_suites(&applicable, f, &cfg)?);
    }
    match format {
        Format::Json => {
            for r in &reports {
                writeln!(out, "{}", serde_json::to_string(r).expect("report serializes"))?;
            }
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.suite.clone(),
                        r.function_spec.clone(),
                        r.trials.to_string(),
                        r.seed.to_string(),
                        format_number(r.worst_margin),
                        r.violations.len().to_string(),
                        r.passed.to_string(),
                    ]
                })
                .collect();
            write_records(
                &mut *out,
                &["suite", "function_spec", "trials", "seed", "worst_margin", "violations", "passed"],
                &rows,
            )?;
        }
        Format::Text => {
            for r in &reports {
                writeln!(
                    out,
                    "{:<10} {:<14} trials={} seed={} worst_margin={} violations={} {}",
                    r.suite,
                    r.function_spec,
                    r.trials,
                    r.seed,
                    format_number(r.worst_margin),
                    r.violations.len(),
                    if r.passed { "PASS" } else { "FAIL" }
                )?;
            }
        }
    }
    let failed: Vec<String> =
        reports.iter().filter(|r| !r.passed).map(|r| format!("{}/{}", r.suite, r.function_spec)).collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "violations in: {}", failed.join(", "))?;
        Ok(EXIT_VIOLATION)
    }
}

fn two_functions(specs: &[String]) -> CliResult<(FisherFunction, FisherFunction)> {
    if specs.len() != 2 {
        return Err(Failure::usage(format!("expected exactly two function specs, got {}", specs.len())));
    }
    Ok((function(&specs[0])?, function(&specs[1])?))
}

fn cmd_order(
    specs: &[String],
    method: &str,
    common: &CommonArgs,
    env_seed: Option<&str>,
    format: Format,
    out: &mut Vec<u8>,
) -> CliResult<i32> {
    let (f, g) = two_functions(specs)?;
    let method = OrderMethod::parse(method)?;
    if common.trials == 0 {
        return Err(Failure::usage("trials must be at least 1"));
    }
    if !(common.tol > 0.0) {
        return Err(Failure::usage("tolerance must be positive"));
    }
    let cfg = VerifyConfig {
        trials: common.trials,
        tol: common.tol,
        seed: resolve_seed(common.seed, env_seed)?,
        ..VerifyConfig::default()
    };
    let verdict = match order::preceq_with(&f, &g, &cfg, method) {
        Ok(v) => v,
        Err(e @ Error::MethodDisagreement { .. }) => {
            return Err(Failure { code: EXIT_VIOLATION, message: e.to_string() });
        }
        Err(e) => return Err(e.into()),
    };
    match format {
        Format::Json => {
            let v = json!({
                "f": f.name(),
                "g": g.name(),
                "holds": verdict.holds,
                "method": verdict.method,
                "worst_margin": verdict.worst_margin,
                "grid_size": verdict.grid_size,
            });
            writeln!(out, "{v}")?;
        }
        Format::Csv => write_records(
            &mut *out,
            &["f", "g", "holds", "method", "worst_margin", "grid_size"],
            &[vec![
                f.name().into(),
                g.name().into(),
                verdict.holds.to_string(),
                verdict.method.to_string(),
                format_number(verdict.worst_margin),
                verdict.grid_size.to_string(),
            ]],
        )?,
        Format::Text => {
            let rel = if verdict.holds { "holds" } else { "does not hold" };
            writeln!(out, "{} ⪯ {}: {rel}", f.name(), g.name())?;
            writeln!(out, "method: {}", verdict.method)?;
            writeln!(out, "worst margin: {}", format_number(verdict.worst_margin))?;
            writeln!(out, "grid size: {}", verdict.grid_size)?;
        }
    }
    Ok(if verdict.holds { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_lattice(specs: &[String], t: &str, format: Format, out: &mut Vec<u8>) -> CliResult<i32> {
    let (f, g) = two_functions(specs)?;
    let m = order::meet(&f, &g)?;
    let j = order::join(&f, &g)?;
    let mut rows = Vec::new();
    for t in grid(t, "t")? {
        rows.push(vec![t, f.eval(t)?, g.eval(t)?, m.eval(t)?, j.eval(t)?]);
    }
    emit_table(format, &["t", "f", "g", "meet", "join"], &rows, out)?;
    Ok(EXIT_OK)
}

struct WeightsArgs<'a> {
    function: &'a Option<String>,
    weight: &'a Option<String>,
    lambda: &'a str,
    reconstruct: bool,
    t: &'a str,
    max_error: f64,
}

fn cmd_weights(args: WeightsArgs<'_>, format: Format, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult<i32> {
    let (h, f) = match (args.function, args.weight) {
        (Some(spec), None) => {
            let f = function(spec)?;
            (order::weight_of(&f)?, Some(f))
        }
        (None, Some(spec)) => (WeightFunction::parse(spec)?, None),
        _ => return Err(Failure::usage("give exactly one of --function or --weight")),
    };
    if !args.reconstruct {
        let rows: Vec<Vec<f64>> = grid(args.lambda, "lambda")?.into_iter().map(|l| vec![l, h.eval(l)]).collect();
        emit_table(format, &["lambda", "h"], &rows, out)?;
        return Ok(EXIT_OK);
    }
    let f = f.ok_or_else(|| Failure::usage("--reconstruct needs --function"))?;
    let q = QuadratureConfig::default();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for t in grid(args.t, "t")? {
        let exact = f.eval(t)?;
        let rec = reconstruct_f(&h, t, &q)?;
        let rel = (rec - exact).abs() / exact;
        worst = worst.max(rel);
        rows.push(vec![t, exact, rec, rel]);
    }
    emit_table(format, &["t", "f", "reconstructed", "relative_error"], &rows, out)?;
    writeln!(err, "max relative error: {}", format_number(worst))?;
    Ok(if worst <= args.max_error { EXIT_OK } else { EXIT_VIOLATION })
}

fn cmd_figure1(lambda: f64, p: &str, format: Format, out: &mut Vec<u8>) -> CliResult<i32> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Failure::usage(format!("lambda out of range: {lambda} not in (0,1)")));
    }
    let rows: Vec<Vec<f64>> = figure1_curve(lambda, &grid(p, "p")?)?.into_iter().map(|(p, h)| vec![p, h]).collect();
    emit_table(format, &["p", "h_p_lambda"], &rows, out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_grammar() {
        assert_eq!(parse_range("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_range("log0.01:100:5").unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[4], 100.0);
        assert!((g[2] - 1.0).abs() < 1e-14);
        assert_eq!(parse_range("0.1, 0.2,3").unwrap(), vec![0.1, 0.2, 3.0]);
        assert_eq!(parse_range("4").unwrap(), vec![4.0]);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("log0:1:3").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("a,b").is_err());
    }

    #[test]
    fn seed_override() {
        assert_eq!(resolve_seed(42, None).unwrap(), 42);
        assert_eq!(resolve_seed(42, Some("7")).unwrap(), 7);
        assert!(resolve_seed(42, Some("x")).is_err());
    }
}
