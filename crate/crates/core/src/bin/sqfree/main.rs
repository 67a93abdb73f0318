//! Command-line front end for the `sqfree` library.
//!
//! Every run writes `#`-prefixed metadata lines (tool version, seed and all
//! parameters), a header row and data rows. Exit status is 0 on success,
//! 1 when a parameter is rejected and 2 on I/O failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Cell, Format, Table};
use sqfree::charfn::{self, ComplexValue};
use sqfree::classical::{self, SmoothnessSieve};
use sqfree::dickman::{DickmanGrid, DEFAULT_STEP, DEFAULT_T_MAX};
use sqfree::ensemble::{self, EnsembleSpec, HalfProductTable};
use sqfree::errorterms::{self, KSchedule};
use sqfree::primes::PrimeTable;
use sqfree::Execution;

#[derive(Debug, Parser)]
#[command(
    name = "sqfree",
    version,
    about = "Weighted square-free ensembles and the Dickman-De Bruijn law"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Seed for every Monte Carlo draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prime counts and the Mertens product.
    Primes(PrimesArgs),
    /// The ensemble Ω_m.
    #[command(subcommand)]
    Ensemble(EnsembleCommand),
    /// The Dickman function and the limiting distribution.
    Rho(RhoArgs),
    /// The limiting characteristic function.
    Phi(PhiArgs),
    /// Cell errors and the weighted error statistic.
    Errors(ErrorsArgs),
    /// Riemann-sum gaps and their bound.
    Lemma(LemmaArgs),
    /// Square-free counts, smooth numbers and the θ_n model.
    #[command(subcommand)]
    Classical(ClassicalCommand),
}

#[derive(Debug, Args)]
struct PrimesArgs {
    #[arg(long)]
    limit: u64,
    /// Report N(T).
    #[arg(long, conflicts_with = "mertens")]
    count_at: Option<f64>,
    /// Report ln X · Π_{p≤X}(1 − 1/p).
    #[arg(long)]
    mertens: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum EnsembleCommand {
    /// Partition function against its asymptotic.
    Zm {
        #[arg(long)]
        m: usize,
    },
    /// Draw ζ_m samples.
    Sample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        count: usize,
    },
    /// Π_m{ζ_m ≤ s}, exact or Monte Carlo.
    #[command(allow_negative_numbers = true)]
    Mass {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: f64,
        #[arg(long, conflicts_with = "mc")]
        exact: bool,
        /// Monte Carlo sample count.
        #[arg(long)]
        mc: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct RhoArgs {
    #[arg(long, conflicts_with = "table", required_unless_present = "table")]
    t: Option<f64>,
    /// Evaluate on A:B:STEP.
    #[arg(long, allow_hyphen_values = true)]
    table: Option<String>,
    /// Grid step, as a decimal or `1/N`.
    #[arg(long, value_parser = parse_step)]
    h: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PhiMethod {
    Closed,
    Quad,
    Empirical,
}

#[derive(Debug, Args)]
struct PhiArgs {
    /// λ values as A:B:STEP.
    #[arg(long, allow_hyphen_values = true)]
    lambda_grid: String,
    #[arg(long, value_enum, default_value_t = PhiMethod::Closed)]
    method: PhiMethod,
    /// ζ samples (as written by `ensemble sample`) for the empirical method.
    #[arg(long, required_if_eq("method", "empirical"))]
    samples: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ErrorsArgs {
    #[arg(long, required_unless_present = "sweep")]
    m: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Fixed number of cells.
    #[arg(long = "K", conflicts_with = "schedule")]
    k: Option<usize>,
    /// c-one, c-zero or fast.
    #[arg(long)]
    schedule: Option<KSchedule>,
    /// Comma-separated m values; one summary row per m.
    #[arg(long, value_delimiter = ',', conflicts_with = "m")]
    sweep: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Constant in the bound; defaults to the realized ln³p_m/K².
    #[arg(long)]
    c: Option<f64>,
}

#[derive(Debug, Args)]
struct LemmaArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    sigma: f64,
    #[arg(long = "K")]
    k: usize,
}

#[derive(Debug, Subcommand)]
enum ClassicalCommand {
    /// M(t), the number of square-free n ≤ t.
    Squarefree {
        #[arg(long)]
        t: f64,
    },
    /// Ψ(x, y), the number of y-smooth n ≤ x.
    Psi {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
    },
    /// Replicates of θ_n.
    Theta {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        count: usize,
    },
    /// ln Ψ(x, ln x) against ln 4 · ln x / ln ln x.
    Erdos {
        #[arg(long)]
        x: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Io(String),
}

impl From<sqfree::Error> for Failure {
    fn from(e: sqfree::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn invalid(name: &str, reason: impl std::fmt::Display) -> Failure {
    Failure::Validation(format!("invalid argument `{name}`: {reason}"))
}

fn parse_step(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
            a / b
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    Ok(value)
}

/// Points `A, A+STEP, …, ≤ B` from `A:B:STEP`.
fn parse_range(name: &str, spec: &str) -> Outcome<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, step] = parts.as_slice() else {
        return Err(invalid(name, format!("expected A:B:STEP, got `{spec}`")));
    };
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| invalid(name, format!("`{s}`: {e}")))
    };
    let (a, b, step) = (parse(a)?, parse(b)?, parse(step)?);
    if !(step > 0.0) || !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(invalid(
            name,
            format!("need A <= B and STEP > 0, got `{spec}`"),
        ));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(invalid(name, "more than 10^7 points"));
    }
    Ok((0..count).map(|i| a + i as f64 * step).collect())
}

fn table_for(m: usize) -> Outcome<PrimeTable> {
    if m == 0 {
        return Err(invalid("m", "must be positive"));
    }
    Ok(PrimeTable::with_at_least(m)?)
}

fn primes(args: &PrimesArgs) -> Outcome<Table> {
    let table = PrimeTable::sieve(args.limit)?;
    let pi_limit = table.len();
    let mut out = Table::new(&["limit", "pi_limit", "value"]);
    out.meta("limit", args.limit);
    let value = if let Some(t) = args.count_at {
        out.meta("quantity", format!("prime_count({t})"));
        Cell::Int(table.prime_count(t)? as u64)
    } else if let Some(x) = args.mertens {
        out.meta("quantity", format!("mertens_product({x})"));
        Cell::Real(table.mertens_product(x)?)
    } else {
        out.meta("quantity", "largest_prime");
        Cell::Int(table.primes().last().copied().unwrap_or(0))
    };
    out.push(vec![args.limit.into(), pi_limit.into(), value]);
    Ok(out)
}

fn ensemble_cmd(command: &EnsembleCommand, seed: u64) -> Outcome<Table> {
    match *command {
        EnsembleCommand::Zm { m } => {
            let spec = EnsembleSpec::build(&table_for(m)?, m)?;
            let mut out = Table::new(&["m", "p_m", "Z_m", "ratio"]);
            out.meta("m", m);
            out.meta("limit_ratio", output::real(ensemble::zm_limit_ratio()));
            out.push(vec![
                m.into(),
                spec.largest_prime().into(),
                spec.log_z().exp().into(),
                spec.zm_asymptotic_ratio().into(),
            ]);
            Ok(out)
        }
        EnsembleCommand::Sample { m, count } => {
            if count == 0 {
                return Err(invalid("count", "must be positive"));
            }
            let spec = EnsembleSpec::build(&table_for(m)?, m)?;
            let mut out = Table::new(&["zeta"]);
            out.meta("m", m);
            out.meta("count", count);
            for z in spec.sample_zeta(seed, count) {
                out.push(vec![z.into()]);
            }
            Ok(out)
        }
        EnsembleCommand::Mass { m, s, exact: _, mc } => {
            if !s.is_finite() {
                return Err(invalid("s", "must be finite"));
            }
            let spec = EnsembleSpec::build(&table_for(m)?, m)?;
            let mut out = Table::new(&["m", "s", "mass", "method"]);
            out.meta("m", m);
            out.meta("s", output::real(s));
            let (mass, method) = match mc {
                Some(0) => return Err(invalid("mc", "must be positive")),
                Some(n) => {
                    out.meta("samples", n);
                    (
                        ensemble::empirical_cdf(&spec.sample_zeta(seed, n), s)?,
                        "mc",
                    )
                }
                None => (HalfProductTable::build(&spec)?.mass_below(s), "exact"),
            };
            out.push(vec![m.into(), s.into(), mass.into(), method.into()]);
            Ok(out)
        }
    }
}

fn rho(args: &RhoArgs) -> Outcome<Table> {
    let points = match (&args.table, args.t) {
        (Some(spec), _) => parse_range("table", spec)?,
        (None, Some(t)) => vec![t],
        (None, None) => return Err(invalid("t", "give --t or --table")),
    };
    let h = args.h.unwrap_or(DEFAULT_STEP);
    let widest = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let t_max = args
        .grid_max
        .unwrap_or_else(|| DEFAULT_T_MAX.max(widest.ceil()));
    let grid = DickmanGrid::build(h, t_max)?;
    let mut out = Table::new(&["t", "rho", "density", "cdf"]);
    out.meta("h", output::real(grid.step()));
    out.meta("grid_max", output::real(t_max));
    out.meta("underflow", grid.underflowed());
    for t in points {
        out.push(vec![
            t.into(),
            grid.rho(t)?.into(),
            grid.density(t)?.into(),
            grid.cdf(t)?.into(),
        ]);
    }
    Ok(out)
}

/// ζ values from a file written by `ensemble sample` (CSV or JSON).
fn read_samples(path: &PathBuf) -> Outcome<Vec<f64>> {
    let io_err = |e: io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let file = File::open(path).map_err(io_err)?;
    let mut text = String::new();
    let mut reader = BufReader::new(file);
    let mut samples = Vec::new();
    let first = loop {
        text.clear();
        if reader.read_line(&mut text).map_err(io_err)? == 0 {
            break None;
        }
        let line = text.trim();
        if !line.is_empty() && !line.starts_with('#') {
            break Some(line.to_owned());
        }
    };
    match first.as_deref() {
        Some("zeta") => {
            for line in reader.lines() {
                let line = line.map_err(io_err)?;
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                samples.push(
                    line.parse()
                        .map_err(|e| invalid("samples", format!("`{line}`: {e}")))?,
                );
            }
        }
        Some(line) if line.starts_with('{') => {
            let mut rest = String::from(line);
            text.clear();
            io::Read::read_to_string(&mut reader, &mut text).map_err(io_err)?;
            rest.push_str(&text);
            let doc: serde_json::Value = serde_json::from_str(&rest)
                .map_err(|e| invalid("samples", format!("bad JSON: {e}")))?;
            for row in doc["rows"].as_array().into_iter().flatten() {
                samples.push(
                    row["zeta"]
                        .as_f64()
                        .ok_or_else(|| invalid("samples", "row without zeta"))?,
                );
            }
        }
        _ => return Err(invalid("samples", "expected a `zeta` column")),
    }
    Ok(samples)
}

fn phi(args: &PhiArgs) -> Outcome<Table> {
    let lambdas = parse_range("lambda-grid", &args.lambda_grid)?;
    let mut out = Table::new(&["lambda", "re", "im", "abs"]);
    out.meta("method", format!("{:?}", args.method).to_lowercase());
    let samples = match (&args.samples, args.method) {
        (Some(path), PhiMethod::Empirical) => {
            out.meta("samples", path.display());
            Some(read_samples(path)?)
        }
        _ => None,
    };
    for lambda in lambdas {
        let value: ComplexValue = match args.method {
            PhiMethod::Closed => charfn::phi_closed(lambda),
            PhiMethod::Quad => charfn::phi_quadrature(lambda)?,
            PhiMethod::Empirical => {
                charfn::empirical_charfn(samples.as_deref().unwrap_or(&[]), lambda)?
            }
        };
        out.push(vec![
            lambda.into(),
            value.re.into(),
            value.im.into(),
            value.norm().into(),
        ]);
    }
    Ok(out)
}

const ERROR_COLUMNS: [&str; 10] = [
    "m",
    "k",
    "delta_k",
    "cell_mass",
    "E",
    "weight",
    "weighted_sum",
    "mean",
    "bound",
    "inside",
];

fn errors(args: &ErrorsArgs) -> Outcome<Table> {
    if !(args.sigma > 0.0 && args.sigma <= 1.0) {
        return Err(invalid(
            "sigma",
            format!("need 0 < sigma <= 1, got {}", args.sigma),
        ));
    }
    if !(args.epsilon >= 0.0) {
        return Err(invalid("epsilon", "must be non-negative"));
    }
    let schedule = match (args.k, args.schedule) {
        (Some(0), _) => return Err(invalid("K", "must be positive")),
        (Some(k), _) => KSchedule::Fixed(k),
        (None, Some(s)) => s,
        (None, None) => return Err(invalid("K", "give --K or --schedule")),
    };
    let mut out = Table::new(&ERROR_COLUMNS);
    out.meta("sigma", output::real(args.sigma));
    out.meta("schedule", schedule);
    out.meta("epsilon", output::real(args.epsilon));
    match &args.sweep {
        None => {
            let m = args
                .m
                .ok_or_else(|| invalid("m", "required without --sweep"))?;
            let spec = EnsembleSpec::build(&table_for(m)?, m)?;
            let half = HalfProductTable::build(&spec)?;
            let cells = schedule.cells(spec.log_largest(), args.sigma);
            let grid = errorterms::error_grid(&half, &spec, args.sigma, cells)?;
            let report = errorterms::report_for(&grid, spec.largest_prime(), args.c, args.epsilon);
            out.meta("m", m);
            out.meta("K", cells);
            out.meta("c", output::real(report.c));
            out.meta("realized_c", output::real(report.realized_c));
            out.meta("statistic", output::real(report.statistic));
            let deltas = grid.partition().deltas();
            for (k, &delta) in deltas[..cells].iter().enumerate() {
                out.push(vec![
                    m.into(),
                    k.into(),
                    delta.into(),
                    grid.cell_mass()[k].into(),
                    grid.errors()[k].into(),
                    grid.weights()[k].into(),
                    grid.weighted_sum().into(),
                    grid.mean_error().into(),
                    report.bound.into(),
                    report.inside.into(),
                ]);
            }
        }
        Some(ms) => {
            let mut ms = ms.clone();
            ms.sort_unstable();
            ms.dedup();
            let widest = *ms.last().ok_or_else(|| invalid("sweep", "empty list"))?;
            let table = table_for(widest)?;
            let rows = Execution::default().map_indices(ms.len(), |i| -> Outcome<_> {
                let spec = EnsembleSpec::build(&table, ms[i])?;
                let half = HalfProductTable::build(&spec)?;
                let cells = schedule.cells(spec.log_largest(), args.sigma);
                let grid = errorterms::error_grid(&half, &spec, args.sigma, cells)?;
                let report =
                    errorterms::report_for(&grid, spec.largest_prime(), args.c, args.epsilon);
                let weight = (spec.log_z() - args.sigma * spec.log_largest()).exp();
                Ok((grid, report, weight))
            });
            out.meta(
                "row",
                "k=K delta_k=sigma cell_mass=sum of cells E=statistic weight=Z_m/p_m^sigma",
            );
            for (i, row) in rows.into_iter().enumerate() {
                let (grid, report, weight) = row?;
                out.meta(
                    &format!("realized_c[m={}]", ms[i]),
                    output::real(report.realized_c),
                );
                out.push(vec![
                    ms[i].into(),
                    report.cells.into(),
                    args.sigma.into(),
                    grid.total_mass().into(),
                    report.statistic.into(),
                    weight.into(),
                    grid.weighted_sum().into(),
                    grid.mean_error().into(),
                    report.bound.into(),
                    report.inside.into(),
                ]);
            }
        }
    }
    Ok(out)
}

fn lemma(args: &LemmaArgs) -> Outcome<Table> {
    let table = table_for(args.m)?;
    let margins = errorterms::lemma_margins(&table, args.m, args.sigma, args.k)?;
    let mut out = Table::new(&[
        "m",
        "p_m",
        "sigma",
        "K",
        "right_gap",
        "left_gap",
        "bound",
        "holds",
    ]);
    out.meta("m", args.m);
    out.meta("sigma", output::real(args.sigma));
    out.meta("K", args.k);
    out.push(vec![
        args.m.into(),
        table.nth_prime(args.m)?.into(),
        args.sigma.into(),
        args.k.into(),
        margins.right_gap.into(),
        margins.left_gap.into(),
        margins.bound.into(),
        margins.holds().into(),
    ]);
    Ok(out)
}

fn sieve_limit(name: &str, value: f64) -> Outcome<u64> {
    if !(value >= 1.0) || value > classical::DEFAULT_SIEVE_CAP as f64 {
        return Err(invalid(
            name,
            format!(
                "need 1 <= {name} <= {}, got {value}",
                classical::DEFAULT_SIEVE_CAP
            ),
        ));
    }
    Ok(value.floor() as u64)
}

fn classical_cmd(command: &ClassicalCommand, seed: u64) -> Outcome<Table> {
    match *command {
        ClassicalCommand::Squarefree { t } => {
            let limit = sieve_limit("t", t)?;
            let count = classical::squarefree_count(limit, t)?;
            let mut out = Table::new(&["t", "count", "ratio"]);
            out.meta("t", output::real(t));
            out.push(vec![t.into(), count.into(), (count as f64 / t).into()]);
            Ok(out)
        }
        ClassicalCommand::Psi { x, y } => {
            let sieve = SmoothnessSieve::new(sieve_limit("x", x as f64)?)?;
            let psi = sieve.psi(x, y)?;
            let u = if y >= 2 {
                (x as f64).ln() / (y as f64).ln()
            } else {
                f64::INFINITY
            };
            let ratio = if u.is_finite() {
                let grid = DickmanGrid::build(DEFAULT_STEP, DEFAULT_T_MAX.max(u.ceil()))?;
                psi as f64 / (x as f64 * grid.rho(u)?)
            } else {
                f64::NAN
            };
            let mut out = Table::new(&["x", "y", "psi", "u", "ratio"]);
            out.meta("x", x);
            out.meta("y", y);
            out.meta("ratio", "psi/(x rho(u))");
            out.push(vec![x.into(), y.into(), psi.into(), u.into(), ratio.into()]);
            Ok(out)
        }
        ClassicalCommand::Theta { n, count } => {
            let set = classical::sample_theta(n, seed, count)?;
            let grid = DickmanGrid::build(DEFAULT_STEP, DEFAULT_T_MAX)?;
            let scaled = set.scaled();
            let ks = classical::ks_distance(&scaled, |s| grid.cdf_saturating(s))?;
            let mut out = Table::new(&["replicate", "theta", "scaled"]);
            out.meta("n", n);
            out.meta("count", count);
            out.meta("ks_distance", output::real(ks));
            for (i, (&theta, &s)) in set.samples.iter().zip(&scaled).enumerate() {
                out.push(vec![i.into(), theta.into(), s.into()]);
            }
            Ok(out)
        }
        ClassicalCommand::Erdos { x } => {
            let sieve = SmoothnessSieve::new(sieve_limit("x", x as f64)?)?;
            let d = classical::erdos_diagnostic(&sieve, x)?;
            let mut out = Table::new(&["x", "y", "psi", "log_psi", "predicted", "ratio"]);
            out.meta("x", x);
            out.push(vec![
                d.x.into(),
                d.y.into(),
                d.psi.into(),
                d.log_psi.into(),
                d.predicted.into(),
                d.ratio.into(),
            ]);
            Ok(out)
        }
    }
}

fn configure_threads(threads: usize) -> Outcome<()> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| invalid("threads", e))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn run(cli: &Cli) -> Outcome<()> {
    configure_threads(cli.threads)?;
    let body = match &cli.command {
        Command::Primes(args) => primes(args)?,
        Command::Ensemble(cmd) => ensemble_cmd(cmd, cli.seed)?,
        Command::Rho(args) => rho(args)?,
        Command::Phi(args) => phi(args)?,
        Command::Errors(args) => errors(args)?,
        Command::Lemma(args) => lemma(args)?,
        Command::Classical(cmd) => classical_cmd(cmd, cli.seed)?,
    };
    let mut table = Table::new(&[]);
    table.meta("tool", concat!("sqfree ", env!("CARGO_PKG_VERSION")));
    table.meta("command", command_line());
    table.meta("seed", cli.seed);
    table.metadata.extend(body.metadata);
    table.columns = body.columns;
    table.rows = body.rows;

    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match &cli.out {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let mut writer = BufWriter::new(file);
            table.write(cli.format, &mut writer).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(cli.format, &mut lock).map_err(io_err)?;
            lock.flush().map_err(io_err)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
