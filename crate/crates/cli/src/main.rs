//! `hardycexp`: command-line access to Blaschke products, the conditional
//! expectation `E(·|η)`, idempotent multipliers and the verification suite.
//!
//! JSON goes to stdout, CSV to `--out`, logs to stderr. Exit codes: 0 on
//! success, 1 when a verification fails, 2 on malformed input.

use clap::{Args, Parser, Subcommand};
use hardycexp::blaschke::{BlaschkeProduct, UnitCirclePoint};
use hardycexp::cexp::{
    change_of_variables_residual, default_schedule, finite_space_cexp_norm, CexpOperator,
    CheckReport, FiniteSpace,
};
use hardycexp::hardy::{AnalyticPoly, BoundarySamples, CircleGrid, MultiPoly};
use hardycexp::multipliers::{
    apply_multiplier, bohr_exponents, bohr_number, classify_with, coefficient_constant,
    coefficient_ratio_family, dirichlet_set_classify, falsify_contractivity_with,
    maximize_coefficient_ratio, ClassifyOptions, FalsifyConfig, IndexSet, MAX_BOHR_INPUT,
};
use hardycexp::suite::{self, random_poly, RunReport};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

const GRID_ENV: &str = "HARDYCEXP_GRID_N";
const DEFAULT_GRID: usize = 1 << 13;

#[derive(Parser)]
#[command(
    name = "hardycexp",
    version,
    about = "Conditional expectations and idempotent multipliers on H^p, 0 < p < 1",
    after_help = "Complex literals are `re` or `re,im`. Lists of complex numbers are \
                  comma-separated reals, or `;`-separated complex literals. \
                  HARDYCEXP_GRID_N overrides the default circle grid size (8192)."
)]
struct Cli {
    /// JSON object whose keys stand in for flags missing from the command line,
    /// e.g. {"zeros": "0,0.5", "p": 0.5}.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite Blaschke products.
    Blaschke {
        #[command(subcommand)]
        cmd: BlaschkeCmd,
    },
    /// The conditional expectation E(·|η) for η(0) = 0.
    Cexp {
        #[command(subcommand)]
        cmd: CexpCmd,
    },
    /// Idempotent coefficient multipliers P_Γ on H^p(T^d).
    Multiplier {
        #[command(subcommand)]
        cmd: MultiplierCmd,
    },
    /// Multipliers on Dirichlet series through the Bohr correspondence.
    Dirichlet {
        #[command(subcommand)]
        cmd: DirichletCmd,
    },
    /// Batch verification.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Clone, Debug)]
struct ComplexList(Vec<Complex64>);

#[derive(Args)]
struct ProductArgs {
    /// Zeros of η.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    zeros: ComplexList,
    /// Unimodular constant factor.
    #[arg(long, default_value = "1", value_parser = parse_complex, allow_hyphen_values = true)]
    rotation: Complex64,
}

impl ProductArgs {
    fn product(&self) -> hardycexp::Result<BlaschkeProduct> {
        BlaschkeProduct::new(self.zeros.0.clone(), self.rotation)
    }
}

#[derive(Subcommand)]
enum BlaschkeCmd {
    /// η at a point of the closed disc.
    Eval {
        #[command(flatten)]
        product: ProductArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        point: Complex64,
    },
    /// The k preimages of a point on the circle.
    Preimage {
        #[command(flatten)]
        product: ProductArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        target: Complex64,
    },
    /// Supremum and infimum of |η'| on the circle.
    Dsup {
        #[command(flatten)]
        product: ProductArgs,
    },
    /// Closed-form bounds Σ(1−|a|)/(1+|a|) ≤ |η'| ≤ Σ(1+|a|)/(1−|a|).
    Bounds {
        #[command(flatten)]
        product: ProductArgs,
    },
}

#[derive(Subcommand)]
enum CexpCmd {
    /// Apply E(·|η) to a polynomial (both routes) or to boundary samples.
    ///
    /// With --coeffs, prints the coefficients of E f and the sup-distance
    /// between the fiber-sum and L² routes; --out writes the fiber-sum samples.
    /// With --samples, reads CSV rows `index,theta,re,im` and writes E f in the
    /// same format to --out.
    Apply {
        #[command(flatten)]
        product: ProductArgs,
        /// Taylor coefficients of f, constant term first.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true,
              conflicts_with = "samples", required_unless_present = "samples")]
        coeffs: Option<ComplexList>,
        /// CSV file of boundary samples.
        #[arg(long)]
        samples: Option<PathBuf>,
        /// Largest power of η kept by the L² route (default: degree of f).
        #[arg(long)]
        band: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        /// CSV output `index,theta,re,im`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the operator identities for one η and one polynomial.
    Verify {
        #[command(flatten)]
        product: ProductArgs,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        coeffs: ComplexList,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Operator norm on H^p: closed form, outer-function lower bound, sweep.
    ///
    /// --sweep with --out writes CSV columns `t,half_width,delta,ratio,theoretical`.
    Norm {
        #[command(flatten)]
        product: ProductArgs,
        #[arg(long)]
        p: f64,
        /// ‖η'‖_∞^{1/p − 1} (the default when nothing else is asked for).
        #[arg(long)]
        theory: bool,
        /// Best ratio over the default schedule of outer test functions.
        #[arg(long)]
        empirical: bool,
        /// Every row of the schedule.
        #[arg(long)]
        sweep: bool,
        /// Largest ratio over this many random polynomials of degree ≤ 8.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ‖E(·|z^k)‖ against k^{1/p−1} for k = 1..=kmax.
    ///
    /// --out writes CSV columns `k,theoretical,growth`.
    DegreeSweep {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Norm of a conditional expectation on a finite probability space.
    FiniteNorm {
        /// Point masses (default: uniform over the partition).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Blocks of point indices, e.g. `0,1;2`.
        #[arg(long, value_parser = parse_partition)]
        partition: Partition,
        #[arg(long)]
        p: f64,
    },
}

#[derive(Clone, Debug)]
struct Partition(Vec<Vec<usize>>);

#[derive(Subcommand)]
enum MultiplierCmd {
    /// Contractivity verdict for P_Γ on H^p.
    Classify {
        /// Index set as JSON, or @path to a JSON file.
        #[arg(long)]
        set: String,
        #[arg(long)]
        p: f64,
        /// Attach a numeric witness for non-contractive explicit sets.
        #[arg(long)]
        falsify: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// P_Γ f for a polynomial on the torus.
    Apply {
        #[arg(long)]
        set: String,
        /// Polynomial as JSON {"d": .., "terms": [{"alpha": [..], "c": [re, im]}]}, or @path.
        #[arg(long)]
        poly: String,
    },
    /// Search for f with ‖P_Γ f‖_p > ‖f‖_p.
    Falsify {
        #[arg(long)]
        set: String,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Norm of the first Taylor coefficient functional on H^p.
    Constant {
        #[arg(long)]
        p: f64,
        /// Also evaluate the test family (1 + cz)^{2/p} at this c.
        #[arg(long)]
        c: Option<f64>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 3000)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
}

impl SearchArgs {
    fn config(&self) -> FalsifyConfig {
        FalsifyConfig {
            budget: self.budget,
            seed: self.seed,
            restarts: self.restarts,
            ..Default::default()
        }
    }
}

#[derive(Subcommand)]
enum DirichletCmd {
    /// Consistency of a set of positive integers with the contractive sets.
    Classify {
        /// Members: comma-separated integers or ranges `a..b` (inclusive).
        #[arg(long, value_parser = parse_integers)]
        set: IntegerSet,
        /// Members are known up to this bound (default: the largest member).
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Prime exponent vector κ(n).
    Kappa {
        #[arg(long)]
        n: u64,
    },
    /// The integer with exponent vector κ.
    Number {
        #[arg(long, value_delimiter = ',')]
        kappa: Vec<u32>,
    },
}

#[derive(Clone, Debug)]
struct IntegerSet(BTreeSet<u64>);

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every module check, one JSON line per check, then a summary line.
    All {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Only checks whose names start with this prefix.
        #[arg(long)]
        only: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Numeric(String),
    Verification,
}

impl From<hardycexp::Error> for Failure {
    fn from(e: hardycexp::Error) -> Self {
        match e {
            hardycexp::Error::ConvergenceFailure { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(run(std::env::args().collect()))
}

fn run(argv: Vec<String>) -> u8 {
    let argv = match with_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(Failure::Verification) => 1,
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run with --help for usage");
            2
        }
    }
}

/// Appends `--key value` for each config entry whose flag is not already on
/// the command line.
fn with_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(argv);
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or("--config needs a path")?,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    let Value::Object(map) = value else {
        return Err(format!("{path}: expected a JSON object"));
    };
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        let present = argv
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if present || flag == "--config" {
            continue;
        }
        match v {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => argv.push(format!("{flag}={s}")),
            Value::Number(n) => argv.push(format!("{flag}={n}")),
            Value::Array(items) if items.iter().all(|i| i.is_number()) => {
                let joined: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                argv.push(format!("{flag}={}", joined.join(",")));
            }
            other => argv.push(format!("{flag}={other}")),
        }
    }
    Ok(argv)
}

fn parse_real(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse_real(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        _ => Err(format!("`{s}` is not a complex literal `re` or `re,im`")),
    }
}

/// Comma-separated reals, or `;`-separated complex literals.
fn parse_list(s: &str) -> Result<ComplexList, String> {
    let items: Vec<Complex64> = if s.contains(';') {
        s.split(';')
            .filter(|t| !t.trim().is_empty())
            .map(parse_complex)
            .collect::<Result<_, _>>()?
    } else {
        s.split(',')
            .map(|t| parse_real(t).map(|x| Complex64::new(x, 0.0)))
            .collect::<Result<_, _>>()?
    };
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(ComplexList(items))
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.split(';')
        .map(|block| {
            block
                .split(',')
                .map(|i| {
                    i.trim()
                        .parse::<usize>()
                        .map_err(|_| format!("`{i}` is not an index"))
                })
                .collect()
        })
        .collect::<Result<_, _>>()
        .map(Partition)
}

fn parse_integers(s: &str) -> Result<IntegerSet, String> {
    let int = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("`{t}` is not a nonnegative integer"))
    };
    let mut out = BTreeSet::new();
    for item in s.split(',').filter(|t| !t.trim().is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (int(a)?, int(b)?);
                if b >= a && b - a > MAX_BOHR_INPUT {
                    return Err(format!("range `{item}` is too long"));
                }
                out.extend(a..=b);
            }
            None => {
                out.insert(int(item)?);
            }
        }
    }
    Ok(IntegerSet(out))
}

/// Inline JSON or `@path`.
fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = match arg.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
        }
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed JSON: {e}")))
}

fn grid_size(flag: Option<usize>) -> Result<CircleGrid, Failure> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(GRID_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("{GRID_ENV}=`{v}` is not a grid size")))?,
            Err(_) => DEFAULT_GRID,
        },
    };
    Ok(CircleGrid::new(n)?)
}

fn emit(value: &impl Serialize) -> Outcome {
    let line = serde_json::to_string(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}")?;
    out.flush()?;
    Ok(())
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, Failure> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Blaschke { cmd } => blaschke(cmd),
        Command::Cexp { cmd } => cexp(cmd),
        Command::Multiplier { cmd } => multiplier(cmd),
        Command::Dirichlet { cmd } => dirichlet(cmd),
        Command::Verify {
            cmd: VerifyCmd::All { seed, only },
        } => verify_all(seed, only),
    }
}

fn blaschke(cmd: BlaschkeCmd) -> Outcome {
    match cmd {
        BlaschkeCmd::Eval { product, point } => {
            let value = product.product()?.evaluate(point)?;
            emit(&json!({ "point": pair(point), "value": pair(value), "modulus": value.norm() }))
        }
        BlaschkeCmd::Preimage { product, target } => {
            let b = product.product()?;
            let fiber = b.preimages(UnitCirclePoint::new(target)?)?;
            emit(&json!({
                "target": pair(target),
                "preimages": fiber.points,
                "angles": fiber.iter().map(|w| w.angle()).collect::<Vec<_>>(),
                "min_separation": fiber.min_separation,
                "clustered": fiber.is_clustered(),
            }))
        }
        BlaschkeCmd::Dsup { product } => {
            let b = product.product()?;
            emit(&json!({
                "sup": b.derivative_sup(),
                "argmax": b.derivative_argmax(),
                "inf": b.derivative_inf(),
            }))
        }
        BlaschkeCmd::Bounds { product } => {
            let b = product.product()?;
            let (lower, upper) = b.derivative_bounds();
            let (inf, sup) = (b.derivative_inf(), b.derivative_sup());
            emit(&json!({
                "lower": lower,
                "inf": inf,
                "sup": sup,
                "upper": upper,
                "sandwich": lower <= inf * (1.0 + 1e-12) && sup <= upper * (1.0 + 1e-12),
            }))
        }
    }
}

fn operator(product: &ProductArgs) -> Result<CexpOperator, Failure> {
    Ok(CexpOperator::new(product.product()?)?)
}

fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn cexp(cmd: CexpCmd) -> Outcome {
    match cmd {
        CexpCmd::Apply {
            product,
            coeffs,
            samples,
            band,
            grid,
            out,
        } => {
            let op = operator(&product)?;
            if let Some(path) = samples {
                let file = std::fs::File::open(&path)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                let f = BoundarySamples::read_csv(std::io::BufReader::new(file))?;
                let out = out.ok_or_else(|| Failure::Usage("--samples needs --out".into()))?;
                let ef = op.apply_samples(&f)?;
                ef.write_csv(create(&out)?)?;
                let m = ef.mean();
                return emit(&json!({ "grid": ef.grid().len(), "mean": pair(m), "out": out }));
            }
            let f = AnalyticPoly::new(coeffs.expect("clap enforces one input").0);
            let grid = grid_size(grid)?;
            let ef = op.apply_fourier(&f, band.unwrap_or(f.degree()))?;
            let fiber = op.apply_on_grid(&f, grid)?;
            let agreement = sup_diff(ef.samples(grid).values(), fiber.values());
            if let Some(path) = out {
                fiber.write_csv(create(&path)?)?;
            }
            emit(&json!({
                "coefficients": ef,
                "route_agreement": agreement,
                "grid": grid.len(),
            }))
        }
        CexpCmd::Verify {
            product,
            coeffs,
            p,
            grid,
        } => {
            let started = Instant::now();
            let op = operator(&product)?;
            let f = AnalyticPoly::new(coeffs.0.clone());
            let grid = grid_size(grid)?;
            let results = cexp_checks(&op, &f, p, grid)?;
            let inputs = json!({
                "zeros": product.zeros.0.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                "rotation": pair(product.rotation),
                "coeffs": f,
                "p": p,
                "grid": grid.len(),
            });
            let report = RunReport::new(
                "cexp verify",
                inputs,
                results,
                started.elapsed().as_secs_f64(),
            );
            emit(&report)?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        CexpCmd::Norm {
            product,
            p,
            theory,
            empirical,
            sweep,
            random,
            seed,
            grid,
            out,
        } => {
            let op = operator(&product)?;
            let theoretical = op.theoretical_norm(p)?;
            let mut result = serde_json::Map::new();
            if theory || !(empirical || sweep || random.is_some()) {
                result.insert("theoretical".into(), json!(theoretical));
            }
            if empirical || sweep {
                let est =
                    op.empirical_norm_lower_bound(p, &default_schedule(), grid_size(grid)?)?;
                result.insert("empirical".into(), json!(est.best));
                if sweep {
                    result.insert("sweep".into(), json!(est.samples));
                    if let Some(path) = &out {
                        est.write_csv(create(path)?)?;
                    }
                }
            }
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut worst = 0.0f64;
                for i in 0..n {
                    let f = random_poly(&mut rng, i % 9);
                    let ef = op.apply_fourier(&f, f.degree())?;
                    worst = worst.max(ef.quasi_norm(p)? / f.quasi_norm(p)?);
                }
                result.insert("random_max".into(), json!(worst));
                result.insert(
                    "random_within_theory".into(),
                    json!(worst <= theoretical * (1.0 + 1e-6)),
                );
            }
            emit(&result)
        }
        CexpCmd::DegreeSweep { p, kmax, out } => {
            if kmax == 0 {
                return Err(Failure::Usage("--kmax must be at least 1".into()));
            }
            let mut rows = Vec::with_capacity(kmax);
            for k in 1..=kmax {
                let op = CexpOperator::new(BlaschkeProduct::power(k)?)?;
                rows.push(json!({
                    "k": k,
                    "theoretical": op.theoretical_norm(p)?,
                    "growth": (k as f64).powf(1.0 / p - 1.0),
                }));
            }
            if let Some(path) = out {
                let mut w = create(&path)?;
                writeln!(w, "k,theoretical,growth")?;
                for r in &rows {
                    writeln!(w, "{},{},{}", r["k"], r["theoretical"], r["growth"])?;
                }
                w.flush()?;
            }
            emit(&rows)
        }
        CexpCmd::FiniteNorm {
            weights,
            partition,
            p,
        } => {
            let points = partition.0.iter().flatten().count();
            let space = match weights {
                Some(w) => FiniteSpace::new(w, partition.0)?,
                None => FiniteSpace::uniform(points, partition.0)?,
            };
            emit(&json!({ "p": p, "norm": finite_space_cexp_norm(&space, p)? }))
        }
    }
}

/// Identities every `E(·|η)` satisfies, checked on one polynomial.
fn cexp_checks(
    op: &CexpOperator,
    f: &AnalyticPoly,
    p: f64,
    grid: CircleGrid,
) -> Result<Vec<CheckReport>, Failure> {
    let mut out = Vec::new();
    let unity = grid
        .nodes()
        .step_by((grid.len() / 64).max(1))
        .map(|z| op.partition_of_unity_residual(UnitCirclePoint::project(z)))
        .collect::<hardycexp::Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(CheckReport::new("partition_of_unity", unity, 1e-8));

    let fiber = op.apply_on_grid(f, grid)?;
    let fourier = op.apply_fourier(f, f.degree())?;
    let scale = f.l2_norm().max(1.0);
    out.push(CheckReport::new(
        "route_agreement",
        sup_diff(fiber.values(), fourier.samples(grid).values()) / scale,
        1e-8,
    ));
    let twice = op.apply_samples(&fiber)?;
    out.push(CheckReport::new(
        "idempotence",
        sup_diff(fiber.values(), twice.values()) / scale,
        1e-8,
    ));
    out.push(CheckReport::new(
        "mean_preservation",
        (fiber.mean() - f.coeff(0)).norm() / scale,
        1e-10,
    ));
    let cov = change_of_variables_residual(op.product(), &f.samples(grid))?;
    out.push(CheckReport::new("change_of_variables", cov / scale, 1e-6));
    if p > 0.0 && p < 1.0 && !f.is_zero() {
        let ratio = fourier.quasi_norm(p)? / f.quasi_norm(p)?;
        let ceiling = op.theoretical_norm(p)?;
        out.push(CheckReport::new(
            "norm_ceiling",
            (ratio / ceiling - 1.0).max(0.0),
            1e-6,
        ));
    }
    Ok(out)
}

fn multiplier(cmd: MultiplierCmd) -> Outcome {
    match cmd {
        MultiplierCmd::Classify {
            set,
            p,
            falsify,
            search,
        } => {
            let gamma: IndexSet = read_json(&set)?;
            let options = ClassifyOptions {
                falsify: falsify.then(|| search.config()),
            };
            emit(&classify_with(&gamma, p, &options)?)
        }
        MultiplierCmd::Apply { set, poly } => {
            let gamma: IndexSet = read_json(&set)?;
            let f: MultiPoly = read_json(&poly)?;
            emit(&apply_multiplier(&gamma, &f)?)
        }
        MultiplierCmd::Falsify { set, p, search } => {
            let gamma: IndexSet = read_json(&set)?;
            emit(&falsify_contractivity_with(&gamma, p, &search.config())?)
        }
        MultiplierCmd::Constant { p, c } => {
            let constant = coefficient_constant(p)?;
            let (maximiser, maximum) = maximize_coefficient_ratio(p, 1024)?;
            let mut result = json!({
                "p": p,
                "constant": constant,
                "maximiser": maximiser,
                "maximum": maximum,
            });
            if let Some(c) = c {
                result["family"] = json!(coefficient_ratio_family(p, c)?);
            }
            emit(&result)
        }
    }
}

fn dirichlet(cmd: DirichletCmd) -> Outcome {
    match cmd {
        DirichletCmd::Classify { set, bound } => {
            let bound = bound
                .or_else(|| set.0.last().copied())
                .ok_or_else(|| Failure::Usage("the set is empty".into()))?;
            emit(&dirichlet_set_classify(&set.0, bound)?)
        }
        DirichletCmd::Kappa { n } => emit(&json!({ "n": n, "kappa": bohr_exponents(n)? })),
        DirichletCmd::Number { kappa } => {
            let n = bohr_number(&kappa)
                .ok_or_else(|| Failure::Usage("the product overflows 64 bits".into()))?;
            emit(&json!({ "kappa": kappa, "n": n }))
        }
    }
}

fn verify_all(seed: u64, only: Option<String>) -> Outcome {
    let started = Instant::now();
    let prefix = only.unwrap_or_default();
    let mut write_error = None;
    let results = suite::run_selected(
        seed,
        |name| name.starts_with(&prefix),
        |report| {
            if let Err(e) = emit(report) {
                write_error.get_or_insert(e);
            }
        },
    );
    if let Some(e) = write_error {
        return Err(e);
    }
    if results.is_empty() {
        return Err(Failure::Usage(format!(
            "no check name starts with `{prefix}`"
        )));
    }
    let report = RunReport::new(
        "verify all",
        json!({ "seed": seed, "only": prefix }),
        results,
        started.elapsed().as_secs_f64(),
    );
    emit(&report)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
