//! Command-line front end: experiment configs, report emission and the
//! ad-hoc `check`, `norm` and `apply` tools.
//!
//! Exit codes: 0 on completion, 2 on invalid input, 3 when a numerical
//! sanity check fails, 1 on I/O errors.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::algebra::GroupAlgebraElement;
use crate::cocycle::{random_sample, BasisVectorId, CocycleFamily, LengthCocycle};
use crate::error::Error;
use crate::harness::{run_suite, scan, DerivativeChoice, Ensemble, Experiment, RatioReport, ScanSpec};
use crate::norms::{lp_norm, lp_norm_torus_grid, schatten_norm, MatrixOperand};
use crate::operators;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::Numerical(_)) => EXIT_NUMERICAL,
            CliError::Lib(_) => EXIT_INVALID,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "xpchaos", version, about = "Fourier calculus on group algebras and seeded inequality scans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write its JSON report.
    Verify(VerifyArgs),
    /// Certify a built-in length function.
    Check {
        #[command(subcommand)]
        target: CheckTarget,
    },
    /// L_p norm of a group algebra element or Schatten norm of a matrix.
    Norm(NormArgs),
    /// Apply a named operator to a group algebra element.
    Apply(ApplyArgs),
    /// Run the full acceptance battery.
    ScanSuite(SuiteArgs),
}

#[derive(Debug, Subcommand)]
pub enum CheckTarget {
    /// Schoenberg PSD test, Gram matrix and completeness of a cocycle.
    Cocycle(CocycleArgs),
}

#[derive(Debug, Default, Args)]
pub struct VerifyArgs {
    /// naor, torus, ztorus, xp-linear, rosenthal, riesz or free-identities.
    pub experiment: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Cocycle family, e.g. `z2m-word`, `z2m-word(m=3)` or `weighted-cube(alpha=[1, 2])`.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameters, e.g. `m=3`; shorthand for `--family 'name(m=3)'`.
    #[arg(long)]
    pub params: Option<String>,
    /// walsh, euclidean, absorbent or gradient.
    #[arg(long)]
    pub derivative: Option<String>,
    /// gaussian, sparse:<size>, chaos:<degree> or linear.
    #[arg(long)]
    pub ensemble: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Frequency bound of torus inputs, word length bound of free checks.
    #[arg(long)]
    pub bound: Option<u32>,
    /// Matrix size for xp-linear.
    #[arg(long)]
    pub dim: Option<usize>,
    /// JSON config file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append a CSV summary line (with header for new files).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CocycleArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub params: Option<String>,
    /// Rank when the family string does not give one.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 12)]
    pub sample_size: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Group algebra element (JSON).
    #[arg(long = "in", conflicts_with = "matrix")]
    pub input: Option<PathBuf>,
    /// Matrix `{"re": rows, "im": rows}` for a Schatten norm.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    #[arg(long)]
    pub p: f64,
    /// Force grid evaluation on the torus with this oversampling factor.
    #[arg(long)]
    pub grid: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    /// riesz, derivative, gradient, absorbent, walsh, laplacian, heat,
    /// truncate, adjoint-truncate, project-as, hilbert or expectation.
    #[arg(long)]
    pub op: String,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Cocycle family; defaults to word length on the input's group.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub params: Option<String>,
    /// Basis vector, e.g. `ZWord:1:2` or `FreeWord:[[1,1]]`.
    #[arg(long)]
    pub u: Option<String>,
    /// Component index.
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub subset: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub signs: Vec<i8>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated experiment together with its output paths.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub spec: ScanSpec,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Sorted-key JSON of the spec with every default filled in.
    pub fn canonical(&self) -> String {
        serde_json::to_value(&self.spec).expect("spec serializes").to_string()
    }

    /// SHA-256 of [`ExperimentConfig::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Lib(Error::Parse(msg.into()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

fn family_arg(family: &str, params: Option<&str>, rank: Option<usize>) -> CliResult<CocycleFamily> {
    let text = match params {
        Some(p) if !family.contains('(') => format!("{family}({p})"),
        Some(_) => return Err(parse_err("give parameters either inside --family or through --params")),
        None => family.to_string(),
    };
    Ok(CocycleFamily::parse(&text, rank)?)
}

/// Merge a config file with flags (flags win) and validate the result.
pub fn build_config(args: &VerifyArgs) -> CliResult<ExperimentConfig> {
    let mut map = match &args.config {
        Some(path) => match read_json::<Value>(path)? {
            Value::Object(m) => m,
            _ => return Err(parse_err(format!("{}: config must be a JSON object", path.display()))),
        },
        None => Map::new(),
    };
    let mut set = |key: &str, v: Value| {
        map.insert(key.to_string(), v);
    };
    if let Some(e) = &args.experiment {
        set("experiment", json!(e));
    }
    if let Some(n) = args.n {
        set("n", json!(n));
    }
    if let Some(k) = args.k {
        set("k", json!(k));
    }
    if let Some(p) = args.p {
        set("p", json!(p));
    }
    if let Some(d) = &args.derivative {
        set("derivative", json!(DerivativeChoice::parse(d)?));
    }
    if let Some(e) = &args.ensemble {
        set("ensemble", json!(e.parse::<Ensemble>()?));
    }
    if let Some(t) = args.trials {
        set("trials", json!(t));
    }
    if let Some(s) = args.seed {
        set("seed", json!(s));
    }
    if let Some(b) = args.bound {
        set("bound", json!(b));
    }
    if let Some(d) = args.dim {
        set("dim", json!(d));
    }
    let rank = map.get("n").and_then(Value::as_u64).map(|n| n as usize);
    if let Some(f) = &args.family {
        map.insert("family".into(), json!(family_arg(f, args.params.as_deref(), rank)?));
    } else if args.params.is_some() {
        return Err(parse_err("--params needs --family"));
    }

    match map.get("experiment") {
        Some(Value::String(name)) => {
            Experiment::parse(name)?;
        }
        Some(_) => return Err(parse_err("experiment must be a string")),
        None => return Err(CliError::Lib(Error::InvalidParameter("no experiment given".into()))),
    }
    if !map.contains_key("n") {
        return Err(CliError::Lib(Error::InvalidParameter("no n given".into())));
    }
    let mut spec: ScanSpec =
        serde_json::from_value(Value::Object(map)).map_err(|e| parse_err(format!("config: {e}")))?;
    spec.validate()?;
    spec.family = Some(spec.family());
    spec.derivative = Some(spec.derivative());
    Ok(ExperimentConfig { spec, out: args.out.clone(), csv: args.csv.clone() })
}

/// Report JSON with version, config hash and canonical config attached.
pub fn report_json(report: &RatioReport, config: &ExperimentConfig) -> Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["version"] = json!(VERSION);
    v["config_hash"] = json!(config.hash());
    v["config"] = serde_json::to_value(&config.spec).expect("spec serializes");
    v
}

fn emit(value: &Value, out: Option<&Path>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("json serializes") + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn append_csv(path: &Path, report: &RatioReport, hash: &str) -> CliResult<()> {
    let io = |source| CliError::Io { path: path.into(), source };
    let fresh = !path.exists();
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    if fresh {
        writeln!(file, "{},config_hash", RatioReport::CSV_HEADER).map_err(io)?;
    }
    writeln!(file, "{},{hash}", report.csv_row()).map_err(io)
}

/// `verify`: returns the exit code after writing the report.
pub fn run(config: &ExperimentConfig) -> CliResult<i32> {
    let report = scan(&config.spec)?;
    emit(&report_json(&report, config), config.out.as_deref())?;
    if let Some(csv) = &config.csv {
        append_csv(csv, &report, &config.hash())?;
    }
    let failed = config.spec.experiment == Experiment::FreeIdentities && report.lhs > 0.0;
    Ok(if failed || !report.max_ratio.is_finite() { EXIT_NUMERICAL } else { EXIT_OK })
}

fn check_cocycle(args: &CocycleArgs) -> CliResult<i32> {
    let family = family_arg(&args.family, args.params.as_deref(), args.n)?;
    let c = LengthCocycle::build(family.clone())?;
    let sample = random_sample(&c, args.sample_size, args.seed)?;
    let neg = c.negativity_check(&sample, &args.t, args.seed)?;
    let eigen: Map<String, Value> = neg.min_eigenvalues.iter().map(|(t, l)| (t.to_string(), json!(l))).collect();

    let (gram_err, completeness_err) = if c.has_basis() {
        let basis: Vec<BasisVectorId> = c.basis_for_support(&sample)?.into_iter().collect();
        let gram = c.gram(&basis)?;
        let gram_err = gram
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, x)| (x - if i == j { 1.0 } else { 0.0 }).abs()))
            .fold(0.0, f64::max);
        let mut comp: f64 = 0.0;
        for g in &sample {
            comp = comp.max((c.completeness_sum(g)? - c.psi(g)).abs());
        }
        (json!(gram_err), json!(comp))
    } else {
        (Value::Null, Value::Null)
    };
    let report = json!({
        "family": family,
        "gap": c.gap(),
        "sample_size": sample.len(),
        "seed": args.seed,
        "psd_min_eigenvalues": eigen,
        "max_direct_form": neg.max_direct_form,
        "gram_max_abs_error": gram_err,
        "completeness_max_abs_error": completeness_err,
        "pass": neg.pass,
        "version": VERSION,
    });
    emit(&report, args.out.as_deref())?;
    Ok(if neg.pass { EXIT_OK } else { EXIT_NUMERICAL })
}

fn norm(args: &NormArgs) -> CliResult<i32> {
    let (value, method) = match (&args.input, &args.matrix) {
        (Some(path), None) => {
            let f: GroupAlgebraElement = read_json(path)?;
            match args.grid {
                Some(over) => (lp_norm_torus_grid(&f, args.p, over)?, "grid"),
                None => (lp_norm(&f, args.p)?, "exact"),
            }
        }
        (None, Some(path)) => {
            let x: MatrixOperand = read_json(path)?;
            (schatten_norm(&x, args.p)?, "schatten")
        }
        _ => return Err(CliError::Lib(Error::InvalidParameter("give exactly one of --in or --matrix".into()))),
    };
    emit(&json!({"p": args.p, "norm": value, "method": method, "version": VERSION}), args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn apply(args: &ApplyArgs) -> CliResult<i32> {
    let f: GroupAlgebraElement = read_json(&args.input)?;
    let family = match &args.family {
        Some(s) => family_arg(s, args.params.as_deref(), Some(f.group().rank()))?,
        None => CocycleFamily::for_group(f.group())
            .ok_or_else(|| Error::InvalidParameter(format!("no default cocycle on {}; pass --family", f.group())))?,
    };
    let c = LengthCocycle::build(family)?;
    let missing = |flag: &str| CliError::Lib(Error::InvalidParameter(format!("--op {} needs {flag}", args.op)));
    let u = || -> CliResult<BasisVectorId> { Ok(args.u.as_deref().ok_or_else(|| missing("--u"))?.parse()?) };
    let j = || args.j.ok_or_else(|| missing("--j"));
    let subset = || if args.subset.is_empty() { Err(missing("--subset")) } else { Ok(args.subset.as_slice()) };

    let out: Value = match args.op.as_str() {
        "riesz" => json!(operators::riesz_transform(&f, &u()?, &c)?),
        "derivative" => json!(operators::directional_derivative(&f, &u()?, &c)?),
        "gradient" => json!(operators::gradient(&f, j()?, &c)?.elements()),
        "absorbent" => json!(operators::absorbent_derivative(&f, j()?, &c)?),
        "walsh" => json!(operators::walsh_derivative(&f, j()?)?),
        "laplacian" => json!(operators::laplacian_power(&f, args.gamma.ok_or_else(|| missing("--gamma"))?, &c)?),
        "heat" => json!(operators::heat_semigroup(&f, args.t.ok_or_else(|| missing("--t"))?, &c)?),
        "truncate" => json!(operators::truncate(&f, subset()?)?),
        "adjoint-truncate" => json!(operators::adjoint_truncation(&f, subset()?)?),
        "project-as" => json!(operators::project_as(&f, subset()?)?),
        "hilbert" => {
            if args.signs.is_empty() {
                return Err(missing("--signs"));
            }
            json!(operators::free_hilbert_transform(&f, &args.signs)?)
        }
        "expectation" => json!(operators::expectation_zero_m(&f, j()?, args.m.ok_or_else(|| missing("--m"))?)?),
        other => {
            return Err(CliError::Lib(Error::InvalidParameter(format!(
                "unknown operator {other:?}; valid: riesz, derivative, gradient, absorbent, walsh, laplacian, heat, \
                 truncate, adjoint-truncate, project-as, hilbert, expectation"
            ))))
        }
    };
    emit(&out, args.out.as_deref())?;
    Ok(EXIT_OK)
}

fn scan_suite(args: &SuiteArgs) -> CliResult<i32> {
    let report = run_suite(|o| println!("{}", o.line()));
    if let Some(path) = &args.out {
        let mut v = serde_json::to_value(&report).expect("suite serializes");
        v["version"] = json!(VERSION);
        emit(&v, Some(path))?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_NUMERICAL })
}

/// Dispatch a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Verify(args) => run(&build_config(args)?),
        Command::Check { target: CheckTarget::Cocycle(args) } => check_cocycle(args),
        Command::Norm(args) => norm(args),
        Command::Apply(args) => apply(args),
        Command::ScanSuite(args) => scan_suite(args),
    }
}

/// Parse `argv`, run, and return the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verify(argv: &[&str]) -> CliResult<ExperimentConfig> {
        let cli = Cli::try_parse_from(["xpchaos", "verify"].iter().chain(argv)).unwrap();
        match cli.command {
            Command::Verify(args) => build_config(&args),
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_build_a_valid_spec() {
        let c = verify(&["naor", "--n", "6", "--k", "2", "--p", "4", "--trials", "100", "--seed", "7"]).unwrap();
        assert_eq!((c.spec.n, c.spec.k, c.spec.p, c.spec.trials, c.spec.seed), (6, Some(2), 4.0, 100, 7));
        let c = verify(&["ztorus", "--n", "2", "--family", "z2m-word", "--params", "m=3"]).unwrap();
        assert_eq!(c.spec.family, Some(CocycleFamily::Z2mWord { rank: 2, m: 3 }));
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn validation_errors_exit_2() {
        for argv in [
            &["naor", "--n", "6", "--k", "9"][..],
            &["nope", "--n", "2"],
            &["naor"],
            &["naor", "--n", "2", "--p", "0.5"],
            &["naor", "--n", "2", "--derivative", "sideways"],
            &["ztorus", "--n", "2", "--family", "free"],
        ] {
            let e = verify(argv).unwrap_err();
            assert_eq!(e.exit_code(), EXIT_INVALID, "{argv:?}: {e}");
        }
        let e = verify(&["nope", "--n", "2"]).unwrap_err();
        assert!(e.to_string().contains("free-identities"));
        assert_eq!(main_with_args(["xpchaos", "verify", "naor", "--n", "x"]), EXIT_INVALID);
    }

    #[test]
    fn config_file_and_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"experiment": "rosenthal", "n": 4, "p": 3, "seed": 5}"#).unwrap();
        let base = VerifyArgs { config: Some(path.clone()), ..Default::default() };
        let c = build_config(&base).unwrap();
        assert_eq!((c.spec.experiment, c.spec.n, c.spec.p, c.spec.seed), (Experiment::Rosenthal, 4, 3.0, 5));
        let over = VerifyArgs { config: Some(path.clone()), seed: Some(9), ..Default::default() };
        let c2 = build_config(&over).unwrap();
        assert_eq!(c2.spec.seed, 9);
        assert_ne!(c.hash(), c2.hash());

        // canonical form is a fixed point
        fs::write(&path, c.canonical()).unwrap();
        assert_eq!(build_config(&base).unwrap().canonical(), c.canonical());

        fs::write(&path, r#"{"experiment": "rosenthal", "n": 4, "colour": 1}"#).unwrap();
        assert_eq!(build_config(&base).unwrap_err().exit_code(), EXIT_INVALID);
    }
}
