//! Command-line front end for `qortho`: subcommand dispatch, JSON reports and the verification suite.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use qortho::algebra::{complementarity_report, is_homogeneous, OperatorAlgebra, ReportConfig, Structure};
use qortho::bell::{bell_complementarity, bell_unitary};
use qortho::block::usefulness_report;
use qortho::cartan::{cartan_coeffs, cartan_defect, cartan_n, cartan_scan, classes, classify, lemma_sign_check, pauli_triplet, CartanParams};
use qortho::entropy::{uncertainty_scan, PairKind};
use qortho::family::{family_search, Strategy};
use qortho::fermion::{car_report, jordan_wigner};
use qortho::weyl::{deviation_matrix, is_prime, mub_prime, pauli_partition_dim4, Basis};
use qortho::{Error, Matrix, Tolerance};

pub mod suite;

pub use suite::{run_suite, CheckResult, SuiteReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub eps: Tolerance,
    pub seed: u64,
    pub samples: usize,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { eps: Tolerance::default(), seed: 0, samples: 1000, output: None, format: Format::Json }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qortho", version, about = "Complementary subalgebras: constructions and checks", arg_required_else_help = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Numerical tolerance
    #[arg(long, global = true, default_value_t = Tolerance::DEFAULT_EPS)]
    eps: f64,
    /// Master seed for every random stream
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo sample count
    #[arg(long, global = true, default_value_t = 1000)]
    samples: usize,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutually unbiased bases from clock and shift classes
    Mub {
        #[arg(long, required_unless_present = "dim4_pauli")]
        dim: Option<usize>,
        /// The five Pauli triples in dimension 4
        #[arg(long, conflicts_with = "dim")]
        dim4_pauli: bool,
    },
    /// Complementarity conditions for two algebras given by generator files
    Check {
        #[arg(long)]
        alg1: PathBuf,
        #[arg(long)]
        alg2: PathBuf,
    },
    /// Usefulness defect of a block unitary
    Useful {
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Search for a pairwise complementary family of factors
    Family {
        /// Ambient dimension (a perfect square)
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value = "pauli-triplet")]
        strategy: String,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
    },
    /// Coefficients, class and usefulness of N(alpha, beta, gamma)
    Cartan {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Agreement of the three usefulness criteria on a grid and random points
    CartanScan {
        #[arg(long, default_value_t = 20)]
        grid: usize,
    },
    /// Entropic uncertainty slacks over random pure states
    Uncertainty {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value = "mub")]
        pair: String,
    },
    /// Complementarity of fermion mode algebras
    Car {
        #[arg(long)]
        modes: usize,
        /// Two parts separated by ';', modes counted from 1, e.g. "1;2,3"
        #[arg(long)]
        partition: String,
    },
    /// Bell algebra against the conjugated local algebras
    Bell {
        /// Four phases on P+, P-, Q+, Q-
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0,0")]
        phases: String,
    },
    /// Run every check
    Suite,
}

struct Report {
    value: Value,
    passed: bool,
}

/// Parses `argv` (program name first), runs the command and returns the exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cfg = match config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let report = match run(&cli.command, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = emit(&report.value, &cfg) {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if report.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn config(g: &GlobalArgs) -> Result<RunConfig, String> {
    let eps = Tolerance::new(g.eps).map_err(|e| e.to_string())?;
    if g.samples == 0 {
        return Err("--samples must be at least 1".into());
    }
    Ok(RunConfig {
        eps,
        seed: g.seed,
        samples: g.samples,
        output: g.out.clone(),
        format: if g.json { Format::Json } else { Format::Text },
    })
}

fn emit(value: &Value, cfg: &RunConfig) -> std::io::Result<()> {
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(value).expect("report serializes") + "\n",
        Format::Text => render_text(value),
    };
    match &cfg.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

/// `key: value` lines for an object, with nested values in compact JSON.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if k == "checks" {
                    if let Value::Array(items) = v {
                        for c in items {
                            let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
                            out.push_str(&format!("{mark} {}: {}\n", c["name"].as_str().unwrap_or("?"), c["detail"].as_str().unwrap_or("")));
                        }
                        continue;
                    }
                }
                let shown = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {shown}\n"));
            }
        }
        other => {
            out.push_str(&other.to_string());
            out.push('\n');
        }
    }
    out
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<Report, Error> {
    let tol = cfg.eps;
    match cmd {
        Command::Mub { dim, dim4_pauli } => {
            let (label, bases) = if *dim4_pauli {
                (4, pauli_partition_dim4(tol)?)
            } else {
                let p = dim.expect("clap requires --dim");
                if !is_prime(p) {
                    let hint = if p == 4 { "; for dimension 4 use `mub --dim4-pauli`" } else { "" };
                    return Err(Error::InvalidArgument(format!("{p} is not prime{hint}")));
                }
                (p, mub_prime(p, tol)?)
            };
            mub_report(label, &bases, tol)
        }
        Command::Check { alg1, alg2 } => {
            let a1 = load_algebra(alg1, tol)?;
            let a2 = load_algebra(alg2, tol)?;
            let structured = |a: &OperatorAlgebra| !matches!(a.structure(), Structure::General);
            let with_projections = structured(&a1) && structured(&a2);
            let rc = ReportConfig { samples: cfg.samples, seed: cfg.seed, tol, minimal_projections: with_projections };
            let report = complementarity_report(&a1, &a2, &rc)?;
            let homogeneous = |a: &OperatorAlgebra| if structured(a) { is_homogeneous(a, tol).ok() } else { None };
            Ok(Report {
                passed: report.complementary(),
                value: json!({
                    "dim1": a1.dim(),
                    "dim2": a2.dim(),
                    "structure1": a1.structure().tag(),
                    "structure2": a2.structure().tag(),
                    "homogeneous1": homogeneous(&a1),
                    "homogeneous2": homogeneous(&a2),
                    "complementary": report.complementary(),
                    "conditions_agree": report.all_agree(),
                    "report": to_value(&report),
                }),
            })
        }
        Command::Useful { unitary, n, m } => {
            let w: Matrix = read_json(unitary)?;
            let r = usefulness_report(&w, *n, *m, tol)?;
            Ok(Report { passed: r.useful, value: to_value(&r) })
        }
        Command::Family { dim, count, strategy, budget } => {
            let n = (*dim as f64).sqrt().round() as usize;
            if n * n != *dim {
                return Err(Error::InvalidArgument(format!("--dim {dim} is not a perfect square")));
            }
            let strategy: Strategy = strategy.parse()?;
            let out = family_search(n, *count, strategy, cfg.seed, *budget, tol)?;
            let mut value = to_value(&out);
            value["strategy"] = json!(strategy.to_string());
            Ok(Report { passed: out.is_found(), value })
        }
        Command::Cartan { alpha, beta, gamma } => {
            let p = CartanParams::new(*alpha, *beta, *gamma);
            let coeffs = cartan_coeffs(p);
            let defect = cartan_defect(p);
            let n = cartan_n(p);
            let triplet = pauli_triplet(&n, tol)?;
            let lemma = lemma_sign_check(p, tol).ok();
            let in_class = classify(p).is_some();
            let quarter = coeffs.quarter_deviation() <= qortho::cartan::COEFF_TOL;
            let useful = defect <= tol.eps;
            Ok(Report {
                passed: in_class == quarter && quarter == useful,
                value: json!({
                    "params": to_value(&p),
                    "coefficients": to_value(&coeffs.c),
                    "abs_squared": coeffs.c.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>(),
                    "class": classify(p),
                    "classes": classes(p),
                    "defect": defect,
                    "useful": useful,
                    "matrix": to_value(&n),
                    "triplet": triplet.words.map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    "triplet_expansions": to_value(&triplet.images),
                    "lemma": lemma.map(|l| to_value(&l)),
                }),
            })
        }
        Command::CartanScan { grid } => {
            let r = cartan_scan(*grid, cfg.samples, cfg.seed, tol);
            Ok(Report { passed: r.all_agree(), value: to_value(&r) })
        }
        Command::Uncertainty { dim, pair } => {
            let pair: PairKind = pair.parse()?;
            let r = uncertainty_scan(*dim, pair, cfg.samples, cfg.seed, tol)?;
            Ok(Report { passed: r.violations == 0, value: to_value(&r) })
        }
        Command::Car { modes, partition } => {
            let (j1, j2) = parse_partition(partition)?;
            let sys = jordan_wigner(*modes)?;
            let mut r = car_report(&sys, &j1, &j2, cfg.samples.min(200), cfg.seed)?;
            r.part1.iter_mut().chain(r.part2.iter_mut()).for_each(|i| *i += 1);
            Ok(Report { passed: r.defect <= tol.eps, value: to_value(&r) })
        }
        Command::Bell { phases } => {
            let parsed = parse_phases(phases)?;
            let r = bell_complementarity(&bell_unitary(parsed), tol)?;
            let mut value = to_value(&r);
            value["phases"] = json!(parsed);
            Ok(Report { passed: r.max_defect() <= tol.eps, value })
        }
        Command::Suite => {
            let r = run_suite(cfg);
            Ok(Report { passed: r.passed, value: to_value(&r) })
        }
    }
}

fn mub_report(dim: usize, bases: &[Basis], tol: Tolerance) -> Result<Report, Error> {
    let dev = deviation_matrix(bases)?;
    let max = dev.iter().flatten().copied().fold(0.0, f64::max);
    Ok(Report {
        passed: max <= tol.eps && bases.len() == dim + 1,
        value: json!({
            "dim": dim,
            "count": bases.len(),
            "bound": dim + 1,
            "max_deviation": max,
            "deviation_matrix": dev,
            "bases": bases.iter().map(|b| to_value(&b.to_matrix())).collect::<Vec<_>>(),
        }),
    })
}

/// Generators from a JSON array of matrices; the algebra is tagged commutative when it commutes.
fn load_algebra(path: &Path, tol: Tolerance) -> Result<OperatorAlgebra, Error> {
    let gens: Vec<Matrix> = read_json(path)?;
    let alg = OperatorAlgebra::generated_by(&gens)?;
    if alg.max_commutator() <= tol.eps.max(1e-9) {
        alg.into_commutative(tol)
    } else {
        Ok(alg)
    }
}

/// `"1;2,3"` to 0-based parts `([0], [1, 2])`.
pub fn parse_partition(s: &str) -> Result<(Vec<usize>, Vec<usize>), Error> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 2 {
        return Err(Error::Partition(format!("expected two parts separated by ';', got '{s}'")));
    }
    let parse = |p: &str| -> Result<Vec<usize>, Error> {
        p.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(Error::Partition(format!("'{t}' is not a mode number (modes count from 1)"))),
            })
            .collect()
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

pub fn parse_phases(s: &str) -> Result<[f64; 4], Error> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("'{t}' is not a number"))))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| Error::InvalidArgument(format!("expected 4 phases, got {}", v.len())))
}
