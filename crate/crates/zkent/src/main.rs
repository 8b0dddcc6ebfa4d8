//! Command-line front end: parses family description files, dispatches to
//! the library, and prints human tables or machine-readable JSON envelopes.
//!
//! Exit codes: 0 on success, 1 on a domain error (or a failed verification),
//! 2 on I/O or parse errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use zkent::entropy::{self, OptimizeSense};
use zkent::family::{Distribution, GeneratorFamily};
use zkent::friedland;
use zkent::input::{FamilyFile, InputError, PhaseSpace};
use zkent::matrix::bigint_log_abs;
use zkent::oracle::{self, OracleMode};
use zkent::report::{sha256_hex, ReportEnvelope};
use zkent::spectral::{joint_spectrum, SpectralTolerances, Spectrum};
use zkent::topo::{self, BoundRule, TopoBoundsReport};

#[derive(Parser)]
#[command(
    name = "zkent",
    version,
    about = "Entropies of i.i.d. random actions of commuting integer matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a family file (commutativity, determinants, shapes).
    Validate { path: PathBuf },
    /// Compute the joint spectrum of the family.
    Spectrum {
        path: PathBuf,
        /// Relative modulus gap for grouping eigenvalues into blocks.
        #[arg(long, default_value_t = 1e-8)]
        tol_grouping: f64,
        /// Maximum acceptable invariance residual.
        #[arg(long, default_value_t = 1e-8)]
        tol_invariance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Entropy of the random action at a distribution ν.
    Entropy {
        path: PathBuf,
        #[command(flatten)]
        nu: NuArg,
        #[arg(long)]
        json: bool,
        /// Display entropies in bits (JSON always carries nats).
        #[arg(long)]
        bits: bool,
    },
    /// Friedland entropy of the deterministic action.
    Friedland {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Topological entropy bounds for the family.
    Bounds {
        path: PathBuf,
        /// Ball dimension D(X); defaults to the matrix dimension.
        #[arg(long)]
        ball_dim: Option<f64>,
        #[command(flatten)]
        nu: NuArg,
        #[arg(long)]
        json: bool,
    },
    /// Extremize the entropy over distributions ν.
    Optimize {
        path: PathBuf,
        #[arg(long, value_enum)]
        sense: SenseArg,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification oracle against the matching formula.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum)]
        oracle: OracleKind,
        #[command(flatten)]
        nu: NuArg,
        /// Word length (defaults: block 14, svd 400, circle 12).
        #[arg(long)]
        n: Option<usize>,
        /// Monte Carlo sample count; block/circle run exact enumeration
        /// when omitted (svd defaults to 2000).
        #[arg(long)]
        samples: Option<usize>,
        /// RNG seed; required for any Monte Carlo run.
        #[arg(long)]
        seed: Option<u64>,
        /// Separation scale for the circle oracle.
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// Pass/fail tolerance (defaults: block 0.05, svd 0.02, circle 0.02).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct NuArg {
    /// Distribution over generators as comma-separated probabilities,
    /// e.g. --nu 0.7,0.3. Falls back to the file's distribution, then uniform.
    #[arg(long, value_name = "P1,P2,...")]
    nu: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SenseArg {
    Max,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    /// Word enumeration of block running maxima.
    Block,
    /// Singular values of exact integer word products (Monte Carlo).
    Svd,
    /// Exact separated-set counts for expanding circle maps.
    Circle,
}

enum CliError {
    /// Domain errors: violated invariants, failed verifications. Exit 1.
    Domain(String),
    /// I/O and parse errors. Exit 2.
    Io(String),
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Io { .. } | InputError::Parse { .. } => CliError::Io(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

macro_rules! domain_from {
    ($($ty:ty),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}
domain_from!(
    zkent::family::FamilyError,
    zkent::family::DistributionError,
    zkent::spectral::SpectralError,
    zkent::entropy::EntropyError,
    zkent::friedland::FriedlandError,
    zkent::topo::TopoError,
    zkent::oracle::OracleError,
);

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Loaded {
    file: FamilyFile,
    family: GeneratorFamily,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    let file = FamilyFile::load(path)?;
    let family = file.build_family()?;
    Ok(Loaded {
        file,
        family,
        digest,
    })
}

fn resolve_nu(arg: &NuArg, file: &FamilyFile, k: usize) -> Result<Distribution, CliError> {
    if let Some(raw) = &arg.nu {
        let probs: Vec<f64> = raw
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::Domain(format!("cannot parse --nu: {e}")))?;
        return Ok(Distribution::validate(&probs, k)?);
    }
    Ok(file.distribution_or_uniform(k)?)
}

fn default_tolerances() -> SpectralTolerances {
    SpectralTolerances::default()
}

fn unit_scale(bits: bool) -> (f64, &'static str) {
    if bits {
        (std::f64::consts::LN_2, "bits")
    } else {
        (1.0, "nats")
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { path } => {
            let loaded = load(&path)?;
            let fam = &loaded.family;
            println!(
                "ok: {} generator(s), dimension {}, kind {:?}",
                fam.len(),
                fam.dim(),
                fam.kind()
            );
            for i in 0..fam.len() {
                println!("  {}: det = {}", fam.name(i), fam.determinant(i));
            }
            Ok(())
        }
        Command::Spectrum {
            path,
            tol_grouping,
            tol_invariance,
            json,
        } => {
            let loaded = load(&path)?;
            let tol = SpectralTolerances {
                grouping: tol_grouping,
                invariance: tol_invariance,
            };
            let spec = joint_spectrum(&loaded.family, tol)?;
            if json {
                let envelope = ReportEnvelope::new(
                    "spectrum",
                    loaded.digest,
                    json!({"tol_grouping": tol_grouping, "tol_invariance": tol_invariance}),
                    spectrum_out(&spec),
                    vec![],
                );
                print!("{}", envelope.to_json());
            } else {
                print_spectrum(&loaded.family, &spec);
            }
            Ok(())
        }
        Command::Entropy {
            path,
            nu,
            json,
            bits,
        } => {
            let loaded = load(&path)?;
            let dist = resolve_nu(&nu, &loaded.file, loaded.family.len())?;
            let spec = joint_spectrum(&loaded.family, default_tolerances())?;
            let constants = topo::family_constants(&loaded.family);
            let smooth = topo::smooth_bound(&constants.opnorms, loaded.family.dim(), &dist)?;
            let report = entropy::random_entropy(&spec, &dist)?.with_lipschitz_bound(smooth);
            if json {
                let envelope = ReportEnvelope::new(
                    "entropy",
                    loaded.digest,
                    json!({"nu": dist.probs(), "bits": bits}),
                    &report,
                    vec![],
                );
                print!("{}", envelope.to_json());
            } else {
                let (scale, unit) = unit_scale(bits);
                println!("entropy of the random action ({unit})");
                println!("  nu            = {:?}", dist.probs());
                println!("  value         = {:.10}", report.value / scale);
                println!("  best subset   = {:?}", one_based(&report.best_subset));
                println!(
                    "  block terms   = {:?}",
                    report
                        .block_terms
                        .iter()
                        .map(|t| t / scale)
                        .collect::<Vec<_>>()
                );
                println!("  mixture bound = {:.10}", report.mixture_bound / scale);
                println!("  smooth bound  = {:.10}", smooth / scale);
            }
            Ok(())
        }
        Command::Friedland { path, json } => {
            let loaded = load(&path)?;
            let spec = joint_spectrum(&loaded.family, default_tolerances())?;
            let report = friedland::certified_friedland(&loaded.family, &spec)?;
            let label = if report.equality_certified {
                "equality (certified under hyperbolicity criterion)"
            } else {
                "upper bound (uncertified)"
            };
            if json {
                let envelope = ReportEnvelope::new(
                    "friedland",
                    loaded.digest,
                    json!({}),
                    json!({
                        "value": report.value,
                        "label": label,
                        "best_subset": report.best_subset,
                        "tied_subsets": report.tied_subsets,
                        "pressures": report.pressures,
                        "maximizing_nu": report.maximizing_nu.probs(),
                        "consistency_residual": report.consistency_residual,
                        "coincidence": report.coincidence,
                        "equality_certified": report.equality_certified,
                    }),
                    vec![],
                );
                print!("{}", envelope.to_json());
            } else {
                println!("Friedland entropy (nats)");
                println!("  value       = {:.10}   [{label}]", report.value);
                println!("  best subset = {:?}", one_based(&report.best_subset));
                if report.tied_subsets.len() > 1 {
                    println!(
                        "  ties        = {:?}",
                        report
                            .tied_subsets
                            .iter()
                            .map(|s| one_based(s))
                            .collect::<Vec<_>>()
                    );
                }
                println!("  nu*         = {:?}", report.maximizing_nu.probs());
                println!("  residual    = {:.3e}", report.consistency_residual);
                for sp in &report.pressures {
                    println!("    P({:?}) = {:.10}", one_based(&sp.subset), sp.pressure);
                }
                for cert in &report.coincidence {
                    println!(
                        "  coincidence ({}, {}): det(Ai - Aj) = {} [{:?}]",
                        cert.pair.0, cert.pair.1, cert.det_difference, cert.status
                    );
                }
            }
            Ok(())
        }
        Command::Bounds {
            path,
            ball_dim,
            nu,
            json,
        } => {
            let loaded = load(&path)?;
            let dist = resolve_nu(&nu, &loaded.file, loaded.family.len())?;
            let report = bounds_report(&loaded, &dist, ball_dim)?;
            if json {
                let envelope = ReportEnvelope::new(
                    "bounds",
                    loaded.digest,
                    json!({"nu": dist.probs(), "ball_dim": ball_dim}),
                    &report,
                    vec![],
                );
                print!("{}", envelope.to_json());
            } else {
                println!("topological entropy bounds (nats)");
                println!("  lower (measure-theoretic) = {:.10}", report.lower);
                if let Some(v) = report.lipschitz_upper {
                    println!("  Lipschitz upper           = {v:.10}");
                }
                if let Some(v) = report.smooth_upper {
                    println!("  smooth upper              = {v:.10}");
                }
                if let Some(v) = report.degree_value {
                    println!("  degree formula (exact)    = {v:.10}");
                }
                if let Some(v) = report.interval_upper {
                    println!("  interval branch upper     = {v:.10}");
                }
                println!("  rules: {:?}", report.rules);
            }
            Ok(())
        }
        Command::Optimize { path, sense, json } => {
            let loaded = load(&path)?;
            let spec = joint_spectrum(&loaded.family, default_tolerances())?;
            let sense_lib = match sense {
                SenseArg::Max => OptimizeSense::Maximize,
                SenseArg::Min => OptimizeSense::Minimize,
            };
            let (dist, value) = entropy::extremal_distribution(&spec, sense_lib);
            if json {
                let envelope = ReportEnvelope::new(
                    "optimize",
                    loaded.digest,
                    json!({"sense": match sense { SenseArg::Max => "max", SenseArg::Min => "min" }}),
                    json!({"nu": dist.probs(), "value": value}),
                    vec![],
                );
                print!("{}", envelope.to_json());
            } else {
                let what = match sense {
                    SenseArg::Max => "maximum",
                    SenseArg::Min => "minimum",
                };
                println!("{what} of entropy over the simplex (nats)");
                println!("  nu    = {:?}", dist.probs());
                println!("  value = {value:.10}");
            }
            Ok(())
        }
        Command::Verify {
            path,
            oracle,
            nu,
            n,
            samples,
            seed,
            eps,
            tol,
            json,
        } => {
            let loaded = load(&path)?;
            let dist = resolve_nu(&nu, &loaded.file, loaded.family.len())?;
            let (name, estimate, formula, tolerance) = match oracle {
                OracleKind::Block => {
                    let spec = joint_spectrum(&loaded.family, default_tolerances())?;
                    let n = n.unwrap_or(14);
                    let mode = mc_or_exact(samples, seed)?;
                    let est = oracle::block_word_oracle(&spec, &dist, n, mode)?;
                    let formula = entropy::random_entropy(&spec, &dist)?.value;
                    ("block", est, formula, tol.unwrap_or(0.05))
                }
                OracleKind::Svd => {
                    let spec = joint_spectrum(&loaded.family, default_tolerances())?;
                    let n = n.unwrap_or(400);
                    let samples = samples.unwrap_or(2000);
                    let seed = seed.ok_or_else(|| {
                        CliError::Domain("--seed is required for Monte Carlo runs".into())
                    })?;
                    let est =
                        oracle::singular_value_oracle(&loaded.family, &dist, n, samples, seed)?;
                    let formula = entropy::random_entropy(&spec, &dist)?.value;
                    ("svd", est, formula, tol.unwrap_or(0.02))
                }
                OracleKind::Circle => {
                    let degrees = circle_degrees(&loaded)?;
                    let n = n.unwrap_or(12);
                    let mode = mc_or_exact(samples, seed)?;
                    let est = oracle::circle_cover_oracle(&degrees, &dist, n, eps, mode)?;
                    let formula = topo::expanding_entropy(&degrees, &dist)?;
                    ("circle", est, formula, tol.unwrap_or(0.02))
                }
            };
            let difference = (estimate.estimate - formula).abs();
            let pass = difference <= tolerance;
            if json {
                let envelope = ReportEnvelope::new(
                    "verify",
                    loaded.digest,
                    json!({
                        "oracle": name,
                        "nu": dist.probs(),
                        "n": estimate.n,
                        "samples": estimate.samples,
                        "seed": estimate.seed,
                        "eps": if name == "circle" { Some(eps) } else { None },
                        "tolerance": tolerance,
                    }),
                    json!({
                        "estimate": estimate,
                        "formula": formula,
                        "difference": difference,
                        "pass": pass,
                    }),
                    vec![],
                );
                print!("{}", envelope.to_json());
            } else {
                println!(
                    "oracle {name}: n = {}, samples = {}",
                    estimate.n, estimate.samples
                );
                println!("  estimate   = {:.10}", estimate.estimate);
                if let Some(se) = estimate.std_error {
                    println!("  std error  = {se:.3e}");
                }
                println!("  formula    = {formula:.10}");
                println!("  difference = {difference:.10} (tolerance {tolerance})");
                println!("  {}", if pass { "PASS" } else { "FAIL" });
            }
            if pass {
                Ok(())
            } else {
                Err(CliError::Domain(format!(
                    "verification failed: |estimate - formula| = {difference:.6} exceeds tolerance {tolerance}"
                )))
            }
        }
    }
}

fn mc_or_exact(samples: Option<usize>, seed: Option<u64>) -> Result<OracleMode, CliError> {
    match samples {
        None => Ok(OracleMode::Exact),
        Some(samples) => {
            let seed = seed.ok_or_else(|| {
                CliError::Domain("--seed is required for Monte Carlo runs".into())
            })?;
            Ok(OracleMode::MonteCarlo { samples, seed })
        }
    }
}

fn circle_degrees(loaded: &Loaded) -> Result<Vec<i64>, CliError> {
    if let Some(PhaseSpace::CircleExpanding { degrees }) = &loaded.file.phase_space {
        return Ok(degrees.clone());
    }
    if loaded.family.dim() == 1 {
        // 1×1 generators: the matrix entry is the degree
        return Ok(loaded
            .family
            .generators()
            .iter()
            .map(|g| {
                use num_traits::ToPrimitive;
                g.get(0, 0).to_i64().expect("1x1 generator entry fits i64")
            })
            .collect());
    }
    Err(CliError::Domain(
        "circle oracle needs a circle_expanding phase space hint or a 1-dimensional family"
            .into(),
    ))
}

fn bounds_report(
    loaded: &Loaded,
    dist: &Distribution,
    ball_dim: Option<f64>,
) -> Result<TopoBoundsReport, CliError> {
    let fam = &loaded.family;
    match &loaded.file.phase_space {
        Some(PhaseSpace::Graph) => {
            if fam.kind() != zkent::family::ActionKind::Invertible {
                return Err(CliError::Domain(
                    "the finite-graph zero rule needs invertible generators".into(),
                ));
            }
            Ok(TopoBoundsReport {
                lower: 0.0,
                lipschitz_upper: None,
                smooth_upper: None,
                degree_value: Some(0.0),
                interval_upper: None,
                rules: vec![BoundRule::GraphHomeomorphismZero],
            })
        }
        Some(PhaseSpace::Interval { branches }) => {
            let upper = topo::interval_bound(branches, dist)?;
            Ok(TopoBoundsReport {
                lower: 0.0,
                lipschitz_upper: None,
                smooth_upper: None,
                degree_value: None,
                interval_upper: Some(upper),
                rules: vec![BoundRule::IntervalBranchBound],
            })
        }
        Some(PhaseSpace::CircleExpanding { degrees }) => {
            let spec = joint_spectrum(fam, default_tolerances())?;
            let lower = entropy::random_entropy(&spec, dist)?.value;
            let constants = topo::family_constants(fam);
            let d = ball_dim.unwrap_or(fam.dim() as f64);
            let lipschitz = topo::lipschitz_bound(&constants.opnorms, d, dist)?;
            let smooth = topo::smooth_bound(&constants.opnorms, fam.dim(), dist)?;
            let degree = topo::expanding_entropy(degrees, dist)?;
            Ok(TopoBoundsReport {
                lower,
                lipschitz_upper: Some(lipschitz),
                smooth_upper: Some(smooth),
                degree_value: Some(degree),
                interval_upper: None,
                rules: vec![
                    BoundRule::VariationalLower,
                    BoundRule::LipschitzUpper,
                    BoundRule::SmoothUpper,
                    BoundRule::CircleMonotoneFormula,
                ],
            })
        }
        Some(PhaseSpace::Torus) | None => {
            let spec = joint_spectrum(fam, default_tolerances())?;
            let lower = entropy::random_entropy(&spec, dist)?.value;
            let constants = topo::family_constants(fam);
            let d = ball_dim.unwrap_or(fam.dim() as f64);
            let lipschitz = topo::lipschitz_bound(&constants.opnorms, d, dist)?;
            let smooth = topo::smooth_bound(&constants.opnorms, fam.dim(), dist)?;
            let mut rules = vec![
                BoundRule::VariationalLower,
                BoundRule::LipschitzUpper,
                BoundRule::SmoothUpper,
            ];
            // expanding toral endomorphisms: the degree formula is exact
            let expanding = spec
                .blocks
                .iter()
                .all(|b| b.exponents.iter().all(|&l| l > 0.0));
            let degree_value = if expanding {
                rules.push(BoundRule::ExpandingDegreeFormula);
                let logs: Vec<f64> = fam.determinants().iter().map(bigint_log_abs).collect();
                Some(
                    logs.iter()
                        .zip(dist.probs())
                        .map(|(l, p)| p * l)
                        .sum::<f64>(),
                )
            } else {
                None
            };
            Ok(TopoBoundsReport {
                lower,
                lipschitz_upper: Some(lipschitz),
                smooth_upper: Some(smooth),
                degree_value,
                interval_upper: None,
                rules,
            })
        }
    }
}

#[derive(Serialize)]
struct BlockOut {
    block_dim: usize,
    exponents: Vec<f64>,
    modulus_spread: f64,
    basis_columns: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct SpectrumOut {
    dim: usize,
    k: usize,
    residual: f64,
    blocks: Vec<BlockOut>,
}

fn spectrum_out(spec: &Spectrum) -> SpectrumOut {
    SpectrumOut {
        dim: spec.dim,
        k: spec.k,
        residual: spec.residual,
        blocks: spec
            .blocks
            .iter()
            .map(|b| BlockOut {
                block_dim: b.block_dim,
                exponents: b.exponents.clone(),
                modulus_spread: b.modulus_spread,
                basis_columns: b
                    .basis
                    .column_iter()
                    .map(|c| c.iter().copied().collect())
                    .collect(),
            })
            .collect(),
    }
}

fn print_spectrum(family: &GeneratorFamily, spec: &Spectrum) {
    println!(
        "joint spectrum: dimension {}, {} generator(s), {} block(s), residual {:.3e}",
        spec.dim,
        spec.k,
        spec.num_blocks(),
        spec.residual
    );
    println!("  log-moduli per block (rows) and generator (columns):");
    for (j, block) in spec.blocks.iter().enumerate() {
        let exps: Vec<String> = block
            .exponents
            .iter()
            .map(|l| format!("{l:+.10}"))
            .collect();
        println!(
            "  V{} (dim {}): [{}]  spread {:.2e}",
            j + 1,
            block.block_dim,
            exps.join(", "),
            block.modulus_spread
        );
    }
    let names: Vec<&str> = (0..family.len()).map(|i| family.name(i)).collect();
    println!("  generators: {names:?}");
}

fn one_based(subset: &[usize]) -> Vec<usize> {
    subset.iter().map(|&j| j + 1).collect()
}
