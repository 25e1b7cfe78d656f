//! Batch command-line front end: validation, Hausdorff and
//! Gromov-Hausdorff distances, distortion, semicontinuity checks, the
//! sampling experiments, and the full property suite.
//!
//! Machine-readable JSON goes to standard output; human summaries go to
//! standard error. Exit codes: 0 success, 1 property/cross-check failure,
//! 2 parse error, 3 invariant violation, 4 budget exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use ghlab_core::family::{FamilyFilter, FamilyTag};
use ghlab_core::gh::{gh_exact, gh_oracle, BoundStatus, GhOutcome, SolverConfig};
use ghlab_core::io::{
    self, load_images, load_incidence, load_space, load_subset, load_topology, GhResultJson,
};
use ghlab_core::randgen::random_incidence;
use ghlab_core::relation::{Correspondence, Relation};
use ghlab_core::sampling::{
    circle_net, default_epsilon_schedule, delta1_convergence, dense_subnet_experiment,
    epsilon_limit_experiment, extend_correspondence, interval_net, mesh_within, ExperimentRow,
    ExperimentTable, Model, SamplingError,
};
use ghlab_core::suite::{run_full_suite, SuiteOptions};
use ghlab_core::topology::{
    check_lower_semicontinuous, check_upper_semicontinuous, classify_incidence, SetValuedMap,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_INVARIANT: i32 = 3;
const EXIT_BUDGET: i32 = 4;

#[derive(Parser)]
#[command(
    name = "ghlab",
    version,
    about = "Finite metric spaces, correspondences, and exact Gromov-Hausdorff distances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Interval,
    Circle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Delta1,
    DenseSubnet,
    EpsilonLimit,
    Extension,
}

#[derive(Subcommand)]
enum Command {
    /// Check a distance matrix against the metric axioms
    Validate {
        /// Matrix file (.json with {labels, dist}, .csv, or a point cloud)
        space: String,
    },
    /// Hausdorff distance between two subsets of one space
    Hausdorff {
        space: String,
        /// JSON array of point indices
        subset_a: String,
        subset_b: String,
    },
    /// Gromov-Hausdorff distance between two spaces, with certificate
    Gh {
        x: String,
        y: String,
        /// Correspondence family; the semicontinuity families run against
        /// the metric topologies, which are discrete on finite spaces
        #[arg(long, default_value = "all")]
        family: String,
        /// Cross-check the solver against the brute-force oracle
        #[arg(long)]
        oracle: bool,
        /// Exact-mode budget on |X|·|Y| (default 64; GHLAB_BUDGET overrides)
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Distortion of a relation given as {rows, cols, cells}
    Dis { relation: String, x: String, y: String },
    /// Semicontinuity family membership of a correspondence
    Classify { relation: String, top_x: String, top_y: String },
    /// Semicontinuity of a set-valued map between finite topologies
    Semicont { map: String, top_x: String, top_y: String },
    /// Run a named sampling experiment
    Experiment {
        name: ExperimentName,
        #[arg(long, value_enum, default_value_t = ModelKind::Interval)]
        model: ModelKind,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated ε schedule for epsilon-limit
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Write output to a file instead of standard output
        #[arg(long)]
        out: Option<String>,
    },
    /// Run the full property suite; nonzero exit on any violation
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reduced instance counts
        #[arg(long)]
        quick: bool,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, message: message.into() }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVARIANT, message: message.into() }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure { code: EXIT_BUDGET, message: message.into() }
    }
}

impl From<io::IoError> for Failure {
    fn from(e: io::IoError) -> Self {
        match e {
            io::IoError::Read { .. } | io::IoError::Parse { .. } => Failure::parse(e.to_string()),
            io::IoError::Invalid { .. } | io::IoError::InvalidTopology { .. } => {
                Failure::invariant(e.to_string())
            }
        }
    }
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string(value).expect("serializable output"));
}

fn main() {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}

fn solver_config(flag: Option<usize>) -> Result<SolverConfig, Failure> {
    let mut config = SolverConfig::default();
    if let Ok(env_budget) = std::env::var("GHLAB_BUDGET") {
        config.budget = env_budget
            .parse::<usize>()
            .map_err(|_| Failure::parse(format!("GHLAB_BUDGET is not a number: {env_budget:?}")))?;
    }
    if let Some(b) = flag {
        config.budget = b;
    }
    Ok(config)
}

fn family_filter(name: &str) -> Result<FamilyFilter, Failure> {
    let tag: FamilyTag = name.parse().map_err(Failure::parse)?;
    FamilyFilter::for_tag(&tag)
        .ok_or_else(|| Failure::parse(format!("family {name:?} has no built-in filter")))
}

fn run(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Validate { space } => {
            #[derive(Serialize)]
            struct ValidateOut {
                valid: bool,
                violations: Vec<ghlab_core::metric::MetricViolation>,
            }
            match load_space(&space) {
                Ok(s) => {
                    emit(&ValidateOut { valid: true, violations: vec![] });
                    eprintln!("{}: valid metric space on {} points", space, s.len());
                    Ok(0)
                }
                Err(io::IoError::Invalid { report, path }) => {
                    emit(&ValidateOut { valid: false, violations: report.violations.clone() });
                    eprintln!("{path}: {report}");
                    Ok(EXIT_INVARIANT)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Hausdorff { space, subset_a, subset_b } => {
            let s = load_space(&space)?;
            let a_idx = load_subset(&subset_a)?;
            let b_idx = load_subset(&subset_b)?;
            let a = s.subset(&a_idx).map_err(|e| Failure::invariant(e.to_string()))?;
            let b = s.subset(&b_idx).map_err(|e| Failure::invariant(e.to_string()))?;
            #[derive(Serialize)]
            struct HausdorffOut {
                value: f64,
            }
            let value = a.hausdorff(&b);
            emit(&HausdorffOut { value });
            eprintln!("hausdorff distance = {value}");
            Ok(0)
        }
        Command::Gh { x, y, family, oracle, budget } => {
            let config = solver_config(budget)?;
            let filter = family_filter(&family)?;
            let xs = Arc::new(load_space(&x)?);
            let ys = Arc::new(load_space(&y)?);
            match gh_exact(&xs, &ys, &filter, &config) {
                GhOutcome::Exact(result) => {
                    if oracle {
                        let reference = gh_oracle(&xs, &ys, &filter)
                            .map_err(|e| Failure::budget(e.to_string()))?;
                        if reference.value != result.value {
                            emit(&GhResultJson::from(&result));
                            eprintln!(
                                "oracle cross-check FAILED: solver {} vs oracle {}",
                                result.value, reference.value
                            );
                            return Ok(EXIT_CHECK_FAILED);
                        }
                        eprintln!("oracle cross-check passed");
                    }
                    emit(&GhResultJson::from(&result));
                    eprintln!("gh = {} (exact, family {})", result.value, result.family);
                    Ok(0)
                }
                GhOutcome::BudgetExceeded { lower, upper } => {
                    #[derive(Serialize)]
                    struct BoundsOut {
                        lower: GhResultJson,
                        upper: GhResultJson,
                    }
                    emit(&BoundsOut {
                        lower: GhResultJson::from(&lower),
                        upper: GhResultJson::from(&upper),
                    });
                    eprintln!(
                        "budget exceeded ({} x {} points): bounds [{}, {}]",
                        xs.len(),
                        ys.len(),
                        lower.value,
                        upper.value
                    );
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Dis { relation, x, y } => {
            let inc = load_incidence(&relation)?;
            let xs = Arc::new(load_space(&x)?);
            let ys = Arc::new(load_space(&y)?);
            let rel = Relation::new(xs, ys, inc).map_err(|e| Failure::invariant(e.to_string()))?;
            #[derive(Serialize)]
            struct DisOut {
                distortion: f64,
                is_correspondence: bool,
            }
            let out =
                DisOut { distortion: rel.distortion(), is_correspondence: rel.is_correspondence() };
            emit(&out);
            eprintln!("distortion = {}", out.distortion);
            Ok(0)
        }
        Command::Classify { relation, top_x, top_y } => {
            let inc = load_incidence(&relation)?;
            let tx = Arc::new(load_topology(&top_x)?);
            let ty = Arc::new(load_topology(&top_y)?);
            if !inc.is_doubly_surjective() {
                return Err(Failure::invariant(
                    "relation is not a correspondence: some point is unmatched",
                ));
            }
            let membership = classify_incidence(&inc, &tx, &ty)
                .map_err(|e| Failure::invariant(e.to_string()))?;
            emit(&membership);
            eprintln!("families: us={} ls={} rc={}", membership.us, membership.ls, membership.rc);
            Ok(0)
        }
        Command::Semicont { map, top_x, top_y } => {
            let images = load_images(&map)?;
            let tx = Arc::new(load_topology(&top_x)?);
            let ty = Arc::new(load_topology(&top_y)?);
            let f =
                SetValuedMap::new(tx, ty, images).map_err(|e| Failure::invariant(e.to_string()))?;
            let lower = check_lower_semicontinuous(&f);
            let upper = check_upper_semicontinuous(&f);
            #[derive(Serialize)]
            struct SemicontOut {
                lower_semicontinuous: bool,
                upper_semicontinuous: bool,
                continuous: bool,
                lower_witness: Option<ghlab_core::topology::SemicontinuityWitness>,
                upper_witness: Option<ghlab_core::topology::SemicontinuityWitness>,
            }
            let out = SemicontOut {
                lower_semicontinuous: lower.is_ok(),
                upper_semicontinuous: upper.is_ok(),
                continuous: lower.is_ok() && upper.is_ok(),
                lower_witness: lower.err(),
                upper_witness: upper.err(),
            };
            eprintln!(
                "lsc={} usc={} continuous={}",
                out.lower_semicontinuous, out.upper_semicontinuous, out.continuous
            );
            emit(&out);
            Ok(0)
        }
        Command::Experiment { name, model, levels, seed, eps, format, out } => {
            let config = solver_config(None)?;
            let model = match model {
                ModelKind::Interval => Model::Interval { length: 1.0 },
                ModelKind::Circle => Model::Circle { circumference: 2.0 * std::f64::consts::PI },
            };
            let table = build_experiment(name, &model, levels, seed, eps.as_deref(), &config)?;
            let rendered = match format {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Json => {
                    let mut s =
                        serde_json::to_string(&experiment_json(&table)).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            match out {
                Some(path) => std::fs::write(&path, rendered)
                    .map_err(|e| Failure::parse(format!("cannot write {path}: {e}")))?,
                None => print!("{rendered}"),
            }
            eprintln!("experiment {} finished with {} levels", table.name, table.rows.len());
            Ok(0)
        }
        Command::Suite { seed, quick } => {
            let report = run_full_suite(&SuiteOptions { seed, quick });
            for outcome in &report.outcomes {
                let mark = if outcome.pass { "ok  " } else { "FAIL" };
                eprintln!("{mark} {} — {}", outcome.name, outcome.detail);
            }
            emit(&report);
            if report.all_pass() {
                eprintln!("suite: all {} properties hold", report.outcomes.len());
                Ok(0)
            } else {
                eprintln!("suite: violations detected");
                Ok(EXIT_CHECK_FAILED)
            }
        }
    }
}

#[derive(Serialize)]
struct ExperimentRowJson {
    level: usize,
    mesh: f64,
    value: f64,
    bound_status: BoundStatus,
    result: Option<GhResultJson>,
}

#[derive(Serialize)]
struct ExperimentJson {
    name: String,
    rows: Vec<ExperimentRowJson>,
}

fn experiment_json(table: &ExperimentTable) -> ExperimentJson {
    ExperimentJson {
        name: table.name.clone(),
        rows: table
            .rows
            .iter()
            .map(|r| ExperimentRowJson {
                level: r.level,
                mesh: r.mesh,
                value: r.value,
                bound_status: r.bound_status,
                result: r.result.as_ref().map(GhResultJson::from),
            })
            .collect(),
    }
}

fn build_experiment(
    name: ExperimentName,
    model: &Model,
    levels: usize,
    seed: u64,
    eps: Option<&str>,
    config: &SolverConfig,
) -> Result<ExperimentTable, Failure> {
    let invariant = |e: SamplingError| Failure::invariant(e.to_string());
    match name {
        ExperimentName::Delta1 => delta1_convergence(model, levels, config).map_err(invariant),
        ExperimentName::DenseSubnet => {
            dense_subnet_experiment(model, levels, config).map_err(invariant)
        }
        ExperimentName::EpsilonLimit => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (x, y) = match model {
                Model::Interval { length } => {
                    (interval_net(*length, 5).map_err(invariant)?,
                     interval_net(*length, 5).map_err(invariant)?)
                }
                Model::Circle { circumference } => {
                    (circle_net(*circumference, 6).map_err(invariant)?,
                     circle_net(*circumference, 6).map_err(invariant)?)
                }
                Model::Grid { .. } => {
                    return Err(Failure::parse("epsilon-limit runs on interval or circle nets"))
                }
            };
            let inc = random_incidence(&mut rng, x.space.len(), y.space.len(), 0.3);
            let sigma = Relation::new(x.space.clone(), y.space.clone(), inc)
                .map_err(|e| Failure::invariant(e.to_string()))?;
            let schedule = match eps {
                Some(list) => {
                    let parsed: Result<Vec<f64>, _> =
                        list.split(',').map(|s| s.trim().parse::<f64>()).collect();
                    parsed.map_err(|e| Failure::parse(format!("bad ε schedule: {e}")))?
                }
                None => default_epsilon_schedule(&sigma),
            };
            epsilon_limit_experiment(&sigma, &schedule).map_err(invariant)
        }
        ExperimentName::Extension => extension_experiment(model, levels, config).map_err(invariant),
    }
}

/// Per level: extend the optimal coarse certificate to a finer net and
/// record the distortion after extension against the coarse-in-fine mesh δ
/// (the growth allowance is 2δ). The mesh column is δ.
fn extension_experiment(
    model: &Model,
    levels: usize,
    config: &SolverConfig,
) -> Result<ExperimentTable, SamplingError> {
    if levels == 0 {
        return Err(SamplingError::NonPositiveCount);
    }
    let x = interval_net(1.0, 2)?.space;
    let mut rows = Vec::new();
    for level in 0..levels {
        let (fine, inclusion): (Arc<_>, Vec<usize>) = match model {
            Model::Interval { length } => {
                let segments = 2usize << level;
                let fine = interval_net(*length, 2 * segments)?.space;
                (fine, (0..=2 * segments).step_by(2).collect())
            }
            Model::Circle { circumference } => {
                let points = 4 << level;
                let fine = circle_net(*circumference, points)?.space;
                (fine, (0..points).step_by(2).collect())
            }
            Model::Grid { .. } => {
                return Err(SamplingError::BadInclusion(
                    "extension levels are defined for interval and circle models".to_string(),
                ))
            }
        };
        let coarse = Arc::new(fine.restriction(&inclusion).expect("nonempty"));
        let r_prime = match gh_exact(&coarse, &x, &FamilyFilter::all(), config) {
            GhOutcome::Exact(r) => r.certificate.expect("exact results carry certificates"),
            GhOutcome::BudgetExceeded { upper, .. } => upper
                .certificate
                .unwrap_or_else(|| Correspondence::full(coarse.clone(), x.clone())),
        };
        let delta = mesh_within(&fine, &inclusion);
        let ext = extend_correspondence(&r_prime, &fine, &inclusion)?;
        rows.push(ExperimentRow {
            level,
            mesh: delta,
            value: ext.as_relation().distortion(),
            bound_status: BoundStatus::Exact,
            result: None,
        });
    }
    Ok(ExperimentTable { name: "extension".to_string(), rows })
}
