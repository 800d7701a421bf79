use serde::{Deserialize, Serialize};
use treepress::config::PotentialSpec;
use treepress::exceptional::{
    find_exceptional_sets, is_exceptional, sigma_prime_construction, ExceptionalReport, SearchParams,
    SigmaPrimeReport,
};
use treepress::potentials::{
    julia_samples, standard_compact_set, verify_cohomology, verify_snbound, CohomologyCheck, SnBoundCheck,
};
use treepress::preimage::{lambda_normal, NormalityCertificate};
use treepress::pressure::{
    exact_pressure_constant, hyperbolicity_check, lower_bound_diagnostic, periodic_orbit_pressure,
    tree_pressure, ulam_pressure, HyperbolicityReport, LowerBoundReport, PressureEstimate,
};
use treepress::report::{compare_csv, tree_csv};
use treepress::{FoldMode, JuliaStructure, SingularPotential, SmoothIntervalMap};

use crate::config::{require, EstimatorSpec, ExperimentConfig, DEFAULT_NORMALITY_EPSILON, DEFAULT_ULAM_ITERS};
use crate::error::CliError;

pub const REPORT_SCHEMA: &str = "treepress.report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub result: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub n_avg: usize,
    pub cohomology: CohomologyCheck,
    pub snbound: SnBoundCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    TreePressure,
    Compare,
    Exceptional,
    Normality,
    Hyperbolicity,
    Cohomology,
    SigmaPrime,
    LowerBound,
}

impl Command {
    pub const ALL: [(&'static str, Command); 8] = [
        ("tree-pressure", Command::TreePressure),
        ("compare", Command::Compare),
        ("exceptional", Command::Exceptional),
        ("normality", Command::Normality),
        ("hyperbolicity", Command::Hyperbolicity),
        ("cohomology", Command::Cohomology),
        ("sigma-prime", Command::SigmaPrime),
        ("lower-bound", Command::LowerBound),
    ];

    pub fn parse(name: &str) -> Result<Command, CliError> {
        Self::ALL
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, c)| *c)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::ALL.iter().map(|(n, _)| *n).collect();
                CliError::Config(format!("unknown command `{name}` (expected one of {})", names.join(", ")))
            })
    }

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|(_, c)| *c == self).map(|(n, _)| *n).unwrap_or("")
    }
}

struct Setup {
    map: SmoothIntervalMap,
    g: SingularPotential,
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup, CliError> {
    let map = cfg
        .map
        .build()
        .map_err(|e| CliError::Config(format!("invalid map: {e}")))?;
    let g = cfg
        .potential
        .build(&map)
        .map_err(|e| CliError::Config(format!("invalid potential: {e}")))?;
    Ok(Setup { map, g })
}

fn json<T: Serialize>(command: Command, cfg: &ExperimentConfig, result: T) -> Result<String, CliError> {
    let report = Report {
        schema: REPORT_SCHEMA.to_string(),
        command: command.name().to_string(),
        config: cfg.clone(),
        result,
    };
    let mut s = serde_json::to_string_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Runs `command` and returns the file contents to write.
pub fn run(command: Command, cfg: &ExperimentConfig, mode: FoldMode) -> Result<String, CliError> {
    let Setup { map, g } = setup(cfg)?;
    match command {
        Command::TreePressure => {
            let x = require(cfg.x, "x")?;
            let n_max = require(cfg.n_max, "n_max")?;
            Ok(tree_csv(&tree_pressure(&map, &g, x, n_max, mode)?))
        }
        Command::Compare => compare(cfg, &map, &g, mode),
        Command::Exceptional => {
            let params = SearchParams {
                p_max: cfg.p_max(),
                size_max: cfg.size_max(),
            };
            let report: ExceptionalReport = is_exceptional(&map, &g, params)?;
            #[derive(Serialize)]
            struct Out {
                verdict: ExceptionalReport,
                searched: Vec<ExceptionalReport>,
            }
            let searched = find_exceptional_sets(&map, &g.singular_set(), params)?;
            json(command, cfg, Out { verdict: report, searched })
        }
        Command::Normality => {
            let x = require(cfg.x, "x")?;
            let n = require(cfg.n, "n")?;
            let lambda = cfg.lambda.clone().unwrap_or_else(|| g.singular_set());
            let eps = cfg.epsilon.unwrap_or(DEFAULT_NORMALITY_EPSILON);
            let cert: NormalityCertificate = lambda_normal(&map, &lambda, x, n, eps)?;
            json(command, cfg, cert)
        }
        Command::Hyperbolicity => {
            let n = require(cfg.n, "n")?;
            let r: HyperbolicityReport =
                hyperbolicity_check(&map, &g, n, cfg.grid_size(), &cfg.oracle()?, cfg.slack())?;
            json(command, cfg, r)
        }
        Command::Cohomology => {
            let n_avg = require(cfg.n_avg, "n_avg")?;
            let n = cfg.n.unwrap_or(10);
            let samples = julia_samples(&map, cfg.samples(), 12)?;
            let cohomology = verify_cohomology(&g, &map, n_avg, &samples)?;
            let k = standard_compact_set(&map, &g)?;
            let snbound = verify_snbound(&g, &map, n_avg, &k, n)?;
            json(command, cfg, CohomologyReport { n_avg, cohomology, snbound })
        }
        Command::SigmaPrime => {
            let n_avg = require(cfg.n_avg, "n_avg")?;
            let sigma = cfg
                .sigma_tilde
                .clone()
                .ok_or_else(|| CliError::Config("missing field `sigma_tilde`".into()))?;
            let r: SigmaPrimeReport = sigma_prime_construction(&map, &g, n_avg, &sigma)?;
            json(command, cfg, r)
        }
        Command::LowerBound => {
            let x = require(cfg.x, "x")?;
            let n_avg = require(cfg.n_avg, "n_avg")?;
            let eps = require(cfg.epsilon, "epsilon")?;
            let n_max = require(cfg.n_max, "n_max")?;
            let oracle = cfg.oracle()?;
            let reports = (1..=n_max)
                .map(|n| lower_bound_diagnostic(&map, &g, n_avg, x, n, eps, &oracle, cfg.grid_size()))
                .collect::<Result<Vec<LowerBoundReport>, _>>()?;
            json(command, cfg, reports)
        }
    }
}

fn compare(
    cfg: &ExperimentConfig,
    map: &SmoothIntervalMap,
    g: &SingularPotential,
    mode: FoldMode,
) -> Result<String, CliError> {
    if cfg.estimators.len() < 2 {
        return Err(CliError::Config(format!(
            "compare needs at least 2 estimators (got {})",
            cfg.estimators.len()
        )));
    }
    // Reject unsupported combinations before doing any work.
    for e in &cfg.estimators {
        match e {
            EstimatorSpec::Ulam { .. } if map.julia_structure() != JuliaStructure::FullInterval => {
                return Err(CliError::Config(format!(
                    "estimator `ulam` is unavailable for {}: its Julia set is a Cantor repeller",
                    map.name()
                )));
            }
            EstimatorSpec::Tree { .. } => {
                require(cfg.x, "x")?;
            }
            EstimatorSpec::Exact if exact_value(cfg, map).is_none() => {
                return Err(CliError::Config(
                    "estimator `exact` needs a constant potential on a certified two-branch map".into(),
                ));
            }
            _ => {}
        }
    }
    let mut estimates: Vec<PressureEstimate> = Vec::new();
    for e in &cfg.estimators {
        let est = match *e {
            EstimatorSpec::Tree { n } => {
                let run = tree_pressure(map, g, require(cfg.x, "x")?, n, mode)?;
                match run.estimates.into_iter().last() {
                    Some(last) if last.size == n => last,
                    _ => {
                        return Err(CliError::Runtime(treepress::Error::Verification(format!(
                            "tree sequence truncated before depth {n}: every path hits a pole"
                        ))))
                    }
                }
            }
            EstimatorSpec::Ulam { bins, iters } => {
                ulam_pressure(map, g, bins, iters.unwrap_or(DEFAULT_ULAM_ITERS))?
            }
            EstimatorSpec::Periodic { n } => periodic_orbit_pressure(map, g, n)?,
            EstimatorSpec::Exact => exact_value(cfg, map).expect("checked above"),
        };
        estimates.push(est);
    }
    Ok(compare_csv(&estimates))
}

fn exact_value(cfg: &ExperimentConfig, map: &SmoothIntervalMap) -> Option<PressureEstimate> {
    let c = match cfg.potential {
        PotentialSpec::Zero => 0.0,
        PotentialSpec::Constant { value } => value,
        _ => return None,
    };
    exact_pressure_constant(map, c)
}
