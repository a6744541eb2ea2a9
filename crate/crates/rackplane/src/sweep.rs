//! Configuration-driven parameter sweeps over the (wavelengths, rate,
//! scenario) grid and CSV report assembly.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfmt::round_sig;
use crate::power::SolverWeights;
use crate::solver::{
    brute_force, solve_exact, solve_greedy, Instance, Solution, SolutionFile, SolverError,
};
use crate::topology::{build_default_rack, RackConfig, TopologyError};
use crate::workload::{apps_from_json, Application, WorkloadError};

/// Number of nodes in the default rack when no rack file is given.
pub const DEFAULT_NUM_NODES: usize = 9;

/// Objective weighting scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    I,
    II,
}

impl Scenario {
    pub fn weights(self) -> SolverWeights {
        match self {
            Scenario::I => SolverWeights::scenario_i(),
            Scenario::II => SolverWeights::scenario_ii(),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::I => write!(f, "I"),
            Scenario::II => write!(f, "II"),
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "I" | "i" | "1" => Ok(Scenario::I),
            "II" | "ii" | "2" => Ok(Scenario::II),
            other => Err(format!("unknown scenario {other:?} (expected I or II)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Greedy,
    Brute,
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveMode::Exact => write!(f, "exact"),
            SolveMode::Greedy => write!(f, "greedy"),
            SolveMode::Brute => write!(f, "brute"),
        }
    }
}

impl FromStr for SolveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(SolveMode::Exact),
            "greedy" => Ok(SolveMode::Greedy),
            "brute" => Ok(SolveMode::Brute),
            other => Err(format!("unknown mode {other:?} (expected exact, greedy or brute)")),
        }
    }
}

/// Where the demand set comes from: a workload file or a seeded generator.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum WorkloadSource {
    File(PathBuf),
    Seeded { seed: u64, apps: usize },
}

fn default_wavelengths() -> Vec<usize> {
    vec![2, 4, 6, 8, 10]
}

fn default_rates() -> Vec<f64> {
    vec![50.0, 100.0]
}

fn default_scenarios() -> Vec<Scenario> {
    vec![Scenario::I, Scenario::II]
}

fn default_budget() -> f64 {
    600.0
}

/// Sweep configuration file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Optional rack config file; defaults to a 9-node rack.
    #[serde(default)]
    pub rack: Option<PathBuf>,
    pub workload: WorkloadSource,
    #[serde(default = "default_wavelengths")]
    pub wavelengths: Vec<usize>,
    #[serde(default = "default_rates")]
    pub rates_gbps: Vec<f64>,
    #[serde(default = "default_scenarios")]
    pub scenarios: Vec<Scenario>,
    pub mode: SolveMode,
    #[serde(default = "default_budget")]
    pub budget_seconds: f64,
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, SweepError> {
        let config: SweepConfig =
            serde_json::from_str(text).map_err(|e| SweepError::Config(e.to_string()))?;
        if config.wavelengths.is_empty()
            || config.rates_gbps.is_empty()
            || config.scenarios.is_empty()
        {
            return Err(SweepError::Config(
                "wavelengths, rates_gbps and scenarios must be nonempty".into(),
            ));
        }
        Ok(config)
    }
}

/// One cell of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCase {
    pub wavelengths: usize,
    pub rate_gbps: f64,
    pub scenario: Scenario,
    pub mode: SolveMode,
}

impl SweepCase {
    pub fn file_name(&self) -> String {
        format!(
            "w{}_r{}_{}_{}.json",
            self.wavelengths, self.rate_gbps, self.scenario, self.mode
        )
    }
}

/// Manifest entry describing one completed run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseRecord {
    pub wavelengths: usize,
    pub rate_gbps: f64,
    pub scenario: Scenario,
    pub mode: SolveMode,
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct CompletedCase {
    pub case: SweepCase,
    pub solution: Solution,
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep config: {0}")]
    Config(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
}

fn read_file(path: &Path) -> Result<String, SweepError> {
    fs::read_to_string(path).map_err(|source| SweepError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, contents: &str) -> Result<(), SweepError> {
    fs::write(path, contents).map_err(|source| SweepError::Io { path: path.to_path_buf(), source })
}

/// Loads a workload from a file or generates it from a seed.
pub fn load_workload(source: &WorkloadSource) -> Result<Vec<Application>, SweepError> {
    match source {
        WorkloadSource::File(path) => {
            let text = read_file(path)?;
            apps_from_json(&text).map_err(SweepError::from)
        }
        WorkloadSource::Seeded { seed, apps } => Ok(crate::workload::generate_apps(*seed, *apps)),
    }
}

/// Solves a single grid cell.
pub fn solve_case(
    rack_config: Option<&RackConfig>,
    apps: &[Application],
    case: SweepCase,
    budget_seconds: f64,
) -> Result<Solution, SweepError> {
    let rack = match rack_config {
        Some(config) => config.build(Some(case.wavelengths), Some(case.rate_gbps))?,
        None => build_default_rack(DEFAULT_NUM_NODES, case.wavelengths, case.rate_gbps)?,
    };
    let instance = Instance::new(rack, apps.to_vec(), case.scenario.weights());
    let solution = match case.mode {
        SolveMode::Exact => solve_exact(&instance, budget_seconds),
        SolveMode::Greedy => solve_greedy(&instance),
        SolveMode::Brute => brute_force(&instance)?,
    };
    Ok(solution)
}

/// Runs every cell of the grid, writes one solution file per cell plus a
/// `manifest.json`, and returns the completed cases in grid order.
///
/// Cells are independent and may run in parallel; outputs are assembled in
/// deterministic grid order regardless of scheduling. With `timing` off the
/// manifest omits runtimes so reruns are byte-identical.
pub fn run_sweep(
    config: &SweepConfig,
    out_dir: &Path,
    timing: bool,
) -> Result<Vec<CompletedCase>, SweepError> {
    let rack_config = match &config.rack {
        Some(path) => Some(RackConfig::from_json(&read_file(path)?)?),
        None => None,
    };
    let apps = load_workload(&config.workload)?;

    let mut cases = Vec::new();
    for &w in &config.wavelengths {
        for &r in &config.rates_gbps {
            for &s in &config.scenarios {
                cases.push(SweepCase { wavelengths: w, rate_gbps: r, scenario: s, mode: config.mode });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.unwrap_or(0))
        .build()
        .expect("thread pool");
    let results: Vec<Result<CompletedCase, SweepError>> = pool.install(|| {
        cases
            .par_iter()
            .map(|&case| {
                let start = Instant::now();
                let solution = solve_case(rack_config.as_ref(), &apps, case, config.budget_seconds)?;
                let runtime_s = timing.then(|| start.elapsed().as_secs_f64());
                Ok(CompletedCase { case, solution, runtime_s })
            })
            .collect()
    });

    fs::create_dir_all(out_dir)
        .map_err(|source| SweepError::Io { path: out_dir.to_path_buf(), source })?;
    let mut completed = Vec::with_capacity(results.len());
    for result in results {
        completed.push(result?);
    }
    let mut records = Vec::with_capacity(completed.len());
    for done in &completed {
        let file = done.case.file_name();
        write_file(
            &out_dir.join(&file),
            &SolutionFile::from_solution(&done.solution).to_json(),
        )?;
        records.push(CaseRecord {
            wavelengths: done.case.wavelengths,
            rate_gbps: done.case.rate_gbps,
            scenario: done.case.scenario,
            mode: done.case.mode,
            file,
            runtime_s: done.runtime_s.map(|t| round_sig(t, 6)),
        });
    }
    let mut manifest = serde_json::to_string_pretty(&records).expect("manifest serialization");
    manifest.push('\n');
    write_file(&out_dir.join("manifest.json"), &manifest)?;
    Ok(completed)
}

pub const REPORT_HEADER: &str = "wavelengths,rate_gbps,scenario,mode,rejected,tcpc_w,tnpc_w,nch_w,tor_w,onboard_w,taw,inactive_components,objective,optimal,runtime_s";

fn csv_num(value: f64) -> String {
    format!("{}", round_sig(value, 6))
}

/// Renders one CSV row from a manifest record and its solution file.
pub fn report_row(record: &CaseRecord, solution: &SolutionFile, timing: bool) -> String {
    let b = &solution.breakdown;
    let runtime = match (timing, record.runtime_s) {
        (true, Some(t)) => csv_num(t),
        _ => String::new(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        record.wavelengths,
        record.rate_gbps,
        record.scenario,
        record.mode,
        b.tra,
        csv_num(b.tcpc_w),
        csv_num(b.tnpc_w),
        csv_num(b.tnpc_parts.nch_w),
        csv_num(b.tnpc_parts.tor_w),
        csv_num(b.tnpc_parts.onboard_w),
        b.taw,
        solution.inactive_components,
        csv_num(b.objective),
        solution.optimal,
        runtime,
    )
}

/// Merges a sweep output directory into one CSV, one row per run, sorted by
/// (wavelengths, rate, scenario, mode).
pub fn write_report(in_dir: &Path, out_path: &Path, timing: bool) -> Result<(), SweepError> {
    let manifest_path = in_dir.join("manifest.json");
    let mut records: Vec<CaseRecord> = serde_json::from_str(&read_file(&manifest_path)?)
        .map_err(|e| SweepError::Malformed { path: manifest_path, message: e.to_string() })?;
    records.sort_by(|a, b| {
        (a.wavelengths, a.rate_gbps, a.scenario as u8, a.mode as u8)
            .partial_cmp(&(b.wavelengths, b.rate_gbps, b.scenario as u8, b.mode as u8))
            .unwrap()
    });
    let mut csv = String::from(REPORT_HEADER);
    csv.push('\n');
    for record in &records {
        let path = in_dir.join(&record.file);
        let solution = SolutionFile::from_json(&read_file(&path)?)
            .map_err(|e| SweepError::Malformed { path, message: e.to_string() })?;
        csv.push_str(&report_row(record, &solution, timing));
        csv.push('\n');
    }
    write_file(out_path, &csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn config_defaults_cover_the_reference_grid() {
        let config = SweepConfig::from_json(
            r#"{"workload": {"seed": 42, "apps": 15}, "mode": "greedy"}"#,
        )
        .unwrap();
        assert_eq!(config.wavelengths, vec![2, 4, 6, 8, 10]);
        assert_eq!(config.rates_gbps, vec![50.0, 100.0]);
        assert_eq!(config.scenarios, vec![Scenario::I, Scenario::II]);
        assert_eq!(config.budget_seconds, 600.0);
        assert!(config.rack.is_none());
    }

    #[test]
    fn config_rejects_unknown_and_empty_fields() {
        let err = SweepConfig::from_json(r#"{"workload": "w.json", "mode": "exact", "bogus": 1}"#)
            .unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = SweepConfig::from_json(
            r#"{"workload": "w.json", "mode": "exact", "wavelengths": []}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("nonempty"), "{err}");
    }

    #[test]
    fn sweep_produces_grid_files_manifest_and_report() {
        let dir = tempdir().unwrap();
        let out_dir = dir.path().join("runs");
        let config = SweepConfig {
            rack: None,
            workload: WorkloadSource::Seeded { seed: 42, apps: 4 },
            wavelengths: vec![2, 4],
            rates_gbps: vec![50.0],
            scenarios: vec![Scenario::I, Scenario::II],
            mode: SolveMode::Greedy,
            budget_seconds: 1.0,
            jobs: Some(2),
        };
        let completed = run_sweep(&config, &out_dir, false).unwrap();
        assert_eq!(completed.len(), 4);
        assert!(out_dir.join("w2_r50_I_greedy.json").exists());
        assert!(out_dir.join("w4_r50_II_greedy.json").exists());
        assert!(out_dir.join("manifest.json").exists());

        let report = dir.path().join("report.csv");
        write_report(&out_dir, &report, false).unwrap();
        let text = fs::read_to_string(&report).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5); // header + 4 rows
        assert_eq!(lines[0], REPORT_HEADER);
        assert!(lines[1].starts_with("2,50,I,greedy,"));
        // Untimed rows leave the runtime column empty.
        assert!(lines[1].ends_with(','));
    }

    #[test]
    fn untimed_sweeps_are_byte_identical() {
        let dir = tempdir().unwrap();
        let config = SweepConfig {
            rack: None,
            workload: WorkloadSource::Seeded { seed: 7, apps: 3 },
            wavelengths: vec![2],
            rates_gbps: vec![50.0, 100.0],
            scenarios: vec![Scenario::I],
            mode: SolveMode::Greedy,
            budget_seconds: 1.0,
            jobs: Some(2),
        };
        let out_a = dir.path().join("a");
        let out_b = dir.path().join("b");
        run_sweep(&config, &out_a, false).unwrap();
        run_sweep(&config, &out_b, false).unwrap();
        for name in ["w2_r50_I_greedy.json", "w2_r100_I_greedy.json", "manifest.json"] {
            let a = fs::read(out_a.join(name)).unwrap();
            let b = fs::read(out_b.join(name)).unwrap();
            assert_eq!(a, b, "{name} differs between runs");
        }
    }
}
