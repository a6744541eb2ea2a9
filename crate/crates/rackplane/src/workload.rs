//! Application demand generation and workload file handling.
//!
//! Workloads are generated with a fixed, documented PRNG (splitmix64) so any
//! reimplementation can reproduce them bit for bit from the seed alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Discrete CPU demand levels in GHz.
pub const CPU_DEMANDS_GHZ: [f64; 3] = [0.9, 1.8, 2.7];
/// Discrete memory demand levels in GB.
pub const MEM_DEMANDS_GB: [f64; 5] = [3.6, 7.2, 10.8, 26.0, 32.0];
/// Discrete storage demand levels in GB.
pub const STO_DEMANDS_GB: [f64; 3] = [80.0, 160.0, 240.0];
/// Inclusive CPU-memory flow range in Gbps.
pub const CM_GBPS_RANGE: (u64, u64) = (300, 800);
/// Inclusive CPU-disk flow range in Gbps.
pub const CD_GBPS_RANGE: (u64, u64) = (5, 128);

/// One application's resource demands and inter-resource flow rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Application {
    pub id: usize,
    pub cpu_ghz: f64,
    pub mem_gb: f64,
    pub sto_gb: f64,
    /// CPU-memory flow in Gbps.
    pub cm_gbps: u64,
    /// CPU-disk flow in Gbps.
    pub cd_gbps: u64,
}

impl Application {
    pub fn total_flow_gbps(&self) -> u64 {
        self.cm_gbps + self.cd_gbps
    }
}

/// splitmix64: the output mixer of Vigna's reference generator. One u64 of
/// state, one output per step.
///
/// Test vectors (first outputs): seed 0 -> 0xE220A8397B1DCDAF,
/// 0x6E789E6AA1B965F4, 0x06C45D188009454F.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `0..n` by modulo reduction. The bias for the small
    /// ranges used here is below 2^-55.
    pub fn next_below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// Deterministically generates `n` applications from `seed`.
///
/// Per application the draws are, in order: CPU level, memory level, storage
/// level, CPU-memory Gbps, CPU-disk Gbps; applications are generated in id
/// order 0..n-1. Compute demands are uniform over their discrete sets, flows
/// uniform over their integer Gbps ranges.
pub fn generate_apps(seed: u64, n: usize) -> Vec<Application> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|id| Application {
            id,
            cpu_ghz: CPU_DEMANDS_GHZ[rng.next_below(3) as usize],
            mem_gb: MEM_DEMANDS_GB[rng.next_below(5) as usize],
            sto_gb: STO_DEMANDS_GB[rng.next_below(3) as usize],
            cm_gbps: CM_GBPS_RANGE.0 + rng.next_below(CM_GBPS_RANGE.1 - CM_GBPS_RANGE.0 + 1),
            cd_gbps: CD_GBPS_RANGE.0 + rng.next_below(CD_GBPS_RANGE.1 - CD_GBPS_RANGE.0 + 1),
        })
        .collect()
}

#[derive(Debug, Error)]
pub enum WorkloadError {
    #[error("application {id}: {field} = {value} is outside the allowed {allowed}")]
    OutOfRange {
        id: usize,
        field: &'static str,
        value: String,
        allowed: String,
    },
    #[error("workload file: {0}")]
    Json(#[from] serde_json::Error),
}

fn check_in_set(id: usize, field: &'static str, value: f64, set: &[f64]) -> Result<(), WorkloadError> {
    if set.iter().any(|&v| v == value) {
        Ok(())
    } else {
        Err(WorkloadError::OutOfRange {
            id,
            field,
            value: format!("{value}"),
            allowed: format!("set {set:?}"),
        })
    }
}

fn check_in_range(
    id: usize,
    field: &'static str,
    value: u64,
    range: (u64, u64),
) -> Result<(), WorkloadError> {
    if value >= range.0 && value <= range.1 {
        Ok(())
    } else {
        Err(WorkloadError::OutOfRange {
            id,
            field,
            value: value.to_string(),
            allowed: format!("range [{}, {}]", range.0, range.1),
        })
    }
}

/// Checks every field against its allowed set or range.
pub fn validate_app(app: &Application) -> Result<(), WorkloadError> {
    check_in_set(app.id, "cpu_ghz", app.cpu_ghz, &CPU_DEMANDS_GHZ)?;
    check_in_set(app.id, "mem_gb", app.mem_gb, &MEM_DEMANDS_GB)?;
    check_in_set(app.id, "sto_gb", app.sto_gb, &STO_DEMANDS_GB)?;
    check_in_range(app.id, "cm_gbps", app.cm_gbps, CM_GBPS_RANGE)?;
    check_in_range(app.id, "cd_gbps", app.cd_gbps, CD_GBPS_RANGE)?;
    Ok(())
}

/// Serializes a workload to its JSON file form.
pub fn apps_to_json(apps: &[Application]) -> String {
    let mut text = serde_json::to_string_pretty(apps).expect("workload serialization");
    text.push('\n');
    text
}

/// Parses and validates a workload file, naming the offending field on error.
pub fn apps_from_json(text: &str) -> Result<Vec<Application>, WorkloadError> {
    let apps: Vec<Application> = serde_json::from_str(text)?;
    for app in &apps {
        validate_app(app)?;
    }
    Ok(apps)
}
