//! Component, NCH, TOR and on-board power models, and the four-term
//! objective breakdown they aggregate into.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::placement::Decision;
use crate::rwa::LogicalNetwork;
use crate::topology::{RackTopology, ResourceComponent, ResourceKind};
use crate::workload::Application;

/// Relative slack allowed when comparing a summed load against a capacity.
pub const CAPACITY_REL_TOL: f64 = 1e-9;

/// Whether `load` fits within `capacity` under the shared tolerance.
pub fn load_fits(load: f64, capacity: f64) -> bool {
    load <= capacity * (1.0 + CAPACITY_REL_TOL)
}

#[derive(Debug, Error)]
pub enum PowerError {
    #[error("node {node} {kind}: load {load} exceeds capacity {capacity}")]
    CapacityViolation {
        node: usize,
        kind: ResourceKind,
        load: f64,
        capacity: f64,
    },
    #[error("load must be nonnegative, got {0}")]
    NegativeLoad(f64),
    #[error("application {app}: node {node} outside rack of {nodes} nodes")]
    NodeOutOfRange { app: usize, node: usize, nodes: usize },
    #[error("decision vector has {got} entries for {expected} applications")]
    DecisionCount { expected: usize, got: usize },
}

/// Power drawn by a component at the given load.
///
/// An unhosted component (zero load) is powered off and draws nothing.
/// A component hosting any demand draws its idle share plus the dynamic
/// share scaled by utilization, even at numerically tiny load.
pub fn component_power(comp: &ResourceComponent, load: f64) -> Result<f64, PowerError> {
    if load < 0.0 {
        return Err(PowerError::NegativeLoad(load));
    }
    if !load_fits(load, comp.capacity) {
        return Err(PowerError::CapacityViolation {
            node: comp.node_id,
            kind: comp.kind,
            load,
            capacity: comp.capacity,
        });
    }
    if load == 0.0 {
        return Ok(0.0);
    }
    let utilization = (load / comp.capacity).min(1.0);
    Ok(comp.idle_power_w() + comp.dynamic_power_w() * utilization)
}

/// Traffic-dependent network elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficElement {
    Nch,
    Tor,
    Onboard,
}

/// Power drawn by a network element carrying `traffic_bps`.
///
/// NCH and on-board fabric are purely load-proportional; the TOR switch
/// charges its idle power at all times on top of its per-bit share.
pub fn element_traffic_power(element: TrafficElement, traffic_bps: f64, rack: &RackTopology) -> f64 {
    match element {
        TrafficElement::Nch => rack.nch_epb_j_per_bit * traffic_bps,
        TrafficElement::Tor => rack.tor_idle_w + rack.tor_epb_j_per_bit * traffic_bps,
        TrafficElement::Onboard => rack.onboard_epb_j_per_bit * traffic_bps,
    }
}

/// Weights of the four objective terms.
///
/// The rejection weight `alpha3` is meant to dominate any plausible power
/// sum so that applications are only rejected when no feasible placement
/// exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverWeights {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
}

impl SolverWeights {
    /// Scenario I: network power weighted like compute power.
    pub fn scenario_i() -> Self {
        SolverWeights { alpha1: 1.0, alpha2: 1.0, alpha3: 1e5, alpha4: 1.0 }
    }

    /// Scenario II: network power nearly free (alpha1 << 1).
    pub fn scenario_ii() -> Self {
        SolverWeights { alpha1: 1e-3, alpha2: 1.0, alpha3: 1e5, alpha4: 1.0 }
    }
}

/// Network power split by element class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TnpcParts {
    pub nch_w: f64,
    pub tor_w: f64,
    pub onboard_w: f64,
}

/// The four objective terms and their weighted sum.
///
/// Invariants: `tnpc_w` equals the sum of its parts, and `objective` equals
/// `alpha1*tnpc_w + alpha2*tcpc_w + alpha3*tra + alpha4*taw`, both to 1e-9
/// relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveBreakdown {
    pub tnpc_w: f64,
    pub tcpc_w: f64,
    pub tra: u64,
    pub taw: u64,
    pub objective: f64,
    #[serde(flatten)]
    pub tnpc_parts: TnpcParts,
}

impl ObjectiveBreakdown {
    /// Largest relative residual of the two defining identities, against the
    /// given weights.
    pub fn identity_residual(&self, weights: &SolverWeights) -> f64 {
        let parts_sum = self.tnpc_parts.nch_w + self.tnpc_parts.tor_w + self.tnpc_parts.onboard_w;
        let tnpc_res = relative_error(self.tnpc_w, parts_sum);
        let weighted = weights.alpha1 * self.tnpc_w
            + weights.alpha2 * self.tcpc_w
            + weights.alpha3 * self.tra as f64
            + weights.alpha4 * self.taw as f64;
        tnpc_res.max(relative_error(self.objective, weighted))
    }
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(1.0);
    (a - b).abs() / scale
}

/// Sums each application's demands onto its chosen components, checking
/// per-component capacity. Index layout: `node * 3 + kind index`.
pub fn component_loads(
    rack: &RackTopology,
    apps: &[Application],
    decisions: &[Decision],
) -> Result<Vec<f64>, PowerError> {
    if apps.len() != decisions.len() {
        return Err(PowerError::DecisionCount { expected: apps.len(), got: decisions.len() });
    }
    let n = rack.num_nodes();
    let mut loads = vec![0.0_f64; n * 3];
    for (app, decision) in apps.iter().zip(decisions) {
        let Decision::Place { cpu, mem, sto } = *decision else {
            continue;
        };
        for (node, kind, demand) in [
            (cpu, ResourceKind::Cpu, app.cpu_ghz),
            (mem, ResourceKind::Mem, app.mem_gb),
            (sto, ResourceKind::Sto, app.sto_gb),
        ] {
            if node >= n {
                return Err(PowerError::NodeOutOfRange { app: app.id, node, nodes: n });
            }
            loads[node * 3 + kind.index()] += demand;
        }
    }
    for node in &rack.nodes {
        for kind in ResourceKind::ALL {
            let comp = node.component(kind);
            let load = loads[node.id * 3 + kind.index()];
            if !load_fits(load, comp.capacity) {
                return Err(PowerError::CapacityViolation {
                    node: node.id,
                    kind,
                    load,
                    capacity: comp.capacity,
                });
            }
        }
    }
    Ok(loads)
}

/// Aggregates compute and network power over the whole rack into the
/// objective breakdown.
///
/// TCPC sums component power over every component; TNPC sums NCH traffic
/// power over all nodes, TOR power (idle always charged) and on-board
/// fabric power. TAW counts assigned channels, TRA rejected applications.
pub fn aggregate_power(
    rack: &RackTopology,
    apps: &[Application],
    decisions: &[Decision],
    network: &LogicalNetwork,
    weights: &SolverWeights,
) -> Result<ObjectiveBreakdown, PowerError> {
    let loads = component_loads(rack, apps, decisions)?;
    let mut tcpc_w = 0.0;
    for node in &rack.nodes {
        for kind in ResourceKind::ALL {
            let comp = node.component(kind);
            tcpc_w += component_power(comp, loads[node.id * 3 + kind.index()])?;
        }
    }

    let mut nch_w = 0.0;
    for (_, &bps) in &network.nch_traffic_bps {
        nch_w += element_traffic_power(TrafficElement::Nch, bps, rack);
    }
    let tor_w = element_traffic_power(TrafficElement::Tor, network.tor_traffic_bps, rack);
    let mut onboard_w = 0.0;
    for (_, &bps) in &network.onboard_traffic_bps {
        onboard_w += element_traffic_power(TrafficElement::Onboard, bps, rack);
    }
    let tnpc_w = nch_w + tor_w + onboard_w;

    let tra = decisions.iter().filter(|d| d.is_rejected()).count() as u64;
    let taw = network.active_wavelengths();
    let objective = weights.alpha1 * tnpc_w
        + weights.alpha2 * tcpc_w
        + weights.alpha3 * tra as f64
        + weights.alpha4 * taw as f64;

    Ok(ObjectiveBreakdown {
        tnpc_w,
        tcpc_w,
        tra,
        taw,
        objective,
        tnpc_parts: TnpcParts { nch_w, tor_w, onboard_w },
    })
}
