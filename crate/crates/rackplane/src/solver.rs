//! Placement solvers: per-application accept/reject and resource placement
//! minimizing the weighted four-term objective, with an exact
//! branch-and-bound, an exhaustive oracle and a first-fit heuristic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfmt::round_sig;
use crate::placement::Decision;
use crate::power::{
    aggregate_power, component_loads, load_fits, ObjectiveBreakdown, PowerError, SolverWeights,
    TnpcParts,
};
use crate::rwa::{aggregate_flows, assign_channels, channels_required, ChannelAssignment, LogicalNetwork};
use crate::topology::{RackTopology, ResourceKind};
use crate::workload::Application;

/// Absolute tolerance for objective comparisons; differences at or below it
/// count as ties and are broken on the decision-vector ordering.
pub const OBJECTIVE_TOL: f64 = 1e-9;

/// Search budgets are enforced as deterministic node counts: a budget of `b`
/// seconds admits `b * EXACT_NODES_PER_SECOND` branch evaluations. Enforcing
/// work rather than wall-clock time keeps interrupted searches bit-for-bit
/// reproducible across runs and machines.
pub const EXACT_NODES_PER_SECOND: f64 = 2_000_000.0;

/// A solve input: the rack, the demand set and the objective weights.
#[derive(Debug, Clone)]
pub struct Instance {
    pub rack: RackTopology,
    pub apps: Vec<Application>,
    pub weights: SolverWeights,
}

impl Instance {
    pub fn new(rack: RackTopology, apps: Vec<Application>, weights: SolverWeights) -> Self {
        Instance { rack, apps, weights }
    }
}

/// A full placement outcome with its logical network and objective breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub decisions: Vec<Decision>,
    pub network: LogicalNetwork,
    pub breakdown: ObjectiveBreakdown,
    pub optimal: bool,
    /// Components left with zero load across the whole rack.
    pub inactive_components: usize,
}

impl Solution {
    /// Applications placed across more than one node.
    pub fn split_count(&self) -> usize {
        self.decisions.iter().filter(|d| d.is_split()).count()
    }
}

/// A constraint that makes a decision vector infeasible (distinct from
/// rejecting an application, which is always allowed).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Infeasibility {
    #[error("node {node} {kind}: load {load} exceeds capacity {capacity}")]
    Capacity { node: usize, kind: ResourceKind, load: f64, capacity: f64 },
    #[error("{needed} channels needed but only {available} in the pool (deficit {})", needed - available)]
    Channels { needed: u64, available: u64 },
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("infeasible: {0}")]
    Infeasible(Infeasibility),
    #[error("decision vector has {got} entries for {expected} applications")]
    DecisionCount { expected: usize, got: usize },
    #[error("application {app}: node {node} outside rack of {nodes} nodes")]
    NodeOutOfRange { app: usize, node: usize, nodes: usize },
    #[error("instance ({apps} applications, {nodes} nodes) exceeds the exhaustive guard ({max_apps} applications, {max_nodes} nodes)")]
    GuardExceeded { apps: usize, nodes: usize, max_apps: usize, max_nodes: usize },
}

/// Checks capacity and channel constraints for a decision vector and, when
/// feasible, returns the fully scored solution.
///
/// Rejected applications contribute one rejection count and no load.
pub fn evaluate(instance: &Instance, decisions: &[Decision]) -> Result<Solution, SolverError> {
    evaluate_parts(&instance.rack, &instance.apps, decisions, &instance.weights)
}

pub(crate) fn evaluate_parts(
    rack: &RackTopology,
    apps: &[Application],
    decisions: &[Decision],
    weights: &SolverWeights,
) -> Result<Solution, SolverError> {
    if decisions.len() != apps.len() {
        return Err(SolverError::DecisionCount { expected: apps.len(), got: decisions.len() });
    }
    let loads = component_loads(rack, apps, decisions).map_err(|e| match e {
        PowerError::CapacityViolation { node, kind, load, capacity } => {
            SolverError::Infeasible(Infeasibility::Capacity { node, kind, load, capacity })
        }
        PowerError::NodeOutOfRange { app, node, nodes } => {
            SolverError::NodeOutOfRange { app, node, nodes }
        }
        PowerError::DecisionCount { expected, got } => SolverError::DecisionCount { expected, got },
        PowerError::NegativeLoad(_) => unreachable!("demands are nonnegative"),
    })?;

    let (flows, intra) = aggregate_flows(apps, decisions);
    let mut network = assign_channels(&flows, &rack.plan).map_err(|shortfall| {
        SolverError::Infeasible(Infeasibility::Channels {
            needed: shortfall.needed,
            available: shortfall.available,
        })
    })?;
    for (node, bps) in intra {
        *network.onboard_traffic_bps.entry(node).or_insert(0.0) += bps;
    }

    let breakdown = aggregate_power(rack, apps, decisions, &network, weights)
        .expect("loads already validated");
    let inactive_components = loads.iter().filter(|&&l| l == 0.0).count();
    Ok(Solution {
        decisions: decisions.to_vec(),
        network,
        breakdown,
        optimal: false,
        inactive_components,
    })
}

/// Size guard for the exhaustive search.
#[derive(Debug, Clone, Copy)]
pub struct ExhaustiveGuard {
    pub max_apps: usize,
    pub max_nodes: usize,
}

impl Default for ExhaustiveGuard {
    fn default() -> Self {
        ExhaustiveGuard { max_apps: 5, max_nodes: 3 }
    }
}

/// Exhaustively enumerates every decision vector and returns the minimum
/// objective, ties broken towards the smallest decision vector.
pub fn brute_force(instance: &Instance) -> Result<Solution, SolverError> {
    brute_force_guarded(instance, ExhaustiveGuard::default())
}

pub fn brute_force_guarded(
    instance: &Instance,
    guard: ExhaustiveGuard,
) -> Result<Solution, SolverError> {
    let n_apps = instance.apps.len();
    let n_nodes = instance.rack.num_nodes();
    if n_apps > guard.max_apps || n_nodes > guard.max_nodes {
        return Err(SolverError::GuardExceeded {
            apps: n_apps,
            nodes: n_nodes,
            max_apps: guard.max_apps,
            max_nodes: guard.max_nodes,
        });
    }

    // Per-application candidates in tie-break order: triples lexicographic
    // by (cpu, mem, sto), then Rejected.
    let mut candidates = Vec::with_capacity(n_nodes.pow(3) + 1);
    for cpu in 0..n_nodes {
        for mem in 0..n_nodes {
            for sto in 0..n_nodes {
                candidates.push(Decision::Place { cpu, mem, sto });
            }
        }
    }
    candidates.push(Decision::Rejected);

    let mut best: Option<(f64, Vec<Decision>)> = None;
    let mut indices = vec![0usize; n_apps];
    loop {
        let decisions: Vec<Decision> = indices.iter().map(|&i| candidates[i]).collect();
        if let Ok(solution) = evaluate(instance, &decisions) {
            let obj = solution.breakdown.objective;
            let better = match &best {
                None => true,
                Some((best_obj, best_dec)) => {
                    obj < best_obj - OBJECTIVE_TOL
                        || (obj <= best_obj + OBJECTIVE_TOL && decisions < *best_dec)
                }
            };
            if better {
                best = Some((obj, decisions));
            }
        }
        // Odometer increment, last application least significant, so vectors
        // are enumerated in ascending tie-break order.
        let mut pos = n_apps;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < candidates.len() {
                break;
            }
            indices[pos] = 0;
            if pos == 0 {
                pos = usize::MAX;
                break;
            }
        }
        if n_apps == 0 || pos == usize::MAX {
            break;
        }
    }

    let (_, decisions) = best.expect("the all-rejected vector is always feasible");
    let mut solution = evaluate(instance, &decisions)?;
    solution.optimal = true;
    Ok(solution)
}

/// Admissible minimum future cost of the undecided suffix of applications:
/// prefix objective plus, per undecided application, the cheaper of outright
/// rejection and its dynamic-only compute power plus one on-board charge for
/// its total flows.
///
/// Never exceeds the objective of the best feasible completion; an
/// infeasible prefix yields infinity.
pub fn lower_bound(instance: &Instance, partial: &[Decision]) -> f64 {
    let k = partial.len();
    assert!(
        k <= instance.apps.len(),
        "prefix of {k} decisions for {} applications",
        instance.apps.len()
    );
    let prefix = match evaluate_parts(&instance.rack, &instance.apps[..k], partial, &instance.weights)
    {
        Ok(solution) => solution.breakdown.objective,
        Err(SolverError::Infeasible(_)) => return f64::INFINITY,
        Err(e) => panic!("invalid prefix: {e}"),
    };
    let model = FutureCostModel::new(&instance.rack);
    let future: f64 = instance.apps[k..]
        .iter()
        .map(|app| model.app_min_cost(app, &instance.weights))
        .sum();
    prefix + future
}

/// Cheapest possible marginal cost of placing one application anywhere.
struct FutureCostModel {
    /// Per kind, the minimum dynamic power per unit of demand.
    min_dyn_per_unit: [f64; 3],
    onboard_epb: f64,
}

impl FutureCostModel {
    fn new(rack: &RackTopology) -> Self {
        let mut min_dyn_per_unit = [f64::INFINITY; 3];
        for comp in rack.components() {
            let per_unit = comp.dynamic_power_w() / comp.capacity;
            let slot = comp.kind.index();
            if per_unit < min_dyn_per_unit[slot] {
                min_dyn_per_unit[slot] = per_unit;
            }
        }
        FutureCostModel { min_dyn_per_unit, onboard_epb: rack.onboard_epb_j_per_bit }
    }

    fn app_min_cost(&self, app: &Application, weights: &SolverWeights) -> f64 {
        let dynamic = app.cpu_ghz * self.min_dyn_per_unit[0]
            + app.mem_gb * self.min_dyn_per_unit[1]
            + app.sto_gb * self.min_dyn_per_unit[2];
        let onboard = self.onboard_epb * app.total_flow_gbps() as f64 * 1e9;
        let placed = weights.alpha2 * dynamic + weights.alpha1 * onboard;
        placed.min(weights.alpha3)
    }
}

// ---------------------------------------------------------------------------
// Exact search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct SearchState {
    /// Per-component load, index `node * 3 + kind`.
    loads: Vec<f64>,
    /// Aggregated inter-node demand per (src, dst) pair, sorted by key.
    pairs: Vec<((usize, usize), u64)>,
    sum_pair_gbps: u64,
    sum_intra_gbps: u64,
    channels: u64,
    rejected: u64,
}

impl SearchState {
    fn new(num_nodes: usize) -> Self {
        SearchState {
            loads: vec![0.0; num_nodes * 3],
            pairs: Vec::new(),
            sum_pair_gbps: 0,
            sum_intra_gbps: 0,
            channels: 0,
            rejected: 0,
        }
    }

    fn pair_demand(&self, key: (usize, usize)) -> u64 {
        match self.pairs.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(slot) => self.pairs[slot].1,
            Err(_) => 0,
        }
    }
}

enum TrailOp {
    Load { idx: usize, old: f64 },
    PairValue { slot: usize, old: u64 },
    PairInserted { slot: usize },
    Totals { sum_pair: u64, sum_intra: u64, channels: u64, rejected: u64 },
}

struct SearchCtx<'a> {
    rack: &'a RackTopology,
    apps: &'a [Application],
    weights: SolverWeights,
    num_nodes: usize,
    pool: u64,
    rate: f64,
    caps: Vec<f64>,
    idle_w: Vec<f64>,
    dyn_per_unit: Vec<f64>,
    /// Admissible minimum cost of the suffix starting at each depth.
    suffix_min: Vec<f64>,
    /// Remaining demand per kind for the suffix starting at each depth.
    suffix_demand: Vec<[f64; 3]>,
    cap_max: [f64; 3],
    idle_min: [f64; 3],
    idle_bound_on: bool,
    state: SearchState,
    trail: Vec<TrailOp>,
    dec_stack: Vec<Decision>,
    incumbent_obj: f64,
    incumbent: Vec<Decision>,
    visited: u64,
    budget: u64,
    stopped: bool,
}

impl<'a> SearchCtx<'a> {
    fn new(instance: &'a Instance, budget_nodes: u64) -> Self {
        let rack = &instance.rack;
        let apps = &instance.apps;
        let n = rack.num_nodes();
        let mut caps = vec![0.0; n * 3];
        let mut idle_w = vec![0.0; n * 3];
        let mut dyn_per_unit = vec![0.0; n * 3];
        let mut cap_max = [0.0_f64; 3];
        let mut idle_min = [f64::INFINITY; 3];
        let mut idle_max = [0.0_f64; 3];
        for comp in rack.components() {
            let idx = comp.node_id * 3 + comp.kind.index();
            caps[idx] = comp.capacity;
            idle_w[idx] = comp.idle_power_w();
            dyn_per_unit[idx] = comp.dynamic_power_w() / comp.capacity;
            let k = comp.kind.index();
            cap_max[k] = cap_max[k].max(comp.capacity);
            idle_min[k] = idle_min[k].min(comp.idle_power_w());
            idle_max[k] = idle_max[k].max(comp.idle_power_w());
        }

        let weights = instance.weights;
        let model = FutureCostModel::new(rack);
        let mut suffix_min = vec![0.0; apps.len() + 1];
        let mut suffix_demand = vec![[0.0; 3]; apps.len() + 1];
        for k in (0..apps.len()).rev() {
            let app = &apps[k];
            suffix_min[k] = suffix_min[k + 1] + model.app_min_cost(app, &weights);
            suffix_demand[k] = suffix_demand[k + 1];
            suffix_demand[k][0] += app.cpu_ghz;
            suffix_demand[k][1] += app.mem_gb;
            suffix_demand[k][2] += app.sto_gb;
        }

        // The idle-activation bound assumes rejection always costs more than
        // the idle power it could save; drop it under unusual weightings.
        let idle_bound_on =
            weights.alpha3 >= 2.0 * weights.alpha2 * (idle_max[0] + idle_max[1] + idle_max[2]);

        SearchCtx {
            rack,
            apps,
            weights,
            num_nodes: n,
            pool: rack.plan.num_channels as u64,
            rate: rack.plan.channel_rate_gbps,
            caps,
            idle_w,
            dyn_per_unit,
            suffix_min,
            suffix_demand,
            cap_max,
            idle_min,
            idle_bound_on,
            state: SearchState::new(n),
            trail: Vec::new(),
            dec_stack: Vec::new(),
            incumbent_obj: f64::INFINITY,
            incumbent: Vec::new(),
            visited: 0,
            budget: budget_nodes,
            stopped: false,
        }
    }

    fn ceil_channels(&self, gbps: u64) -> u64 {
        channels_required(gbps as f64, self.rate)
    }

    /// Objective of the current partial state, mirroring the evaluation
    /// pipeline: every inter-node bit is charged at two NCHs and two
    /// on-board ends, intra-node bits at one on-board end.
    fn objective(&self) -> f64 {
        let mut tcpc = 0.0;
        for (idx, &load) in self.state.loads.iter().enumerate() {
            if load > 0.0 {
                tcpc += self.idle_w[idx] + self.dyn_per_unit[idx] * load.min(self.caps[idx]);
            }
        }
        let nch_w = self.rack.nch_epb_j_per_bit * 2.0 * self.state.sum_pair_gbps as f64 * 1e9;
        let tor_w = self.rack.tor_idle_w;
        let onboard_w = self.rack.onboard_epb_j_per_bit
            * (self.state.sum_intra_gbps + 2 * self.state.sum_pair_gbps) as f64
            * 1e9;
        let tnpc = nch_w + tor_w + onboard_w;
        self.weights.alpha1 * tnpc
            + self.weights.alpha2 * tcpc
            + self.weights.alpha3 * self.state.rejected as f64
            + self.weights.alpha4 * self.state.channels as f64
    }

    /// Admissible extra idle power any completion of this state must pay:
    /// remaining demand that cannot fit on already-active components forces
    /// fresh activations, each at least the cheapest idle draw of its kind.
    fn idle_bound(&self, depth: usize) -> f64 {
        if !self.idle_bound_on {
            return 0.0;
        }
        let mut bound = 0.0;
        for kind in 0..3 {
            let need = self.suffix_demand[depth][kind];
            if need <= 0.0 {
                continue;
            }
            let mut residual = 0.0;
            let mut idx = kind;
            while idx < self.state.loads.len() {
                let load = self.state.loads[idx];
                if load > 0.0 {
                    residual += (self.caps[idx] - load).max(0.0);
                }
                idx += 3;
            }
            let deficit = need - residual;
            if deficit > 1e-9 {
                let activations = ((deficit / self.cap_max[kind]) - 1e-9).ceil();
                if activations > 0.0 {
                    bound += activations * self.idle_min[kind];
                }
            }
        }
        self.weights.alpha2 * bound
    }

    fn fits(&self, idx: usize, extra: f64) -> bool {
        load_fits(self.state.loads[idx] + extra, self.caps[idx])
    }

    /// Extra channels a placement would claim, or None if it exceeds the pool.
    fn channel_increase(&self, cpu: usize, mem: usize, sto: usize, app: &Application) -> Option<u64> {
        let mut extra = 0u64;
        if mem != cpu {
            let before = self.state.pair_demand((cpu, mem));
            let mut after = before + app.cm_gbps;
            extra += self.ceil_channels(after) - self.ceil_channels(before);
            if sto != cpu && sto == mem {
                // Both flows share the (cpu, mem) pair.
                let base = after;
                after += app.cd_gbps;
                extra += self.ceil_channels(after) - self.ceil_channels(base);
            }
        }
        if sto != cpu && sto != mem {
            let before = self.state.pair_demand((cpu, sto));
            let after = before + app.cd_gbps;
            extra += self.ceil_channels(after) - self.ceil_channels(before);
        }
        if self.state.channels + extra <= self.pool {
            Some(extra)
        } else {
            None
        }
    }

    fn apply(&mut self, app: &Application, decision: Decision) -> usize {
        let mark = self.trail.len();
        self.trail.push(TrailOp::Totals {
            sum_pair: self.state.sum_pair_gbps,
            sum_intra: self.state.sum_intra_gbps,
            channels: self.state.channels,
            rejected: self.state.rejected,
        });
        match decision {
            Decision::Rejected => self.state.rejected += 1,
            Decision::Place { cpu, mem, sto } => {
                for (node, kind, demand) in [
                    (cpu, 0usize, app.cpu_ghz),
                    (mem, 1, app.mem_gb),
                    (sto, 2, app.sto_gb),
                ] {
                    let idx = node * 3 + kind;
                    self.trail.push(TrailOp::Load { idx, old: self.state.loads[idx] });
                    self.state.loads[idx] += demand;
                }
                if mem == cpu {
                    self.state.sum_intra_gbps += app.cm_gbps;
                } else {
                    self.pair_add((cpu, mem), app.cm_gbps);
                }
                if sto == cpu {
                    self.state.sum_intra_gbps += app.cd_gbps;
                } else {
                    self.pair_add((cpu, sto), app.cd_gbps);
                }
            }
        }
        mark
    }

    fn pair_add(&mut self, key: (usize, usize), gbps: u64) {
        self.state.sum_pair_gbps += gbps;
        match self.state.pairs.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(slot) => {
                let old = self.state.pairs[slot].1;
                self.trail.push(TrailOp::PairValue { slot, old });
                self.state.pairs[slot].1 = old + gbps;
                self.state.channels += self.ceil_channels(old + gbps) - self.ceil_channels(old);
            }
            Err(slot) => {
                self.state.pairs.insert(slot, (key, gbps));
                self.trail.push(TrailOp::PairInserted { slot });
                self.state.channels += self.ceil_channels(gbps);
            }
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                TrailOp::Load { idx, old } => self.state.loads[idx] = old,
                TrailOp::PairValue { slot, old } => self.state.pairs[slot].1 = old,
                TrailOp::PairInserted { slot } => {
                    self.state.pairs.remove(slot);
                }
                TrailOp::Totals { sum_pair, sum_intra, channels, rejected } => {
                    self.state.sum_pair_gbps = sum_pair;
                    self.state.sum_intra_gbps = sum_intra;
                    self.state.channels = channels;
                    self.state.rejected = rejected;
                }
            }
        }
    }

    /// Visits one candidate decision for the application at `depth`.
    fn visit(&mut self, depth: usize, decision: Decision) {
        if self.stopped {
            return;
        }
        self.visited += 1;
        if self.visited > self.budget {
            self.stopped = true;
            return;
        }
        let app = &self.apps[depth];
        let mark = self.apply(app, decision);
        let obj = self.objective();
        self.dec_stack.push(decision);

        let bound = obj + self.suffix_min[depth + 1] + self.idle_bound(depth + 1);
        let prune = if bound > self.incumbent_obj + OBJECTIVE_TOL {
            true
        } else if bound >= self.incumbent_obj - OBJECTIVE_TOL {
            // Tied bound: safe to prune only if every completion orders
            // after the incumbent, which keeps the tie-break exact.
            self.dec_stack.as_slice() > &self.incumbent[..depth + 1]
        } else {
            false
        };

        if !prune {
            if depth + 1 == self.apps.len() {
                let better = obj < self.incumbent_obj - OBJECTIVE_TOL
                    || (obj <= self.incumbent_obj + OBJECTIVE_TOL
                        && self.dec_stack < self.incumbent);
                if better {
                    self.incumbent_obj = obj;
                    self.incumbent = self.dec_stack.clone();
                }
            } else {
                self.descend(depth + 1);
            }
        }

        self.dec_stack.pop();
        self.undo(mark);
    }

    /// Branches on the application at `depth`: colocated placements by node
    /// id, then split triples in lexicographic order, then rejection.
    fn descend(&mut self, depth: usize) {
        let app = &self.apps[depth];
        let (cpu_d, mem_d, sto_d) = (app.cpu_ghz, app.mem_gb, app.sto_gb);

        for node in 0..self.num_nodes {
            if self.stopped {
                return;
            }
            let base = node * 3;
            if self.fits(base, cpu_d) && self.fits(base + 1, mem_d) && self.fits(base + 2, sto_d) {
                self.visit(depth, Decision::colocated(node));
            }
        }

        for cpu in 0..self.num_nodes {
            if self.stopped {
                return;
            }
            if !self.fits(cpu * 3, cpu_d) {
                continue;
            }
            for mem in 0..self.num_nodes {
                if !self.fits(mem * 3 + 1, mem_d) {
                    continue;
                }
                for sto in 0..self.num_nodes {
                    if cpu == mem && mem == sto {
                        continue;
                    }
                    if self.stopped {
                        return;
                    }
                    if !self.fits(sto * 3 + 2, sto_d) {
                        continue;
                    }
                    if self.channel_increase(cpu, mem, sto, app).is_none() {
                        continue;
                    }
                    self.visit(depth, Decision::Place { cpu, mem, sto });
                }
            }
        }

        if !self.stopped {
            self.visit(depth, Decision::Rejected);
        }
    }
}

/// Depth-first branch-and-bound over applications in id order.
///
/// Always returns the best placement found; `optimal` is true iff the search
/// ran to completion within the budget. The all-rejected vector seeds the
/// incumbent, so a feasible solution comes back even on a tiny budget.
pub fn solve_exact(instance: &Instance, budget_seconds: f64) -> Solution {
    let budget_nodes = (budget_seconds * EXACT_NODES_PER_SECOND)
        .max(1.0)
        .min(u64::MAX as f64) as u64;
    let mut ctx = SearchCtx::new(instance, budget_nodes);

    // Seed: reject everything (always feasible).
    ctx.state.rejected = instance.apps.len() as u64;
    ctx.incumbent_obj = ctx.objective();
    ctx.incumbent = vec![Decision::Rejected; instance.apps.len()];
    ctx.state.rejected = 0;

    if instance.apps.is_empty() {
        let mut solution = evaluate(instance, &[]).expect("empty instance is feasible");
        solution.optimal = true;
        return solution;
    }

    ctx.descend(0);

    let incumbent = std::mem::take(&mut ctx.incumbent);
    let stopped = ctx.stopped;
    let mut solution = evaluate(instance, &incumbent).expect("incumbent is feasible");
    solution.optimal = !stopped;
    solution
}

/// First-fit-decreasing colocation by normalized compute demand; failed
/// applications are retried with split placements in ascending order of
/// total inter-resource traffic, and whatever still fails is rejected.
pub fn solve_greedy(instance: &Instance) -> Solution {
    let n_apps = instance.apps.len();
    let mut ctx = SearchCtx::new(instance, u64::MAX);
    let mut decisions = vec![Decision::Rejected; n_apps];

    let mut cap_max = [0.0_f64; 3];
    for comp in instance.rack.components() {
        let k = comp.kind.index();
        cap_max[k] = cap_max[k].max(comp.capacity);
    }
    let normalized = |app: &Application| {
        app.cpu_ghz / cap_max[0] + app.mem_gb / cap_max[1] + app.sto_gb / cap_max[2]
    };

    let mut order: Vec<usize> = (0..n_apps).collect();
    order.sort_by(|&a, &b| {
        normalized(&instance.apps[b])
            .partial_cmp(&normalized(&instance.apps[a]))
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut failed = Vec::new();
    for &i in &order {
        let app = &instance.apps[i];
        let mut placed = false;
        for node in 0..ctx.num_nodes {
            let base = node * 3;
            if ctx.fits(base, app.cpu_ghz)
                && ctx.fits(base + 1, app.mem_gb)
                && ctx.fits(base + 2, app.sto_gb)
            {
                ctx.apply(app, Decision::colocated(node));
                decisions[i] = Decision::colocated(node);
                placed = true;
                break;
            }
        }
        if !placed {
            failed.push(i);
        }
    }

    // Low inter-resource traffic first: the cheapest apps to disaggregate.
    failed.sort_by_key(|&i| (instance.apps[i].total_flow_gbps(), i));
    for &i in &failed {
        let app = &instance.apps[i];
        'triples: for cpu in 0..ctx.num_nodes {
            if !ctx.fits(cpu * 3, app.cpu_ghz) {
                continue;
            }
            for mem in 0..ctx.num_nodes {
                if !ctx.fits(mem * 3 + 1, app.mem_gb) {
                    continue;
                }
                for sto in 0..ctx.num_nodes {
                    if cpu == mem && mem == sto {
                        continue;
                    }
                    if !ctx.fits(sto * 3 + 2, app.sto_gb) {
                        continue;
                    }
                    if ctx.channel_increase(cpu, mem, sto, app).is_none() {
                        continue;
                    }
                    let decision = Decision::Place { cpu, mem, sto };
                    ctx.apply(app, decision);
                    decisions[i] = decision;
                    break 'triples;
                }
            }
        }
    }

    evaluate(instance, &decisions).expect("greedy placements are feasibility-checked")
}

// ---------------------------------------------------------------------------
// Solution files
// ---------------------------------------------------------------------------

/// On-disk form of a solution; floats carry six significant digits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub decisions: Vec<Decision>,
    pub channels: Vec<ChannelAssignment>,
    pub breakdown: ObjectiveBreakdown,
    pub inactive_components: usize,
    pub optimal: bool,
}

impl SolutionFile {
    pub fn from_solution(solution: &Solution) -> Self {
        let b = &solution.breakdown;
        SolutionFile {
            decisions: solution.decisions.clone(),
            channels: solution
                .network
                .assignments
                .iter()
                .map(|a| ChannelAssignment {
                    carried_gbps: round_sig(a.carried_gbps, 6),
                    ..a.clone()
                })
                .collect(),
            breakdown: ObjectiveBreakdown {
                tnpc_w: round_sig(b.tnpc_w, 6),
                tcpc_w: round_sig(b.tcpc_w, 6),
                tra: b.tra,
                taw: b.taw,
                objective: round_sig(b.objective, 6),
                tnpc_parts: TnpcParts {
                    nch_w: round_sig(b.tnpc_parts.nch_w, 6),
                    tor_w: round_sig(b.tnpc_parts.tor_w, 6),
                    onboard_w: round_sig(b.tnpc_parts.onboard_w, 6),
                },
            },
            inactive_components: solution.inactive_components,
            optimal: solution.optimal,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("solution serialization");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
