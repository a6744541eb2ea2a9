//! Wavelength-channel assignment under rack-wide exclusivity, plus the
//! per-element traffic tallies that drive the network power model.
//!
//! The pool is shared by the whole rack: every transmitted wavelength reaches
//! every combiner, so a channel can have at most one transmitter at a time.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::placement::Decision;
use crate::topology::WavelengthPlan;
use crate::workload::Application;

/// Tolerance for capacity and coverage comparisons on Gbps quantities.
const GBPS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowKind {
    CpuMem,
    CpuSto,
}

/// An inter-node traffic demand; intra-node traffic never reaches this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowDemand {
    pub src: usize,
    pub dst: usize,
    pub gbps: u64,
    pub app_id: usize,
    pub kind: FlowKind,
}

/// One wavelength channel bound to a (src, dst) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelAssignment {
    pub channel_id: usize,
    pub src: usize,
    pub dst: usize,
    pub carried_gbps: f64,
}

/// The instantiated logical network: channel assignments plus traffic tallies
/// per network element, in bits per second.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LogicalNetwork {
    pub assignments: Vec<ChannelAssignment>,
    pub nch_traffic_bps: BTreeMap<usize, f64>,
    pub tor_traffic_bps: f64,
    pub onboard_traffic_bps: BTreeMap<usize, f64>,
}

impl LogicalNetwork {
    pub fn empty() -> Self {
        LogicalNetwork::default()
    }

    /// TAW: the number of assigned wavelength channels.
    pub fn active_wavelengths(&self) -> u64 {
        self.assignments.len() as u64
    }
}

/// Splits each placed application's flows into inter-node demands and
/// intra-node on-board traffic.
///
/// Flow direction is modeled CPU-side node -> memory/storage node, with the
/// full rate charged once per flow. Colocated pairs land in the intra-node
/// map instead.
pub fn aggregate_flows(
    apps: &[Application],
    decisions: &[Decision],
) -> (Vec<FlowDemand>, BTreeMap<usize, f64>) {
    let mut flows = Vec::new();
    let mut intra: BTreeMap<usize, f64> = BTreeMap::new();
    for (app, decision) in apps.iter().zip(decisions) {
        let Decision::Place { cpu, mem, sto } = *decision else {
            continue;
        };
        if cpu == mem {
            *intra.entry(cpu).or_insert(0.0) += app.cm_gbps as f64 * 1e9;
        } else {
            flows.push(FlowDemand {
                src: cpu,
                dst: mem,
                gbps: app.cm_gbps,
                app_id: app.id,
                kind: FlowKind::CpuMem,
            });
        }
        if cpu == sto {
            *intra.entry(cpu).or_insert(0.0) += app.cd_gbps as f64 * 1e9;
        } else {
            flows.push(FlowDemand {
                src: cpu,
                dst: sto,
                gbps: app.cd_gbps,
                app_id: app.id,
                kind: FlowKind::CpuSto,
            });
        }
    }
    (flows, intra)
}

/// Number of channels needed to carry `gbps` at `rate_gbps` per channel
/// (inverse multiplexing); zero demand needs zero channels.
pub fn channels_required(gbps: f64, rate_gbps: f64) -> u64 {
    if gbps <= 0.0 {
        return 0;
    }
    let q = gbps / rate_gbps;
    ((q - 1e-9).ceil().max(1.0)) as u64
}

/// The channel pool cannot carry the demanded flows.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("channel pool exhausted: {needed} channels needed, {available} available (deficit {})", self.deficit())]
pub struct ChannelShortfall {
    pub needed: u64,
    pub available: u64,
}

impl ChannelShortfall {
    pub fn deficit(&self) -> u64 {
        self.needed - self.available
    }
}

/// Assigns direct single-hop channels to the aggregated (src, dst) demands,
/// lowest free channel id first, pairs in lexicographic order.
///
/// Feasible iff the per-pair channel counts sum to at most the pool size.
/// On success the tallies charge each inter-node bit once at the source NCH,
/// once at the destination NCH, and once at each end's on-board fabric.
pub fn assign_channels(
    flows: &[FlowDemand],
    plan: &WavelengthPlan,
) -> Result<LogicalNetwork, ChannelShortfall> {
    let mut pair_demand: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for flow in flows {
        *pair_demand.entry((flow.src, flow.dst)).or_insert(0) += flow.gbps;
    }
    let rate = plan.channel_rate_gbps;
    let needed: u64 = pair_demand
        .values()
        .map(|&d| channels_required(d as f64, rate))
        .sum();
    if needed > plan.num_channels as u64 {
        return Err(ChannelShortfall {
            needed,
            available: plan.num_channels as u64,
        });
    }

    let mut network = LogicalNetwork::empty();
    let mut next_channel = 0usize;
    for (&(src, dst), &demand) in &pair_demand {
        let count = channels_required(demand as f64, rate);
        for i in 0..count {
            // Fill channels to the line rate; the last one carries the rest.
            let carried = if i + 1 < count {
                rate
            } else {
                demand as f64 - (count - 1) as f64 * rate
            };
            network.assignments.push(ChannelAssignment {
                channel_id: next_channel,
                src,
                dst,
                carried_gbps: carried,
            });
            next_channel += 1;
        }
        let bps = demand as f64 * 1e9;
        *network.nch_traffic_bps.entry(src).or_insert(0.0) += bps;
        *network.nch_traffic_bps.entry(dst).or_insert(0.0) += bps;
        *network.onboard_traffic_bps.entry(src).or_insert(0.0) += bps;
        *network.onboard_traffic_bps.entry(dst).or_insert(0.0) += bps;
    }
    Ok(network)
}

/// A breached logical-network invariant, reported as data.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkViolation {
    DuplicateChannel { channel: usize },
    ChannelOutOfPlan { channel: usize },
    OverCapacity { channel: usize, carried_gbps: f64, rate_gbps: f64 },
    NonPositiveCarried { channel: usize, carried_gbps: f64 },
    SelfLoop { channel: usize },
    UncoveredDemand { src: usize, dst: usize, demand_gbps: f64, routable_gbps: f64 },
    RelayImbalance { node: usize, in_gbps: f64, out_gbps: f64 },
}

impl fmt::Display for NetworkViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkViolation::DuplicateChannel { channel } => {
                write!(f, "channel {channel} has more than one transmitter")
            }
            NetworkViolation::ChannelOutOfPlan { channel } => {
                write!(f, "channel {channel} is not part of the wavelength plan")
            }
            NetworkViolation::OverCapacity { channel, carried_gbps, rate_gbps } => {
                write!(f, "channel {channel} carries {carried_gbps} Gbps, above the {rate_gbps} Gbps rate")
            }
            NetworkViolation::NonPositiveCarried { channel, carried_gbps } => {
                write!(f, "channel {channel} carries a non-positive load {carried_gbps}")
            }
            NetworkViolation::SelfLoop { channel } => {
                write!(f, "channel {channel} connects a node to itself")
            }
            NetworkViolation::UncoveredDemand { src, dst, demand_gbps, routable_gbps } => {
                write!(
                    f,
                    "demand {src}->{dst} of {demand_gbps} Gbps can only route {routable_gbps} Gbps"
                )
            }
            NetworkViolation::RelayImbalance { node, in_gbps, out_gbps } => {
                write!(
                    f,
                    "relay {node} receives {in_gbps} Gbps but forwards {out_gbps} Gbps"
                )
            }
        }
    }
}

/// Checks channel exclusivity, per-channel capacity, demand coverage and
/// conservation at pure relay elements.
///
/// Coverage accepts relay paths: demands are routed in lexicographic
/// (src, dst) order through the residual channel capacities using
/// shortest-augmenting-path max-flow.
pub fn validate_logical_network(
    network: &LogicalNetwork,
    plan: &WavelengthPlan,
    flows: &[FlowDemand],
) -> Vec<NetworkViolation> {
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for a in &network.assignments {
        if !seen.insert(a.channel_id) {
            out.push(NetworkViolation::DuplicateChannel { channel: a.channel_id });
        }
        if !plan.contains_channel(a.channel_id) {
            out.push(NetworkViolation::ChannelOutOfPlan { channel: a.channel_id });
        }
        if a.carried_gbps > plan.channel_rate_gbps + GBPS_TOL {
            out.push(NetworkViolation::OverCapacity {
                channel: a.channel_id,
                carried_gbps: a.carried_gbps,
                rate_gbps: plan.channel_rate_gbps,
            });
        }
        if a.carried_gbps <= 0.0 {
            out.push(NetworkViolation::NonPositiveCarried {
                channel: a.channel_id,
                carried_gbps: a.carried_gbps,
            });
        }
        if a.src == a.dst {
            out.push(NetworkViolation::SelfLoop { channel: a.channel_id });
        }
    }

    let mut demands: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for flow in flows {
        *demands.entry((flow.src, flow.dst)).or_insert(0.0) += flow.gbps as f64;
    }

    // Residual capacities; reverse edges start at zero.
    let mut residual: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut neighbors: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for a in &network.assignments {
        *residual.entry((a.src, a.dst)).or_insert(0.0) += a.carried_gbps;
        residual.entry((a.dst, a.src)).or_insert(0.0);
        neighbors.entry(a.src).or_default().insert(a.dst);
        neighbors.entry(a.dst).or_default().insert(a.src);
    }

    for (&(src, dst), &demand) in &demands {
        let routed = route_max_flow(&mut residual, &neighbors, src, dst, demand);
        if routed + GBPS_TOL < demand {
            out.push(NetworkViolation::UncoveredDemand {
                src,
                dst,
                demand_gbps: demand,
                routable_gbps: routed,
            });
        }
    }

    // Intermediate relays (elements that both receive and forward but are no
    // demand's endpoint, e.g. the TOR) must forward exactly what they receive.
    let mut endpoints = BTreeSet::new();
    for &(s, d) in demands.keys() {
        endpoints.insert(s);
        endpoints.insert(d);
    }
    let mut in_gbps: BTreeMap<usize, f64> = BTreeMap::new();
    let mut out_gbps: BTreeMap<usize, f64> = BTreeMap::new();
    for a in &network.assignments {
        *out_gbps.entry(a.src).or_insert(0.0) += a.carried_gbps;
        *in_gbps.entry(a.dst).or_insert(0.0) += a.carried_gbps;
    }
    for (&node, &inflow) in &in_gbps {
        if endpoints.contains(&node) {
            continue;
        }
        let outflow = out_gbps.get(&node).copied().unwrap_or(0.0);
        if outflow > 0.0 && (inflow - outflow).abs() > GBPS_TOL {
            out.push(NetworkViolation::RelayImbalance {
                node,
                in_gbps: inflow,
                out_gbps: outflow,
            });
        }
    }

    out
}

/// Routes up to `demand` Gbps from `src` to `dst` through the residual
/// capacities, consuming them. Returns the amount actually routed.
fn route_max_flow(
    residual: &mut BTreeMap<(usize, usize), f64>,
    neighbors: &BTreeMap<usize, BTreeSet<usize>>,
    src: usize,
    dst: usize,
    demand: f64,
) -> f64 {
    let mut routed = 0.0;
    while routed + GBPS_TOL < demand {
        // BFS for the shortest augmenting path.
        let mut pred: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if u == dst {
                break;
            }
            let Some(nexts) = neighbors.get(&u) else { continue };
            for &v in nexts {
                if v == src || pred.contains_key(&v) {
                    continue;
                }
                if residual.get(&(u, v)).copied().unwrap_or(0.0) > GBPS_TOL {
                    pred.insert(v, u);
                    queue.push_back(v);
                }
            }
        }
        if !pred.contains_key(&dst) {
            break;
        }
        let mut bottleneck = demand - routed;
        let mut v = dst;
        while v != src {
            let u = pred[&v];
            bottleneck = bottleneck.min(residual[&(u, v)]);
            v = u;
        }
        let mut v = dst;
        while v != src {
            let u = pred[&v];
            *residual.get_mut(&(u, v)).unwrap() -= bottleneck;
            *residual.get_mut(&(v, u)).unwrap() += bottleneck;
            v = u;
        }
        routed += bottleneck;
    }
    routed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_default_rack;
    use crate::workload::generate_apps;
    use proptest::prelude::*;

    fn app(id: usize, cm: u64, cd: u64) -> Application {
        Application {
            id,
            cpu_ghz: 0.9,
            mem_gb: 3.6,
            sto_gb: 80.0,
            cm_gbps: cm,
            cd_gbps: cd,
        }
    }

    #[test]
    fn colocated_app_produces_only_intra_traffic() {
        let apps = vec![app(0, 500, 100)];
        let decisions = vec![Decision::colocated(3)];
        let (flows, intra) = aggregate_flows(&apps, &decisions);
        assert!(flows.is_empty());
        assert_eq!(intra.get(&3).copied(), Some(600e9));
    }

    #[test]
    fn split_memory_yields_one_flow() {
        let apps = vec![app(0, 400, 50)];
        let decisions = vec![Decision::Place { cpu: 0, mem: 1, sto: 0 }];
        let (flows, intra) = aggregate_flows(&apps, &decisions);
        assert_eq!(
            flows,
            vec![FlowDemand { src: 0, dst: 1, gbps: 400, app_id: 0, kind: FlowKind::CpuMem }]
        );
        assert_eq!(intra.get(&0).copied(), Some(50e9));
    }

    #[test]
    fn no_apps_no_flows() {
        let (flows, intra) = aggregate_flows(&[], &[]);
        assert!(flows.is_empty());
        assert!(intra.is_empty());
    }

    #[test]
    fn rejected_apps_contribute_nothing() {
        let apps = vec![app(0, 400, 50)];
        let (flows, intra) = aggregate_flows(&apps, &[Decision::Rejected]);
        assert!(flows.is_empty());
        assert!(intra.is_empty());
    }

    #[test]
    fn channels_required_is_ceiling() {
        assert_eq!(channels_required(800.0, 50.0), 16);
        assert_eq!(channels_required(100.0, 100.0), 1);
        assert_eq!(channels_required(0.0, 50.0), 0);
        assert_eq!(channels_required(1.0, 50.0), 1);
        assert_eq!(channels_required(51.0, 50.0), 2);
    }

    #[test]
    fn assign_channels_splits_a_flow_across_the_pool() {
        let rack = build_default_rack(2, 2, 50.0).unwrap();
        let flows = vec![FlowDemand { src: 0, dst: 1, gbps: 60, app_id: 0, kind: FlowKind::CpuMem }];
        let network = assign_channels(&flows, &rack.plan).unwrap();
        assert_eq!(network.active_wavelengths(), 2);
        assert_eq!(network.assignments[0].channel_id, 0);
        assert_eq!(network.assignments[0].carried_gbps, 50.0);
        assert_eq!(network.assignments[1].channel_id, 1);
        assert_eq!(network.assignments[1].carried_gbps, 10.0);
        assert_eq!(network.nch_traffic_bps.get(&0).copied(), Some(60e9));
        assert_eq!(network.nch_traffic_bps.get(&1).copied(), Some(60e9));
        assert_eq!(network.onboard_traffic_bps.get(&0).copied(), Some(60e9));
        assert_eq!(network.tor_traffic_bps, 0.0);
        assert!(validate_logical_network(&network, &rack.plan, &flows).is_empty());
    }

    #[test]
    fn assign_channels_reports_the_deficit() {
        let rack = build_default_rack(3, 2, 50.0).unwrap();
        let flows = vec![
            FlowDemand { src: 0, dst: 1, gbps: 60, app_id: 0, kind: FlowKind::CpuMem },
            FlowDemand { src: 0, dst: 2, gbps: 50, app_id: 1, kind: FlowKind::CpuSto },
        ];
        let err = assign_channels(&flows, &rack.plan).unwrap_err();
        assert_eq!(err, ChannelShortfall { needed: 3, available: 2 });
        assert_eq!(err.deficit(), 1);
    }

    #[test]
    fn empty_flow_set_yields_empty_network() {
        let rack = build_default_rack(2, 2, 50.0).unwrap();
        let network = assign_channels(&[], &rack.plan).unwrap();
        assert_eq!(network, LogicalNetwork::empty());
        assert_eq!(network.active_wavelengths(), 0);
    }

    #[test]
    fn validator_flags_shared_channel() {
        let rack = build_default_rack(3, 4, 50.0).unwrap();
        let network = LogicalNetwork {
            assignments: vec![
                ChannelAssignment { channel_id: 0, src: 0, dst: 1, carried_gbps: 10.0 },
                ChannelAssignment { channel_id: 0, src: 2, dst: 1, carried_gbps: 10.0 },
            ],
            ..LogicalNetwork::empty()
        };
        let violations = validate_logical_network(&network, &rack.plan, &[]);
        assert!(violations.contains(&NetworkViolation::DuplicateChannel { channel: 0 }));
    }

    #[test]
    fn validator_flags_over_capacity_channel() {
        let rack = build_default_rack(2, 2, 50.0).unwrap();
        let flows = vec![FlowDemand { src: 0, dst: 1, gbps: 60, app_id: 0, kind: FlowKind::CpuMem }];
        let network = LogicalNetwork {
            assignments: vec![ChannelAssignment { channel_id: 0, src: 0, dst: 1, carried_gbps: 60.0 }],
            ..LogicalNetwork::empty()
        };
        let violations = validate_logical_network(&network, &rack.plan, &flows);
        assert_eq!(
            violations,
            vec![NetworkViolation::OverCapacity { channel: 0, carried_gbps: 60.0, rate_gbps: 50.0 }]
        );
    }

    #[test]
    fn validator_flags_uncovered_demand() {
        let rack = build_default_rack(2, 2, 50.0).unwrap();
        let flows = vec![FlowDemand { src: 0, dst: 1, gbps: 60, app_id: 0, kind: FlowKind::CpuMem }];
        let network = LogicalNetwork {
            assignments: vec![ChannelAssignment { channel_id: 0, src: 0, dst: 1, carried_gbps: 50.0 }],
            ..LogicalNetwork::empty()
        };
        let violations = validate_logical_network(&network, &rack.plan, &flows);
        assert_eq!(violations.len(), 1);
        assert!(matches!(
            violations[0],
            NetworkViolation::UncoveredDemand { src: 0, dst: 1, .. }
        ));
    }

    #[test]
    fn validator_accepts_relay_paths_and_checks_conservation() {
        let rack = build_default_rack(3, 4, 50.0).unwrap();
        let tor = rack.tor_id();
        let flows = vec![FlowDemand { src: 0, dst: 1, gbps: 40, app_id: 0, kind: FlowKind::CpuMem }];
        // Demand routed 0 -> TOR -> 1.
        let relayed = LogicalNetwork {
            assignments: vec![
                ChannelAssignment { channel_id: 0, src: 0, dst: tor, carried_gbps: 40.0 },
                ChannelAssignment { channel_id: 1, src: tor, dst: 1, carried_gbps: 40.0 },
            ],
            ..LogicalNetwork::empty()
        };
        assert!(validate_logical_network(&relayed, &rack.plan, &flows).is_empty());

        // Break conservation at the TOR: it swallows half the traffic.
        let broken = LogicalNetwork {
            assignments: vec![
                ChannelAssignment { channel_id: 0, src: 0, dst: tor, carried_gbps: 40.0 },
                ChannelAssignment { channel_id: 1, src: tor, dst: 1, carried_gbps: 20.0 },
            ],
            ..LogicalNetwork::empty()
        };
        let violations = validate_logical_network(&broken, &rack.plan, &flows);
        assert!(violations
            .iter()
            .any(|v| matches!(v, NetworkViolation::UncoveredDemand { .. })));
        assert!(violations
            .iter()
            .any(|v| matches!(v, NetworkViolation::RelayImbalance { node, .. } if *node == tor)));
    }

    /// Brute-force check that no path mix using relays beats direct channels
    /// on the pool-plus-network-power cost it affects.
    #[test]
    fn relay_paths_never_beat_direct_assignment() {
        let rack = build_default_rack(3, 4, 50.0).unwrap();
        let alpha1 = 1.0;
        let alpha4 = 1.0;
        let flow_sets: Vec<Vec<(usize, usize, u64)>> = vec![
            vec![(0, 1, 30)],
            vec![(0, 1, 60)],
            vec![(0, 2, 50), (1, 2, 30)],
            vec![(2, 0, 40), (0, 1, 40)],
        ];
        for flows in flow_sets {
            let mut costs = Vec::new();
            // Path choice per flow: 0 = direct, 1 = via the spare node, 2 = via TOR.
            let combos = 3usize.pow(flows.len() as u32);
            for combo in 0..combos {
                let mut hop_demand: BTreeMap<(usize, usize), u64> = BTreeMap::new();
                let mut nch_gbps: BTreeMap<usize, u64> = BTreeMap::new();
                let mut tor_gbps = 0u64;
                let mut onboard_gbps = 0u64;
                let mut uses_relay = false;
                let mut idx = combo;
                for &(s, t, d) in &flows {
                    let choice = idx % 3;
                    idx /= 3;
                    let path: Vec<usize> = match choice {
                        0 => vec![s, t],
                        1 => {
                            let spare = (0..3).find(|n| *n != s && *n != t).unwrap();
                            uses_relay = true;
                            vec![s, spare, t]
                        }
                        _ => {
                            uses_relay = true;
                            vec![s, rack.tor_id(), t]
                        }
                    };
                    for hop in path.windows(2) {
                        *hop_demand.entry((hop[0], hop[1])).or_insert(0) += d;
                    }
                    for &element in &path {
                        if element == rack.tor_id() {
                            tor_gbps += d;
                        } else {
                            *nch_gbps.entry(element).or_insert(0) += d;
                        }
                    }
                    onboard_gbps += 2 * d;
                }
                let channels: u64 = hop_demand
                    .values()
                    .map(|&d| channels_required(d as f64, rack.plan.channel_rate_gbps))
                    .sum();
                if channels > rack.plan.num_channels as u64 {
                    continue;
                }
                let nch_w: f64 = nch_gbps
                    .values()
                    .map(|&g| rack.nch_epb_j_per_bit * g as f64 * 1e9)
                    .sum();
                let tor_w = rack.tor_idle_w + rack.tor_epb_j_per_bit * tor_gbps as f64 * 1e9;
                let onboard_w = rack.onboard_epb_j_per_bit * onboard_gbps as f64 * 1e9;
                let cost = alpha1 * (nch_w + tor_w + onboard_w) + alpha4 * channels as f64;
                costs.push((uses_relay, cost));
            }
            let direct = costs
                .iter()
                .find(|(relay, _)| !relay)
                .map(|(_, c)| *c)
                .expect("direct combo always fits within the pool in these cases");
            for (uses_relay, cost) in costs {
                if uses_relay {
                    assert!(
                        cost >= direct - 1e-9,
                        "relay mix with cost {cost} beats direct cost {direct}"
                    );
                }
            }
        }
    }

    proptest! {
        /// Exclusivity, coverage and pool limits hold for any feasible set of
        /// placements of a generated workload.
        #[test]
        fn assignment_invariants(seed in any::<u64>(), w in 1usize..9, n in 0usize..6) {
            let rack = build_default_rack(4, 2 * w, 50.0).unwrap();
            let apps = generate_apps(seed, n);
            let mut rng = crate::workload::SplitMix64::new(seed ^ 0xABCD);
            let decisions: Vec<Decision> = (0..n)
                .map(|_| Decision::Place {
                    cpu: rng.next_below(4) as usize,
                    mem: rng.next_below(4) as usize,
                    sto: rng.next_below(4) as usize,
                })
                .collect();
            let (flows, _) = aggregate_flows(&apps, &decisions);
            match assign_channels(&flows, &rack.plan) {
                Ok(network) => {
                    prop_assert!(network.active_wavelengths() <= rack.plan.num_channels as u64);
                    // TAW equals the sum of per-pair channel counts.
                    let mut pair: BTreeMap<(usize, usize), u64> = BTreeMap::new();
                    for f in &flows {
                        *pair.entry((f.src, f.dst)).or_insert(0) += f.gbps;
                    }
                    let expected: u64 = pair
                        .values()
                        .map(|&d| channels_required(d as f64, 50.0))
                        .sum();
                    prop_assert_eq!(network.active_wavelengths(), expected);
                    prop_assert!(validate_logical_network(&network, &rack.plan, &flows).is_empty());
                }
                Err(shortfall) => {
                    prop_assert!(shortfall.needed > shortfall.available);
                    prop_assert!(shortfall.deficit() > 0);
                }
            }
        }
    }
}
