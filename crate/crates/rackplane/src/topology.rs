//! Rack fabric definition: nodes holding one component per resource kind,
//! a shared rack-wide wavelength pool split across two interfaces per node,
//! and the top-of-rack switch.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three disaggregated resource kinds hosted by every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResourceKind {
    Cpu,
    Mem,
    Sto,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 3] = [ResourceKind::Cpu, ResourceKind::Mem, ResourceKind::Sto];

    /// Stable index used for per-component arrays (CPU=0, MEM=1, STO=2).
    pub fn index(self) -> usize {
        match self {
            ResourceKind::Cpu => 0,
            ResourceKind::Mem => 1,
            ResourceKind::Sto => 2,
        }
    }

    /// Capacity unit for this kind.
    pub fn unit(self) -> &'static str {
        match self {
            ResourceKind::Cpu => "GHz",
            ResourceKind::Mem => "GB",
            ResourceKind::Sto => "GB",
        }
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceKind::Cpu => write!(f, "CPU"),
            ResourceKind::Mem => write!(f, "MEM"),
            ResourceKind::Sto => write!(f, "STO"),
        }
    }
}

/// One resource component (a CPU, a RAM module or a disk) inside a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceComponent {
    pub node_id: usize,
    pub kind: ResourceKind,
    /// Capacity in the kind's unit (GHz for CPU, GB otherwise).
    pub capacity: f64,
    pub peak_power_w: f64,
    /// Fraction of peak power that scales with utilization, in (0, 1].
    pub dynamic_range: f64,
}

impl ResourceComponent {
    /// Constant draw while the component is active (hosting any demand).
    pub fn idle_power_w(&self) -> f64 {
        (1.0 - self.dynamic_range) * self.peak_power_w
    }

    /// Peak minus idle; the load-proportional share.
    pub fn dynamic_power_w(&self) -> f64 {
        self.dynamic_range * self.peak_power_w
    }
}

/// A disaggregated node: one component per resource kind plus two optical
/// interfaces multiplexed onto the shared backplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    /// Exactly one component per kind, indexed by `ResourceKind::index`.
    pub components: [ResourceComponent; 3],
}

impl Node {
    /// Every node carries two interfaces; one transmits the channels the
    /// other receives, so the node can use the whole pool in each direction.
    pub const INTERFACE_COUNT: usize = 2;

    pub fn component(&self, kind: ResourceKind) -> &ResourceComponent {
        &self.components[kind.index()]
    }
}

/// The rack-wide wavelength pool and its per-interface partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavelengthPlan {
    pub num_channels: usize,
    pub channel_rate_gbps: f64,
    /// Channels transmitted by interface A (received by interface B).
    pub partition_a: BTreeSet<usize>,
    /// Channels transmitted by interface B (received by interface A).
    pub partition_b: BTreeSet<usize>,
}

impl WavelengthPlan {
    /// Builds the canonical plan: channels `0..num_channels`, even ids in
    /// partition A, odd ids in partition B.
    pub fn new(num_channels: usize, channel_rate_gbps: f64) -> Result<Self, TopologyError> {
        if num_channels < 2 || num_channels % 2 != 0 {
            return Err(TopologyError::InvalidPlan(format!(
                "num_channels must be even and >= 2, got {num_channels}"
            )));
        }
        if !(channel_rate_gbps > 0.0) {
            return Err(TopologyError::InvalidArgument(format!(
                "channel_rate_gbps must be positive, got {channel_rate_gbps}"
            )));
        }
        let partition_a = (0..num_channels).step_by(2).collect();
        let partition_b = (1..num_channels).step_by(2).collect();
        Ok(WavelengthPlan {
            num_channels,
            channel_rate_gbps,
            partition_a,
            partition_b,
        })
    }

    /// Maximum traffic a single node can source: it may transmit on all
    /// channels of the pool when assigned all of them.
    pub fn node_capacity_gbps(&self) -> f64 {
        self.num_channels as f64 * self.channel_rate_gbps
    }

    pub fn contains_channel(&self, channel: usize) -> bool {
        channel < self.num_channels
    }
}

/// The full rack fabric: resource nodes, wavelength plan, TOR switch and
/// energy-per-bit parameters of every network element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RackTopology {
    pub nodes: Vec<Node>,
    pub plan: WavelengthPlan,
    pub tor_idle_w: f64,
    pub tor_epb_j_per_bit: f64,
    pub nch_epb_j_per_bit: f64,
    pub onboard_epb_j_per_bit: f64,
}

/// Default component parameters: capacity, peak power, dynamic range.
pub const DEFAULT_CPU: (f64, f64, f64) = (3.6, 130.0, 0.30);
pub const DEFAULT_MEM: (f64, f64, f64) = (32.0, 11.85, 0.30);
pub const DEFAULT_STO: (f64, f64, f64) = (320.0, 6.19, 0.30);
/// TOR switch idle draw in watts.
pub const DEFAULT_TOR_IDLE_W: f64 = 312.0;
/// TOR switch energy per bit (0.028 pJ/b).
pub const DEFAULT_TOR_EPB: f64 = 0.028e-12;
/// Node controller hub energy per bit. Matches a 10 Gbps offload NIC with a
/// 14 W peak: 14 W / 10 Gbps = 1.4 nJ/b.
pub const DEFAULT_NCH_EPB: f64 = 1.4e-9;
/// On-board fabric energy per bit (0.1 pJ/b).
pub const DEFAULT_ONBOARD_EPB: f64 = 0.1e-12;

impl RackTopology {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// The TOR switch is addressed as one id past the last resource node.
    /// It shares the wavelength pool and can relay, but hosts no components.
    pub fn tor_id(&self) -> usize {
        self.nodes.len()
    }

    pub fn component(&self, node_id: usize, kind: ResourceKind) -> &ResourceComponent {
        self.nodes[node_id].component(kind)
    }

    /// All components in (node id, kind index) order.
    pub fn components(&self) -> impl Iterator<Item = &ResourceComponent> {
        self.nodes.iter().flat_map(|n| n.components.iter())
    }

    /// Returns every violated structural invariant; an empty list means the
    /// topology is valid. Never mutates the input.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (pos, node) in self.nodes.iter().enumerate() {
            if node.id != pos {
                out.push(Violation::NodeIdGap {
                    expected: pos,
                    found: node.id,
                });
            }
            for kind in ResourceKind::ALL {
                let comp = node.component(kind);
                if comp.kind != kind {
                    out.push(Violation::ComponentKindMismatch {
                        node: node.id,
                        slot: kind,
                        found: comp.kind,
                    });
                }
                if comp.node_id != node.id {
                    out.push(Violation::ComponentNodeMismatch {
                        node: node.id,
                        kind,
                        stored: comp.node_id,
                    });
                }
                if !(comp.capacity > 0.0) {
                    out.push(Violation::NonPositiveCapacity {
                        node: node.id,
                        kind,
                        value: comp.capacity,
                    });
                }
                if !(comp.peak_power_w > 0.0) {
                    out.push(Violation::NonPositivePeakPower {
                        node: node.id,
                        kind,
                        value: comp.peak_power_w,
                    });
                }
                if !(comp.dynamic_range > 0.0 && comp.dynamic_range <= 1.0) {
                    out.push(Violation::DynamicRangeOutOfBounds {
                        node: node.id,
                        kind,
                        value: comp.dynamic_range,
                    });
                }
            }
        }
        let plan = &self.plan;
        if plan.num_channels % 2 != 0 {
            out.push(Violation::OddChannelCount {
                count: plan.num_channels,
            });
        }
        if !(plan.channel_rate_gbps > 0.0) {
            out.push(Violation::NonPositiveChannelRate {
                value: plan.channel_rate_gbps,
            });
        }
        if plan.partition_a.len() != plan.partition_b.len() {
            out.push(Violation::PartitionSizeMismatch {
                a: plan.partition_a.len(),
                b: plan.partition_b.len(),
            });
        }
        for &ch in plan.partition_a.intersection(&plan.partition_b) {
            out.push(Violation::ChannelInBothPartitions { channel: ch });
        }
        for &ch in plan.partition_a.union(&plan.partition_b) {
            if !plan.contains_channel(ch) {
                out.push(Violation::ChannelOutOfRange { channel: ch });
            }
        }
        for ch in 0..plan.num_channels {
            if !plan.partition_a.contains(&ch) && !plan.partition_b.contains(&ch) {
                out.push(Violation::ChannelUnassigned { channel: ch });
            }
        }
        for (name, value) in [
            ("tor_idle_w", self.tor_idle_w),
            ("tor_epb_j_per_bit", self.tor_epb_j_per_bit),
            ("nch_epb_j_per_bit", self.nch_epb_j_per_bit),
            ("onboard_epb_j_per_bit", self.onboard_epb_j_per_bit),
        ] {
            if !(value >= 0.0) {
                out.push(Violation::NegativeEnergyParam { name, value });
            }
        }
        out
    }
}

/// A single violated invariant, reported as data rather than an error.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NodeIdGap { expected: usize, found: usize },
    ComponentKindMismatch { node: usize, slot: ResourceKind, found: ResourceKind },
    ComponentNodeMismatch { node: usize, kind: ResourceKind, stored: usize },
    NonPositiveCapacity { node: usize, kind: ResourceKind, value: f64 },
    NonPositivePeakPower { node: usize, kind: ResourceKind, value: f64 },
    DynamicRangeOutOfBounds { node: usize, kind: ResourceKind, value: f64 },
    OddChannelCount { count: usize },
    NonPositiveChannelRate { value: f64 },
    PartitionSizeMismatch { a: usize, b: usize },
    ChannelInBothPartitions { channel: usize },
    ChannelOutOfRange { channel: usize },
    ChannelUnassigned { channel: usize },
    NegativeEnergyParam { name: &'static str, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeIdGap { expected, found } => {
                write!(f, "node ids must be contiguous: expected {expected}, found {found}")
            }
            Violation::ComponentKindMismatch { node, slot, found } => {
                write!(f, "node {node}: slot {slot} holds a {found} component")
            }
            Violation::ComponentNodeMismatch { node, kind, stored } => {
                write!(f, "node {node}: {kind} component claims node {stored}")
            }
            Violation::NonPositiveCapacity { node, kind, value } => {
                write!(f, "node {node} {kind}: capacity must be positive, got {value}")
            }
            Violation::NonPositivePeakPower { node, kind, value } => {
                write!(f, "node {node} {kind}: peak power must be positive, got {value}")
            }
            Violation::DynamicRangeOutOfBounds { node, kind, value } => {
                write!(f, "node {node} {kind}: dynamic range must be in (0,1], got {value}")
            }
            Violation::OddChannelCount { count } => {
                write!(f, "wavelength count must be even, got {count}")
            }
            Violation::NonPositiveChannelRate { value } => {
                write!(f, "channel rate must be positive, got {value}")
            }
            Violation::PartitionSizeMismatch { a, b } => {
                write!(f, "partitions must be equal-sized, got {a} and {b}")
            }
            Violation::ChannelInBothPartitions { channel } => {
                write!(f, "channel {channel} appears in both partitions")
            }
            Violation::ChannelOutOfRange { channel } => {
                write!(f, "channel {channel} is outside the plan")
            }
            Violation::ChannelUnassigned { channel } => {
                write!(f, "channel {channel} belongs to neither partition")
            }
            Violation::NegativeEnergyParam { name, value } => {
                write!(f, "{name} must be nonnegative, got {value}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error("invalid wavelength plan: {0}")]
    InvalidPlan(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn make_component(node_id: usize, kind: ResourceKind, params: (f64, f64, f64)) -> ResourceComponent {
    ResourceComponent {
        node_id,
        kind,
        capacity: params.0,
        peak_power_w: params.1,
        dynamic_range: params.2,
    }
}

/// Builds a rack of structurally identical nodes with the default component
/// and energy parameters.
pub fn build_default_rack(
    num_nodes: usize,
    num_channels: usize,
    rate_gbps: f64,
) -> Result<RackTopology, TopologyError> {
    if num_nodes < 1 {
        return Err(TopologyError::InvalidArgument(format!(
            "num_nodes must be >= 1, got {num_nodes}"
        )));
    }
    let plan = WavelengthPlan::new(num_channels, rate_gbps)?;
    let nodes = (0..num_nodes)
        .map(|id| Node {
            id,
            components: [
                make_component(id, ResourceKind::Cpu, DEFAULT_CPU),
                make_component(id, ResourceKind::Mem, DEFAULT_MEM),
                make_component(id, ResourceKind::Sto, DEFAULT_STO),
            ],
        })
        .collect();
    Ok(RackTopology {
        nodes,
        plan,
        tor_idle_w: DEFAULT_TOR_IDLE_W,
        tor_epb_j_per_bit: DEFAULT_TOR_EPB,
        nch_epb_j_per_bit: DEFAULT_NCH_EPB,
        onboard_epb_j_per_bit: DEFAULT_ONBOARD_EPB,
    })
}

/// Rack configuration file contents. `nodes` is either a count (default
/// capacities everywhere) or one capacity entry per node.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RackConfig {
    pub nodes: NodeSpec,
    pub wavelengths: usize,
    pub rate_gbps: f64,
    #[serde(default)]
    pub power: PowerOverrides,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NodeSpec {
    Count(usize),
    Custom(Vec<NodeCapacities>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeCapacities {
    pub cpu_ghz: f64,
    pub mem_gb: f64,
    pub sto_gb: f64,
}

/// Optional overrides for any default power parameter. Energy-per-bit values
/// accept plain numbers or decimal strings ("1.4e-12").
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerOverrides {
    pub cpu_peak_w: Option<f64>,
    pub mem_peak_w: Option<f64>,
    pub sto_peak_w: Option<f64>,
    pub dynamic_range: Option<f64>,
    pub tor_idle_w: Option<f64>,
    #[serde(default, deserialize_with = "deserialize_opt_epb")]
    pub tor_epb: Option<f64>,
    #[serde(default, deserialize_with = "deserialize_opt_epb")]
    pub nch_epb: Option<f64>,
    #[serde(default, deserialize_with = "deserialize_opt_epb")]
    pub onboard_epb: Option<f64>,
}

fn deserialize_opt_epb<'de, D>(deserializer: D) -> Result<Option<f64>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumberOrString {
        Number(f64),
        Text(String),
    }
    match Option::<NumberOrString>::deserialize(deserializer)? {
        None => Ok(None),
        Some(NumberOrString::Number(v)) => Ok(Some(v)),
        Some(NumberOrString::Text(s)) => s
            .trim()
            .parse::<f64>()
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("invalid energy-per-bit value {s:?}"))),
    }
}

impl RackConfig {
    pub fn from_json(text: &str) -> Result<Self, TopologyError> {
        serde_json::from_str(text)
            .map_err(|e| TopologyError::InvalidArgument(format!("rack config: {e}")))
    }

    /// Builds the topology described by this config. `wavelengths` and
    /// `rate_gbps` arguments override the file values when given.
    pub fn build(
        &self,
        wavelengths: Option<usize>,
        rate_gbps: Option<f64>,
    ) -> Result<RackTopology, TopologyError> {
        let num_channels = wavelengths.unwrap_or(self.wavelengths);
        let rate = rate_gbps.unwrap_or(self.rate_gbps);
        let num_nodes = match &self.nodes {
            NodeSpec::Count(n) => *n,
            NodeSpec::Custom(list) => list.len(),
        };
        let mut rack = build_default_rack(num_nodes, num_channels, rate)?;

        let p = &self.power;
        let range = p.dynamic_range.unwrap_or(DEFAULT_CPU.2);
        if !(range > 0.0 && range <= 1.0) {
            return Err(TopologyError::InvalidArgument(format!(
                "dynamic_range must be in (0,1], got {range}"
            )));
        }
        let peaks = [
            p.cpu_peak_w.unwrap_or(DEFAULT_CPU.1),
            p.mem_peak_w.unwrap_or(DEFAULT_MEM.1),
            p.sto_peak_w.unwrap_or(DEFAULT_STO.1),
        ];
        for node in &mut rack.nodes {
            for kind in ResourceKind::ALL {
                let comp = &mut node.components[kind.index()];
                comp.peak_power_w = peaks[kind.index()];
                comp.dynamic_range = range;
                if let NodeSpec::Custom(list) = &self.nodes {
                    let caps = &list[node.id];
                    comp.capacity = match kind {
                        ResourceKind::Cpu => caps.cpu_ghz,
                        ResourceKind::Mem => caps.mem_gb,
                        ResourceKind::Sto => caps.sto_gb,
                    };
                }
            }
        }
        if let Some(v) = p.tor_idle_w {
            rack.tor_idle_w = v;
        }
        if let Some(v) = p.tor_epb {
            rack.tor_epb_j_per_bit = v;
        }
        if let Some(v) = p.nch_epb {
            rack.nch_epb_j_per_bit = v;
        }
        if let Some(v) = p.onboard_epb {
            rack.onboard_epb_j_per_bit = v;
        }
        let violations = rack.validate();
        if let Some(v) = violations.first() {
            return Err(TopologyError::InvalidArgument(format!(
                "rack config produces invalid topology: {v}"
            )));
        }
        Ok(rack)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_rack_matches_reference_parameters() {
        let rack = build_default_rack(9, 2, 50.0).unwrap();
        assert_eq!(rack.num_nodes(), 9);
        assert_eq!(rack.components().count(), 27);
        assert_eq!(rack.plan.num_channels, 2);
        assert_eq!(rack.plan.partition_a.iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(rack.plan.partition_b.iter().copied().collect::<Vec<_>>(), vec![1]);
        let cpu = rack.component(0, ResourceKind::Cpu);
        assert_eq!((cpu.capacity, cpu.peak_power_w, cpu.dynamic_range), (3.6, 130.0, 0.30));
        let mem = rack.component(0, ResourceKind::Mem);
        assert_eq!((mem.capacity, mem.peak_power_w, mem.dynamic_range), (32.0, 11.85, 0.30));
        let sto = rack.component(0, ResourceKind::Sto);
        assert_eq!((sto.capacity, sto.peak_power_w, sto.dynamic_range), (320.0, 6.19, 0.30));
        assert_eq!(rack.tor_idle_w, 312.0);
        assert_eq!(rack.tor_epb_j_per_bit, 0.028e-12);
        assert_eq!(rack.nch_epb_j_per_bit, 1.4e-9);
        assert_eq!(rack.onboard_epb_j_per_bit, 0.1e-12);
        assert_eq!(rack.tor_id(), 9);
    }

    #[test]
    fn single_node_rack_is_valid() {
        let rack = build_default_rack(1, 2, 50.0).unwrap();
        assert_eq!(rack.num_nodes(), 1);
        assert!(rack.plan.partition_a.contains(&0));
        assert!(rack.plan.partition_b.contains(&1));
        assert!(rack.validate().is_empty());
    }

    #[test]
    fn odd_channel_count_is_rejected() {
        let err = build_default_rack(9, 3, 50.0).unwrap_err();
        assert!(matches!(err, TopologyError::InvalidPlan(_)));
    }

    #[test]
    fn non_positive_sizes_are_rejected() {
        assert!(matches!(
            build_default_rack(0, 2, 50.0),
            Err(TopologyError::InvalidArgument(_))
        ));
        assert!(matches!(
            build_default_rack(1, 2, 0.0),
            Err(TopologyError::InvalidArgument(_))
        ));
        assert!(matches!(
            build_default_rack(1, 0, 50.0),
            Err(TopologyError::InvalidPlan(_))
        ));
    }

    #[test]
    fn validate_reports_duplicated_channel() {
        let mut rack = build_default_rack(2, 4, 50.0).unwrap();
        rack.plan.partition_b.remove(&1);
        rack.plan.partition_b.insert(0);
        let violations = rack.validate();
        assert!(violations.contains(&Violation::ChannelInBothPartitions { channel: 0 }));
        assert!(violations.contains(&Violation::ChannelUnassigned { channel: 1 }));
    }

    #[test]
    fn validate_reports_zero_dynamic_range() {
        let mut rack = build_default_rack(2, 2, 50.0).unwrap();
        rack.nodes[1].components[ResourceKind::Cpu.index()].dynamic_range = 0.0;
        let violations = rack.validate();
        assert_eq!(
            violations,
            vec![Violation::DynamicRangeOutOfBounds {
                node: 1,
                kind: ResourceKind::Cpu,
                value: 0.0
            }]
        );
        let msg = violations[0].to_string();
        assert!(msg.contains("node 1"), "violation must name the component: {msg}");
        assert!(msg.contains("CPU"), "violation must name the component: {msg}");
    }

    #[test]
    fn node_capacity_reproduces_capacity_table() {
        // (wavelengths, rate) -> Tbps for both published rate rows.
        let cells = [
            (2, 50.0, 0.1),
            (4, 50.0, 0.2),
            (6, 50.0, 0.3),
            (8, 50.0, 0.4),
            (10, 50.0, 0.5),
            (2, 100.0, 0.2),
            (4, 100.0, 0.4),
            (6, 100.0, 0.6),
            (8, 100.0, 0.8),
            (10, 100.0, 1.0),
        ];
        for (w, r, tbps) in cells {
            let plan = WavelengthPlan::new(w, r).unwrap();
            assert_eq!(plan.node_capacity_gbps(), w as f64 * r);
            assert_eq!(plan.node_capacity_gbps() / 1000.0, tbps, "W={w} R={r}");
        }
    }

    #[test]
    fn rack_config_round_trips_defaults_and_overrides() {
        let text = r#"{
            "nodes": 3,
            "wavelengths": 4,
            "rate_gbps": 100,
            "power": {"nch_epb": "1.4e-12", "tor_idle_w": 0.0}
        }"#;
        let cfg = RackConfig::from_json(text).unwrap();
        let rack = cfg.build(None, None).unwrap();
        assert_eq!(rack.num_nodes(), 3);
        assert_eq!(rack.plan.num_channels, 4);
        assert_eq!(rack.nch_epb_j_per_bit, 1.4e-12);
        assert_eq!(rack.tor_idle_w, 0.0);
        // CLI-style overrides take precedence over the file.
        let rack = cfg.build(Some(8), Some(50.0)).unwrap();
        assert_eq!(rack.plan.num_channels, 8);
        assert_eq!(rack.plan.channel_rate_gbps, 50.0);
    }

    #[test]
    fn rack_config_accepts_per_node_capacities() {
        let text = r#"{
            "nodes": [
                {"cpu_ghz": 3.6, "mem_gb": 32, "sto_gb": 320},
                {"cpu_ghz": 7.2, "mem_gb": 64, "sto_gb": 640}
            ],
            "wavelengths": 2,
            "rate_gbps": 50
        }"#;
        let rack = RackConfig::from_json(text).unwrap().build(None, None).unwrap();
        assert_eq!(rack.num_nodes(), 2);
        assert_eq!(rack.component(1, ResourceKind::Cpu).capacity, 7.2);
        assert_eq!(rack.component(1, ResourceKind::Sto).capacity, 640.0);
        assert_eq!(rack.component(0, ResourceKind::Mem).capacity, 32.0);
    }

    #[test]
    fn rack_config_rejects_unknown_fields() {
        let text = r#"{"nodes": 3, "wavelengths": 2, "rate_gbps": 50, "bogus": 1}"#;
        let err = RackConfig::from_json(text).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    proptest! {
        #[test]
        fn constructed_racks_always_validate(
            nodes in 1usize..12,
            half_channels in 1usize..8,
            rate in prop::sample::select(vec![25.0, 50.0, 100.0, 400.0]),
        ) {
            let rack = build_default_rack(nodes, 2 * half_channels, rate).unwrap();
            prop_assert!(rack.validate().is_empty());
        }

        #[test]
        fn partitions_are_disjoint_and_exhaustive(half_channels in 1usize..32) {
            let plan = WavelengthPlan::new(2 * half_channels, 50.0).unwrap();
            prop_assert_eq!(plan.partition_a.len(), half_channels);
            prop_assert_eq!(plan.partition_b.len(), half_channels);
            prop_assert!(plan.partition_a.is_disjoint(&plan.partition_b));
            let union: std::collections::BTreeSet<_> =
                plan.partition_a.union(&plan.partition_b).copied().collect();
            prop_assert_eq!(union, (0..2 * half_channels).collect::<std::collections::BTreeSet<_>>());
        }

        #[test]
        fn node_capacity_is_channel_count_times_rate(
            half_channels in 1usize..64,
            rate in 1.0f64..1000.0,
        ) {
            let plan = WavelengthPlan::new(2 * half_channels, rate).unwrap();
            prop_assert_eq!(plan.node_capacity_gbps(), (2 * half_channels) as f64 * rate);
        }
    }
}
