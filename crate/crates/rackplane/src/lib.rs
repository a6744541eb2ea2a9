//! Modeling and optimization toolkit for rack-scale composable
//! infrastructure interconnected by a passive broadcast-and-select WDM
//! optical backplane.
//!
//! The crate models a rack of disaggregated CPU/memory/storage nodes behind
//! a shared wavelength pool, places application demands onto components,
//! assigns wavelength channels to the resulting inter-node flows, and
//! minimizes a weighted sum of network power, compute power, rejected
//! applications and active wavelengths.

pub mod numfmt;
pub mod placement;
pub mod power;
pub mod rwa;
pub mod solver;
pub mod sweep;
pub mod topology;
pub mod workload;

pub use placement::Decision;
pub use power::{ObjectiveBreakdown, SolverWeights};
pub use rwa::LogicalNetwork;
pub use solver::{brute_force, evaluate, solve_exact, solve_greedy, Instance, Solution};
pub use topology::{build_default_rack, RackConfig, RackTopology};
pub use workload::{generate_apps, Application};
