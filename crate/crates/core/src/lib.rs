//! Outage analysis for a heterogeneous aerial-to-satellite uplink.
//!
//! Two UAV groups transmit to one satellite over shared FDMA channels:
//! group A1 is a binomial point process in a ball, group A2 a Matérn
//! hard-core cluster process (Matérn type-II parents, Poisson-sized uniform
//! clusters around each). Links see shadowed-Rician fading and a sector
//! antenna pattern. The crate computes the uplink outage probability in
//! closed form ([`analysis`]) and by snapshot Monte Carlo ([`montecarlo`]).

pub mod analysis;
pub mod antenna;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod pointprocess;
pub mod scenario;
pub mod units;

#[cfg(test)]
#[path = "../tests/common/mod.rs"]
mod testutil;

pub use analysis::{laplace_interference, outage_curve, outage_probability, Sweep, SweepParam};
pub use antenna::BeamPattern;
pub use channel::{SeriesControl, SrParams};
pub use error::{Error, Result};
pub use geometry::{Ball, Point3};
pub use montecarlo::{estimate_outage, OutageEstimate, SnapshotOptions};
pub use pointprocess::{ClusteredPointSet, MhccpConfig, PointSet};
pub use scenario::{Group, Scenario};
