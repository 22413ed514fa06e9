//! Replica placement policies for fog storage domains.
//!
//! The crate models a fog infrastructure as an attributed undirected graph
//! (devices and links), a logical layer of files produced by sensors and read
//! by a single cloud provider, and three placement policies:
//!
//! * [`placement::place_replica_aware`]: three replicas per file, two of them
//!   in opposite Kernighan–Lin partitions of a per-file hop-weighted graph and
//!   the third chosen with cloud-aware subset betweenness.
//! * [`placement::place_single_file`]: one replica on the device with the
//!   highest weighted eigenvector centrality.
//! * [`placement::place_fogstore`]: a greedy shortest-path baseline with a
//!   cross-partition failure-group rule.
//!
//! [`metrics`] scores a placement (availability, latency, message counts) and
//! [`harness`] runs parameter sweeps over generated scenarios.

pub mod analysis;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod network;
pub mod placement;
pub mod seed;
pub mod workload;

pub use error::{Error, Result};
pub use network::{DeviceId, DeviceRole, FogNetwork, LinkAttrs};
pub use placement::{PlacementMatrix, Policy};
pub use workload::{ExperimentConfig, FileSpec, Scenario};
