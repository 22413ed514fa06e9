//! Graph algorithms used by the placement policies.

mod betweenness;
mod eigenvector;
mod partition;
mod paths;

pub use betweenness::{betweenness_all, betweenness_subset};
pub use eigenvector::{eigenvector_centrality, eigenvector_centrality_with, PowerIteration};
pub use partition::{cut_cost, kernighan_lin_bipartition, Bipartition, Side};
pub use paths::{
    hop_distances, hop_path, latency_distances, shortest_hops, shortest_latency,
};

use crate::network::DeviceId;

/// One score per device, indexed by id. Down devices score 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityMap(Vec<f64>);

impl CentralityMap {
    pub fn from_vec(values: Vec<f64>) -> Self {
        CentralityMap(values)
    }

    #[inline]
    pub fn get(&self, id: DeviceId) -> f64 {
        self.0[id.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `candidates` sorted by descending score, ties by ascending id.
    pub fn rank(&self, candidates: impl IntoIterator<Item = DeviceId>) -> Vec<DeviceId> {
        let mut v: Vec<DeviceId> = candidates.into_iter().collect();
        v.sort_by(|&a, &b| self.get(b).total_cmp(&self.get(a)).then(a.cmp(&b)));
        v
    }
}
