use std::collections::BTreeMap;

use super::{DeviceId, FogNetwork, LinkId};
use crate::analysis::hop_distances;
use crate::error::{Error, Result};

/// One non-negative weight per link, indexed by [`LinkId`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights(Vec<f64>);

impl EdgeWeights {
    pub fn uniform(net: &FogNetwork, weight: f64) -> Self {
        EdgeWeights(vec![weight; net.n_links()])
    }

    pub fn from_vec(weights: Vec<f64>) -> Self {
        EdgeWeights(weights)
    }

    #[inline]
    pub fn get(&self, link: LinkId) -> f64 {
        self.0[link]
    }

    pub fn between(&self, net: &FogNetwork, u: DeviceId, v: DeviceId) -> Option<f64> {
        net.link_between(u, v).map(|l| self.0[l])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        EdgeWeights(self.0.iter().map(|w| w * factor).collect())
    }

    pub fn add(&self, other: &EdgeWeights) -> Self {
        EdgeWeights(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Weights each up link by its distance to a file's sensors.
///
/// A link's distance to one gateway is the smaller hop count of its two
/// endpoints; the weight sums that over `sensor_gateways`, counted with
/// multiplicity. Links touching a down device get weight 0 and are ignored
/// by the graph algorithms.
pub fn weight_by_hop_count(net: &FogNetwork, sensor_gateways: &[DeviceId]) -> Result<EdgeWeights> {
    let mut multiplicity: BTreeMap<DeviceId, u32> = BTreeMap::new();
    for &g in sensor_gateways {
        net.require_up(g)?;
        *multiplicity.entry(g).or_default() += 1;
    }
    let mut weights = vec![0.0; net.n_links()];
    for (&g, &count) in &multiplicity {
        let dist = hop_distances(net, g);
        for (id, link) in net.links().iter().enumerate() {
            if !(net.is_up(link.a) && net.is_up(link.b)) {
                continue;
            }
            let (Some(da), Some(db)) = (dist[link.a.index()], dist[link.b.index()]) else {
                return Err(Error::Unreachable(g));
            };
            weights[id] += f64::from(count) * f64::from(da.min(db));
        }
    }
    Ok(EdgeWeights(weights))
}
