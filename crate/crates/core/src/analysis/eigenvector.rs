//! Weighted eigenvector centrality by power iteration.

use super::CentralityMap;
use crate::error::{Error, Result};
use crate::network::{EdgeWeights, FogNetwork};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Stop once no score moves by more than this between iterations.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tolerance: 1e-8,
            max_iterations: 1000,
        }
    }
}

/// Link weights are distances; the affinity matrix uses `1 / (1 + w)`.
#[inline]
pub(crate) fn affinity(weight: f64) -> f64 {
    1.0 / (1.0 + weight)
}

pub fn eigenvector_centrality(net: &FogNetwork, edge_weights: &EdgeWeights) -> Result<CentralityMap> {
    eigenvector_centrality_with(net, edge_weights, PowerIteration::default())
}

/// Principal eigenvector of the affinity matrix over the up subgraph,
/// scaled to unit maximum.
///
/// Iterates `x ← (A + I)·x`, which has the same principal eigenvector as `A`
/// but does not oscillate on bipartite graphs.
pub fn eigenvector_centrality_with(
    net: &FogNetwork,
    edge_weights: &EdgeWeights,
    params: PowerIteration,
) -> Result<CentralityMap> {
    if let Some(w) = edge_weights
        .as_slice()
        .iter()
        .find(|w| !(w.is_finite() && **w >= 0.0))
    {
        return Err(Error::Parameter(format!("edge weight {w} is not a finite non-negative value")));
    }
    if !net.is_connected() {
        return Err(Error::Topology("eigenvector centrality needs a connected up subgraph".into()));
    }
    let n = net.n_devices();
    let up: Vec<usize> = net.up_devices().map(|d| d.index()).collect();
    if up.is_empty() {
        return Ok(CentralityMap(vec![0.0; n]));
    }

    // (neighbor, affinity) per up device
    let adjacency: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| {
            net.up_neighbors(crate::network::DeviceId(i))
                .map(|(v, l)| (v.index(), affinity(edge_weights.get(l))))
                .collect()
        })
        .collect();

    let mut x = vec![0.0; n];
    for &i in &up {
        x[i] = 1.0;
    }
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..params.max_iterations {
        for &i in &up {
            next[i] = x[i] + adjacency[i].iter().map(|&(j, a)| a * x[j]).sum::<f64>();
        }
        let max = up.iter().map(|&i| next[i]).fold(0.0, f64::max);
        residual = 0.0;
        for &i in &up {
            next[i] /= max;
            residual = f64::max(residual, (next[i] - x[i]).abs());
        }
        std::mem::swap(&mut x, &mut next);
        if residual < params.tolerance {
            return Ok(CentralityMap(x));
        }
    }
    Err(Error::NoConvergence {
        iterations: params.max_iterations,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{DeviceAttrs, DeviceId, LinkAttrs};

    fn build(n: usize, edges: &[(usize, usize)]) -> FogNetwork {
        FogNetwork::build(
            vec![DeviceAttrs::fog(1); n],
            edges
                .iter()
                .map(|&(u, v)| (DeviceId(u), DeviceId(v), LinkAttrs::default())),
        )
        .unwrap()
    }

    #[test]
    fn star_center_scores_one() {
        let net = build(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let ec = eigenvector_centrality(&net, &EdgeWeights::uniform(&net, 0.0)).unwrap();
        assert_eq!(ec.get(DeviceId(0)), 1.0);
        for leaf in 1..5 {
            assert!(ec.get(DeviceId(leaf)) < 1.0);
        }
    }

    #[test]
    fn ring_is_uniform() {
        let edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        let net = build(8, &edges);
        let ec = eigenvector_centrality(&net, &EdgeWeights::uniform(&net, 3.0)).unwrap();
        for &x in ec.as_slice() {
            assert!((x - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn bipartite_path_converges() {
        let net = build(4, &[(0, 1), (1, 2), (2, 3)]);
        let ec = eigenvector_centrality(&net, &EdgeWeights::uniform(&net, 0.0)).unwrap();
        assert!((ec.get(DeviceId(1)) - 1.0).abs() < 1e-9);
        assert!((ec.get(DeviceId(0)) - ec.get(DeviceId(3))).abs() < 1e-9);
    }

    #[test]
    fn iteration_cap_reports_count() {
        let net = build(4, &[(0, 1), (1, 2), (2, 3)]);
        let params = PowerIteration {
            tolerance: 1e-15,
            max_iterations: 2,
        };
        let err = eigenvector_centrality_with(&net, &EdgeWeights::uniform(&net, 0.0), params).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 2, .. }));
    }

    #[test]
    fn rejects_negative_weights_and_disconnected_graphs() {
        let net = build(3, &[(0, 1), (1, 2)]);
        let bad = EdgeWeights::from_vec(vec![1.0, -1.0]);
        assert!(eigenvector_centrality(&net, &bad).is_err());
        let split = build(4, &[(0, 1), (2, 3)]);
        assert!(eigenvector_centrality(&split, &EdgeWeights::uniform(&split, 1.0)).is_err());
    }
}
