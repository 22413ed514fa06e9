use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::Result;
use crate::network::{DeviceId, FogNetwork};

/// BFS hop counts from `src` over the up subgraph. `None` marks unreachable
/// (or down) devices; a down `src` reaches nothing.
pub fn hop_distances(net: &FogNetwork, src: DeviceId) -> Vec<Option<u32>> {
    let mut dist = vec![None; net.n_devices()];
    if !net.is_up(src) {
        return dist;
    }
    dist[src.index()] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u.index()].unwrap();
        for (v, _) in net.up_neighbors(u) {
            if dist[v.index()].is_none() {
                dist[v.index()] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Minimum number of links between two up devices; `Ok(None)` when no path
/// exists.
pub fn shortest_hops(net: &FogNetwork, src: DeviceId, dst: DeviceId) -> Result<Option<u32>> {
    net.require_up(src)?;
    net.require_up(dst)?;
    Ok(hop_distances(net, src)[dst.index()])
}

/// A shortest hop path `src ..= dst`, or `None` if unreachable. Among equal
/// length paths, each step moves to the lowest-id neighbor that is one hop
/// closer to `dst`.
pub fn hop_path(net: &FogNetwork, src: DeviceId, dst: DeviceId) -> Result<Option<Vec<DeviceId>>> {
    net.require_up(src)?;
    net.require_up(dst)?;
    let to_dst = hop_distances(net, dst);
    let Some(mut remaining) = to_dst[src.index()] else {
        return Ok(None);
    };
    let mut path = vec![src];
    let mut at = src;
    while remaining > 0 {
        at = net
            .up_neighbors(at)
            .map(|(v, _)| v)
            .find(|v| to_dst[v.index()] == Some(remaining - 1))
            .expect("BFS layer has a predecessor");
        remaining -= 1;
        path.push(at);
    }
    Ok(Some(path))
}

#[derive(PartialEq)]
struct Frontier {
    cost: f64,
    node: DeviceId,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra over per-link latency `propagation + packet_bytes / bandwidth`.
pub fn latency_distances(net: &FogNetwork, src: DeviceId, packet_bytes: f64) -> Vec<Option<f64>> {
    let mut dist: Vec<Option<f64>> = vec![None; net.n_devices()];
    if !net.is_up(src) {
        return dist;
    }
    let mut done = vec![false; net.n_devices()];
    dist[src.index()] = Some(0.0);
    let mut heap = BinaryHeap::from([Frontier { cost: 0.0, node: src }]);
    while let Some(Frontier { cost, node }) = heap.pop() {
        if done[node.index()] {
            continue;
        }
        done[node.index()] = true;
        for (v, link) in net.up_neighbors(node) {
            let next = cost + net.link(link).attrs.latency_ms(packet_bytes);
            if dist[v.index()].is_none_or(|d| next < d) {
                dist[v.index()] = Some(next);
                heap.push(Frontier { cost: next, node: v });
            }
        }
    }
    dist
}

/// Minimum total latency (ms) between two up devices for one packet.
pub fn shortest_latency(
    net: &FogNetwork,
    src: DeviceId,
    dst: DeviceId,
    packet_bytes: f64,
) -> Result<Option<f64>> {
    net.require_up(src)?;
    net.require_up(dst)?;
    Ok(latency_distances(net, src, packet_bytes)[dst.index()])
}
