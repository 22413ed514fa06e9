//! Brute-force reference implementations shared by the integration tests
//! and the acceptance runner. Everything here enumerates simple paths
//! explicitly, so it only suits graphs of a dozen devices or so.

#![allow(dead_code)]

use fog_replica::network::{DeviceAttrs, DeviceId, FogNetwork, LinkAttrs};
use fog_replica::workload::{generate_scenario, ExperimentConfig, Scenario, ValueRange};
use fog_replica::PlacementMatrix;

/// Every simple path from `s` to `t` over up devices, as device lists.
pub fn simple_paths(net: &FogNetwork, s: DeviceId, t: DeviceId) -> Vec<Vec<DeviceId>> {
    fn walk(
        net: &FogNetwork,
        at: DeviceId,
        t: DeviceId,
        stack: &mut Vec<DeviceId>,
        out: &mut Vec<Vec<DeviceId>>,
    ) {
        if at == t {
            out.push(stack.clone());
            return;
        }
        for &(v, _) in net.neighbors(at) {
            if net.is_up(v) && !stack.contains(&v) {
                stack.push(v);
                walk(net, v, t, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    if net.is_up(s) && net.is_up(t) {
        walk(net, s, t, &mut vec![s], &mut out);
    }
    out
}

pub fn hops(net: &FogNetwork, s: DeviceId, t: DeviceId) -> Option<u32> {
    simple_paths(net, s, t).iter().map(|p| p.len() as u32 - 1).min()
}

pub fn path_latency(net: &FogNetwork, path: &[DeviceId], bytes: f64) -> f64 {
    path.windows(2)
        .map(|w| {
            let l = net.link_between(w[0], w[1]).unwrap();
            net.link(l).attrs.latency_ms(bytes)
        })
        .sum()
}

pub fn latency(net: &FogNetwork, s: DeviceId, t: DeviceId, bytes: f64) -> Option<f64> {
    simple_paths(net, s, t)
        .iter()
        .map(|p| path_latency(net, p, bytes))
        .min_by(f64::total_cmp)
}

/// Subset betweenness by enumerating all shortest paths of each ordered
/// pair, normalized by the number of pairs.
pub fn betweenness(net: &FogNetwork, sources: &[DeviceId], targets: &[DeviceId]) -> Vec<f64> {
    let mut score = vec![0.0; net.n_devices()];
    let mut pairs = 0usize;
    for &s in sources {
        for &t in targets {
            if s == t {
                continue;
            }
            pairs += 1;
            let paths = simple_paths(net, s, t);
            let Some(best) = paths.iter().map(|p| p.len()).min() else {
                continue;
            };
            let shortest: Vec<&Vec<DeviceId>> = paths.iter().filter(|p| p.len() == best).collect();
            for p in &shortest {
                for v in &p[1..p.len() - 1] {
                    score[v.index()] += 1.0 / shortest.len() as f64;
                }
            }
        }
    }
    if pairs > 0 {
        for x in &mut score {
            *x /= pairs as f64;
        }
    }
    score
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub avail_read: f64,
    pub avail_write: f64,
    /// `None` when no file is readable.
    pub lat_read_ms: Option<f64>,
    pub lat_write_min_ms: Option<f64>,
    pub lat_write_max_ms: Option<f64>,
    pub msgs_write: u64,
    pub msgs_read: u64,
}

/// Every metric straight from its definition, using path enumeration.
pub fn metrics(scenario: &Scenario, placement: &PlacementMatrix, net: &FogNetwork) -> OracleMetrics {
    let cloud = scenario.cloud();
    let n = placement.assignments.len();
    let mut readable = 0;
    let mut writable = 0;
    let mut read_lat = Vec::new();
    let (mut lo, mut hi) = (Vec::new(), Vec::new());
    let mut msgs_write = 0u64;
    let mut msgs_read = 0u64;
    for (f, reps) in placement.assignments.iter().enumerate() {
        let file = &scenario.files[f];
        if reps.iter().any(|&r| hops(net, cloud, r).is_some()) {
            readable += 1;
        }
        if file
            .sensor_gateways
            .iter()
            .all(|&g| reps.iter().any(|&r| hops(net, g, r).is_some()))
        {
            writable += 1;
        }
        let rl: Vec<f64> = reps
            .iter()
            .filter_map(|&r| latency(net, cloud, r, file.read_packet_bytes as f64))
            .collect();
        if !rl.is_empty() {
            read_lat.push(rl.iter().copied().fold(f64::INFINITY, f64::min));
        }
        if let Some(h) = reps.iter().filter_map(|&r| hops(net, cloud, r)).min() {
            msgs_read += u64::from(h);
        }
        for &g in &file.sensor_gateways {
            let wl: Vec<f64> = reps
                .iter()
                .filter_map(|&r| latency(net, g, r, file.write_packet_bytes as f64))
                .collect();
            if !wl.is_empty() {
                lo.push(wl.iter().copied().fold(f64::INFINITY, f64::min));
                hi.push(wl.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            }
            for &r in reps {
                msgs_write += u64::from(hops(net, g, r).unwrap_or(0));
            }
        }
    }
    let avg = |v: &[f64]| (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64);
    let share = |k: usize| if n == 0 { 1.0 } else { k as f64 / n as f64 };
    OracleMetrics {
        avail_read: share(readable),
        avail_write: share(writable),
        lat_read_ms: avg(&read_lat),
        lat_write_min_ms: avg(&lo),
        lat_write_max_ms: avg(&hi),
        msgs_write,
        msgs_read,
    }
}

/// Relative closeness for latencies; NaN on our side must meet `None`.
pub fn close(ours: f64, oracle: Option<f64>, rel: f64) -> bool {
    match oracle {
        None => ours.is_nan(),
        Some(x) => (ours - x).abs() <= rel * x.abs().max(1e-300),
    }
}

/// A random scenario on at most `max_devices` devices (cloud included) with
/// up to 4 files.
pub fn small_scenario(seed: u64, max_devices: usize) -> Scenario {
    let n_fog = 4 + (seed as usize % (max_devices - 4));
    let config = ExperimentConfig {
        n_devices: n_fog,
        n_files: 1 + (seed as usize / 7) % 4,
        gateway_fraction: 0.4,
        sensor_popularity_max: 0.8,
        device_capacity: ValueRange::new(6, 12),
        file_storage: ValueRange::new(1, 2),
        cloud_uplinks: 1 + (seed as usize % 2),
        ..ExperimentConfig::default()
    };
    generate_scenario(&config, seed).unwrap()
}

/// Builds an unweighted network of plain fog devices.
pub fn fog_graph(n: usize, edges: &[(usize, usize)]) -> FogNetwork {
    FogNetwork::build(
        vec![DeviceAttrs::fog(10); n],
        edges
            .iter()
            .map(|&(u, v)| (DeviceId(u), DeviceId(v), LinkAttrs::default())),
    )
    .unwrap()
}

pub fn ids(v: &[usize]) -> Vec<DeviceId> {
    v.iter().map(|&i| DeviceId(i)).collect()
}

/// The two-gateway example: cloud 1, gateways 4 and 9, devices 0..=9.
/// The hop-weighted graph of gateways {4, 9} has a unique minimum balanced
/// cut {1, 2, 3, 4, 7} | {0, 5, 6, 8, 9} of cost 7.
pub fn worked_example() -> Scenario {
    use fog_replica::workload::FileSpec;
    let mut devices = vec![DeviceAttrs::fog(10); 10];
    devices[1] = DeviceAttrs::cloud();
    devices[4] = DeviceAttrs::gateway(10);
    devices[9] = DeviceAttrs::gateway(10);
    let edges = [
        (4, 3),
        (3, 5),
        (5, 9),
        (9, 8),
        (8, 7),
        (7, 4),
        (2, 3),
        (2, 5),
        (1, 2),
        (0, 5),
        (0, 8),
        (6, 8),
        (6, 9),
        (2, 7),
    ];
    let net = FogNetwork::build(
        devices,
        edges
            .iter()
            .map(|&(u, v)| (DeviceId(u), DeviceId(v), LinkAttrs::new(1.0, 50_000.0))),
    )
    .unwrap();
    let file = FileSpec {
        file_id: 0,
        storage_req: 1,
        write_rate_per_ms: 0.002,
        write_packet_bytes: 1000,
        read_rate_per_ms: 0.001,
        read_packet_bytes: 1000,
        sensor_gateways: ids(&[4, 9]),
    };
    Scenario::new(net, vec![file], 0).unwrap()
}

/// Scenario from explicit devices and edges (1 ms, 50 kB/ms links); each
/// file is `(storage_req, write_rate, sensor gateways)`.
pub fn scenario_from(
    devices: Vec<DeviceAttrs>,
    edges: &[(usize, usize)],
    files: &[(u64, f64, &[usize])],
) -> Scenario {
    use fog_replica::workload::FileSpec;
    let net = FogNetwork::build(
        devices,
        edges
            .iter()
            .map(|&(u, v)| (DeviceId(u), DeviceId(v), LinkAttrs::new(1.0, 50_000.0))),
    )
    .unwrap();
    let files = files
        .iter()
        .enumerate()
        .map(|(i, &(req, rate, gws))| FileSpec {
            file_id: i,
            storage_req: req,
            write_rate_per_ms: rate,
            write_packet_bytes: 1000,
            read_rate_per_ms: 0.001,
            read_packet_bytes: 1000,
            sensor_gateways: ids(gws),
        })
        .collect();
    Scenario::new(net, files, 0).unwrap()
}

/// The worked example with some fog capacities overridden.
pub fn worked_example_with(capacity: &[(usize, u64)], storage_req: u64) -> Scenario {
    let base = worked_example();
    let mut devices = base.network.devices().to_vec();
    for &(d, c) in capacity {
        devices[d].storage_capacity = c;
    }
    let edges: Vec<(usize, usize)> = base
        .network
        .links()
        .iter()
        .map(|l| (l.a.index(), l.b.index()))
        .collect();
    scenario_from(devices, &edges, &[(storage_req, 0.002, &[4, 9])])
}
