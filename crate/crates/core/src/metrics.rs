//! Availability, latency and message-count metrics of a placement.
//!
//! Every metric takes the network to evaluate on explicitly, so the same
//! placement can be scored on the healthy network and on failure masks.
//! Unreachable pairs are left out of latency and message sums and counted
//! in `excluded`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{hop_distances, latency_distances};
use crate::error::{Error, Result};
use crate::network::{DeviceId, FogNetwork};
use crate::placement::PlacementMatrix;
use crate::seed;
use crate::workload::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct FailureMask {
    /// Sorted ascending.
    pub down_devices: Vec<DeviceId>,
    pub fraction: f64,
    pub seed: u64,
}

impl FailureMask {
    /// Draws `floor(fraction · n)` failed devices uniformly among the `n`
    /// non-cloud devices. The cloud never fails.
    pub fn sample(network: &FogNetwork, fraction: f64, seed: u64) -> Result<Self> {
        if !(0.0..1.0).contains(&fraction) {
            return Err(Error::Parameter(format!("failure fraction {fraction} outside [0, 1)")));
        }
        let pool: Vec<DeviceId> = network.fog_devices().collect();
        let count = (fraction * pool.len() as f64).floor() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut down_devices: Vec<DeviceId> = pool.choose_multiple(&mut rng, count).copied().collect();
        down_devices.sort_unstable();
        Ok(FailureMask {
            down_devices,
            fraction,
            seed,
        })
    }

    pub fn apply(&self, network: &FogNetwork) -> Result<FogNetwork> {
        network.with_down(&self.down_devices)
    }
}

/// `network` with a random `fraction` of its non-cloud devices down.
pub fn inject_failures(network: &FogNetwork, fraction: f64, seed: u64) -> Result<FogNetwork> {
    FailureMask::sample(network, fraction, seed)?.apply(network)
}

/// `count` masks with seeds derived from `seed`.
pub fn failure_masks(network: &FogNetwork, fraction: f64, count: usize, seed: u64) -> Result<Vec<FailureMask>> {
    (0..count as u64)
        .map(|i| FailureMask::sample(network, fraction, seed::derive(seed, &[i])))
        .collect()
}

/// Lazily computed BFS hop tables, one per source device.
struct HopCache<'a> {
    net: &'a FogNetwork,
    tables: HashMap<DeviceId, Vec<Option<u32>>>,
}

impl<'a> HopCache<'a> {
    fn new(net: &'a FogNetwork) -> Self {
        HopCache {
            net,
            tables: HashMap::new(),
        }
    }

    fn from(&mut self, src: DeviceId) -> &[Option<u32>] {
        let net = self.net;
        self.tables.entry(src).or_insert_with(|| hop_distances(net, src))
    }
}

fn share(hits: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        hits as f64 / total as f64
    }
}

/// Share of files with at least one replica reachable from the cloud.
pub fn availability_read(scenario: &Scenario, placement: &PlacementMatrix, network: &FogNetwork) -> f64 {
    let dist = hop_distances(network, scenario.cloud());
    let ok = placement
        .assignments
        .iter()
        .filter(|reps| reps.iter().any(|r| dist[r.index()].is_some()))
        .count();
    share(ok, placement.n_files())
}

/// Share of files for which every sensor gateway reaches at least one
/// replica. A single cut-off sensor makes the whole file unwritable.
pub fn availability_write(scenario: &Scenario, placement: &PlacementMatrix, network: &FogNetwork) -> f64 {
    write_reach(scenario, placement, network, true)
}

/// Relaxed variant: some sensor of the file reaches some replica.
pub fn availability_write_any_sensor(
    scenario: &Scenario,
    placement: &PlacementMatrix,
    network: &FogNetwork,
) -> f64 {
    write_reach(scenario, placement, network, false)
}

fn write_reach(scenario: &Scenario, placement: &PlacementMatrix, network: &FogNetwork, all: bool) -> f64 {
    let mut cache = HopCache::new(network);
    let mut ok = 0;
    for (f, reps) in placement.assignments.iter().enumerate() {
        let mut reach = scenario.files[f]
            .sensor_gateways
            .iter()
            .map(|&g| {
                let d = cache.from(g);
                reps.iter().any(|r| d[r.index()].is_some())
            })
            .collect::<Vec<_>>()
            .into_iter();
        let good = if all { reach.all(|x| x) } else { reach.any(|x| x) };
        if good {
            ok += 1;
        }
    }
    share(ok, placement.n_files())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanLatency {
    /// Mean over the included items; NaN when everything was excluded.
    pub mean_ms: f64,
    pub included: usize,
    pub excluded: usize,
}

fn mean(sum: f64, included: usize, excluded: usize) -> MeanLatency {
    MeanLatency {
        mean_ms: if included == 0 { f64::NAN } else { sum / included as f64 },
        included,
        excluded,
    }
}

/// Mean over files of the lowest cloud-to-replica latency, using each
/// file's read packet size.
pub fn latency_read(scenario: &Scenario, placement: &PlacementMatrix, network: &FogNetwork) -> MeanLatency {
    let cloud = scenario.cloud();
    let (mut sum, mut inc, mut exc) = (0.0, 0, 0);
    for (f, reps) in placement.assignments.iter().enumerate() {
        let dist = latency_distances(network, cloud, scenario.files[f].read_packet_bytes as f64);
        match reps.iter().filter_map(|r| dist[r.index()]).min_by(f64::total_cmp) {
            Some(best) => {
                sum += best;
                inc += 1;
            }
            None => exc += 1,
        }
    }
    mean(sum, inc, exc)
}

/// Per (file, sensor) pair, the lowest and highest gateway-to-replica
/// latency with the file's write packet size; both averaged over all pairs.
/// Unreachable replicas are ignored; a pair reaching none is excluded.
pub fn latency_write_extrema(
    scenario: &Scenario,
    placement: &PlacementMatrix,
    network: &FogNetwork,
) -> (MeanLatency, MeanLatency) {
    let (mut lo, mut hi, mut inc, mut exc) = (0.0, 0.0, 0, 0);
    for (f, reps) in placement.assignments.iter().enumerate() {
        let file = &scenario.files[f];
        for &g in &file.sensor_gateways {
            let dist = latency_distances(network, g, file.write_packet_bytes as f64);
            let reached: Vec<f64> = reps.iter().filter_map(|r| dist[r.index()]).collect();
            if reached.is_empty() {
                exc += 1;
                continue;
            }
            lo += reached.iter().copied().fold(f64::INFINITY, f64::min);
            hi += reached.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            inc += 1;
        }
    }
    (mean(lo, inc, exc), mean(hi, inc, exc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MessageCount {
    pub messages: u64,
    /// Unreachable pairs left out of the sum.
    pub excluded: usize,
}

/// Links crossed when every sensor writes to every replica:
/// Σ files Σ replicas Σ sensors hops(gateway, replica).
pub fn messages_write(scenario: &Scenario, placement: &PlacementMatrix, network: &FogNetwork) -> MessageCount {
    let mut cache = HopCache::new(network);
    let (mut messages, mut excluded) = (0u64, 0);
    for (f, reps) in placement.assignments.iter().enumerate() {
        for &g in &scenario.files[f].sensor_gateways {
            let d = cache.from(g);
            for r in reps {
                match d[r.index()] {
                    Some(h) => messages += u64::from(h),
                    None => excluded += 1,
                }
            }
        }
    }
    MessageCount { messages, excluded }
}

/// Links crossed when the cloud reads each file from its nearest replica.
pub fn messages_read(scenario: &Scenario, placement: &PlacementMatrix, network: &FogNetwork) -> MessageCount {
    let dist = hop_distances(network, scenario.cloud());
    let (mut messages, mut excluded) = (0u64, 0);
    for reps in &placement.assignments {
        match reps.iter().filter_map(|r| dist[r.index()]).min() {
            Some(h) => messages += u64::from(h),
            None => excluded += 1,
        }
    }
    MessageCount { messages, excluded }
}

/// Message counts scaled by request rates (messages per ms). A write event
/// comes from one of the file's sensors, so each file contributes
/// `write_rate · mean over sensors of Σ replicas hops`; reads contribute
/// `read_rate · nearest-replica hops`.
pub fn messages_rate_weighted(
    scenario: &Scenario,
    placement: &PlacementMatrix,
    network: &FogNetwork,
) -> (f64, f64) {
    let mut cache = HopCache::new(network);
    let mut write = 0.0;
    for (f, reps) in placement.assignments.iter().enumerate() {
        let file = &scenario.files[f];
        let total: u64 = file
            .sensor_gateways
            .iter()
            .map(|&g| {
                let d = cache.from(g);
                reps.iter().filter_map(|r| d[r.index()]).map(u64::from).sum::<u64>()
            })
            .sum();
        write += file.write_rate_per_ms * total as f64 / file.sensor_gateways.len() as f64;
    }
    let dist = cache.from(scenario.cloud()).to_vec();
    let read = placement
        .assignments
        .iter()
        .enumerate()
        .filter_map(|(f, reps)| {
            let h = reps.iter().filter_map(|r| dist[r.index()]).min()?;
            Some(scenario.files[f].read_rate_per_ms * f64::from(h))
        })
        .sum();
    (write, read)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub avail_read: f64,
    pub avail_write: f64,
    pub lat_read_ms: f64,
    pub lat_write_min_ms: f64,
    pub lat_write_max_ms: f64,
    pub msgs_write: u64,
    pub msgs_read: u64,
    pub msgs_write_per_ms: f64,
    pub msgs_read_per_ms: f64,
    /// Files or pairs dropped from the healthy-network latency means.
    pub latency_excluded: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: MetricsReport,
    /// `(avail_read, avail_write)` per mask, in mask order.
    pub per_mask: Vec<(f64, f64)>,
}

/// Latency and message metrics on the healthy network; availability as the
/// mean over `masks` (or on the healthy network when there are none).
pub fn evaluate_all(scenario: &Scenario, placement: &PlacementMatrix, masks: &[FailureMask]) -> Result<Evaluation> {
    let healthy = &scenario.network;
    let lat_read = latency_read(scenario, placement, healthy);
    let (lat_lo, lat_hi) = latency_write_extrema(scenario, placement, healthy);
    let (msgs_write_per_ms, msgs_read_per_ms) = messages_rate_weighted(scenario, placement, healthy);

    let per_mask = masks
        .iter()
        .map(|m| {
            let net = m.apply(healthy)?;
            Ok((
                availability_read(scenario, placement, &net),
                availability_write(scenario, placement, &net),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (avail_read, avail_write) = if per_mask.is_empty() {
        (
            availability_read(scenario, placement, healthy),
            availability_write(scenario, placement, healthy),
        )
    } else {
        let k = per_mask.len() as f64;
        (
            per_mask.iter().map(|p| p.0).sum::<f64>() / k,
            per_mask.iter().map(|p| p.1).sum::<f64>() / k,
        )
    };

    Ok(Evaluation {
        report: MetricsReport {
            avail_read,
            avail_write,
            lat_read_ms: lat_read.mean_ms,
            lat_write_min_ms: lat_lo.mean_ms,
            lat_write_max_ms: lat_hi.mean_ms,
            msgs_write: messages_write(scenario, placement, healthy).messages,
            msgs_read: messages_read(scenario, placement, healthy).messages,
            msgs_write_per_ms,
            msgs_read_per_ms,
            latency_excluded: lat_read.excluded + lat_lo.excluded,
        },
        per_mask,
    })
}
