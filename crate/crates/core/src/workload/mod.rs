//! Logical layer: files, their sensors and the cloud consumer, plus random
//! scenario generation.

mod config;
mod format;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use config::{ExperimentConfig, ValueRange};
pub use format::{parse_scenario, write_scenario};

use crate::error::{Error, Result};
use crate::network::{
    assign_gateways, attach_cloud_with, barabasi_albert_edges, DeviceAttrs, DeviceId, DeviceRole,
    FogNetwork, LinkAttrs,
};

pub const REPLICATION_FACTOR: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct FileSpec {
    pub file_id: usize,
    /// Storage units provisioned on every device that holds a replica.
    pub storage_req: u64,
    /// Aggregate over the file's sensors.
    pub write_rate_per_ms: f64,
    pub write_packet_bytes: u64,
    pub read_rate_per_ms: f64,
    pub read_packet_bytes: u64,
    /// Gateway of each sensor producing this file, ascending. A gateway
    /// hosts at most one sensor per file.
    pub sensor_gateways: Vec<DeviceId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DataConsumer {
    pub consumer_device: DeviceId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub network: FogNetwork,
    pub files: Vec<FileSpec>,
    pub consumer: DataConsumer,
    pub rng_seed: u64,
}

impl Scenario {
    /// Checks the static mapping: one cloud consumer, dense file ids, every
    /// file with at least one sensor and every sensor on a gateway.
    pub fn new(network: FogNetwork, files: Vec<FileSpec>, rng_seed: u64) -> Result<Self> {
        let cloud = network
            .cloud()
            .ok_or_else(|| Error::Topology("scenario network has no cloud device".into()))?;
        for (i, f) in files.iter().enumerate() {
            if f.file_id != i {
                return Err(Error::Parameter(format!("file at position {i} has id {}", f.file_id)));
            }
            if f.storage_req == 0 {
                return Err(Error::Parameter(format!("file {i} has zero storage requirement")));
            }
            if f.sensor_gateways.is_empty() {
                return Err(Error::Parameter(format!("file {i} has no sensors")));
            }
            if f.write_packet_bytes == 0 || f.read_packet_bytes == 0 {
                return Err(Error::Parameter(format!("file {i} has an empty packet size")));
            }
            for &g in &f.sensor_gateways {
                if network.device(g)?.role != DeviceRole::Gateway {
                    return Err(Error::Parameter(format!("file {i}: sensor device {g} is not a gateway")));
                }
            }
            if f.sensor_gateways.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parameter(format!(
                    "file {i}: sensor gateways must be strictly ascending"
                )));
            }
        }
        Ok(Scenario {
            network,
            files,
            consumer: DataConsumer {
                consumer_device: cloud,
            },
            rng_seed,
        })
    }

    pub fn cloud(&self) -> DeviceId {
        self.consumer.consumer_device
    }

    /// File indices by descending write rate, ties by id.
    pub fn files_by_write_rate(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.files.len()).collect();
        order.sort_by(|&a, &b| {
            self.files[b]
                .write_rate_per_ms
                .total_cmp(&self.files[a].write_rate_per_ms)
                .then(a.cmp(&b))
        });
        order
    }

    pub fn total_storage_demand(&self) -> u64 {
        self.files
            .iter()
            .map(|f| f.storage_req * REPLICATION_FACTOR as u64)
            .sum()
    }

    /// Total capacity of every device except the cloud.
    pub fn total_fog_capacity(&self) -> u64 {
        self.network
            .fog_devices()
            .map(|d| self.network.capacity(d))
            .sum()
    }

    /// Non-fatal generation notes (demand above fog capacity spills to the
    /// cloud during placement).
    pub fn warnings(&self) -> Vec<String> {
        let (demand, capacity) = (self.total_storage_demand(), self.total_fog_capacity());
        if demand > capacity {
            vec![format!(
                "replica storage demand {demand} exceeds fog capacity {capacity}; the cloud absorbs the overflow"
            )]
        } else {
            Vec::new()
        }
    }
}

/// Replica storage demand over fog capacity (cloud excluded).
pub fn storage_usage_ratio(scenario: &Scenario) -> Result<f64> {
    let capacity = scenario.total_fog_capacity();
    if capacity == 0 {
        return Err(Error::Parameter("fog devices offer zero storage capacity".into()));
    }
    Ok(scenario.total_storage_demand() as f64 / capacity as f64)
}

fn draw_f<R: Rng>(rng: &mut R, r: ValueRange<f64>) -> f64 {
    if r.min == r.max {
        r.min
    } else {
        rng.gen_range(r.min..=r.max)
    }
}

fn draw_u<R: Rng>(rng: &mut R, r: ValueRange<u64>) -> u64 {
    rng.gen_range(r.min..=r.max)
}

fn draw_link<R: Rng>(rng: &mut R, config: &ExperimentConfig) -> LinkAttrs {
    let propagation_ms = draw_f(rng, config.propagation_ms);
    let bandwidth = draw_f(rng, config.bandwidth_bytes_per_ms);
    LinkAttrs::new(propagation_ms, bandwidth)
}

/// Builds one random scenario: a Barabási–Albert fog network with the
/// lowest-betweenness devices as gateways, a cloud attached to the
/// highest-betweenness devices, and `n_files` files whose sensors attach to
/// each gateway independently with a per-file popularity drawn from
/// `(0, snsPopularity]`.
pub fn generate_scenario(config: &ExperimentConfig, seed: u64) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let edges = barabasi_albert_edges(config.n_devices, config.attach_m, &mut rng)?;
    let devices: Vec<DeviceAttrs> = (0..config.n_devices)
        .map(|_| DeviceAttrs::fog(draw_u(&mut rng, config.device_capacity)))
        .collect();
    let links: Vec<_> = edges
        .into_iter()
        .map(|(u, v)| (DeviceId(u), DeviceId(v), draw_link(&mut rng, config)))
        .collect();
    let network = FogNetwork::build(devices, links)?;
    let network = assign_gateways(&network, config.gateway_fraction)?;
    let uplinks: Vec<LinkAttrs> = (0..config.cloud_uplinks)
        .map(|_| draw_link(&mut rng, config))
        .collect();
    let network = attach_cloud_with(&network, config.cloud_uplinks, |i| uplinks[i])?;

    let gateways = network.gateways();
    if gateways.is_empty() {
        return Err(Error::Parameter(
            "gateway fraction selects no gateway for this network size".into(),
        ));
    }
    let mut files = Vec::with_capacity(config.n_files);
    for file_id in 0..config.n_files {
        let storage_req = draw_u(&mut rng, config.file_storage);
        let write_rate_per_ms = draw_f(&mut rng, config.write_rate_per_ms);
        let write_packet_bytes = draw_u(&mut rng, config.write_packet_bytes);
        let read_rate_per_ms = draw_f(&mut rng, config.read_rate_per_ms);
        let read_packet_bytes = draw_u(&mut rng, config.read_packet_bytes);
        let popularity = match config.sensor_popularity_fixed {
            Some(p) => p,
            // gen::<f64>() is in [0, 1): flip it to (0, 1]
            None => (1.0 - rng.gen::<f64>()) * config.sensor_popularity_max,
        };
        let mut sensor_gateways: Vec<DeviceId> = gateways
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(popularity))
            .collect();
        if sensor_gateways.is_empty() {
            sensor_gateways.push(gateways[rng.gen_range(0..gateways.len())]);
        }
        files.push(FileSpec {
            file_id,
            storage_req,
            write_rate_per_ms,
            write_packet_bytes,
            read_rate_per_ms,
            read_packet_bytes,
            sensor_gateways,
        });
    }
    Scenario::new(network, files, seed)
}
