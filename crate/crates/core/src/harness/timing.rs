//! Wall-clock cost of placing a single file with the replica-aware policy.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::placement::place_replica_aware;
use crate::seed;
use crate::workload::{generate_scenario, ExperimentConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingRow {
    pub n_devices: usize,
    pub repeats: usize,
    pub mean_ms: f64,
    pub std_ms: f64,
}

/// For each network size, places one file on `repeats` fresh scenarios and
/// reports the mean and sample standard deviation of the placement time.
/// Scenario generation is not timed.
pub fn time_placement(
    n_devices_list: &[usize],
    repeats: usize,
    base_config: &ExperimentConfig,
    seed: u64,
) -> Result<Vec<TimingRow>> {
    if repeats == 0 {
        return Err(Error::Parameter("timing needs at least one repeat".into()));
    }
    if let Some(n) = n_devices_list.iter().find(|&&n| n < 10) {
        return Err(Error::Parameter(format!("timing sizes must be at least 10 devices, got {n}")));
    }
    let mut out = Vec::with_capacity(n_devices_list.len());
    for &n_devices in n_devices_list {
        let config = ExperimentConfig {
            n_devices,
            n_files: 1,
            ..base_config.clone()
        };
        let mut samples = Vec::with_capacity(repeats);
        for r in 0..repeats {
            let scenario = generate_scenario(&config, seed::derive(seed, &[n_devices as u64, r as u64]))?;
            let start = Instant::now();
            let placed = place_replica_aware(&scenario)?;
            samples.push(start.elapsed().as_secs_f64() * 1e3);
            drop(placed);
        }
        let mean_ms = samples.iter().sum::<f64>() / repeats as f64;
        let std_ms = if repeats < 2 {
            0.0
        } else {
            (samples.iter().map(|s| (s - mean_ms).powi(2)).sum::<f64>() / (repeats - 1) as f64).sqrt()
        };
        out.push(TimingRow {
            n_devices,
            repeats,
            mean_ms,
            std_ms,
        });
    }
    Ok(out)
}
