//! Parameter sweeps: paired runs of every policy on shared scenarios.

mod report;
mod timing;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use report::{improvement_table, summarize, write_csv, ImprovementRow, SummaryRow, NA};
pub use timing::{time_placement, TimingRow};

use crate::error::{Error, Result};
use crate::metrics::{evaluate_all, failure_masks};
use crate::placement::{check_constraints, place, PlacementMatrix, Policy};
use crate::seed;
use crate::workload::{generate_scenario, storage_usage_ratio, ExperimentConfig, Scenario};

const FOGSTORE_KEY: u64 = 1;
const MASK_KEY: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    /// `(n_files, n_devices)` in output order.
    pub sizes: Vec<(usize, usize)>,
    pub repeats: usize,
    pub base_config: ExperimentConfig,
    pub failure_fraction: f64,
    pub failure_mask_count: usize,
    pub seed: u64,
}

/// The 22 reference sizes: 100 files on 100..=300 devices (step 20), then
/// 200 devices with 100..=200 files (step 10).
pub fn default_sizes() -> Vec<(usize, usize)> {
    let by_devices = (100..=300).step_by(20).map(|d| (100, d));
    let by_files = (100..=200).step_by(10).map(|f| (f, 200));
    by_devices.chain(by_files).collect()
}

impl Default for SweepPlan {
    fn default() -> Self {
        SweepPlan {
            sizes: default_sizes(),
            repeats: 10,
            base_config: ExperimentConfig::default(),
            failure_fraction: 0.1,
            failure_mask_count: 10,
            seed: 0,
        }
    }
}

impl SweepPlan {
    /// Plan over the reference sizes using the config's repeats and seed.
    pub fn from_config(config: ExperimentConfig) -> Self {
        SweepPlan {
            repeats: config.repeats,
            seed: config.rng_seed,
            base_config: config,
            ..SweepPlan::default()
        }
    }

    /// Seed of one `(size, repeat)` cell. Depends only on the size and the
    /// repeat index, so adding sizes leaves existing cells unchanged.
    pub fn cell_seed(&self, n_files: usize, n_devices: usize, repeat: usize) -> u64 {
        seed::derive(self.seed, &[n_files as u64, n_devices as u64, repeat as u64])
    }
}

/// One evaluated placement. Columns serialize in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub policy: String,
    pub n_files: usize,
    pub n_devices: usize,
    pub seed: u64,
    pub avail_read: f64,
    pub avail_write: f64,
    pub lat_read_ms: f64,
    pub lat_write_min_ms: f64,
    pub lat_write_max_ms: f64,
    pub msgs_write: u64,
    pub msgs_read: u64,
    pub storage_usage_ratio: f64,
    pub overflow_count: usize,
    pub repeat: usize,
    pub lat_read_total_ms: f64,
    pub lat_write_min_total_ms: f64,
    pub lat_write_max_total_ms: f64,
    pub msgs_write_per_ms: f64,
    pub msgs_read_per_ms: f64,
    pub latency_excluded: usize,
    pub constraint_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellError {
    pub n_files: usize,
    pub n_devices: usize,
    pub repeat: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub plan: SweepPlan,
    /// Plan order, then repeat, then policy.
    pub rows: Vec<ResultRow>,
    pub errors: Vec<CellError>,
}

/// Scores one placement. `seed` derives the failure masks and is echoed in
/// the row's `seed` column.
pub fn evaluate_placement(
    scenario: &Scenario,
    matrix: &PlacementMatrix,
    seed: u64,
    failure_fraction: f64,
    failure_mask_count: usize,
) -> Result<ResultRow> {
    let violations = check_constraints(matrix, scenario);
    if let Some(v) = violations.first() {
        return Err(Error::Parameter(format!(
            "{} produced an infeasible placement: {v}",
            matrix.policy
        )));
    }
    let masks = failure_masks(
        &scenario.network,
        failure_fraction,
        failure_mask_count,
        seed::derive(seed, &[MASK_KEY]),
    )?;
    let r = evaluate_all(scenario, matrix, &masks)?.report;
    let n_files = scenario.files.len();
    let pairs: usize = scenario.files.iter().map(|f| f.sensor_gateways.len()).sum();
    Ok(ResultRow {
        policy: matrix.policy.to_string(),
        n_files,
        n_devices: scenario.network.fog_devices().count(),
        seed,
        avail_read: r.avail_read,
        avail_write: r.avail_write,
        lat_read_ms: r.lat_read_ms,
        lat_write_min_ms: r.lat_write_min_ms,
        lat_write_max_ms: r.lat_write_max_ms,
        msgs_write: r.msgs_write,
        msgs_read: r.msgs_read,
        storage_usage_ratio: storage_usage_ratio(scenario)?,
        overflow_count: matrix.overflow_count(scenario.cloud()),
        repeat: 0,
        lat_read_total_ms: r.lat_read_ms * n_files as f64,
        lat_write_min_total_ms: r.lat_write_min_ms * pairs as f64,
        lat_write_max_total_ms: r.lat_write_max_ms * pairs as f64,
        msgs_write_per_ms: r.msgs_write_per_ms,
        msgs_read_per_ms: r.msgs_read_per_ms,
        latency_excluded: r.latency_excluded,
        constraint_violations: violations.len(),
    })
}

/// Places and scores every policy in `policies` on one scenario. `seed`
/// derives fogstore's sensor draws and the failure masks, so every policy
/// sees the same masks.
pub fn evaluate_scenario(
    scenario: &Scenario,
    seed: u64,
    failure_fraction: f64,
    failure_mask_count: usize,
    policies: &[Policy],
) -> Result<Vec<ResultRow>> {
    policies
        .iter()
        .map(|&policy| {
            let (matrix, _) = place(policy, scenario, seed::derive(seed, &[FOGSTORE_KEY]))?;
            evaluate_placement(scenario, &matrix, seed, failure_fraction, failure_mask_count)
        })
        .collect()
}

fn run_cell(plan: &SweepPlan, n_files: usize, n_devices: usize, repeat: usize) -> Result<Vec<ResultRow>> {
    let seed = plan.cell_seed(n_files, n_devices, repeat);
    let config = ExperimentConfig {
        n_files,
        n_devices,
        ..plan.base_config.clone()
    };
    let scenario = generate_scenario(&config, seed)?;
    let mut rows = evaluate_scenario(
        &scenario,
        seed,
        plan.failure_fraction,
        plan.failure_mask_count,
        &Policy::ALL,
    )?;
    for r in &mut rows {
        r.repeat = repeat;
    }
    Ok(rows)
}

/// Runs every `(size, repeat)` cell, in parallel, and collects the rows in
/// plan order. A failing cell is recorded in `errors` and skipped.
/// Sizes listed twice are computed once.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult> {
    if plan.sizes.is_empty() || plan.repeats == 0 {
        return Err(Error::Parameter("sweep needs at least one size and one repeat".into()));
    }
    let mut cells: Vec<(usize, usize, usize)> = Vec::new();
    for &(f, d) in &plan.sizes {
        for r in 0..plan.repeats {
            if !cells.contains(&(f, d, r)) {
                cells.push((f, d, r));
            }
        }
    }
    let outcomes: BTreeMap<(usize, usize, usize), Result<Vec<ResultRow>>> = cells
        .par_iter()
        .map(|&(f, d, r)| ((f, d, r), run_cell(plan, f, d, r)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &(f, d) in &plan.sizes {
        for r in 0..plan.repeats {
            match &outcomes[&(f, d, r)] {
                Ok(cell) => rows.extend(cell.iter().cloned()),
                Err(e) => errors.push(CellError {
                    n_files: f,
                    n_devices: d,
                    repeat: r,
                    seed: plan.cell_seed(f, d, r),
                    message: e.to_string(),
                }),
            }
        }
    }
    Ok(SweepResult {
        plan: plan.clone(),
        rows,
        errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plan_has_22_sizes() {
        let sizes = default_sizes();
        assert_eq!(sizes.len(), 22);
        assert_eq!(sizes[0], (100, 100));
        assert_eq!(sizes[10], (100, 300));
        assert_eq!(sizes[11], (100, 200));
        assert_eq!(sizes[21], (200, 200));
    }

    #[test]
    fn one_size_one_repeat_gives_three_rows() {
        let plan = SweepPlan {
            sizes: vec![(10, 40)],
            repeats: 1,
            failure_mask_count: 2,
            ..SweepPlan::default()
        };
        let res = run_sweep(&plan).unwrap();
        assert!(res.errors.is_empty());
        let policies: Vec<&str> = res.rows.iter().map(|r| r.policy.as_str()).collect();
        assert_eq!(policies, ["replica-aware", "single-file", "fogstore"]);
        assert!(res.rows.iter().all(|r| r.constraint_violations == 0));
    }

    #[test]
    fn cell_seeds_ignore_other_sizes() {
        let a = SweepPlan::default();
        let b = SweepPlan {
            sizes: vec![(100, 140)],
            ..SweepPlan::default()
        };
        assert_eq!(a.cell_seed(100, 140, 3), b.cell_seed(100, 140, 3));
        assert_ne!(a.cell_seed(100, 140, 3), a.cell_seed(100, 140, 4));
    }

    #[test]
    fn zero_repeats_rejected() {
        let plan = SweepPlan {
            repeats: 0,
            ..SweepPlan::default()
        };
        assert!(run_sweep(&plan).is_err());
    }
}
