//! Per-cell summaries, improvement ratios and CSV output.

use std::io;

use serde::{Serialize, Serializer};

use super::{ResultRow, SweepResult};
use crate::placement::Policy;

/// Marker for ratios with a zero denominator.
pub const NA: &str = "NA";

/// Mean and sample standard deviation (0 for fewer than two values).
fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub policy: String,
    pub n_files: usize,
    pub n_devices: usize,
    pub runs: usize,
    pub avail_read_mean: f64,
    pub avail_read_std: f64,
    pub avail_write_mean: f64,
    pub avail_write_std: f64,
    pub lat_read_ms_mean: f64,
    pub lat_read_ms_std: f64,
    pub lat_write_min_ms_mean: f64,
    pub lat_write_min_ms_std: f64,
    pub lat_write_max_ms_mean: f64,
    pub lat_write_max_ms_std: f64,
    pub msgs_write_mean: f64,
    pub msgs_write_std: f64,
    pub msgs_read_mean: f64,
    pub msgs_read_std: f64,
    pub storage_usage_ratio_mean: f64,
    pub storage_usage_ratio_std: f64,
    pub overflow_count_mean: f64,
    pub overflow_count_std: f64,
}

/// Rows of one plan entry and policy, one per repeat.
fn cell_rows(result: &SweepResult, size: (usize, usize), policy: Policy) -> Vec<&ResultRow> {
    let mut out: Vec<&ResultRow> = Vec::new();
    for r in &result.rows {
        if (r.n_files, r.n_devices) == size
            && r.policy == policy.as_str()
            && !out.iter().any(|o| o.repeat == r.repeat)
        {
            out.push(r);
        }
    }
    out
}

/// Means and standard deviations per plan entry and policy, in plan order.
/// Entries without rows are skipped.
pub fn summarize(result: &SweepResult) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for &size in &result.plan.sizes {
        for policy in Policy::ALL {
            let rows = cell_rows(result, size, policy);
            if rows.is_empty() {
                continue;
            }
            let stat = |f: fn(&ResultRow) -> f64| {
                mean_std(&rows.iter().map(|r| f(r)).collect::<Vec<_>>())
            };
            let (avail_read_mean, avail_read_std) = stat(|r| r.avail_read);
            let (avail_write_mean, avail_write_std) = stat(|r| r.avail_write);
            let (lat_read_ms_mean, lat_read_ms_std) = stat(|r| r.lat_read_ms);
            let (lat_write_min_ms_mean, lat_write_min_ms_std) = stat(|r| r.lat_write_min_ms);
            let (lat_write_max_ms_mean, lat_write_max_ms_std) = stat(|r| r.lat_write_max_ms);
            let (msgs_write_mean, msgs_write_std) = stat(|r| r.msgs_write as f64);
            let (msgs_read_mean, msgs_read_std) = stat(|r| r.msgs_read as f64);
            let (storage_usage_ratio_mean, storage_usage_ratio_std) = stat(|r| r.storage_usage_ratio);
            let (overflow_count_mean, overflow_count_std) = stat(|r| r.overflow_count as f64);
            out.push(SummaryRow {
                policy: policy.to_string(),
                n_files: size.0,
                n_devices: size.1,
                runs: rows.len(),
                avail_read_mean,
                avail_read_std,
                avail_write_mean,
                avail_write_std,
                lat_read_ms_mean,
                lat_read_ms_std,
                lat_write_min_ms_mean,
                lat_write_min_ms_std,
                lat_write_max_ms_mean,
                lat_write_max_ms_std,
                msgs_write_mean,
                msgs_write_std,
                msgs_read_mean,
                msgs_read_std,
                storage_usage_ratio_mean,
                storage_usage_ratio_std,
                overflow_count_mean,
                overflow_count_std,
            });
        }
    }
    out
}

fn na<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str(NA),
    }
}

/// Improvement ratios of replica-aware over fogstore for one plan entry.
/// Every ratio is `fogstore / replica-aware` over the cell means, so values
/// above 1 mean replica-aware sends fewer messages or sees lower latency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImprovementRow {
    /// `<n_files>x<n_devices>`, or `average` for the closing row.
    pub size: String,
    pub n_files: Option<usize>,
    pub n_devices: Option<usize>,
    #[serde(serialize_with = "na")]
    pub ir_msgs_write: Option<f64>,
    #[serde(serialize_with = "na")]
    pub ir_msgs_read: Option<f64>,
    #[serde(serialize_with = "na")]
    pub ir_lat_read: Option<f64>,
    #[serde(serialize_with = "na")]
    pub ir_lat_write_min: Option<f64>,
    #[serde(serialize_with = "na")]
    pub ir_lat_write_max: Option<f64>,
    #[serde(serialize_with = "na")]
    pub storage_usage_ratio: Option<f64>,
}

fn ratio(fogstore: f64, ours: f64) -> Option<f64> {
    let r = fogstore / ours;
    r.is_finite().then_some(r)
}

fn mean_of(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// One row per plan entry with both policies present, followed by the
/// average of each column over those rows.
pub fn improvement_table(result: &SweepResult) -> Vec<ImprovementRow> {
    let summary = summarize(result);
    let mut out = Vec::new();
    for &(f, d) in &result.plan.sizes {
        let find = |p: Policy| {
            summary
                .iter()
                .find(|s| (s.n_files, s.n_devices) == (f, d) && s.policy == p.as_str())
        };
        let (Some(ours), Some(theirs)) = (find(Policy::ReplicaAware), find(Policy::FogStore)) else {
            continue;
        };
        out.push(ImprovementRow {
            size: format!("{f}x{d}"),
            n_files: Some(f),
            n_devices: Some(d),
            ir_msgs_write: ratio(theirs.msgs_write_mean, ours.msgs_write_mean),
            ir_msgs_read: ratio(theirs.msgs_read_mean, ours.msgs_read_mean),
            ir_lat_read: ratio(theirs.lat_read_ms_mean, ours.lat_read_ms_mean),
            ir_lat_write_min: ratio(theirs.lat_write_min_ms_mean, ours.lat_write_min_ms_mean),
            ir_lat_write_max: ratio(theirs.lat_write_max_ms_mean, ours.lat_write_max_ms_mean),
            storage_usage_ratio: Some(ours.storage_usage_ratio_mean),
        });
    }
    let average = ImprovementRow {
        size: "average".into(),
        n_files: None,
        n_devices: None,
        ir_msgs_write: mean_of(out.iter().map(|r| r.ir_msgs_write)),
        ir_msgs_read: mean_of(out.iter().map(|r| r.ir_msgs_read)),
        ir_lat_read: mean_of(out.iter().map(|r| r.ir_lat_read)),
        ir_lat_write_min: mean_of(out.iter().map(|r| r.ir_lat_write_min)),
        ir_lat_write_max: mean_of(out.iter().map(|r| r.ir_lat_write_max)),
        storage_usage_ratio: mean_of(out.iter().map(|r| r.storage_usage_ratio)),
    };
    out.push(average);
    out
}

/// Writes `rows` with a header taken from the field names. An empty slice
/// produces an empty file.
pub fn write_csv<W: io::Write, T: Serialize>(out: W, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SweepPlan;

    fn row(policy: Policy, repeat: usize, msgs_write: u64, lat: f64) -> ResultRow {
        ResultRow {
            policy: policy.to_string(),
            n_files: 1,
            n_devices: 10,
            seed: 0,
            avail_read: 1.0,
            avail_write: 1.0,
            lat_read_ms: lat,
            lat_write_min_ms: lat,
            lat_write_max_ms: lat,
            msgs_write,
            msgs_read: 0,
            storage_usage_ratio: 0.5,
            overflow_count: 0,
            repeat,
            lat_read_total_ms: lat,
            lat_write_min_total_ms: lat,
            lat_write_max_total_ms: lat,
            msgs_write_per_ms: 0.0,
            msgs_read_per_ms: 0.0,
            latency_excluded: 0,
            constraint_violations: 0,
        }
    }

    fn result(rows: Vec<ResultRow>) -> SweepResult {
        SweepResult {
            plan: SweepPlan {
                sizes: vec![(1, 10)],
                repeats: 1,
                ..SweepPlan::default()
            },
            rows,
            errors: Vec::new(),
        }
    }

    #[test]
    fn ratio_orientation_and_na() {
        let t = improvement_table(&result(vec![
            row(Policy::ReplicaAware, 0, 900, 2.0),
            row(Policy::FogStore, 0, 1000, 2.0),
        ]));
        assert_eq!(t.len(), 2);
        assert!((t[0].ir_msgs_write.unwrap() - 1000.0 / 900.0).abs() < 1e-12);
        assert_eq!(t[0].ir_lat_read, Some(1.0));
        // zero reading messages on both sides
        assert_eq!(t[0].ir_msgs_read, None);
        assert_eq!(t[1].size, "average");
        assert_eq!(t[1].ir_msgs_write, t[0].ir_msgs_write);

        let mut buf = Vec::new();
        write_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("size,n_files,n_devices,ir_msgs_write,ir_msgs_read,"));
        assert!(text.contains(",NA,"));
        assert!(text.lines().last().unwrap().starts_with("average,,,"));
    }

    #[test]
    fn sample_standard_deviation() {
        let r = result(vec![
            row(Policy::SingleFile, 0, 2, 1.0),
            row(Policy::SingleFile, 1, 4, 1.0),
        ]);
        let s = summarize(&r);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].msgs_write_mean, 3.0);
        assert!((s[0].msgs_write_std - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(s[0].lat_read_ms_std, 0.0);
    }
}
