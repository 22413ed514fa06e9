//! Experiment parameters and their key-value file format.
//!
//! One `key=value` per line; `#` starts a comment. Range parameters use
//! `<name>.min` / `<name>.max`. Real values may be written as fractions
//! (`writeRate.min=1/1000`). Unset keys keep their defaults.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange<T> {
    pub min: T,
    pub max: T,
}

impl<T> ValueRange<T> {
    pub const fn new(min: T, max: T) -> Self {
        ValueRange { min, max }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_devices: usize,
    pub n_files: usize,
    pub propagation_ms: ValueRange<f64>,
    pub bandwidth_bytes_per_ms: ValueRange<f64>,
    pub device_capacity: ValueRange<u64>,
    pub gateway_fraction: f64,
    pub file_storage: ValueRange<u64>,
    pub read_packet_bytes: ValueRange<u64>,
    pub write_packet_bytes: ValueRange<u64>,
    pub write_rate_per_ms: ValueRange<f64>,
    pub read_rate_per_ms: ValueRange<f64>,
    /// Upper bound of the per-file sensor attachment probability.
    pub sensor_popularity_max: f64,
    /// Overrides the per-file draw with a constant probability.
    pub sensor_popularity_fixed: Option<f64>,
    pub replication_factor: usize,
    pub repeats: usize,
    pub rng_seed: u64,
    /// Barabási–Albert attachment count.
    pub attach_m: usize,
    pub cloud_uplinks: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_devices: 200,
            n_files: 100,
            propagation_ms: ValueRange::new(1.0, 5.0),
            bandwidth_bytes_per_ms: ValueRange::new(50_000.0, 75_000.0),
            device_capacity: ValueRange::new(10, 25),
            gateway_fraction: 0.10,
            file_storage: ValueRange::new(1, 6),
            read_packet_bytes: ValueRange::new(1_500_000, 4_500_000),
            write_packet_bytes: ValueRange::new(1_500_000, 4_500_000),
            write_rate_per_ms: ValueRange::new(1.0 / 1000.0, 1.0 / 200.0),
            read_rate_per_ms: ValueRange::new(1.0 / 6000.0, 1.0 / 1200.0),
            sensor_popularity_max: 0.15,
            sensor_popularity_fixed: None,
            replication_factor: crate::workload::REPLICATION_FACTOR,
            repeats: 10,
            rng_seed: 0,
            attach_m: 2,
            cloud_uplinks: 3,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        fn range<T: PartialOrd + std::fmt::Debug>(name: &str, r: &ValueRange<T>) -> Result<()> {
            if r.min > r.max {
                return Err(Error::Parameter(format!("{name}: min {:?} > max {:?}", r.min, r.max)));
            }
            Ok(())
        }
        fn positive_f(name: &str, r: &ValueRange<f64>) -> Result<()> {
            range(name, r)?;
            if !(r.min > 0.0 && r.max.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive and finite")));
            }
            Ok(())
        }
        fn positive_u(name: &str, r: &ValueRange<u64>) -> Result<()> {
            range(name, r)?;
            if r.min == 0 {
                return Err(Error::Parameter(format!("{name} must be positive")));
            }
            Ok(())
        }
        positive_f("netPrp", &self.propagation_ms)?;
        positive_f("netBdw", &self.bandwidth_bytes_per_ms)?;
        range("datCap", &self.device_capacity)?;
        positive_u("datReq", &self.file_storage)?;
        positive_u("readPacketSize", &self.read_packet_bytes)?;
        positive_u("writePacketSize", &self.write_packet_bytes)?;
        positive_f("writeRate", &self.write_rate_per_ms)?;
        positive_f("readRate", &self.read_rate_per_ms)?;
        if !(self.gateway_fraction > 0.0 && self.gateway_fraction < 1.0) {
            return Err(Error::Parameter("gtwPercentage must lie in (0, 1)".into()));
        }
        if !(self.sensor_popularity_max > 0.0 && self.sensor_popularity_max <= 1.0) {
            return Err(Error::Parameter("snsPopularity must lie in (0, 1]".into()));
        }
        if let Some(p) = self.sensor_popularity_fixed {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::Parameter("snsPopularityFixed must lie in (0, 1]".into()));
            }
        }
        if self.replication_factor != crate::workload::REPLICATION_FACTOR {
            return Err(Error::Parameter(format!(
                "replication factor is fixed at {}",
                crate::workload::REPLICATION_FACTOR
            )));
        }
        if self.attach_m < 1 || self.n_devices <= self.attach_m {
            return Err(Error::Parameter("numDevices must exceed baM >= 1".into()));
        }
        if self.n_files == 0 {
            return Err(Error::Parameter("numFiles must be positive".into()));
        }
        if self.cloud_uplinks == 0 {
            return Err(Error::Parameter("cloudUplinks must be positive".into()));
        }
        Ok(())
    }

    /// Parses a config file on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected key=value"))?;
            cfg.set(line_no, key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        let real = || parse_real(line, value);
        let int = || -> Result<u64> {
            value
                .parse()
                .map_err(|_| Error::parse(line, format!("invalid integer `{value}` for {key}")))
        };
        match key {
            "numDevices" => self.n_devices = int()? as usize,
            "numFiles" => self.n_files = int()? as usize,
            "netPrp.min" => self.propagation_ms.min = real()?,
            "netPrp.max" => self.propagation_ms.max = real()?,
            "netBdw.min" => self.bandwidth_bytes_per_ms.min = real()?,
            "netBdw.max" => self.bandwidth_bytes_per_ms.max = real()?,
            "datCap.min" => self.device_capacity.min = int()?,
            "datCap.max" => self.device_capacity.max = int()?,
            "gtwPercentage" => self.gateway_fraction = real()?,
            "datReq.min" => self.file_storage.min = int()?,
            "datReq.max" => self.file_storage.max = int()?,
            "readPacketSize.min" => self.read_packet_bytes.min = int()?,
            "readPacketSize.max" => self.read_packet_bytes.max = int()?,
            "writePacketSize.min" => self.write_packet_bytes.min = int()?,
            "writePacketSize.max" => self.write_packet_bytes.max = int()?,
            "writeRate.min" => self.write_rate_per_ms.min = real()?,
            "writeRate.max" => self.write_rate_per_ms.max = real()?,
            "readRate.min" => self.read_rate_per_ms.min = real()?,
            "readRate.max" => self.read_rate_per_ms.max = real()?,
            "snsPopularity" => self.sensor_popularity_max = real()?,
            "snsPopularityFixed" => self.sensor_popularity_fixed = Some(real()?),
            "replicationFactor" => self.replication_factor = int()? as usize,
            "repeats" => self.repeats = int()? as usize,
            "seed" => self.rng_seed = int()?,
            "baM" => self.attach_m = int()? as usize,
            "cloudUplinks" => self.cloud_uplinks = int()? as usize,
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Serializes every key in the format accepted by [`ExperimentConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("numDevices", self.n_devices.to_string());
        kv("numFiles", self.n_files.to_string());
        kv("netPrp.min", self.propagation_ms.min.to_string());
        kv("netPrp.max", self.propagation_ms.max.to_string());
        kv("netBdw.min", self.bandwidth_bytes_per_ms.min.to_string());
        kv("netBdw.max", self.bandwidth_bytes_per_ms.max.to_string());
        kv("datCap.min", self.device_capacity.min.to_string());
        kv("datCap.max", self.device_capacity.max.to_string());
        kv("gtwPercentage", self.gateway_fraction.to_string());
        kv("datReq.min", self.file_storage.min.to_string());
        kv("datReq.max", self.file_storage.max.to_string());
        kv("readPacketSize.min", self.read_packet_bytes.min.to_string());
        kv("readPacketSize.max", self.read_packet_bytes.max.to_string());
        kv("writePacketSize.min", self.write_packet_bytes.min.to_string());
        kv("writePacketSize.max", self.write_packet_bytes.max.to_string());
        kv("writeRate.min", self.write_rate_per_ms.min.to_string());
        kv("writeRate.max", self.write_rate_per_ms.max.to_string());
        kv("readRate.min", self.read_rate_per_ms.min.to_string());
        kv("readRate.max", self.read_rate_per_ms.max.to_string());
        kv("snsPopularity", self.sensor_popularity_max.to_string());
        if let Some(p) = self.sensor_popularity_fixed {
            kv("snsPopularityFixed", p.to_string());
        }
        kv("replicationFactor", self.replication_factor.to_string());
        kv("repeats", self.repeats.to_string());
        kv("seed", self.rng_seed.to_string());
        kv("baM", self.attach_m.to_string());
        kv("cloudUplinks", self.cloud_uplinks.to_string());
        s
    }
}

/// Accepts plain reals and `a/b` fractions.
fn parse_real(line: usize, value: &str) -> Result<f64> {
    let bad = || Error::parse(line, format!("invalid number `{value}`"));
    let v = match value.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            num / den
        }
        None => value.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_reference_table() {
        let c = ExperimentConfig::default();
        assert_eq!(c.propagation_ms, ValueRange::new(1.0, 5.0));
        assert_eq!(c.bandwidth_bytes_per_ms, ValueRange::new(50_000.0, 75_000.0));
        assert_eq!(c.device_capacity, ValueRange::new(10, 25));
        assert_eq!(c.gateway_fraction, 0.10);
        assert_eq!(c.file_storage, ValueRange::new(1, 6));
        assert_eq!(c.write_rate_per_ms, ValueRange::new(0.001, 0.005));
        assert_eq!(c.sensor_popularity_max, 0.15);
        assert_eq!(c.replication_factor, 3);
        c.validate().unwrap();
    }

    #[test]
    fn parses_keys_comments_and_fractions() {
        let c = ExperimentConfig::parse(
            "# reference\nnetPrp.min=2\nnetPrp.max = 4 # inline\ngtwPercentage=0.2\nwriteRate.min=1/2000\nnumDevices=50\n",
        )
        .unwrap();
        assert_eq!(c.propagation_ms, ValueRange::new(2.0, 4.0));
        assert_eq!(c.gateway_fraction, 0.2);
        assert_eq!(c.write_rate_per_ms.min, 0.0005);
        assert_eq!(c.n_devices, 50);
        assert_eq!(c.n_files, 100);
    }

    #[test]
    fn text_round_trips() {
        let c = ExperimentConfig {
            sensor_popularity_fixed: Some(1.0),
            n_devices: 120,
            ..ExperimentConfig::default()
        };
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_inverted_range_and_unknown_key() {
        assert!(ExperimentConfig::parse("datReq.min=7\n").is_err());
        assert!(matches!(
            ExperimentConfig::parse("bogus=1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(ExperimentConfig::parse("replicationFactor=2\n").is_err());
    }
}
