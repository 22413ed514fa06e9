//! Scenario interchange: a `seed` line, the network records, then one line
//! per file.
//!
//! ```text
//! seed <u64>
//! devices <n>
//! dev ...
//! link ...
//! file <id> <storage_req> <write_rate_per_ms> <write_bytes> <read_rate_per_ms> <read_bytes> gateways=<g1,g2,...>
//! ```

use std::fmt::Write as _;

use super::{FileSpec, Scenario};
use crate::error::{Error, Result};
use crate::network::format::{expect_len, num, write_network, NetworkReader};
use crate::network::DeviceId;

pub fn write_scenario(scenario: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "seed {}", scenario.rng_seed);
    write_network(&scenario.network, &mut out);
    for f in &scenario.files {
        let gateways: Vec<String> = f.sensor_gateways.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(
            out,
            "file {} {} {} {} {} {} gateways={}",
            f.file_id,
            f.storage_req,
            f.write_rate_per_ms,
            f.write_packet_bytes,
            f.read_rate_per_ms,
            f.read_packet_bytes,
            gateways.join(",")
        );
    }
    out
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut seed = None;
    let mut reader = NetworkReader::default();
    let mut files = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() || tokens[0].starts_with('#') {
            continue;
        }
        match tokens[0] {
            "seed" => {
                expect_len(line_no, &tokens, 2)?;
                seed = Some(num(line_no, tokens[1])?);
            }
            "file" => {
                expect_len(line_no, &tokens, 8)?;
                let list = tokens[7]
                    .strip_prefix("gateways=")
                    .ok_or_else(|| Error::parse(line_no, "expected `gateways=` field"))?;
                let sensor_gateways = list
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| num(line_no, s).map(DeviceId))
                    .collect::<Result<Vec<_>>>()?;
                files.push(FileSpec {
                    file_id: num(line_no, tokens[1])?,
                    storage_req: num(line_no, tokens[2])?,
                    write_rate_per_ms: num(line_no, tokens[3])?,
                    write_packet_bytes: num(line_no, tokens[4])?,
                    read_rate_per_ms: num(line_no, tokens[5])?,
                    read_packet_bytes: num(line_no, tokens[6])?,
                    sensor_gateways,
                });
            }
            _ => {
                if !reader.accept(line_no, &tokens)? {
                    return Err(Error::parse(line_no, format!("unexpected record `{}`", tokens[0])));
                }
            }
        }
    }
    let seed = seed.ok_or_else(|| Error::parse(0, "missing `seed` line"))?;
    Scenario::new(reader.finish()?, files, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::{generate_scenario, ExperimentConfig};

    #[test]
    fn generated_scenario_round_trips() {
        let cfg = ExperimentConfig {
            n_devices: 50,
            n_files: 12,
            ..ExperimentConfig::default()
        };
        let s = generate_scenario(&cfg, 11).unwrap();
        let text = write_scenario(&s);
        let back = parse_scenario(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(write_scenario(&back), text);
    }

    #[test]
    fn rejects_missing_gateway_field() {
        let text = "seed 1\ndevices 2\ndev 0 gateway 5\ndev 1 cloud inf\nlink 0 1 1 1\nfile 0 1 0.1 10 0.1 10 0\n";
        assert!(matches!(parse_scenario(text), Err(Error::Parse { line: 6, .. })));
    }
}
