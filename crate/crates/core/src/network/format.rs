//! Line-oriented network interchange format.
//!
//! ```text
//! devices <n>
//! dev <id> <fog|gateway|cloud> <capacity|inf>
//! link <u> <v> <propagation_ms> <bandwidth_bytes_per_ms>
//! ```
//!
//! `devices` comes first, then one `dev` line per device in id order, then
//! the links in storage order. Floats use the shortest representation that
//! parses back to the same value, so write/parse/write is byte-identical.
//! Blank lines and lines starting with `#` are ignored by the parser.

use std::fmt::Write as _;

use super::{DeviceAttrs, DeviceId, FogNetwork, LinkAttrs, UNBOUNDED_CAPACITY};
use crate::error::{Error, Result};

pub fn write_network(net: &FogNetwork, out: &mut String) {
    let _ = writeln!(out, "devices {}", net.n_devices());
    for (i, d) in net.devices().iter().enumerate() {
        let cap = if d.storage_capacity == UNBOUNDED_CAPACITY {
            "inf".to_string()
        } else {
            d.storage_capacity.to_string()
        };
        let _ = writeln!(out, "dev {i} {} {cap}", d.role.as_str());
    }
    for l in net.links() {
        let _ = writeln!(
            out,
            "link {} {} {} {}",
            l.a, l.b, l.attrs.propagation_ms, l.attrs.bandwidth_bytes_per_ms
        );
    }
}

pub fn parse_network(text: &str) -> Result<FogNetwork> {
    let mut reader = NetworkReader::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() || tokens[0].starts_with('#') {
            continue;
        }
        if !reader.accept(line_no, &tokens)? {
            return Err(Error::parse(line_no, format!("unexpected record `{}`", tokens[0])));
        }
    }
    reader.finish()
}

/// Incremental parser shared with the scenario format.
#[derive(Default)]
pub(crate) struct NetworkReader {
    devices: Option<Vec<Option<DeviceAttrs>>>,
    edges: Vec<(DeviceId, DeviceId, LinkAttrs)>,
}

impl NetworkReader {
    /// Consumes one tokenized line. Returns `false` if the record kind is not
    /// a network record.
    pub(crate) fn accept(&mut self, line: usize, tokens: &[&str]) -> Result<bool> {
        match tokens[0] {
            "devices" => {
                expect_len(line, tokens, 2)?;
                if self.devices.is_some() {
                    return Err(Error::parse(line, "repeated `devices` header"));
                }
                let n: usize = num(line, tokens[1])?;
                self.devices = Some(vec![None; n]);
            }
            "dev" => {
                expect_len(line, tokens, 4)?;
                let devices = self
                    .devices
                    .as_mut()
                    .ok_or_else(|| Error::parse(line, "`dev` before `devices` header"))?;
                let id: usize = num(line, tokens[1])?;
                let role = tokens[2].parse().map_err(|e: String| Error::parse(line, e))?;
                let storage_capacity = if tokens[3] == "inf" {
                    UNBOUNDED_CAPACITY
                } else {
                    num(line, tokens[3])?
                };
                let slot = devices
                    .get_mut(id)
                    .ok_or_else(|| Error::parse(line, format!("device id {id} out of range")))?;
                if slot.is_some() {
                    return Err(Error::parse(line, format!("device {id} declared twice")));
                }
                *slot = Some(DeviceAttrs {
                    role,
                    storage_capacity,
                });
            }
            "link" => {
                expect_len(line, tokens, 5)?;
                let u: usize = num(line, tokens[1])?;
                let v: usize = num(line, tokens[2])?;
                let prop: f64 = num(line, tokens[3])?;
                let bw: f64 = num(line, tokens[4])?;
                self.edges
                    .push((DeviceId(u), DeviceId(v), LinkAttrs::new(prop, bw)));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub(crate) fn finish(self) -> Result<FogNetwork> {
        let devices = self
            .devices
            .ok_or_else(|| Error::parse(0, "missing `devices` header"))?;
        let devices = devices
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.ok_or_else(|| Error::parse(0, format!("device {i} not declared"))))
            .collect::<Result<Vec<_>>>()?;
        FogNetwork::build(devices, self.edges)
    }
}

pub(crate) fn expect_len(line: usize, tokens: &[&str], n: usize) -> Result<()> {
    if tokens.len() != n {
        return Err(Error::parse(
            line,
            format!("`{}` expects {} fields, got {}", tokens[0], n - 1, tokens.len() - 1),
        ));
    }
    Ok(())
}

pub(crate) fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid number `{tok}`")))
}
