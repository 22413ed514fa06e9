//! Placement file: a `policy <name>` line, then `place <file_id> <dev_id>...`
//! per file in id order.

use std::fmt::Write as _;

use super::{PlacementMatrix, Policy};
use crate::error::{Error, Result};
use crate::network::format::num;
use crate::network::DeviceId;

pub fn write_placement(placement: &PlacementMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "policy {}", placement.policy);
    for (f, devices) in placement.assignments.iter().enumerate() {
        let _ = write!(out, "place {f}");
        for d in devices {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_placement(text: &str) -> Result<PlacementMatrix> {
    let mut policy = None;
    let mut rows: Vec<Option<Vec<DeviceId>>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() || tokens[0].starts_with('#') {
            continue;
        }
        match tokens[0] {
            "policy" if tokens.len() == 2 => {
                policy = Some(tokens[1].parse().map_err(|e: String| Error::parse(line_no, e))?);
            }
            "place" if tokens.len() >= 2 => {
                let f: usize = num(line_no, tokens[1])?;
                let devices = tokens[2..]
                    .iter()
                    .map(|t| num(line_no, t).map(DeviceId))
                    .collect::<Result<Vec<_>>>()?;
                if rows.len() <= f {
                    rows.resize(f + 1, None);
                }
                if rows[f].replace(devices).is_some() {
                    return Err(Error::parse(line_no, format!("file {f} placed twice")));
                }
            }
            other => return Err(Error::parse(line_no, format!("unexpected record `{other}`"))),
        }
    }
    let policy: Policy = policy.ok_or_else(|| Error::parse(0, "missing `policy` line"))?;
    let assignments = rows
        .into_iter()
        .enumerate()
        .map(|(f, r)| r.ok_or_else(|| Error::parse(0, format!("file {f} has no `place` line"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(PlacementMatrix {
        policy,
        assignments,
    })
}
