//! Decision log of a placement run.

use std::fmt::Write as _;

use super::{PlacementMatrix, Policy};
use crate::analysis::{Bipartition, CentralityMap};
use crate::network::DeviceId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    /// Not enough free storage when considered.
    NoCapacity,
    /// Already holds a replica of the file.
    Duplicate,
    /// Would leave every replica in one partition.
    WrongPartition,
    /// Replica spilled onto the cloud.
    Overflow,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Accepted => "accepted",
            Outcome::NoCapacity => "no-capacity",
            Outcome::Duplicate => "duplicate",
            Outcome::WrongPartition => "wrong-partition",
            Outcome::Overflow => "overflow",
        }
    }

    pub fn places_replica(self) -> bool {
        matches!(self, Outcome::Accepted | Outcome::Overflow)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    /// Index of the replica being placed (0-based).
    pub replica: usize,
    pub device: DeviceId,
    /// Score that ranked the device (centrality, or hop distance for
    /// fogstore).
    pub score: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileTrace {
    pub file_id: usize,
    pub partition: Option<Bipartition>,
    /// Named score maps the policy ranked devices with.
    pub centralities: Vec<(&'static str, CentralityMap)>,
    pub steps: Vec<TraceStep>,
}

impl FileTrace {
    pub fn new(file_id: usize) -> Self {
        FileTrace {
            file_id,
            partition: None,
            centralities: Vec::new(),
            steps: Vec::new(),
        }
    }

    pub fn placed(&self) -> impl Iterator<Item = DeviceId> + '_ {
        self.steps
            .iter()
            .filter(|s| s.outcome.places_replica())
            .map(|s| s.device)
    }
}

/// Files appear in the order they were placed.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementTrace {
    pub policy: Policy,
    pub files: Vec<FileTrace>,
}

impl PlacementTrace {
    pub fn new(policy: Policy) -> Self {
        PlacementTrace {
            policy,
            files: Vec::new(),
        }
    }

    /// Rebuilds the matrix from the accepted and overflow steps.
    pub fn replay(&self, n_files: usize) -> PlacementMatrix {
        let mut m = PlacementMatrix::new(self.policy, n_files);
        for f in &self.files {
            m.assignments[f.file_id] = f.placed().collect();
        }
        m
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "trace {}", self.policy);
        for f in &self.files {
            let _ = writeln!(out, "file {}", f.file_id);
            if let Some(p) = &f.partition {
                let _ = writeln!(out, "partition a={} b={}", join(&p.part_a), join(&p.part_b));
            }
            for (name, map) in &f.centralities {
                let scores: Vec<String> = map
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0.0)
                    .map(|(i, x)| format!("{i}:{x}"))
                    .collect();
                let _ = writeln!(out, "scores {name} {}", scores.join(" "));
            }
            for s in &f.steps {
                let _ = writeln!(
                    out,
                    "step {} {} {} {}",
                    s.replica,
                    s.device,
                    s.score,
                    s.outcome.as_str()
                );
            }
        }
        out
    }
}

fn join(ids: &[DeviceId]) -> String {
    ids.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
}
