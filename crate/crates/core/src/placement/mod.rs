//! Placement policies and the replica/capacity constraints they must honor.

mod fogstore;
mod format;
mod replica_aware;
mod single_file;
mod trace;

use std::fmt;

pub use fogstore::place_fogstore;
pub use format::{parse_placement, write_placement};
pub use replica_aware::place_replica_aware;
pub use single_file::place_single_file;
pub use trace::{FileTrace, Outcome, PlacementTrace, TraceStep};

use crate::error::{Error, Result};
use crate::network::{DeviceId, UNBOUNDED_CAPACITY};
use crate::workload::{Scenario, REPLICATION_FACTOR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Policy {
    ReplicaAware,
    SingleFile,
    FogStore,
}

impl Policy {
    pub const ALL: [Policy; 3] = [Policy::ReplicaAware, Policy::SingleFile, Policy::FogStore];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::ReplicaAware => "replica-aware",
            Policy::SingleFile => "single-file",
            Policy::FogStore => "fogstore",
        }
    }

    /// Replicas per file this policy places.
    pub fn replication(self) -> usize {
        match self {
            Policy::SingleFile => 1,
            Policy::ReplicaAware | Policy::FogStore => REPLICATION_FACTOR,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Policy::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown policy `{s}` (expected replica-aware, single-file or fogstore)"))
    }
}

/// Runs `policy`; `seed` only affects fogstore's random sensor choice.
pub fn place(policy: Policy, scenario: &Scenario, seed: u64) -> Result<(PlacementMatrix, PlacementTrace)> {
    match policy {
        Policy::ReplicaAware => place_replica_aware(scenario),
        Policy::SingleFile => place_single_file(scenario),
        Policy::FogStore => place_fogstore(scenario, seed),
    }
}

/// Devices holding each file, in the order the policy chose them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementMatrix {
    pub policy: Policy,
    /// Indexed by file id.
    pub assignments: Vec<Vec<DeviceId>>,
}

impl PlacementMatrix {
    pub fn new(policy: Policy, n_files: usize) -> Self {
        PlacementMatrix {
            policy,
            assignments: vec![Vec::new(); n_files],
        }
    }

    pub fn replicas(&self, file_id: usize) -> &[DeviceId] {
        &self.assignments[file_id]
    }

    pub fn n_files(&self) -> usize {
        self.assignments.len()
    }

    /// Replicas that spilled onto the cloud because no fog device had room.
    pub fn overflow_count(&self, cloud: DeviceId) -> usize {
        self.assignments
            .iter()
            .flatten()
            .filter(|&&d| d == cloud)
            .count()
    }

    /// Storage used per device.
    pub fn usage(&self, scenario: &Scenario) -> Vec<u64> {
        let mut used = vec![0u64; scenario.network.n_devices()];
        for (f, devices) in self.assignments.iter().enumerate() {
            let req = scenario.files.get(f).map_or(0, |s| s.storage_req);
            for d in devices {
                if let Some(u) = used.get_mut(d.index()) {
                    *u = u.saturating_add(req);
                }
            }
        }
        used
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A file holds the wrong number of replicas.
    ReplicaCount {
        file: usize,
        expected: usize,
        found: usize,
    },
    /// The same device holds two replicas of one file.
    DuplicateDevice { file: usize, device: DeviceId },
    UnknownDevice { file: usize, device: DeviceId },
    /// The matrix and the scenario disagree on the number of files.
    FileCount { expected: usize, found: usize },
    /// Stored data exceeds the device's capacity.
    Capacity {
        device: DeviceId,
        used: u64,
        capacity: u64,
        excess: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ReplicaCount {
                file,
                expected,
                found,
            } => write!(f, "replication: file {file} has {found} replicas, expected {expected}"),
            Violation::DuplicateDevice { file, device } => {
                write!(f, "replication: file {file} stores two replicas on device {device}")
            }
            Violation::UnknownDevice { file, device } => {
                write!(f, "file {file} is placed on unknown device {device}")
            }
            Violation::FileCount { expected, found } => {
                write!(f, "placement covers {found} files, scenario has {expected}")
            }
            Violation::Capacity {
                device,
                used,
                capacity,
                excess,
            } => write!(
                f,
                "capacity: device {device} stores {used} of {capacity} units ({excess} over)"
            ),
        }
    }
}

/// Checks the replica count per file and the storage capacity of every
/// device. An empty list means the placement is feasible.
pub fn check_constraints(placement: &PlacementMatrix, scenario: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    if placement.n_files() != scenario.files.len() {
        out.push(Violation::FileCount {
            expected: scenario.files.len(),
            found: placement.n_files(),
        });
    }
    let n = scenario.network.n_devices();
    let expected = placement.policy.replication();
    for (file, devices) in placement.assignments.iter().enumerate() {
        if devices.len() != expected {
            out.push(Violation::ReplicaCount {
                file,
                expected,
                found: devices.len(),
            });
        }
        for (i, &d) in devices.iter().enumerate() {
            if d.index() >= n {
                out.push(Violation::UnknownDevice { file, device: d });
            } else if devices[..i].contains(&d) {
                out.push(Violation::DuplicateDevice { file, device: d });
            }
        }
    }
    for (i, &used) in placement.usage(scenario).iter().enumerate() {
        let capacity = scenario.network.capacity(DeviceId(i));
        if used > capacity {
            out.push(Violation::Capacity {
                device: DeviceId(i),
                used,
                capacity,
                excess: used - capacity,
            });
        }
    }
    out
}

/// Free storage per device during one placement run.
#[derive(Debug, Clone)]
pub(crate) struct CapacityLedger {
    free: Vec<u64>,
}

impl CapacityLedger {
    pub(crate) fn new(scenario: &Scenario) -> Self {
        CapacityLedger {
            free: scenario
                .network
                .devices()
                .iter()
                .map(|d| d.storage_capacity)
                .collect(),
        }
    }

    pub(crate) fn fits(&self, device: DeviceId, req: u64) -> bool {
        self.free[device.index()] >= req
    }

    pub(crate) fn debit(&mut self, device: DeviceId, req: u64) {
        let slot = &mut self.free[device.index()];
        if *slot != UNBOUNDED_CAPACITY {
            *slot -= req;
        }
    }
}

/// Shared bookkeeping for one file: records every decision in the trace
/// and debits the ledger on acceptance.
pub(crate) struct FilePlacer<'a> {
    pub ledger: &'a mut CapacityLedger,
    pub trace: FileTrace,
    pub chosen: Vec<DeviceId>,
    req: u64,
    cloud: DeviceId,
}

impl<'a> FilePlacer<'a> {
    pub(crate) fn new(ledger: &'a mut CapacityLedger, scenario: &Scenario, file_id: usize) -> Self {
        FilePlacer {
            ledger,
            trace: FileTrace::new(file_id),
            chosen: Vec::with_capacity(REPLICATION_FACTOR),
            req: scenario.files[file_id].storage_req,
            cloud: scenario.cloud(),
        }
    }

    /// Logs why `device` cannot take the next replica, or `None` if it can.
    pub(crate) fn rejection(&self, device: DeviceId) -> Option<Outcome> {
        if self.chosen.contains(&device) {
            Some(Outcome::Duplicate)
        } else if !self.ledger.fits(device, self.req) {
            Some(Outcome::NoCapacity)
        } else {
            None
        }
    }

    pub(crate) fn reject(&mut self, device: DeviceId, score: f64, outcome: Outcome) {
        let replica = self.chosen.len();
        self.trace.steps.push(TraceStep {
            replica,
            device,
            score,
            outcome,
        });
    }

    pub(crate) fn accept(&mut self, device: DeviceId, score: f64) {
        self.reject(device, score, Outcome::Accepted);
        self.ledger.debit(device, self.req);
        self.chosen.push(device);
    }

    /// Walks `ranked` and accepts the first feasible device. Returns whether
    /// one was found.
    pub(crate) fn first_feasible(&mut self, ranked: &[DeviceId], score: impl Fn(DeviceId) -> f64) -> bool {
        for &d in ranked {
            match self.rejection(d) {
                Some(Outcome::Duplicate) => {}
                Some(why) => self.reject(d, score(d), why),
                None => {
                    self.accept(d, score(d));
                    return true;
                }
            }
        }
        false
    }

    /// Puts the next replica on the cloud, once per file.
    pub(crate) fn overflow(&mut self) -> Result<()> {
        if self.chosen.contains(&self.cloud) {
            return Err(Error::StorageExhausted {
                file: self.trace.file_id,
            });
        }
        let cloud = self.cloud;
        self.reject(cloud, 0.0, Outcome::Overflow);
        self.chosen.push(cloud);
        Ok(())
    }

    pub(crate) fn finish(self, matrix: &mut PlacementMatrix, trace: &mut PlacementTrace) {
        matrix.assignments[self.trace.file_id] = self.chosen;
        trace.files.push(self.trace);
    }
}

/// Candidate devices for a replica: everything but the cloud, which only
/// receives overflow.
pub(crate) fn storage_candidates(scenario: &Scenario) -> impl Iterator<Item = DeviceId> + '_ {
    scenario.network.fog_devices().filter(|&d| scenario.network.is_up(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::{generate_scenario, ExperimentConfig};

    fn scenario() -> Scenario {
        let cfg = ExperimentConfig {
            n_devices: 30,
            n_files: 5,
            ..ExperimentConfig::default()
        };
        generate_scenario(&cfg, 2).unwrap()
    }

    #[test]
    fn policy_names_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.as_str().parse::<Policy>().unwrap(), p);
        }
        assert!("hdfs".parse::<Policy>().is_err());
    }

    #[test]
    fn missing_replica_is_named() {
        let s = scenario();
        let (mut m, _) = place_replica_aware(&s).unwrap();
        m.assignments[2].pop();
        assert_eq!(
            check_constraints(&m, &s),
            vec![Violation::ReplicaCount {
                file: 2,
                expected: 3,
                found: 2
            }]
        );
    }

    #[test]
    fn overfull_device_reports_excess() {
        let s = scenario();
        let mut m = PlacementMatrix::new(Policy::SingleFile, s.files.len());
        for f in 0..s.files.len() {
            m.assignments[f] = vec![DeviceId(0)];
        }
        let total: u64 = s.files.iter().map(|f| f.storage_req).sum();
        let cap = s.network.capacity(DeviceId(0));
        let report = check_constraints(&m, &s);
        if total > cap {
            assert_eq!(
                report,
                vec![Violation::Capacity {
                    device: DeviceId(0),
                    used: total,
                    capacity: cap,
                    excess: total - cap
                }]
            );
        } else {
            assert!(report.is_empty());
        }
    }

    #[test]
    fn duplicate_device_is_named() {
        let s = scenario();
        let (mut m, _) = place_fogstore(&s, 1).unwrap();
        let first = m.assignments[0][0];
        m.assignments[0][1] = first;
        assert!(check_constraints(&m, &s).contains(&Violation::DuplicateDevice {
            file: 0,
            device: first
        }));
    }
}
