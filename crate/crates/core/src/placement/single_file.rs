//! One replica per file on the most eigenvector-central device.

use super::{storage_candidates, CapacityLedger, FilePlacer, PlacementMatrix, PlacementTrace, Policy};
use crate::analysis::eigenvector_centrality;
use crate::error::Result;
use crate::network::{weight_by_hop_count, DeviceId};
use crate::workload::Scenario;

/// Files go in descending write-rate order, each to the device with the
/// highest eigenvector centrality (links weighted by hop distance to the
/// file's sensors) that still has room.
pub fn place_single_file(scenario: &Scenario) -> Result<(PlacementMatrix, PlacementTrace)> {
    let net = &scenario.network;
    let mut ledger = CapacityLedger::new(scenario);
    let mut matrix = PlacementMatrix::new(Policy::SingleFile, scenario.files.len());
    let mut trace = PlacementTrace::new(Policy::SingleFile);
    let candidates: Vec<DeviceId> = storage_candidates(scenario).collect();

    for f in scenario.files_by_write_rate() {
        let mut placer = FilePlacer::new(&mut ledger, scenario, f);
        let weights = weight_by_hop_count(net, &scenario.files[f].sensor_gateways)?;
        let ec = eigenvector_centrality(net, &weights)?;
        let ranked = ec.rank(candidates.iter().copied());
        if !placer.first_feasible(&ranked, |d| ec.get(d)) {
            placer.overflow()?;
        }
        placer.trace.centralities = vec![("eigenvector", ec)];
        placer.finish(&mut matrix, &mut trace);
    }
    Ok((matrix, trace))
}
