//! Community- and cloud-aware placement of three replicas per file.

use super::{storage_candidates, CapacityLedger, FilePlacer, PlacementMatrix, PlacementTrace, Policy};
use crate::analysis::{betweenness_subset, kernighan_lin_bipartition, Side};
use crate::error::Result;
use crate::network::{weight_by_hop_count, DeviceId};
use crate::seed;
use crate::workload::Scenario;

/// Places files in descending write-rate order. For each file:
///
/// 1. betweenness restricted to paths between the file's sensor gateways;
/// 2. links weighted by hop distance to those gateways, then split in two
///    with Kernighan–Lin (seeded per file from the scenario seed);
/// 3. one replica per side on its most central device with room, falling
///    back to the other side when a side is full;
/// 4. a third replica on the most central device with room under
///    betweenness over the gateways plus the cloud.
///
/// Ties rank by lower device id. The cloud is never a candidate; a replica
/// that fits nowhere goes to the cloud as overflow.
pub fn place_replica_aware(scenario: &Scenario) -> Result<(PlacementMatrix, PlacementTrace)> {
    let net = &scenario.network;
    let cloud = scenario.cloud();
    let mut ledger = CapacityLedger::new(scenario);
    let mut matrix = PlacementMatrix::new(Policy::ReplicaAware, scenario.files.len());
    let mut trace = PlacementTrace::new(Policy::ReplicaAware);
    let candidates: Vec<DeviceId> = storage_candidates(scenario).collect();

    for f in scenario.files_by_write_rate() {
        let file = &scenario.files[f];
        let gateways = &file.sensor_gateways;
        let mut placer = FilePlacer::new(&mut ledger, scenario, f);

        let sensor_bc = betweenness_subset(net, gateways, gateways)?;
        let weights = weight_by_hop_count(net, gateways)?;
        let bip = kernighan_lin_bipartition(net, &weights, seed::derive(scenario.rng_seed, &[f as u64]))?;

        for side in [Side::A, Side::B] {
            let mut found = false;
            for s in [side, side.other()] {
                let pool = bip.part(s).iter().copied().filter(|&d| d != cloud);
                let ranked = sensor_bc.rank(pool);
                if placer.first_feasible(&ranked, |d| sensor_bc.get(d)) {
                    found = true;
                    break;
                }
            }
            if !found {
                placer.overflow()?;
            }
        }

        let mut endpoints = gateways.clone();
        endpoints.push(cloud);
        let cloud_bc = betweenness_subset(net, &endpoints, &endpoints)?;
        let ranked = cloud_bc.rank(candidates.iter().copied());
        if !placer.first_feasible(&ranked, |d| cloud_bc.get(d)) {
            placer.overflow()?;
        }

        placer.trace.partition = Some(bip);
        placer.trace.centralities = vec![("sensor-betweenness", sensor_bc), ("cloud-betweenness", cloud_bc)];
        placer.finish(&mut matrix, &mut trace);
    }
    Ok((matrix, trace))
}
