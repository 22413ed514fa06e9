//! Greedy shortest-path baseline with a two-region failure-group rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CapacityLedger, FilePlacer, Outcome, PlacementMatrix, PlacementTrace, Policy};
use crate::analysis::{hop_distances, hop_path, kernighan_lin_bipartition, CentralityMap};
use crate::error::{Error, Result};
use crate::network::{DeviceId, DeviceRole, EdgeWeights};
use crate::seed;
use crate::workload::{Scenario, REPLICATION_FACTOR};

/// Seed key of the network-wide partition, kept apart from per-file keys.
const PARTITION_KEY: u64 = u64::MAX;

/// Files go in descending write-rate order. The network is split once into
/// two regions with unit-weight Kernighan–Lin. Per file, one sensor gateway
/// is drawn at random and the replicas go to the first devices with room
/// along the hop-shortest path from that gateway toward the cloud (the
/// gateway included, the cloud excluded), then to the remaining devices by
/// hop distance from the gateway, ties by id. A third replica that would
/// leave all three in one region is skipped.
pub fn place_fogstore(scenario: &Scenario, rng_seed: u64) -> Result<(PlacementMatrix, PlacementTrace)> {
    let net = &scenario.network;
    let cloud = scenario.cloud();
    let regions = kernighan_lin_bipartition(
        net,
        &EdgeWeights::uniform(net, 1.0),
        seed::derive(rng_seed, &[PARTITION_KEY]),
    )?;
    let mut ledger = CapacityLedger::new(scenario);
    let mut matrix = PlacementMatrix::new(Policy::FogStore, scenario.files.len());
    let mut trace = PlacementTrace::new(Policy::FogStore);

    for f in scenario.files_by_write_rate() {
        let gateways = &scenario.files[f].sensor_gateways;
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(rng_seed, &[f as u64]));
        let source = gateways[rng.gen_range(0..gateways.len())];

        let dist = hop_distances(net, source);
        let path = hop_path(net, source, cloud)?.ok_or(Error::Unreachable(source))?;
        let mut walk: Vec<DeviceId> = path.into_iter().filter(|&d| d != cloud).collect();
        let mut rest: Vec<DeviceId> = net
            .up_devices()
            .filter(|&d| net.role(d) != DeviceRole::Cloud && !walk.contains(&d))
            .filter(|&d| dist[d.index()].is_some())
            .collect();
        rest.sort_by_key(|&d| (dist[d.index()], d));
        walk.extend(rest);

        let hops = CentralityMap::from_vec(
            dist.iter()
                .map(|h| h.map_or(f64::INFINITY, f64::from))
                .collect(),
        );
        let mut placer = FilePlacer::new(&mut ledger, scenario, f);
        for &d in &walk {
            if placer.chosen.len() == REPLICATION_FACTOR {
                break;
            }
            if let Some(why) = placer.rejection(d) {
                placer.reject(d, hops.get(d), why);
                continue;
            }
            if let [a, b] = placer.chosen[..] {
                let side = regions.side_of(d);
                if regions.side_of(a) == side && regions.side_of(b) == side {
                    placer.reject(d, hops.get(d), Outcome::WrongPartition);
                    continue;
                }
            }
            placer.accept(d, hops.get(d));
        }
        while placer.chosen.len() < REPLICATION_FACTOR {
            placer.overflow()?;
        }
        placer.trace.partition = Some(regions.clone());
        placer.trace.centralities = vec![("hops-from-source", hops)];
        placer.finish(&mut matrix, &mut trace);
    }
    Ok((matrix, trace))
}
