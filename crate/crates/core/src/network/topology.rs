//! Synthetic topologies and role assignment.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DeviceAttrs, DeviceId, DeviceRole, FogNetwork, LinkAttrs};
use crate::analysis::betweenness_all;
use crate::error::{Error, Result};

/// Barabási–Albert preferential attachment.
///
/// Starts from a complete graph on `max(attach_m, 1)` nodes; every later node
/// attaches to `attach_m` distinct existing nodes drawn with probability
/// proportional to degree. Yields `C(m, 2) + m·(n − m)` edges, so `m = 1`
/// produces a tree and `m = 2` produces `2·(n − 2) + 1`.
pub fn barabasi_albert_edges<R: Rng>(
    n_devices: usize,
    attach_m: usize,
    rng: &mut R,
) -> Result<Vec<(usize, usize)>> {
    if attach_m < 1 || n_devices <= attach_m {
        return Err(Error::Parameter(format!(
            "Barabási–Albert needs n > m >= 1 (got n={n_devices}, m={attach_m})"
        )));
    }
    let mut edges = Vec::with_capacity(attach_m * n_devices);
    // every edge endpoint once: sampling from it is degree-proportional
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * attach_m * n_devices);
    for a in 0..attach_m {
        for b in a + 1..attach_m {
            edges.push((a, b));
            endpoints.extend([a, b]);
        }
    }
    let mut targets = Vec::with_capacity(attach_m);
    for v in attach_m.max(1)..n_devices {
        targets.clear();
        while targets.len() < attach_m {
            let t = if endpoints.is_empty() {
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        targets.sort_unstable();
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Ok(edges)
}

/// Barabási–Albert network of plain fog devices with unit link attributes and
/// zero capacity. Scenario generation draws real attributes separately.
pub fn generate_barabasi_albert(n_devices: usize, attach_m: usize, rng_seed: u64) -> Result<FogNetwork> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let edges = barabasi_albert_edges(n_devices, attach_m, &mut rng)?;
    FogNetwork::build(
        vec![DeviceAttrs::fog(0); n_devices],
        edges
            .into_iter()
            .map(|(u, v)| (DeviceId(u), DeviceId(v), LinkAttrs::default())),
    )
}

/// Devices ordered by ascending whole-graph betweenness, ties by id.
fn by_betweenness(net: &FogNetwork, candidates: Vec<DeviceId>, descending: bool) -> Vec<DeviceId> {
    let bc = betweenness_all(net);
    let mut ordered = candidates;
    ordered.sort_by(|&x, &y| {
        let (bx, by) = (bc.get(x), bc.get(y));
        let primary = if descending { by.total_cmp(&bx) } else { bx.total_cmp(&by) };
        primary.then(x.cmp(&y))
    });
    ordered
}

/// Marks the `floor(fraction · n)` fog devices with the lowest betweenness as
/// gateways, where `n` counts every non-cloud device.
pub fn assign_gateways(network: &FogNetwork, gateway_fraction: f64) -> Result<FogNetwork> {
    if !(gateway_fraction > 0.0 && gateway_fraction < 1.0) {
        return Err(Error::Parameter(format!(
            "gateway fraction must lie in (0, 1), got {gateway_fraction}"
        )));
    }
    let pool: Vec<DeviceId> = network
        .device_ids()
        .filter(|&d| network.role(d) == DeviceRole::Fog)
        .collect();
    let count = (gateway_fraction * network.fog_devices().count() as f64).floor() as usize;
    let chosen: Vec<DeviceId> = by_betweenness(network, pool, false)
        .into_iter()
        .take(count)
        .collect();
    Ok(network.with_roles(&chosen, DeviceRole::Gateway))
}

/// Adds a cloud device linked to the `uplink_count` plain fog devices with
/// the highest betweenness, all uplinks sharing `uplink_attrs`.
pub fn attach_cloud(network: &FogNetwork, uplink_count: usize, uplink_attrs: LinkAttrs) -> Result<FogNetwork> {
    attach_cloud_with(network, uplink_count, |_| uplink_attrs)
}

/// As [`attach_cloud`], with per-uplink attributes `attrs_for(i)` for the
/// `i`-th uplink in descending-betweenness order.
pub fn attach_cloud_with(
    network: &FogNetwork,
    uplink_count: usize,
    mut attrs_for: impl FnMut(usize) -> LinkAttrs,
) -> Result<FogNetwork> {
    if network.cloud().is_some() {
        return Err(Error::Topology("network already has a cloud device".into()));
    }
    if uplink_count == 0 {
        return Err(Error::Parameter("cloud needs at least one uplink".into()));
    }
    let pool: Vec<DeviceId> = network
        .device_ids()
        .filter(|&d| network.role(d) == DeviceRole::Fog)
        .collect();
    if pool.is_empty() {
        return Err(Error::Topology("no non-gateway fog device to attach the cloud to".into()));
    }
    let uplinks: Vec<DeviceId> = by_betweenness(network, pool, true)
        .into_iter()
        .take(uplink_count)
        .collect();

    let cloud = DeviceId(network.n_devices());
    let mut devices = network.devices().to_vec();
    devices.push(DeviceAttrs::cloud());
    let mut edges: Vec<_> = network.links().iter().map(|l| (l.a, l.b, l.attrs)).collect();
    edges.extend(
        uplinks
            .iter()
            .enumerate()
            .map(|(i, &d)| (d, cloud, attrs_for(i))),
    );
    FogNetwork::build(devices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> FogNetwork {
        FogNetwork::build(
            vec![DeviceAttrs::fog(1); n],
            (1..n).map(|i| (DeviceId(i - 1), DeviceId(i), LinkAttrs::default())),
        )
        .unwrap()
    }

    fn star(leaves: usize) -> FogNetwork {
        FogNetwork::build(
            vec![DeviceAttrs::fog(1); leaves + 1],
            (1..=leaves).map(|i| (DeviceId(0), DeviceId(i), LinkAttrs::default())),
        )
        .unwrap()
    }

    #[test]
    fn ba_with_m1_is_a_tree() {
        let net = generate_barabasi_albert(5, 1, 7).unwrap();
        assert_eq!(net.n_devices(), 5);
        assert_eq!(net.n_links(), 4);
        assert!(net.is_connected());
    }

    #[test]
    fn ba_edge_count_for_m2() {
        let net = generate_barabasi_albert(200, 2, 1).unwrap();
        assert_eq!(net.n_devices(), 200);
        assert_eq!(net.n_links(), 2 * (200 - 2) + 1);
        assert!(net.is_connected());
    }

    #[test]
    fn ba_general_edge_count() {
        for m in 1..5 {
            let net = generate_barabasi_albert(40, m, 3).unwrap();
            assert_eq!(net.n_links(), m * (m - 1) / 2 + m * (40 - m), "m={m}");
        }
    }

    #[test]
    fn ba_is_deterministic_per_seed() {
        let a = generate_barabasi_albert(60, 2, 11).unwrap();
        let b = generate_barabasi_albert(60, 2, 11).unwrap();
        let c = generate_barabasi_albert(60, 2, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.links(), c.links());
    }

    #[test]
    fn ba_rejects_bad_parameters() {
        assert!(generate_barabasi_albert(2, 2, 0).is_err());
        assert!(generate_barabasi_albert(5, 0, 0).is_err());
    }

    #[test]
    fn path_endpoints_become_gateways() {
        let net = assign_gateways(&path(10), 0.2).unwrap();
        assert_eq!(net.gateways(), vec![DeviceId(0), DeviceId(9)]);
    }

    #[test]
    fn star_gateways_tie_break_by_id() {
        let net = assign_gateways(&star(9), 0.3).unwrap();
        assert_eq!(net.gateways(), vec![DeviceId(1), DeviceId(2), DeviceId(3)]);
    }

    #[test]
    fn ba_gets_ten_percent_gateways() {
        let net = generate_barabasi_albert(200, 2, 5).unwrap();
        let net = assign_gateways(&net, 0.1).unwrap();
        assert_eq!(net.gateways().len(), 20);
    }

    #[test]
    fn gateway_fraction_must_be_open_unit_interval() {
        assert!(assign_gateways(&path(4), 0.0).is_err());
        assert!(assign_gateways(&path(4), 1.0).is_err());
    }

    #[test]
    fn cloud_links_to_path_middle() {
        let net = attach_cloud(&path(3), 1, LinkAttrs::default()).unwrap();
        assert_eq!(net.cloud(), Some(DeviceId(3)));
        assert_eq!(net.neighbors(DeviceId(3)), &[(DeviceId(1), 2)]);
    }

    #[test]
    fn cloud_attachment_adds_one_device_and_uplinks() {
        let base = assign_gateways(&generate_barabasi_albert(200, 2, 9).unwrap(), 0.1).unwrap();
        let a = attach_cloud(&base, 3, LinkAttrs::default()).unwrap();
        let b = attach_cloud(&base, 3, LinkAttrs::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_devices(), 201);
        assert_eq!(a.n_links(), base.n_links() + 3);
        let cloud = a.cloud().unwrap();
        assert!(a
            .neighbors(cloud)
            .iter()
            .all(|&(d, _)| a.role(d) == DeviceRole::Fog));
        assert_eq!(
            a.device_ids().filter(|&d| a.role(d) == DeviceRole::Cloud).count(),
            1
        );
    }

    #[test]
    fn cloud_needs_an_eligible_device() {
        let all_gw = path(2).with_roles(&[DeviceId(0), DeviceId(1)], DeviceRole::Gateway);
        assert!(matches!(
            attach_cloud(&all_gw, 1, LinkAttrs::default()),
            Err(Error::Topology(_))
        ));
        let once = attach_cloud(&path(3), 1, LinkAttrs::default()).unwrap();
        assert!(attach_cloud(&once, 1, LinkAttrs::default()).is_err());
    }
}
