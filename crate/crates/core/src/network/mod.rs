//! Physical layer: devices, links and their attributes.

pub(crate) mod format;
mod topology;
mod weights;

use std::collections::HashSet;
use std::fmt;

pub use format::{parse_network, write_network};
pub use topology::{
    assign_gateways, attach_cloud, attach_cloud_with, barabasi_albert_edges,
    generate_barabasi_albert,
};
pub use weights::{weight_by_hop_count, EdgeWeights};

use crate::error::{Error, Result};

/// Storage capacity used for the cloud provider.
pub const UNBOUNDED_CAPACITY: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeviceId(pub usize);

impl DeviceId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for DeviceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index into [`FogNetwork::links`].
pub type LinkId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeviceRole {
    Fog,
    Gateway,
    Cloud,
}

impl DeviceRole {
    pub fn as_str(self) -> &'static str {
        match self {
            DeviceRole::Fog => "fog",
            DeviceRole::Gateway => "gateway",
            DeviceRole::Cloud => "cloud",
        }
    }
}

impl std::str::FromStr for DeviceRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fog" => Ok(DeviceRole::Fog),
            "gateway" => Ok(DeviceRole::Gateway),
            "cloud" => Ok(DeviceRole::Cloud),
            other => Err(format!("unknown device role `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeviceAttrs {
    pub role: DeviceRole,
    /// Storage units. The cloud uses [`UNBOUNDED_CAPACITY`].
    pub storage_capacity: u64,
}

impl DeviceAttrs {
    pub fn fog(storage_capacity: u64) -> Self {
        DeviceAttrs {
            role: DeviceRole::Fog,
            storage_capacity,
        }
    }

    pub fn gateway(storage_capacity: u64) -> Self {
        DeviceAttrs {
            role: DeviceRole::Gateway,
            storage_capacity,
        }
    }

    pub fn cloud() -> Self {
        DeviceAttrs {
            role: DeviceRole::Cloud,
            storage_capacity: UNBOUNDED_CAPACITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkAttrs {
    pub propagation_ms: f64,
    pub bandwidth_bytes_per_ms: f64,
}

impl LinkAttrs {
    pub fn new(propagation_ms: f64, bandwidth_bytes_per_ms: f64) -> Self {
        LinkAttrs {
            propagation_ms,
            bandwidth_bytes_per_ms,
        }
    }

    /// Store-and-forward latency of one packet over this link.
    #[inline]
    pub fn latency_ms(&self, packet_bytes: f64) -> f64 {
        self.propagation_ms + packet_bytes / self.bandwidth_bytes_per_ms
    }
}

impl Default for LinkAttrs {
    fn default() -> Self {
        LinkAttrs::new(1.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    /// Lower endpoint id.
    pub a: DeviceId,
    /// Higher endpoint id.
    pub b: DeviceId,
    pub attrs: LinkAttrs,
}

impl Link {
    pub fn other(&self, from: DeviceId) -> DeviceId {
        if from == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Undirected simple graph of fog devices.
///
/// Values are immutable once built; failure injection and role assignment
/// return modified copies.
#[derive(Debug, Clone, PartialEq)]
pub struct FogNetwork {
    devices: Vec<DeviceAttrs>,
    links: Vec<Link>,
    /// Per device, `(neighbor, link)` sorted by neighbor id.
    adjacency: Vec<Vec<(DeviceId, LinkId)>>,
    up: Vec<bool>,
}

impl FogNetwork {
    /// Validates and assembles a network. Device ids are the positions in
    /// `devices`; links keep the given order.
    pub fn build(
        devices: Vec<DeviceAttrs>,
        edges: impl IntoIterator<Item = (DeviceId, DeviceId, LinkAttrs)>,
    ) -> Result<Self> {
        let n = devices.len();
        let clouds = devices
            .iter()
            .filter(|d| d.role == DeviceRole::Cloud)
            .count();
        if clouds > 1 {
            return Err(Error::Topology(format!(
                "{clouds} cloud devices; at most one allowed"
            )));
        }

        let mut seen = HashSet::new();
        let mut links = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v, attrs) in edges {
            for d in [u, v] {
                if d.index() >= n {
                    return Err(Error::DanglingDevice(d));
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateLink(a, b));
            }
            if !(attrs.propagation_ms.is_finite() && attrs.propagation_ms > 0.0) {
                return Err(Error::InvalidLink {
                    a,
                    b,
                    reason: "propagation must be positive",
                });
            }
            if !(attrs.bandwidth_bytes_per_ms.is_finite() && attrs.bandwidth_bytes_per_ms > 0.0) {
                return Err(Error::InvalidLink {
                    a,
                    b,
                    reason: "bandwidth must be positive",
                });
            }
            let id = links.len();
            adjacency[a.index()].push((b, id));
            adjacency[b.index()].push((a, id));
            links.push(Link { a, b, attrs });
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(FogNetwork {
            up: vec![true; n],
            devices,
            links,
            adjacency,
        })
    }

    pub fn n_devices(&self) -> usize {
        self.devices.len()
    }

    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn device_ids(&self) -> impl Iterator<Item = DeviceId> + '_ {
        (0..self.devices.len()).map(DeviceId)
    }

    pub fn devices(&self) -> &[DeviceAttrs] {
        &self.devices
    }

    pub fn device(&self, id: DeviceId) -> Result<&DeviceAttrs> {
        self.devices.get(id.index()).ok_or(Error::UnknownDevice(id))
    }

    pub fn role(&self, id: DeviceId) -> DeviceRole {
        self.devices[id.index()].role
    }

    pub fn capacity(&self, id: DeviceId) -> u64 {
        self.devices[id.index()].storage_capacity
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, id: LinkId) -> &Link {
        &self.links[id]
    }

    /// Neighbors in the full graph, including down devices.
    pub fn neighbors(&self, id: DeviceId) -> &[(DeviceId, LinkId)] {
        &self.adjacency[id.index()]
    }

    /// Neighbors reachable over a link whose endpoints are both up.
    pub fn up_neighbors(&self, id: DeviceId) -> impl Iterator<Item = (DeviceId, LinkId)> + '_ {
        let src_up = self.up[id.index()];
        self.adjacency[id.index()]
            .iter()
            .copied()
            .filter(move |&(v, _)| src_up && self.up[v.index()])
    }

    pub fn link_between(&self, u: DeviceId, v: DeviceId) -> Option<LinkId> {
        let list = self.adjacency.get(u.index())?;
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|pos| list[pos].1)
    }

    pub fn is_up(&self, id: DeviceId) -> bool {
        self.up[id.index()]
    }

    pub fn up_devices(&self) -> impl Iterator<Item = DeviceId> + '_ {
        self.device_ids().filter(|&d| self.up[d.index()])
    }

    pub fn n_up(&self) -> usize {
        self.up.iter().filter(|&&u| u).count()
    }

    /// Fails with [`Error::UnknownDevice`] or [`Error::DeviceDown`].
    pub fn require_up(&self, id: DeviceId) -> Result<()> {
        match self.up.get(id.index()) {
            None => Err(Error::UnknownDevice(id)),
            Some(false) => Err(Error::DeviceDown(id)),
            Some(true) => Ok(()),
        }
    }

    pub fn cloud(&self) -> Option<DeviceId> {
        self.devices
            .iter()
            .position(|d| d.role == DeviceRole::Cloud)
            .map(DeviceId)
    }

    pub fn gateways(&self) -> Vec<DeviceId> {
        self.device_ids()
            .filter(|&d| self.role(d) == DeviceRole::Gateway)
            .collect()
    }

    /// Every device except the cloud.
    pub fn fog_devices(&self) -> impl Iterator<Item = DeviceId> + '_ {
        self.device_ids()
            .filter(|&d| self.role(d) != DeviceRole::Cloud)
    }

    /// Copy of this network with exactly `down` marked as failed.
    pub fn with_down(&self, down: &[DeviceId]) -> Result<Self> {
        let mut up = vec![true; self.devices.len()];
        for &d in down {
            *up.get_mut(d.index()).ok_or(Error::UnknownDevice(d))? = false;
        }
        Ok(FogNetwork {
            up,
            ..self.clone()
        })
    }

    pub(crate) fn with_roles(&self, ids: &[DeviceId], role: DeviceRole) -> Self {
        let mut next = self.clone();
        for &d in ids {
            next.devices[d.index()].role = role;
        }
        next
    }

    /// Whether every up device is reachable from every other up device.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.up_devices().next() else {
            return true;
        };
        let dist = crate::analysis::hop_distances(self, start);
        self.up_devices().all(|d| dist[d.index()].is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fogs(n: usize) -> Vec<DeviceAttrs> {
        vec![DeviceAttrs::fog(10); n]
    }

    fn e(u: usize, v: usize) -> (DeviceId, DeviceId, LinkAttrs) {
        (DeviceId(u), DeviceId(v), LinkAttrs::default())
    }

    #[test]
    fn path_of_three() {
        let net = FogNetwork::build(fogs(3), [e(0, 1), e(1, 2)]).unwrap();
        assert_eq!(net.n_devices(), 3);
        assert_eq!(net.n_links(), 2);
        assert_eq!(net.link_between(DeviceId(2), DeviceId(1)), Some(1));
        assert_eq!(net.link_between(DeviceId(0), DeviceId(2)), None);
        assert!(net.is_connected());
    }

    #[test]
    fn rejects_self_loop() {
        let err = FogNetwork::build(fogs(3), [e(2, 2)]).unwrap_err();
        assert_eq!(err, Error::SelfLoop(DeviceId(2)));
    }

    #[test]
    fn rejects_duplicate_in_either_direction() {
        let err = FogNetwork::build(fogs(3), [e(0, 1), e(1, 0)]).unwrap_err();
        assert_eq!(err, Error::DuplicateLink(DeviceId(0), DeviceId(1)));
    }

    #[test]
    fn rejects_dangling_id() {
        let err = FogNetwork::build(fogs(3), [e(0, 3)]).unwrap_err();
        assert_eq!(err, Error::DanglingDevice(DeviceId(3)));
    }

    #[test]
    fn rejects_non_positive_link_attrs() {
        let bad = (DeviceId(0), DeviceId(1), LinkAttrs::new(0.0, 5.0));
        assert!(matches!(
            FogNetwork::build(fogs(2), [bad]),
            Err(Error::InvalidLink { .. })
        ));
        let bad = (DeviceId(0), DeviceId(1), LinkAttrs::new(1.0, -5.0));
        assert!(matches!(
            FogNetwork::build(fogs(2), [bad]),
            Err(Error::InvalidLink { .. })
        ));
    }

    #[test]
    fn accepts_nine_node_example_infrastructure() {
        // cloud 0, intermediate fog 1..=5, gateways 6..=8
        let mut devices = vec![DeviceAttrs::cloud()];
        devices.extend(fogs(5));
        devices.extend(vec![DeviceAttrs::gateway(10); 3]);
        let edges = [
            e(0, 1),
            e(1, 2),
            e(1, 3),
            e(2, 4),
            e(3, 5),
            e(4, 6),
            e(4, 7),
            e(5, 8),
            e(2, 3),
        ];
        let net = FogNetwork::build(devices, edges).unwrap();
        assert_eq!(net.n_devices(), 9);
        assert_eq!(net.cloud(), Some(DeviceId(0)));
        assert_eq!(net.gateways(), vec![DeviceId(6), DeviceId(7), DeviceId(8)]);
    }

    #[test]
    fn rejects_two_clouds() {
        let devices = vec![DeviceAttrs::cloud(), DeviceAttrs::cloud()];
        assert!(matches!(
            FogNetwork::build(devices, [e(0, 1)]),
            Err(Error::Topology(_))
        ));
    }

    #[test]
    fn down_devices_drop_out_of_up_neighbors() {
        let net = FogNetwork::build(fogs(3), [e(0, 1), e(1, 2)]).unwrap();
        let failed = net.with_down(&[DeviceId(1)]).unwrap();
        assert_eq!(failed.up_neighbors(DeviceId(0)).count(), 0);
        assert!(!failed.is_connected());
        assert_eq!(failed.require_up(DeviceId(1)), Err(Error::DeviceDown(DeviceId(1))));
        assert_eq!(failed.require_up(DeviceId(9)), Err(Error::UnknownDevice(DeviceId(9))));
    }

    #[test]
    fn link_latency_is_propagation_plus_transmission() {
        let l = LinkAttrs::new(2.0, 50_000.0);
        assert_eq!(l.latency_ms(100_000.0), 4.0);
    }
}
