//! Hop-count betweenness restricted to source/target subsets (Brandes).

use std::collections::VecDeque;

use super::CentralityMap;
use crate::error::{Error, Result};
use crate::network::{DeviceId, FogNetwork};

/// Subset betweenness over ordered pairs `(s, t)`, `s ∈ sources`,
/// `t ∈ targets`, `s ≠ t`: each pair adds `σ_st(v) / σ_st` to every
/// intermediate device `v`. The sum is divided by the number of such pairs,
/// so scores lie in `[0, 1]`. Unreachable pairs contribute nothing.
///
/// Duplicate ids in either set are ignored.
pub fn betweenness_subset(
    net: &FogNetwork,
    sources: &[DeviceId],
    targets: &[DeviceId],
) -> Result<CentralityMap> {
    if sources.is_empty() || targets.is_empty() {
        return Err(Error::Parameter(
            "betweenness needs non-empty source and target sets".into(),
        ));
    }
    let n = net.n_devices();
    let mut is_target = vec![false; n];
    for &t in targets {
        net.require_up(t)?;
        is_target[t.index()] = true;
    }
    let mut is_source = vec![false; n];
    for &s in sources {
        net.require_up(s)?;
        is_source[s.index()] = true;
    }

    let mut score = vec![0.0; n];
    let mut order = Vec::with_capacity(n);
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![u32::MAX; n];
    let mut delta = vec![0.0f64; n];
    let mut queue = VecDeque::new();

    for s in (0..n).filter(|&i| is_source[i]) {
        order.clear();
        for i in 0..n {
            preds[i].clear();
            sigma[i] = 0.0;
            dist[i] = u32::MAX;
            delta[i] = 0.0;
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for (w, _) in net.up_neighbors(DeviceId(v)) {
                let w = w.index();
                if dist[w] == u32::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        // delta[w]: dependency of s on w, counting only paths that end in a target
        for &w in order.iter().rev() {
            let reach = if is_target[w] { 1.0 } else { 0.0 };
            let coeff = (reach + delta[w]) / sigma[w];
            for &v in &preds[w] {
                delta[v] += sigma[v] * coeff;
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }

    let overlap = (0..n).filter(|&i| is_source[i] && is_target[i]).count();
    let n_src = is_source.iter().filter(|&&b| b).count();
    let n_tgt = is_target.iter().filter(|&&b| b).count();
    let pairs = n_src * n_tgt - overlap;
    if pairs > 0 {
        let norm = pairs as f64;
        score.iter_mut().for_each(|x| *x /= norm);
    }
    Ok(CentralityMap(score))
}

/// Classical betweenness: every up device is both a source and a target.
pub fn betweenness_all(net: &FogNetwork) -> CentralityMap {
    let all: Vec<DeviceId> = net.up_devices().collect();
    if all.is_empty() {
        return CentralityMap(vec![0.0; net.n_devices()]);
    }
    betweenness_subset(net, &all, &all).expect("up devices are valid endpoints")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{DeviceAttrs, LinkAttrs};

    fn build(n: usize, edges: &[(usize, usize)]) -> FogNetwork {
        FogNetwork::build(
            vec![DeviceAttrs::fog(1); n],
            edges
                .iter()
                .map(|&(u, v)| (DeviceId(u), DeviceId(v), LinkAttrs::default())),
        )
        .unwrap()
    }

    fn ids(v: &[usize]) -> Vec<DeviceId> {
        v.iter().map(|&i| DeviceId(i)).collect()
    }

    #[test]
    fn path_middle_carries_every_path() {
        let net = build(3, &[(0, 1), (1, 2)]);
        let bc = betweenness_subset(&net, &ids(&[0]), &ids(&[2])).unwrap();
        assert_eq!(bc.as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn four_cycle_opposite_corners_split_half() {
        let net = build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let s = ids(&[0, 2]);
        let bc = betweenness_subset(&net, &s, &s).unwrap();
        assert_eq!(bc.as_slice(), &[0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn star_center_is_maximal() {
        let net = build(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let bc = betweenness_all(&net);
        // 12 leaf-to-leaf ordered pairs out of 20
        assert!((bc.get(DeviceId(0)) - 12.0 / 20.0).abs() < 1e-12);
        for leaf in 1..5 {
            assert_eq!(bc.get(DeviceId(leaf)), 0.0);
        }
    }

    #[test]
    fn path_of_five_middle_is_greatest() {
        let net = build(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let bc = betweenness_all(&net);
        let mid = bc.get(DeviceId(2));
        for i in [0, 1, 3, 4] {
            assert!(mid > bc.get(DeviceId(i)));
        }
    }

    #[test]
    fn single_endpoint_set_scores_zero() {
        let net = build(3, &[(0, 1), (1, 2)]);
        let s = ids(&[0]);
        let bc = betweenness_subset(&net, &s, &s).unwrap();
        assert!(bc.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn empty_subset_is_parameter_error() {
        let net = build(2, &[(0, 1)]);
        assert!(matches!(
            betweenness_subset(&net, &[], &ids(&[1])),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn down_devices_are_routed_around() {
        // 0-1-3 and 0-2-3; with 1 down every path uses 2
        let net = build(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let failed = net.with_down(&[DeviceId(1)]).unwrap();
        let s = ids(&[0, 3]);
        let bc = betweenness_subset(&failed, &s, &s).unwrap();
        assert_eq!(bc.get(DeviceId(2)), 1.0);
        assert_eq!(bc.get(DeviceId(1)), 0.0);
    }
}
