//! Kernighan–Lin balanced bipartitioning.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::{DeviceId, EdgeWeights, FogNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bipartition {
    /// Sorted ascending.
    pub part_a: Vec<DeviceId>,
    /// Sorted ascending.
    pub part_b: Vec<DeviceId>,
}

impl Bipartition {
    pub fn side_of(&self, id: DeviceId) -> Option<Side> {
        if self.part_a.binary_search(&id).is_ok() {
            Some(Side::A)
        } else if self.part_b.binary_search(&id).is_ok() {
            Some(Side::B)
        } else {
            None
        }
    }

    pub fn part(&self, side: Side) -> &[DeviceId] {
        match side {
            Side::A => &self.part_a,
            Side::B => &self.part_b,
        }
    }
}

/// Sum of the weights of up links whose endpoints lie on different sides.
pub fn cut_cost(net: &FogNetwork, weights: &EdgeWeights, bip: &Bipartition) -> f64 {
    net.links()
        .iter()
        .enumerate()
        .filter(|(_, l)| net.is_up(l.a) && net.is_up(l.b))
        .filter_map(|(id, l)| match (bip.side_of(l.a), bip.side_of(l.b)) {
            (Some(x), Some(y)) if x != y => Some(weights.get(id)),
            _ => None,
        })
        .sum()
}

const GAIN_EPS: f64 = 1e-9;
const MAX_PASSES: usize = 100;

/// Balanced bipartition of the up devices minimizing the weighted cut.
///
/// The seed shuffles the up devices into the initial split (first `n / 2`
/// go to side A); passes of tentative pair swaps then run until a pass finds
/// no positive cumulative gain. The result is a local optimum: no single
/// swap of an A device with a B device lowers the cut.
pub fn kernighan_lin_bipartition(
    net: &FogNetwork,
    edge_weights: &EdgeWeights,
    rng_seed: u64,
) -> Result<Bipartition> {
    let mut nodes: Vec<DeviceId> = net.up_devices().collect();
    let n = nodes.len();
    if n < 2 {
        return Err(Error::Parameter(format!(
            "bipartition needs at least 2 up devices, got {n}"
        )));
    }
    let mut local = vec![usize::MAX; net.n_devices()];
    for (i, d) in nodes.iter().enumerate() {
        local[d.index()] = i;
    }
    let mut cost = vec![0.0f64; n * n];
    for (id, l) in net.links().iter().enumerate() {
        let (a, b) = (local[l.a.index()], local[l.b.index()]);
        if a != usize::MAX && b != usize::MAX {
            let w = edge_weights.get(id);
            cost[a * n + b] = w;
            cost[b * n + a] = w;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    // in_b[i]: local node i is on side B
    let mut in_b = vec![false; n];
    for &i in &order[n / 2..] {
        in_b[i] = true;
    }

    let mut kl = KlState {
        n,
        cost: &cost,
        in_b,
    };
    for _ in 0..MAX_PASSES {
        if !kl.pass() {
            break;
        }
    }

    let mut part_a = Vec::with_capacity(n / 2 + 1);
    let mut part_b = Vec::with_capacity(n / 2 + 1);
    for (i, d) in nodes.drain(..).enumerate() {
        if kl.in_b[i] {
            part_b.push(d);
        } else {
            part_a.push(d);
        }
    }
    Ok(Bipartition { part_a, part_b })
}

struct KlState<'a> {
    n: usize,
    cost: &'a [f64],
    in_b: Vec<bool>,
}

impl KlState<'_> {
    #[inline]
    fn c(&self, i: usize, j: usize) -> f64 {
        self.cost[i * self.n + j]
    }

    /// Runs one pass; returns whether the partition changed.
    fn pass(&mut self) -> bool {
        let n = self.n;
        // D = external − internal cost
        let mut d = vec![0.0f64; n];
        for (i, di) in d.iter_mut().enumerate() {
            for j in 0..n {
                let w = self.c(i, j);
                if w != 0.0 {
                    if self.in_b[i] == self.in_b[j] {
                        *di -= w;
                    } else {
                        *di += w;
                    }
                }
            }
        }
        let mut locked = vec![false; n];
        let n_b = self.in_b.iter().filter(|&&b| b).count();
        let steps = n_b.min(n - n_b);
        let mut swaps = Vec::with_capacity(steps);
        let mut gains = Vec::with_capacity(steps);
        let mut side_a = Vec::with_capacity(n);
        let mut side_b = Vec::with_capacity(n);

        for _ in 0..steps {
            side_a.clear();
            side_b.clear();
            for i in (0..n).filter(|&i| !locked[i]) {
                if self.in_b[i] {
                    side_b.push(i);
                } else {
                    side_a.push(i);
                }
            }
            let by_d = |x: &usize, y: &usize| d[*y].total_cmp(&d[*x]).then(x.cmp(y));
            side_a.sort_by(by_d);
            side_b.sort_by(by_d);

            let mut best = f64::NEG_INFINITY;
            let mut pair = (side_a[0], side_b[0]);
            for &a in &side_a {
                if d[a] + d[side_b[0]] <= best {
                    break;
                }
                for &b in &side_b {
                    let bound = d[a] + d[b];
                    if bound <= best {
                        break;
                    }
                    let g = bound - 2.0 * self.c(a, b);
                    if g > best {
                        best = g;
                        pair = (a, b);
                    }
                }
            }

            let (a, b) = pair;
            locked[a] = true;
            locked[b] = true;
            for x in (0..n).filter(|&x| !locked[x]) {
                let (ca, cb) = (self.c(x, a), self.c(x, b));
                if self.in_b[x] {
                    d[x] += 2.0 * cb - 2.0 * ca;
                } else {
                    d[x] += 2.0 * ca - 2.0 * cb;
                }
            }
            swaps.push(pair);
            gains.push(best);
        }

        let mut best_k = 0;
        let mut best_total = 0.0;
        let mut running = 0.0;
        for (k, g) in gains.iter().enumerate() {
            running += g;
            if running > best_total + GAIN_EPS {
                best_total = running;
                best_k = k + 1;
            }
        }
        if best_k == 0 {
            return false;
        }
        for &(a, b) in &swaps[..best_k] {
            self.in_b[a] = true;
            self.in_b[b] = false;
        }
        true
    }
}
