//! Edit distance to the extremal classes and to colourable graphs.
//!
//! Both are minimum-cost partitions into at most `k` parts where a pair costs
//! one thing inside a part and another across. Exact search assigns
//! vertices in order, opens at most one new part per step, and bounds by the
//! current cost plus, for every unassigned vertex, its cheapest placement
//! against the assigned ones. Above [`EXACT_DISTANCE_LIMIT`] vertices a
//! seeded local search gives an upper bound instead.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::SimpleGraph;
use crate::igraph::{IGraph, PairColor};

/// Largest order solved exactly.
pub const EXACT_DISTANCE_LIMIT: usize = 14;

const RESTARTS: u64 = 32;
const HEURISTIC_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    /// `𝓑_a`: blue inside, green across.
    B(usize),
    /// `𝓡_{b-1}`: red inside, green across.
    R(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distance {
    pub edits: u64,
    /// Part index of every vertex.
    pub assignment: Vec<usize>,
    /// False when the value is only a heuristic upper bound.
    pub exact: bool,
}

/// Pair costs `(inside, across)` in a dense table.
struct Costs {
    n: usize,
    k: usize,
    inside: Vec<u8>,
    across: Vec<u8>,
}

impl Costs {
    fn total(&self, lab: &[usize]) -> u64 {
        let mut c = 0u64;
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                c += self.pair(u, v, lab[u] == lab[v]) as u64;
            }
        }
        c
    }

    #[inline]
    fn pair(&self, u: usize, v: usize, same: bool) -> u8 {
        if same {
            self.inside[u * self.n + v]
        } else {
            self.across[u * self.n + v]
        }
    }
}

fn solve(costs: &Costs) -> Distance {
    if costs.n == 0 {
        return Distance { edits: 0, assignment: Vec::new(), exact: true };
    }
    let seed = local_search(costs);
    if costs.n > EXACT_DISTANCE_LIMIT {
        return Distance { exact: false, ..seed };
    }
    let prefix_len = costs.n.min(3);
    let mut prefixes = Vec::new();
    enumerate_prefixes(costs.k, prefix_len, &mut Vec::new(), 0, &mut prefixes);
    let results: Vec<Option<(u64, Vec<usize>)>> =
        prefixes.par_iter().map(|pre| branch_and_bound(costs, pre, seed.edits)).collect();
    // first strict improvement in prefix order wins, so the merge is schedule independent
    let mut best = (seed.edits, seed.assignment);
    for (c, lab) in results.into_iter().flatten() {
        if c < best.0 {
            best = (c, lab);
        }
    }
    Distance { edits: best.0, assignment: best.1, exact: true }
}

fn enumerate_prefixes(k: usize, len: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for q in 0..k.min(used + 1) {
        cur.push(q);
        enumerate_prefixes(k, len, cur, used.max(q + 1), out);
        cur.pop();
    }
}

/// Best assignment extending `prefix` with cost strictly below `bound`.
fn branch_and_bound(costs: &Costs, prefix: &[usize], bound: u64) -> Option<(u64, Vec<usize>)> {
    let (n, k) = (costs.n, costs.k);
    // place[v * k + q]: cost of putting v into part q against assigned vertices
    let mut place = vec![0u64; n * k];
    let mut lab = vec![usize::MAX; n];
    let mut cost = 0u64;
    let mut used = 0;
    for (v, &q) in prefix.iter().enumerate() {
        cost += place[v * k + q];
        assign(costs, &mut place, v, q);
        lab[v] = q;
        used = used.max(q + 1);
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut limit = bound;
    rec(costs, &mut place, &mut lab, prefix.len(), used, cost, &mut limit, &mut best);
    best
}

fn assign(costs: &Costs, place: &mut [u64], v: usize, q: usize) {
    let k = costs.k;
    for w in (v + 1)..costs.n {
        let (i, a) = (costs.pair(v, w, true) as u64, costs.pair(v, w, false) as u64);
        for r in 0..k {
            place[w * k + r] += if r == q { i } else { a };
        }
    }
}

fn unassign(costs: &Costs, place: &mut [u64], v: usize, q: usize) {
    let k = costs.k;
    for w in (v + 1)..costs.n {
        let (i, a) = (costs.pair(v, w, true) as u64, costs.pair(v, w, false) as u64);
        for r in 0..k {
            place[w * k + r] -= if r == q { i } else { a };
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rec(
    costs: &Costs,
    place: &mut [u64],
    lab: &mut [usize],
    v: usize,
    used: usize,
    cost: u64,
    limit: &mut u64,
    best: &mut Option<(u64, Vec<usize>)>,
) {
    let (n, k) = (costs.n, costs.k);
    if v == n {
        if cost < *limit {
            *limit = cost;
            *best = Some((cost, lab.to_vec()));
        }
        return;
    }
    let open = k.min(used + 1);
    let lower: u64 = (v..n).map(|w| (0..open).map(|q| place[w * k + q]).min().unwrap_or(0)).sum();
    if cost + lower >= *limit {
        return;
    }
    for q in 0..open {
        let c = cost + place[v * k + q];
        if c >= *limit {
            continue;
        }
        assign(costs, place, v, q);
        lab[v] = q;
        rec(costs, place, lab, v + 1, used.max(q + 1), c, limit, best);
        lab[v] = usize::MAX;
        unassign(costs, place, v, q);
    }
}

/// Seeded restarts of random assignment followed by single-vertex moves.
fn local_search(costs: &Costs) -> Distance {
    let (n, k) = (costs.n, costs.k);
    let mut best: Option<(u64, Vec<usize>)> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(HEURISTIC_SEED);
        rng.set_stream(restart);
        let mut lab: Vec<usize> = (0..n).map(|_| (rng.next_u32() as usize) % k).collect();
        let mut cur = costs.total(&lab);
        loop {
            let mut improved = false;
            for v in 0..n {
                let here = lab[v];
                let mut gain_best = (0i64, here);
                for q in 0..k {
                    if q == here {
                        continue;
                    }
                    let mut delta = 0i64;
                    for w in 0..n {
                        if w == v {
                            continue;
                        }
                        let (x, y) = (v.min(w), v.max(w));
                        let before = costs.pair(x, y, lab[w] == here) as i64;
                        let after = costs.pair(x, y, lab[w] == q) as i64;
                        delta += after - before;
                    }
                    if delta < gain_best.0 {
                        gain_best = (delta, q);
                    }
                }
                if gain_best.0 < 0 {
                    lab[v] = gain_best.1;
                    cur = (cur as i64 + gain_best.0) as u64;
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| cur < b.0) {
            best = Some((cur, lab));
        }
    }
    let (edits, assignment) = best.expect("at least one restart");
    Distance { edits, assignment, exact: false }
}

fn build_costs(n: usize, k: usize, f: impl Fn(usize, usize) -> (u8, u8)) -> Costs {
    let mut inside = vec![0u8; n * n];
    let mut across = vec![0u8; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            let (i, a) = f(u, v);
            inside[u * n + v] = i;
            across[u * n + v] = a;
        }
    }
    Costs { n, k, inside, across }
}

/// Fewest recolourings that turn `g` into a member of the class.
pub fn distance_to_class(g: &IGraph, class: ClassKind) -> Result<Distance> {
    let (k, inside_colour) = match class {
        ClassKind::B(a) => (a, PairColor::Blue),
        ClassKind::R(b1) => (b1, PairColor::Red),
    };
    if k == 0 {
        return Err(invalid("a class needs at least one part"));
    }
    let costs = build_costs(g.n(), k, |u, v| {
        let c = g.color(u, v);
        (u8::from(c != inside_colour), u8::from(c != PairColor::Green))
    });
    Ok(solve(&costs))
}

/// Fewest edge deletions making `g` properly `k`-colourable, i.e. the
/// minimum over partitions into `k` parts of the edges inside parts.
pub fn distance_to_colorable(g: &SimpleGraph, k: usize) -> Result<Distance> {
    if k == 0 {
        return Err(invalid("need at least one colour"));
    }
    let costs = build_costs(g.n(), k, |u, v| (u8::from(g.has_edge(u, v)), 0));
    Ok(solve(&costs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{blue_construction, red_construction};
    use proptest::prelude::*;
    use rand_core::RngCore;

    /// All `k^n` labelled assignments.
    fn oracle(costs: &Costs) -> u64 {
        let (n, k) = (costs.n, costs.k);
        let mut lab = vec![0usize; n];
        let mut best = u64::MAX;
        loop {
            best = best.min(costs.total(&lab));
            let mut i = 0;
            while i < n && lab[i] == k - 1 {
                lab[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
            lab[i] += 1;
        }
    }

    #[test]
    fn members_have_distance_zero() {
        let d = distance_to_class(&blue_construction(3, 10), ClassKind::B(3)).unwrap();
        assert_eq!(d.edits, 0);
        assert!(d.exact);
        let d = distance_to_class(&red_construction(2, 9), ClassKind::R(2)).unwrap();
        assert_eq!(d.edits, 0);
    }

    #[test]
    fn one_flip_costs_one() {
        let mut g = blue_construction(2, 8);
        g.set(0, 1, PairColor::Green);
        assert_eq!(distance_to_class(&g, ClassKind::B(2)).unwrap().edits, 1);
    }

    #[test]
    fn bipartite_graph_is_free() {
        let g = SimpleGraph::from_edges(6, &[(0, 3), (1, 4), (2, 5), (0, 5)]);
        assert_eq!(distance_to_colorable(&g, 2).unwrap().edits, 0);
        let tri = SimpleGraph::complete(3);
        assert_eq!(distance_to_colorable(&tri, 2).unwrap().edits, 1);
    }

    #[test]
    fn large_inputs_are_flagged() {
        let g = blue_construction(2, 16);
        let d = distance_to_class(&g, ClassKind::B(2)).unwrap();
        assert!(!d.exact);
        assert_eq!(d.edits, 0);
    }

    #[test]
    fn reported_cost_matches_assignment() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let g = IGraph::from_fn(9, |_, _| PairColor::ALL[(rng.next_u32() % 3) as usize]);
            let d = distance_to_class(&g, ClassKind::B(3)).unwrap();
            let costs = build_costs(9, 3, |u, v| {
                let c = g.color(u, v);
                (u8::from(c != PairColor::Blue), u8::from(c != PairColor::Green))
            });
            assert_eq!(costs.total(&d.assignment), d.edits);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn class_distance_matches_oracle(n in 1usize..=8, k in 1usize..=3, seed in any::<u64>(), red in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = IGraph::from_fn(n, |_, _| PairColor::ALL[(rng.next_u32() % 4) as usize]);
            let class = if red { ClassKind::R(k) } else { ClassKind::B(k) };
            let inside = if red { PairColor::Red } else { PairColor::Blue };
            let costs = build_costs(n, k, |u, v| {
                let c = g.color(u, v);
                (u8::from(c != inside), u8::from(c != PairColor::Green))
            });
            prop_assert_eq!(distance_to_class(&g, class).unwrap().edits, oracle(&costs));
        }

        #[test]
        fn colorable_distance_matches_oracle(n in 1usize..=8, k in 1usize..=3, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = SimpleGraph::empty(n);
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.next_u32() % 2 == 0 {
                        g.add_edge(u, v);
                    }
                }
            }
            let costs = build_costs(n, k, |u, v| (u8::from(g.has_edge(u, v)), 0));
            prop_assert_eq!(distance_to_colorable(&g, k).unwrap().edits, oracle(&costs));
        }
    }
}
