//! Independent sets with a prescribed number of vertices in each part.
//!
//! With `t = 1` this is the folklore transversal lemma (`e(G) < m^2` with
//! parts of size `m` forces an independent transversal). For larger `t` the
//! construction packs each part into `ceil(m / 2t)` disjoint independent
//! `t`-sets, joins two packs when any edge runs between them, and looks for
//! an independent transversal of packs. When `e(G) < (m/2t)^2` and `m > 2t`
//! this succeeds; otherwise the result is best effort.

use crate::error::{invalid, Result};
use crate::graph::SimpleGraph;

const NODE_BUDGET: u64 = 2_000_000;

/// Returns an independent set with exactly `t` vertices in every part, or
/// `None` if none was found.
pub fn transversal_independent(g: &SimpleGraph, parts: &[Vec<usize>], t: usize) -> Result<Option<Vec<usize>>> {
    validate(g, parts)?;
    if t == 0 || parts.is_empty() {
        return Ok(Some(Vec::new()));
    }
    let m = parts[0].len();
    if t > m {
        return Ok(None);
    }
    let blocks: Option<Vec<Vec<Vec<usize>>>> = if t == 1 {
        Some(parts.iter().map(|p| p.iter().map(|&v| vec![v]).collect()).collect())
    } else {
        parts.iter().map(|p| pack_part(g, p, t, m.div_ceil(2 * t))).collect()
    };
    if let Some(blocks) = blocks {
        let mut budget = NODE_BUDGET;
        if let Some(pick) = block_transversal(g, &blocks, &mut budget) {
            return Ok(Some(finish(pick)));
        }
    }
    // fall back to a direct search over t-subsets when packing was not enough
    let mut budget = NODE_BUDGET;
    Ok(direct_search(g, parts, t, &mut budget).map(finish))
}

fn finish(mut set: Vec<usize>) -> Vec<usize> {
    set.sort_unstable();
    set
}

fn validate(g: &SimpleGraph, parts: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; g.n()];
    let m = parts.first().map_or(0, Vec::len);
    for p in parts {
        if p.len() != m {
            return Err(invalid("all parts must have the same size"));
        }
        for &v in p {
            if v >= g.n() {
                return Err(invalid(format!("vertex {v} out of range")));
            }
            if seen[v] {
                return Err(invalid(format!("vertex {v} appears in two parts")));
            }
            seen[v] = true;
        }
    }
    Ok(())
}

/// Greedy minimum-degree independent set inside `pool`.
fn greedy_independent(g: &SimpleGraph, pool: &[usize]) -> Vec<usize> {
    let mut live: Vec<usize> = pool.to_vec();
    let mut out = Vec::new();
    while !live.is_empty() {
        let (pos, _) = live
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| (live.iter().filter(|&&u| g.has_edge(u, v)).count(), v))
            .expect("nonempty");
        let v = live[pos];
        out.push(v);
        live.retain(|&u| u != v && !g.has_edge(u, v));
    }
    out
}

/// `count` disjoint independent `t`-sets inside one part.
fn pack_part(g: &SimpleGraph, part: &[usize], t: usize, count: usize) -> Option<Vec<Vec<usize>>> {
    let mut pool: Vec<usize> = part.to_vec();
    let mut packs = Vec::with_capacity(count);
    for _ in 0..count {
        let ind = greedy_independent(g, &pool);
        if ind.len() < t {
            break;
        }
        let pack: Vec<usize> = ind[..t].to_vec();
        pool.retain(|v| !pack.contains(v));
        packs.push(pack);
    }
    if packs.is_empty() {
        None
    } else {
        Some(packs)
    }
}

fn blocks_adjacent(g: &SimpleGraph, x: &[usize], y: &[usize]) -> bool {
    x.iter().any(|&u| y.iter().any(|&v| g.has_edge(u, v)))
}

/// Picks one block per part with no edges between chosen blocks.
fn block_transversal(g: &SimpleGraph, blocks: &[Vec<Vec<usize>>], budget: &mut u64) -> Option<Vec<usize>> {
    // most constrained part first
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&i| (blocks[i].len(), i));
    let mut chosen: Vec<&[usize]> = Vec::new();
    fn rec<'a>(
        g: &SimpleGraph,
        blocks: &'a [Vec<Vec<usize>>],
        order: &[usize],
        chosen: &mut Vec<&'a [usize]>,
        budget: &mut u64,
    ) -> bool {
        let d = chosen.len();
        if d == order.len() {
            return true;
        }
        for b in &blocks[order[d]] {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            if chosen.iter().all(|c| !blocks_adjacent(g, c, b)) {
                chosen.push(b);
                if rec(g, blocks, order, chosen, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if rec(g, blocks, &order, &mut chosen, budget) {
        Some(chosen.iter().flat_map(|b| b.iter().copied()).collect())
    } else {
        None
    }
}

/// Exact backtracking over vertices, `t` per part, bounded by `budget`.
fn direct_search(g: &SimpleGraph, parts: &[Vec<usize>], t: usize, budget: &mut u64) -> Option<Vec<usize>> {
    fn rec(
        g: &SimpleGraph,
        parts: &[Vec<usize>],
        t: usize,
        part: usize,
        start: usize,
        taken: usize,
        chosen: &mut Vec<usize>,
        budget: &mut u64,
    ) -> bool {
        if part == parts.len() {
            return true;
        }
        if taken == t {
            return rec(g, parts, t, part + 1, 0, 0, chosen, budget);
        }
        let p = &parts[part];
        for i in start..p.len() {
            if p.len() - i < t - taken {
                break;
            }
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            let v = p[i];
            if chosen.iter().all(|&u| !g.has_edge(u, v)) {
                chosen.push(v);
                if rec(g, parts, t, part, i + 1, taken + 1, chosen, budget) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    if rec(g, parts, t, 0, 0, 0, &mut chosen, budget) {
        Some(chosen)
    } else {
        None
    }
}
