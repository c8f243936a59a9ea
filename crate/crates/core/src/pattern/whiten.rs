//! Greedy whitening: make an igraph pattern-free by whitening few pairs.
//!
//! Every pattern pair is constrained, so an embedding onto a vertex set `S`
//! uses every pair inside `S`; whitening any one of them destroys all copies
//! on `S`. The problem is therefore a hitting-set problem over the copy
//! subsets. No optimality is claimed.

use serde::Serialize;

use crate::igraph::{IGraph, PairColor};

use super::search::{all_copies, contains_using_pair};
use super::Pattern;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WhitenOutcome {
    #[serde(skip)]
    pub graph: IGraph,
    /// Whitened pairs `(u, v)` with `u < v`, in the order they were chosen.
    pub whitened: Vec<(usize, usize)>,
    pub copies_before: usize,
}

/// Repeatedly whitens the pair lying in the most surviving copies (ties go
/// to the lexicographically smallest pair), then restores any whitened pair
/// whose original colour does not recreate a copy.
pub fn greedy_whiten(g: &IGraph, pat: &Pattern) -> WhitenOutcome {
    let n = g.n();
    let copies = all_copies(g, pat);
    let copies_before = copies.len();
    let mut out = g.clone();
    if copies.is_empty() || pat.h() < 2 {
        return WhitenOutcome { graph: out, whitened: Vec::new(), copies_before };
    }
    let idx = |u: usize, v: usize| u * n + v;
    let mut cover = vec![0usize; n * n];
    for s in &copies {
        for (i, &u) in s.iter().enumerate() {
            for &v in &s[i + 1..] {
                cover[idx(u, v)] += 1;
            }
        }
    }
    let mut alive = vec![true; copies.len()];
    let mut remaining = copies.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let mut best = (0usize, 0usize, 0usize);
        for u in 0..n {
            for v in (u + 1)..n {
                let c = cover[idx(u, v)];
                if c > best.0 {
                    best = (c, u, v);
                }
            }
        }
        let (_, u, v) = best;
        out.set(u, v, PairColor::White);
        chosen.push((u, v));
        for (k, s) in copies.iter().enumerate() {
            if alive[k] && s.contains(&u) && s.contains(&v) {
                alive[k] = false;
                remaining -= 1;
                for (i, &x) in s.iter().enumerate() {
                    for &y in &s[i + 1..] {
                        cover[idx(x, y)] -= 1;
                    }
                }
            }
        }
    }
    // reverse-delete pass
    let mut kept = Vec::new();
    for &(u, v) in chosen.iter().rev() {
        out.set(u, v, g.color(u, v));
        if contains_using_pair(&out, pat, u, v, None).is_some() {
            out.set(u, v, PairColor::White);
            kept.push((u, v));
        }
    }
    kept.reverse();
    WhitenOutcome { graph: out, whitened: kept, copies_before }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{contains, count_copies};
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    #[test]
    fn free_input_unchanged() {
        let e = Pattern::eye(2, 2).unwrap();
        let g = crate::constructions::blue_construction(2, 6);
        let w = greedy_whiten(&g, &e);
        assert_eq!(w.graph, g);
        assert!(w.whitened.is_empty());
    }

    #[test]
    fn green_clique_gets_whitened() {
        for (a, b) in [(2, 2), (2, 3)] {
            let e = Pattern::eye(a, b).unwrap();
            let g = IGraph::new(a + b, PairColor::Green);
            let w = greedy_whiten(&g, &e);
            assert_eq!(w.whitened.len(), 1);
            assert_eq!(w.whitened[0], (0, 1));
            assert!(contains(&w.graph, &e).is_none());
        }
    }

    #[test]
    fn random_outputs_are_free_and_minimal() {
        let e = Pattern::eye(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g = IGraph::from_fn(8, |_, _| [PairColor::Red, PairColor::Blue, PairColor::Green][(rng.next_u32() % 3) as usize]);
            let w = greedy_whiten(&g, &e);
            assert_eq!(count_copies(&w.graph, &e), 0);
            for &(u, v) in &w.whitened {
                let mut back = w.graph.clone();
                back.set(u, v, g.color(u, v));
                assert!(contains(&back, &e).is_some(), "whitened pair ({u},{v}) is redundant");
            }
            let white = w.graph.counts().white;
            assert_eq!(white, w.whitened.len());
        }
    }
}
