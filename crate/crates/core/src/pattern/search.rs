//! Bitset backtracking for pattern containment.
//!
//! Pattern vertices are placed one at a time. The candidate set for the next
//! vertex is the intersection of the `C_r` or `C_b` rows of the vertices
//! already placed, so a failing branch is cut as soon as any constrained pair
//! has no admissible image.

use crate::bitset::{words_for, VertexSet};
use crate::igraph::IGraph;

use super::{Embedding, Pattern};

struct Matcher<'a> {
    g: &'a IGraph,
    pat: &'a Pattern,
    words: usize,
    order: Vec<usize>,
    /// Graph vertex per placed order position.
    placed: Vec<usize>,
    /// `fixed[d]` pins order position `d` to a graph vertex.
    fixed: Vec<Option<usize>>,
    used: Vec<u64>,
    allowed: Vec<u64>,
    cand: Vec<u64>,
    map: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(g: &'a IGraph, pat: &'a Pattern, allowed: Option<&[u64]>, fixed: &[(usize, usize)]) -> Option<Matcher<'a>> {
        let words = words_for(g.n());
        let mut order: Vec<usize> = fixed.iter().map(|&(i, _)| i).collect();
        for i in pat.search_order() {
            if !order.contains(&i) {
                order.push(i);
            }
        }
        let mut pins = vec![None; pat.h()];
        for (d, &(_, v)) in fixed.iter().enumerate() {
            if v >= g.n() {
                return None;
            }
            pins[d] = Some(v);
        }
        let allowed = match allowed {
            Some(a) => a.to_vec(),
            None => VertexSet::full(g.n()).words().to_vec(),
        };
        Some(Matcher {
            g,
            pat,
            words,
            order,
            placed: vec![usize::MAX; pat.h()],
            fixed: pins,
            used: vec![0; words],
            allowed,
            cand: vec![0; words * pat.h().max(1)],
            map: vec![usize::MAX; pat.h()],
        })
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let h = self.pat.h();
        if depth == h {
            for d in 0..h {
                self.map[self.order[d]] = self.placed[d];
            }
            return visit(&self.map);
        }
        let w = self.words;
        let i = self.order[depth];
        {
            let cand = &mut self.cand[depth * w..(depth + 1) * w];
            for k in 0..w {
                cand[k] = self.allowed[k] & !self.used[k];
            }
            for d in 0..depth {
                let j = self.order[d];
                let u = self.placed[d];
                let row = if self.pat.is_red(i, j) { self.g.red_row(u) } else { self.g.blue_row(u) };
                for k in 0..w {
                    cand[k] &= row[k];
                }
            }
            if let Some(v) = self.fixed[depth] {
                let bit = (cand[v / 64] >> (v % 64)) & 1;
                for c in cand.iter_mut() {
                    *c = 0;
                }
                if bit == 1 {
                    cand[v / 64] = 1u64 << (v % 64);
                }
            }
        }
        for k in 0..w {
            let mut word = self.cand[depth * w + k];
            while word != 0 {
                let t = word.trailing_zeros() as usize;
                word &= word - 1;
                let v = k * 64 + t;
                self.placed[depth] = v;
                self.used[k] |= 1u64 << t;
                let stop = self.run(depth + 1, visit);
                self.used[k] &= !(1u64 << t);
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

/// Runs the search; `visit` gets each embedding (pattern vertex → graph
/// vertex) and returns `true` to stop. Returns whether the search stopped.
pub(crate) fn search(
    g: &IGraph,
    pat: &Pattern,
    allowed: Option<&[u64]>,
    fixed: &[(usize, usize)],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if pat.h() > g.n() {
        return false;
    }
    match Matcher::new(g, pat, allowed, fixed) {
        Some(mut m) => m.run(0, visit),
        None => false,
    }
}

fn first(g: &IGraph, pat: &Pattern, allowed: Option<&[u64]>, fixed: &[(usize, usize)]) -> Option<Embedding> {
    let mut found = None;
    search(g, pat, allowed, fixed, &mut |m| {
        found = Some(Embedding { map: m.to_vec() });
        true
    });
    found
}

/// A witness embedding of `pat` in `g`, if any.
pub fn contains(g: &IGraph, pat: &Pattern) -> Option<Embedding> {
    first(g, pat, None, &[])
}

pub fn is_free(g: &IGraph, pat: &Pattern) -> bool {
    contains(g, pat).is_none()
}

/// Containment using only vertices of `allowed`.
pub fn contains_within(g: &IGraph, pat: &Pattern, allowed: &VertexSet) -> Option<Embedding> {
    first(g, pat, Some(allowed.words()), &[])
}

/// An embedding whose image contains `v`, inside `allowed` when given.
pub fn contains_using_vertex(g: &IGraph, pat: &Pattern, v: usize, allowed: Option<&VertexSet>) -> Option<Embedding> {
    (0..pat.h()).find_map(|i| first(g, pat, allowed.map(|a| a.words()), &[(i, v)]))
}

/// An embedding whose image contains both `u` and `v` (hence uses the pair).
pub fn contains_using_pair(
    g: &IGraph,
    pat: &Pattern,
    u: usize,
    v: usize,
    allowed: Option<&VertexSet>,
) -> Option<Embedding> {
    let c = g.color(u, v);
    for i in 0..pat.h() {
        for j in 0..pat.h() {
            if i == j {
                continue;
            }
            let ok = if pat.is_red(i, j) { c.in_red() } else { c.in_blue() };
            if !ok {
                continue;
            }
            if let Some(e) = first(g, pat, allowed.map(|a| a.words()), &[(i, u), (j, v)]) {
                return Some(e);
            }
        }
    }
    None
}

/// Visits every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every vertex subset of size `h` that hosts at least one embedding, in
/// lexicographic order.
pub fn all_copies(g: &IGraph, pat: &Pattern) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = g.n();
    if pat.h() > n {
        return out;
    }
    if pat.h() == 0 {
        out.push(Vec::new());
        return out;
    }
    for_each_subset(n, pat.h(), |s| {
        let set = VertexSet::from_iter(n, s.iter().copied());
        if contains_within(g, pat, &set).is_some() {
            out.push(s.to_vec());
        }
    });
    out
}

/// Number of `h`-subsets admitting an embedding (copies counted as subsets).
pub fn count_copies(g: &IGraph, pat: &Pattern) -> usize {
    all_copies(g, pat).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{blue_construction, red_construction};
    use crate::igraph::PairColor;
    use proptest::prelude::*;

    /// All-injections oracle: try every ordered placement.
    fn brute_contains(g: &IGraph, pat: &Pattern, within: Option<&[usize]>) -> bool {
        let verts: Vec<usize> = match within {
            Some(w) => w.to_vec(),
            None => (0..g.n()).collect(),
        };
        fn rec(g: &IGraph, pat: &Pattern, verts: &[usize], map: &mut Vec<usize>) -> bool {
            let i = map.len();
            if i == pat.h() {
                return true;
            }
            for &v in verts {
                if map.contains(&v) {
                    continue;
                }
                let ok = (0..i).all(|j| {
                    let c = g.color(map[j], v);
                    if pat.is_red(i, j) {
                        c.in_red()
                    } else {
                        c.in_blue()
                    }
                });
                if ok {
                    map.push(v);
                    if rec(g, pat, verts, map) {
                        return true;
                    }
                    map.pop();
                }
            }
            false
        }
        rec(g, pat, &verts, &mut Vec::new())
    }

    fn brute_count(g: &IGraph, pat: &Pattern) -> usize {
        let mut c = 0;
        for_each_subset(g.n(), pat.h(), |s| {
            if brute_contains(g, pat, Some(s)) {
                c += 1;
            }
        });
        c
    }

    fn igraph_from(n: usize, seed: &[u8]) -> IGraph {
        let mut i = 0;
        IGraph::from_fn(n, |_, _| {
            let c = PairColor::ALL[(seed[i % seed.len()] % 4) as usize];
            i += 1;
            c
        })
    }

    #[test]
    fn subsets_enumerated_in_order() {
        let mut all = Vec::new();
        for_each_subset(4, 2, |s| all.push(s.to_vec()));
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut c = 0;
        for_each_subset(3, 0, |_| c += 1);
        assert_eq!(c, 1);
        for_each_subset(2, 3, |_| panic!("k > n"));
    }

    #[test]
    fn green_clique_contains_eye() {
        for (a, b) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
            let e = Pattern::eye(a, b).unwrap();
            let g = IGraph::new(a + b, PairColor::Green);
            let w = contains(&g, &e).expect("green matches both colours");
            assert!(w.is_valid(&g, &e));
            assert_eq!(count_copies(&g, &e), 1);
            let g1 = IGraph::new(a + b + 1, PairColor::Green);
            assert_eq!(count_copies(&g1, &e), a + b + 1);
        }
    }

    #[test]
    fn constructions_are_eye_free() {
        for a in 2..=3 {
            for b in 2..=3 {
                let e = Pattern::eye(a, b).unwrap();
                for n in 1..=8 {
                    assert!(contains(&blue_construction(a, n), &e).is_none(), "B_{a}({n})");
                    assert!(contains(&red_construction(b - 1, n), &e).is_none(), "R_{}({n})", b - 1);
                }
            }
        }
    }

    #[test]
    fn white_pairs_never_used() {
        let mut g = IGraph::new(4, PairColor::Green);
        g.set(0, 1, PairColor::White);
        let e = Pattern::eye(2, 2).unwrap();
        assert!(contains(&g, &e).is_none());
    }

    #[test]
    fn pair_and_vertex_variants() {
        let e = Pattern::eye(2, 2).unwrap();
        let mut g = IGraph::new(6, PairColor::Blue);
        for u in 0..4 {
            for v in (u + 1)..4 {
                g.set(u, v, PairColor::Green);
            }
        }
        assert!(contains_using_vertex(&g, &e, 2, None).is_some());
        assert!(contains_using_vertex(&g, &e, 5, None).is_none());
        assert!(contains_using_pair(&g, &e, 0, 3, None).is_some());
        assert!(contains_using_pair(&g, &e, 0, 4, None).is_none());
        let within = VertexSet::from_iter(6, [0, 1, 2]);
        assert!(contains_using_vertex(&g, &e, 0, Some(&within)).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn matches_all_injections_oracle(n in 0usize..=7, h in 1usize..=5, gseed in proptest::collection::vec(any::<u8>(), 1..40), pseed in proptest::collection::vec(any::<bool>(), 10)) {
            let g = igraph_from(n, &gseed);
            let mut pairs = Vec::new();
            let mut k = 0;
            for u in 0..h { for v in (u+1)..h { if pseed[k % pseed.len()] { pairs.push((u, v)); } k += 1; } }
            let pat = Pattern::new(h, &pairs).unwrap();
            let found = contains(&g, &pat);
            prop_assert_eq!(found.is_some(), brute_contains(&g, &pat, None));
            if let Some(e) = &found { prop_assert!(e.is_valid(&g, &pat)); }
            let cnt = count_copies(&g, &pat);
            prop_assert_eq!(cnt, brute_count(&g, &pat));
            prop_assert_eq!(cnt == 0, found.is_none());
        }

        #[test]
        fn green_monotone_white_antitone(n in 4usize..=7, gseed in proptest::collection::vec(any::<u8>(), 1..40), u in 0usize..7, v in 0usize..7) {
            prop_assume!(u != v && u < n && v < n);
            let g = igraph_from(n, &gseed);
            let e = Pattern::eye(2, 2).unwrap();
            let before = contains(&g, &e).is_some();
            let mut gg = g.clone(); gg.set(u, v, PairColor::Green);
            let mut gw = g.clone(); gw.set(u, v, PairColor::White);
            if before { prop_assert!(contains(&gg, &e).is_some()); }
            if !before { prop_assert!(contains(&gw, &e).is_none()); }
        }

        #[test]
        fn swap_duality(n in 0usize..=7, gseed in proptest::collection::vec(any::<u8>(), 1..40), a in 1usize..=2, b in 2usize..=3) {
            let g = igraph_from(n, &gseed);
            let e = Pattern::eye(a, b).unwrap();
            prop_assert_eq!(contains(&g, &e).is_some(), contains(&g.color_swap(), &e.swapped()).is_some());
        }
    }
}
