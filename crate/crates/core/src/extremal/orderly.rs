//! Orderly generation of pattern-free igraphs (no white pairs).
//!
//! Pairs are listed in colex order `(0,1), (0,2), (1,2), (0,3), ...`, so the
//! pairs of vertex `k` to earlier vertices form one block at the end of the
//! code of `G[0..=k]`. An igraph is canonical when its colour code is the
//! lexicographic minimum over all relabellings. If `G` on `k+1` vertices is
//! canonical then so is `G[0..k]`: a relabelling of the prefix with a
//! smaller code, extended by fixing `k`, would give a smaller code for `G`.
//! Hence extending canonical graphs one vertex at a time and discarding
//! non-canonical extensions meets every isomorphism class exactly once.
//!
//! Pattern-freeness is hereditary, so partial colourings that already
//! contain the pattern are cut as soon as the offending pair is coloured.

use rayon::prelude::*;

use crate::igraph::{IGraph, PairColor};
use crate::pattern::{contains_using_pair, Pattern};

/// Colours tried for each pair, heaviest first.
pub(crate) const TRY_ORDER: [PairColor; 3] = [PairColor::Green, PairColor::Red, PairColor::Blue];

fn colour_code(c: PairColor) -> u8 {
    c.code()
}

/// Colour matrix of the first `m` vertices.
fn matrix(g: &IGraph, m: usize) -> Vec<u8> {
    let mut col = vec![0u8; m * m];
    for u in 0..m {
        for v in (u + 1)..m {
            let c = colour_code(g.color(u, v));
            col[u * m + v] = c;
            col[v * m + u] = c;
        }
    }
    col
}

/// Colex code of `G[0..m]`.
pub(crate) fn colex_code(g: &IGraph, m: usize) -> Vec<u8> {
    let mut code = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 1..m {
        for j in 0..i {
            code.push(colour_code(g.color(j, i)));
        }
    }
    code
}

/// Is the code of `G[0..m]` minimal over all relabellings?
pub(crate) fn is_canonical(g: &IGraph, m: usize) -> bool {
    if m <= 1 {
        return true;
    }
    let col = matrix(g, m);
    let code = colex_code(g, m);
    let mut perm = vec![0usize; m];
    let mut used = vec![false; m];

    // false as soon as some relabelling gives a smaller code
    fn dfs(m: usize, col: &[u8], code: &[u8], perm: &mut [usize], used: &mut [bool], pos: usize) -> bool {
        if pos == m {
            return true;
        }
        let base = pos * pos.saturating_sub(1) / 2;
        for v in 0..m {
            if used[v] {
                continue;
            }
            let mut state = std::cmp::Ordering::Equal;
            for j in 0..pos {
                let e = col[perm[j] * m + v];
                let target = code[base + j];
                if e != target {
                    state = e.cmp(&target);
                    break;
                }
            }
            match state {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => continue,
                std::cmp::Ordering::Equal => {
                    perm[pos] = v;
                    used[v] = true;
                    let ok = dfs(m, col, code, perm, used, pos + 1);
                    used[v] = false;
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }
    dfs(m, &col, &code, &mut perm, &mut used, 0)
}

/// Minimum colex code over all relabellings, and the relabelled graph.
pub fn canonical_form(g: &IGraph) -> IGraph {
    let m = g.n();
    if m <= 1 {
        return g.clone();
    }
    let col = matrix(g, m);
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    let mut perm = Vec::with_capacity(m);
    let mut cur = Vec::with_capacity(m * (m - 1) / 2);
    let mut used = vec![false; m];

    fn dfs(
        m: usize,
        col: &[u8],
        perm: &mut Vec<usize>,
        cur: &mut Vec<u8>,
        used: &mut [bool],
        best: &mut Option<(Vec<u8>, Vec<usize>)>,
    ) {
        let pos = perm.len();
        if pos == m {
            if best.as_ref().is_none_or(|(b, _)| cur.as_slice() < b.as_slice()) {
                *best = Some((cur.clone(), perm.clone()));
            }
            return;
        }
        for v in 0..m {
            if used[v] {
                continue;
            }
            let start = cur.len();
            cur.extend((0..pos).map(|j| col[perm[j] * m + v]));
            let above = best.as_ref().is_some_and(|(b, _)| cur.as_slice() > &b[..cur.len()]);
            if !above {
                perm.push(v);
                used[v] = true;
                dfs(m, col, perm, cur, used, best);
                used[v] = false;
                perm.pop();
            }
            cur.truncate(start);
        }
    }
    dfs(m, &col, &mut perm, &mut cur, &mut used, &mut best);
    let (_, order) = best.expect("nonempty");
    // order[pos] = original vertex placed at pos
    let mut to = vec![0usize; m];
    for (pos, &v) in order.iter().enumerate() {
        to[v] = pos;
    }
    g.permuted(&to)
}

/// What to do with complete graphs and how to bound partial ones.
pub(crate) trait Leaf: Send {
    fn leaf(&mut self, g: &IGraph, weight: i64);
    /// Prune partial colourings whose best completion is below this.
    fn floor(&self) -> Option<i64> {
        None
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Counters {
    pub nodes: u64,
    pub pruned_bound: u64,
    pub pruned_pattern: u64,
    pub pruned_canon: u64,
}

impl Counters {
    pub fn add(&mut self, o: &Counters) {
        self.nodes += o.nodes;
        self.pruned_bound += o.pruned_bound;
        self.pruned_pattern += o.pruned_pattern;
        self.pruned_canon += o.pruned_canon;
    }
}

pub(crate) struct Generator<'a> {
    pub n: usize,
    pub pattern: Option<&'a Pattern>,
    /// `p = num/den`; weights are scaled by `den`.
    pub num: i64,
    pub den: i64,
}

/// A canonical, pattern-free graph on its first `level` vertices.
#[derive(Clone)]
pub(crate) struct Node {
    pub g: IGraph,
    pub level: usize,
    pub weight: i64,
}

impl Generator<'_> {
    fn pair_weight(&self, c: PairColor) -> i64 {
        match c {
            PairColor::Red => self.num,
            PairColor::Blue => self.den - self.num,
            PairColor::Green => self.den,
            PairColor::White => 0,
        }
    }

    fn remaining_pairs(&self, level: usize, j: usize) -> i64 {
        // pairs not yet coloured once (j, level) has been coloured
        let total = self.n * (self.n - 1) / 2;
        let done = level * level.saturating_sub(1) / 2 + j + 1;
        (total - done) as i64
    }

    pub fn root(&self) -> Node {
        Node { g: IGraph::new(self.n, PairColor::White), level: usize::from(self.n > 0), weight: 0 }
    }

    /// Runs the generation below `node`, calling the leaf on every complete graph.
    pub fn run(&self, node: &Node, leaf: &mut dyn Leaf, counters: &mut Counters) {
        let mut g = node.g.clone();
        if node.level == self.n {
            leaf.leaf(&g, node.weight);
            return;
        }
        self.extend(&mut g, node.level, 0, node.weight, leaf, counters, &mut |_, _, _| false);
    }

    /// Collects all nodes at `level` (or complete graphs earlier if `n` is smaller).
    pub fn nodes_at(&self, level: usize, leaf: &mut dyn Leaf, counters: &mut Counters) -> Vec<Node> {
        let root = self.root();
        if root.level >= level.min(self.n) {
            return vec![root];
        }
        let mut out = Vec::new();
        let mut g = root.g.clone();
        let target = level.min(self.n);
        self.extend(&mut g, root.level, 0, 0, leaf, counters, &mut |g, lvl, w| {
            if lvl == target {
                out.push(Node { g: g.clone(), level: lvl, weight: w });
                true
            } else {
                false
            }
        });
        out
    }

    /// Colours pair `(j, level)` and continues. `stop` may intercept a
    /// finished canonical level and return true to cut below it.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        g: &mut IGraph,
        level: usize,
        j: usize,
        weight: i64,
        leaf: &mut dyn Leaf,
        counters: &mut Counters,
        stop: &mut dyn FnMut(&IGraph, usize, i64) -> bool,
    ) {
        if j == level {
            // vertex `level` is complete
            let lvl = level + 1;
            if !is_canonical(g, lvl) {
                counters.pruned_canon += 1;
                return;
            }
            if stop(g, lvl, weight) {
                return;
            }
            if lvl == self.n {
                leaf.leaf(g, weight);
            } else {
                self.extend(g, lvl, 0, weight, leaf, counters, stop);
            }
            return;
        }
        for c in TRY_ORDER {
            counters.nodes += 1;
            let w = weight + self.pair_weight(c);
            if let Some(floor) = leaf.floor() {
                if w + self.remaining_pairs(level, j) * self.den < floor {
                    counters.pruned_bound += 1;
                    continue;
                }
            }
            g.set(j, level, c);
            let hit = self.pattern.is_some_and(|pat| contains_using_pair(g, pat, j, level, None).is_some());
            if hit {
                counters.pruned_pattern += 1;
            } else {
                self.extend(g, level, j + 1, w, leaf, counters, stop);
            }
            g.set(j, level, PairColor::White);
        }
    }
}

/// Splits at `split_level` and runs the subtrees in parallel, each with its
/// own leaf state from `make`. Results come back in node order.
pub(crate) fn run_parallel<L: Leaf>(
    gen: &Generator<'_>,
    split_level: usize,
    make: impl Fn() -> L + Sync,
) -> (Vec<L>, Counters) {
    let mut counters = Counters::default();
    let mut prefix_leaf = make();
    let nodes = gen.nodes_at(split_level, &mut prefix_leaf, &mut counters);
    let results: Vec<(L, Counters)> = nodes
        .par_iter()
        .map(|node| {
            let mut leaf = make();
            let mut c = Counters::default();
            gen.run(node, &mut leaf, &mut c);
            (leaf, c)
        })
        .collect();
    let mut leaves = vec![prefix_leaf];
    for (l, c) in results {
        counters.add(&c);
        leaves.push(l);
    }
    (leaves, counters)
}
