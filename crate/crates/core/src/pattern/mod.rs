//! Forbidden patterns `c(H)` and everything that searches for them.
//!
//! A [`Pattern`] is a two-coloured complete graph: its red pairs are the edges
//! of `H`, every other pair is blue. An igraph contains the pattern when the
//! pattern vertices can be placed injectively so that red pairs land in `C_r`
//! and blue pairs land in `C_b`.

mod forbidden;
mod partite;
mod search;
mod whiten;

pub use forbidden::{check_find_ia, check_find_ib, planted_violator, FindViolation, PlantedInstance, ViolationSource};
pub use partite::transversal_independent;
pub use search::{
    all_copies, contains, contains_using_pair, contains_using_vertex, contains_within, count_copies, is_free,
};
pub use whiten::{greedy_whiten, WhitenOutcome};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::SimpleGraph;
use crate::igraph::IGraph;

/// Largest pattern the containment search accepts.
pub const MAX_PATTERN: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pattern {
    h: usize,
    red: Vec<u32>,
}

impl Pattern {
    pub fn new(h: usize, red_pairs: &[(usize, usize)]) -> Result<Pattern> {
        if h > MAX_PATTERN {
            return Err(Error::LimitExceeded { what: "pattern size", value: h, limit: MAX_PATTERN });
        }
        let mut red = vec![0u32; h];
        for &(u, v) in red_pairs {
            if u == v || u >= h || v >= h {
                return Err(invalid(format!("bad pattern pair ({u}, {v}) for h={h}")));
            }
            red[u] |= 1 << v;
            red[v] |= 1 << u;
        }
        Ok(Pattern { h, red })
    }

    /// The eye `I_{a,b} = K_{a+b} \ K_b`. Vertices `0..a` form the red clique,
    /// `a..a+b` the blue one; all cross pairs are red.
    pub fn eye(a: usize, b: usize) -> Result<Pattern> {
        if a < 1 || b < 2 {
            return Err(invalid(format!("eye({a},{b}) needs a >= 1 and b >= 2")));
        }
        let h = a + b;
        let mut pairs = Vec::new();
        for u in 0..h {
            for v in (u + 1)..h {
                if u < a {
                    pairs.push((u, v));
                }
            }
        }
        Pattern::new(h, &pairs)
    }

    pub fn from_graph(g: &SimpleGraph) -> Result<Pattern> {
        Pattern::new(g.n(), &g.edges())
    }

    #[inline]
    pub fn h(&self) -> usize {
        self.h
    }

    #[inline]
    pub fn is_red(&self, u: usize, v: usize) -> bool {
        (self.red[u] >> v) & 1 == 1
    }

    pub fn red_degree(&self, u: usize) -> usize {
        self.red[u].count_ones() as usize
    }

    pub fn red_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.h {
            for v in (u + 1)..self.h {
                if self.is_red(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn blue_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.h {
            for v in (u + 1)..self.h {
                if !self.is_red(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Red and blue exchanged, i.e. the pattern of the complement graph.
    pub fn swapped(&self) -> Pattern {
        let all = if self.h == 0 { 0 } else { (1u32 << self.h) - 1 };
        let red = (0..self.h).map(|u| all & !self.red[u] & !(1 << u)).collect();
        Pattern { h: self.h, red }
    }

    /// Pattern as a (two-coloured) igraph.
    pub fn to_igraph(&self) -> IGraph {
        use crate::igraph::PairColor;
        IGraph::from_fn(self.h, |u, v| if self.is_red(u, v) { PairColor::Red } else { PairColor::Blue })
    }

    /// Search order: static red degree descending, ties by index.
    pub(crate) fn search_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.h).collect();
        order.sort_by_key(|&u| (std::cmp::Reverse(self.red_degree(u)), u));
        order
    }

    /// Text format: `h=<k>` then one red pair `u v` per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("h={}\n", self.h);
        for (u, v) in self.red_pairs() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_text(s: &str) -> Result<Pattern> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty pattern document".into()))?;
        let h: usize = header
            .strip_prefix("h=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad pattern header {header:?}")))?;
        let mut pairs = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split(|c: char| c.is_whitespace() || c == '-' || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad pair line {line:?}"))))
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("bad pair line {line:?}")));
            }
            pairs.push((nums[0], nums[1]));
        }
        Pattern::new(h, &pairs)
    }
}

/// Injective placement of pattern vertices into an igraph.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn is_valid(&self, g: &IGraph, h: &Pattern) -> bool {
        if self.map.len() != h.h() || self.map.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for i in 0..h.h() {
            for j in (i + 1)..h.h() {
                let (u, v) = (self.map[i], self.map[j]);
                if u == v {
                    return false;
                }
                let c = g.color(u, v);
                let ok = if h.is_red(i, j) { c.in_red() } else { c.in_blue() };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }
}
