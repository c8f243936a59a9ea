//! Plain simple graphs, used by the random models and the transversal search.

use crate::bitset::{iter_words, set_bit, clear_bit, test_bit, words_for};
use crate::igraph::{IGraph, PairColor};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> SimpleGraph {
        let words = words_for(n);
        SimpleGraph { n, words, adj: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        let mut g = SimpleGraph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        let w = self.words;
        set_bit(&mut self.adj[u * w..(u + 1) * w], v);
        set_bit(&mut self.adj[v * w..(v + 1) * w], u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        let w = self.words;
        clear_bit(&mut self.adj[u * w..(u + 1) * w], v);
        clear_bit(&mut self.adj[v * w..(v + 1) * w], u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && test_bit(self.row(u), v)
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_words(self.row(u))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbours(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// `c(G)`: edges red, non-edges blue.
    pub fn to_igraph(&self) -> IGraph {
        IGraph::from_fn(self.n, |u, v| if self.has_edge(u, v) { PairColor::Red } else { PairColor::Blue })
    }

    /// Is `set` independent?
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }
}
