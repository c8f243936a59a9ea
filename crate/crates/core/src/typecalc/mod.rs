//! Types, their weight matrices and p-values.
//!
//! A type has red or blue vertices and red, blue or green edges. Its weight
//! matrix has `p` / `1-p` / `1` for red / blue / green entries, with the
//! vertex colour on the diagonal, and its p-value is the maximum of the
//! quadratic form over the simplex.

mod kappa;
mod lambda;

pub use kappa::{
    core_structure_check, describes, describes_by_blowup, is_p_core, kappa_formula, kappa_search, peel_min_degree,
    CoreReport, KappaFormula, KappaSearch, LambdaTable, PeelOutcome, Regime,
};
pub use lambda::{lambda_numeric, lambda_p, LambdaResult, MAX_LAMBDA_K};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::igraph::PairColor;
use crate::rational::Rat;

/// Largest type size accepted by [`enumerate_types`].
pub const MAX_ENUM_K: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexColor {
    Red,
    Blue,
}

impl VertexColor {
    pub fn as_char(self) -> char {
        match self {
            VertexColor::Red => 'r',
            VertexColor::Blue => 'b',
        }
    }

    fn digit(self) -> u64 {
        match self {
            VertexColor::Red => 0,
            VertexColor::Blue => 1,
        }
    }
}

fn edge_digit(c: PairColor) -> u64 {
    match c {
        PairColor::Red => 0,
        PairColor::Blue => 1,
        PairColor::Green => 2,
        PairColor::White => unreachable!("types have no white edges"),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TypeGraph {
    vcolor: Vec<VertexColor>,
    /// Row-major `k x k`, symmetric, diagonal unused.
    ecolor: Vec<PairColor>,
}

impl TypeGraph {
    /// Type with the given vertex colours and all edges green.
    pub fn all_green(vcolor: Vec<VertexColor>) -> TypeGraph {
        let k = vcolor.len();
        TypeGraph { vcolor, ecolor: vec![PairColor::Green; k * k] }
    }

    pub fn from_fn(vcolor: Vec<VertexColor>, mut f: impl FnMut(usize, usize) -> PairColor) -> Result<TypeGraph> {
        let mut t = TypeGraph::all_green(vcolor);
        for u in 0..t.k() {
            for v in (u + 1)..t.k() {
                t.set_edge(u, v, f(u, v))?;
            }
        }
        Ok(t)
    }

    /// `τ(x, y)`: `x` red and `y` blue vertices, every edge green.
    pub fn tau(x: usize, y: usize) -> TypeGraph {
        let mut vc = vec![VertexColor::Red; x];
        vc.extend(std::iter::repeat_n(VertexColor::Blue, y));
        TypeGraph::all_green(vc)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.vcolor.len()
    }

    #[inline]
    pub fn vertex_color(&self, u: usize) -> VertexColor {
        self.vcolor[u]
    }

    #[inline]
    pub fn edge_color(&self, u: usize, v: usize) -> PairColor {
        debug_assert_ne!(u, v);
        self.ecolor[u * self.k() + v]
    }

    pub fn set_edge(&mut self, u: usize, v: usize, c: PairColor) -> Result<()> {
        if c == PairColor::White {
            return Err(invalid("types have no white edges"));
        }
        if u == v || u >= self.k() || v >= self.k() {
            return Err(invalid(format!("bad type edge ({u}, {v})")));
        }
        let k = self.k();
        self.ecolor[u * k + v] = c;
        self.ecolor[v * k + u] = c;
        Ok(())
    }

    pub fn red_count(&self) -> usize {
        self.vcolor.iter().filter(|&&c| c == VertexColor::Red).count()
    }

    /// Number of green edges at `u`.
    pub fn green_degree(&self, u: usize) -> usize {
        (0..self.k()).filter(|&v| v != u && self.edge_color(u, v) == PairColor::Green).count()
    }

    /// Entry `w_p(uv)` of the weight matrix, scaled by `den` for `p = num/den`.
    #[inline]
    pub(crate) fn weight_scaled(&self, u: usize, v: usize, num: i64, den: i64) -> i64 {
        if u == v {
            match self.vcolor[u] {
                VertexColor::Red => num,
                VertexColor::Blue => den - num,
            }
        } else {
            match self.edge_color(u, v) {
                PairColor::Red => num,
                PairColor::Blue => den - num,
                _ => den,
            }
        }
    }

    pub fn weight_matrix(&self, p: &Rat) -> WeightMatrix {
        let k = self.k();
        let q = Rat::one() - p;
        let entry = |u: usize, v: usize| -> Rat {
            let c = if u == v {
                match self.vcolor[u] {
                    VertexColor::Red => PairColor::Red,
                    VertexColor::Blue => PairColor::Blue,
                }
            } else {
                self.edge_color(u, v)
            };
            match c {
                PairColor::Red => p.clone(),
                PairColor::Blue => q.clone(),
                _ => Rat::one(),
            }
        };
        let entries = (0..k).flat_map(|u| (0..k).map(move |v| (u, v))).map(|(u, v)| entry(u, v)).collect();
        WeightMatrix { k, entries }
    }

    /// Induced subtype on `keep` (in the given order).
    pub fn subtype(&self, keep: &[usize]) -> TypeGraph {
        let vc = keep.iter().map(|&u| self.vcolor[u]).collect();
        TypeGraph::from_fn(vc, |i, j| self.edge_color(keep[i], keep[j])).expect("subtype of a valid type")
    }

    pub fn remove_vertex(&self, x: usize) -> TypeGraph {
        let keep: Vec<usize> = (0..self.k()).filter(|&u| u != x).collect();
        self.subtype(&keep)
    }

    /// Relabelled copy: vertex `u` of `self` becomes `perm[u]`.
    pub fn permuted(&self, perm: &[usize]) -> TypeGraph {
        let k = self.k();
        let mut inv = vec![0; k];
        for (u, &pu) in perm.iter().enumerate() {
            inv[pu] = u;
        }
        let vc = (0..k).map(|i| self.vcolor[inv[i]]).collect();
        TypeGraph::from_fn(vc, |i, j| self.edge_color(inv[i], inv[j])).expect("relabelled valid type")
    }

    /// Base-6 code: vertex colours first, then the upper-triangular edges.
    pub fn code(&self) -> u64 {
        let k = self.k();
        let mut c = 0u64;
        for u in 0..k {
            c = c * 6 + self.vcolor[u].digit();
        }
        for u in 0..k {
            for v in (u + 1)..k {
                c = c * 6 + edge_digit(self.edge_color(u, v));
            }
        }
        c
    }

    fn code_under(&self, order: &[usize]) -> u64 {
        let k = self.k();
        let mut c = 0u64;
        for &u in order {
            c = c * 6 + self.vcolor[u].digit();
        }
        for i in 0..k {
            for j in (i + 1)..k {
                c = c * 6 + edge_digit(self.edge_color(order[i], order[j]));
            }
        }
        c
    }

    /// Minimum code over all relabellings. Red vertices always come first in
    /// a minimum, so only orders that keep the colour classes together are
    /// tried.
    pub fn canonical_code(&self) -> u64 {
        let reds: Vec<usize> = (0..self.k()).filter(|&u| self.vcolor[u] == VertexColor::Red).collect();
        let blues: Vec<usize> = (0..self.k()).filter(|&u| self.vcolor[u] == VertexColor::Blue).collect();
        let mut best = u64::MAX;
        for_each_perm(&reds, &mut |r| {
            for_each_perm(&blues, &mut |b| {
                let order: Vec<usize> = r.iter().chain(b.iter()).copied().collect();
                best = best.min(self.code_under(&order));
            });
        });
        best
    }

    pub fn canonical(&self) -> TypeGraph {
        TypeGraph::from_code(self.k(), self.canonical_code())
    }

    pub fn from_code(k: usize, mut code: u64) -> TypeGraph {
        let e = k * k.saturating_sub(1) / 2;
        let mut digits = vec![0u64; k + e];
        for d in digits.iter_mut().rev() {
            *d = code % 6;
            code /= 6;
        }
        let vc = digits[..k].iter().map(|&d| if d == 0 { VertexColor::Red } else { VertexColor::Blue }).collect();
        let mut t = TypeGraph::all_green(vc);
        let mut idx = k;
        for u in 0..k {
            for v in (u + 1)..k {
                let c = [PairColor::Red, PairColor::Blue, PairColor::Green][digits[idx] as usize];
                t.set_edge(u, v, c).expect("decoded edge");
                idx += 1;
            }
        }
        t
    }

    pub fn is_isomorphic(&self, other: &TypeGraph) -> bool {
        self.k() == other.k() && self.canonical_code() == other.canonical_code()
    }

    /// `k=<n>; vcolors=<r/b>; ecolors=<r/b/g upper-triangular>`.
    pub fn to_text(&self) -> String {
        let vc: String = self.vcolor.iter().map(|c| c.as_char()).collect();
        let mut ec = String::new();
        for u in 0..self.k() {
            for v in (u + 1)..self.k() {
                ec.push(self.edge_color(u, v).as_char());
            }
        }
        format!("k={}; vcolors={}; ecolors={}", self.k(), vc, ec)
    }

    pub fn from_text(s: &str) -> Result<TypeGraph> {
        let mut k = None;
        let mut vc = None;
        let mut ec = None;
        for field in s.trim().split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, val) = field.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {field:?}")))?;
            match key.trim() {
                "k" => k = Some(val.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad k {val:?}")))?),
                "vcolors" => vc = Some(val.trim().to_string()),
                "ecolors" => ec = Some(val.trim().to_string()),
                other => return Err(Error::Parse(format!("unknown field {other:?}"))),
            }
        }
        let k = k.ok_or_else(|| Error::Parse("missing k".into()))?;
        let vc = vc.ok_or_else(|| Error::Parse("missing vcolors".into()))?;
        let ec = ec.unwrap_or_default();
        if vc.chars().count() != k {
            return Err(Error::Parse(format!("vcolors has length {} but k={k}", vc.chars().count())));
        }
        let vcolor = vc
            .chars()
            .map(|c| match c {
                'r' => Ok(VertexColor::Red),
                'b' => Ok(VertexColor::Blue),
                _ => Err(Error::Parse(format!("bad vertex colour {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let chars: Vec<char> = ec.chars().collect();
        if chars.len() != k * k.saturating_sub(1) / 2 {
            return Err(Error::Parse(format!("ecolors has length {} for k={k}", chars.len())));
        }
        let mut t = TypeGraph::all_green(vcolor);
        let mut idx = 0;
        for u in 0..k {
            for v in (u + 1)..k {
                let c = match chars[idx] {
                    'r' => PairColor::Red,
                    'b' => PairColor::Blue,
                    'g' => PairColor::Green,
                    c => return Err(Error::Parse(format!("bad edge colour {c:?}"))),
                };
                t.set_edge(u, v, c)?;
                idx += 1;
            }
        }
        Ok(t)
    }
}

impl fmt::Debug for TypeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Display for TypeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for TypeGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

impl<'de> Deserialize<'de> for TypeGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TypeGraph::from_text(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightMatrix {
    k: usize,
    entries: Vec<Rat>,
}

impl WeightMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, u: usize, v: usize) -> &Rat {
        &self.entries[u * self.k + v]
    }

    /// `x^T W x`.
    pub fn quadratic_form(&self, x: &[Rat]) -> Rat {
        (0..self.k).map(|u| &x[u] * self.row_dot(u, x)).sum()
    }

    /// `(W x)_u`.
    pub fn row_dot(&self, u: usize, x: &[Rat]) -> Rat {
        (0..self.k).map(|v| self.get(u, v) * &x[v]).sum()
    }
}

/// Calls `f` on every permutation of `items` (Heap's algorithm).
pub(crate) fn for_each_perm(items: &[usize], f: &mut dyn FnMut(&[usize])) {
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// All types on `k` vertices up to colour-preserving isomorphism, as
/// canonical representatives sorted by code.
pub fn enumerate_types(k: usize) -> Result<Vec<TypeGraph>> {
    if k > MAX_ENUM_K {
        return Err(Error::LimitExceeded { what: "type size", value: k, limit: MAX_ENUM_K });
    }
    use rayon::prelude::*;
    let e = k * k.saturating_sub(1) / 2;
    let edge_space = 3u64.pow(e as u32);
    let mut codes: Vec<u64> = (0..=k)
        .into_par_iter()
        .flat_map_iter(|reds| {
            let mut vc = vec![VertexColor::Red; reds];
            vc.extend(std::iter::repeat_n(VertexColor::Blue, k - reds));
            let mut seen = std::collections::BTreeSet::new();
            for mut m in 0..edge_space {
                let mut t = TypeGraph::all_green(vc.clone());
                for u in 0..k {
                    for v in (u + 1)..k {
                        let c = [PairColor::Red, PairColor::Blue, PairColor::Green][(m % 3) as usize];
                        m /= 3;
                        t.set_edge(u, v, c).expect("valid");
                    }
                }
                seen.insert(t.canonical_code());
            }
            seen.into_iter()
        })
        .collect();
    codes.sort_unstable();
    codes.dedup();
    Ok(codes.into_iter().map(|c| TypeGraph::from_code(k, c)).collect())
}
