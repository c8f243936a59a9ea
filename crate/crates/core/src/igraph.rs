//! Igraphs: complete graphs whose pairs are coloured red, blue, green or white.
//!
//! Two viewpoints coexist. In the three-coloured viewpoint a pair has exactly
//! one colour. In the two-coloured viewpoint green counts as both red and
//! blue, so `C_r = Red ∪ Green` and `C_b = Blue ∪ Green`. A white pair is in
//! neither and never carries weight or a pattern pair.
//!
//! Storage follows the two-coloured viewpoint: one bit matrix for `C_r` and
//! one for `C_b`. White is the complement of their union off the diagonal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::{iter_words, set_bit, test_bit, clear_bit, words_for, VertexSet};
use crate::error::{invalid, Error, Result};
use crate::rational::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairColor {
    Red,
    Blue,
    Green,
    White,
}

impl PairColor {
    pub const ALL: [PairColor; 4] = [PairColor::Red, PairColor::Blue, PairColor::Green, PairColor::White];

    #[inline]
    pub fn in_red(self) -> bool {
        matches!(self, PairColor::Red | PairColor::Green)
    }

    #[inline]
    pub fn in_blue(self) -> bool {
        matches!(self, PairColor::Blue | PairColor::Green)
    }

    #[inline]
    pub fn from_bits(red: bool, blue: bool) -> PairColor {
        match (red, blue) {
            (true, true) => PairColor::Green,
            (true, false) => PairColor::Red,
            (false, true) => PairColor::Blue,
            (false, false) => PairColor::White,
        }
    }

    pub fn swapped(self) -> PairColor {
        match self {
            PairColor::Red => PairColor::Blue,
            PairColor::Blue => PairColor::Red,
            c => c,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PairColor::Red => 'r',
            PairColor::Blue => 'b',
            PairColor::Green => 'g',
            PairColor::White => 'w',
        }
    }

    pub fn from_char(c: char) -> Option<PairColor> {
        match c {
            'r' => Some(PairColor::Red),
            'b' => Some(PairColor::Blue),
            'g' => Some(PairColor::Green),
            'w' => Some(PairColor::White),
            _ => None,
        }
    }

    /// Order used by canonical strings.
    #[inline]
    pub fn code(self) -> u8 {
        match self {
            PairColor::White => 0,
            PairColor::Red => 1,
            PairColor::Blue => 2,
            PairColor::Green => 3,
        }
    }
}

/// Pair counts in the three-coloured viewpoint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorCounts {
    pub red_only: usize,
    pub blue_only: usize,
    pub green: usize,
    pub white: usize,
}

impl ColorCounts {
    /// `|C_r|`
    pub fn red(&self) -> usize {
        self.red_only + self.green
    }

    /// `|C_b|`
    pub fn blue(&self) -> usize {
        self.blue_only + self.green
    }

    pub fn total(&self) -> usize {
        self.red_only + self.blue_only + self.green + self.white
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVector {
    pub d_r: usize,
    pub d_b: usize,
    pub d_g: usize,
    pub d_w: usize,
    pub d_p: Rat,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IGraph {
    n: usize,
    words: usize,
    red: Vec<u64>,
    blue: Vec<u64>,
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

pub(crate) fn check_p(p: &Rat) -> Result<()> {
    if p.is_probability() {
        Ok(())
    } else {
        Err(invalid(format!("p = {p} is not in [0, 1]")))
    }
}

impl IGraph {
    /// Complete igraph on `n` vertices with every pair coloured `fill`.
    pub fn new(n: usize, fill: PairColor) -> IGraph {
        let words = words_for(n);
        let mut g = IGraph { n, words, red: vec![0; n * words], blue: vec![0; n * words] };
        if fill != PairColor::White {
            for u in 0..n {
                for v in (u + 1)..n {
                    g.set(u, v, fill);
                }
            }
        }
        g
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> PairColor) -> IGraph {
        let mut g = IGraph::new(n, PairColor::White);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set(u, v, f(u, v));
            }
        }
        g
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn color(&self, u: usize, v: usize) -> PairColor {
        debug_assert!(u != v && u < self.n && v < self.n);
        let r = test_bit(self.red_row(u), v);
        let b = test_bit(self.blue_row(u), v);
        PairColor::from_bits(r, b)
    }

    pub fn set(&mut self, u: usize, v: usize, c: PairColor) {
        assert!(u != v, "igraphs have no self-pairs");
        assert!(u < self.n && v < self.n, "vertex out of range");
        let w = self.words;
        for (a, b) in [(u, v), (v, u)] {
            let row = &mut self.red[a * w..(a + 1) * w];
            if c.in_red() {
                set_bit(row, b)
            } else {
                clear_bit(row, b)
            }
            let row = &mut self.blue[a * w..(a + 1) * w];
            if c.in_blue() {
                set_bit(row, b)
            } else {
                clear_bit(row, b)
            }
        }
    }

    /// Row of `C_r` (red or green neighbours) of `u`.
    #[inline]
    pub fn red_row(&self, u: usize) -> &[u64] {
        &self.red[u * self.words..(u + 1) * self.words]
    }

    /// Row of `C_b` (blue or green neighbours) of `u`.
    #[inline]
    pub fn blue_row(&self, u: usize) -> &[u64] {
        &self.blue[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| ((u + 1)..n).map(move |v| (u, v)))
    }

    pub fn counts(&self) -> ColorCounts {
        let mut c = ColorCounts::default();
        for u in 0..self.n {
            for (i, (&r, &b)) in self.red_row(u).iter().zip(self.blue_row(u)).enumerate() {
                // only pairs u < v
                let mask = upper_mask(u, i);
                let r = r & mask;
                let b = b & mask;
                c.green += (r & b).count_ones() as usize;
                c.red_only += (r & !b).count_ones() as usize;
                c.blue_only += (b & !r).count_ones() as usize;
            }
        }
        c.white = pair_count(self.n) - c.red_only - c.blue_only - c.green;
        c
    }

    pub fn has_white(&self) -> bool {
        self.counts().white > 0
    }

    /// `w_p = p|C_r| + (1-p)|C_b|`.
    pub fn weight(&self, p: &Rat) -> Rat {
        let c = self.counts();
        p * Rat::from(c.red()) + (Rat::one() - p) * Rat::from(c.blue())
    }

    /// Weight scaled by `den`: `num|C_r| + (den-num)|C_b|` for `p = num/den`.
    pub fn weight_scaled(&self, num: i64, den: i64) -> i64 {
        let c = self.counts();
        num * c.red() as i64 + (den - num) * c.blue() as i64
    }

    /// Entropy weight `H_p = -|C_r^-| log2 p - |C_b^-| log2(1-p)`:
    /// `-log2` of the probability that `G(n,p)` lies in the family of `self`.
    pub fn entropy_weight(&self, p: &Rat) -> Result<f64> {
        if !(p > &Rat::zero() && p < &Rat::one()) {
            return Err(invalid(format!("entropy weight needs 0 < p < 1, got {p}")));
        }
        let c = self.counts();
        if c.white > 0 {
            return Err(invalid("entropy weight is undefined for whitened igraphs"));
        }
        let pf = p.to_f64();
        let mut h = 0.0;
        if c.red_only > 0 {
            h -= c.red_only as f64 * pf.log2();
        }
        if c.blue_only > 0 {
            h -= c.blue_only as f64 * (1.0 - pf).log2();
        }
        Ok(h)
    }

    /// Colour degrees of `x` into `s` (two-coloured viewpoint for `d_r`, `d_b`).
    pub fn degrees(&self, x: usize, s: &VertexSet, p: &Rat) -> DegreeVector {
        assert!(x < self.n, "vertex out of range");
        let mut s = s.clone();
        s.remove(x);
        let d_r = s.count_and(self.red_row(x));
        let d_b = s.count_and(self.blue_row(x));
        let d_g: usize =
            s.words().iter().zip(self.red_row(x).iter().zip(self.blue_row(x))).map(|(m, (r, b))| (m & r & b).count_ones() as usize).sum();
        let d_w = s.len() - (d_r + d_b - d_g);
        let d_p = p * Rat::from(d_r) + (Rat::one() - p) * Rat::from(d_b);
        DegreeVector { d_r, d_b, d_g, d_w, d_p }
    }

    /// Degrees into the whole vertex set.
    pub fn degrees_all(&self, x: usize, p: &Rat) -> DegreeVector {
        self.degrees(x, &VertexSet::full(self.n), p)
    }

    /// `d_p(x)` scaled by `den`.
    pub fn p_degree_scaled(&self, x: usize, num: i64, den: i64) -> i64 {
        let r: u32 = self.red_row(x).iter().map(|w| w.count_ones()).sum();
        let b: u32 = self.blue_row(x).iter().map(|w| w.count_ones()).sum();
        num * r as i64 + (den - num) * b as i64
    }

    /// `δ_p(G)`, the minimum p-degree.
    pub fn min_p_degree(&self, p: &Rat) -> Result<Rat> {
        if self.n == 0 {
            return Err(invalid("minimum p-degree of the empty igraph"));
        }
        Ok((0..self.n).map(|x| self.degrees_all(x, p).d_p).min().expect("nonempty"))
    }

    /// Red ↔ blue, fixing green and white.
    pub fn color_swap(&self) -> IGraph {
        IGraph { n: self.n, words: self.words, red: self.blue.clone(), blue: self.red.clone() }
    }

    /// Sub-igraph induced on `vs`, relabelled `0..vs.len()` in the given order.
    pub fn induced(&self, vs: &[usize]) -> IGraph {
        IGraph::from_fn(vs.len(), |i, j| self.color(vs[i], vs[j]))
    }

    /// Drops vertex `x`, shifting higher labels down by one.
    pub fn remove_vertex(&self, x: usize) -> IGraph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        self.induced(&keep)
    }

    /// Relabel: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> IGraph {
        assert_eq!(perm.len(), self.n);
        let mut inv = vec![0; self.n];
        for (v, &pv) in perm.iter().enumerate() {
            inv[pv] = v;
        }
        IGraph::from_fn(self.n, |i, j| self.color(inv[i], inv[j]))
    }

    pub fn red_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        iter_words(self.red_row(u))
    }

    /// Colour characters of all pairs in row-major upper-triangular order.
    pub fn color_string(&self) -> String {
        self.pairs().map(|(u, v)| self.color(u, v).as_char()).collect()
    }

    pub fn from_color_string(n: usize, s: &str) -> Result<IGraph> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.len() != pair_count(n) {
            return Err(Error::Parse(format!("expected {} colour characters for n={n}, got {}", pair_count(n), chars.len())));
        }
        let mut g = IGraph::new(n, PairColor::White);
        let mut it = chars.into_iter();
        for u in 0..n {
            for v in (u + 1)..n {
                let c = it.next().expect("length checked");
                let col = PairColor::from_char(c).ok_or_else(|| Error::Parse(format!("bad colour character {c:?}")))?;
                g.set(u, v, col);
            }
        }
        Ok(g)
    }

    /// Text format: `n=<k> p=<num>/<den>` on the first line, then the colour
    /// characters on the second.
    pub fn to_text(&self, p: &Rat) -> String {
        format!("n={} p={}\n{}\n", self.n, p, self.color_string())
    }

    pub fn from_text(s: &str) -> Result<(IGraph, Rat)> {
        let mut lines = s.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty igraph document".into()))?;
        let mut n = None;
        let mut p = None;
        for tok in header.split_whitespace() {
            if let Some(v) = tok.strip_prefix("n=") {
                n = Some(v.parse::<usize>().map_err(|_| Error::Parse(format!("bad vertex count {v:?}")))?);
            } else if let Some(v) = tok.strip_prefix("p=") {
                p = Some(Rat::parse_exact(v)?);
            } else {
                return Err(Error::Parse(format!("unexpected header token {tok:?}")));
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing n=".into()))?;
        let p = p.ok_or_else(|| Error::Parse("missing p=".into()))?;
        let body: String = lines.collect::<Vec<_>>().join("");
        Ok((IGraph::from_color_string(n, &body)?, p))
    }
}

#[inline]
fn upper_mask(u: usize, word: usize) -> u64 {
    // bits v > u inside word `word`
    let lo = word * 64;
    if u < lo {
        !0
    } else if u + 1 >= lo + 64 {
        0
    } else {
        !0u64 << (u + 1 - lo)
    }
}

impl fmt::Debug for IGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IGraph(n={}, {})", self.n, self.color_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::blue_construction;
    use proptest::prelude::*;

    fn half() -> Rat {
        Rat::new(1, 2)
    }

    fn random_igraph(n: usize, seed: &[u8]) -> IGraph {
        let mut i = 0;
        IGraph::from_fn(n, |_, _| {
            let c = PairColor::ALL[(seed[i % seed.len()] % 4) as usize];
            i += 1;
            c
        })
    }

    #[test]
    fn weight_examples() {
        let k5 = IGraph::new(5, PairColor::Green);
        assert_eq!(k5.weight(&Rat::new(1, 3)), 10);
        let b24 = blue_construction(2, 4);
        assert_eq!(b24.weight(&half()), 5);
        assert_eq!(IGraph::new(6, PairColor::White).weight(&Rat::new(2, 7)), 0);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(IGraph::new(4, PairColor::Green).entropy_weight(&Rat::new(1, 3)).unwrap(), 0.0);
        let e = IGraph::new(2, PairColor::Red);
        assert!((e.entropy_weight(&half()).unwrap() - 1.0).abs() < 1e-12);
        assert!((blue_construction(2, 4).entropy_weight(&half()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_input() {
        let g = IGraph::new(3, PairColor::Red);
        assert!(g.entropy_weight(&Rat::zero()).is_err());
        assert!(g.entropy_weight(&Rat::one()).is_err());
        let mut w = g.clone();
        w.set(0, 1, PairColor::White);
        assert!(w.entropy_weight(&half()).is_err());
    }

    #[test]
    fn degree_examples() {
        let g = IGraph::new(4, PairColor::Green);
        let d = g.degrees_all(2, &half());
        assert_eq!((d.d_r, d.d_b, d.d_g, d.d_w), (3, 3, 3, 0));
        assert_eq!(d.d_p, 3);
        let b = blue_construction(2, 4);
        let d = b.degrees_all(0, &half());
        assert_eq!((d.d_r, d.d_b), (2, 3));
        assert_eq!(d.d_p, Rat::new(5, 2));
        let d = b.degrees(0, &VertexSet::empty(4), &half());
        assert_eq!((d.d_r, d.d_b, d.d_g, d.d_w), (0, 0, 0, 0));
        assert_eq!(d.d_p, 0);
    }

    #[test]
    fn min_degree_examples() {
        assert_eq!(IGraph::new(1, PairColor::Green).min_p_degree(&half()).unwrap(), 0);
        assert_eq!(blue_construction(2, 4).min_p_degree(&half()).unwrap(), Rat::new(5, 2));
        assert_eq!(IGraph::new(7, PairColor::Green).min_p_degree(&Rat::new(1, 5)).unwrap(), 6);
        assert!(IGraph::new(0, PairColor::Green).min_p_degree(&half()).is_err());
    }

    #[test]
    fn color_swap_examples() {
        let g = IGraph::new(5, PairColor::Green);
        assert_eq!(g.color_swap(), g);
        let b = blue_construction(3, 7);
        let s = b.color_swap();
        for (u, v) in s.pairs() {
            let c = s.color(u, v);
            assert!(c == PairColor::Red || c == PairColor::Green);
        }
        assert_eq!(s.color_swap(), b);
    }

    #[test]
    fn text_round_trip_exact() {
        let g = IGraph::from_color_string(4, "rbgwrg").unwrap();
        let t = g.to_text(&Rat::new(1, 3));
        assert_eq!(t, "n=4 p=1/3\nrbgwrg\n");
        let (h, p) = IGraph::from_text(&t).unwrap();
        assert_eq!(h, g);
        assert_eq!(p, Rat::new(1, 3));
        assert_eq!(h.to_text(&p), t);
    }

    #[test]
    fn text_rejects_malformed() {
        assert!(IGraph::from_text("n=3 p=1/2\nrr\n").is_err());
        assert!(IGraph::from_text("n=3 p=0.5\nrrr\n").is_err());
        assert!(IGraph::from_text("n=3\nrrr\n").is_err());
        assert!(IGraph::from_text("n=2 p=1/2\nx\n").is_err());
    }

    proptest! {
        #[test]
        fn handshake_identities(n in 0usize..=12, seed in proptest::collection::vec(any::<u8>(), 1..80), pn in 0i64..=6) {
            let g = random_igraph(n, &seed);
            let p = Rat::new(pn, 6);
            let c = g.counts();
            prop_assert_eq!(c.total(), pair_count(n));
            let mut sr = 0; let mut sb = 0; let mut sg = 0; let mut sp = Rat::zero();
            for x in 0..n {
                let d = g.degrees_all(x, &p);
                prop_assert_eq!(d.d_r + d.d_b + d.d_w, d.d_g + n - 1);
                sr += d.d_r; sb += d.d_b; sg += d.d_g; sp += d.d_p;
            }
            prop_assert_eq!(sr, 2 * c.red());
            prop_assert_eq!(sb, 2 * c.blue());
            prop_assert_eq!(sg, 2 * c.green);
            prop_assert_eq!(sp, g.weight(&p) * 2);
        }

        #[test]
        fn weight_bounds(n in 0usize..=10, seed in proptest::collection::vec(any::<u8>(), 1..60), pn in 0i64..=4) {
            let g = random_igraph(n, &seed);
            let p = Rat::new(pn, 4);
            let w = g.weight(&p);
            let max = Rat::from(pair_count(n));
            prop_assert!(w >= Rat::zero() && w <= max);
            let c = g.counts();
            let all_green = c.green == pair_count(n);
            // p in (0,1): equality exactly for all-green; at p in {0,1} a monochrome graph also attains it
            if pn > 0 && pn < 4 {
                prop_assert_eq!(w == max, all_green);
            }
            prop_assert_eq!(Rat::int(g.weight_scaled(pn, 4)), w * 4);
        }

        #[test]
        fn entropy_identity(n in 2usize..=10, seed in proptest::collection::vec(any::<u8>(), 1..60), pi in 0usize..3) {
            let g = IGraph::from_fn(n, { let mut i = 0; move |_, _| { let c = [PairColor::Red, PairColor::Blue, PairColor::Green][(seed[i % seed.len()] % 3) as usize]; i += 1; c } });
            let p = [Rat::new(1, 3), Rat::new(1, 2), Rat::new(2, 3)][pi].clone();
            let pf = p.to_f64();
            let h = g.entropy_weight(&p).unwrap();
            let l = pf.log2() + (1.0 - pf).log2();
            let pprime = (1.0 - pf).log2() / l;
            let c = g.counts();
            let wprime = pprime * c.red() as f64 + (1.0 - pprime) * c.blue() as f64;
            let rhs = -l * (pair_count(n) as f64 - wprime);
            prop_assert!((h - rhs).abs() <= 1e-9 * h.abs().max(1.0));
        }

        #[test]
        fn swap_conjugates_weight(n in 0usize..=10, seed in proptest::collection::vec(any::<u8>(), 1..60), pn in 0i64..=5) {
            let g = random_igraph(n, &seed);
            let p = Rat::new(pn, 5);
            let s = g.color_swap();
            prop_assert_eq!(s.weight(&p), g.weight(&(Rat::one() - &p)));
            prop_assert_eq!(s.color_swap(), g);
        }
    }
}
