use std::collections::BTreeMap;

use serde::Serialize;

use super::orderly::{run_parallel, Generator, Leaf};
use crate::error::{Error, Result};
use crate::igraph::{pair_count, IGraph};
use crate::pattern::{is_free, Pattern};
use crate::rational::Rat;

pub const REGION_LIMIT: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionPoint {
    /// `|C_r| / C(n,2)`.
    pub r: Rat,
    /// `|C_b| / C(n,2)`.
    pub b: Rat,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub points: Vec<RegionPoint>,
    pub within_unit_box: bool,
    pub covers_all_pairs: bool,
    /// `max(0, max (b-1)R + aB - (a+b-2))` over the points.
    pub slack: Rat,
    /// `n * slack`, the constant of a `c/n` fit.
    pub slack_times_n: Rat,
    /// The same for the line `aR + (b-1)B = a+b-2`, which passes through
    /// both construction limits.
    pub swapped_line_slack: Rat,
}

#[derive(Default)]
struct Points(BTreeMap<(usize, usize), IGraph>);

impl Leaf for Points {
    fn leaf(&mut self, g: &IGraph, _w: i64) {
        let c = g.counts();
        self.0.entry((c.red(), c.blue())).or_insert_with(|| g.clone());
    }
}

/// Every `(R, B)` reached by an `eye(a, b)`-free igraph on `n` vertices.
pub fn rb_region(a: usize, b: usize, n: usize) -> Result<RegionReport> {
    if n > REGION_LIMIT {
        return Err(Error::LimitExceeded { what: "n", value: n, limit: REGION_LIMIT });
    }
    if n < 2 {
        return Err(crate::error::invalid("region needs n >= 2"));
    }
    let eye = Pattern::eye(a, b)?;
    let gen = Generator { n, pattern: Some(&eye), num: 0, den: 1 };
    let (leaves, _) = run_parallel(&gen, 4, Points::default);
    let mut all: BTreeMap<(usize, usize), IGraph> = BTreeMap::new();
    for l in leaves {
        for (k, g) in l.0 {
            all.entry(k).or_insert(g);
        }
    }
    let big_n = pair_count(n) as i64;
    let mut points = Vec::with_capacity(all.len());
    for ((cr, cb), g) in all {
        if !is_free(&g, &eye) {
            return Err(Error::CheckFailed(format!("region witness {} contains the eye", g.color_string())));
        }
        points.push(RegionPoint { r: Rat::new(cr as i64, big_n), b: Rat::new(cb as i64, big_n), witness: g.color_string() });
    }
    let one = Rat::one();
    let within_unit_box = points.iter().all(|q| q.r <= one && q.b <= one && !q.r.is_negative() && !q.b.is_negative());
    let covers_all_pairs = points.iter().all(|q| &q.r + &q.b >= one);
    let (ai, bi) = (a as i64, b as i64);
    let level = Rat::int(ai + bi - 2);
    let slack_of = |cr: i64, cb: i64| {
        points
            .iter()
            .map(|q| &(&Rat::int(cr) * &q.r) + &(&Rat::int(cb) * &q.b) - level.clone())
            .fold(Rat::zero(), Rat::max)
    };
    let slack = slack_of(bi - 1, ai);
    let swapped_line_slack = slack_of(ai, bi - 1);
    Ok(RegionReport {
        a,
        b,
        n,
        slack_times_n: &slack * &Rat::int(n as i64),
        slack,
        swapped_line_slack,
        within_unit_box,
        covers_all_pairs,
        points,
    })
}
