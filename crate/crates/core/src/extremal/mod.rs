//! Brute-force maximum p-weight of pattern-free igraphs, the prediction for
//! eyes, and the `(R, B)` region.

mod orderly;
mod region;

pub use orderly::canonical_form;
pub use region::{rb_region, RegionPoint, RegionReport};

use std::time::Instant;

use serde::Serialize;

use crate::constructions::{blue_construction, predicted_order, red_construction};
use crate::error::{invalid, Error, Result};
use crate::igraph::{pair_count, IGraph};
use crate::pattern::{contains, is_free, Pattern};
use crate::rational::Rat;

use orderly::{run_parallel, Counters, Generator, Leaf};

pub const EXHAUSTIVE_LIMIT: usize = 7;
pub const BNB_LIMIT: usize = 9;

const SPLIT_LEVEL: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Bnb,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<SearchMode> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "bnb" => Ok(SearchMode::Bnb),
            _ => Err(invalid(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub n: usize,
    pub p: Rat,
    pub mode: SearchMode,
    pub optimum: Rat,
    pub optimum_density: f64,
    /// Canonical colour strings of the extremal igraphs, sorted.
    pub extremal: Vec<String>,
    pub nodes: u64,
    pub pruned_by_bound: u64,
    pub pruned_by_pattern: u64,
    pub pruned_by_canonicity: u64,
    pub wall_ms: u128,
}

struct Best {
    floor: Option<i64>,
    bound_on: bool,
    value: Option<i64>,
    graphs: Vec<IGraph>,
}

impl Leaf for Best {
    fn leaf(&mut self, g: &IGraph, w: i64) {
        match self.value {
            Some(v) if w < v => {}
            Some(v) if w == v => self.graphs.push(g.clone()),
            _ => {
                self.value = Some(w);
                self.graphs = vec![g.clone()];
                if self.bound_on {
                    self.floor = Some(self.floor.map_or(w, |f| f.max(w)));
                }
            }
        }
    }

    fn floor(&self) -> Option<i64> {
        if self.bound_on {
            self.floor
        } else {
            None
        }
    }
}

fn split_p(p: &Rat) -> Result<(i64, i64)> {
    crate::igraph::check_p(p)?;
    p.to_i64_pair().ok_or_else(|| invalid(format!("p = {p} does not fit in 64 bits")))
}

/// Exact maximum p-weight over `h`-free igraphs on `n` vertices, with every
/// extremal igraph up to isomorphism.
pub fn kex_bruteforce(h: &Pattern, n: usize, p: &Rat, mode: SearchMode) -> Result<SearchReport> {
    let limit = match mode {
        SearchMode::Exhaustive => EXHAUSTIVE_LIMIT,
        SearchMode::Bnb => BNB_LIMIT,
    };
    if n > limit {
        return Err(Error::LimitExceeded { what: "n", value: n, limit });
    }
    let (num, den) = split_p(p)?;
    let start = Instant::now();
    let gen = Generator { n, pattern: Some(h), num, den };
    // feasible eye constructions seed the bound; ties are kept since pruning is strict
    let floor = if mode == SearchMode::Bnb {
        let mut seeds = Vec::new();
        for t in 1..=n.max(1) {
            for g in [blue_construction(t, n), red_construction(t, n)] {
                if is_free(&g, h) {
                    seeds.push(g.weight_scaled(num, den));
                }
            }
        }
        seeds.into_iter().max()
    } else {
        None
    };
    let bound_on = mode == SearchMode::Bnb;
    let (leaves, counters) =
        run_parallel(&gen, SPLIT_LEVEL, || Best { floor, bound_on, value: None, graphs: Vec::new() });
    let mut best: Option<i64> = None;
    for l in &leaves {
        best = best.max(l.value);
    }
    let best = best.ok_or_else(|| Error::CheckFailed("no pattern-free igraph found".into()))?;
    let mut extremal: Vec<IGraph> =
        leaves.into_iter().filter(|l| l.value == Some(best)).flat_map(|l| l.graphs).collect();
    extremal.sort_by_key(|g| g.color_string());
    extremal.dedup();
    for g in &extremal {
        if contains(g, h).is_some() || g.weight_scaled(num, den) != best || g.has_white() {
            return Err(Error::CheckFailed(format!("reported extremal igraph {} fails re-check", g.color_string())));
        }
    }
    let optimum = Rat::new(best, den);
    let dens = if n >= 2 { optimum.to_f64() / pair_count(n) as f64 } else { 0.0 };
    let Counters { nodes, pruned_bound, pruned_pattern, pruned_canon } = counters;
    Ok(SearchReport {
        n,
        p: p.clone(),
        mode,
        optimum,
        optimum_density: dens,
        extremal: extremal.iter().map(IGraph::color_string).collect(),
        nodes,
        pruned_by_bound: pruned_bound,
        pruned_by_pattern: pruned_pattern,
        pruned_by_canonicity: pruned_canon,
        wall_ms: start.elapsed().as_millis(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Matches,
    ValueMatchesButExtraExtremalGraphs,
    Differs,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactCheck {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub p: Rat,
    pub predicted: Vec<String>,
    pub predicted_weight: Rat,
    pub construction_weight_b: Rat,
    pub construction_weight_r: Rat,
    pub verdict: Verdict,
    pub report: SearchReport,
}

/// Brute force against the predicted extremal set for `eye(a, b)`.
pub fn exact_check(a: usize, b: usize, p: &Rat, n: usize) -> Result<ExactCheck> {
    let eye = Pattern::eye(a, b)?;
    let mode = if n <= EXHAUSTIVE_LIMIT { SearchMode::Exhaustive } else { SearchMode::Bnb };
    let report = kex_bruteforce(&eye, n, p, mode)?;
    let gb = blue_construction(a, n);
    let gr = red_construction(b - 1, n);
    let (wb, wr) = (gb.weight(p), gr.weight(p));
    let mut predicted: Vec<(IGraph, Rat)> = match predicted_order(a, b, p)? {
        std::cmp::Ordering::Greater => vec![(gr, wr.clone())],
        std::cmp::Ordering::Less => vec![(gb, wb.clone())],
        std::cmp::Ordering::Equal => vec![(gr, wr.clone()), (gb, wb.clone())],
    };
    let predicted_weight = predicted.iter().map(|(_, w)| w.clone()).max().expect("nonempty");
    if report.optimum < wb.clone().max(wr.clone()) {
        return Err(Error::CheckFailed(format!(
            "optimum {} is below a feasible construction weight at n={n}",
            report.optimum
        )));
    }
    let mut codes: Vec<String> = predicted.drain(..).map(|(g, _)| canonical_form(&g).color_string()).collect();
    codes.sort();
    codes.dedup();
    let verdict = if report.optimum != predicted_weight {
        Verdict::Differs
    } else if report.extremal == codes {
        Verdict::Matches
    } else {
        Verdict::ValueMatchesButExtraExtremalGraphs
    };
    Ok(ExactCheck {
        a,
        b,
        n,
        p: p.clone(),
        predicted: codes,
        predicted_weight,
        construction_weight_b: wb,
        construction_weight_r: wr,
        verdict,
        report,
    })
}

fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

fn check_exponent_domain(x: f64, y: f64, p: f64) -> Result<()> {
    let ok = x > 0.0 && x <= 1.0 && (0.0..=p).contains(&y) && (0.0..=1.0).contains(&p);
    if !ok || (p - y) / x > 1.0 + 1e-12 {
        return Err(invalid(format!("exponent needs 0 < x <= 1, 0 <= y <= p, (p-y)/x <= 1; got x={x}, y={y}, p={p}")));
    }
    Ok(())
}

/// `x H((p-y)/x) - H(p)`: the per-pair log2 probability that a uniform graph
/// with `pN` edges fits a container with `xN` green and `yN` red pairs.
pub fn fixed_size_exponent(x: f64, y: f64, p: f64) -> Result<f64> {
    check_exponent_domain(x, y, p)?;
    Ok(x * binary_entropy(((p - y) / x).min(1.0)) - binary_entropy(p))
}

/// The same quantity at finite `N`: `log2[C(xN, (p-y)N) / C(N, pN)] / N`,
/// with the counts rounded to integers.
pub fn fixed_size_log_ratio(x: f64, y: f64, p: f64, big_n: u64) -> Result<f64> {
    check_exponent_domain(x, y, p)?;
    use statrs::function::factorial::ln_binomial;
    let nf = big_n as f64;
    let green = (x * nf).round() as u64;
    let need = ((p - y) * nf).round() as u64;
    let m = (p * nf).round() as u64;
    let ln = ln_binomial(green, need.min(green)) - ln_binomial(big_n, m);
    Ok(ln / std::f64::consts::LN_2 / nf)
}
