//! `G(n,p)`, its conditioning on avoiding an induced pattern, and the
//! statistics used to probe the structure of conditioned samples.
//!
//! Randomness is ChaCha8 from a 64-bit seed. Draw `i` of a batch uses
//! stream `i` of the seeded generator, so results do not depend on how the
//! batch is split across threads. A pair `{u, v}` with `u < v` is visited in
//! colex order (by `v`, then `u`) and is an edge iff the top 53 bits of the
//! next 64-bit output are below `round(p * 2^53)`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{blue_construction, distance_to_colorable, red_construction};
use crate::error::{invalid, Error, Result};
use crate::graph::SimpleGraph;
use crate::igraph::{check_p, pair_count, IGraph};
use crate::pattern::{is_free, Pattern};
use crate::rational::Rat;
use crate::typecalc::kappa_formula;

/// Largest `n` for exact enumeration of all labelled graphs.
pub const EXACT_ENUM_LIMIT: usize = 7;

const RESOLUTION_BITS: u32 = 53;

/// Seeded source of `G(n,p)` samples.
#[derive(Clone, Debug)]
pub struct Sampler {
    n: usize,
    seed: u64,
    threshold: u64,
}

impl Sampler {
    pub fn new(n: usize, p: &Rat, seed: u64) -> Result<Sampler> {
        Ok(Sampler { n, seed, threshold: p_threshold(p)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The generator for draw `index`.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// The next graph from `rng`.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n);
        for v in 1..self.n {
            for u in 0..v {
                if (rng.next_u64() >> (64 - RESOLUTION_BITS)) < self.threshold {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Draw `index` of the batch.
    pub fn sample(&self, index: u64) -> SimpleGraph {
        self.draw(&mut self.stream(index))
    }
}

/// `round(p * 2^53)`, computed exactly.
fn p_threshold(p: &Rat) -> Result<u64> {
    check_p(p)?;
    let scaled = (p.numer() << RESOLUTION_BITS) * 2 + p.denom();
    let t: BigInt = scaled / (p.denom() * 2);
    Ok(t.to_u64().expect("p <= 1"))
}

/// One `G(n,p)` sample.
pub fn sample_gnp(n: usize, p: &Rat, seed: u64) -> Result<SimpleGraph> {
    Ok(Sampler::new(n, p, seed)?.sample(0))
}

/// Is the plain graph free of `h` as an induced subgraph (`c(G)` free)?
pub fn is_ifree(g: &SimpleGraph, h: &Pattern) -> bool {
    is_free(&g.to_igraph(), h)
}

#[derive(Clone, Debug, Serialize)]
pub struct Conditioned {
    #[serde(skip)]
    pub graph: SimpleGraph,
    /// Draws used, including the accepted one.
    pub trials: u64,
}

fn conditioned_on_stream(s: &Sampler, h: &Pattern, index: u64, budget: u64) -> Result<Conditioned> {
    if budget == 0 {
        return Err(invalid("trial budget must be at least 1"));
    }
    let mut rng = s.stream(index);
    for t in 1..=budget {
        let g = s.draw(&mut rng);
        if is_ifree(&g, h) {
            return Ok(Conditioned { graph: g, trials: t });
        }
    }
    Err(Error::Exhausted { budget })
}

/// Rejection sample from `G(n,p)` conditioned on being `h`-ifree.
pub fn sample_conditioned(n: usize, p: &Rat, h: &Pattern, seed: u64, budget: u64) -> Result<Conditioned> {
    conditioned_on_stream(&Sampler::new(n, p, seed)?, h, 0, budget)
}

/// `count` independent conditioned samples, sample `j` on stream `j`.
pub fn sample_conditioned_batch(
    n: usize,
    p: &Rat,
    h: &Pattern,
    seed: u64,
    count: u64,
    budget: u64,
) -> Result<Vec<Conditioned>> {
    let s = Sampler::new(n, p, seed)?;
    (0..count).into_par_iter().map(|j| conditioned_on_stream(&s, h, j, budget)).collect()
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let ph = k as f64 / nf;
    let z2 = z * z;
    let den = 1.0 + z2 / nf;
    let centre = (ph + z2 / (2.0 * nf)) / den;
    let half = z * (ph * (1.0 - ph) / nf + z2 / (4.0 * nf * nf)).sqrt() / den;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialStats {
    pub samples: u64,
    pub acceptances: u64,
    pub estimate: f64,
    pub sigma: f64,
    /// 95% Wilson interval.
    pub wilson95: (f64, f64),
    /// Wilson interval at three standard deviations.
    pub wilson3: (f64, f64),
}

impl TrialStats {
    pub fn new(acceptances: u64, samples: u64) -> TrialStats {
        let estimate = if samples == 0 { 0.0 } else { acceptances as f64 / samples as f64 };
        let sigma = if samples == 0 { 0.0 } else { (estimate * (1.0 - estimate) / samples as f64).sqrt() };
        TrialStats {
            samples,
            acceptances,
            estimate,
            sigma,
            wilson95: wilson_interval(acceptances, samples, 1.959_963_984_540_054),
            wilson3: wilson_interval(acceptances, samples, 3.0),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IfreeEstimate {
    pub n: usize,
    pub p: Rat,
    pub stats: TrialStats,
    /// `2^{-H_p}` of the blue construction with `a` parts, when it is free.
    pub bound_b: Option<f64>,
    /// `2^{-H_p}` of the red construction with `b-1` parts, when it is free.
    pub bound_r: Option<f64>,
    /// `estimate >= max(bounds) - 3 sigma`.
    pub lower_bound_holds: bool,
}

/// Monte Carlo estimate of `P(G(n,p) is h-ifree)`.
///
/// For an eye the construction bounds use its own `a` and `b`; for other
/// patterns they are omitted.
pub fn ifree_probability(n: usize, p: &Rat, h: &Pattern, samples: u64, seed: u64) -> Result<IfreeEstimate> {
    let s = Sampler::new(n, p, seed)?;
    let acceptances: u64 = (0..samples).into_par_iter().map(|i| u64::from(is_ifree(&s.sample(i), h))).sum();
    let stats = TrialStats::new(acceptances, samples);
    let (bound_b, bound_r) = match eye_shape(h) {
        Some((a, b)) if p > &Rat::zero() && p < &Rat::one() => {
            let bound = |g: IGraph| -> Result<Option<f64>> {
                Ok(if is_free(&g, h) { Some((-g.entropy_weight(p)?).exp2()) } else { None })
            };
            (bound(blue_construction(a, n))?, bound(red_construction(b - 1, n))?)
        }
        _ => (None, None),
    };
    let best = bound_b.into_iter().chain(bound_r).fold(0.0, f64::max);
    let lower_bound_holds = stats.estimate >= best - 3.0 * stats.sigma;
    Ok(IfreeEstimate { n, p: p.clone(), stats, bound_b, bound_r, lower_bound_holds })
}

/// `(a, b)` if the pattern is `eye(a, b)` exactly as built by [`Pattern::eye`].
fn eye_shape(h: &Pattern) -> Option<(usize, usize)> {
    let k = h.h();
    (1..k.saturating_sub(1))
        .map(|a| (a, k - a))
        .find(|&(a, b)| b >= 2 && Pattern::eye(a, b).is_ok_and(|e| &e == h))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactIfree {
    pub n: usize,
    pub p: Rat,
    /// `free_by_edges[e]` ifree labelled graphs with `e` edges.
    pub free_by_edges: Vec<u64>,
    pub probability: Rat,
}

/// Exact `P(G(n,p) is h-ifree)` by enumerating all `2^C(n,2)` graphs.
pub fn exact_ifree_probability(n: usize, p: &Rat, h: &Pattern) -> Result<ExactIfree> {
    if n > EXACT_ENUM_LIMIT {
        return Err(Error::LimitExceeded { what: "n", value: n, limit: EXACT_ENUM_LIMIT });
    }
    check_p(p)?;
    let m = pair_count(n);
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let free_by_edges = (0..1u64 << m)
        .into_par_iter()
        .fold(
            || vec![0u64; m + 1],
            |mut acc, mask| {
                let mut g = SimpleGraph::empty(n);
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        g.add_edge(u, v);
                    }
                }
                if is_ifree(&g, h) {
                    acc[mask.count_ones() as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let q = Rat::one() - p;
    let probability = free_by_edges
        .iter()
        .enumerate()
        .map(|(e, &c)| Rat::int(c as i64) * p.pow(e as i32) * q.pow((m - e) as i32))
        .sum();
    Ok(ExactIfree { n, p: p.clone(), free_by_edges, probability })
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureSample {
    pub index: u64,
    pub trials: u64,
    pub edges: usize,
    /// Edge deletions to an `a`-partite graph.
    pub d_partite: u64,
    /// Edge additions making the complement `(b-1)`-partite.
    pub d_copartite: u64,
    pub d_min: u64,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureStats {
    pub n: usize,
    pub p: Rat,
    pub a: usize,
    pub b: usize,
    /// Conditioned samples over total draws.
    pub acceptance: TrialStats,
    pub mean_normalized_distance: f64,
    pub max_normalized_distance: f64,
    pub rows: Vec<StructureSample>,
}

/// Distance of conditioned samples to the two extremal shapes: `a`-partite,
/// or complement `(b-1)`-partite.
pub fn eye_free_structure_stat(
    n: usize,
    p: &Rat,
    a: usize,
    b: usize,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<StructureStats> {
    let eye = Pattern::eye(a, b)?;
    let batch = sample_conditioned_batch(n, p, &eye, seed, samples, budget)?;
    let rows: Vec<StructureSample> = batch
        .par_iter()
        .enumerate()
        .map(|(j, c)| {
            let dp = distance_to_colorable(&c.graph, a)?;
            let dc = distance_to_colorable(&c.graph.complement(), b - 1)?;
            Ok(StructureSample {
                index: j as u64,
                trials: c.trials,
                edges: c.graph.edge_count(),
                d_partite: dp.edits,
                d_copartite: dc.edits,
                d_min: dp.edits.min(dc.edits),
                exact: dp.exact && dc.exact,
            })
        })
        .collect::<Result<_>>()?;
    let trials: u64 = rows.iter().map(|r| r.trials).sum();
    let n2 = (n * n) as f64;
    let norm: Vec<f64> = rows.iter().map(|r| r.d_min as f64 / n2).collect();
    let mean = if norm.is_empty() { 0.0 } else { norm.iter().sum::<f64>() / norm.len() as f64 };
    Ok(StructureStats {
        n,
        p: p.clone(),
        a,
        b,
        acceptance: TrialStats::new(samples, trials),
        mean_normalized_distance: mean,
        max_normalized_distance: norm.iter().copied().fold(0.0, f64::max),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColordegViolation {
    pub vertex: usize,
    pub bound: &'static str,
    pub degree: usize,
    pub required: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColordegReport {
    /// Vertices meeting the p-degree premise.
    pub premise_vertices: usize,
    pub violations: Vec<ColordegViolation>,
}

impl ColordegReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Colour-degree lower bounds at every vertex with `d_p(x) >= κ_p n - c`.
pub fn colordeg_check(g: &IGraph, p: &Rat, a: usize, b: usize, c: &Rat) -> Result<ColordegReport> {
    if !(p > &Rat::zero() && p < &Rat::one()) {
        return Err(invalid(format!("colour-degree bounds need 0 < p < 1, got {p}")));
    }
    let kappa = kappa_formula(a, b, p)?.value;
    let n = Rat::from(g.n());
    let q = Rat::one() - p;
    let half = Rat::new(1, 2);
    let red_need = &n * Rat::new(a as i64 - 1, a as i64) - c / p;
    let blue_need = &n * Rat::new(b as i64 - 2, b as i64 - 1) - c / &q;
    let premise = &kappa * &n - c;
    let mut report = ColordegReport { premise_vertices: 0, violations: Vec::new() };
    for x in 0..g.n() {
        let d = g.degrees_all(x, p);
        if d.d_p < premise {
            continue;
        }
        report.premise_vertices += 1;
        let mut need = vec![("d_r", d.d_r, &red_need), ("d_b", d.d_b, &blue_need)];
        if p <= &half {
            need.push(("d_g", d.d_g, &red_need));
        }
        if p >= &half {
            need.push(("d_g", d.d_g, &blue_need));
        }
        for (name, deg, req) in need {
            if Rat::from(deg) < *req {
                report.violations.push(ColordegViolation { vertex: x, bound: name, degree: deg, required: req.clone() });
            }
        }
    }
    Ok(report)
}
