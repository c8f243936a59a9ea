//! p-cores, the describes relation and the search for `κ_p`.
//!
//! `λ_p` can only drop when vertices are deleted (restrict a maximizer of the
//! subtype's form to the larger simplex). So if some proper subtype `σ` of
//! `τ` had `λ_p(σ) = λ_p(τ)`, then any one-vertex deletion `τ - v ⊇ σ` would
//! be squeezed to the same value. Checking one-vertex deletions is enough.
//!
//! `τ` describes `H` iff `H` embeds in the blowup with all parts of size
//! `h = |V(H)|`: an embedding into any blowup puts at most `h` vertices in a
//! part, so it can be moved into the `h`-fold blowup. Equivalently there is
//! a map `f: V(H) -> V(τ)` such that pairs sent into one vertex match its
//! colour and pairs sent across match the edge colour (green matches both).
//! The map form is what [`describes`] searches; [`describes_by_blowup`] is
//! the literal definition.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{blowup, PartSizes};
use crate::error::{invalid, Error, Result};
use crate::igraph::{IGraph, PairColor};
use crate::pattern::{contains, Pattern};
use crate::rational::Rat;

use super::{enumerate_types, lambda_p, TypeGraph, VertexColor};

pub fn is_p_core(tau: &TypeGraph, p: &Rat) -> Result<bool> {
    if tau.k() <= 1 {
        return Ok(tau.k() == 1);
    }
    let full = lambda_p(tau, p)?.value;
    for v in 0..tau.k() {
        if lambda_p(&tau.remove_vertex(v), p)?.value >= full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does some blowup of `tau` contain `h`?
pub fn describes(tau: &TypeGraph, h: &Pattern) -> bool {
    let k = tau.k();
    if h.h() == 0 {
        return true;
    }
    if k == 0 {
        return false;
    }
    let mut f = vec![usize::MAX; h.h()];
    fn fits(tau: &TypeGraph, h: &Pattern, f: &[usize], i: usize, u: usize) -> bool {
        (0..i).all(|j| {
            let red = h.is_red(i, j);
            if f[j] == u {
                match tau.vertex_color(u) {
                    VertexColor::Red => red,
                    VertexColor::Blue => !red,
                }
            } else {
                let c = tau.edge_color(u, f[j]);
                if red {
                    c.in_red()
                } else {
                    c.in_blue()
                }
            }
        })
    }
    fn rec(tau: &TypeGraph, h: &Pattern, f: &mut [usize], i: usize) -> bool {
        if i == h.h() {
            return true;
        }
        for u in 0..tau.k() {
            if fits(tau, h, f, i, u) {
                f[i] = u;
                if rec(tau, h, f, i + 1) {
                    return true;
                }
            }
        }
        f[i] = usize::MAX;
        false
    }
    rec(tau, h, &mut f, 0)
}

/// The definition itself: containment in the `h`-fold blowup.
pub fn describes_by_blowup(tau: &TypeGraph, h: &Pattern) -> bool {
    let sizes = PartSizes::new(vec![h.h(); tau.k()]);
    contains(&blowup(tau, &sizes), h).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `p` below the threshold: `τ(0,a)` wins.
    Blue,
    /// `p` at the threshold: both branches agree.
    Tie,
    /// `p` above the threshold: `τ(b-1,0)` wins.
    Red,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaFormula {
    pub value: Rat,
    pub blue_branch: Rat,
    pub red_branch: Rat,
    pub threshold: Rat,
    pub regime: Regime,
}

/// `max(1 - p/a, 1 - (1-p)/(b-1))` together with the regime.
pub fn kappa_formula(a: usize, b: usize, p: &Rat) -> Result<KappaFormula> {
    if a < 1 || b < 2 {
        return Err(invalid(format!("eye({a},{b}) needs a >= 1 and b >= 2")));
    }
    if !p.is_probability() {
        return Err(invalid(format!("p = {p} is not in [0, 1]")));
    }
    let blue_branch = Rat::one() - p / a as i64;
    let red_branch = Rat::one() - (Rat::one() - p) / (b as i64 - 1);
    let threshold = Rat::new(a as i64, (a + b - 1) as i64);
    let regime = match p.cmp(&threshold) {
        std::cmp::Ordering::Less => Regime::Blue,
        std::cmp::Ordering::Equal => Regime::Tie,
        std::cmp::Ordering::Greater => Regime::Red,
    };
    let value = blue_branch.clone().max(red_branch.clone());
    Ok(KappaFormula { value, blue_branch, red_branch, threshold, regime })
}

/// p-values and p-core flags of every type up to a size, for one `p`.
pub struct LambdaTable {
    p: Rat,
    kmax: usize,
    types: Vec<TypeGraph>,
    values: Vec<Rat>,
    core: Vec<bool>,
}

impl LambdaTable {
    pub fn build(p: &Rat, kmax: usize) -> Result<LambdaTable> {
        let mut types = Vec::new();
        for k in 1..=kmax {
            types.extend(enumerate_types(k)?);
        }
        let values: Vec<Rat> =
            types.par_iter().map(|t| lambda_p(t, p).map(|r| r.value)).collect::<Result<Vec<_>>>()?;
        let index: HashMap<(usize, u64), usize> =
            types.iter().enumerate().map(|(i, t)| ((t.k(), t.code()), i)).collect();
        let core = types
            .par_iter()
            .enumerate()
            .map(|(i, t)| {
                t.k() == 1
                    || (0..t.k()).all(|v| {
                        let d = t.remove_vertex(v);
                        let j = index[&(d.k(), d.canonical_code())];
                        values[j] < values[i]
                    })
            })
            .collect();
        Ok(LambdaTable { p: p.clone(), kmax, types, values, core })
    }

    /// Process-wide cache keyed by `(p, kmax)`.
    pub fn shared(p: &Rat, kmax: usize) -> Result<Arc<LambdaTable>> {
        type Cache = Mutex<HashMap<(String, usize), Arc<LambdaTable>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (p.to_string(), kmax);
        if let Some(t) = cache.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(LambdaTable::build(p, kmax)?);
        cache.lock().expect("cache lock").insert(key, Arc::clone(&table));
        Ok(table)
    }

    pub fn p(&self) -> &Rat {
        &self.p
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TypeGraph, &Rat, bool)> {
        self.types.iter().zip(&self.values).zip(&self.core).map(|((t, v), &c)| (t, v, c))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaSearch {
    pub value: Rat,
    /// Canonical maximizers, sorted by code.
    pub maximizers: Vec<TypeGraph>,
    pub types_examined: usize,
    pub core_types: usize,
    /// Whether some maximizer has exactly `kmax` vertices, i.e. larger types
    /// might matter.
    pub at_boundary: bool,
}

/// Maximum p-value over p-core types with at most `kmax` vertices that do
/// not describe `h`.
pub fn kappa_search(h: &Pattern, p: &Rat, kmax: usize) -> Result<KappaSearch> {
    if kmax > super::MAX_ENUM_K {
        return Err(Error::LimitExceeded { what: "kmax", value: kmax, limit: super::MAX_ENUM_K });
    }
    let table = LambdaTable::shared(p, kmax)?;
    let candidates: Vec<(&TypeGraph, &Rat)> = table
        .iter()
        .filter(|(_, _, core)| *core)
        .map(|(t, v, _)| (t, v))
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter(|(t, _)| !describes(t, h))
        .collect();
    let value = candidates
        .iter()
        .map(|(_, v)| *v)
        .max()
        .cloned()
        .ok_or_else(|| invalid("every candidate type describes the pattern"))?;
    let mut maximizers: Vec<TypeGraph> =
        candidates.iter().filter(|(_, v)| **v == value).map(|(t, _)| (*t).clone()).collect();
    maximizers.sort_by_key(|t| (t.k(), t.code()));
    let at_boundary = maximizers.iter().any(|t| t.k() == kmax);
    let core_types = table.iter().filter(|(_, _, c)| *c).count();
    Ok(KappaSearch { value, maximizers, types_examined: table.len(), core_types, at_boundary })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreReport {
    pub is_core: bool,
    pub describes_eye: Option<bool>,
    pub violations: Vec<String>,
}

/// Structural consequences for p-core types: non-green edges only where the
/// p-regime allows them, and with `eye = Some((a, b))` and a type that does
/// not describe the eye, monochromatic vertices, at most `a` blue vertices,
/// and green degree below `b-1` when the vertices are red.
pub fn core_structure_check(tau: &TypeGraph, p: &Rat, eye: Option<(usize, usize)>) -> Result<CoreReport> {
    let is_core = is_p_core(tau, p)?;
    let mut report = CoreReport { is_core, describes_eye: None, violations: Vec::new() };
    if !is_core {
        return Ok(report);
    }
    let half = Rat::new(1, 2);
    for u in 0..tau.k() {
        for v in (u + 1)..tau.k() {
            let c = tau.edge_color(u, v);
            let (cu, cv) = (tau.vertex_color(u), tau.vertex_color(v));
            let allowed = match c {
                PairColor::Green => true,
                PairColor::Blue => *p < half && cu == VertexColor::Red && cv == VertexColor::Red,
                PairColor::Red => *p > half && cu == VertexColor::Blue && cv == VertexColor::Blue,
                PairColor::White => false,
            };
            if !allowed {
                report.violations.push(format!("edge ({u},{v}) is {c:?} between {cu:?} and {cv:?} vertices"));
            }
        }
    }
    if let Some((a, b)) = eye {
        let d = describes(tau, &Pattern::eye(a, b)?);
        report.describes_eye = Some(d);
        if !d {
            let reds = tau.red_count();
            if reds != 0 && reds != tau.k() {
                report.violations.push("vertices of both colours".into());
            }
            if reds < tau.k() && tau.k() > a {
                report.violations.push(format!("{} vertices with a blue vertex present, limit {a}", tau.k()));
            }
            if reds > 0 {
                for u in 0..tau.k() {
                    if tau.green_degree(u) >= b - 1 {
                        report.violations.push(format!("vertex {u} has green degree {}", tau.green_degree(u)));
                    }
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct PeelOutcome {
    /// Removed vertices, as indices of the input graph, in removal order.
    pub removed: Vec<usize>,
    /// Surviving vertices of the input graph.
    pub kept: Vec<usize>,
    #[serde(skip)]
    pub remainder: IGraph,
    /// `w_p(G) > (κ - s²) C(n,2)`.
    pub precondition: bool,
    /// `|S| <= s n`.
    pub size_bound_holds: bool,
    /// `δ_p` of the remainder exceeds `(κ - s)` times its order.
    pub degree_bound_holds: bool,
}

/// Repeatedly deletes a vertex of minimum p-degree (smallest index on ties)
/// while that degree is at most `(kappa - s) i`, where `i` is the current
/// order and `s` plays the role of `√δ`.
pub fn peel_min_degree(g: &IGraph, p: &Rat, kappa: &Rat, s: &Rat) -> Result<PeelOutcome> {
    crate::igraph::check_p(p)?;
    if s.is_negative() {
        return Err(invalid("s must be nonnegative"));
    }
    let n = g.n();
    let delta = s * s;
    let pairs = Rat::from(crate::igraph::pair_count(n));
    let precondition = g.weight(p) > (kappa - &delta) * &pairs;
    let bound = kappa - s;
    let mut kept: Vec<usize> = (0..n).collect();
    let mut cur = g.clone();
    let mut removed = Vec::new();
    while cur.n() > 0 {
        let i = cur.n() as i64;
        let (x, dx) = (0..cur.n())
            .map(|x| (x, cur.degrees_all(x, p).d_p))
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .expect("nonempty");
        if dx > &bound * i {
            break;
        }
        removed.push(kept.remove(x));
        cur = cur.remove_vertex(x);
    }
    let size_bound_holds = Rat::from(removed.len()) <= s * n as i64;
    let degree_bound_holds = cur.n() == 0 || cur.min_p_degree(p)? > &bound * cur.n() as i64;
    Ok(PeelOutcome { removed, kept, remainder: cur, precondition, size_bound_holds, degree_bound_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::blue_construction;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn formula_examples() {
        let k = kappa_formula(2, 2, &r(1, 2)).unwrap();
        assert_eq!(k.value, r(3, 4));
        assert_eq!(k.regime, Regime::Blue);
        let t = kappa_formula(2, 3, &r(1, 2)).unwrap();
        assert_eq!(t.blue_branch, t.red_branch);
        assert_eq!(t.value, r(3, 4));
        assert_eq!(t.regime, Regime::Tie);
        assert_eq!(kappa_formula(2, 2, &r(1, 1)).unwrap().value, Rat::one());
        assert!(kappa_formula(0, 2, &r(1, 2)).is_err());
    }

    #[test]
    fn core_examples() {
        let p = r(1, 3);
        assert!(is_p_core(&TypeGraph::tau(0, 3), &p).unwrap());
        assert!(is_p_core(&TypeGraph::tau(1, 0), &p).unwrap());
        // duplicate blue vertex joined by a blue edge adds nothing
        let mut t = TypeGraph::tau(0, 3);
        t.set_edge(1, 2, PairColor::Blue).unwrap();
        assert!(!is_p_core(&t, &p).unwrap());
    }

    #[test]
    fn describes_examples() {
        let rb = TypeGraph::tau(1, 1);
        for (a, b) in [(1, 2), (2, 2), (3, 4)] {
            let e = Pattern::eye(a, b).unwrap();
            assert!(describes(&rb, &e));
            for y in 1..=5 {
                assert_eq!(describes(&TypeGraph::tau(0, y), &e), y > a, "tau(0,{y}) eye({a},{b})");
            }
            for x in 1..=5 {
                assert_eq!(describes(&TypeGraph::tau(x, 0), &e), x >= b, "tau({x},0) eye({a},{b})");
            }
        }
    }

    #[test]
    fn describes_matches_blowup_definition() {
        let e = Pattern::eye(2, 2).unwrap();
        for k in 1..=3 {
            for t in enumerate_types(k).unwrap() {
                assert_eq!(describes(&t, &e), describes_by_blowup(&t, &e), "{t}");
            }
        }
        let e = Pattern::eye(1, 3).unwrap();
        for t in enumerate_types(3).unwrap() {
            assert_eq!(describes(&t, &e), describes_by_blowup(&t, &e), "{t}");
        }
    }

    #[test]
    fn describes_monotone_under_greening() {
        let e = Pattern::eye(2, 3).unwrap();
        for t in enumerate_types(3).unwrap() {
            if !describes(&t, &e) {
                continue;
            }
            for u in 0..3 {
                for v in (u + 1)..3 {
                    let mut g = t.clone();
                    g.set_edge(u, v, PairColor::Green).unwrap();
                    assert!(describes(&g, &e));
                }
            }
        }
    }

    #[test]
    fn kappa_small_search() {
        let s = kappa_search(&Pattern::eye(2, 2).unwrap(), &r(1, 2), 4).unwrap();
        assert_eq!(s.value, r(3, 4));
        assert_eq!(s.maximizers, vec![TypeGraph::tau(0, 2).canonical()]);
    }

    #[test]
    fn core_structure_on_all_green() {
        for p in [r(1, 4), r(1, 2), r(3, 4)] {
            let rep = core_structure_check(&TypeGraph::tau(0, 2), &p, Some((2, 2))).unwrap();
            assert!(rep.is_core);
            assert!(rep.violations.is_empty());
        }
        // red edge between red vertices at p < 1/2 never survives as a core
        let mut t = TypeGraph::tau(2, 0);
        t.set_edge(0, 1, PairColor::Red).unwrap();
        let rep = core_structure_check(&t, &r(1, 4), None).unwrap();
        assert!(!rep.is_core || !rep.violations.is_empty());
    }

    #[test]
    fn peeling_leaves_constructions_alone() {
        let p = r(1, 2);
        let g = blue_construction(2, 20);
        let kappa = kappa_formula(2, 2, &p).unwrap().value;
        let out = peel_min_degree(&g, &p, &kappa, &r(1, 10)).unwrap();
        assert!(out.removed.is_empty());
        assert!(out.precondition);
        assert!(out.degree_bound_holds);
    }

    #[test]
    fn white_vertex_is_peeled_first() {
        let p = r(1, 2);
        let mut g = blue_construction(2, 12);
        for v in 1..12 {
            g.set(0, v, PairColor::White);
        }
        let kappa = kappa_formula(2, 2, &p).unwrap().value;
        let out = peel_min_degree(&g, &p, &kappa, &r(1, 10)).unwrap();
        assert_eq!(out.removed.first(), Some(&0));
    }
}
