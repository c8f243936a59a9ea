//! The two extremal families, blowups of types, and weight arithmetic.
//!
//! `B_a(n)` is `a` blue cliques joined by green pairs, `R_{b-1}(n)` is `b-1`
//! red cliques joined by green pairs. The balanced members put the
//! remainder on the first parts.

mod distance;

pub use distance::{distance_to_class, distance_to_colorable, ClassKind, Distance, EXACT_DISTANCE_LIMIT};

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::igraph::{pair_count, IGraph, PairColor};
use crate::rational::Rat;
use crate::typecalc::{kappa_formula, TypeGraph, VertexColor};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PartSizes {
    sizes: Vec<usize>,
}

impl PartSizes {
    pub fn new(sizes: Vec<usize>) -> PartSizes {
        PartSizes { sizes }
    }

    /// `t` parts of sizes differing by at most one, larger parts first.
    pub fn balanced(n: usize, t: usize) -> PartSizes {
        assert!(t >= 1, "need at least one part");
        let (q, r) = (n / t, n % t);
        PartSizes { sizes: (0..t).map(|i| q + usize::from(i < r)).collect() }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn t(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// `a_i = n_i - n/t`; these sum to zero.
    pub fn deviations(&self) -> Vec<Rat> {
        let avg = Rat::new(self.n() as i64, self.t() as i64);
        self.sizes.iter().map(|&s| Rat::from(s) - &avg).collect()
    }

    /// Part index of every vertex, parts laid out consecutively.
    pub fn labels(&self) -> Vec<usize> {
        self.sizes.iter().enumerate().flat_map(|(i, &s)| std::iter::repeat_n(i, s)).collect()
    }

    pub fn parts(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.t());
        let mut start = 0;
        for &s in &self.sizes {
            out.push((start..start + s).collect());
            start += s;
        }
        out
    }
}

/// Cliques of colour `inside` on consecutive parts, green between parts.
pub fn class_member(sizes: &PartSizes, inside: PairColor) -> IGraph {
    let lab = sizes.labels();
    IGraph::from_fn(sizes.n(), |u, v| if lab[u] == lab[v] { inside } else { PairColor::Green })
}

/// Balanced `B_a(n)`.
pub fn blue_construction(a: usize, n: usize) -> IGraph {
    class_member(&PartSizes::balanced(n, a), PairColor::Blue)
}

/// Balanced `R_{b1}(n)` with `b1 = b - 1` parts.
pub fn red_construction(b1: usize, n: usize) -> IGraph {
    class_member(&PartSizes::balanced(n, b1), PairColor::Red)
}

/// If the igraph is `inside`-cliques joined by green, with at most `parts`
/// cliques, returns the cliques.
fn class_partition(g: &IGraph, parts: usize, inside: PairColor) -> Option<Vec<Vec<usize>>> {
    let n = g.n();
    let mut label = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if label[v] != usize::MAX {
            continue;
        }
        let class: Vec<usize> = (v..n).filter(|&u| u == v || g.color(u, v) == inside).collect();
        for &u in &class {
            if label[u] != usize::MAX {
                return None;
            }
            label[u] = classes.len();
        }
        classes.push(class);
    }
    if classes.len() > parts {
        return None;
    }
    for (u, v) in g.pairs() {
        let want = if label[u] == label[v] { inside } else { PairColor::Green };
        if g.color(u, v) != want {
            return None;
        }
    }
    Some(classes)
}

/// Membership in `𝓑_a(n)`: the witnessing partition, if any.
pub fn is_in_b_class(g: &IGraph, a: usize) -> Option<Vec<Vec<usize>>> {
    class_partition(g, a, PairColor::Blue)
}

/// Membership in `𝓡_{b1}(n)`.
pub fn is_in_r_class(g: &IGraph, b1: usize) -> Option<Vec<Vec<usize>>> {
    class_partition(g, b1, PairColor::Red)
}

/// Blowup of a type: part `u` has `sizes[u]` vertices coloured by the
/// vertex colour of `u` inside, and by the edge colour `uv` towards part `v`.
pub fn blowup(tau: &TypeGraph, sizes: &PartSizes) -> IGraph {
    assert_eq!(tau.k(), sizes.t(), "one part size per type vertex");
    let lab = sizes.labels();
    IGraph::from_fn(sizes.n(), |u, v| {
        let (x, y) = (lab[u], lab[v]);
        if x == y {
            match tau.vertex_color(x) {
                VertexColor::Red => PairColor::Red,
                VertexColor::Blue => PairColor::Blue,
            }
        } else {
            tau.edge_color(x, y)
        }
    })
}

/// Weight of a blowup from the quadratic form: `(s^T W s - Σ_u w_p(u) s_u) / 2`.
pub fn blowup_weight_formula(tau: &TypeGraph, sizes: &PartSizes, p: &Rat) -> Rat {
    let w = tau.weight_matrix(p);
    let s: Vec<Rat> = sizes.sizes().iter().map(|&v| Rat::from(v)).collect();
    let diag: Rat = (0..tau.k()).map(|u| w.get(u, u) * &s[u]).sum();
    (w.quadratic_form(&s) - diag) / 2
}

/// Edge count of the complete multipartite graph, checked against
/// `2e = (1 - 1/t) n^2 - Σ a_i^2`.
pub fn turan_edge_count(sizes: &PartSizes) -> Result<u64> {
    let t = sizes.t();
    if t == 0 {
        return Err(invalid("need at least one part"));
    }
    let n = sizes.n() as u64;
    let e: u64 = (n * n - sizes.sizes().iter().map(|&s| (s * s) as u64).sum::<u64>()) / 2;
    let rhs = (Rat::one() - Rat::new(1, t as i64)) * Rat::from(n as usize).pow(2)
        - sizes.deviations().iter().map(|d| d * d).sum::<Rat>();
    if Rat::from(2 * e as usize) != rhs {
        return Err(Error::CheckFailed(format!("2e = {} but identity gives {rhs} for {:?}", 2 * e, sizes.sizes())));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub value: Rat,
    /// Residual `C` (or `C'`), between 0 and `parts/8`.
    pub residual: Rat,
}

fn closed_form(n: usize, parts: usize, q: &Rat) -> ClosedForm {
    // q = weight of an inside pair relative to green: p for B_a, 1-p for R_{b-1}
    let t = parts as i64;
    let r = (n % parts) as i64;
    let residual = q * (Rat::int(r) - Rat::new(r * r, t)) / 2;
    let value = (Rat::one() - q / t) * Rat::from(pair_count(n)) + q * (Rat::one() - Rat::new(1, t)) * n as i64 / 2
        - &residual;
    ClosedForm { value, residual }
}

/// `w_p(B_a(n)) = (1 - p/a) C(n,2) + p(1 - 1/a) n/2 - C`.
pub fn weight_b(n: usize, a: usize, p: &Rat) -> Result<ClosedForm> {
    if a < 1 {
        return Err(invalid("a must be at least 1"));
    }
    crate::igraph::check_p(p)?;
    Ok(closed_form(n, a, p))
}

/// `w_p(R_{b-1}(n)) = (1 - (1-p)/(b-1)) C(n,2) + (1-p)(1 - 1/(b-1)) n/2 - C'`.
pub fn weight_r(n: usize, b: usize, p: &Rat) -> Result<ClosedForm> {
    if b < 2 {
        return Err(invalid("b must be at least 2"));
    }
    crate::igraph::check_p(p)?;
    Ok(closed_form(n, b - 1, &(Rat::one() - p)))
}

/// Ordering of `w_p(R_{b-1}(n))` against `w_p(B_a(n))`.
pub fn compare_extremal(n: usize, a: usize, b: usize, p: &Rat) -> Result<Ordering> {
    Ok(weight_r(n, b, p)?.value.cmp(&weight_b(n, a, p)?.value))
}

/// The asymptotic ordering of `R_{b-1}` against `B_a`.
pub fn predicted_order(a: usize, b: usize, p: &Rat) -> Result<Ordering> {
    let thr = kappa_formula(a, b, p)?.threshold;
    Ok(match p.cmp(&thr) {
        Ordering::Greater => Ordering::Greater,
        Ordering::Less => Ordering::Less,
        Ordering::Equal => (b - 1).cmp(&a),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareScan {
    pub a: usize,
    pub b: usize,
    pub p: Rat,
    pub predicted: String,
    /// Smallest `n0` in the scanned range such that every `n` in
    /// `[n0, n_max]` follows the prediction; `None` if even `n_max` fails.
    pub smallest_valid_n: Option<usize>,
    pub mismatches: Vec<usize>,
}

fn order_name(o: Ordering) -> &'static str {
    match o {
        Ordering::Greater => "R",
        Ordering::Less => "B",
        Ordering::Equal => "equal",
    }
}

/// Exact comparison over `n_min..=n_max` against the predicted ordering.
pub fn compare_scan(a: usize, b: usize, p: &Rat, n_min: usize, n_max: usize) -> Result<CompareScan> {
    let pred = predicted_order(a, b, p)?;
    let mut mismatches = Vec::new();
    for n in n_min..=n_max {
        if compare_extremal(n, a, b, p)? != pred {
            mismatches.push(n);
        }
    }
    let smallest_valid_n = match mismatches.last() {
        None => Some(n_min),
        Some(&m) if m < n_max => Some(m + 1),
        Some(_) => None,
    };
    Ok(CompareScan { a, b, p: p.clone(), predicted: order_name(pred).into(), smallest_valid_n, mismatches })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceCheck {
    pub construction: &'static str,
    pub difference: Rat,
    pub bound: Rat,
    pub holds: bool,
}

/// `w_p(X(n)) - w_p(X(n-1)) >= κ_p n - 3` for whichever of `B_a`, `R_{b-1}`
/// the p-regime makes applicable (both at the threshold).
pub fn degree_difference_check(a: usize, b: usize, p: &Rat, n: usize) -> Result<Vec<DifferenceCheck>> {
    if n < 1 {
        return Err(invalid("n must be at least 1"));
    }
    let k = kappa_formula(a, b, p)?;
    let bound = &k.value * n as i64 - 3;
    let mut out = Vec::new();
    if *p >= k.threshold {
        let d = weight_r(n, b, p)?.value - weight_r(n - 1, b, p)?.value;
        out.push(DifferenceCheck { construction: "R", holds: d >= bound, difference: d, bound: bound.clone() });
    }
    if *p <= k.threshold {
        let d = weight_b(n, a, p)?.value - weight_b(n - 1, a, p)?.value;
        out.push(DifferenceCheck { construction: "B", holds: d >= bound, difference: d, bound: bound.clone() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::typecalc::lambda_p;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn b1_is_all_blue() {
        assert_eq!(blue_construction(1, 5), IGraph::new(5, PairColor::Blue));
        assert_eq!(red_construction(1, 4), IGraph::new(4, PairColor::Red));
    }

    #[test]
    fn balanced_sizes() {
        assert_eq!(PartSizes::balanced(7, 3).sizes(), &[3, 2, 2]);
        assert_eq!(PartSizes::balanced(2, 3).sizes(), &[1, 1, 0]);
        let d = PartSizes::balanced(7, 3).deviations();
        assert_eq!(d.iter().cloned().sum::<Rat>(), Rat::zero());
    }

    #[test]
    fn membership() {
        let g = blue_construction(3, 8);
        let parts = is_in_b_class(&g, 3).unwrap();
        let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![3, 3, 2]);
        assert!(is_in_b_class(&g, 2).is_none());
        assert!(is_in_r_class(&g, 3).is_none());
        assert!(is_in_b_class(&IGraph::new(5, PairColor::Green), 4).is_none());
        assert!(is_in_b_class(&IGraph::new(4, PairColor::Green), 4).is_some());
        assert!(is_in_r_class(&g.color_swap(), 3).is_some());
        // a shuffled member is still accepted
        let h = g.permuted(&[7, 0, 6, 1, 5, 2, 4, 3]);
        assert!(is_in_b_class(&h, 3).is_some());
    }

    #[test]
    fn blowup_examples() {
        let g = blowup(&TypeGraph::tau(0, 3), &PartSizes::new(vec![2, 2, 2]));
        assert!(is_in_b_class(&g, 3).is_some());
        assert_eq!(blowup(&TypeGraph::tau(1, 0), &PartSizes::new(vec![4])), IGraph::new(4, PairColor::Red));
    }

    #[test]
    fn blowup_weight_approaches_lambda() {
        let mut t = TypeGraph::tau(2, 1);
        t.set_edge(0, 1, PairColor::Blue).unwrap();
        let p = r(1, 3);
        let lam = lambda_p(&t, &p).unwrap();
        let n = 600usize;
        let mut sizes: Vec<usize> = lam.x.iter().map(|x| (x * n as i64).floor().to_f64() as usize).collect();
        let short = n - sizes.iter().sum::<usize>();
        sizes[0] += short;
        let g = blowup(&t, &PartSizes::new(sizes));
        let dens = g.weight(&p).to_f64() / pair_count(n) as f64;
        assert!((dens - lam.value.to_f64()).abs() < 0.01, "{dens} vs {}", lam.value);
    }

    #[test]
    fn turan_examples() {
        assert_eq!(turan_edge_count(&PartSizes::new(vec![3, 2])).unwrap(), 6);
        assert_eq!(turan_edge_count(&PartSizes::balanced(7, 7)).unwrap(), 21);
        assert_eq!(turan_edge_count(&PartSizes::new(vec![9])).unwrap(), 0);
    }

    #[test]
    fn closed_form_examples() {
        let f = weight_b(5, 2, &r(1, 2)).unwrap();
        assert_eq!(f.value, Rat::int(8));
        assert_eq!(f.residual, r(1, 8));
        assert_eq!(weight_b(6, 3, &r(1, 3)).unwrap().residual, Rat::zero());
        assert_eq!(blue_construction(2, 4).weight(&r(1, 2)), Rat::int(5));
    }

    #[test]
    fn closed_forms_match_direct_weights() {
        for n in 1..=40 {
            for t in 1..=5 {
                for p in [r(1, 4), r(1, 2), r(3, 4)] {
                    assert_eq!(weight_b(n, t, &p).unwrap().value, blue_construction(t, n).weight(&p));
                    assert_eq!(weight_r(n, t + 1, &p).unwrap().value, red_construction(t, n).weight(&p));
                }
            }
        }
    }

    #[test]
    fn compare_examples() {
        for n in 4..=100 {
            assert_eq!(compare_extremal(n, 2, 2, &r(1, 2)).unwrap(), Ordering::Less);
            assert_eq!(compare_extremal(n, 2, 3, &r(1, 2)).unwrap(), Ordering::Equal);
        }
        let scan = compare_scan(2, 2, &r(3, 4), 2, 100).unwrap();
        assert_eq!(scan.predicted, "R");
        assert!(scan.smallest_valid_n.is_some());
    }

    #[test]
    fn difference_examples() {
        for (a, b, p, n) in [(2, 2, r(1, 2), 10), (2, 3, r(1, 2), 17), (3, 2, r(3, 4), 25)] {
            let checks = degree_difference_check(a, b, &p, n).unwrap();
            assert!(!checks.is_empty());
            assert!(checks.iter().all(|c| c.holds), "{a} {b} {p} {n}");
        }
    }

    proptest! {
        #[test]
        fn blowup_weight_two_ways(
            sizes in proptest::collection::vec(0usize..6, 1..5),
            vbits in any::<u8>(),
            edges in proptest::collection::vec(0usize..3, 6),
            pn in 0i64..=4,
        ) {
            let k = sizes.len();
            let vc = (0..k).map(|u| if vbits >> u & 1 == 1 { VertexColor::Blue } else { VertexColor::Red }).collect();
            let mut e = edges.into_iter();
            let t = TypeGraph::from_fn(vc, |_, _| [PairColor::Red, PairColor::Blue, PairColor::Green][e.next().unwrap()])
                .unwrap();
            let ps = PartSizes::new(sizes);
            let p = Rat::new(pn, 4);
            prop_assert_eq!(blowup(&t, &ps).weight(&p), blowup_weight_formula(&t, &ps, &p));
        }

        #[test]
        fn turan_identity_random(sizes in proptest::collection::vec(0usize..12, 1..7)) {
            prop_assert!(turan_edge_count(&PartSizes::new(sizes)).is_ok());
        }
    }
}
