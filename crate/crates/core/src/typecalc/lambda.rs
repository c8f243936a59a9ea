//! Exact p-values by support enumeration.
//!
//! For a support `S` the candidate is the solution of the bordered system
//! `W_S x = λ·1`, `Σ x = 1`. Every feasible candidate (`x ≥ 0`) is a point of
//! the simplex with `x^T W x = λ`, so the maximum over candidates is at most
//! the p-value. Conversely, take a maximizer `x*` with minimal support `S`.
//! Stationarity on the face gives `W_S x* = λ·1`. If the bordered system for
//! `S` were singular there would be `d ≠ 0` with `Σ d = 0` and `W_S d = μ·1`;
//! then `f(x* + t d) = f(x*) + 2tλΣd + t²μΣd = f(x*)` for all `t`, and moving
//! along `d` until a coordinate vanishes gives a maximizer with smaller
//! support. So the minimal-support maximizer is always a nonsingular
//! candidate, and singular supports can simply be skipped.
//!
//! Systems are solved by Cramer's rule with fraction-free (Bareiss)
//! determinants on the matrix scaled by `den(p)`, in checked `i128` with a
//! `BigInt` fallback.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rational::Rat;

use super::TypeGraph;

/// Largest type accepted by [`lambda_p`].
pub const MAX_LAMBDA_K: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaResult {
    pub value: Rat,
    pub x: Vec<Rat>,
    pub support: Vec<usize>,
    /// `(W x)_u` for every vertex; equals `value` on the support and is at
    /// most `value` elsewhere.
    pub certificate: Vec<Rat>,
}

impl LambdaResult {
    /// Re-checks simplex membership, stationarity and the off-support
    /// inequalities exactly.
    pub fn verify(&self, tau: &TypeGraph, p: &Rat) -> bool {
        let w = tau.weight_matrix(p);
        let k = tau.k();
        if self.x.len() != k || self.x.iter().any(Rat::is_negative) {
            return false;
        }
        if self.x.iter().cloned().sum::<Rat>() != Rat::one() {
            return false;
        }
        if w.quadratic_form(&self.x) != self.value {
            return false;
        }
        (0..k).all(|u| {
            let s = w.row_dot(u, &self.x);
            let on = self.support.contains(&u);
            (on && s == self.value && !self.x[u].is_zero()) || (!on && self.x[u].is_zero() && s <= self.value)
        })
    }
}

/// Determinant by Bareiss elimination; `None` on `i128` overflow.
fn det_i128(m: &mut [i128], n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k * n + k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                m.swap(k * n + c, r * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i * n + j].checked_mul(m[k * n + k])?;
                let b = m[i * n + k].checked_mul(m[k * n + j])?;
                m[i * n + j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k * n + k];
    }
    Some(sign * m[n * n - 1])
}

fn det_big(m: &[i128], n: usize) -> BigInt {
    let mut m: Vec<BigInt> = m.iter().map(|&v| BigInt::from(v)).collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                m.swap(k * n + c, r * n + c);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = m[k * n + k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    m[n * n - 1].clone() * sign
}

fn det(m: &[i128], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::from(1);
    }
    let mut work = m.to_vec();
    match det_i128(&mut work, n) {
        Some(d) => BigInt::from(d),
        None => det_big(m, n),
    }
}

/// Candidate on one support: `(λ·den, x)` as ratios of determinants, or
/// `None` when singular or infeasible.
fn solve_support(tau: &TypeGraph, s: &[usize], num: i64, den: i64) -> Option<(Rat, Vec<Rat>)> {
    let m = s.len();
    let dim = m + 1;
    // unknowns (x_0..x_{m-1}, λ); rows: W_S x - λ = 0, Σ x = 1
    let mut a = vec![0i128; dim * dim];
    for (i, &u) in s.iter().enumerate() {
        for (j, &v) in s.iter().enumerate() {
            a[i * dim + j] = tau.weight_scaled(u, v, num, den) as i128;
        }
        a[i * dim + m] = -1;
    }
    for j in 0..m {
        a[m * dim + j] = 1;
    }
    let d = det(&a, dim);
    if d.is_zero() {
        return None;
    }
    let mut sol = Vec::with_capacity(dim);
    for col in 0..dim {
        let mut ai = a.clone();
        for r in 0..dim {
            ai[r * dim + col] = if r == m { 1 } else { 0 };
        }
        let di = det(&ai, dim);
        if col < m && !di.is_zero() && di.is_negative() != d.is_negative() {
            return None;
        }
        sol.push(Rat::from_big(di, d.clone()));
    }
    let lam = sol.pop().expect("λ column") / den;
    Some((lam, sol))
}

/// Exact `λ_p(τ)` with maximizer and certificate.
pub fn lambda_p(tau: &TypeGraph, p: &Rat) -> Result<LambdaResult> {
    let k = tau.k();
    if k > MAX_LAMBDA_K {
        return Err(Error::LimitExceeded { what: "type size", value: k, limit: MAX_LAMBDA_K });
    }
    if k == 0 {
        return Err(invalid("the empty type has no p-value"));
    }
    if !p.is_probability() {
        return Err(invalid(format!("p = {p} is not in [0, 1]")));
    }
    let (num, den) = p.to_i64_pair().ok_or_else(|| invalid(format!("p = {p} is too large to scale")))?;
    // supports by size, then mask, so ties go to the smallest support
    let mut masks: Vec<u32> = (1..(1u32 << k)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut best: Option<(Rat, Vec<usize>, Vec<Rat>)> = None;
    for mask in masks {
        let s: Vec<usize> = (0..k).filter(|&u| mask >> u & 1 == 1).collect();
        if let Some((lam, xs)) = solve_support(tau, &s, num, den) {
            if best.as_ref().is_none_or(|b| lam > b.0) {
                best = Some((lam, s, xs));
            }
        }
    }
    let (value, s, xs) = best.expect("singleton supports are always nonsingular");
    let mut x = vec![Rat::zero(); k];
    for (i, &u) in s.iter().enumerate() {
        x[u] = xs[i].clone();
    }
    // zero coordinates inside the support are dropped from it
    let support: Vec<usize> = s.into_iter().filter(|&u| !x[u].is_zero()).collect();
    let w = tau.weight_matrix(p);
    let certificate = (0..k).map(|u| w.row_dot(u, &x)).collect();
    Ok(LambdaResult { value, x, support, certificate })
}

/// Floating-point `λ_p` by replicator dynamics `x_u <- x_u (Wx)_u / x^T W x`
/// from the barycentre of every support (for `k <= 10`) and from `restarts`
/// random points. Entries of `W` are nonnegative, so every step stays on the
/// simplex and never lowers the quadratic form.
pub fn lambda_numeric(tau: &TypeGraph, p: &Rat, restarts: u64, seed: u64) -> f64 {
    let k = tau.k();
    let wm = tau.weight_matrix(p);
    let w: Vec<f64> = (0..k * k).map(|i| wm.get(i / k, i % k).to_f64()).collect();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if k <= 10 {
        for mask in 1u32..(1 << k) {
            let c = mask.count_ones() as f64;
            starts.push((0..k).map(|u| if mask >> u & 1 == 1 { 1.0 / c } else { 0.0 }).collect());
        }
    }
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r);
        let raw: Vec<f64> = (0..k).map(|_| -((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 + 1e-300).ln()).collect();
        let sum: f64 = raw.iter().sum();
        starts.push(raw.into_iter().map(|v| v / sum).collect());
    }
    starts.into_iter().map(|x| replicate(&w, k, x)).fold(0.0, f64::max)
}

fn replicate(w: &[f64], k: usize, mut x: Vec<f64>) -> f64 {
    let form = |x: &[f64], wx: &[f64]| x.iter().zip(wx).map(|(a, b)| a * b).sum::<f64>();
    let mut wx = vec![0.0; k];
    let mut value = 0.0;
    for _ in 0..20_000 {
        for u in 0..k {
            wx[u] = (0..k).map(|v| w[u * k + v] * x[v]).sum();
        }
        value = form(&x, &wx);
        if value <= 0.0 {
            return 0.0;
        }
        let mut moved = 0.0f64;
        for u in 0..k {
            let nx = x[u] * wx[u] / value;
            moved = moved.max((nx - x[u]).abs());
            x[u] = nx;
        }
        if moved < 1e-13 {
            break;
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::igraph::PairColor;
    use crate::typecalc::{enumerate_types, VertexColor};

    #[test]
    fn single_vertices() {
        let p = Rat::new(1, 3);
        let r = lambda_p(&TypeGraph::tau(1, 0), &p).unwrap();
        assert_eq!(r.value, p);
        assert_eq!(r.x, vec![Rat::one()]);
        let b = lambda_p(&TypeGraph::tau(0, 1), &p).unwrap();
        assert_eq!(b.value, Rat::new(2, 3));
    }

    #[test]
    fn green_blue_pair() {
        let r = lambda_p(&TypeGraph::tau(0, 2), &Rat::new(1, 2)).unwrap();
        assert_eq!(r.value, Rat::new(3, 4));
        assert_eq!(r.x, vec![Rat::new(1, 2), Rat::new(1, 2)]);
    }

    #[test]
    fn green_red_pair_at_one_third() {
        let r = lambda_p(&TypeGraph::tau(2, 0), &Rat::new(1, 3)).unwrap();
        assert_eq!(r.value, Rat::new(2, 3));
    }

    #[test]
    fn all_green_closed_forms() {
        for a in 1..=5usize {
            for p in [Rat::new(1, 4), Rat::new(1, 2), Rat::new(3, 5)] {
                let b = lambda_p(&TypeGraph::tau(0, a), &p).unwrap();
                assert_eq!(b.value, Rat::one() - &p / a as i64);
                let r = lambda_p(&TypeGraph::tau(a, 0), &p).unwrap();
                assert_eq!(r.value, Rat::one() - (Rat::one() - &p) / a as i64);
            }
        }
    }

    #[test]
    fn singular_support_is_skipped() {
        // two blue vertices joined by a blue edge: W_S is rank one on the support
        let t = TypeGraph::from_fn(vec![VertexColor::Blue, VertexColor::Blue], |_, _| PairColor::Blue).unwrap();
        let r = lambda_p(&t, &Rat::new(1, 2)).unwrap();
        assert_eq!(r.value, Rat::new(1, 2));
        assert_eq!(r.support.len(), 1);
        assert!(r.verify(&t, &Rat::new(1, 2)));
    }

    #[test]
    fn certificates_hold_for_small_types() {
        for k in 1..=3 {
            for t in enumerate_types(k).unwrap() {
                for p in [Rat::new(1, 4), Rat::new(1, 2), Rat::new(2, 3)] {
                    let r = lambda_p(&t, &p).unwrap();
                    assert!(r.verify(&t, &p), "{t} at p={p}");
                }
            }
        }
    }

    #[test]
    fn bareiss_matches_bigint() {
        let m: Vec<i128> = vec![2, -1, 0, 3, -1, 2, -1, 1, 0, -1, 2, 4, 1, 1, 1, 0];
        let mut w = m.clone();
        let small = det_i128(&mut w, 4).unwrap();
        assert_eq!(BigInt::from(small), det_big(&m, 4));
        let huge: Vec<i128> = vec![i128::MAX / 2, 3, 5, i128::MAX / 3];
        assert_eq!(det(&huge, 2), BigInt::from(i128::MAX / 2) * BigInt::from(i128::MAX / 3) - BigInt::from(15));
    }

    #[test]
    fn rejects_oversized_and_bad_p() {
        assert!(lambda_p(&TypeGraph::tau(17, 0), &Rat::new(1, 2)).is_err());
        assert!(lambda_p(&TypeGraph::tau(1, 0), &Rat::new(3, 2)).is_err());
    }

    #[test]
    fn numeric_oracle_agrees() {
        for k in 1..=4 {
            for t in enumerate_types(k).unwrap() {
                for p in [Rat::new(1, 4), Rat::new(1, 2), Rat::new(3, 4)] {
                    let exact = lambda_p(&t, &p).unwrap().value.to_f64();
                    let num = lambda_numeric(&t, &p, 4, 1);
                    assert!((exact - num).abs() < 1e-9, "{t} at p={p}: {exact} vs {num}");
                }
            }
        }
    }
}
