//! Independent ground truth: Bott residue sums on `G(2, n+1)` for lines,
//! graph sums on `M_{0,0}(d, ℙⁿ)` for `d ≤ 2`, and localized intersection
//! numbers.
//!
//! Bundles carry a formal Chern variable `x` throughout; a value is the
//! coefficient of `x^{rank − dim}` in `∫ e(V ⊗ x)`, that is `∫ c_dim(V)`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::equivariant::WeightSample;
use crate::euler_data::BundleSpec;
use crate::rational::{q, q_factorial, q_pow, Q};
use crate::toric::ToricManifold;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("bundle rank {rank} is below the moduli dimension {dim}")]
    DimensionMismatch { rank: i64, dim: i64 },
    #[error("graph sums are implemented for d = 1, 2 only (got {0})")]
    UnsupportedDegree(u32),
    #[error("oracle needs a split bundle on a projective space")]
    UnsupportedBundle,
    #[error("weights are not generic: a localization denominator vanishes")]
    DegenerateWeights,
}

/// Default weights `λ_k = k² + 7k³ + 1`, `k = 0..n`.
pub fn default_weights(n: usize) -> Vec<Q> {
    (0..=n as i64).map(|k| q(k * k + 7 * k * k * k + 1)).collect()
}

/// A second generic choice, for sample-swap checks.
pub fn alternate_weights(n: usize) -> Vec<Q> {
    (0..=n as i64).map(|k| q(3 * k * k * k - 5 * k + 11 * (k % 2) + 2)).collect()
}

/// Dense polynomial in `x`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
struct XPoly(Vec<Q>);

impl XPoly {
    fn constant(c: Q) -> Self {
        XPoly(vec![c])
    }

    /// `x + w`.
    fn shifted(w: Q) -> Self {
        XPoly(vec![w, Q::one()])
    }

    fn mul(&self, o: &XPoly) -> XPoly {
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        XPoly(out)
    }

    fn scale(&self, s: &Q) -> XPoly {
        XPoly(self.0.iter().map(|c| c * s).collect())
    }

    fn add(&self, o: &XPoly) -> XPoly {
        let n = self.0.len().max(o.0.len());
        XPoly((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }
}

fn checked_recip(v: &Q) -> Result<Q, OracleError> {
    if v.is_zero() {
        Err(OracleError::DegenerateWeights)
    } else {
        Ok(v.recip())
    }
}

fn take_coefficient(p: &XPoly, rank: i64, dim: i64) -> Result<Q, OracleError> {
    if rank < dim {
        return Err(OracleError::DimensionMismatch { rank, dim });
    }
    Ok(p.coeff((rank - dim) as usize))
}

/// `1/∏_{k∉{i,j}}(λ_i − λ_k)(λ_j − λ_k)`: inverse Euler class of `T G(2, n+1)`
/// at the plane spanned by `e_i, e_j`, with `S*` of weights `λ_i, λ_j`.
fn grassmann_inverse_euler(lambda: &[Q], i: usize, j: usize) -> Result<Q, OracleError> {
    let mut e = Q::one();
    for (k, lk) in lambda.iter().enumerate() {
        if k != i && k != j {
            e *= (&lambda[i] - lk) * (&lambda[j] - lk);
        }
    }
    checked_recip(&e)
}

fn bott_sum(
    lambda: &[Q],
    fiber: impl Fn(&Q, &Q) -> Vec<Q>,
    rank: i64,
) -> Result<Q, OracleError> {
    let n = lambda.len() - 1;
    let dim = 2 * (n as i64 - 1);
    let mut total = XPoly::constant(Q::zero());
    for i in 0..=n {
        for j in i + 1..=n {
            let mut e = XPoly::constant(grassmann_inverse_euler(lambda, i, j)?);
            for w in fiber(&lambda[i], &lambda[j]) {
                e = e.mul(&XPoly::shifted(w));
            }
            total = total.add(&e);
        }
    }
    take_coefficient(&total, rank, dim)
}

/// `∫_{G(2,n+1)} c_top(Sym^k S*)`, weights `aλ_i + bλ_j`, `a + b = k`.
pub fn lines_convex_with(n: usize, k: i64, lambda: &[Q]) -> Result<Q, OracleError> {
    assert_eq!(lambda.len(), n + 1);
    let fiber = |li: &Q, lj: &Q| (0..=k).map(|a| q(a) * li + q(k - a) * lj).collect();
    bott_sum(lambda, fiber, k + 1)
}

pub fn lines_convex(n: usize, k: i64) -> Result<Q, OracleError> {
    lines_convex_with(n, k, &default_weights(n))
}

/// `∫_{G(2,n+1)} c_top(R¹π_*f*O(−k))`, fiber weights `−(aλ_i + bλ_j)` with
/// `a, b ≥ 1`, `a + b = k`. This sign gives `+3` for `O(−3)` on `ℙ²`.
pub fn lines_concave_with(n: usize, k: i64, lambda: &[Q]) -> Result<Q, OracleError> {
    assert_eq!(lambda.len(), n + 1);
    if k < 2 {
        return Err(OracleError::UnsupportedBundle);
    }
    let fiber = |li: &Q, lj: &Q| (1..k).map(|a| -(q(a) * li + q(k - a) * lj)).collect();
    bott_sum(lambda, fiber, k - 1)
}

pub fn lines_concave(n: usize, k: i64) -> Result<Q, OracleError> {
    lines_concave_with(n, k, &default_weights(n))
}

/// A split bundle on `ℙⁿ` as line degrees: positive convex, negative concave.
fn line_degrees(spec: &BundleSpec) -> Result<Vec<i64>, OracleError> {
    let mut out = Vec::new();
    for c in &spec.convex {
        match c.as_slice() {
            [l] if *l >= 0 => out.push(*l),
            _ => return Err(OracleError::UnsupportedBundle),
        }
    }
    for c in &spec.concave {
        match c.as_slice() {
            [l] if *l < 0 => out.push(*l),
            _ => return Err(OracleError::UnsupportedBundle),
        }
    }
    if spec.manual_euler.is_some() {
        return Err(OracleError::UnsupportedBundle);
    }
    Ok(out)
}

/// A fixed-point graph: vertices labelled by fixed points of `ℙⁿ`, edges
/// with covering degrees, and the order of its automorphism group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedGraph {
    pub vertices: Vec<usize>,
    /// `(vertex, vertex, degree)`
    pub edges: Vec<(usize, usize, u32)>,
    pub automorphisms: u32,
}

impl DecoratedGraph {
    pub fn degree(&self) -> u32 {
        self.edges.iter().map(|e| e.2).sum()
    }

    fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == v || e.1 == v).count()
    }
}

/// Every graph of total degree `d ≤ 2` on the fixed points of `ℙⁿ`.
pub fn graphs(n: usize, d: u32) -> Result<Vec<DecoratedGraph>, OracleError> {
    let mut out = Vec::new();
    match d {
        1 | 2 => {
            for i in 0..=n {
                for j in i + 1..=n {
                    out.push(DecoratedGraph {
                        vertices: vec![i, j],
                        edges: vec![(0, 1, d)],
                        automorphisms: d,
                    });
                }
            }
        }
        _ => return Err(OracleError::UnsupportedDegree(d)),
    }
    if d == 2 {
        for i in 0..=n {
            for j in 0..=n {
                for k in j..=n {
                    if j == i || k == i {
                        continue;
                    }
                    out.push(DecoratedGraph {
                        vertices: vec![i, j, k],
                        edges: vec![(0, 1, 1), (0, 2, 1)],
                        automorphisms: if j == k { 2 } else { 1 },
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Inverse equivariant Euler class of the virtual normal bundle, times the
/// bundle contribution, for one graph; returned as a polynomial in `x`.
fn graph_contribution(g: &DecoratedGraph, lambda: &[Q], lines: &[i64]) -> Result<XPoly, OracleError> {
    let w = |v: usize| &lambda[g.vertices[v]];
    let mut c = XPoly::constant(checked_recip(&q(g.automorphisms as i64))?);
    let mut scalar = Q::one();
    for &(a, b, de) in &g.edges {
        let (li, lj) = (w(a), w(b));
        let dq = q(de as i64);
        let diff = li - lj;
        let mut e = q(if de % 2 == 0 { 1 } else { -1 }) * q_pow(&dq, 2 * de as i32);
        e /= q_factorial(de as u64).pow(2);
        e *= checked_recip(&q_pow(&diff, 2 * de as i32))?;
        for (k, lk) in lambda.iter().enumerate() {
            if k == g.vertices[a] || k == g.vertices[b] {
                continue;
            }
            for s in 0..=de {
                let v = (q(s as i64) * li + q((de - s) as i64) * lj) / &dq - lk;
                e *= checked_recip(&v)?;
            }
        }
        scalar *= e;
        for &l in lines {
            let ld = l * de as i64;
            if l >= 0 {
                for m in 0..=ld {
                    let v = (q(ld - m) * li + q(m) * lj) / &dq;
                    c = c.mul(&XPoly::shifted(v));
                }
            } else {
                for m in 1..-ld {
                    let v = -(q(-ld - m) * li + q(m) * lj) / &dq;
                    c = c.mul(&XPoly::shifted(v));
                }
            }
        }
    }
    for v in 0..g.vertices.len() {
        let val = g.valence(v);
        let li = w(v);
        for (k, lk) in lambda.iter().enumerate() {
            if k != g.vertices[v] {
                scalar *= q_pow(&(li - lk), val as i32 - 1);
            }
        }
        let flags: Vec<Q> = g
            .edges
            .iter()
            .filter_map(|&(a, b, de)| {
                let other = if a == v { b } else if b == v { a } else { return None };
                Some((li - w(other)) / q(de as i64))
            })
            .collect();
        match val {
            1 => scalar *= &flags[0],
            2 => scalar *= checked_recip(&(&flags[0] + &flags[1]))?,
            _ => unreachable!("d ≤ 2 graphs have valence ≤ 2"),
        }
        // node corrections: convex sections lose, concave H¹ gains, one
        // fiber per extra branch
        for &l in lines {
            for _ in 1..val {
                let node = q(l.abs()) * li;
                if l >= 0 {
                    c = divide_shifted(&c, &node)?;
                } else {
                    c = c.mul(&XPoly::shifted(-node));
                }
            }
        }
    }
    Ok(c.scale(&scalar))
}

/// Exact division by `x + a`; the quotient must be a polynomial.
fn divide_shifted(p: &XPoly, a: &Q) -> Result<XPoly, OracleError> {
    let deg = p.0.len() - 1;
    if deg == 0 {
        return Err(OracleError::UnsupportedBundle);
    }
    let mut q_coeffs = vec![Q::zero(); deg];
    let mut carry = Q::zero();
    for i in (0..=deg).rev() {
        let v = &p.0[i] - &carry;
        if i == 0 {
            if !v.is_zero() {
                return Err(OracleError::UnsupportedBundle);
            }
        } else {
            q_coeffs[i - 1] = v.clone();
            carry = v * a;
        }
    }
    Ok(XPoly(q_coeffs))
}

/// `K_d = ∫_{M_{0,0}(d,ℙⁿ)} c_dim(V_d)` by graph summation, `d ∈ {1, 2}`.
pub fn graph_sum_kd_with(n: usize, spec: &BundleSpec, d: u32, lambda: &[Q]) -> Result<Q, OracleError> {
    assert_eq!(lambda.len(), n + 1);
    let lines = line_degrees(spec)?;
    let rank: i64 = lines
        .iter()
        .map(|&l| if l >= 0 { l * d as i64 + 1 } else { -l * d as i64 - 1 })
        .sum();
    let dim = (n as i64 + 1) * d as i64 + n as i64 - 3;
    let mut total = XPoly::constant(Q::zero());
    for g in graphs(n, d)? {
        total = total.add(&graph_contribution(&g, lambda, &lines)?);
    }
    take_coefficient(&total, rank, dim)
}

pub fn graph_sum_kd(n: usize, spec: &BundleSpec, d: u32) -> Result<Q, OracleError> {
    graph_sum_kd_with(n, spec, d, &default_weights(n))
}

/// `∫_X ∏ H_i^{e_i}` by localization at the given sample.
pub fn intersection_oracle(m: &ToricManifold, s: &WeightSample, exps: &[u32]) -> Result<Q, OracleError> {
    assert_eq!(exps.len(), m.picard_rank());
    let mut total = Q::zero();
    for fp in m.fixed_points() {
        let e: Q = fp.tangent_weights.iter().map(|w| s.pair(w)).product();
        let mut v = checked_recip(&e)?;
        for (h, &k) in fp.hyperplane_restrictions.iter().zip(exps) {
            v *= q_pow(&s.pair(h), k as i32);
        }
        total += v;
    }
    Ok(total)
}

/// Factor dimensions when `m` is a product of projective spaces in the
/// standard presentation (each ray charged by exactly one `H_i`).
pub fn product_dimensions(m: &ToricManifold) -> Option<Vec<usize>> {
    let q = m.charge_matrix();
    let mut dims = vec![0usize; q.len()];
    for a in 0..m.n_rays() {
        let nonzero: Vec<usize> = (0..q.len()).filter(|&i| q[i][a] != 0).collect();
        match nonzero.as_slice() {
            [i] if q[*i][a] == 1 => dims[*i] += 1,
            _ => return None,
        }
    }
    Some(dims.into_iter().map(|c| c - 1).collect())
}

/// `∫_{∏ℙ^{n_i}} ∏H_i^{e_i}` is one exactly when `e = n`.
pub fn combinatorial_intersection(dims: &[usize], exps: &[u32]) -> Q {
    if dims.iter().zip(exps).all(|(n, e)| *n as u32 == *e) {
        Q::one()
    } else {
        Q::zero()
    }
}
