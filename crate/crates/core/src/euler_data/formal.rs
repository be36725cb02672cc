//! Manifold-free series emission: `B_d = P_d / e_G` expanded in `1/α` with
//! coefficients in `ℚ[H_1, …, H_m, x]`, for user-supplied sigma-model
//! classes (e.g. weighted projective spaces).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::{BundleSpec, EulerError};
use crate::rational::{fmt_q, q, Q};
use crate::toric::{pairing, CurveClass};

/// Polynomial in `H_1, …, H_m, x`; the last exponent belongs to `x`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Vec<u32>, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(vars: usize, c: Q) -> Self {
        let mut p = MPoly::zero();
        p.add_term(vec![0; vars], c);
        p
    }

    /// `x? + Σ c_i H_i`.
    pub fn linear(class: &[i64], x: bool) -> Self {
        let vars = class.len() + 1;
        let mut p = MPoly::zero();
        for (i, &c) in class.iter().enumerate() {
            let mut e = vec![0; vars];
            e[i] = 1;
            p.add_term(e, q(c));
        }
        if x {
            let mut e = vec![0; vars];
            e[vars - 1] = 1;
            p.add_term(e, Q::one());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &Q) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let vars = e.len();
                let mut s = fmt_q(c);
                for (i, &k) in e.iter().enumerate() {
                    if k == 0 {
                        continue;
                    }
                    let name = if i + 1 == vars { "x".to_string() } else { format!("H{}", i + 1) };
                    if k == 1 {
                        s.push_str(&format!("*{name}"));
                    } else {
                        s.push_str(&format!("*{name}^{k}"));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Polynomial in `α` with `MPoly` coefficients.
type APoly = Vec<MPoly>;

fn apoly_mul(a: &APoly, b: &APoly) -> APoly {
    let vars_zero = MPoly::zero();
    let mut out = vec![vars_zero; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `(x? + c·H + kα)` as an α-polynomial.
fn linear_factor(class: &[i64], x: bool, k: i64) -> APoly {
    vec![MPoly::linear(class, x), MPoly::constant(class.len() + 1, q(k))]
}

/// Terms `(e, c_e)` of the expansion `Σ c_e α^e` of `B_d` at `α → ∞`, for
/// `e ≥ −order`.
pub fn formal_b_expansion(
    spec: &BundleSpec,
    d: &CurveClass,
    order: i32,
) -> Result<Vec<(i32, MPoly)>, EulerError> {
    let classes = spec.manual_euler.as_ref().ok_or(EulerError::ManualEulerUnsupported)?;
    let vars = d.0.len() + 1;
    let mut num: APoly = vec![MPoly::constant(vars, Q::one())];
    let mut den: APoly = vec![MPoly::constant(vars, Q::one())];
    for l in spec.convex.iter().chain(&spec.concave).chain(classes) {
        if l.len() != d.0.len() {
            return Err(EulerError::DimensionMismatch(l.clone()));
        }
    }
    for l in &spec.convex {
        let n = pairing(l, d);
        if n < 0 {
            return Err(EulerError::NegativePairing { class: l.clone(), degree: d.clone() });
        }
        for k in 0..=n {
            num = apoly_mul(&num, &linear_factor(l, spec.chern_variable, -k));
        }
    }
    for l in &spec.concave {
        let n = pairing(l, d);
        if n >= 0 {
            return Err(EulerError::NonNegativePairing { class: l.clone(), degree: d.clone() });
        }
        for k in 1..-n {
            num = apoly_mul(&num, &linear_factor(l, spec.chern_variable, k));
        }
    }
    for c in classes {
        let l = pairing(c, d);
        if l >= 0 {
            for k in 1..=l {
                den = apoly_mul(&den, &linear_factor(c, false, -k));
            }
        } else {
            for k in l + 1..=0 {
                num = apoly_mul(&num, &linear_factor(c, false, -k));
            }
        }
    }
    let dd = den.len() as i32 - 1;
    let nd = num.len() as i32 - 1;
    let lead = den[dd as usize]
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .expect("nonzero leading coefficient");
    let top = nd - dd;
    let count = (top + order + 1).max(0);
    let mut c: Vec<MPoly> = Vec::new();
    for j in 0..count {
        let mut acc = if nd - j >= 0 { num[(nd - j) as usize].clone() } else { MPoly::zero() };
        for i in 1..=j.min(dd) {
            acc = acc.sub(&den[(dd - i) as usize].mul(&c[(j - i) as usize]));
        }
        c.push(acc.scale(&lead.recip()));
    }
    Ok(c
        .into_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(j, p)| (top - j as i32, p))
        .collect())
}
