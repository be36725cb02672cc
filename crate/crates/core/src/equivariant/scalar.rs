use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_q, Q};

/// Laurent polynomial in the Chern variable `x` and the weight scale `ε`.
///
/// Keys are `(x exponent, ε exponent)`. Negative exponents only show up
/// transiently: `x` negative powers from expanding `1/(x + c ε)`, `ε`
/// negative powers from dividing by a fixed-point Euler class.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct ScalarPoly {
    terms: BTreeMap<(i32, i32), Q>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly::default()
    }

    pub fn one() -> Self {
        ScalarPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        ScalarPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Q, x_exp: i32, eps_exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((x_exp, eps_exp), c);
        }
        ScalarPoly { terms }
    }

    pub fn x() -> Self {
        ScalarPoly::monomial(Q::one(), 1, 0)
    }

    pub fn eps() -> Self {
        ScalarPoly::monomial(Q::one(), 0, 1)
    }

    /// `a·x + b·ε`.
    pub fn linear(x_coeff: Q, eps_coeff: Q) -> Self {
        let mut p = ScalarPoly::monomial(x_coeff, 1, 0);
        p.add_term(0, 1, eps_coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i32, &Q)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x_exp: i32, eps_exp: i32) -> Q {
        self.terms
            .get(&(x_exp, eps_exp))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, x_exp: i32, eps_exp: i32, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (x_exp, eps_exp);
        let entry = self.terms.entry(key).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// The single term, when this is a nonzero monomial.
    pub fn as_monomial(&self) -> Option<(i32, i32, Q)> {
        if self.terms.len() == 1 {
            let (&(a, b), c) = self.terms.iter().next()?;
            Some((a, b, c.clone()))
        } else {
            None
        }
    }

    pub fn add(&self, other: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ScalarPoly {
        self.scale(&-Q::one())
    }

    pub fn mul(&self, other: &ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, s: &Q) -> ScalarPoly {
        if s.is_zero() {
            return ScalarPoly::zero();
        }
        ScalarPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect(),
        }
    }

    pub fn shift(&self, dx: i32, deps: i32) -> ScalarPoly {
        ScalarPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((a + dx, b + deps), c.clone()))
                .collect(),
        }
    }

    /// Division by a nonzero monomial; `None` otherwise.
    pub fn div_monomial(&self, m: &ScalarPoly) -> Option<ScalarPoly> {
        let (a, b, c) = m.as_monomial()?;
        Some(self.scale(&c.recip()).shift(-a, -b))
    }

    pub fn pow(&self, e: u32) -> ScalarPoly {
        let mut acc = ScalarPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Drop every term with `ε` exponent above `max_eps`.
    pub fn truncate_eps(&self, max_eps: i32) -> ScalarPoly {
        ScalarPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(_, b), _)| b <= max_eps)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn min_eps_exp(&self) -> Option<i32> {
        self.terms.keys().map(|&(_, b)| b).min()
    }

    pub fn min_x_exp(&self) -> Option<i32> {
        self.terms.keys().map(|&(a, _)| a).min()
    }

    /// The `ε⁰` slice, as a Laurent polynomial in `x` alone.
    pub fn eps_slice(&self, eps_exp: i32) -> ScalarPoly {
        ScalarPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(_, b), _)| b == eps_exp)
                .map(|(&(a, _), c)| ((a, 0), c.clone()))
                .collect(),
        }
    }

    /// Set `x = 0`; fails on negative `x` powers.
    pub fn at_x_zero(&self) -> Option<ScalarPoly> {
        if self.min_x_exp().is_some_and(|a| a < 0) {
            return None;
        }
        Some(ScalarPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, _), _)| a == 0)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        })
    }

    /// Total `(x, ε)` degree when every term has the same degree.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(|&(a, b)| a + b);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn eval_eps(&self, eps: &Q) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(a, 0, c * crate::rational::q_pow(eps, b));
        }
        out
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", fmt_q(c))?;
            match a {
                0 => {}
                1 => write!(f, "·x")?,
                _ => write!(f, "·x^{a}")?,
            }
            match b {
                0 => {}
                1 => write!(f, "·ε")?,
                _ => write!(f, "·ε^{b}")?,
            }
        }
        Ok(())
    }
}
