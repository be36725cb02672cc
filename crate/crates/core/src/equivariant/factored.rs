//! Products of linear forms `a·x + b·ε + k·α` kept in factored form.
//!
//! Each factor is normalized so its first nonzero coefficient (in the
//! order `α, x, ε`) is one, which makes equality a comparison of
//! multiplicities and one scalar.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

/// A normalized linear form `(α coefficient, x coefficient, ε coefficient)`.
pub type LinearForm = (Q, Q, Q);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    constant: Q,
    factors: BTreeMap<LinearForm, i64>,
}

impl Factored {
    pub fn one() -> Self {
        Factored {
            constant: Q::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        Factored {
            constant: Q::zero(),
            factors: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero()
    }

    /// `(a·x + b·ε + k·α)^{mult}`; `None` when the form vanishes and
    /// `mult < 0`.
    pub fn linear(a: Q, b: Q, k: Q, mult: i64) -> Option<Self> {
        let lead = [&k, &a, &b].into_iter().find(|c| !c.is_zero()).cloned();
        let Some(lead) = lead else {
            return if mult < 0 {
                None
            } else if mult == 0 {
                Some(Factored::one())
            } else {
                Some(Factored::zero())
            };
        };
        let form = (&k / &lead, &a / &lead, &b / &lead);
        let mut f = Factored::one();
        f.constant = crate::rational::q_pow(&lead, mult as i32);
        if mult != 0 {
            f.factors.insert(form, mult);
        }
        Some(f)
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        if self.is_zero() || other.is_zero() {
            return Factored::zero();
        }
        let mut out = self.clone();
        out.constant *= &other.constant;
        for (form, m) in &other.factors {
            let e = out.factors.entry(form.clone()).or_insert(0);
            *e += m;
            if *e == 0 {
                out.factors.remove(form);
            }
        }
        out
    }

    /// `None` on division by zero.
    pub fn div(&self, other: &Factored) -> Option<Factored> {
        Some(self.mul(&other.inverse()?))
    }

    pub fn inverse(&self) -> Option<Factored> {
        if self.is_zero() {
            return None;
        }
        Some(Factored {
            constant: self.constant.recip(),
            factors: self.factors.iter().map(|(f, m)| (f.clone(), -m)).collect(),
        })
    }

    /// `α ↦ −α`.
    pub fn bar(&self) -> Factored {
        let mut out = Factored {
            constant: self.constant.clone(),
            factors: BTreeMap::new(),
        };
        for ((k, a, b), m) in &self.factors {
            let f = Factored::linear(a.clone(), b.clone(), -k.clone(), *m).expect("nonzero form");
            out = out.mul(&f);
        }
        out
    }

    pub fn constant(&self) -> &Q {
        &self.constant
    }

    pub fn factors(&self) -> impl Iterator<Item = (&LinearForm, &i64)> {
        self.factors.iter()
    }

    /// Exponent of a normalized form; negative for poles.
    pub fn multiplicity(&self, form: &LinearForm) -> i64 {
        self.factors.get(form).copied().unwrap_or(0)
    }

    /// Number of factors counted with multiplicity (negative for
    /// denominators).
    pub fn degree(&self) -> i64 {
        self.factors.values().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn normalization_and_equality() {
        // (2ε − 2α) = −2(α − ε)
        let a = Factored::linear(q(0), q(2), q(-2), 1).unwrap();
        let b = Factored::linear(q(0), q(-1), q(1), 1).unwrap();
        assert_eq!(a, b.mul(&Factored::linear(q(0), q(0), q(0), 0).unwrap()).mul(&Factored {
            constant: q(-2),
            factors: BTreeMap::new()
        }));
        assert_eq!(a.div(&a).unwrap(), Factored::one());
        assert!(Factored::linear(q(0), q(0), q(0), -1).is_none());
    }

    #[test]
    fn bar_is_involution() {
        let f = Factored::linear(q(1), q(3), q(-2), 2)
            .unwrap()
            .mul(&Factored::linear(q(0), q(1), q(1), -1).unwrap());
        assert_eq!(f.bar().bar(), f);
        assert_ne!(f.bar(), f);
        assert_eq!(f.degree(), 1);
    }
}
