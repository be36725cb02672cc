//! Truncated power series in Novikov variables `q_1, …, q_m`.
//!
//! Exponents are curve classes with total degree at most `d_max`;
//! coefficients live in any [`Coefficient`] ring.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::equivariant::{AlphaLaurent, ScalarPoly};
use crate::rational::{q, Q};
use crate::toric::{enumerate_degrees, CurveClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series have different shapes: (m={0}, d_max={1}) vs (m={2}, d_max={3})")]
    RingMismatch(usize, u32, usize, u32),
    #[error("constant term must vanish")]
    NonzeroConstantTerm,
    #[error("constant term must be one")]
    NonUnitConstant,
}

/// Exact scalar rings a series may carry.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale_q(&self, s: &Q) -> Self;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

impl Coefficient for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_q(&self, s: &Q) -> Self {
        self * s
    }
}

impl Coefficient for ScalarPoly {
    fn zero() -> Self {
        ScalarPoly::zero()
    }
    fn one() -> Self {
        ScalarPoly::one()
    }
    fn is_zero(&self) -> bool {
        ScalarPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ScalarPoly::add(self, o)
    }
    fn neg(&self) -> Self {
        ScalarPoly::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        ScalarPoly::mul(self, o)
    }
    fn scale_q(&self, s: &Q) -> Self {
        self.scale(s)
    }
}

impl Coefficient for AlphaLaurent {
    fn zero() -> Self {
        AlphaLaurent::exact_zero()
    }
    fn one() -> Self {
        AlphaLaurent::constant(ScalarPoly::one())
    }
    fn is_zero(&self) -> bool {
        AlphaLaurent::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        AlphaLaurent::add(self, o)
    }
    fn neg(&self) -> Self {
        AlphaLaurent::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        AlphaLaurent::mul(self, o)
    }
    fn scale_q(&self, s: &Q) -> Self {
        AlphaLaurent::scale_q(self, s)
    }
}

/// `Σ_d c_d q^d` truncated at total degree `d_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct NovikovSeries<C> {
    m: usize,
    d_max: u32,
    coeffs: BTreeMap<CurveClass, C>,
}

impl<C: Coefficient> NovikovSeries<C> {
    pub fn zero(m: usize, d_max: u32) -> Self {
        NovikovSeries { m, d_max, coeffs: BTreeMap::new() }
    }

    pub fn constant(m: usize, d_max: u32, c: C) -> Self {
        let mut s = Self::zero(m, d_max);
        s.insert(CurveClass::zero(m), c);
        s
    }

    pub fn one(m: usize, d_max: u32) -> Self {
        Self::constant(m, d_max, C::one())
    }

    pub fn monomial(m: usize, d_max: u32, d: CurveClass, c: C) -> Self {
        let mut s = Self::zero(m, d_max);
        s.insert(d, c);
        s
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    /// Sets a coefficient; silently ignored beyond the truncation order.
    pub fn insert(&mut self, d: CurveClass, c: C) {
        assert_eq!(d.0.len(), self.m, "exponent length");
        assert!(d.is_effective(), "negative exponent {d}");
        if d.total() > self.d_max as i64 {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, c);
        }
    }

    pub fn coeff(&self, d: &CurveClass) -> C {
        self.coeffs.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&CurveClass::zero(self.m))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CurveClass, &C)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, o: &Self) -> Result<(), SeriesError> {
        if self.m != o.m || self.d_max != o.d_max {
            return Err(SeriesError::RingMismatch(self.m, self.d_max, o.m, o.d_max));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let mut out = self.clone();
        for (d, c) in &o.coeffs {
            let v = out.coeff(d).add(c);
            out.insert(d.clone(), v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, SeriesError> {
        self.check(o)?;
        let mut acc: BTreeMap<CurveClass, C> = BTreeMap::new();
        let cap = self.d_max as i64;
        for (da, ca) in &self.coeffs {
            let ta = da.total();
            for (db, cb) in &o.coeffs {
                if ta + db.total() > cap {
                    continue;
                }
                let d = da.add(db);
                let v = ca.mul(cb);
                match acc.get_mut(&d) {
                    Some(e) => *e = e.add(&v),
                    None => {
                        acc.insert(d, v);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(NovikovSeries { m: self.m, d_max: self.d_max, coeffs: acc })
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.mul(s))
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        self.map(|c| c.scale_q(s))
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> NovikovSeries<D> {
        let mut out = NovikovSeries::zero(self.m, self.d_max);
        for (d, c) in &self.coeffs {
            out.insert(d.clone(), f(c));
        }
        out
    }

    /// Same coefficients at a different truncation order.
    pub fn truncated(&self, d_max: u32) -> Self {
        let mut out = Self::zero(self.m, d_max);
        for (d, c) in &self.coeffs {
            out.insert(d.clone(), c.clone());
        }
        out
    }

    /// Multiply by a series over `ℚ`.
    pub fn mul_rational(&self, o: &NovikovSeries<Q>) -> Result<Self, SeriesError> {
        self.mul(&o.map(|c| C::one().scale_q(c)))
    }

    fn ordered_degrees(&self) -> Vec<CurveClass> {
        enumerate_degrees(self.m, self.d_max)
    }

    /// `exp(u)` for constant-term-free `u`, via `|d|·E_d = Σ_e |e| u_e E_{d−e}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::one(self.m, self.d_max);
        for d in self.ordered_degrees() {
            let mut acc = C::zero();
            for (e, ue) in &self.coeffs {
                if !e.precedes(&d) {
                    continue;
                }
                let rest = out.coeff(&d.sub(e));
                if !rest.is_zero() {
                    acc = acc.add(&ue.mul(&rest).scale_q(&q(e.total())));
                }
            }
            out.insert(d.clone(), acc.scale_q(&q(d.total()).recip()));
        }
        Ok(out)
    }

    /// `log(1 + v)` for constant-term-free `v`, via `(1+v)·θL = θv`.
    pub fn log1p(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut out = Self::zero(self.m, self.d_max);
        for d in self.ordered_degrees() {
            let n = q(d.total());
            let mut acc = self.coeff(&d).scale_q(&n);
            for (e, ve) in &self.coeffs {
                if e == &d || !e.precedes(&d) {
                    continue;
                }
                let rest = d.sub(e);
                let l = out.coeff(&rest);
                if !l.is_zero() {
                    acc = acc.sub(&ve.mul(&l).scale_q(&q(rest.total())));
                }
            }
            out.insert(d.clone(), acc.scale_q(&n.recip()));
        }
        Ok(out)
    }

    /// `1/s` for `s` with constant term one.
    pub fn inverse_unit(&self) -> Result<Self, SeriesError> {
        if self.constant_term() != C::one() {
            return Err(SeriesError::NonUnitConstant);
        }
        let mut out = Self::one(self.m, self.d_max);
        for d in self.ordered_degrees() {
            let mut acc = C::zero();
            for (e, se) in &self.coeffs {
                if e.is_zero() || !e.precedes(&d) {
                    continue;
                }
                let rest = out.coeff(&d.sub(e));
                if !rest.is_zero() {
                    acc = acc.sub(&se.mul(&rest));
                }
            }
            out.insert(d.clone(), acc);
        }
        Ok(out)
    }

    /// `s(q)` with `q_i ↦ q_i·exp(u_i(q))`.
    pub fn substitute_exp_shift(&self, u: &[NovikovSeries<Q>]) -> Result<Self, SeriesError> {
        assert_eq!(u.len(), self.m, "one shift per variable");
        for ui in u {
            self.check_q(ui)?;
            if !Coefficient::is_zero(&ui.constant_term()) {
                return Err(SeriesError::NonzeroConstantTerm);
            }
        }
        let mut out = Self::zero(self.m, self.d_max);
        for (d, c) in &self.coeffs {
            let mut shift = NovikovSeries::<Q>::zero(self.m, self.d_max);
            for (i, ui) in u.iter().enumerate() {
                if d.0[i] != 0 {
                    shift = shift.add(&ui.scale_q(&q(d.0[i])))?;
                }
            }
            let factor = NovikovSeries::monomial(self.m, self.d_max, d.clone(), <Q as One>::one());
            let e = shift.exp()?.mul(&factor)?;
            let term = e.map(|v| c.scale_q(v));
            out = out.add(&term)?;
        }
        Ok(out)
    }

    fn check_q(&self, o: &NovikovSeries<Q>) -> Result<(), SeriesError> {
        if self.m != o.m || self.d_max != o.d_max {
            return Err(SeriesError::RingMismatch(self.m, self.d_max, o.m, o.d_max));
        }
        Ok(())
    }
}

/// Given `q̃_i = q_i·exp(u_i(q))`, the shifts `ũ` with `q_i = q̃_i·exp(ũ_i(q̃))`.
///
/// Solves `ũ = −u(q̃·e^{ũ})` by fixed-point iteration; each pass fixes one
/// more total degree.
pub fn invert_mirror_map(u: &[NovikovSeries<Q>]) -> Result<Vec<NovikovSeries<Q>>, SeriesError> {
    let Some(first) = u.first() else {
        return Ok(Vec::new());
    };
    let (m, d_max) = (first.rank(), first.d_max());
    let mut cur: Vec<NovikovSeries<Q>> = vec![NovikovSeries::zero(m, d_max); u.len()];
    for _ in 0..=d_max {
        let next: Vec<NovikovSeries<Q>> = u
            .iter()
            .map(|ui| ui.substitute_exp_shift(&cur).map(|s| s.neg()))
            .collect::<Result<_, _>>()?;
        if next == cur {
            break;
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn c(v: &[i64]) -> CurveClass {
        CurveClass(v.to_vec())
    }

    fn poly1(d_max: u32, coeffs: &[Q]) -> NovikovSeries<Q> {
        let mut s = NovikovSeries::zero(1, d_max);
        for (i, v) in coeffs.iter().enumerate() {
            s.insert(c(&[i as i64]), v.clone());
        }
        s
    }

    #[test]
    fn ring_operations() {
        let a = poly1(3, &[q(1), q(1)]);
        let b = poly1(3, &[q(1), q(-1)]);
        assert_eq!(a.mul(&b).unwrap(), poly1(3, &[q(1), q(0), q(-1)]));
        let one = NovikovSeries::<Q>::one(1, 3);
        assert_eq!(one.mul(&a).unwrap(), a);
        let cube = a.mul(&a).unwrap().mul(&a).unwrap().mul(&a).unwrap();
        assert_eq!(cube, poly1(3, &[q(1), q(4), q(6), q(4)]));
        assert!(matches!(a.mul(&poly1(2, &[q(1)])), Err(SeriesError::RingMismatch(..))));
    }

    #[test]
    fn exp_and_log() {
        assert_eq!(NovikovSeries::<Q>::zero(1, 4).exp().unwrap(), NovikovSeries::one(1, 4));
        let v = poly1(3, &[q(0), q(120)]);
        assert_eq!(v.log1p().unwrap(), poly1(3, &[q(0), q(120), q(-7200), q(576000)]));
        assert!(poly1(2, &[q(1)]).exp().is_err());
        let inv = poly1(3, &[q(1), q(1)]).inverse_unit().unwrap();
        assert_eq!(inv, poly1(3, &[q(1), q(-1), q(1), q(-1)]));
    }

    #[test]
    fn exp_shift() {
        let s = poly1(3, &[q(0), q(1)]);
        let u = poly1(3, &[q(0), q(2)]);
        // q·exp(2q) = q + 2q² + 2q³
        assert_eq!(s.substitute_exp_shift(&[u]).unwrap(), poly1(3, &[q(0), q(1), q(2), q(2)]));
        let zero = NovikovSeries::zero(1, 3);
        assert_eq!(s.substitute_exp_shift(&[zero]).unwrap(), s);
    }

    #[test]
    fn lambert_inversion() {
        let cc = q(3);
        let u = poly1(3, &[q(0), cc.clone()]);
        let inv = invert_mirror_map(&[u]).unwrap();
        let want = poly1(
            3,
            &[q(0), -cc.clone(), &cc * &cc, -(q_frac(3, 2) * &cc * &cc * &cc)],
        );
        assert_eq!(inv[0], want);
    }

    #[test]
    fn two_variable_grading() {
        let mut s = NovikovSeries::<Q>::zero(2, 2);
        s.insert(c(&[1, 0]), q(1));
        s.insert(c(&[0, 1]), q(1));
        let sq = s.mul(&s).unwrap();
        assert_eq!(sq.coeff(&c(&[1, 1])), q(2));
        assert_eq!(sq.coeff(&c(&[2, 0])), q(1));
        assert!(sq.mul(&s).unwrap().is_zero());
    }
}
