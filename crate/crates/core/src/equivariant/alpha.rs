//! Polynomials, rational functions and truncated Laurent expansions in the
//! loop-rotation weight `α`, with `(x, ε)` coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::scalar::ScalarPoly;
use crate::rational::Q;

/// Polynomial in `α`; `coeffs[i]` multiplies `α^i`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlphaPoly {
    coeffs: Vec<ScalarPoly>,
}

impl AlphaPoly {
    pub fn zero() -> Self {
        AlphaPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        AlphaPoly::constant(ScalarPoly::one())
    }

    pub fn constant(c: ScalarPoly) -> Self {
        AlphaPoly::from_coeffs(vec![c])
    }

    /// `u + k·α`.
    pub fn linear(u: ScalarPoly, k: Q) -> Self {
        AlphaPoly::from_coeffs(vec![u, ScalarPoly::constant(k)])
    }

    pub fn alpha() -> Self {
        AlphaPoly::linear(ScalarPoly::zero(), Q::one())
    }

    pub fn from_coeffs(mut coeffs: Vec<ScalarPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        AlphaPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> ScalarPoly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[ScalarPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&ScalarPoly> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &AlphaPoly) -> AlphaPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        AlphaPoly::from_coeffs((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &AlphaPoly) -> AlphaPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        AlphaPoly::from_coeffs((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &AlphaPoly) -> AlphaPoly {
        if self.is_zero() || other.is_zero() {
            return AlphaPoly::zero();
        }
        let mut out = vec![ScalarPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        AlphaPoly::from_coeffs(out)
    }

    pub fn scale(&self, s: &ScalarPoly) -> AlphaPoly {
        AlphaPoly::from_coeffs(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// `α ↦ −α`.
    pub fn bar(&self) -> AlphaPoly {
        AlphaPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { c.neg() } else { c.clone() })
                .collect(),
        )
    }

    /// Substitute `α = value`.
    pub fn eval(&self, value: &ScalarPoly) -> ScalarPoly {
        let mut acc = ScalarPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Joint `(x, ε, α)` degree if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut deg = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = c.homogeneous_degree()? + i as i32;
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }
}

impl fmt::Debug for AlphaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("[{c}]·α^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Rational function in `α`. Never gcd-reduced; equality is decided by
/// cross-multiplication.
#[derive(Clone, Debug)]
pub struct AlphaRational {
    num: AlphaPoly,
    den: AlphaPoly,
}

impl AlphaRational {
    /// `None` when the denominator is zero.
    pub fn new(num: AlphaPoly, den: AlphaPoly) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(AlphaRational { num, den })
        }
    }

    pub fn from_poly(p: AlphaPoly) -> Self {
        AlphaRational {
            num: p,
            den: AlphaPoly::one(),
        }
    }

    pub fn constant(c: ScalarPoly) -> Self {
        AlphaRational::from_poly(AlphaPoly::constant(c))
    }

    pub fn one() -> Self {
        AlphaRational::constant(ScalarPoly::one())
    }

    pub fn alpha() -> Self {
        AlphaRational::from_poly(AlphaPoly::alpha())
    }

    pub fn num(&self) -> &AlphaPoly {
        &self.num
    }

    pub fn den(&self) -> &AlphaPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, other: &AlphaRational) -> AlphaRational {
        AlphaRational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn add(&self, other: &AlphaRational) -> AlphaRational {
        if self.den == other.den {
            return AlphaRational {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            };
        }
        AlphaRational {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn sub(&self, other: &AlphaRational) -> AlphaRational {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlphaRational {
        AlphaRational {
            num: self.num.scale(&ScalarPoly::constant(-Q::one())),
            den: self.den.clone(),
        }
    }

    /// `None` when dividing by zero.
    pub fn div(&self, other: &AlphaRational) -> Option<AlphaRational> {
        AlphaRational::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, s: &ScalarPoly) -> AlphaRational {
        AlphaRational {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn bar(&self) -> AlphaRational {
        AlphaRational {
            num: self.num.bar(),
            den: self.den.bar(),
        }
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, other: &AlphaRational) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// Joint `(x, ε, α)` degree, `deg num − deg den`, when both are
    /// homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        Some(self.num.homogeneous_degree()? - self.den.homogeneous_degree()?)
    }

    /// Expansion at `α → ∞`, exact down to `α^{-order}`.
    ///
    /// Requires the leading `α` coefficient of the denominator to be a
    /// monomial in `(x, ε)`.
    pub fn alpha_expand(&self, order: i32) -> Option<AlphaLaurent> {
        if self.num.is_zero() {
            return Some(AlphaLaurent::zero_with_floor(-order));
        }
        let dd = self.den.degree()? as i32;
        let nd = self.num.degree()? as i32;
        let lead = self.den.leading()?;
        lead.as_monomial()?;
        let top = nd - dd;
        // c_j multiplies α^{top - j}; need top - j ≥ -order.
        let count = top + order + 1;
        if count <= 0 {
            return Some(AlphaLaurent::zero_with_floor(-order));
        }
        let mut c: Vec<ScalarPoly> = Vec::with_capacity(count as usize);
        for j in 0..count {
            let mut acc = if nd - j >= 0 {
                self.num.coeff((nd - j) as usize)
            } else {
                ScalarPoly::zero()
            };
            for i in 1..=j.min(dd) {
                let d = self.den.coeff((dd - i) as usize);
                if !d.is_zero() {
                    acc = acc.sub(&d.mul(&c[(j - i) as usize]));
                }
            }
            c.push(acc.div_monomial(lead)?);
        }
        let mut terms = BTreeMap::new();
        for (j, cj) in c.into_iter().enumerate() {
            if !cj.is_zero() {
                terms.insert(top - j as i32, cj);
            }
        }
        Some(AlphaLaurent {
            terms,
            floor: Some(-order),
        })
    }
}

/// Laurent expansion `Σ c_e α^e`, known exactly for `e ≥ floor`.
///
/// `floor == None` marks an exact finite sum. Coefficients below the floor
/// are unknown; products track how far precision propagates.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlphaLaurent {
    terms: BTreeMap<i32, ScalarPoly>,
    floor: Option<i32>,
}

impl AlphaLaurent {
    pub fn exact_zero() -> Self {
        AlphaLaurent::default()
    }

    pub fn zero_with_floor(floor: i32) -> Self {
        AlphaLaurent {
            terms: BTreeMap::new(),
            floor: Some(floor),
        }
    }

    pub fn constant(c: ScalarPoly) -> Self {
        AlphaLaurent::monomial(c, 0)
    }

    pub fn monomial(c: ScalarPoly, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        AlphaLaurent { terms, floor: None }
    }

    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn top(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i32) -> ScalarPoly {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &ScalarPoly)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drop terms below `floor` and lower the precision accordingly.
    pub fn truncate(&self, floor: i32) -> AlphaLaurent {
        let floor = match self.floor {
            Some(f) => f.max(floor),
            None => floor,
        };
        AlphaLaurent {
            terms: self
                .terms
                .range(floor..)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            floor: Some(floor),
        }
    }

    fn reach(&self) -> Option<i32> {
        // Highest exponent that may carry a nonzero (known or unknown) term.
        match (self.top(), self.floor) {
            (Some(t), Some(f)) => Some(t.max(f - 1)),
            (Some(t), None) => Some(t),
            (None, Some(f)) => Some(f - 1),
            (None, None) => None,
        }
    }

    pub fn add(&self, other: &AlphaLaurent) -> AlphaLaurent {
        let floor = match (self.floor, other.floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(*e).or_default();
            *entry = entry.add(c);
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        if let Some(f) = floor {
            terms = terms.split_off(&f);
        }
        AlphaLaurent { terms, floor }
    }

    pub fn neg(&self) -> AlphaLaurent {
        AlphaLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, other: &AlphaLaurent) -> AlphaLaurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &AlphaLaurent) -> AlphaLaurent {
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            (Some(fa), None) => other.reach().map(|mb| fa + mb),
            (None, Some(fb)) => self.reach().map(|ma| fb + ma),
            (Some(fa), Some(fb)) => {
                let ma = self.reach().unwrap_or(fa - 1);
                let mb = other.reach().unwrap_or(fb - 1);
                Some((fa + mb).max(fb + ma))
            }
        };
        let floor = match (floor, self.floor.or(other.floor)) {
            (None, Some(f)) if self.is_zero() || other.is_zero() => Some(f),
            (f, _) => f,
        };
        let mut terms: BTreeMap<i32, ScalarPoly> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if floor.is_some_and(|f| e < f) {
                    continue;
                }
                let entry = terms.entry(e).or_default();
                *entry = entry.add(&ca.mul(cb));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        AlphaLaurent { terms, floor }
    }

    pub fn scale(&self, s: &ScalarPoly) -> AlphaLaurent {
        let mut terms: BTreeMap<i32, ScalarPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = c.mul(s);
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        AlphaLaurent {
            terms,
            floor: self.floor,
        }
    }

    pub fn scale_q(&self, s: &Q) -> AlphaLaurent {
        self.scale(&ScalarPoly::constant(s.clone()))
    }

    /// Multiply by `α^k`.
    pub fn shift(&self, k: i32) -> AlphaLaurent {
        AlphaLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            floor: self.floor.map(|f| f + k),
        }
    }

    pub fn bar(&self) -> AlphaLaurent {
        AlphaLaurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { c.neg() } else { c.clone() }))
                .collect(),
            floor: self.floor,
        }
    }

    /// Apply a map to every coefficient (e.g. the `ε⁰` slice).
    pub fn map_coeffs(&self, f: impl Fn(&ScalarPoly) -> ScalarPoly) -> AlphaLaurent {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        AlphaLaurent {
            terms,
            floor: self.floor,
        }
    }

    /// Agreement on every exponent both sides know.
    pub fn agrees_with(&self, other: &AlphaLaurent) -> bool {
        let floor = match (self.floor, other.floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, None) => a,
            (None, b) => b,
        };
        let keys: std::collections::BTreeSet<i32> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter()
            .filter(|e| floor.is_none_or(|f| *e >= f))
            .all(|e| self.coeff(e) == other.coeff(e))
    }
}

impl fmt::Debug for AlphaLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| format!("[{c}]·α^{e}"))
            .collect();
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        match self.floor {
            Some(fl) => write!(f, "{body} + O(α^{})", fl - 1),
            None => write!(f, "{body}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn h() -> ScalarPoly {
        ScalarPoly::eps()
    }

    #[test]
    fn geometric_expansion() {
        // 1/(H − α) = −α^{-1} − Hα^{-2} − H²α^{-3} − …
        let r = AlphaRational::new(AlphaPoly::one(), AlphaPoly::linear(h(), -Q::one())).unwrap();
        let e = r.alpha_expand(4).unwrap();
        assert_eq!(e.coeff(-1), ScalarPoly::constant(q(-1)));
        assert_eq!(e.coeff(-2), h().neg());
        assert_eq!(e.coeff(-3), h().pow(2).neg());
        assert_eq!(e.coeff(-4), h().pow(3).neg());
        assert_eq!(e.top(), Some(-1));
    }

    #[test]
    fn leading_exponent_is_degree_difference() {
        let num = AlphaPoly::linear(h().scale(&q(5)), q(-1))
            .mul(&AlphaPoly::linear(h().scale(&q(5)), q(-2)));
        let den = AlphaPoly::linear(h(), q(-1));
        let e = AlphaRational::new(num, den).unwrap().alpha_expand(3).unwrap();
        assert_eq!(e.top(), Some(1));
        assert_eq!(e.coeff(1), ScalarPoly::constant(q(-2)));
    }

    #[test]
    fn bar_is_involution() {
        let r = AlphaRational::new(
            AlphaPoly::linear(h(), q(3)).mul(&AlphaPoly::alpha()),
            AlphaPoly::linear(h().scale(&q(2)), q(-1)),
        )
        .unwrap();
        assert!(r.bar().bar().equals(&r));
        assert!(!r.bar().equals(&r));
        // bar(H − kα) = H + kα
        assert!(AlphaRational::from_poly(AlphaPoly::linear(h(), q(-2)))
            .bar()
            .equals(&AlphaRational::from_poly(AlphaPoly::linear(h(), q(2)))));
    }

    #[test]
    fn truncated_product_tracks_precision() {
        let a = AlphaRational::new(AlphaPoly::one(), AlphaPoly::linear(h(), -Q::one()))
            .unwrap()
            .alpha_expand(3)
            .unwrap();
        let sq = a.mul(&a);
        // a has top -1, floor -3 ⇒ a² known for exponents ≥ -4.
        assert_eq!(sq.floor(), Some(-4));
        assert_eq!(sq.coeff(-2), ScalarPoly::one());
        assert_eq!(sq.coeff(-3), h().scale(&q(2)));
    }

    #[test]
    fn expansion_resums() {
        // (H − α)(2H + α)/(H − 3α): re-multiplying by the denominator recovers
        // the numerator to the truncation order.
        let num = AlphaPoly::linear(h(), q(-1)).mul(&AlphaPoly::linear(h().scale(&q(2)), q(1)));
        let den = AlphaPoly::linear(h(), q(-3));
        let r = AlphaRational::new(num.clone(), den.clone()).unwrap();
        let e = r.alpha_expand(6).unwrap();
        let back = e.mul(&AlphaRational::from_poly(den).alpha_expand(6).unwrap());
        let exact = AlphaRational::from_poly(num).alpha_expand(6).unwrap();
        assert!(back.agrees_with(&exact));
    }
}
