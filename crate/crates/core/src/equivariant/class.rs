use num_traits::{One, Zero};

use super::alpha::{AlphaLaurent, AlphaPoly, AlphaRational};
use super::sample::WeightSample;
use super::scalar::ScalarPoly;
use super::EquivError;
use crate::rational::Q;
use crate::toric::ToricManifold;

/// A polynomial in the toric divisors `D_1..D_N` and the basis `H_1..H_m`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DivisorPoly {
    /// `(coefficient, D exponents, H exponents)`.
    pub terms: Vec<(Q, Vec<u32>, Vec<u32>)>,
}

impl DivisorPoly {
    pub fn one() -> Self {
        DivisorPoly {
            terms: vec![(Q::one(), Vec::new(), Vec::new())],
        }
    }

    pub fn h_monomial(exps: &[u32]) -> Self {
        DivisorPoly {
            terms: vec![(Q::one(), Vec::new(), exps.to_vec())],
        }
    }

    pub fn d_monomial(exps: &[u32]) -> Self {
        DivisorPoly {
            terms: vec![(Q::one(), exps.to_vec(), Vec::new())],
        }
    }

    pub fn plus(mut self, other: DivisorPoly) -> Self {
        self.terms.extend(other.terms);
        self
    }
}

/// Restrictions `ω(p)` of an equivariant class to every fixed point.
#[derive(Clone, Debug)]
pub struct LocalizedClass {
    values: Vec<AlphaRational>,
}

impl LocalizedClass {
    pub fn new(values: Vec<AlphaRational>) -> Self {
        LocalizedClass { values }
    }

    pub fn constant(points: usize, c: AlphaRational) -> Self {
        LocalizedClass {
            values: vec![c; points],
        }
    }

    pub fn values(&self) -> &[AlphaRational] {
        &self.values
    }

    pub fn at(&self, p: usize) -> &AlphaRational {
        &self.values[p]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mul(&self, other: &LocalizedClass) -> LocalizedClass {
        self.zip(other, |a, b| a.mul(b))
    }

    pub fn add(&self, other: &LocalizedClass) -> LocalizedClass {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn bar(&self) -> LocalizedClass {
        LocalizedClass {
            values: self.values.iter().map(|v| v.bar()).collect(),
        }
    }

    /// Pointwise exact equality.
    pub fn equals(&self, other: &LocalizedClass) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.equals(b))
    }

    fn zip(
        &self,
        other: &LocalizedClass,
        f: impl Fn(&AlphaRational, &AlphaRational) -> AlphaRational,
    ) -> LocalizedClass {
        assert_eq!(self.values.len(), other.values.len(), "fixed point count mismatch");
        LocalizedClass {
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

/// Evaluate a divisor polynomial at every fixed point.
pub fn class_from_divisor_poly(
    m: &ToricManifold,
    sample: &WeightSample,
    poly: &DivisorPoly,
) -> LocalizedClass {
    let values = m
        .fixed_points()
        .iter()
        .map(|fp| {
            let mut acc = ScalarPoly::zero();
            for (c, dexp, hexp) in &poly.terms {
                let mut term = ScalarPoly::constant(c.clone());
                for (a, &e) in dexp.iter().enumerate() {
                    term = term.mul(&sample.weight(&fp.divisor_restrictions[a]).pow(e));
                }
                for (i, &e) in hexp.iter().enumerate() {
                    term = term.mul(&sample.weight(&fp.hyperplane_restrictions[i]).pow(e));
                }
                acc = acc.add(&term);
            }
            AlphaRational::constant(acc)
        })
        .collect();
    LocalizedClass::new(values)
}

/// `e_T(T_pX) = εⁿ ∏_i ⟨w_i, λ₀⟩`, always a monomial.
pub fn euler_t(m: &ToricManifold, sample: &WeightSample, p: usize) -> Result<ScalarPoly, EquivError> {
    let c: Q = m.fixed_points()[p]
        .tangent_weights
        .iter()
        .map(|w| sample.pair(w))
        .product();
    if c.is_zero() {
        return Err(EquivError::DegenerateSample(format!(
            "e_T vanishes at fixed point {p}"
        )));
    }
    Ok(ScalarPoly::monomial(c, 0, m.dim() as i32))
}

/// `∫_X ω = Σ_p ω(p)/e_T(p)` as an exact rational function of `α`.
///
/// The result is cleared of negative `ε` powers by construction; the
/// residue check runs on its expansion up to `order`.
pub fn integrate(
    m: &ToricManifold,
    sample: &WeightSample,
    omega: &LocalizedClass,
    order: i32,
) -> Result<AlphaRational, EquivError> {
    let mut acc = AlphaRational::constant(ScalarPoly::zero());
    for (p, v) in omega.values().iter().enumerate() {
        let e = AlphaRational::constant(euler_t(m, sample, p)?);
        acc = acc.add(&v.div(&e).expect("nonzero e_T"));
    }
    let expansion = acc.alpha_expand(order).ok_or(EquivError::NonMonomialLeading)?;
    check_eps(&expansion)?;
    Ok(acc)
}

/// Localization sum of pointwise `α`-expansions.
pub fn integrate_expansions(
    m: &ToricManifold,
    sample: &WeightSample,
    values: &[AlphaLaurent],
) -> Result<AlphaLaurent, EquivError> {
    let mut acc: Option<AlphaLaurent> = None;
    for (p, v) in values.iter().enumerate() {
        let e = euler_t(m, sample, p)?;
        let term = v.map_coeffs(|c| c.div_monomial(&e).expect("monomial"));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    let acc = acc.unwrap_or_else(AlphaLaurent::exact_zero);
    check_eps(&acc)?;
    Ok(acc)
}

fn check_eps(v: &AlphaLaurent) -> Result<(), EquivError> {
    for (_, c) in v.terms() {
        nonequiv_limit_scalar(c)?;
    }
    Ok(())
}

/// The `ε⁰` slice of a scalar, refusing surviving negative `ε` powers.
pub fn nonequiv_limit_scalar(s: &ScalarPoly) -> Result<ScalarPoly, EquivError> {
    match s.min_eps_exp() {
        Some(e) if e < 0 => Err(EquivError::EpsilonPoleResidue(e)),
        _ => Ok(s.eps_slice(0)),
    }
}

/// Coefficientwise `ε⁰` slice of an expansion.
pub fn nonequiv_limit(v: &AlphaLaurent) -> Result<AlphaLaurent, EquivError> {
    check_eps(v)?;
    Ok(v.map_coeffs(|c| c.eps_slice(0)))
}

/// Pointwise integrand `1/∏(D_a − α)`-style helpers for tests.
pub fn linear_alpha(u: ScalarPoly, k: Q) -> AlphaRational {
    AlphaRational::from_poly(AlphaPoly::linear(u, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::rational::q;

    fn p2() -> (ToricManifold, WeightSample) {
        let m = builtin::manifold("P2").unwrap();
        let s = WeightSample::from_ints(&[1, 4]);
        (m, s)
    }

    fn scalar_value(r: &AlphaRational) -> ScalarPoly {
        let e = r.alpha_expand(3).unwrap();
        assert!(e.terms().all(|(k, _)| k == 0));
        e.coeff(0)
    }

    #[test]
    fn restrictions_of_h() {
        let m = builtin::manifold("P1").unwrap();
        let s = WeightSample::from_ints(&[1]);
        let h = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[1]));
        assert_eq!(scalar_value(h.at(0)), ScalarPoly::eps());
        assert!(scalar_value(h.at(1)).is_zero());

        let (m, s) = p2();
        let h = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[1]));
        let vals: Vec<Q> = (0..3).map(|p| scalar_value(h.at(p)).coeff(0, 1)).collect();
        assert_eq!(vals, vec![q(1), q(0), q(-3)]);
        let h2 = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[2]));
        let vals: Vec<Q> = (0..3).map(|p| scalar_value(h2.at(p)).coeff(0, 2)).collect();
        assert_eq!(vals, vec![q(1), q(0), q(9)]);
        let one = class_from_divisor_poly(&m, &s, &DivisorPoly::one());
        assert!((0..3).all(|p| scalar_value(one.at(p)) == ScalarPoly::one()));
    }

    #[test]
    fn fixed_point_euler_classes() {
        let (m, s) = p2();
        let idx = |c: &[usize]| m.fixed_points().iter().position(|f| f.cone == c).unwrap();
        assert_eq!(euler_t(&m, &s, idx(&[0, 2])).unwrap(), ScalarPoly::monomial(q(12), 0, 2));
        assert_eq!(euler_t(&m, &s, idx(&[0, 1])).unwrap(), ScalarPoly::monomial(q(4), 0, 2));
        let p1 = builtin::manifold("P1").unwrap();
        assert_eq!(
            euler_t(&p1, &WeightSample::from_ints(&[1]), 0).unwrap(),
            ScalarPoly::eps()
        );
    }

    #[test]
    fn integrals() {
        let (m, s) = p2();
        let h2 = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[2]));
        let v = integrate(&m, &s, &h2, 4).unwrap();
        assert!(v.equals(&AlphaRational::one()));
        let h = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[1]));
        let v = integrate(&m, &s, &h, 4).unwrap().alpha_expand(4).unwrap();
        assert!(nonequiv_limit(&v).unwrap().is_zero());

        let p1 = builtin::manifold("P1").unwrap();
        let s1 = WeightSample::from_ints(&[1]);
        let h = class_from_divisor_poly(&p1, &s1, &DivisorPoly::h_monomial(&[1]));
        assert!(integrate(&p1, &s1, &h, 4).unwrap().equals(&AlphaRational::one()));
    }

    #[test]
    fn two_point_integral_expansion() {
        let p1 = builtin::manifold("P1").unwrap();
        let s = WeightSample::from_ints(&[1]);
        let values: Vec<AlphaRational> = p1
            .fixed_points()
            .iter()
            .map(|fp| {
                let d1 = linear_alpha(s.weight(&fp.divisor_restrictions[0]), -Q::one());
                let d2 = linear_alpha(s.weight(&fp.divisor_restrictions[1]), -Q::one());
                AlphaRational::one().div(&d1.mul(&d2)).unwrap()
            })
            .collect();
        let v = integrate(&p1, &s, &LocalizedClass::new(values), 6).unwrap();
        let e = nonequiv_limit(&v.alpha_expand(6).unwrap()).unwrap();
        assert_eq!(e.coeff(-3), ScalarPoly::constant(q(2)));
        assert!(e.terms().all(|(k, _)| k == -3));
    }

    #[test]
    fn pole_residue_detected() {
        let p1 = builtin::manifold("P1").unwrap();
        let s = WeightSample::from_ints(&[1]);
        let bad = LocalizedClass::new(vec![AlphaRational::one(), AlphaRational::constant(ScalarPoly::zero())]);
        assert!(matches!(
            integrate(&p1, &s, &bad, 3),
            Err(EquivError::EpsilonPoleResidue(-1))
        ));
    }

    #[test]
    fn product_intersection() {
        let m = builtin::manifold("P1xP2xP2").unwrap();
        let s = WeightSample::default_for(&m).unwrap();
        let c = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[1, 2, 2]));
        assert!(integrate(&m, &s, &c, 3).unwrap().equals(&AlphaRational::one()));
        let c = class_from_divisor_poly(&m, &s, &DivisorPoly::h_monomial(&[2, 1, 2]));
        let v = integrate(&m, &s, &c, 3).unwrap().alpha_expand(3).unwrap();
        assert!(nonequiv_limit(&v).unwrap().is_zero());
    }
}
