//! Hypergeometric Euler data for split bundles and the linear sigma model
//! Euler classes they are divided by.

pub mod formal;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivariant::{
    AlphaLaurent, AlphaPoly, AlphaRational, EquivError, Factored, LocalizedClass, ScalarPoly, WeightSample,
};
use num_traits::{One, Zero};

use crate::rational::{q, q_frac, Q};
use crate::toric::{pairing, Balloon, CurveClass, ToricManifold};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EulerError {
    #[error("bundle class {0:?} has the wrong length for this manifold")]
    DimensionMismatch(Vec<i64>),
    #[error("convex class {class:?} pairs negatively with {degree}")]
    NegativePairing { class: Vec<i64>, degree: CurveClass },
    #[error("concave class {class:?} pairs non-negatively with {degree}")]
    NonNegativePairing { class: Vec<i64>, degree: CurveClass },
    #[error("{r} is not between 0 and {d}")]
    OrderViolation { r: CurveClass, d: CurveClass },
    #[error("Euler class denominator vanishes at fixed point {0}")]
    DivisionByZeroEuler(usize),
    #[error("pole of order {order} at α = λ/{delta} on the curve joining {p} and {q}")]
    PoleOrderExceeded { p: usize, q: usize, delta: u32, order: usize },
    #[error("manual sigma-model classes only support series emission")]
    ManualEulerUnsupported,
    #[error(transparent)]
    Equiv(#[from] EquivError),
}

/// A split bundle `V = ⊕L⁺ ⊕ ⊕L⁻` given by H-basis classes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    #[serde(default)]
    pub convex: Vec<Vec<i64>>,
    #[serde(default)]
    pub concave: Vec<Vec<i64>>,
    #[serde(default)]
    pub chern_variable: bool,
    /// Replacement sigma-model classes `c_j`: `e_G = ∏_j ∏_{k=1}^{⟨c_j,d⟩}(c_j − kα)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manual_euler: Option<Vec<Vec<i64>>>,
}

/// Which gauge the mirror transformation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MirrorCase {
    Convex,
    ConcaveRankOne,
    ConcaveHigherRank,
}

impl BundleSpec {
    pub fn case(&self) -> MirrorCase {
        match self.concave.len() {
            0 => MirrorCase::Convex,
            1 => MirrorCase::ConcaveRankOne,
            _ => MirrorCase::ConcaveHigherRank,
        }
    }

    /// `s = N⁺ − N⁻ − (n − 3)`.
    pub fn s(&self, n: usize) -> i64 {
        self.convex.len() as i64 - self.concave.len() as i64 - (n as i64 - 3)
    }

    pub fn concat(&self, other: &BundleSpec) -> BundleSpec {
        BundleSpec {
            convex: self.convex.iter().chain(&other.convex).cloned().collect(),
            concave: self.concave.iter().chain(&other.concave).cloned().collect(),
            chern_variable: self.chern_variable || other.chern_variable,
            manual_euler: self.manual_euler.clone().or_else(|| other.manual_euler.clone()),
        }
    }

    /// Checks sign conditions against every curve class of the manifold;
    /// returns warnings for soft conditions.
    pub fn validate(&self, m: &ToricManifold) -> Result<Vec<String>, EulerError> {
        let rank = m.picard_rank();
        for c in self.convex.iter().chain(&self.concave).chain(self.manual_euler.iter().flatten()) {
            if c.len() != rank {
                return Err(EulerError::DimensionMismatch(c.clone()));
            }
        }
        let generators: BTreeSet<CurveClass> = m.balloons().iter().map(|b| b.class.clone()).collect();
        for d in &generators {
            for c in &self.convex {
                if pairing(c, d) < 0 {
                    return Err(EulerError::NegativePairing { class: c.clone(), degree: d.clone() });
                }
            }
            for c in &self.concave {
                if pairing(c, d) >= 0 {
                    return Err(EulerError::NonNegativePairing { class: c.clone(), degree: d.clone() });
                }
            }
        }
        let mut warnings = Vec::new();
        let mut total = vec![0i64; rank];
        for c in &self.convex {
            total.iter_mut().zip(c).for_each(|(t, v)| *t += v);
        }
        for c in &self.concave {
            total.iter_mut().zip(c).for_each(|(t, v)| *t -= v);
        }
        if total != m.anticanonical() {
            warnings.push(format!(
                "c1(V+) - c1(V-) = {total:?} differs from c1(X) = {:?}",
                m.anticanonical()
            ));
        }
        if self.s(m.dim()) < 0 {
            warnings.push(format!("s = {} < 0: no characteristic numbers", self.s(m.dim())));
        }
        Ok(warnings)
    }
}

/// The class appearing in one linear factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorClass {
    /// `Σ c_i H_i`.
    Basis(Vec<i64>),
    /// The toric divisor `D_a`.
    Divisor(usize),
}

/// `(x + c + kα)`, with `x` present only when the flag is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerFactor {
    pub class: FactorClass,
    pub x: bool,
    pub k: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EulerFactorList(pub Vec<EulerFactor>);

impl EulerFactorList {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn extend(&mut self, other: EulerFactorList) {
        self.0.extend(other.0);
    }

    /// Each factor at one fixed point as `(u, k)` meaning `u + kα`, with
    /// every class shifted by `⟨c, lift⟩α` when a lift is given.
    pub fn linear_forms(
        &self,
        m: &ToricManifold,
        s: &WeightSample,
        p: usize,
        lift: Option<&CurveClass>,
    ) -> Vec<(ScalarPoly, i64)> {
        self.0
            .iter()
            .map(|f| {
                let (value, shift) = match &f.class {
                    FactorClass::Basis(c) => (
                        s.weight(&m.class_restriction(p, c)),
                        lift.map_or(0, |r| pairing(c, r)),
                    ),
                    FactorClass::Divisor(a) => (
                        s.weight(&m.fixed_points()[p].divisor_restrictions[*a]),
                        lift.map_or(0, |r| pairing(&m.divisor_class(*a), r)),
                    ),
                };
                let u = if f.x { value.add(&ScalarPoly::x()) } else { value };
                (u, f.k + shift)
            })
            .collect()
    }

    /// Product of the factors at one fixed point.
    pub fn eval(
        &self,
        m: &ToricManifold,
        s: &WeightSample,
        p: usize,
        lift: Option<&CurveClass>,
    ) -> AlphaPoly {
        let mut acc = AlphaPoly::one();
        for (u, k) in self.linear_forms(m, s, p, lift) {
            acc = acc.mul(&AlphaPoly::linear(u, q(k)));
        }
        acc
    }

    /// As [`EulerFactorList::eval`], in factored form.
    pub fn eval_factored(
        &self,
        m: &ToricManifold,
        s: &WeightSample,
        p: usize,
        lift: Option<&CurveClass>,
    ) -> Factored {
        let mut acc = Factored::one();
        for f in &self.0 {
            let (w, shift) = match &f.class {
                FactorClass::Basis(c) => (
                    s.pair(&m.class_restriction(p, c)),
                    lift.map_or(0, |r| pairing(c, r)),
                ),
                FactorClass::Divisor(a) => (
                    s.pair(&m.fixed_points()[p].divisor_restrictions[*a]),
                    lift.map_or(0, |r| pairing(&m.divisor_class(*a), r)),
                ),
            };
            let a = if f.x { Q::one() } else { Q::zero() };
            let lin = Factored::linear(a, w, q(f.k + shift), 1).expect("positive multiplicity");
            acc = acc.mul(&lin);
        }
        acc
    }
}

/// `∏_{k=0}^{⟨L,d⟩}(x + L − kα)`.
pub fn convex_factor(l: &[i64], d: &CurveClass, x: bool) -> Result<EulerFactorList, EulerError> {
    let n = pairing(l, d);
    if n < 0 {
        return Err(EulerError::NegativePairing { class: l.to_vec(), degree: d.clone() });
    }
    Ok(EulerFactorList(
        (0..=n).map(|k| EulerFactor { class: FactorClass::Basis(l.to_vec()), x, k: -k }).collect(),
    ))
}

/// `∏_{k=1}^{−⟨L,d⟩−1}(x + L + kα)`.
pub fn concave_factor(l: &[i64], d: &CurveClass, x: bool) -> Result<EulerFactorList, EulerError> {
    let n = pairing(l, d);
    if n >= 0 {
        return Err(EulerError::NonNegativePairing { class: l.to_vec(), degree: d.clone() });
    }
    Ok(EulerFactorList(
        (1..-n).map(|k| EulerFactor { class: FactorClass::Basis(l.to_vec()), x, k }).collect(),
    ))
}

/// `∏_{k=1}^{l}(c − kα)`, read as `1/∏_{k=l+1}^{0}(c − kα)` when `l < 0`.
fn shifted_factorial(class: FactorClass, l: i64, num: &mut EulerFactorList, den: &mut EulerFactorList) {
    if l >= 0 {
        den.0.extend((1..=l).map(|k| EulerFactor { class: class.clone(), x: false, k: -k }));
    } else {
        num.0.extend((l + 1..=0).map(|k| EulerFactor { class: class.clone(), x: false, k: -k }));
    }
}

/// A pointwise ratio of factor lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorRatio {
    pub num: EulerFactorList,
    pub den: EulerFactorList,
}

impl FactorRatio {
    pub fn eval(
        &self,
        m: &ToricManifold,
        s: &WeightSample,
        p: usize,
        lift: Option<&CurveClass>,
    ) -> AlphaRational {
        AlphaRational::new(self.num.eval(m, s, p, lift), self.den.eval(m, s, p, lift))
            .expect("linear factors in α never vanish identically")
    }

    /// `None` when the denominator vanishes.
    pub fn eval_factored(
        &self,
        m: &ToricManifold,
        s: &WeightSample,
        p: usize,
        lift: Option<&CurveClass>,
    ) -> Option<Factored> {
        self.num.eval_factored(m, s, p, lift).div(&self.den.eval_factored(m, s, p, lift))
    }

    /// Expansion at `α → ∞` known down to `α^{−order}`.
    ///
    /// Each `u + kα` with `k ≠ 0` is written `kα(1 + u/(kα))`, so only
    /// power series in `1/α` are multiplied or divided. Factors with
    /// `k = 0` in the denominator must be monomials.
    pub fn expand(
        &self,
        m: &ToricManifold,
        s: &WeightSample,
        p: usize,
        lift: Option<&CurveClass>,
        order: i32,
    ) -> Result<AlphaLaurent, EulerError> {
        let num = self.num.linear_forms(m, s, p, lift);
        let den = self.den.linear_forms(m, s, p, lift);
        let mut scalar = ScalarPoly::one();
        let mut shift = 0i32;
        for (u, _) in num.iter().filter(|f| f.1 == 0) {
            scalar = scalar.mul(u);
        }
        for (_, k) in num.iter().filter(|f| f.1 != 0) {
            scalar = scalar.scale(&q(*k));
            shift += 1;
        }
        for (u, k) in &den {
            if *k == 0 {
                if u.is_zero() {
                    return Err(EulerError::DivisionByZeroEuler(p));
                }
                let (xe, ee, c) = u.as_monomial().ok_or(EquivError::NonMonomialLeading)?;
                scalar = scalar.mul(&ScalarPoly::monomial(c.recip(), -xe, -ee));
            } else {
                scalar = scalar.scale(&q(*k).recip());
                shift -= 1;
            }
        }
        // power series in y = 1/α; keep y^0..y^depth
        let depth = order + shift;
        if depth < 0 || scalar.is_zero() {
            return Ok(AlphaLaurent::zero_with_floor(-order));
        }
        let depth = depth as usize;
        let mut series = vec![ScalarPoly::zero(); depth + 1];
        series[0] = scalar;
        for (u, k) in num.iter().filter(|f| f.1 != 0) {
            let w = u.scale(&q(*k).recip());
            for j in (1..=depth).rev() {
                let t = series[j - 1].mul(&w);
                series[j] = series[j].add(&t);
            }
        }
        for (u, k) in den.iter().filter(|f| f.1 != 0) {
            let w = u.scale(&q(*k).recip());
            for j in 1..=depth {
                let t = series[j - 1].mul(&w);
                series[j] = series[j].sub(&t);
            }
        }
        let mut out = AlphaLaurent::zero_with_floor(-order);
        for (j, c) in series.into_iter().enumerate() {
            out = out.add(&AlphaLaurent::monomial(c, shift - j as i32));
        }
        Ok(out)
    }

    /// Joint `(x, ε, α)` degree.
    pub fn degree(&self) -> i32 {
        self.num.len() as i32 - self.den.len() as i32
    }
}

/// Euler data of a bundle on a manifold, evaluated at a weight sample.
#[derive(Clone, Debug)]
pub struct EulerData<'a> {
    pub manifold: &'a ToricManifold,
    pub sample: &'a WeightSample,
    pub spec: &'a BundleSpec,
    /// Whether factors carry the Chern variable `x`.
    pub x: bool,
}

impl<'a> EulerData<'a> {
    pub fn new(manifold: &'a ToricManifold, sample: &'a WeightSample, spec: &'a BundleSpec) -> Self {
        EulerData { manifold, sample, spec, x: spec.chern_variable }
    }

    /// The same data with `x` forced on.
    pub fn with_formal_x(&self) -> Self {
        EulerData { x: true, ..self.clone() }
    }

    pub fn points(&self) -> usize {
        self.manifold.fixed_points().len()
    }

    fn map_points(&self, f: impl Fn(usize) -> AlphaRational) -> LocalizedClass {
        LocalizedClass::new((0..self.points()).map(f).collect())
    }

    /// `Ω = ∏(x + L⁺)/∏(x + L⁻)` as stored data: numerator and denominator lists.
    pub fn omega_factors(&self) -> FactorRatio {
        let lin = |c: &Vec<i64>| EulerFactor { class: FactorClass::Basis(c.clone()), x: self.x, k: 0 };
        FactorRatio {
            num: EulerFactorList(self.spec.convex.iter().map(lin).collect()),
            den: EulerFactorList(self.spec.concave.iter().map(lin).collect()),
        }
    }

    /// `Ω`; fails where a concave factor vanishes (only possible with `x` off).
    pub fn omega(&self) -> Result<LocalizedClass, EulerError> {
        let f = self.omega_factors();
        let mut values = Vec::with_capacity(self.points());
        for p in 0..self.points() {
            let den = f.den.eval(self.manifold, self.sample, p, None);
            let v = AlphaRational::new(f.num.eval(self.manifold, self.sample, p, None), den)
                .ok_or(EulerError::DivisionByZeroEuler(p))?;
            values.push(v);
        }
        Ok(LocalizedClass::new(values))
    }

    /// Numerator factors of `P_d` for `d ≻ 0`.
    pub fn p_factors(&self, d: &CurveClass) -> Result<EulerFactorList, EulerError> {
        let mut out = EulerFactorList::default();
        for l in &self.spec.convex {
            out.extend(convex_factor(l, d, self.x)?);
        }
        for l in &self.spec.concave {
            out.extend(concave_factor(l, d, self.x)?);
        }
        Ok(out)
    }

    /// `P_d` as a factor ratio; `P_0 = Ω`.
    pub fn p_ratio(&self, d: &CurveClass) -> Result<FactorRatio, EulerError> {
        if d.is_zero() {
            return Ok(self.omega_factors());
        }
        Ok(FactorRatio { num: self.p_factors(d)?, den: EulerFactorList::default() })
    }

    /// `P_d` restricted to `X_r`, i.e. with `L̂ ↦ L + ⟨L,r⟩α`; `P_0 = Ω`.
    pub fn p_lifted(&self, d: &CurveClass, r: Option<&CurveClass>) -> Result<LocalizedClass, EulerError> {
        if d.is_zero() {
            return self.omega();
        }
        let f = self.p_factors(d)?;
        Ok(self.map_points(|p| AlphaRational::from_poly(f.eval(self.manifold, self.sample, p, r))))
    }

    pub fn p(&self, d: &CurveClass) -> Result<LocalizedClass, EulerError> {
        self.p_lifted(d, None)
    }

    /// `e_G(X₀/W_d)` as numerator/denominator factor lists.
    pub fn euler0_factors(&self, d: &CurveClass) -> FactorRatio {
        let mut r = FactorRatio::default();
        match &self.spec.manual_euler {
            Some(classes) => {
                for c in classes {
                    shifted_factorial(FactorClass::Basis(c.clone()), pairing(c, d), &mut r.num, &mut r.den);
                }
            }
            None => {
                for a in 0..self.manifold.n_rays() {
                    let l = pairing(&self.manifold.divisor_class(a), d);
                    shifted_factorial(FactorClass::Divisor(a), l, &mut r.num, &mut r.den);
                }
            }
        }
        // stored as e_G itself: swap so that `num` multiplies e_G
        FactorRatio { num: r.den, den: r.num }
    }

    pub fn sigma_model_euler0(&self, d: &CurveClass) -> LocalizedClass {
        let f = self.euler0_factors(d);
        self.map_points(|p| f.eval(self.manifold, self.sample, p, None))
    }

    /// `e_G(X_r/W_d) = bar(e_G(X₀/W_r))·e_G(X₀/W_{d−r})`.
    pub fn sigma_model_euler_r(&self, d: &CurveClass, r: &CurveClass) -> Result<LocalizedClass, EulerError> {
        if !r.is_effective() || !r.precedes(d) {
            return Err(EulerError::OrderViolation { r: r.clone(), d: d.clone() });
        }
        Ok(self.sigma_model_euler0(r).bar().mul(&self.sigma_model_euler0(&d.sub(r))))
    }

    /// `B_d = P_d / e_G(X₀/W_d)`, `B_0 = Ω`.
    pub fn b(&self, d: &CurveClass) -> Result<LocalizedClass, EulerError> {
        if d.is_zero() {
            return self.omega();
        }
        Ok(self.b_ratio(d)?.eval_all(self))
    }

    /// `B_d` as a single factor ratio.
    pub fn b_ratio(&self, d: &CurveClass) -> Result<FactorRatio, EulerError> {
        let e = self.euler0_factors(d);
        let mut num = self.p_factors(d)?;
        num.extend(e.den);
        Ok(FactorRatio { num, den: e.num })
    }

    /// `B_d/Ω`, a product of linear factors with no division by `Ω`:
    /// the `k = 0` factor of each convex product cancels against `Ω`, and
    /// each concave product gains its `k = 0` factor.
    pub fn beta_ratio(&self, d: &CurveClass) -> Result<FactorRatio, EulerError> {
        let mut r = self.b_ratio(d)?;
        for l in &self.spec.convex {
            let target = EulerFactor { class: FactorClass::Basis(l.clone()), x: self.x, k: 0 };
            let pos = r.num.0.iter().position(|f| *f == target).expect("k = 0 convex factor");
            r.num.0.remove(pos);
        }
        for l in &self.spec.concave {
            r.num.0.push(EulerFactor { class: FactorClass::Basis(l.clone()), x: self.x, k: 0 });
        }
        Ok(r)
    }

    pub fn lifted_restriction(&self, c: &[i64], r: &CurveClass) -> LocalizedClass {
        let k = q(pairing(c, r));
        self.map_points(|p| {
            AlphaRational::from_poly(AlphaPoly::linear(
                self.sample.weight(&self.manifold.class_restriction(p, c)),
                k.clone(),
            ))
        })
    }
}

impl FactorRatio {
    fn eval_all(&self, ed: &EulerData) -> LocalizedClass {
        ed.map_points(|p| self.eval(ed.manifold, ed.sample, p, None))
    }
}

/// A failed identity, with both sides at the offending point.
#[derive(Clone, Debug)]
pub struct IdentityFailure {
    pub point: usize,
    pub lhs: Factored,
    pub rhs: Factored,
}

/// `Ω·j_r^*P_d / e_G(X_r/W_d) = bar(B_r)·B_{d−r}` at every fixed point,
/// with `x` formal so that `Ω` is invertible. Both sides are products of
/// linear forms and are compared in factored form.
pub fn check_euler_identity(
    ed: &EulerData,
    d: &CurveClass,
    r: &CurveClass,
) -> Result<Result<(), IdentityFailure>, EulerError> {
    let ed = ed.with_formal_x();
    check_euler_identity_with(&ed, d, r, |deg| ed.p_ratio(deg))
}

/// As [`check_euler_identity`] with a caller-supplied `P`.
pub fn check_euler_identity_with(
    ed: &EulerData,
    d: &CurveClass,
    r: &CurveClass,
    p_ratio: impl Fn(&CurveClass) -> Result<FactorRatio, EulerError>,
) -> Result<Result<(), IdentityFailure>, EulerError> {
    if !r.is_effective() || !r.precedes(d) {
        return Err(EulerError::OrderViolation { r: r.clone(), d: d.clone() });
    }
    let (m, s) = (ed.manifold, ed.sample);
    let dr = d.sub(r);
    let omega = ed.omega_factors();
    let (pd, pr, pdr) = (p_ratio(d)?, p_ratio(r)?, p_ratio(&dr)?);
    let (er, edr) = (ed.euler0_factors(r), ed.euler0_factors(&dr));
    for p in 0..ed.points() {
        let ev = |f: &FactorRatio, lift: Option<&CurveClass>| {
            f.eval_factored(m, s, p, lift).ok_or(EulerError::DivisionByZeroEuler(p))
        };
        let e_r = ev(&er, None)?.bar().mul(&ev(&edr, None)?);
        let lhs = ev(&omega, None)?
            .mul(&ev(&pd, Some(r))?)
            .div(&e_r)
            .ok_or(EulerError::DivisionByZeroEuler(p))?;
        let b_r = ev(&pr, None)?.div(&ev(&er, None)?).ok_or(EulerError::DivisionByZeroEuler(p))?;
        let b_dr = ev(&pdr, None)?.div(&ev(&edr, None)?).ok_or(EulerError::DivisionByZeroEuler(p))?;
        let rhs = b_r.bar().mul(&b_dr);
        if lhs != rhs {
            return Ok(Err(IdentityFailure { point: p, lhs, rhs }));
        }
    }
    Ok(Ok(()))
}

/// Outcome of one linking check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingReport {
    pub p: usize,
    pub q: usize,
    pub delta: u32,
    pub numerator_agrees: bool,
    pub pole_order: usize,
}

/// Compare `P_d` at `α = λ_q/δ` with the product of weights of the bundle
/// sections over the degree-`δ` cover of the balloon, `d = δ[pq]`, and
/// bound the order of the `e_G` pole there.
pub fn check_linking(ed: &EulerData, balloon: &Balloon, delta: u32) -> Result<LinkingReport, EulerError> {
    check_linking_with(ed, balloon, delta, false)
}

/// With `wrong_endpoint` the specialization uses `λ_p` instead of `λ_q`.
/// Runs with `x` formal, so vanishing bundle weights cannot mask a
/// mismatch.
pub fn check_linking_with(
    ed: &EulerData,
    balloon: &Balloon,
    delta: u32,
    wrong_endpoint: bool,
) -> Result<LinkingReport, EulerError> {
    let ed = ed.with_formal_x();
    let (m, s) = (ed.manifold, ed.sample);
    let d = balloon.class.scaled(delta as i64);
    let dq = q_frac(1, delta as i64);
    let lam = if wrong_endpoint { &balloon.weight_p } else { &balloon.weight_q };
    let alpha = s.weight(lam).scale(&dq);
    let lam_q = s.weight(&balloon.weight_q).scale(&dq);
    let xs = |u: ScalarPoly| if ed.x { u.add(&ScalarPoly::x()) } else { u };

    let hyper = ed.p_factors(&d)?.eval(m, s, balloon.q, None).eval(&alpha);

    let mut geometric = ScalarPoly::one();
    for l in &ed.spec.convex {
        let lq = s.weight(&m.class_restriction(balloon.q, l));
        for k in 0..=pairing(l, &d) {
            geometric = geometric.mul(&xs(lq.sub(&lam_q.scale(&q(k)))));
        }
    }
    for l in &ed.spec.concave {
        let lq = s.weight(&m.class_restriction(balloon.q, l));
        for k in 1..-pairing(l, &d) {
            geometric = geometric.mul(&xs(lq.add(&lam_q.scale(&q(k)))));
        }
    }

    let fp = &m.fixed_points()[balloon.q];
    let mut pole_order = 0;
    for a in 0..m.n_rays() {
        let l = pairing(&m.divisor_class(a), &d);
        for k in 1..=l {
            let ratio = q_frac(k, delta as i64);
            let vanishes = fp.divisor_restrictions[a]
                .iter()
                .zip(lam)
                .all(|(da, w)| *da == &ratio * w);
            if vanishes {
                pole_order += 1;
            }
        }
    }
    if pole_order > 1 {
        return Err(EulerError::PoleOrderExceeded {
            p: balloon.p,
            q: balloon.q,
            delta,
            order: pole_order,
        });
    }
    Ok(LinkingReport {
        p: balloon.p,
        q: balloon.q,
        delta,
        numerator_agrees: hyper == geometric,
        pole_order,
    })
}

impl LocalizedClass {
    /// Pointwise reciprocal.
    pub fn inverse(&self) -> LocalizedClass {
        LocalizedClass::new(
            self.values()
                .iter()
                .map(|v| AlphaRational::one().div(v).expect("invertible"))
                .collect(),
        )
    }
}

/// Divisor-count helper: whether every pairing of `D_a` with `d` is non-negative.
pub fn euler0_is_polynomial(m: &ToricManifold, d: &CurveClass) -> bool {
    (0..m.n_rays()).all(|a| pairing(&m.divisor_class(a), d) >= 0)
}

#[cfg(test)]
mod tests;
