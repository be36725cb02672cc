//! Characteristic numbers `K_d` from the gauge-fixed A-series, and
//! instanton numbers by multicover inversion.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::equivariant::{euler_t, EquivError, ScalarPoly, WeightSample};
use crate::euler_data::{BundleSpec, EulerData, EulerError, MirrorCase};
use crate::mirror::{
    apply_mirror_transform, build_hg_series, extract_mirror_data, transform_with_gauge_sign,
    verify_gauge, ASeries, GaugeReport, GaugeViolation, LogSign, MirrorData, MirrorError,
    Normalization,
};
use crate::rational::{is_integral, q, Q};
use crate::toric::{CurveClass, ToricManifold};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantsError {
    #[error(transparent)]
    Mirror(#[from] MirrorError),
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Equiv(#[from] EquivError),
    #[error("gauge check failed: A_{} at fixed point {} has α-order {}", .0.degree, .0.point, .0.alpha_order)]
    GaugeCheckFailed(GaugeViolation),
    #[error("s = {0} < 0")]
    NegativeS(i64),
    #[error("K_{0} is needed for the multicover inversion but was not computed")]
    MissingDivisorDegree(CurveClass),
}

/// Default `α`-truncation order `J = n + 4`.
pub fn default_order(m: &ToricManifold) -> i32 {
    m.dim() as i32 + 4
}

/// `K_d` per degree, with optional instanton numbers `n_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantTable {
    pub rank: usize,
    pub d_max: u32,
    pub s: i64,
    pub lambda0: Vec<Q>,
    pub case: MirrorCase,
    pub log_sign: LogSign,
    pub k: BTreeMap<CurveClass, Q>,
    pub n: Option<BTreeMap<CurveClass, Q>>,
}

impl InvariantTable {
    /// Degrees whose `n_d` is not an integer.
    pub fn non_integral(&self) -> Vec<CurveClass> {
        self.n
            .iter()
            .flatten()
            .filter(|(_, v)| !is_integral(v))
            .map(|(d, _)| d.clone())
            .collect()
    }
}

/// Everything a run produces on the way to `K_d`.
#[derive(Clone, Debug)]
pub struct InvariantRun {
    pub table: InvariantTable,
    pub mirror_data: MirrorData,
    pub gauge: GaugeReport,
    pub aseries: ASeries,
    /// `⟨H_i(p), λ₀⟩` and `Ω(p)` per fixed point.
    hyperplanes: Vec<Vec<Q>>,
    omega: Vec<ScalarPoly>,
    euler: Vec<ScalarPoly>,
}

/// `Ω(p)` as a scalar; concave factors `1/(x + cε)` are expanded in `ε/x`
/// through `ε^{depth}`.
pub fn omega_scalar(ed: &EulerData, p: usize, depth: i32) -> Result<ScalarPoly, EulerError> {
    let f = ed.omega_factors();
    let (m, s) = (ed.manifold, ed.sample);
    let mut acc = ScalarPoly::one();
    for (u, _) in f.num.linear_forms(m, s, p, None) {
        acc = acc.mul(&u);
    }
    for (u, _) in f.den.linear_forms(m, s, p, None) {
        acc = acc.mul(&inverse_linear(&u, depth).ok_or(EulerError::DivisionByZeroEuler(p))?);
    }
    Ok(acc)
}

/// `1/(a·x + b·ε)`, exact for a monomial and expanded in `ε/x` otherwise.
fn inverse_linear(u: &ScalarPoly, depth: i32) -> Option<ScalarPoly> {
    if let Some((xe, ee, c)) = u.as_monomial() {
        return Some(ScalarPoly::monomial(c.recip(), -xe, -ee));
    }
    let a = u.coeff(1, 0);
    let b = u.coeff(0, 1);
    if a.is_zero() || u.len() != 2 {
        return None;
    }
    let ratio = -(&b / &a);
    let mut out = ScalarPoly::zero();
    let mut c = a.recip();
    for k in 0..=depth {
        out.add_term(-1 - k, k, c.clone());
        c *= &ratio;
    }
    Some(out)
}

impl InvariantRun {
    /// `Σ_p w(p)·Ω(p)·[α^{e}]A_d(p)/e_T(p)` at `ε⁰`, coefficient of `x^s`.
    fn localized_coefficient(
        &self,
        d: &CurveClass,
        alpha_exp: i32,
        weight: impl Fn(usize) -> ScalarPoly,
    ) -> Result<Q, InvariantsError> {
        let mut total = ScalarPoly::zero();
        for p in 0..self.euler.len() {
            let c = self.aseries.coefficient(d, p).coeff(alpha_exp);
            if c.is_zero() {
                continue;
            }
            let v = c.mul(&self.omega[p]).mul(&weight(p));
            total = total.add(&v.div_monomial(&self.euler[p]).expect("monomial e_T"));
        }
        if let Some(e) = total.terms().filter(|t| t.1 < 0).map(|t| t.1).min() {
            return Err(EquivError::EpsilonPoleResidue(e).into());
        }
        Ok(total.coeff(self.table.s as i32, 0))
    }

    /// `∫_X A_d` at `α^{−3}`, `ε⁰`, `x^s`, halved.
    fn k_value(&self, d: &CurveClass) -> Result<Q, InvariantsError> {
        Ok(self.localized_coefficient(d, -3, |_| ScalarPoly::one())? / q(2))
    }

    /// The `t`-linear part of `∫e^{−H·t/α}A_d = α^{−3}(2 − d·t)K_d`:
    /// returns `[α^{−2}]∫H_i A_d` for each `i`, which must equal `d_i K_d`.
    pub fn t_linear_coefficients(&self, d: &CurveClass) -> Result<Vec<Q>, InvariantsError> {
        (0..self.table.rank)
            .map(|i| {
                self.localized_coefficient(d, -2, |p| {
                    ScalarPoly::monomial(self.hyperplanes[p][i].clone(), 0, 1)
                })
            })
            .collect()
    }
}

/// Outcome of the `t`-linear consistency check at one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct TLinearReport {
    pub degree: CurveClass,
    /// `−[α^{−2}]∫H_i A_d / (2K_d)` per `i`; `None` when `K_d = 0`.
    pub ratios: Vec<Option<Q>>,
    pub passed: bool,
}

pub fn t_linear_consistency(run: &InvariantRun, d: &CurveClass) -> Result<TLinearReport, InvariantsError> {
    let k = run.table.k.get(d).cloned().unwrap_or_else(Q::zero);
    let coeffs = run.t_linear_coefficients(d)?;
    let passed = coeffs.iter().zip(&d.0).all(|(c, di)| *c == q(*di) * &k);
    let ratios = coeffs
        .iter()
        .map(|c| (!k.is_zero()).then(|| -(c / (q(2) * &k))))
        .collect();
    Ok(TLinearReport { degree: d.clone(), ratios, passed })
}

/// Builds the A-series and reads off every `K_d` with `|d| ≤ d_max`.
pub fn compute_invariants(
    m: &ToricManifold,
    spec: &BundleSpec,
    sample: &WeightSample,
    d_max: u32,
    order: i32,
) -> Result<InvariantRun, InvariantsError> {
    spec.validate(m)?;
    let s = spec.s(m.dim());
    if s < 0 {
        return Err(InvariantsError::NegativeS(s));
    }
    let ed = EulerData::new(m, sample, spec);
    let hg = build_hg_series(&ed, d_max, order)?;
    let md = extract_mirror_data(&hg)?;
    let (md, aseries, gauge) = match transform_with_gauge_sign(&hg, &md) {
        Ok(v) => v,
        Err(MirrorError::NoGaugeSign) => {
            let report = verify_gauge(&apply_mirror_transform(&hg, &md)?);
            return Err(InvariantsError::GaugeCheckFailed(report.worst.expect("failed report")));
        }
        Err(e) => return Err(e.into()),
    };
    let n = m.dim() as i32;
    let points = ed.points();
    let omega = match hg.normalization {
        Normalization::DividedByOmega => {
            (0..points).map(|p| omega_scalar(&ed, p, n)).collect::<Result<Vec<_>, _>>()?
        }
        Normalization::Raw => vec![ScalarPoly::one(); points],
    };
    let euler = (0..points).map(|p| euler_t(m, sample, p)).collect::<Result<Vec<_>, _>>()?;
    let table = InvariantTable {
        rank: m.picard_rank(),
        d_max,
        s,
        lambda0: sample.lambda().to_vec(),
        case: spec.case(),
        log_sign: md.log_sign,
        k: BTreeMap::new(),
        n: None,
    };
    let mut run = InvariantRun {
        table,
        mirror_data: md,
        gauge,
        aseries,
        hyperplanes: hg.hyperplanes.clone(),
        omega,
        euler,
    };
    for d in &hg.degrees {
        let k = run.k_value(d)?;
        run.table.k.insert(d.clone(), k);
    }
    Ok(run)
}

/// `K_d = Σ_{k | d} k^{−3} n_{d/k}`, inverted degree by degree.
pub fn instanton_numbers(k: &BTreeMap<CurveClass, Q>) -> Result<BTreeMap<CurveClass, Q>, InvariantsError> {
    let mut degrees: Vec<CurveClass> = k.keys().filter(|d| !d.is_zero()).cloned().collect();
    crate::toric::sort_degrees(&mut degrees);
    let mut n: BTreeMap<CurveClass, Q> = BTreeMap::new();
    for d in degrees {
        let mut v = k[&d].clone();
        let g = d.0.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        for j in 2..=g {
            if d.0.iter().any(|x| x % j != 0) {
                continue;
            }
            let base = CurveClass(d.0.iter().map(|x| x / j).collect());
            let nb = n.get(&base).ok_or_else(|| InvariantsError::MissingDivisorDegree(base.clone()))?;
            v -= nb / q(j * j * j);
        }
        n.insert(d, v);
    }
    Ok(n)
}

impl InvariantTable {
    pub fn with_instanton_numbers(mut self) -> Result<Self, InvariantsError> {
        self.n = Some(instanton_numbers(&self.k)?);
        Ok(self)
    }
}

/// Whether two tables agree on every `K_d`.
pub fn same_invariants(a: &InvariantTable, b: &InvariantTable) -> bool {
    a.k == b.k
}

/// Convenience: run with the default sample and order and attach `n_d`.
pub fn invariants_default(
    m: &ToricManifold,
    spec: &BundleSpec,
    d_max: u32,
) -> Result<InvariantRun, InvariantsError> {
    let sample = WeightSample::default_for(m)?;
    let mut run = compute_invariants(m, spec, &sample, d_max, default_order(m))?;
    run.table = run.table.clone().with_instanton_numbers()?;
    Ok(run)
}
