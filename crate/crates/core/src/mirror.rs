//! Mirror data `(F₀, F, G)` read off the `α`-asymptotics of the
//! hypergeometric series, and the transformation to the gauge-fixed
//! A-series.
//!
//! Everything is carried pointwise: at each fixed point `p` the series
//! `Σ_d β_d(p) q^d` has [`AlphaLaurent`] coefficients, where `β_d = B_d/Ω`
//! (or `B_d` itself for higher-rank concave bundles, whose `Ω` need not be
//! invertible).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equivariant::{AlphaLaurent, Factored, ScalarPoly};
use crate::euler_data::{EulerData, EulerError, MirrorCase};
use crate::linalg::solve_unique;
use crate::rational::Q;
use crate::series::{invert_mirror_map, NovikovSeries, SeriesError};
use crate::toric::{enumerate_degrees, CurveClass};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MirrorError {
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("B_{degree}: {reason}")]
    InconsistentDecomposition { degree: CurveClass, reason: String },
    #[error("α-truncation order {0} is too shallow (need at least 3)")]
    TruncationOverflow(i32),
    #[error("no sign of the log F₀ term passes the gauge check")]
    NoGaugeSign,
}

/// Whether series entries are `B_d/Ω` or `B_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    DividedByOmega,
    Raw,
}

/// Sign `s` in `f = s·α·log F₀ − G/F₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogSign {
    /// `s = −1`, so that `e^{f/α}` divides by `F₀`.
    Negative,
    /// `s = +1`.
    Positive,
}

impl LogSign {
    fn exponent(self) -> i64 {
        match self {
            LogSign::Negative => -1,
            LogSign::Positive => 1,
        }
    }
}

/// `HG[B]` restricted to every fixed point.
#[derive(Clone, Debug)]
pub struct HGSeries {
    pub case: MirrorCase,
    pub normalization: Normalization,
    pub rank: usize,
    pub d_max: u32,
    /// `α`-expansions are exact down to `α^{−order}`.
    pub order: i32,
    /// `⟨H_i(p), λ₀⟩` per fixed point.
    pub hyperplanes: Vec<Vec<Q>>,
    pub points: Vec<NovikovSeries<AlphaLaurent>>,
    /// Nonzero degrees carried.
    pub degrees: Vec<CurveClass>,
}

pub fn build_hg_series(ed: &EulerData, d_max: u32, order: i32) -> Result<HGSeries, MirrorError> {
    if order < 3 {
        return Err(MirrorError::TruncationOverflow(order));
    }
    if ed.spec.manual_euler.is_some() {
        return Err(EulerError::ManualEulerUnsupported.into());
    }
    let m = ed.manifold;
    let rank = m.picard_rank();
    let case = ed.spec.case();
    let normalization = match case {
        MirrorCase::ConcaveHigherRank => Normalization::Raw,
        _ => Normalization::DividedByOmega,
    };
    let degrees = enumerate_degrees(rank, d_max);
    let mut points: Vec<NovikovSeries<AlphaLaurent>> = (0..ed.points())
        .map(|_| match normalization {
            Normalization::DividedByOmega => NovikovSeries::one(rank, d_max),
            Normalization::Raw => NovikovSeries::zero(rank, d_max),
        })
        .collect();
    for d in &degrees {
        let ratio = match normalization {
            Normalization::DividedByOmega => ed.beta_ratio(d)?,
            Normalization::Raw => ed.b_ratio(d)?,
        };
        for (p, series) in points.iter_mut().enumerate() {
            series.insert(d.clone(), ratio.expand(m, ed.sample, p, None, order)?);
        }
    }
    let hyperplanes = m
        .fixed_points()
        .iter()
        .map(|fp| fp.hyperplane_restrictions.iter().map(|h| ed.sample.pair(h)).collect())
        .collect();
    Ok(HGSeries { case, normalization, rank, d_max, order, hyperplanes, points, degrees })
}

/// `λ_d`, `φ_{d,i}`, `ψ_d = ψ_x·x + ψ_ε·ε` per degree, and the sign used
/// in the assembly of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct MirrorData {
    pub case: MirrorCase,
    pub normalization: Normalization,
    pub rank: usize,
    pub d_max: u32,
    pub lambda: BTreeMap<CurveClass, Q>,
    pub phi: BTreeMap<CurveClass, Vec<Q>>,
    pub psi_x: BTreeMap<CurveClass, Q>,
    pub psi_eps: BTreeMap<CurveClass, Q>,
    pub log_sign: LogSign,
}

impl MirrorData {
    pub fn trivial(case: MirrorCase, normalization: Normalization, rank: usize, d_max: u32) -> Self {
        MirrorData {
            case,
            normalization,
            rank,
            d_max,
            lambda: BTreeMap::new(),
            phi: BTreeMap::new(),
            psi_x: BTreeMap::new(),
            psi_eps: BTreeMap::new(),
            log_sign: LogSign::Negative,
        }
    }

    fn series_of(&self, values: impl Iterator<Item = (CurveClass, Q)>) -> NovikovSeries<Q> {
        let mut s = NovikovSeries::zero(self.rank, self.d_max);
        for (d, v) in values {
            s.insert(d, v);
        }
        s
    }

    /// `F₀ = 1 + Σ λ_d q^d`.
    pub fn f0(&self) -> NovikovSeries<Q> {
        let one = std::iter::once((CurveClass::zero(self.rank), Q::one()));
        self.series_of(one.chain(self.lambda.iter().map(|(d, v)| (d.clone(), v.clone()))))
    }

    /// `F_i = −Σ φ_{d,i} q^d`.
    pub fn f(&self) -> Vec<NovikovSeries<Q>> {
        (0..self.rank)
            .map(|i| self.series_of(self.phi.iter().map(|(d, v)| (d.clone(), -v[i].clone()))))
            .collect()
    }

    /// `G = Σ ψ_d q^d` with `ψ_d ∈ ℚ[x, ε]`.
    pub fn g_series(&self) -> NovikovSeries<ScalarPoly> {
        let mut s = NovikovSeries::zero(self.rank, self.d_max);
        let keys: std::collections::BTreeSet<&CurveClass> =
            self.psi_x.keys().chain(self.psi_eps.keys()).collect();
        for d in keys {
            let a = self.psi_x.get(d).cloned().unwrap_or_else(Q::zero);
            let b = self.psi_eps.get(d).cloned().unwrap_or_else(Q::zero);
            s.insert(d.clone(), ScalarPoly::linear(a, b));
        }
        s
    }

    /// Nonequivariant `G`: only the `x` part survives.
    pub fn g_nonequivariant(&self) -> NovikovSeries<Q> {
        self.series_of(self.psi_x.iter().map(|(d, v)| (d.clone(), v.clone())))
    }

    /// Mirror-map shifts `g_i = F_i/F₀`, so that `q̃ = q·e^{g}`.
    pub fn mirror_shift(&self) -> Result<Vec<NovikovSeries<Q>>, SeriesError> {
        let inv = self.f0().inverse_unit()?;
        self.f().iter().map(|fi| fi.mul(&inv)).collect()
    }

    pub fn with_log_sign(&self, sign: LogSign) -> Self {
        MirrorData { log_sign: sign, ..self.clone() }
    }
}

fn inconsistent(d: &CurveClass, reason: impl Into<String>) -> MirrorError {
    MirrorError::InconsistentDecomposition { degree: d.clone(), reason: reason.into() }
}

/// Solves `β_d ≡ λ_d + α^{−1}(Σ H_i φ_{d,i} + ψ_d)` across fixed points.
pub fn extract_mirror_data(hg: &HGSeries) -> Result<MirrorData, MirrorError> {
    let mut md = MirrorData::trivial(hg.case, hg.normalization, hg.rank, hg.d_max);
    if hg.normalization == Normalization::Raw {
        return Ok(md);
    }
    let matrix: Vec<Vec<Q>> = hg
        .hyperplanes
        .iter()
        .map(|h| h.iter().cloned().chain(std::iter::once(Q::one())).collect())
        .collect();
    for d in &hg.degrees {
        let mut lambda: Option<Q> = None;
        let mut psi_x: Option<Q> = None;
        let mut rhs = Vec::with_capacity(hg.points.len());
        for series in &hg.points {
            let beta = series.coeff(d);
            if beta.top().is_some_and(|t| t > 0) {
                return Err(inconsistent(d, "positive powers of α"));
            }
            let c0 = beta.coeff(0);
            let l = if c0.is_zero() {
                Q::zero()
            } else {
                c0.as_constant().ok_or_else(|| inconsistent(d, "α⁰ coefficient is not a number"))?
            };
            if lambda.get_or_insert_with(|| l.clone()) != &l {
                return Err(inconsistent(d, "α⁰ coefficient differs between fixed points"));
            }
            let c1 = beta.coeff(-1);
            for (xe, ee, _) in c1.terms() {
                if (xe, ee) != (1, 0) && (xe, ee) != (0, 1) {
                    return Err(inconsistent(d, "α⁻¹ coefficient is not linear"));
                }
            }
            let a = c1.coeff(1, 0);
            if psi_x.get_or_insert_with(|| a.clone()) != &a {
                return Err(inconsistent(d, "x part of α⁻¹ coefficient differs between fixed points"));
            }
            rhs.push(c1.coeff(0, 1));
        }
        let sol = solve_unique(&matrix, &rhs)
            .map_err(|r| inconsistent(d, format!("hyperplane evaluation matrix has rank {r}")))?
            .ok_or_else(|| inconsistent(d, "α⁻¹ class is not of the form Σ H_i φ_i + ψ"))?;
        let (phi, psi_eps) = sol.split_at(hg.rank);
        let lambda = lambda.unwrap_or_else(Q::zero);
        if !lambda.is_zero() {
            md.lambda.insert(d.clone(), lambda);
        }
        if phi.iter().any(|v| !v.is_zero()) {
            md.phi.insert(d.clone(), phi.to_vec());
        }
        if let Some(a) = psi_x.filter(|a| !a.is_zero()) {
            md.psi_x.insert(d.clone(), a);
        }
        if !psi_eps[0].is_zero() {
            md.psi_eps.insert(d.clone(), psi_eps[0].clone());
        }
    }
    Ok(md)
}

/// `HG[A]` restricted to every fixed point, in the variable `q̃`.
#[derive(Clone, Debug)]
pub struct ASeries {
    pub normalization: Normalization,
    pub order: i32,
    pub points: Vec<NovikovSeries<AlphaLaurent>>,
    /// `ũ` with `q = q̃·e^{ũ(q̃)}`.
    pub shifts: Vec<NovikovSeries<Q>>,
    pub degrees: Vec<CurveClass>,
}

impl ASeries {
    /// `α_d(p)`: `A_d/Ω` at `p`, or `A_d` itself for raw series.
    pub fn coefficient(&self, d: &CurveClass, p: usize) -> AlphaLaurent {
        self.points[p].coeff(d)
    }
}

fn alpha_series(s: &NovikovSeries<ScalarPoly>, exp: i32) -> NovikovSeries<AlphaLaurent> {
    s.map(|c| AlphaLaurent::monomial(c.clone(), exp))
}

fn truncate_all(s: &NovikovSeries<AlphaLaurent>, order: i32) -> NovikovSeries<AlphaLaurent> {
    s.map(|c| c.truncate(-order))
}

/// `Σ_i H_i(p) g_i − G/F₀` at one fixed point.
fn gauge_exponent(
    md: &MirrorData,
    h: &[Q],
    g: &[NovikovSeries<Q>],
    f0_inv: &NovikovSeries<Q>,
) -> Result<NovikovSeries<ScalarPoly>, SeriesError> {
    let mut x = md.g_series().mul_rational(f0_inv)?.neg();
    for (hi, gi) in h.iter().zip(g) {
        let eps = ScalarPoly::monomial(hi.clone(), 0, 1);
        x = x.add(&gi.map(|c| eps.scale(c)))?;
    }
    Ok(x)
}

fn f0_power(md: &MirrorData, e: i64) -> Result<NovikovSeries<Q>, SeriesError> {
    let f0 = md.f0();
    match e {
        1 => Ok(f0),
        -1 => f0.inverse_unit(),
        _ => unreachable!("only ±1"),
    }
}

/// `Ω + Σ A_d q̃^d = e^{(f + H·g)/α}(Ω + Σ B_d q^d)` with `q̃ = q·e^{g}`.
pub fn apply_mirror_transform(hg: &HGSeries, md: &MirrorData) -> Result<ASeries, MirrorError> {
    let g = md.mirror_shift()?;
    let shifts = invert_mirror_map(&g)?;
    let f0_inv = md.f0().inverse_unit()?;
    let f0_factor = f0_power(md, md.log_sign.exponent())?;
    let mut points = Vec::with_capacity(hg.points.len());
    for (series, h) in hg.points.iter().zip(&hg.hyperplanes) {
        let x = gauge_exponent(md, h, &g, &f0_inv)?;
        let e = alpha_series(&x, -1).exp()?;
        let mp = truncate_all(&e.mul(series)?.mul_rational(&f0_factor)?, hg.order);
        points.push(truncate_all(&mp.substitute_exp_shift(&shifts)?, hg.order));
    }
    Ok(ASeries {
        normalization: hg.normalization,
        order: hg.order,
        points,
        shifts,
        degrees: hg.degrees.clone(),
    })
}

/// Undo [`apply_mirror_transform`], returning the pointwise `HG[B]` series.
pub fn invert_mirror_transform(
    a: &ASeries,
    hg_shape: &HGSeries,
    md: &MirrorData,
) -> Result<Vec<NovikovSeries<AlphaLaurent>>, MirrorError> {
    let g = md.mirror_shift()?;
    let f0_inv = md.f0().inverse_unit()?;
    let f0_factor = f0_power(md, -md.log_sign.exponent())?;
    let mut out = Vec::with_capacity(a.points.len());
    for (series, h) in a.points.iter().zip(&hg_shape.hyperplanes) {
        let x = gauge_exponent(md, h, &g, &f0_inv)?;
        let e = alpha_series(&x.neg(), -1).exp()?;
        let mp = series.substitute_exp_shift(&g)?;
        out.push(truncate_all(&e.mul(&mp)?.mul_rational(&f0_factor)?, a.order));
    }
    Ok(out)
}

/// Coefficientwise agreement on every exponent both sides know.
pub fn series_agree(a: &NovikovSeries<AlphaLaurent>, b: &NovikovSeries<AlphaLaurent>) -> bool {
    let keys: std::collections::BTreeSet<&CurveClass> = a.iter().map(|(d, _)| d).chain(b.iter().map(|(d, _)| d)).collect();
    keys.into_iter().all(|d| a.coeff(d).agrees_with(&b.coeff(d)))
}

/// First violation of `deg_α A_d ≤ −2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeViolation {
    pub degree: CurveClass,
    pub point: usize,
    pub alpha_order: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaugeReport {
    pub passed: bool,
    /// The violation with the highest `α` power, if any.
    pub worst: Option<GaugeViolation>,
    /// Highest `α` power seen over all `d ≻ 0` and fixed points.
    pub max_alpha_order: Option<i32>,
}

/// Checks that every `A_d`, `d ≻ 0`, is `O(α^{−2})` at every fixed point.
///
/// Since the series carry only the `t̃`-constant slice, this is the
/// statement that `e^{H·t̃/α}HG[A](t̃) = Ω + O(α^{−2})`; the part linear in
/// `t̃` is then `−ΩH·t̃/α` identically.
pub fn verify_gauge(a: &ASeries) -> GaugeReport {
    let mut worst: Option<GaugeViolation> = None;
    let mut max_order: Option<i32> = None;
    for d in &a.degrees {
        for (p, series) in a.points.iter().enumerate() {
            let c = series.coeff(d);
            let Some(top) = c.top() else { continue };
            max_order = Some(max_order.map_or(top, |m| m.max(top)));
            if top > -2 && worst.as_ref().is_none_or(|w| top > w.alpha_order) {
                worst = Some(GaugeViolation { degree: d.clone(), point: p, alpha_order: top });
            }
        }
    }
    GaugeReport { passed: worst.is_none(), worst, max_alpha_order: max_order }
}

/// Transforms with the sign of the `log F₀` term that passes the gauge
/// check, trying `s = −1` first.
pub fn transform_with_gauge_sign(
    hg: &HGSeries,
    md: &MirrorData,
) -> Result<(MirrorData, ASeries, GaugeReport), MirrorError> {
    for sign in [LogSign::Negative, LogSign::Positive] {
        let md = md.with_log_sign(sign);
        let a = apply_mirror_transform(hg, &md)?;
        let report = verify_gauge(&a);
        if report.passed {
            return Ok((md, a, report));
        }
    }
    Err(MirrorError::NoGaugeSign)
}

/// A coefficient `B_r|_q`, `0 ≺ r ≺ d = δ[pq]`, with a pole at `α = λ/δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityViolation {
    pub p: usize,
    pub q: usize,
    pub delta: u32,
    pub r: CurveClass,
    pub pole_order: i64,
}

/// The hypothesis under which both gauge moves preserve linking: for every
/// balloon `pq` and `d = δ[pq]` within `d_max`, each `B_r|_q` with
/// `0 ≺ r ≺ d` is regular at `α = λ/δ`, `λ` the weight of `T_q(pq)`.
/// The moves' own coefficients are polynomials in `α^{−1}`, hence regular
/// there.
pub fn check_transform_regularity(
    ed: &EulerData,
    d_max: u32,
    delta_max: u32,
) -> Result<Vec<RegularityViolation>, MirrorError> {
    let m = ed.manifold;
    let mut out = Vec::new();
    for b in m.balloons() {
        for b in [b.clone(), b.reversed()] {
            let lambda = ed.sample.pair(&b.weight_q);
            for delta in 1..=delta_max {
                let d = b.class.scaled(delta as i64);
                if d.total() > d_max as i64 {
                    break;
                }
                let form = Factored::linear(Q::zero(), -&lambda / Q::from_integer(delta.into()), Q::one(), 1)
                    .expect("nonzero");
                let key = form.factors().next().map(|(k, _)| k.clone()).expect("one factor");
                for r in d.sub_classes() {
                    if r.is_zero() || r == d {
                        continue;
                    }
                    let v = ed
                        .b_ratio(&r)?
                        .eval_factored(m, ed.sample, b.q, None)
                        .ok_or(EulerError::DivisionByZeroEuler(b.q))?;
                    let mult = v.multiplicity(&key);
                    if mult < 0 {
                        out.push(RegularityViolation { p: b.p, q: b.q, delta, r, pole_order: -mult });
                    }
                }
            }
        }
    }
    Ok(out)
}
