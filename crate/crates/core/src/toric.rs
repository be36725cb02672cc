//! Smooth complete toric manifolds: fan data, torus fixed points, the
//! invariant curves joining them, and degrees in the Mori cone.
//!
//! A fixed point is a maximal cone `σ = {a_1, …, a_n}`. Its tangent
//! weights are the dual basis `w_i` of the cone's rays, and the
//! equivariant divisor `D_{a_i}` restricts to `w_i` there while every
//! divisor outside `σ` restricts to zero.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix};
use crate::rational::{q, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ToricError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone {cone:?} is not smooth (determinant {det})")]
    NonSmoothCone { cone: Vec<usize>, det: String },
    #[error("charge matrix row {row} does not annihilate the rays (coordinate {coord})")]
    ChargeRelationViolation { row: usize, coord: usize },
    #[error("facet {facet:?} is shared by {count} maximal cones instead of 2")]
    DanglingFacet { facet: Vec<usize>, count: usize },
    #[error("fixed points {0} and {1} have identical divisor restrictions")]
    Inadmissible(usize, usize),
    #[error("tangent weights at fixed point {0} are not pairwise independent")]
    DependentWeights(usize),
    #[error("curve class {class} of the curve joining {p} and {q} is not in the Mori cone of the H basis")]
    NotMoriAdapted { p: usize, q: usize, class: CurveClass },
    #[error("balloon relation fails for divisor {divisor} on the curve joining {p} and {q}")]
    BalloonRelationViolated { p: usize, q: usize, divisor: usize },
    #[error("no equivariant lift of H_{0} from the divisors")]
    NoHyperplaneLift(usize),
}

/// A curve class `d = (d_1, …, d_m)` in the basis dual to `H_1, …, H_m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(m: usize) -> Self {
        CurveClass(vec![0; m])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&v| v >= 0)
    }

    /// `self ⪯ other` componentwise.
    pub fn precedes(&self, other: &CurveClass) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sub(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn add(&self, other: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scaled(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }

    /// `k` with `self = k · base`, if one exists.
    pub fn multiple_of(&self, base: &CurveClass) -> Option<i64> {
        let mut k = None;
        for (a, b) in self.0.iter().zip(&base.0) {
            match (*a, *b) {
                (0, 0) => {}
                (_, 0) => return None,
                (a, b) if a % b != 0 => return None,
                (a, b) => match k {
                    None => k = Some(a / b),
                    Some(prev) if prev != a / b => return None,
                    _ => {}
                },
            }
        }
        k
    }

    /// Every `r` with `0 ⪯ r ⪯ self`, in enumeration order.
    pub fn sub_classes(&self) -> Vec<CurveClass> {
        let mut out = vec![CurveClass(Vec::new())];
        for &c in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=c.max(0)).map(move |v| {
                        let mut p = prefix.0.clone();
                        p.push(v);
                        CurveClass(p)
                    })
                })
                .collect();
        }
        sort_degrees(&mut out);
        out
    }
}

impl fmt::Debug for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `⟨c, d⟩ = Σ c_i d_i` for an H-basis divisor vector `c`.
pub fn pairing(c: &[i64], d: &CurveClass) -> i64 {
    assert_eq!(c.len(), d.0.len(), "pairing dimension mismatch");
    c.iter().zip(&d.0).map(|(a, b)| a * b).sum()
}

/// By total degree, then lexicographically descending.
pub fn sort_degrees(ds: &mut [CurveClass]) {
    ds.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| b.0.cmp(&a.0)));
}

/// Nonzero lattice points of `ℤ_{≥0}^m` with total degree at most `d_max`.
pub fn enumerate_degrees(m: usize, d_max: u32) -> Vec<CurveClass> {
    let mut out = Vec::new();
    fn rec(prefix: &mut Vec<i64>, m: usize, left: i64, out: &mut Vec<CurveClass>) {
        if prefix.len() == m {
            if prefix.iter().any(|&v| v != 0) {
                out.push(CurveClass(prefix.clone()));
            }
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(prefix, m, left - v, out);
            prefix.pop();
        }
    }
    rec(&mut Vec::new(), m, d_max as i64, &mut out);
    sort_degrees(&mut out);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    /// Sorted, 0-based ray indices of the maximal cone.
    pub cone: Vec<usize>,
    /// Dual basis to the cone's rays, in the order of `cone`.
    pub tangent_weights: Vec<Vec<Q>>,
    /// `D_a(p)` for every ray `a`.
    pub divisor_restrictions: Vec<Vec<Q>>,
    /// `H_i(p)` for the chosen lifts of the H basis.
    pub hyperplane_restrictions: Vec<Vec<Q>>,
}

/// A torus-invariant ℙ¹ joining two fixed points.
#[derive(Clone, Debug, PartialEq)]
pub struct Balloon {
    pub p: usize,
    pub q: usize,
    pub class: CurveClass,
    /// `⟨D_a, [pq]⟩` for every ray `a`.
    pub divisor_degrees: Vec<i64>,
    /// Weight of `T_q(pq)`.
    pub weight_q: Vec<Q>,
    /// Weight of `T_p(pq)`; equals `−weight_q`.
    pub weight_p: Vec<Q>,
}

impl Balloon {
    /// The same curve seen from the other end.
    pub fn reversed(&self) -> Balloon {
        Balloon {
            p: self.q,
            q: self.p,
            class: self.class.clone(),
            divisor_degrees: self.divisor_degrees.clone(),
            weight_q: self.weight_p.clone(),
            weight_p: self.weight_q.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ToricManifold {
    name: String,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    charge: Vec<Vec<i64>>,
    /// `H_i = Σ_a lift[i][a] D_a`.
    hyperplane_lift: Vec<Vec<Q>>,
    fixed_points: Vec<FixedPoint>,
    balloons: Vec<Balloon>,
}

impl ToricManifold {
    /// Validate fan data and precompute fixed points and balloons.
    ///
    /// `cones` are 0-based ray indices.
    pub fn new(
        name: impl Into<String>,
        rays: Vec<Vec<i64>>,
        cones: Vec<Vec<usize>>,
        charge: Vec<Vec<i64>>,
    ) -> Result<Self, ToricError> {
        let n_rays = rays.len();
        let n = rays.first().map_or(0, |r| r.len());
        let m = charge.len();
        if n == 0 || rays.iter().any(|r| r.len() != n) {
            return Err(ToricError::DimensionMismatch(
                "rays must be nonempty vectors of equal length".into(),
            ));
        }
        if charge.iter().any(|r| r.len() != n_rays) {
            return Err(ToricError::DimensionMismatch(format!(
                "charge matrix rows must have {n_rays} entries"
            )));
        }
        if n_rays != n + m {
            return Err(ToricError::DimensionMismatch(format!(
                "{n_rays} rays but n + m = {}",
                n + m
            )));
        }
        for cone in &cones {
            if cone.len() != n || cone.iter().any(|&a| a >= n_rays) {
                return Err(ToricError::DimensionMismatch(format!(
                    "cone {cone:?} must list {n} ray indices below {n_rays}"
                )));
            }
        }
        for (row, qrow) in charge.iter().enumerate() {
            for coord in 0..n {
                let s: i64 = rays.iter().zip(qrow).map(|(v, c)| v[coord] * c).sum();
                if s != 0 {
                    return Err(ToricError::ChargeRelationViolation { row, coord });
                }
            }
        }
        let mut sorted_cones = Vec::with_capacity(cones.len());
        let mut fixed_points = Vec::with_capacity(cones.len());
        for cone in &cones {
            let mut cone = cone.clone();
            cone.sort_unstable();
            let ray_matrix: Matrix = (0..n)
                .map(|i| cone.iter().map(|&a| q(rays[a][i])).collect())
                .collect();
            let det = linalg::det(&ray_matrix);
            if det.abs() != Q::one() {
                return Err(ToricError::NonSmoothCone {
                    cone: cone.iter().map(|a| a + 1).collect(),
                    det: det.to_string(),
                });
            }
            // Rows of the inverse are the dual basis.
            let dual = linalg::inverse(&ray_matrix).expect("unimodular");
            let mut restrictions = vec![vec![Q::zero(); n]; n_rays];
            for (i, &a) in cone.iter().enumerate() {
                restrictions[a] = dual[i].clone();
            }
            fixed_points.push(FixedPoint {
                cone: cone.clone(),
                tangent_weights: dual,
                divisor_restrictions: restrictions,
                hyperplane_restrictions: Vec::new(),
            });
            sorted_cones.push(cone);
        }

        let hyperplane_lift = hyperplane_lift(&charge, &sorted_cones[0])?;
        for fp in &mut fixed_points {
            fp.hyperplane_restrictions = hyperplane_lift
                .iter()
                .map(|coef| {
                    (0..n)
                        .map(|j| {
                            coef.iter()
                                .zip(&fp.divisor_restrictions)
                                .map(|(c, d)| c * &d[j])
                                .sum()
                        })
                        .collect()
                })
                .collect();
        }

        for (i, fp) in fixed_points.iter().enumerate() {
            for a in 0..n {
                for b in a + 1..n {
                    if proportional(&fp.tangent_weights[a], &fp.tangent_weights[b]) {
                        return Err(ToricError::DependentWeights(i));
                    }
                }
            }
        }
        let mut seen: BTreeMap<Vec<Vec<Q>>, usize> = BTreeMap::new();
        for (i, fp) in fixed_points.iter().enumerate() {
            if let Some(&j) = seen.get(&fp.divisor_restrictions) {
                return Err(ToricError::Inadmissible(j, i));
            }
            seen.insert(fp.divisor_restrictions.clone(), i);
        }
        check_facets(&cones)?;

        let mut manifold = ToricManifold {
            name: name.into(),
            rays,
            cones,
            charge,
            hyperplane_lift,
            fixed_points,
            balloons: Vec::new(),
        };
        manifold.balloons = manifold.compute_balloons()?;
        Ok(manifold)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Maximal cones as supplied (0-based).
    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn charge_matrix(&self) -> &[Vec<i64>] {
        &self.charge
    }

    /// Complex dimension `n`.
    pub fn dim(&self) -> usize {
        self.rays[0].len()
    }

    /// Rank `m` of `H²`.
    pub fn picard_rank(&self) -> usize {
        self.charge.len()
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn hyperplane_lift(&self) -> &[Vec<Q>] {
        &self.hyperplane_lift
    }

    pub fn fixed_points(&self) -> &[FixedPoint] {
        &self.fixed_points
    }

    pub fn balloons(&self) -> &[Balloon] {
        &self.balloons
    }

    /// H-basis vector of `[D_a]`: column `a` of the charge matrix.
    pub fn divisor_class(&self, a: usize) -> Vec<i64> {
        self.charge.iter().map(|row| row[a]).collect()
    }

    /// `c_1(X) = Σ_a D_a` in the H basis.
    pub fn anticanonical(&self) -> Vec<i64> {
        self.charge.iter().map(|row| row.iter().sum()).collect()
    }

    /// Equivariant restriction of an H-basis class `Σ c_i H_i` to a fixed point.
    pub fn class_restriction(&self, point: usize, c: &[i64]) -> Vec<Q> {
        let fp = &self.fixed_points[point];
        let n = self.dim();
        (0..n)
            .map(|j| {
                c.iter()
                    .zip(&fp.hyperplane_restrictions)
                    .map(|(ci, h)| q(*ci) * &h[j])
                    .sum()
            })
            .collect()
    }

    pub fn degrees(&self, d_max: u32) -> Vec<CurveClass> {
        enumerate_degrees(self.picard_rank(), d_max)
    }

    fn compute_balloons(&self) -> Result<Vec<Balloon>, ToricError> {
        let n = self.dim();
        let n_rays = self.n_rays();
        let mut out = Vec::new();
        let cones: Vec<&Vec<usize>> = self.fixed_points.iter().map(|f| &f.cone).collect();
        for (i, s1) in cones.iter().enumerate() {
            for (j, s2) in cones.iter().enumerate().skip(i + 1) {
                let common: Vec<usize> = s1.iter().filter(|a| s2.contains(a)).copied().collect();
                if common.len() + 1 != n {
                    continue;
                }
                let a1 = *s1.iter().find(|a| !common.contains(a)).unwrap();
                let a2 = *s2.iter().find(|a| !common.contains(a)).unwrap();
                let fp = &self.fixed_points[i];
                let pos = |a: usize| s1.iter().position(|&b| b == a).unwrap();
                let v2: Vec<Q> = self.rays[a2].iter().map(|&v| q(v)).collect();
                let coeff = |a: usize| linalg::dot(&fp.tangent_weights[pos(a)], &v2);
                if coeff(a1) != -Q::one() {
                    return Err(ToricError::NonSmoothCone {
                        cone: s2.iter().map(|a| a + 1).collect(),
                        det: "wall relation coefficient ≠ −1".into(),
                    });
                }
                let mut divisor_degrees = vec![0i64; n_rays];
                divisor_degrees[a1] = 1;
                divisor_degrees[a2] = 1;
                for &b in &common {
                    let c = -coeff(b);
                    divisor_degrees[b] = c.to_integer().try_into().expect("small integer");
                }
                let class = CurveClass(
                    self.hyperplane_lift
                        .iter()
                        .map(|coef| {
                            let s: Q = coef
                                .iter()
                                .zip(&divisor_degrees)
                                .map(|(c, r)| c * q(*r))
                                .sum();
                            s.to_integer().try_into().expect("small integer")
                        })
                        .collect(),
                );
                for (a, &r) in divisor_degrees.iter().enumerate() {
                    if crate::toric::pairing(&self.divisor_class(a), &class) != r {
                        return Err(ToricError::ChargeRelationViolation { row: a, coord: 0 });
                    }
                }
                if !class.is_effective() || class.is_zero() {
                    return Err(ToricError::NotMoriAdapted { p: i, q: j, class });
                }
                let weight_p = fp.tangent_weights[pos(a1)].clone();
                let weight_q: Vec<Q> = weight_p.iter().map(|v| -v.clone()).collect();
                let balloon = Balloon {
                    p: i,
                    q: j,
                    class,
                    divisor_degrees,
                    weight_q,
                    weight_p,
                };
                if let Some(divisor) = self.first_relation_failure(&balloon) {
                    return Err(ToricError::BalloonRelationViolated { p: i, q: j, divisor });
                }
                out.push(balloon);
            }
        }
        Ok(out)
    }

    /// First divisor `a` violating `D_a(q) = D_a(p) + ⟨D_a,[pq]⟩ λ_q`.
    pub fn first_relation_failure(&self, b: &Balloon) -> Option<usize> {
        let dp = &self.fixed_points[b.p].divisor_restrictions;
        let dq = &self.fixed_points[b.q].divisor_restrictions;
        (0..self.n_rays()).find(|&a| {
            let r = q(b.divisor_degrees[a]);
            (0..self.dim()).any(|j| dq[a][j] != &dp[a][j] + &r * &b.weight_q[j])
        })
    }
}

fn proportional(a: &[Q], b: &[Q]) -> bool {
    // a ∥ b ⇔ all 2×2 minors vanish.
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

fn check_facets(cones: &[Vec<usize>]) -> Result<(), ToricError> {
    let mut count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for cone in cones {
        for skip in 0..cone.len() {
            let mut facet: Vec<usize> = cone
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &a)| a)
                .collect();
            facet.sort_unstable();
            *count.entry(facet).or_default() += 1;
        }
    }
    for (facet, c) in count {
        if c != 2 {
            return Err(ToricError::DanglingFacet {
                facet: facet.iter().map(|a| a + 1).collect(),
                count: c,
            });
        }
    }
    let distinct: BTreeSet<Vec<usize>> = cones
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    if distinct.len() != cones.len() || cones.iter().any(|c| distinct_len(c) != c.len()) {
        return Err(ToricError::DanglingFacet {
            facet: Vec::new(),
            count: 0,
        });
    }
    Ok(())
}

fn distinct_len(c: &[usize]) -> usize {
    c.iter().collect::<BTreeSet<_>>().len()
}

/// Lift each `H_i` to a combination of the `D_a`: the first divisor whose
/// charge column is the unit vector `e_i`, otherwise a combination of the
/// divisors outside the first cone.
fn hyperplane_lift(charge: &[Vec<i64>], first_cone: &[usize]) -> Result<Vec<Vec<Q>>, ToricError> {
    let m = charge.len();
    let n_rays = charge.first().map_or(0, |r| r.len());
    let column = |a: usize| -> Vec<i64> { charge.iter().map(|r| r[a]).collect() };
    let outside: Vec<usize> = (0..n_rays).filter(|a| !first_cone.contains(a)).collect();
    let block: Matrix = (0..m)
        .map(|i| outside.iter().map(|&a| q(charge[i][a])).collect())
        .collect();
    let block_inv = linalg::inverse(&block);
    (0..m)
        .map(|i| {
            let mut coef = vec![Q::zero(); n_rays];
            let unit: Vec<i64> = (0..m).map(|k| i64::from(k == i)).collect();
            if let Some(a) = (0..n_rays).find(|&a| column(a) == unit) {
                coef[a] = Q::one();
                return Ok(coef);
            }
            let inv = block_inv.as_ref().ok_or(ToricError::NoHyperplaneLift(i))?;
            for (k, &a) in outside.iter().enumerate() {
                coef[a] = inv[k][i].clone();
            }
            Ok(coef)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn p1() -> ToricManifold {
        ToricManifold::new("P1", vec![vec![1], vec![-1]], vec![vec![0], vec![1]], vec![vec![1, 1]])
            .unwrap()
    }

    #[test]
    fn p1_fixed_points_and_balloon() {
        let m = p1();
        assert_eq!((m.dim(), m.picard_rank()), (1, 1));
        let fps = m.fixed_points();
        assert_eq!(fps[0].tangent_weights, vec![vec![q(1)]]);
        assert_eq!(fps[0].divisor_restrictions, vec![vec![q(1)], vec![q(0)]]);
        assert_eq!(fps[1].divisor_restrictions, vec![vec![q(0)], vec![q(-1)]]);
        let b = &m.balloons()[0];
        assert_eq!(b.class, CurveClass(vec![1]));
        assert_eq!(b.weight_p, vec![q(1)]);
        assert_eq!(m.balloons().len(), 1);
    }

    #[test]
    fn p2_dual_basis_at_cone_23() {
        let m = builtin::manifold("P2").unwrap();
        let fp = m.fixed_points().iter().find(|f| f.cone == vec![1, 2]).unwrap();
        assert_eq!(fp.tangent_weights, vec![vec![q(-1), q(1)], vec![q(-1), q(0)]]);
        assert_eq!(fp.divisor_restrictions[0], vec![q(0), q(0)]);
        assert_eq!(m.balloons().len(), 3);
        assert!(m.balloons().iter().all(|b| b.class == CurveClass(vec![1])));
    }

    #[test]
    fn p1xp1_structure() {
        let m = builtin::manifold("P1xP1").unwrap();
        assert_eq!(m.fixed_points().len(), 4);
        for fp in m.fixed_points() {
            let nonzero = fp
                .divisor_restrictions
                .iter()
                .filter(|v| v.iter().any(|c| !c.is_zero()))
                .count();
            assert_eq!(nonzero, 2);
        }
        let mut classes: Vec<CurveClass> = m.balloons().iter().map(|b| b.class.clone()).collect();
        classes.sort();
        assert_eq!(
            classes,
            vec![
                CurveClass(vec![0, 1]),
                CurveClass(vec![0, 1]),
                CurveClass(vec![1, 0]),
                CurveClass(vec![1, 0])
            ]
        );
    }

    #[test]
    fn malformed_fans_are_rejected() {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -1]];
        let err = ToricManifold::new(
            "bad",
            rays.clone(),
            vec![vec![0, 1], vec![1, 2]],
            vec![vec![1, 1, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, ToricError::DanglingFacet { .. }), "{err}");

        let err = ToricManifold::new(
            "bad",
            rays.clone(),
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![1, 0]],
            vec![vec![1, 1, 1]],
        )
        .unwrap_err();
        assert_eq!(err, ToricError::Inadmissible(0, 3));

        let err = ToricManifold::new(
            "bad",
            rays,
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![vec![1, 1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, ToricError::ChargeRelationViolation { .. }));

        // Weighted ℙ(1,1,2): rays (1,0),(0,1),(-1,-2) has a det-2 cone.
        let err = ToricManifold::new(
            "P112",
            vec![vec![1, 0], vec![0, 1], vec![-1, -2]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![vec![1, 2, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, ToricError::NonSmoothCone { .. }), "{err}");
    }

    #[test]
    fn degree_enumeration() {
        assert_eq!(
            enumerate_degrees(1, 3),
            vec![CurveClass(vec![1]), CurveClass(vec![2]), CurveClass(vec![3])]
        );
        assert_eq!(
            enumerate_degrees(2, 2),
            vec![
                CurveClass(vec![1, 0]),
                CurveClass(vec![0, 1]),
                CurveClass(vec![2, 0]),
                CurveClass(vec![1, 1]),
                CurveClass(vec![0, 2])
            ]
        );
        assert!(enumerate_degrees(3, 0).is_empty());
    }

    #[test]
    fn pairings() {
        assert_eq!(pairing(&[1], &CurveClass(vec![3])), 3);
        let p2 = builtin::manifold("P2").unwrap();
        for a in 0..3 {
            assert_eq!(pairing(&p2.divisor_class(a), &CurveClass(vec![1])), 1);
        }
        assert_eq!(pairing(&[1, 3, 0], &CurveClass(vec![0, 1, 0])), 3);
    }

    #[test]
    fn every_builtin_satisfies_balloon_relation() {
        for name in builtin::MANIFOLDS {
            let m = builtin::manifold(name).unwrap();
            for b in m.balloons() {
                assert_eq!(m.first_relation_failure(b), None);
                assert_eq!(m.first_relation_failure(&b.reversed()), None);
                assert!(b.class.0.iter().all(|&c| c >= 0));
            }
            // dual basis property
            for fp in m.fixed_points() {
                for (i, w) in fp.tangent_weights.iter().enumerate() {
                    for (j, &a) in fp.cone.iter().enumerate() {
                        let v: Vec<Q> = m.rays()[a].iter().map(|&x| q(x)).collect();
                        let expect = if i == j { Q::one() } else { Q::zero() };
                        assert_eq!(linalg::dot(w, &v), expect);
                    }
                }
            }
        }
    }
}
