//! Result documents: invariant tables (CSV and JSON), mirror data, fixed
//! points and series dumps. Rationals are written as decimal strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::euler_data::{BundleSpec, MirrorCase};
use crate::euler_data::formal::MPoly;
use crate::invariants::InvariantTable;
use crate::io::ManifoldFile;
use crate::mirror::{HGSeries, LogSign, MirrorData, Normalization};
use crate::rational::{RationalRepr, Q};
use crate::toric::{CurveClass, ToricManifold};

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

fn r(v: &Q) -> RationalRepr {
    RationalRepr::from(v)
}

/// Content hash of everything that determines a run's numbers.
pub fn input_hash(m: &ToricManifold, spec: &BundleSpec, d_max: u32, lambda0: &[Q], order: i32) -> String {
    let mut h = Sha256::new();
    h.update(ManifoldFile::from_manifold(m).to_canonical_string());
    h.update(serde_json::to_string(spec).expect("bundle serializes"));
    h.update(format!("d_max={d_max};order={order};lambda="));
    for l in lambda0 {
        h.update(format!("{l},"));
    }
    h.update(format!("version={CODE_VERSION}"));
    hex::encode(h.finalize())
}

/// Hash of a free-form description, for oracle runs.
pub fn text_hash(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text);
    h.update(format!("version={CODE_VERSION}"));
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConventions {
    /// Sign of the `log F₀` term in the gauge exponent.
    pub log_sign: Option<LogSign>,
    /// `x^s` coefficient read off in `∫ A_d`.
    pub x_power: i64,
    /// Fiber weights used for concave `H¹`.
    pub concave_h1: String,
}

impl SignConventions {
    pub fn pipeline(log_sign: LogSign, s: i64) -> Self {
        SignConventions {
            log_sign: Some(log_sign),
            x_power: s,
            concave_h1: CONCAVE_H1.to_string(),
        }
    }

    pub fn oracle(x_power: i64) -> Self {
        SignConventions {
            log_sign: None,
            x_power,
            concave_h1: CONCAVE_H1.to_string(),
        }
    }
}

pub const CONCAVE_H1: &str = "-(a*l_i + b*l_j), a,b >= 1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultMeta {
    pub manifold: String,
    pub rank: usize,
    pub d_max: u32,
    pub lambda0: Vec<RationalRepr>,
    pub case: Option<MirrorCase>,
    pub conventions: SignConventions,
    pub input_hash: String,
    pub oracle: bool,
    pub code_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub degree: Vec<i64>,
    pub k: RationalRepr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<RationalRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub metadata: ResultMeta,
    pub rows: Vec<ResultRow>,
    /// Degrees whose `n_d` is not integral.
    #[serde(default)]
    pub non_integral: Vec<Vec<i64>>,
}

impl ResultDoc {
    pub fn from_table(manifold: &str, table: &InvariantTable, input_hash: String) -> Self {
        let mut rows = Vec::new();
        let mut degrees: Vec<&CurveClass> = table.k.keys().filter(|d| !d.is_zero()).collect();
        degrees.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
        for d in degrees {
            rows.push(ResultRow {
                degree: d.0.clone(),
                k: r(&table.k[d]),
                n: table.n.as_ref().and_then(|n| n.get(d)).map(r),
            });
        }
        ResultDoc {
            metadata: ResultMeta {
                manifold: manifold.to_string(),
                rank: table.rank,
                d_max: table.d_max,
                lambda0: table.lambda0.iter().map(r).collect(),
                case: Some(table.case),
                conventions: SignConventions::pipeline(table.log_sign, table.s),
                input_hash,
                oracle: false,
                code_version: CODE_VERSION.to_string(),
            },
            rows,
            non_integral: table.non_integral().into_iter().map(|d| d.0).collect(),
        }
    }

    /// Values keyed by degree, for comparisons.
    pub fn k_values(&self) -> BTreeMap<Vec<i64>, Q> {
        self.rows
            .iter()
            .filter_map(|row| Some((row.degree.clone(), row.k.to_q()?)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// `d₁..d_m, K_num, K_den, n_num, n_den`; `n` cells are empty when absent.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.metadata.rank)
            .map(|i| format!("d{i}"))
            .chain(["K_num", "K_den", "n_num", "n_den"].map(String::from))
            .collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut cells: Vec<String> = row.degree.iter().map(|v| v.to_string()).collect();
            cells.push(row.k.num.clone());
            cells.push(row.k.den.clone());
            match &row.n {
                Some(n) => {
                    cells.push(n.num.clone());
                    cells.push(n.den.clone());
                }
                None => cells.extend([String::new(), String::new()]),
            }
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorDataRow {
    pub degree: Vec<i64>,
    /// Coefficient of `q^d` in `F₀`.
    pub f0: RationalRepr,
    /// Coefficients of `q^d` in `F_1..F_m`.
    pub f: Vec<RationalRepr>,
    /// Coefficient of `q^d` in `G = G_x·x + G_ε·ε`.
    pub g_x: RationalRepr,
    pub g_eps: RationalRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorDataDoc {
    pub manifold: String,
    pub case: MirrorCase,
    pub normalization: Normalization,
    pub log_sign: LogSign,
    pub d_max: u32,
    pub rows: Vec<MirrorDataRow>,
}

impl MirrorDataDoc {
    pub fn new(manifold: &str, md: &MirrorData, degrees: &[CurveClass]) -> Self {
        let zero = Q::from_integer(0.into());
        let f0 = md.f0();
        let f = md.f();
        let rows = degrees
            .iter()
            .filter(|d| !d.is_zero())
            .map(|d| MirrorDataRow {
                degree: d.0.clone(),
                f0: r(&f0.coeff(d)),
                f: f.iter().map(|fi| r(&fi.coeff(d))).collect(),
                g_x: r(md.psi_x.get(d).unwrap_or(&zero)),
                g_eps: r(md.psi_eps.get(d).unwrap_or(&zero)),
            })
            .collect();
        MirrorDataDoc {
            manifold: manifold.to_string(),
            case: md.case,
            normalization: md.normalization,
            log_sign: md.log_sign,
            d_max: md.d_max,
            rows,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("mirror data serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointRow {
    pub index: usize,
    /// 1-based ray indices.
    pub cone: Vec<usize>,
    pub tangent_weights: Vec<Vec<RationalRepr>>,
    pub hyperplane_restrictions: Vec<Vec<RationalRepr>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalloonRow {
    pub p: usize,
    pub q: usize,
    pub class: Vec<i64>,
    pub weight_q: Vec<RationalRepr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointDoc {
    pub manifold: String,
    pub points: Vec<FixedPointRow>,
    pub balloons: Vec<BalloonRow>,
}

fn vecs(vs: &[Vec<Q>]) -> Vec<Vec<RationalRepr>> {
    vs.iter().map(|v| v.iter().map(r).collect()).collect()
}

impl FixedPointDoc {
    pub fn new(m: &ToricManifold) -> Self {
        FixedPointDoc {
            manifold: m.name().to_string(),
            points: m
                .fixed_points()
                .iter()
                .enumerate()
                .map(|(i, fp)| FixedPointRow {
                    index: i,
                    cone: fp.cone.iter().map(|a| a + 1).collect(),
                    tangent_weights: vecs(&fp.tangent_weights),
                    hyperplane_restrictions: vecs(&fp.hyperplane_restrictions),
                })
                .collect(),
            balloons: m
                .balloons()
                .iter()
                .map(|b| BalloonRow {
                    p: b.p,
                    q: b.q,
                    class: b.class.0.clone(),
                    weight_q: b.weight_q.iter().map(r).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fixed points serialize");
        s.push('\n');
        s
    }
}

/// One series coefficient: `c·α^{alpha}·x^{x}·ε^{eps}` at a fixed point, or
/// `c·α^{alpha}·H^{h}·x^{x}` for formal expansions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTerm {
    pub degree: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
    pub alpha: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<u32>>,
    pub x: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<i32>,
    pub c: RationalRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    Localized,
    Formal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub manifold: String,
    pub kind: SeriesKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    pub d_max: u32,
    pub order: i32,
    pub terms: Vec<SeriesTerm>,
}

impl SeriesDoc {
    pub fn localized(manifold: &str, hg: &HGSeries) -> Self {
        let mut terms = Vec::new();
        for d in &hg.degrees {
            for (p, series) in hg.points.iter().enumerate() {
                for (a, c) in series.coeff(d).terms() {
                    for (x, e, v) in c.terms() {
                        terms.push(SeriesTerm {
                            degree: d.0.clone(),
                            point: Some(p),
                            alpha: a,
                            h: None,
                            x,
                            eps: Some(e),
                            c: r(v),
                        });
                    }
                }
            }
        }
        SeriesDoc {
            manifold: manifold.to_string(),
            kind: SeriesKind::Localized,
            normalization: Some(hg.normalization),
            d_max: hg.d_max,
            order: hg.order,
            terms,
        }
    }

    pub fn formal(manifold: &str, d_max: u32, order: i32, expansions: &[(CurveClass, Vec<(i32, MPoly)>)]) -> Self {
        let mut terms = Vec::new();
        for (d, exp) in expansions {
            for (a, poly) in exp {
                for (e, v) in poly.terms() {
                    let (h, x) = e.split_at(e.len() - 1);
                    terms.push(SeriesTerm {
                        degree: d.0.clone(),
                        point: None,
                        alpha: *a,
                        h: Some(h.to_vec()),
                        x: x[0] as i32,
                        eps: None,
                        c: r(v),
                    });
                }
            }
        }
        SeriesDoc {
            manifold: manifold.to_string(),
            kind: SeriesKind::Formal,
            normalization: None,
            d_max,
            order,
            terms,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("series serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::invariants::invariants_default;

    #[test]
    fn csv_and_json_agree() {
        let m = builtin::manifold("P4").unwrap();
        let spec = builtin::bundle("quintic").unwrap();
        let run = invariants_default(&m, &spec, 2).unwrap();
        let doc = ResultDoc::from_table("P4", &run.table, "h".into());
        assert_eq!(
            doc.to_csv(),
            "d1,K_num,K_den,n_num,n_den\n1,2875,1,2875,1\n2,4876875,8,609250,1\n"
        );
        let back = ResultDoc::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.k_values()[&vec![2]], crate::rational::q_frac(4876875, 8));
    }

    #[test]
    fn hash_tracks_inputs() {
        let m = builtin::manifold("P4").unwrap();
        let spec = builtin::bundle("quintic").unwrap();
        let l = vec![Q::from_integer(1.into()); 4];
        let a = input_hash(&m, &spec, 2, &l, 8);
        assert_eq!(a, input_hash(&m, &spec, 2, &l, 8));
        assert_ne!(a, input_hash(&m, &spec, 3, &l, 8));
        assert_ne!(a, input_hash(&m, &spec, 2, &l, 9));
    }

    #[test]
    fn quintic_mirror_dump() {
        let m = builtin::manifold("P4").unwrap();
        let spec = builtin::bundle("quintic").unwrap();
        let run = invariants_default(&m, &spec, 2).unwrap();
        let doc = MirrorDataDoc::new("P4", &run.mirror_data, &run.aseries.degrees);
        assert_eq!(doc.rows[0].f0, RationalRepr { num: "120".into(), den: "1".into() });
        assert_eq!(doc.rows[0].f[0], RationalRepr { num: "770".into(), den: "1".into() });
        assert_eq!(doc.rows[1].f0.num, "113400");
    }
}
