//! Spec files: manifolds and bundles.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::euler_data::BundleSpec;
use crate::toric::{ToricError, ToricManifold};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed spec: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("cone indices are 1-based; found {0}")]
    ZeroIndex(i64),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldFile {
    pub name: String,
    pub rays: Vec<Vec<i64>>,
    /// 1-based ray indices.
    pub cones: Vec<Vec<i64>>,
    pub charge_matrix: Vec<Vec<i64>>,
}

impl ManifoldFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<ToricManifold, SpecError> {
        let cones = self
            .cones
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&a| {
                        if a < 1 {
                            Err(SpecError::ZeroIndex(a))
                        } else {
                            Ok((a - 1) as usize)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ToricManifold::new(
            self.name.clone(),
            self.rays.clone(),
            cones,
            self.charge_matrix.clone(),
        )?)
    }

    pub fn from_manifold(m: &ToricManifold) -> Self {
        ManifoldFile {
            name: m.name().to_string(),
            rays: m.rays().to_vec(),
            cones: m
                .cones()
                .iter()
                .map(|c| c.iter().map(|&a| a as i64 + 1).collect())
                .collect(),
            charge_matrix: m.charge_matrix().to_vec(),
        }
    }

    /// Canonical one-line encoding; reading it back and re-emitting gives
    /// identical bytes.
    pub fn to_canonical_string(&self) -> String {
        format!(
            "{{\"name\": {}, \"rays\": {}, \"cones\": {}, \"charge_matrix\": {}}}\n",
            serde_json::to_string(&self.name).expect("string"),
            int_matrix(&self.rays),
            int_matrix(&self.cones),
            int_matrix(&self.charge_matrix)
        )
    }
}

fn int_matrix(rows: &[Vec<i64>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn read_text(path: &std::path::Path) -> Result<String, SpecError> {
    std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_manifold(path: &std::path::Path) -> Result<ToricManifold, SpecError> {
    ManifoldFile::parse(&read_text(path)?)?.build()
}

pub fn load_bundle(path: &std::path::Path) -> Result<BundleSpec, SpecError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn canonical_round_trip_is_bit_exact() {
        for name in builtin::MANIFOLDS {
            let text = builtin::manifold_text(name).unwrap();
            let file = ManifoldFile::parse(text).unwrap();
            assert_eq!(file.to_canonical_string(), text);
            let m = file.build().unwrap();
            assert_eq!(ManifoldFile::from_manifold(&m).to_canonical_string(), text);
        }
    }

    #[test]
    fn zero_index_rejected() {
        let f = ManifoldFile {
            name: "P1".into(),
            rays: vec![vec![1], vec![-1]],
            cones: vec![vec![0], vec![1]],
            charge_matrix: vec![vec![1, 1]],
        };
        assert!(matches!(f.build(), Err(SpecError::ZeroIndex(0))));
    }

    #[test]
    fn unknown_field_rejected() {
        assert!(ManifoldFile::parse(r#"{"name":"x","rays":[],"cones":[],"charge_matrix":[],"z":1}"#).is_err());
    }
}
