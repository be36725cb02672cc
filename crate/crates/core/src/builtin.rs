//! The shipped example library.

use serde::Deserialize;

use crate::euler_data::BundleSpec;
use crate::io::{ManifoldFile, SpecError};
use crate::toric::ToricManifold;

pub const MANIFOLDS: [&str; 6] = ["P1", "P2", "P3", "P4", "P1xP1", "P1xP2xP2"];

pub const BUNDLES: [&str; 9] = [
    "conifold",
    "quintic",
    "local_P2",
    "local_P1xP1",
    "ci_P1xP2xP2",
    "cubic_P2",
    "quartic_P3",
    "local_P1_O-2",
    "weighted_P321_O-6",
];

pub fn manifold_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "P1" => include_str!("../data/manifolds/P1.json"),
        "P2" => include_str!("../data/manifolds/P2.json"),
        "P3" => include_str!("../data/manifolds/P3.json"),
        "P4" => include_str!("../data/manifolds/P4.json"),
        "P1xP1" => include_str!("../data/manifolds/P1xP1.json"),
        "P1xP2xP2" => include_str!("../data/manifolds/P1xP2xP2.json"),
        _ => return None,
    })
}

pub fn bundle_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "conifold" => include_str!("../data/bundles/conifold.json"),
        "quintic" => include_str!("../data/bundles/quintic.json"),
        "local_P2" => include_str!("../data/bundles/local_P2.json"),
        "local_P1xP1" => include_str!("../data/bundles/local_P1xP1.json"),
        "ci_P1xP2xP2" => include_str!("../data/bundles/ci_P1xP2xP2.json"),
        "cubic_P2" => include_str!("../data/bundles/cubic_P2.json"),
        "quartic_P3" => include_str!("../data/bundles/quartic_P3.json"),
        "local_P1_O-2" => include_str!("../data/bundles/local_P1_O-2.json"),
        "weighted_P321_O-6" => include_str!("../data/bundles/weighted_P321_O-6.json"),
        _ => return None,
    })
}

pub fn manifold(name: &str) -> Result<ToricManifold, SpecError> {
    let text = manifold_text(name).ok_or_else(|| unknown(name))?;
    ManifoldFile::parse(text)?.build()
}

pub fn bundle(name: &str) -> Result<BundleSpec, SpecError> {
    let text = bundle_text(name).ok_or_else(|| unknown(name))?;
    Ok(serde_json::from_str(text)?)
}

fn unknown(name: &str) -> SpecError {
    SpecError::Io {
        path: name.to_string(),
        source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such built-in"),
    }
}

/// A named manifold/bundle pair with its default truncation.
#[derive(Clone, Debug, Deserialize)]
pub struct Example {
    pub name: String,
    pub manifold: String,
    pub bundle: String,
    pub d_max: u32,
}

pub fn examples() -> Vec<Example> {
    serde_json::from_str(include_str!("../data/examples.json")).expect("bundled example index")
}

pub fn example(name: &str) -> Option<Example> {
    examples().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn everything_loads() {
        for m in MANIFOLDS {
            manifold(m).unwrap();
        }
        for b in BUNDLES {
            bundle(b).unwrap();
        }
        for e in examples() {
            manifold(&e.manifold).unwrap();
            bundle(&e.bundle).unwrap();
        }
        assert!(manifold("P7").is_err());
    }
}
