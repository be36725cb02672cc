//! Genus-zero characteristic numbers of split bundles over smooth toric
//! manifolds, computed from hypergeometric Euler data by mirror
//! transformations, together with independent localization oracles.

pub mod builtin;
pub mod cache;
pub mod equivariant;
pub mod euler_data;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod mirror;
pub mod oracle;
pub mod rational;
pub mod results;
pub mod selfcheck;
pub mod series;
pub mod toric;
