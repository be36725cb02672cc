use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::scalar::ScalarPoly;
use super::EquivError;
use crate::linalg::{self, Matrix};
use crate::rational::{q, Q};
use crate::toric::ToricManifold;

/// Seed used for the cross-check sample.
pub const ALTERNATE_SEED: u64 = 0x5eed_0001;

/// A generic point `λ₀ ∈ ℚⁿ` at which torus weights are evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSample {
    lambda: Vec<Q>,
}

impl WeightSample {
    pub fn new(lambda: Vec<Q>) -> Self {
        WeightSample { lambda }
    }

    pub fn from_ints(lambda: &[i64]) -> Self {
        WeightSample::new(lambda.iter().map(|&v| q(v)).collect())
    }

    /// The canonical sample: `λ_i = (i+1)² + k(i+1)³` for the first `k`
    /// that is generic, e.g. `(1, 4)` on ℙ².
    pub fn default_for(m: &ToricManifold) -> Result<Self, EquivError> {
        let n = m.dim() as i64;
        for k in 0..64 {
            let s = WeightSample::from_ints(
                &(1..=n).map(|i| i * i + k * i * i * i).collect::<Vec<_>>(),
            );
            if s.validate(m).is_ok() {
                return Ok(s);
            }
        }
        WeightSample::from_seed(m, 0)
    }

    /// An independent sample for λ-independence checks.
    pub fn alternate_for(m: &ToricManifold) -> Result<Self, EquivError> {
        WeightSample::from_seed(m, ALTERNATE_SEED)
    }

    /// Deterministic pseudo-random integer sample, redrawn until generic.
    pub fn from_seed(m: &ToricManifold, seed: u64) -> Result<Self, EquivError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let v: Vec<i64> = (0..m.dim())
                .map(|_| {
                    let x: i64 = rng.gen_range(1..=97);
                    if rng.gen_bool(0.5) {
                        x
                    } else {
                        -x
                    }
                })
                .collect();
            let s = WeightSample::from_ints(&v);
            if s.validate(m).is_ok() {
                return Ok(s);
            }
        }
        Err(EquivError::DegenerateSample(format!(
            "no generic sample found from seed {seed}"
        )))
    }

    pub fn lambda(&self) -> &[Q] {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    /// `⟨w, λ₀⟩`.
    pub fn pair(&self, w: &[Q]) -> Q {
        linalg::dot(w, &self.lambda)
    }

    /// `⟨w, λ₀⟩·ε`.
    pub fn weight(&self, w: &[Q]) -> ScalarPoly {
        ScalarPoly::monomial(self.pair(w), 0, 1)
    }

    /// Genericity: nonzero fixed-point Euler classes, distinct nonzero
    /// values on distinct tangent weights, and enough independent
    /// hyperplane restrictions to separate `H_1, …, H_m` and constants.
    pub fn validate(&self, m: &ToricManifold) -> Result<(), EquivError> {
        if self.lambda.len() != m.dim() {
            return Err(EquivError::DegenerateSample(format!(
                "sample has {} entries, manifold dimension is {}",
                self.lambda.len(),
                m.dim()
            )));
        }
        let mut weights: BTreeSet<Vec<Q>> = BTreeSet::new();
        for fp in m.fixed_points() {
            for w in &fp.tangent_weights {
                weights.insert(w.clone());
            }
        }
        let mut values = BTreeSet::new();
        for w in &weights {
            let v = self.pair(w);
            if v.is_zero() {
                return Err(EquivError::DegenerateSample(format!(
                    "tangent weight {w:?} vanishes"
                )));
            }
            if !values.insert(v) {
                return Err(EquivError::DegenerateSample(format!(
                    "tangent weight {w:?} collides with another weight"
                )));
            }
        }
        let rows: Matrix = m
            .fixed_points()
            .iter()
            .map(|fp| {
                let mut r: Vec<Q> = fp.hyperplane_restrictions.iter().map(|h| self.pair(h)).collect();
                r.push(Q::one());
                r
            })
            .collect();
        let zero = vec![Q::zero(); rows.len()];
        match linalg::solve_unique(&rows, &zero) {
            Ok(_) => Ok(()),
            Err(rank) => Err(EquivError::DegenerateSample(format!(
                "hyperplane restrictions have rank {rank} < {}",
                m.picard_rank() + 1
            ))),
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.lambda.iter().map(crate::rational::fmt_q).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    #[test]
    fn canonical_samples() {
        let p2 = builtin::manifold("P2").unwrap();
        assert_eq!(WeightSample::default_for(&p2).unwrap(), WeightSample::from_ints(&[1, 4]));
        let p1 = builtin::manifold("P1").unwrap();
        assert_eq!(WeightSample::default_for(&p1).unwrap(), WeightSample::from_ints(&[1]));
        for name in builtin::MANIFOLDS {
            let m = builtin::manifold(name).unwrap();
            let a = WeightSample::default_for(&m).unwrap();
            let b = WeightSample::alternate_for(&m).unwrap();
            assert_ne!(a, b);
            b.validate(&m).unwrap();
        }
    }

    #[test]
    fn degenerate_sample_rejected() {
        let p2 = builtin::manifold("P2").unwrap();
        assert!(WeightSample::from_ints(&[1, 1]).validate(&p2).is_err());
        assert!(WeightSample::from_ints(&[0, 3]).validate(&p2).is_err());
        assert!(WeightSample::from_ints(&[1]).validate(&p2).is_err());
    }

    #[test]
    fn seeded_samples_reproducible() {
        let p2 = builtin::manifold("P2").unwrap();
        assert_eq!(
            WeightSample::from_seed(&p2, 7).unwrap(),
            WeightSample::from_seed(&p2, 7).unwrap()
        );
    }
}
