use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{lr_coeffs, zero_weight_dim, DominantWeight, FusionResult};
use crate::{Error, Result};

/// Memoised access to the fusion rules of one rank.
///
/// Lookups take a shared read lock; misses compute outside the lock and insert under the
/// write lock, so results are identical to the uncached functions.
#[derive(Debug)]
pub struct FusionRing {
    rank: usize,
    products: RwLock<HashMap<(DominantWeight, DominantWeight), Arc<FusionResult>>>,
}

impl FusionRing {
    pub fn new(rank: usize) -> Result<Self> {
        if rank < 2 {
            return Err(Error::domain(format!("rank must be at least 2, got {rank}")));
        }
        Ok(Self {
            rank,
            products: RwLock::new(HashMap::new()),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn check(&self, w: &DominantWeight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: w.rank(),
            });
        }
        Ok(())
    }

    pub fn product(&self, lam: &DominantWeight, mu: &DominantWeight) -> Result<Arc<FusionResult>> {
        self.check(lam)?;
        self.check(mu)?;
        // The product is commutative, so store one orientation.
        let key = if lam <= mu {
            (lam.clone(), mu.clone())
        } else {
            (mu.clone(), lam.clone())
        };
        if let Some(hit) = self.products.read().expect("fusion cache poisoned").get(&key) {
            return Ok(Arc::clone(hit));
        }
        let computed = Arc::new(lr_coeffs(&key.0, &key.1)?);
        let mut guard = self.products.write().expect("fusion cache poisoned");
        Ok(Arc::clone(guard.entry(key).or_insert(computed)))
    }

    /// `N^nu_{lam, mu}`.
    pub fn coefficient(&self, lam: &DominantWeight, mu: &DominantWeight, nu: &DominantWeight) -> Result<u64> {
        Ok(self.product(lam, mu)?.multiplicity(nu))
    }

    pub fn mult_in_self_tensor(&self, u: &DominantWeight, v: &DominantWeight) -> Result<u64> {
        self.coefficient(u, v, u)
    }

    pub fn zero_weight_dim(&self, v: &DominantWeight) -> Result<u64> {
        self.check(v)?;
        Ok(zero_weight_dim(v))
    }

    pub fn cached_products(&self) -> usize {
        self.products.read().expect("fusion cache poisoned").len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ball;
    use rayon::prelude::*;

    #[test]
    fn cache_matches_uncached() {
        let ring = FusionRing::new(3).unwrap();
        let weights = ball(3, 3);
        let pairs: Vec<_> = weights
            .iter()
            .flat_map(|a| weights.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        pairs.par_iter().for_each(|(a, b)| {
            let cached = ring.product(a, b).unwrap();
            assert_eq!(*cached, lr_coeffs(a, b).unwrap());
        });
        let n = weights.len();
        assert_eq!(ring.cached_products(), n * (n + 1) / 2);
    }

    #[test]
    fn rejects_other_ranks() {
        let ring = FusionRing::new(3).unwrap();
        assert!(ring.product(&DominantWeight::spin(1), &DominantWeight::spin(1)).is_err());
        assert!(FusionRing::new(1).is_err());
    }
}
