use rand::distr::{weighted::WeightedIndex, Distribution as _};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// A probability vector over basis outcomes `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Tiny negative entries from round-off are clamped to zero; anything
    /// below `-1e-10` or a total off by more than `1e-10` is rejected.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty distribution".into()));
        }
        for p in probs.iter_mut() {
            if *p < -NORM_TOL || !p.is_finite() {
                return Err(Error::InvalidState(format!("invalid probability {p}")));
            }
            *p = p.max(0.0);
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::Unnormalized { sum });
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Outcomes with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|&i| self.probs[i] > tol)
            .collect()
    }

    /// Draws `count` outcomes with a ChaCha8 stream seeded by `seed`.
    pub fn sample(&self, seed: u64, count: usize) -> Result<Vec<usize>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, count)
    }

    pub fn sample_with<R: rand::Rng>(&self, rng: &mut R, count: usize) -> Result<Vec<usize>> {
        let w = WeightedIndex::new(&self.probs)
            .map_err(|e| Error::InvalidState(format!("cannot sample: {e}")))?;
        Ok((0..count).map(|_| w.sample(rng)).collect())
    }
}

/// Samples `count` outcomes from raw probabilities after checking they sum
/// to one.
pub fn sample(probs: &[f64], seed: u64, count: usize) -> Result<Vec<usize>> {
    Distribution::new(probs.to_vec())?.sample(seed, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            Distribution::new(vec![0.5, 0.4]),
            Err(Error::Unnormalized { .. })
        ));
        assert!(Distribution::new(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn sampling_is_reproducible_and_respects_support() {
        let d = Distribution::new(vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        let a = d.sample(7, 200).unwrap();
        assert_eq!(a, d.sample(7, 200).unwrap());
        assert!(a.iter().all(|&x| x == 0 || x == 2));
        assert!(a.contains(&0) && a.contains(&2));
    }
}
