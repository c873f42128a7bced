//! Exact inverse-CDF sampling over a finite set of nonnegative weights.

use thiserror::Error;

use crate::grid::Grid2D;
use crate::rng::Rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplingError {
    #[error("weights have zero total mass")]
    ZeroMass,
    #[error("weight {0} is negative or not finite")]
    BadWeight(usize),
}

#[derive(Debug, Clone)]
pub struct DiscreteSampler {
    cdf: Vec<f64>,
}

impl DiscreteSampler {
    pub fn new(weights: &[f64]) -> Result<Self, SamplingError> {
        let mut cdf = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(SamplingError::BadWeight(i));
            }
            acc += w;
            cdf.push(acc);
        }
        if !(acc > 0.0) {
            return Err(SamplingError::ZeroMass);
        }
        Ok(Self { cdf })
    }

    pub fn total(&self) -> f64 {
        *self.cdf.last().expect("nonempty by construction")
    }

    /// One draw: the first index whose cumulative weight exceeds `u·total`.
    pub fn sample(&self, rng: &mut Rng) -> usize {
        let u = rng.next_f64() * self.total();
        let i = self.cdf.partition_point(|&c| c <= u);
        // zero-weight tail entries share the last cumulative value
        i.min(self.cdf.len() - 1)
    }
}

/// Draws `n` continuous positions from a density grid: a cell by inverse CDF,
/// then a uniform offset inside it. Coordinates are in cell units.
pub fn sample_grid_positions(
    density: &Grid2D,
    n: usize,
    rng: &mut Rng,
) -> Result<Vec<(f64, f64)>, SamplingError> {
    let sampler = DiscreteSampler::new(density.values())?;
    let w = density.width();
    Ok((0..n)
        .map(|_| {
            let cell = sampler.sample(rng);
            let (cx, cy) = ((cell % w) as f64, (cell / w) as f64);
            (cx + rng.next_f64(), cy + rng.next_f64())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_are_never_drawn() {
        let s = DiscreteSampler::new(&[0.0, 1.0, 0.0, 2.0, 0.0]).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..10_000 {
            let i = s.sample(&mut rng);
            assert!(i == 1 || i == 3, "drew {i}");
        }
    }

    #[test]
    fn rejects_bad_weights() {
        assert_eq!(DiscreteSampler::new(&[]).unwrap_err(), SamplingError::ZeroMass);
        assert_eq!(DiscreteSampler::new(&[0.0, 0.0]).unwrap_err(), SamplingError::ZeroMass);
        assert_eq!(
            DiscreteSampler::new(&[1.0, -1.0]).unwrap_err(),
            SamplingError::BadWeight(1)
        );
    }
}
