//! 2-D gradient noise, fractal Brownian motion and domain warping.
//!
//! Gradients come from a fixed set of eight directions so the noise is
//! bit-reproducible; only the permutation table depends on the seed.

use thiserror::Error;

use crate::grid::{Grid2D, GridError};
use crate::rng::Rng;

const DIAG: f64 = std::f64::consts::FRAC_1_SQRT_2;

const GRADIENTS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (DIAG, DIAG),
    (-DIAG, DIAG),
    (DIAG, -DIAG),
    (-DIAG, -DIAG),
];

/// Offsets that decorrelate the two warp components.
const WARP_OFFSET_X: f64 = 17.31;
const WARP_OFFSET_Y: f64 = -9.77;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("bad fBM parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoiseTable {
    perm: [u8; 512],
}

impl NoiseTable {
    /// Fisher-Yates shuffle of `0..=255` driven by the seeded stream, doubled
    /// so lattice hashing never needs a modulo on the second lookup.
    pub fn new(seed: u64) -> Self {
        let mut rng = Rng::new(seed);
        let mut p: [u8; 256] = std::array::from_fn(|i| i as u8);
        rng.shuffle(&mut p);
        let mut perm = [0u8; 512];
        perm[..256].copy_from_slice(&p);
        perm[256..].copy_from_slice(&p);
        Self { perm }
    }

    pub fn permutation(&self) -> &[u8] {
        &self.perm[..256]
    }

    #[inline]
    fn gradient(&self, ix: i64, iy: i64) -> (f64, f64) {
        let xi = (ix & 255) as usize;
        let yi = (iy & 255) as usize;
        let h = self.perm[self.perm[xi] as usize + yi];
        GRADIENTS[(h & 7) as usize]
    }
}

#[inline]
fn fade(t: f64) -> f64 {
    t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
}

/// Classic gradient noise with quintic fade. Zero at every integer lattice
/// point; bounded by `[-1, 1]`.
pub fn perlin2(x: f64, y: f64, table: &NoiseTable) -> f64 {
    let x0 = x.floor();
    let y0 = y.floor();
    let (fx, fy) = (x - x0, y - y0);
    let (ix, iy) = (x0 as i64, y0 as i64);
    let dot = |gx: i64, gy: i64, dx: f64, dy: f64| {
        let g = table.gradient(gx, gy);
        g.0 * dx + g.1 * dy
    };
    let n00 = dot(ix, iy, fx, fy);
    let n10 = dot(ix + 1, iy, fx - 1.0, fy);
    let n01 = dot(ix, iy + 1, fx, fy - 1.0);
    let n11 = dot(ix + 1, iy + 1, fx - 1.0, fy - 1.0);
    let u = fade(fx);
    let v = fade(fy);
    let a = n00 + u * (n10 - n00);
    let b = n01 + u * (n11 - n01);
    a + v * (b - a)
}

/// Octave parameters for [`fbm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fbm {
    pub octaves: u32,
    pub lacunarity: f64,
    pub gain: f64,
}

impl Default for Fbm {
    fn default() -> Self {
        Self {
            octaves: 5,
            lacunarity: 2.0,
            gain: 0.5,
        }
    }
}

impl Fbm {
    pub fn validate(&self) -> Result<(), NoiseError> {
        if self.octaves == 0 {
            return Err(NoiseError::BadParams("octaves must be at least 1".into()));
        }
        if !(self.lacunarity.is_finite() && self.lacunarity > 1.0) {
            return Err(NoiseError::BadParams(format!(
                "lacunarity must be > 1, got {}",
                self.lacunarity
            )));
        }
        if !(self.gain > 0.0 && self.gain < 1.0) {
            return Err(NoiseError::BadParams(format!(
                "gain must be in (0, 1), got {}",
                self.gain
            )));
        }
        Ok(())
    }

    /// `Σ gain^i`, the bound on `|fbm|`.
    pub fn amplitude_bound(&self) -> f64 {
        let mut amp = 1.0;
        let mut total = 0.0;
        for _ in 0..self.octaves {
            total += amp;
            amp *= self.gain;
        }
        total
    }

    fn sample(&self, x: f64, y: f64, table: &NoiseTable) -> f64 {
        let mut sum = 0.0;
        let mut amp = 1.0;
        let mut freq = 1.0;
        for _ in 0..self.octaves {
            sum += amp * perlin2(x * freq, y * freq, table);
            amp *= self.gain;
            freq *= self.lacunarity;
        }
        sum
    }
}

/// Sum of `octaves` Perlin layers, not renormalized.
pub fn fbm(x: f64, y: f64, params: Fbm, table: &NoiseTable) -> Result<f64, NoiseError> {
    params.validate()?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(NoiseError::BadParams("non-finite coordinate".into()));
    }
    Ok(params.sample(x, y, table))
}

/// Samples fBM on a `width`×`height` grid at `(x/scale, y/scale)`.
pub fn fbm_field(
    width: usize,
    height: usize,
    scale: f64,
    params: Fbm,
    seed: u64,
) -> Result<Grid2D, NoiseError> {
    params.validate()?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(NoiseError::BadParams(format!("scale must be > 0, got {scale}")));
    }
    let table = NoiseTable::new(seed);
    Ok(Grid2D::from_fn(width, height, |x, y| {
        params.sample(x as f64 / scale, y as f64 / scale, &table)
    })?)
}

/// Displaces `(x, y)` by `amp` times two decorrelated noise samples.
pub fn domain_warp(x: f64, y: f64, amp: f64, table: &NoiseTable) -> (f64, f64) {
    if amp == 0.0 {
        return (x, y);
    }
    (
        x + amp * perlin2(x + WARP_OFFSET_X, y, table),
        y + amp * perlin2(x, y + WARP_OFFSET_Y, table),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_a_permutation() {
        let t = NoiseTable::new(77);
        let mut seen = [false; 256];
        for &p in t.permutation() {
            seen[p as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn lattice_points_are_zero() {
        let t = NoiseTable::new(1);
        for i in -16..=16 {
            for j in -16..=16 {
                assert_eq!(perlin2(i as f64, j as f64, &t), 0.0);
            }
        }
        assert_eq!(perlin2(3.0, 7.0, &t), 0.0);
    }

    #[test]
    fn single_octave_matches_perlin() {
        let t = NoiseTable::new(2);
        let p = Fbm {
            octaves: 1,
            ..Fbm::default()
        };
        for &(x, y) in &[(0.3, 0.7), (12.25, -3.5), (-7.1, 99.9)] {
            assert_eq!(fbm(x, y, p, &t).unwrap(), perlin2(x, y, &t));
        }
    }

    #[test]
    fn lattice_with_integer_lacunarity_is_zero() {
        let t = NoiseTable::new(3);
        for oct in 1..8 {
            let p = Fbm {
                octaves: oct,
                lacunarity: 3.0,
                gain: 0.6,
            };
            assert_eq!(fbm(5.0, -2.0, p, &t).unwrap(), 0.0);
        }
    }

    #[test]
    fn bad_params_rejected() {
        let t = NoiseTable::new(0);
        let bad = [
            Fbm { octaves: 0, ..Fbm::default() },
            Fbm { lacunarity: 1.0, ..Fbm::default() },
            Fbm { gain: 0.0, ..Fbm::default() },
            Fbm { gain: 1.0, ..Fbm::default() },
        ];
        for p in bad {
            assert!(matches!(fbm(0.5, 0.5, p, &t), Err(NoiseError::BadParams(_))));
        }
        assert!(fbm_field(4, 4, 0.0, Fbm::default(), 1).is_err());
    }

    #[test]
    fn warp_zero_amp_is_identity() {
        let t = NoiseTable::new(4);
        assert_eq!(domain_warp(1.234, -5.5, 0.0, &t), (1.234, -5.5));
    }
}
