//! Standing-wave plate fields and Boltzmann-weighted particle scattering.
//!
//! The plate amplitude is a superposition of antisymmetric square-plate
//! modes. Particles do not move under any dynamics: they are drawn from
//! `p ∝ exp(-β·|A|)`, which piles them up on the nodal lines.

use crate::draw::for_each_ellipse_pixel;
use crate::grid::Grid2D;
use crate::image::{RasterImage, Rgb};
use crate::math::{cos, exp, PI};
use crate::rng::Rng;
use crate::sampling::DiscreteSampler;

use super::PhysicsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub m: u32,
    pub n: u32,
    pub amp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChladniParams {
    pub modes: Vec<Mode>,
    /// Plate side length.
    pub plate: f64,
    /// Inverse temperature of the particle distribution.
    pub beta: f64,
    pub particles: usize,
    /// Disc radius in pixels used when rendering particles.
    pub splat_radius: f64,
}

impl ChladniParams {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        if self.modes.is_empty() {
            return Err(PhysicsError::BadParams("at least one mode is required".into()));
        }
        if let Some(m) = self.modes.iter().find(|m| m.m == m.n) {
            return Err(PhysicsError::DegenerateMode { m: m.m, n: m.n });
        }
        if !(self.plate.is_finite() && self.plate > 0.0) {
            return Err(PhysicsError::BadParams("plate side must be > 0".into()));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(PhysicsError::BadParams("beta must be > 0".into()));
        }
        if !(self.splat_radius >= 0.0) {
            return Err(PhysicsError::BadParams("splat radius must be >= 0".into()));
        }
        Ok(())
    }
}

/// Evaluates `Σ amp·[cos(mπx/L)cos(nπy/L) − cos(nπx/L)cos(mπy/L)]` with grid
/// cell `i` at `x = i·L/(w−1)`, so both plate edges are sampled.
pub fn chladni_field(
    params: &ChladniParams,
    width: usize,
    height: usize,
) -> Result<Grid2D, PhysicsError> {
    if params.modes.is_empty() {
        return Err(PhysicsError::BadParams("at least one mode is required".into()));
    }
    if let Some(m) = params.modes.iter().find(|m| m.m == m.n) {
        return Err(PhysicsError::DegenerateMode { m: m.m, n: m.n });
    }
    if !(params.plate.is_finite() && params.plate > 0.0) {
        return Err(PhysicsError::BadParams("plate side must be > 0".into()));
    }
    let l = params.plate;
    let coord = |i: usize, n: usize| {
        if n > 1 {
            i as f64 * l / (n - 1) as f64
        } else {
            0.0
        }
    };
    // per-axis cosine tables, one row per mode number used
    let max_k = params.modes.iter().map(|m| m.m.max(m.n)).max().unwrap_or(0) as usize;
    let table = |n: usize| -> Vec<Vec<f64>> {
        (0..=max_k)
            .map(|k| (0..n).map(|i| cos(k as f64 * PI * coord(i, n) / l)).collect())
            .collect()
    };
    let cx = table(width);
    let cy = table(height);
    Ok(Grid2D::from_fn(width, height, |x, y| {
        params
            .modes
            .iter()
            .map(|md| {
                let (m, n) = (md.m as usize, md.n as usize);
                md.amp * (cx[m][x] * cy[n][y] - cx[n][x] * cy[m][y])
            })
            .sum()
    })?)
}

/// `8 / median(|A|)`, the default inverse temperature for a field.
pub fn default_beta(field: &Grid2D) -> f64 {
    let abs: Vec<f64> = field.values().iter().map(|v| v.abs()).collect();
    let med = crate::math::quantile(&abs, 0.5);
    if med > 0.0 {
        8.0 / med
    } else {
        8.0
    }
}

/// The normalized PMF `exp(-β|A|)/Z` over cells, in row-major order.
pub fn boltzmann_pmf(field: &Grid2D, beta: f64) -> Vec<f64> {
    let weights = boltzmann_weights(field, beta);
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

fn boltzmann_weights(field: &Grid2D, beta: f64) -> Vec<f64> {
    // shift by the minimum |A| so the largest weight is exactly 1
    let min_abs = field
        .values()
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    field
        .values()
        .iter()
        .map(|v| exp(-beta * (v.abs() - min_abs)))
        .collect()
}

/// Draws `count` particle positions in continuous cell coordinates.
pub fn boltzmann_particles(
    field: &Grid2D,
    beta: f64,
    count: usize,
    rng: &mut Rng,
) -> Result<Vec<(f64, f64)>, PhysicsError> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(PhysicsError::BadParams("beta must be > 0".into()));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let sampler = DiscreteSampler::new(&boltzmann_weights(field, beta))
        .map_err(|e| PhysicsError::BadParams(e.to_string()))?;
    let w = field.width();
    Ok((0..count)
        .map(|_| {
            let cell = sampler.sample(rng);
            let (cx, cy) = ((cell % w) as f64, (cell / w) as f64);
            (cx + rng.next_f64(), cy + rng.next_f64())
        })
        .collect())
}

/// Stamps a disc of `fg` per point over a `bg` canvas. Coverage is a set
/// union, so the result is independent of point order and multiplicity.
pub fn render_particles(
    points: &[(f64, f64)],
    splat_radius: f64,
    width: usize,
    height: usize,
    bg: Rgb,
    fg: Rgb,
) -> RasterImage {
    let mut covered = vec![false; width * height];
    for &(x, y) in points {
        if splat_radius <= 0.0 {
            let (px, py) = (x.floor(), y.floor());
            if px >= 0.0 && py >= 0.0 && (px as usize) < width && (py as usize) < height {
                covered[py as usize * width + px as usize] = true;
            }
        } else {
            for_each_ellipse_pixel(width, height, (x, y), splat_radius, splat_radius, 0.0, |px, py| {
                covered[py * width + px] = true;
            });
        }
    }
    let mut img = RasterImage::new(width, height, bg);
    img.map_pixels(|x, y, c| if covered[y * width + x] { fg } else { c });
    img
}
