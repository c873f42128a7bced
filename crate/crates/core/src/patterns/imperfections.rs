use std::collections::HashSet;

use crate::image::{scale_rgb, RasterImage};
use crate::math::{cos, sin, FRAC_PI_4, TAU};
use crate::noise::{fbm_field, Fbm};
use crate::rng::{hash_words, Rng};

use super::{PatternError, TileMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImperfectionSpec {
    pub cracks: usize,
    /// Turn correlation in `[0, 1)`; higher gives straighter cracks.
    pub crack_persistence: f64,
    pub stain_strength: f64,
    pub chip_prob: f64,
}

impl Default for ImperfectionSpec {
    fn default() -> Self {
        Self {
            cracks: 0,
            crack_persistence: 0.7,
            stain_strength: 0.0,
            chip_prob: 0.0,
        }
    }
}

impl ImperfectionSpec {
    pub fn validate(&self) -> Result<(), PatternError> {
        if !(0.0..1.0).contains(&self.crack_persistence) {
            return Err(PatternError::BadParams("crack_persistence must be in [0, 1)".into()));
        }
        if !(0.0..=1.0).contains(&self.stain_strength) || !(0.0..=1.0).contains(&self.chip_prob) {
            return Err(PatternError::BadParams("stain_strength and chip_prob must be in [0, 1]".into()));
        }
        Ok(())
    }
}

const CRACK_FACTOR: f64 = 0.4;
const CHIP_FACTOR: f64 = 0.7;

/// Step budget of one crack walk.
pub fn crack_walk_budget(width: usize, height: usize) -> usize {
    (width + height) / 2
}

/// `n` correlated random walks of unit steps. Each starts on a tile pixel,
/// darkens every pixel it enters once, and ends at grout, at the image
/// border, or when its step budget runs out.
pub fn apply_cracks(
    img: &RasterImage,
    ids: &TileMap,
    n: usize,
    persistence: f64,
    rng: &mut Rng,
) -> Result<RasterImage, PatternError> {
    let (w, h) = (img.width(), img.height());
    if ids.dims() != (w, h) {
        return Err(PatternError::ShapeMismatch);
    }
    if !(0.0..1.0).contains(&persistence) {
        return Err(PatternError::BadParams("persistence must be in [0, 1)".into()));
    }
    let mut out = img.clone();
    let mut visited: HashSet<(usize, usize)> = HashSet::new();
    let budget = crack_walk_budget(w, h);
    let turn = (1.0 - persistence) * FRAC_PI_4;
    for _ in 0..n {
        let mut start = None;
        for _ in 0..64 {
            let (x, y) = (rng.below(w), rng.below(h));
            if !ids.is_grout(x, y) {
                start = Some((x, y));
                break;
            }
        }
        let Some((sx, sy)) = start else { continue };
        let (mut px, mut py) = (sx as f64 + 0.5, sy as f64 + 0.5);
        let mut heading = rng.next_f64() * TAU;
        let (mut cx, mut cy) = (sx, sy);
        for step in 0..budget {
            if step > 0 {
                heading += rng.signed() * turn;
                px += cos(heading);
                py += sin(heading);
                if px < 0.0 || py < 0.0 || px >= w as f64 || py >= h as f64 {
                    break;
                }
                (cx, cy) = (px as usize, py as usize);
                if ids.is_grout(cx, cy) {
                    break;
                }
            }
            if visited.insert((cx, cy)) {
                out.put(cx, cy, scale_rgb(img.get(cx, cy), CRACK_FACTOR));
            }
        }
    }
    Ok(out)
}

/// Multiplies each pixel by `1 − strength·max(0, f − 0.6)/0.4`, with `f` the
/// min-max normalized fBM field.
pub fn apply_stains(img: &RasterImage, strength: f64, seed: u64) -> Result<RasterImage, PatternError> {
    if !(0.0..=1.0).contains(&strength) {
        return Err(PatternError::BadParams("strength must be in [0, 1]".into()));
    }
    if strength == 0.0 {
        return Ok(img.clone());
    }
    let (w, h) = (img.width(), img.height());
    let f = stain_field(w, h, seed)?;
    let mut out = img.clone();
    out.map_pixels(|x, y, c| scale_rgb(c, stain_factor(strength, f.get(x, y))));
    Ok(out)
}

pub(crate) fn stain_field(w: usize, h: usize, seed: u64) -> Result<crate::grid::Grid2D, PatternError> {
    Ok(fbm_field(w, h, (w.max(h) as f64 / 4.0).max(1.0), Fbm::default(), seed)?.normalized())
}

fn stain_factor(strength: f64, f: f64) -> f64 {
    1.0 - strength * (f - 0.6).max(0.0) / 0.4
}

/// Darkens patches along the edges of a random subset of tiles, chosen per
/// tile with probability `prob`.
pub fn apply_chips(img: &RasterImage, ids: &TileMap, prob: f64, seed: u64) -> Result<RasterImage, PatternError> {
    let (w, h) = (img.width(), img.height());
    if ids.dims() != (w, h) {
        return Err(PatternError::ShapeMismatch);
    }
    if !(0.0..=1.0).contains(&prob) {
        return Err(PatternError::BadParams("chip probability must be in [0, 1]".into()));
    }
    let unit = |words: &[u64]| (hash_words(words) >> 11) as f64 / (1u64 << 53) as f64;
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            let Some(id) = ids.get(x, y) else { continue };
            if unit(&[seed, id.0 as u64, id.1 as u64]) >= prob {
                continue;
            }
            let edge = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().any(|&(dx, dy)| {
                let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 || ids.get(nx as usize, ny as usize) != Some(id)
            });
            if edge && unit(&[seed ^ 0xC41F, id.0 as u64, id.1 as u64, (x / 3) as u64, (y / 3) as u64]) < 0.4 {
                out.put(x, y, scale_rgb(img.get(x, y), CHIP_FACTOR));
            }
        }
    }
    Ok(out)
}
