use crate::grid::{Grid2D, Mask};
use crate::image::{blend, RasterImage, Rgb};
use crate::math::smoothstep;
use crate::noise::{fbm_field, Fbm};

use super::PatternError;

const SKY_TOP: Rgb = [70, 130, 210];
const SKY_BOTTOM: Rgb = [150, 196, 240];
const CLOUD_LIT: Rgb = [252, 252, 255];
const CLOUD_SHADE: Rgb = [196, 204, 218];

/// Opacity at the threshold itself; thick cloud fades in above it.
const EDGE_ALPHA: f64 = 0.55;

fn ramp(softness: f64, d: f64) -> f64 {
    if softness > 0.0 {
        smoothstep(0.0, softness, d)
    } else if d > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Cloud opacity and the hard coverage mask. Exactly `⌊coverage·w·h⌋` cells
/// are cloud: the highest fBM values, ties to the higher row-major index.
pub fn cloud_cover(
    width: usize,
    height: usize,
    coverage: f64,
    softness: f64,
    seed: u64,
) -> Result<(Grid2D, Mask), PatternError> {
    if !(0.0..=1.0).contains(&coverage) {
        return Err(PatternError::BadParams("coverage must be in [0, 1]".into()));
    }
    if !(softness >= 0.0 && softness.is_finite()) {
        return Err(PatternError::BadParams("softness must be >= 0".into()));
    }
    let f = fbm_field(width, height, (width.max(height) as f64 / 3.0).max(1.0), Fbm::default(), seed)?.normalized();
    let n = width * height;
    let k = ((coverage * n as f64).floor() as usize).min(n);
    let order = f.rank_order();
    let mut mask = Mask::filled(width, height, false)?;
    for &i in &order[n - k..] {
        mask.set(i % width, i / width, true);
    }
    let alpha = if k == 0 {
        Grid2D::zeros(width, height)?
    } else {
        // threshold between the last clear and the first cloudy value
        let lo = f.values()[order[n - k]];
        let t = if k < n { (lo + f.values()[order[n - k - 1]]) / 2.0 } else { f64::NEG_INFINITY };
        Grid2D::from_fn(width, height, |x, y| {
            let v = f.get(x, y);
            if mask.get(x, y) {
                EDGE_ALPHA + (1.0 - EDGE_ALPHA) * ramp(softness, v - t)
            } else {
                EDGE_ALPHA * (1.0 - ramp(softness, t - v))
            }
        })?
    };
    Ok((alpha, mask))
}

/// White cloud over a vertical sky gradient.
pub fn cloud_field(width: usize, height: usize, coverage: f64, softness: f64, seed: u64) -> Result<RasterImage, PatternError> {
    let (alpha, _) = cloud_cover(width, height, coverage, softness, seed)?;
    let mut img = RasterImage::new(width, height, SKY_TOP);
    img.map_pixels(|x, y, _| {
        let sky = sky_color(y, height);
        let a = alpha.get(x, y);
        if a <= 0.0 {
            return sky;
        }
        let cloud = blend(CLOUD_SHADE, CLOUD_LIT, a);
        blend(sky, cloud, a)
    });
    Ok(img)
}

fn sky_color(y: usize, height: usize) -> Rgb {
    blend(SKY_TOP, SKY_BOTTOM, y as f64 / (height.max(2) - 1) as f64)
}
