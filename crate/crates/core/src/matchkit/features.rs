use std::cmp::Ordering;

use crate::image::RasterImage;
use crate::math::{atan2, TAU};

use super::{MatchError, Mode};

const SIDE: usize = 64;
pub const COLOR_BINS: usize = 512;
pub const GRAY_BINS: usize = 64;
pub const GRADIENT_BINS: usize = 36;

/// Box-averaged `SIDE`×`SIDE` RGB means. Images smaller than `SIDE` along
/// an axis repeat source pixels.
fn downsample(img: &RasterImage) -> Vec<[f64; 3]> {
    let (w, h) = (img.width(), img.height());
    let span = |i: usize, n: usize| {
        let a = i * n / SIDE;
        (a, ((i + 1) * n / SIDE).max(a + 1))
    };
    let mut out = Vec::with_capacity(SIDE * SIDE);
    for j in 0..SIDE {
        let (y0, y1) = span(j, h);
        for i in 0..SIDE {
            let (x0, x1) = span(i, w);
            let mut acc = [0.0; 3];
            for y in y0..y1 {
                for x in x0..x1 {
                    let c = img.get(x, y);
                    for k in 0..3 {
                        acc[k] += c[k] as f64;
                    }
                }
            }
            let n = ((x1 - x0) * (y1 - y0)) as f64;
            out.push([acc[0] / n, acc[1] / n, acc[2] / n]);
        }
    }
    out
}

fn bin(v: f64, bins: usize) -> usize {
    ((v / 256.0 * bins as f64) as usize).min(bins - 1)
}

fn normalize(block: &mut [f64]) {
    let total: f64 = block.iter().sum();
    if total > 0.0 {
        block.iter_mut().for_each(|v| *v /= total);
    }
}

/// Histogram features on a 64×64 box downsample: an 8×8×8 RGB histogram
/// (color) or a 64-bin luminance histogram (gray), followed by a 36-bin
/// gradient orientation histogram weighted by magnitude. Each block is
/// L1-normalized; a gradient block with no mass stays zero.
///
/// Gray mode works on the grayscale image, so inputs with equal grayscale
/// conversions give equal features.
pub fn perceptual_features(img: &RasterImage, mode: Mode) -> Vec<f64> {
    let small = match mode {
        Mode::Color => downsample(img),
        Mode::Gray => downsample(&img.to_gray()),
    };
    let lum: Vec<f64> = small
        .iter()
        .map(|c| 0.2126 * c[0] + 0.7152 * c[1] + 0.0722 * c[2])
        .collect();

    let mut tone = match mode {
        Mode::Color => {
            let mut hist = vec![0.0; COLOR_BINS];
            for c in &small {
                hist[bin(c[0], 8) * 64 + bin(c[1], 8) * 8 + bin(c[2], 8)] += 1.0;
            }
            hist
        }
        Mode::Gray => {
            let mut hist = vec![0.0; GRAY_BINS];
            for &y in &lum {
                hist[bin(y, GRAY_BINS)] += 1.0;
            }
            hist
        }
    };
    normalize(&mut tone);

    let mut grad = vec![0.0; GRADIENT_BINS];
    for y in 1..SIDE - 1 {
        for x in 1..SIDE - 1 {
            let gx = (lum[y * SIDE + x + 1] - lum[y * SIDE + x - 1]) / 2.0;
            let gy = (lum[(y + 1) * SIDE + x] - lum[(y - 1) * SIDE + x]) / 2.0;
            let mag = (gx * gx + gy * gy).sqrt();
            if mag == 0.0 {
                continue;
            }
            let a = atan2(gy, gx).rem_euclid(TAU);
            grad[((a / TAU * GRADIENT_BINS as f64) as usize).min(GRADIENT_BINS - 1)] += mag;
        }
    }
    normalize(&mut grad);

    tone.extend(grad);
    tone
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    if a == b {
        return 1.0;
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

/// Candidate indices, best first, by cosine similarity to `reference`.
/// A candidate equal to the reference outranks every other candidate; other
/// ties go to the lower index.
pub fn rank_candidates(reference: &[f64], candidates: &[Vec<f64>]) -> Result<Vec<usize>, MatchError> {
    if candidates.is_empty() {
        return Err(MatchError::NoCandidates);
    }
    if let Some(c) = candidates.iter().find(|c| c.len() != reference.len()) {
        return Err(MatchError::DimensionMismatch(reference.len(), c.len()));
    }
    let scored: Vec<(f64, bool)> = candidates
        .iter()
        .map(|c| (cosine(reference, c), c.as_slice() == reference))
        .collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| {
        let (si, ei) = scored[i];
        let (sj, ej) = scored[j];
        ej.cmp(&ei)
            .then(sj.partial_cmp(&si).unwrap_or(Ordering::Equal))
            .then(i.cmp(&j))
    });
    Ok(order)
}
