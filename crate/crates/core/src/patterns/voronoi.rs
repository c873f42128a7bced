use crate::grid::Grid2D;
use crate::image::{blend, palette_color, RasterImage, Rgb};
use crate::math::{exp, PI};
use crate::noise::{domain_warp, NoiseTable};

use super::PatternError;

/// Nearest and second-nearest seed for one query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nearest {
    pub first: usize,
    pub d1: f64,
    /// `None` with a single seed.
    pub second: Option<usize>,
    pub d2: f64,
}

/// Uniform bucket grid over seed points for exact two-nearest queries.
pub struct SeedIndex<'a> {
    points: &'a [(f64, f64)],
    cell: f64,
    x0: f64,
    y0: f64,
    gw: i64,
    gh: i64,
    buckets: Vec<Vec<usize>>,
}

impl<'a> SeedIndex<'a> {
    pub fn new(points: &'a [(f64, f64)]) -> Result<Self, PatternError> {
        if points.is_empty() {
            return Err(PatternError::NoPoints);
        }
        if points.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
            return Err(PatternError::BadParams("non-finite seed".into()));
        }
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &(x, y) in points {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let area = ((x1 - x0) * (y1 - y0)).max(1.0);
        let cell = (area / points.len() as f64).sqrt().max(1.0);
        let gw = ((x1 - x0) / cell).floor() as i64 + 1;
        let gh = ((y1 - y0) / cell).floor() as i64 + 1;
        let mut buckets = vec![Vec::new(); (gw * gh) as usize];
        for (i, &(x, y)) in points.iter().enumerate() {
            let cx = ((x - x0) / cell).floor() as i64;
            let cy = ((y - y0) / cell).floor() as i64;
            buckets[(cy * gw + cx) as usize].push(i);
        }
        Ok(Self {
            points,
            cell,
            x0,
            y0,
            gw,
            gh,
            buckets,
        })
    }

    /// Exact two nearest seeds, ties to the lower index.
    pub fn query(&self, x: f64, y: f64) -> Nearest {
        let qx = ((x - self.x0) / self.cell).floor() as i64;
        let qy = ((y - self.y0) / self.cell).floor() as i64;
        // farthest ring that still touches the grid
        let reach = [qx, self.gw - 1 - qx, qy, self.gh - 1 - qy]
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or(0)
            .max(0);
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = (f64::INFINITY, usize::MAX);
        let better = |d: f64, i: usize, b: (f64, usize)| d < b.0 || (d == b.0 && i < b.1);
        for ring in 0..=reach {
            for cy in qy - ring..=qy + ring {
                if cy < 0 || cy >= self.gh {
                    continue;
                }
                let full_row = cy == qy - ring || cy == qy + ring;
                let xs: Vec<i64> = if full_row {
                    (qx - ring..=qx + ring).collect()
                } else {
                    vec![qx - ring, qx + ring]
                };
                for cx in xs {
                    if cx < 0 || cx >= self.gw || (ring == 0 && cx != qx) {
                        continue;
                    }
                    for &i in &self.buckets[(cy * self.gw + cx) as usize] {
                        let (px, py) = self.points[i];
                        let d = (px - x) * (px - x) + (py - y) * (py - y);
                        if better(d, i, best) {
                            second = best;
                            best = (d, i);
                        } else if better(d, i, second) {
                            second = (d, i);
                        }
                    }
                }
            }
            // every seed outside rings 0..=ring is at least ring·cell away
            let bound = ring as f64 * self.cell;
            if second.0.is_finite() && second.0 < bound * bound {
                break;
            }
        }
        Nearest {
            first: best.1,
            d1: best.0.sqrt(),
            second: (second.1 != usize::MAX).then_some(second.1),
            d2: second.0.sqrt(),
        }
    }
}

/// Brute-force two-nearest query with the same tie rule.
pub fn nearest_brute(points: &[(f64, f64)], x: f64, y: f64) -> Option<Nearest> {
    let mut best = (f64::INFINITY, usize::MAX);
    let mut second = (f64::INFINITY, usize::MAX);
    for (i, &(px, py)) in points.iter().enumerate() {
        let d = (px - x) * (px - x) + (py - y) * (py - y);
        if d < best.0 {
            second = best;
            best = (d, i);
        } else if d < second.0 {
            second = (d, i);
        }
    }
    (best.1 != usize::MAX).then(|| Nearest {
        first: best.1,
        d1: best.0.sqrt(),
        second: (second.1 != usize::MAX).then_some(second.1),
        d2: second.0.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronoiParams {
    /// Displacement amplitude in px; `0` gives exact Voronoi cells.
    pub warp_amp: f64,
    /// Feature size of the warp noise in px.
    pub warp_scale: f64,
    pub ridge_width: f64,
}

/// Per-pixel cell labels and shading inputs.
#[derive(Debug, Clone)]
pub struct VoronoiField {
    pub owner: Vec<usize>,
    pub ridge: Vec<bool>,
    /// Cell-interior brightness in `(0, 1]`, falling with distance to the seed.
    pub brightness: Grid2D,
}

/// Queries at pixel centers after warping. A pixel is ridge when its
/// distance to the bisector of its two nearest seeds,
/// `(d2² − d1²) / (2·|s2 − s1|)`, is below `ridge_width / 2`.
pub fn voronoi_field(
    points: &[(f64, f64)],
    p: &VoronoiParams,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<VoronoiField, PatternError> {
    let index = SeedIndex::new(points)?;
    if !(p.warp_amp >= 0.0 && p.ridge_width >= 0.0 && p.warp_scale > 0.0) {
        return Err(PatternError::BadParams("warp_amp, ridge_width >= 0 and warp_scale > 0".into()));
    }
    let table = NoiseTable::new(seed);
    let radius = ((width * height) as f64 / (PI * points.len() as f64)).sqrt().max(1.0);
    let n = width * height;
    let mut owner = Vec::with_capacity(n);
    let mut ridge = Vec::with_capacity(n);
    let mut bright = Vec::with_capacity(n);
    for y in 0..height {
        for x in 0..width {
            let (mut qx, mut qy) = (x as f64 + 0.5, y as f64 + 0.5);
            if p.warp_amp > 0.0 {
                let s = p.warp_scale;
                let (wx, wy) = domain_warp(qx / s, qy / s, p.warp_amp / s, &table);
                qx = wx * s;
                qy = wy * s;
            }
            let nb = index.query(qx, qy);
            let is_ridge = match nb.second {
                Some(j) => {
                    let (a, b) = (points[nb.first], points[j]);
                    let sep = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
                    sep > 0.0 && (nb.d2 * nb.d2 - nb.d1 * nb.d1) / (2.0 * sep) < p.ridge_width / 2.0
                }
                None => false,
            };
            owner.push(nb.first);
            ridge.push(is_ridge);
            bright.push(exp(-nb.d1 / radius));
        }
    }
    Ok(VoronoiField {
        owner,
        ridge,
        brightness: Grid2D::from_vec(width, height, bright)?,
    })
}

const GRANULE: [Rgb; 3] = [[120, 44, 8], [226, 132, 36], [255, 232, 160]];
const LANE: Rgb = [64, 20, 4];

/// Granulation look: bright cell centers fading outward, dark lanes on ridges.
pub fn voronoi_shaded(
    points: &[(f64, f64)],
    p: &VoronoiParams,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<RasterImage, PatternError> {
    let f = voronoi_field(points, p, width, height, seed)?;
    let mut img = RasterImage::new(width, height, LANE);
    img.map_pixels(|x, y, _| {
        let i = y * width + x;
        let c = palette_color(&GRANULE, f.brightness.values()[i]);
        if f.ridge[i] {
            blend(c, LANE, 0.85)
        } else {
            c
        }
    });
    Ok(img)
}
