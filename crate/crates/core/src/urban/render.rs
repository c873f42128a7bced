use crate::draw::for_each_capsule_pixel;
use crate::grid::{Grid2D, Mask};
use crate::image::{blend, RasterImage, Rgb};
use crate::math::hypot;
use crate::rng::{hash_words, Rng};

use super::{RoadGraph, Subdivision, UrbanError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LightingMode {
    Night,
    Day,
}

const NIGHT_WATER: Rgb = [6, 10, 24];
const NIGHT_LAND: Rgb = [16, 16, 20];
const NIGHT_GLOW: Rgb = [70, 48, 24];
const NIGHT_ROAD: Rgb = [255, 176, 90];
const NIGHT_LIGHT: Rgb = [255, 236, 180];

const DAY_WATER: Rgb = [58, 110, 170];
const DAY_LAND: Rgb = [190, 196, 160];
const DAY_URBAN: Rgb = [206, 192, 178];
const DAY_BLOCK: Rgb = [160, 150, 140];
const DAY_STREET: Rgb = [244, 242, 236];
const DAY_ROAD: Rgb = [108, 102, 96];

/// Lights per pixel of road length at full population.
const LIGHT_DENSITY: f64 = 0.6;

/// Paints the layers back to front. Roads, streets and lights only land on
/// land cells.
pub fn render_city(
    land: &Mask,
    pop: &Grid2D,
    roads: &RoadGraph,
    blocks: &Subdivision,
    mode: LightingMode,
    seed: u64,
) -> Result<RasterImage, UrbanError> {
    if land.dims() != pop.dims() {
        return Err(UrbanError::ShapeMismatch);
    }
    if !roads.is_well_formed() {
        return Err(UrbanError::BadParams("edge endpoint out of range".into()));
    }
    let (w, h) = land.dims();
    let peak = pop.max();
    let density = |x: f64, y: f64| -> f64 {
        if peak > 0.0 {
            (pop.sample_bilinear(x - 0.5, y - 0.5) / peak).clamp(0.0, 1.0)
        } else {
            0.0
        }
    };
    let cell_density = |x: usize, y: usize| if peak > 0.0 { pop.get(x, y) / peak } else { 0.0 };

    let mut segments: Vec<((f64, f64), (f64, f64))> = roads
        .edges
        .iter()
        .map(|&(a, b)| {
            let (na, nb) = (roads.nodes[a], roads.nodes[b]);
            ((na.x, na.y), (nb.x, nb.y))
        })
        .collect();
    segments.extend(blocks.streets.iter().map(|s| (s.a, s.b)));

    let mut img = RasterImage::new(w, h, [0, 0, 0]);
    match mode {
        LightingMode::Night => {
            img.map_pixels(|x, y, _| {
                if land.get(x, y) {
                    blend(NIGHT_LAND, NIGHT_GLOW, 0.35 * cell_density(x, y))
                } else {
                    NIGHT_WATER
                }
            });
            let mut rng = Rng::new(seed);
            for &(a, b) in &segments {
                let p = density((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
                if p <= 0.0 {
                    continue;
                }
                let color = blend(NIGHT_LAND, NIGHT_ROAD, 0.15 + 0.6 * p);
                for_each_capsule_pixel(w, h, a, b, 0.5, |x, y| {
                    if land.get(x, y) {
                        img.put(x, y, color);
                    }
                });
                let expected = hypot(b.0 - a.0, b.1 - a.1) * p * LIGHT_DENSITY;
                let mut count = expected.floor() as usize;
                if rng.next_f64() < expected.fract() {
                    count += 1;
                }
                for _ in 0..count {
                    let t = rng.next_f64();
                    let lx = a.0 + t * (b.0 - a.0) + rng.signed();
                    let ly = a.1 + t * (b.1 - a.1) + rng.signed();
                    if lx >= 0.0 && ly >= 0.0 && (lx as usize) < w && (ly as usize) < h {
                        let (px, py) = (lx as usize, ly as usize);
                        if land.get(px, py) {
                            img.put(px, py, NIGHT_LIGHT);
                        }
                    }
                }
            }
        }
        LightingMode::Day => {
            img.map_pixels(|x, y, _| {
                if land.get(x, y) {
                    blend(DAY_LAND, DAY_URBAN, cell_density(x, y))
                } else {
                    DAY_WATER
                }
            });
            for (k, b) in blocks.blocks.iter().enumerate() {
                let shade = (hash_words(&[seed, k as u64]) >> 11) as f64 / (1u64 << 53) as f64;
                let x0 = b.x0.max(0.0).round() as usize;
                let y0 = b.y0.max(0.0).round() as usize;
                let x1 = (b.x1.round() as usize).min(w);
                let y1 = (b.y1.round() as usize).min(h);
                for y in y0..y1 {
                    for x in x0..x1 {
                        if land.get(x, y) {
                            let base = img.get(x, y);
                            img.put(x, y, blend(base, DAY_BLOCK, 0.15 + 0.3 * shade));
                        }
                    }
                }
            }
            for s in &blocks.streets {
                for_each_capsule_pixel(w, h, s.a, s.b, 1.0, |x, y| {
                    if land.get(x, y) {
                        img.put(x, y, DAY_STREET);
                    }
                });
            }
            for &(a, b) in &segments[..roads.edges.len()] {
                for_each_capsule_pixel(w, h, a, b, 0.75, |x, y| {
                    if land.get(x, y) {
                        img.put(x, y, DAY_ROAD);
                    }
                });
            }
        }
    }
    Ok(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_to_light() {
        let land = Mask::from_fn(20, 20, |x, _| x > 6).unwrap();
        let pop = Grid2D::zeros(20, 20).unwrap();
        let img = render_city(&land, &pop, &RoadGraph::default(), &Subdivision::default(), LightingMode::Night, 1).unwrap();
        let base = crate::image::luminance(NIGHT_LAND);
        assert!(img.iter_pixels().all(|(_, _, c)| crate::image::luminance(c) <= base));
    }

    #[test]
    fn all_water_is_uniform() {
        let land = Mask::filled(16, 12, false).unwrap();
        let pop = Grid2D::filled(16, 12, 1.0).unwrap();
        let mut g = RoadGraph::from_roots([(2.0, 2.0)]);
        g.add_node(12.0, 9.0, 0);
        for mode in [LightingMode::Night, LightingMode::Day] {
            let img = render_city(&land, &pop, &g, &Subdivision::default(), mode, 4).unwrap();
            let first = img.get(0, 0);
            assert!(img.iter_pixels().all(|(_, _, c)| c == first));
        }
    }

    #[test]
    fn shape_mismatch() {
        let land = Mask::filled(4, 4, true).unwrap();
        let pop = Grid2D::zeros(5, 4).unwrap();
        assert_eq!(
            render_city(&land, &pop, &RoadGraph::default(), &Subdivision::default(), LightingMode::Day, 0)
                .unwrap_err(),
            UrbanError::ShapeMismatch
        );
    }
}
