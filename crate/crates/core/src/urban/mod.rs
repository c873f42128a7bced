//! Layered settlement generator: a land/sea mask from thresholded fBM, a
//! Gaussian-mixture population field on the land, a road network grown by
//! space colonization or spatial preferential attachment (or a recursive
//! grid subdivision for planned cities), and a day or night rendering.

mod graph;
mod growth;
mod render;
mod subdivide;

use thiserror::Error;

use crate::grid::{Grid2D, GridError, Mask};
use crate::math::exp;
use crate::noise::{fbm_field, Fbm, NoiseError};
use crate::rng::Rng;
use crate::sampling::{sample_grid_positions, SamplingError};

pub use graph::{NodeKind, RoadGraph, RoadNode};
pub use growth::{preferential_growth, space_colonization, space_colonization_traced, Colonization, ColonizationTrace};
pub use render::{render_city, LightingMode};
pub use subdivide::{grid_subdivide, Rect, StreetSegment, Subdivision};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UrbanError {
    #[error("growth needs at least one root")]
    NoRoots,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("population field has zero total mass")]
    ZeroMass,
    #[error("layer dimensions disagree")]
    ShapeMismatch,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
}

impl From<SamplingError> for UrbanError {
    fn from(e: SamplingError) -> Self {
        match e {
            SamplingError::ZeroMass => UrbanError::ZeroMass,
            other => UrbanError::BadParams(other.to_string()),
        }
    }
}

/// Land (`true`) and water cells. Exactly `⌊q·w·h⌋` cells are water: the
/// lowest fBM values, ties broken by row-major index.
pub fn land_mask(width: usize, height: usize, sea_fraction: f64, seed: u64) -> Result<Mask, UrbanError> {
    if !(0.0..=1.0).contains(&sea_fraction) {
        return Err(UrbanError::BadParams(format!(
            "sea fraction must be in [0, 1], got {sea_fraction}"
        )));
    }
    let scale = width.max(height) as f64 / 3.0;
    let field = fbm_field(width, height, scale.max(1.0), Fbm::default(), seed)?;
    let n = width * height;
    let water = ((sea_fraction * n as f64).floor() as usize).min(n);
    let order = field.rank_order();
    let mut mask = Mask::filled(width, height, true)?;
    for &i in &order[..water] {
        mask.set(i % width, i / width, false);
    }
    Ok(mask)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Center {
    pub x: f64,
    pub y: f64,
    pub weight: f64,
}

/// `Σ weight·exp(−d²/2σ²)` per cell, zero on water.
pub fn population_field(centers: &[Center], sigma: f64, land: &Mask) -> Result<Grid2D, UrbanError> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(UrbanError::BadParams("sigma must be > 0".into()));
    }
    let inv = 1.0 / (2.0 * sigma * sigma);
    let (w, h) = land.dims();
    Ok(Grid2D::from_fn(w, h, |x, y| {
        if !land.get(x, y) {
            return 0.0;
        }
        centers
            .iter()
            .map(|c| {
                let (dx, dy) = (x as f64 - c.x, y as f64 - c.y);
                c.weight * exp(-(dx * dx + dy * dy) * inv)
            })
            .sum()
    })?)
}

/// `n` positions drawn in proportion to density, jittered inside each cell.
pub fn sample_attractors(pop: &Grid2D, n: usize, rng: &mut Rng) -> Result<Vec<(f64, f64)>, UrbanError> {
    Ok(sample_grid_positions(pop, n, rng)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centricity {
    Mono,
    Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoadModel {
    Colonize,
    Preferential,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Density {
    Sparse,
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CitySpec {
    pub width: usize,
    pub height: usize,
    pub sea_fraction: f64,
    /// Number of urban centers; forced to 1 for monocentric cities.
    pub centers: usize,
    pub centric: Centricity,
    pub road_model: RoadModel,
    pub density: Density,
    pub lighting: LightingMode,
    pub seed: u64,
}

/// Every intermediate layer of a city, for inspection and testing.
#[derive(Debug, Clone)]
pub struct City {
    pub land: Mask,
    pub centers: Vec<Center>,
    pub population: Grid2D,
    pub roads: RoadGraph,
    pub blocks: Subdivision,
}

/// Runs the layered pipeline: geography → population → roads.
pub fn build_city(spec: &CitySpec) -> Result<City, UrbanError> {
    let (w, h) = (spec.width, spec.height);
    let mut rng = Rng::new(spec.seed);
    let land = land_mask(w, h, spec.sea_fraction, rng.next_u64())?;

    let k = match spec.centric {
        Centricity::Mono => 1,
        Centricity::Poly => spec.centers.max(2),
    };
    let land_cells: Vec<usize> = (0..w * h).filter(|&i| land.get(i % w, i / w)).collect();
    let mut centers = Vec::new();
    if !land_cells.is_empty() {
        // keep centers away from the border when possible
        let inner: Vec<usize> = land_cells
            .iter()
            .copied()
            .filter(|&i| {
                let (x, y) = (i % w, i / w);
                x > w / 8 && x < w - w / 8 && y > h / 8 && y < h - h / 8
            })
            .collect();
        let pool = if inner.is_empty() { &land_cells } else { &inner };
        for c in 0..k {
            let i = pool[rng.below(pool.len())];
            let weight = if c == 0 { 1.0 } else { rng.range(0.4, 1.0) };
            centers.push(Center {
                x: (i % w) as f64,
                y: (i / w) as f64,
                weight,
            });
        }
    }
    let base = w.min(h) as f64;
    let sigma = match (spec.centric, spec.density) {
        (Centricity::Mono, Density::Sparse) => 0.12 * base,
        (Centricity::Mono, Density::Dense) => 0.18 * base,
        (Centricity::Poly, Density::Sparse) => 0.07 * base,
        (Centricity::Poly, Density::Dense) => 0.1 * base,
    };
    let population = population_field(&centers, sigma, &land)?;
    let has_mass = population.sum() > 0.0;

    let dense = spec.density == Density::Dense;
    let width_f = w as f64;
    let mut roads = RoadGraph::from_roots(centers.iter().map(|c| (c.x + 0.5, c.y + 0.5)));
    let mut blocks = Subdivision::default();
    match spec.road_model {
        RoadModel::Colonize if has_mass && !centers.is_empty() => {
            let n_attr = if dense { 1400 } else { 500 };
            let attractors = sample_attractors(&population, n_attr, &mut rng)?;
            let params = Colonization {
                r_influence: 0.12 * width_f,
                r_kill: 0.012 * width_f,
                step_len: 0.008 * width_f,
                max_iters: 400,
            };
            let roots: Vec<(f64, f64)> = roads.nodes.iter().map(|n| (n.x, n.y)).collect();
            roads = space_colonization(&roots, &attractors, &params)?;
        }
        RoadModel::Preferential if has_mass && !centers.is_empty() => {
            let arrivals = if dense { 2000 } else { 700 };
            roads = preferential_growth(&roads, &population, arrivals, 0.1 * width_f, &mut rng)?;
        }
        RoadModel::Grid => {
            let min_block = if dense { 0.035 } else { 0.07 } * base;
            blocks = grid_subdivide(Rect::new(0.0, 0.0, w as f64, h as f64), min_block, 0.2, &mut rng)?;
            roads = RoadGraph::default();
        }
        _ => {}
    }
    Ok(City {
        land,
        centers,
        population,
        roads,
        blocks,
    })
}

/// The full pipeline rendered to an image; a pure function of `spec`.
pub fn render_city_spec(spec: &CitySpec) -> Result<crate::image::RasterImage, UrbanError> {
    let city = build_city(spec)?;
    render_city(
        &city.land,
        &city.population,
        &city.roads,
        &city.blocks,
        spec.lighting,
        crate::rng::hash_words(&[spec.seed, 0x11]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn land_mask_extremes() {
        assert_eq!(land_mask(20, 10, 0.0, 1).unwrap().count(), 200);
        assert_eq!(land_mask(20, 10, 1.0, 1).unwrap().count(), 0);
        assert_eq!(land_mask(100, 100, 0.3, 5).unwrap().count(), 7000);
        assert!(land_mask(4, 4, 1.5, 1).is_err());
    }

    #[test]
    fn population_peaks_at_center() {
        let land = Mask::filled(30, 20, true).unwrap();
        let pop = population_field(&[Center { x: 11.0, y: 7.0, weight: 2.0 }], 4.0, &land).unwrap();
        let (mut best, mut bi) = (f64::MIN, 0);
        for (i, &v) in pop.values().iter().enumerate() {
            if v > best {
                best = v;
                bi = i;
            }
        }
        assert_eq!((bi % 30, bi / 30), (11, 7));
        assert!(population_field(&[], 4.0, &land).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn population_is_zero_on_water() {
        let land = Mask::from_fn(10, 10, |x, _| x < 5).unwrap();
        let pop = population_field(&[Center { x: 5.0, y: 5.0, weight: 1.0 }], 3.0, &land).unwrap();
        for y in 0..10 {
            for x in 5..10 {
                assert_eq!(pop.get(x, y), 0.0);
            }
        }
    }

    #[test]
    fn attractor_edge_cases() {
        let pop = Grid2D::zeros(5, 5).unwrap();
        assert_eq!(sample_attractors(&pop, 3, &mut Rng::new(1)).unwrap_err(), UrbanError::ZeroMass);
        let mut one = Grid2D::zeros(5, 5).unwrap();
        one.set(2, 3, 1.0);
        assert!(sample_attractors(&one, 0, &mut Rng::new(1)).unwrap().is_empty());
        for (x, y) in sample_attractors(&one, 500, &mut Rng::new(1)).unwrap() {
            assert_eq!((x.floor(), y.floor()), (2.0, 3.0));
        }
    }
}
