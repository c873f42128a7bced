//! Static and semi-static textures: periodic tilings with cracks, stains and
//! chips, warped-Voronoi granulation, and fBM clouds.

mod clouds;
mod imperfections;
mod tiling;
mod voronoi;

use thiserror::Error;

use crate::grid::GridError;
use crate::noise::NoiseError;

pub use clouds::{cloud_cover, cloud_field};
pub use imperfections::{apply_chips, apply_cracks, apply_stains, crack_walk_budget, ImperfectionSpec};
pub use tiling::{tile_id_at, tile_pattern, TileId, TileMap, TilingKind, TilingSpec};
pub use voronoi::{nearest_brute, voronoi_field, voronoi_shaded, Nearest, SeedIndex, VoronoiField, VoronoiParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PatternError {
    #[error("no seed points")]
    NoPoints,
    #[error("image and tile map dimensions differ")]
    ShapeMismatch,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
}
