//! Branching plants from stochastic L-systems, plus Gray-Scott textures
//! for bark and leaves.

pub mod grayscott;
pub mod lsystem;
pub mod turtle;

use thiserror::Error;

use crate::grid::GridError;

pub use grayscott::{gray_scott, seeded_square, GrayScottParams};
pub use lsystem::{expand, expand_capped, format_lsystem, parse_lsystem, LSystem, LSystemError, Production};
pub use turtle::{rasterize_tree, turtle_render, Leaf, Segment, TreeStyle, TurtleError, TurtleOutput, HEADING_UP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VegetationError {
    #[error("u and v grids have different dimensions")]
    ShapeMismatch,
    #[error("explicit scheme unstable: dt·max(Du, Dv) = {0} > 0.25")]
    Unstable(f64),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Grid(#[from] GridError),
}
