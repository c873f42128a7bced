//! Physical generators: Chladni particle plates, water caustics, a cellular
//! erosion sandbox and a 2-D flame field.

pub mod caustics;
pub mod chladni;
pub mod erosion;
pub mod flame;

use thiserror::Error;

use crate::grid::GridError;

pub use caustics::{
    accumulate_caustics, refract, render_caustics, CausticsParams, Refraction, Vec3, WaveComponent,
    WaveSurface,
};
pub use chladni::{boltzmann_particles, chladni_field, default_beta, render_particles, ChladniParams, Mode};
pub use erosion::{erode, erosion_step, ErosionParams, ErosionState};
pub use flame::{flame_step, render_flame, FlameParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhysicsError {
    #[error("mode ({m}, {n}) has m = n; the antisymmetric plate field vanishes")]
    DegenerateMode { m: u32, n: u32 },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("vector is not unit length (|v| = {0})")]
    NotUnit(f64),
    #[error("grids have mismatched dimensions")]
    ShapeMismatch,
    #[error("diffusion coefficient {0} exceeds the explicit stability limit 0.25")]
    Unstable(f64),
    #[error(transparent)]
    Grid(#[from] GridError),
}
