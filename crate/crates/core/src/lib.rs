//! Deterministic procedural generators for natural and man-made visual
//! systems, plus a multiple-choice image matching harness that scores how
//! well a generated image can be picked out of a lineup of decoys.
//!
//! Every stochastic component draws from [`rng::Rng`] (SplitMix64) and every
//! transcendental function goes through [`math`], so a `(family, params,
//! seed)` triple renders the same bytes on every platform.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod draw;
pub mod families;
pub mod glyphs;
pub mod grid;
pub mod image;
pub mod manifest;
pub mod matchkit;
pub mod math;
pub mod noise;
pub mod params;
pub mod patterns;
pub mod physics;
pub mod rng;
pub mod sampling;
pub mod urban;
pub mod vegetation;

pub use grid::{Grid2D, GridError, Mask};
pub use image::{RasterImage, Rgb};
pub use rng::Rng;
