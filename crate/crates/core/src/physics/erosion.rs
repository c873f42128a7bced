//! Cellular hydraulic erosion: rain, head-driven flow, sediment exchange
//! and evaporation on a closed rectangular domain.
//!
//! Every phase reads the previous buffers and writes fresh ones, so a step
//! does not depend on cell visiting order. Erosion and deposition only move
//! material between `height` and `sediment`, which keeps `Σ(H + S)` fixed.

use crate::grid::Grid2D;
use crate::rng::Rng;

use super::PhysicsError;

/// Fraction of a head difference that one neighbor link may carry per step.
const LINK_CONDUCTANCE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct ErosionState {
    pub height: Grid2D,
    pub water: Grid2D,
    pub sediment: Grid2D,
}

impl ErosionState {
    /// Dry, sediment-free state over a terrain.
    pub fn dry(height: Grid2D) -> Self {
        let (w, h) = height.dims();
        let zeros = Grid2D::zeros(w, h).expect("dims come from a valid grid");
        Self {
            height,
            water: zeros.clone(),
            sediment: zeros,
        }
    }

    fn check(&self) -> Result<(), PhysicsError> {
        if !(self.height.same_dims(&self.water) && self.height.same_dims(&self.sediment)) {
            return Err(PhysicsError::ShapeMismatch);
        }
        Ok(())
    }

    /// `Σ(H + S)`, the conserved solid mass.
    pub fn solid_mass(&self) -> f64 {
        self.height
            .values()
            .iter()
            .zip(self.sediment.values())
            .map(|(h, s)| h + s)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErosionParams {
    /// Water depth added per cell per step.
    pub rain: f64,
    /// Relative per-cell rain variation in `[0, 1]`; 0 is uniform rain.
    pub rain_jitter: f64,
    /// Sediment capacity coefficient `Kc`.
    pub capacity: f64,
    /// Dissolve rate `Ks ∈ (0, 1]`.
    pub dissolve: f64,
    /// Deposit rate `Kd ∈ (0, 1]`.
    pub deposit: f64,
    /// Evaporated water fraction per step `Ke ∈ [0, 1)`.
    pub evaporation: f64,
    pub steps: usize,
}

impl Default for ErosionParams {
    fn default() -> Self {
        Self {
            rain: 0.01,
            rain_jitter: 0.0,
            capacity: 1.0,
            dissolve: 0.3,
            deposit: 0.3,
            evaporation: 0.05,
            steps: 100,
        }
    }
}

impl ErosionParams {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        let bad = |m: &str| Err(PhysicsError::BadParams(m.into()));
        if !(self.rain >= 0.0 && self.rain.is_finite()) {
            return bad("rain must be >= 0");
        }
        if !(0.0..=1.0).contains(&self.rain_jitter) {
            return bad("rain_jitter must be in [0, 1]");
        }
        if !(self.capacity >= 0.0 && self.capacity.is_finite()) {
            return bad("capacity must be >= 0");
        }
        if !(self.dissolve > 0.0 && self.dissolve <= 1.0) {
            return bad("dissolve rate must be in (0, 1]");
        }
        if !(self.deposit > 0.0 && self.deposit <= 1.0) {
            return bad("deposit rate must be in (0, 1]");
        }
        if !(self.evaporation >= 0.0 && self.evaporation < 1.0) {
            return bad("evaporation must be in [0, 1)");
        }
        Ok(())
    }
}

const NEIGHBORS: [(isize, isize); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// One synchronous pass of rain, flow, exchange and evaporation.
pub fn erosion_step(
    state: &ErosionState,
    p: &ErosionParams,
    rng: &mut Rng,
) -> Result<ErosionState, PhysicsError> {
    state.check()?;
    p.validate()?;
    let (w, h) = state.height.dims();
    let n = w * h;
    let terrain = state.height.values();

    // rain
    let mut water: Vec<f64> = state.water.values().to_vec();
    if p.rain > 0.0 {
        for v in water.iter_mut() {
            let r = if p.rain_jitter > 0.0 {
                p.rain * (1.0 + p.rain_jitter * rng.signed())
            } else {
                p.rain
            };
            *v += r;
        }
    }

    // flow: per-link fluxes from the post-rain heads
    let head: Vec<f64> = terrain.iter().zip(&water).map(|(t, w)| t + w).collect();
    let mut flux = vec![[0.0f64; 4]; n];
    let mut outflow = vec![0.0f64; n];
    let mut slope = vec![0.0f64; n];
    let mut floor_drop = vec![0.0f64; n];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let mut total = 0.0;
            let mut steepest = 0.0f64;
            for (k, &(dx, dy)) in NEIGHBORS.iter().enumerate() {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                floor_drop[i] = floor_drop[i].max(terrain[i] - terrain[j]);
                let diff = head[i] - head[j];
                if diff > 0.0 {
                    flux[i][k] = LINK_CONDUCTANCE * diff;
                    total += flux[i][k];
                    steepest = steepest.max(diff);
                }
            }
            if total > water[i] {
                let s = if total > 0.0 { water[i] / total } else { 0.0 };
                for f in flux[i].iter_mut() {
                    *f *= s;
                }
                total = water[i];
            }
            outflow[i] = total;
            slope[i] = steepest;
        }
    }

    // exchange between terrain and suspended sediment
    let mut height: Vec<f64> = terrain.to_vec();
    let mut sediment: Vec<f64> = state.sediment.values().to_vec();
    for i in 0..n {
        let capacity = p.capacity * outflow[i] * slope[i];
        if sediment[i] < capacity {
            // never cut below the lowest neighbor: pits dug by one step
            // steepen the next and the exchange runs away
            let dh = (p.dissolve * (capacity - sediment[i])).min(0.5 * floor_drop[i]);
            height[i] -= dh;
            sediment[i] += dh;
        } else {
            let ds = p.deposit * (sediment[i] - capacity);
            sediment[i] -= ds;
            height[i] += ds;
        }
    }

    // transport water and the same fraction of each cell's sediment
    let mut new_water = water.clone();
    let mut new_sediment = sediment.clone();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if outflow[i] <= 0.0 || water[i] <= 0.0 {
                continue;
            }
            let carried_fraction = sediment[i] / water[i];
            for (k, &(dx, dy)) in NEIGHBORS.iter().enumerate() {
                let f = flux[i][k];
                if f <= 0.0 {
                    continue;
                }
                let j = (y as isize + dy) as usize * w + (x as isize + dx) as usize;
                let s = (carried_fraction * f).min(new_sediment[i]);
                new_water[i] -= f;
                new_water[j] += f;
                new_sediment[i] -= s;
                new_sediment[j] += s;
            }
        }
    }

    for v in new_water.iter_mut() {
        *v = (*v * (1.0 - p.evaporation)).max(0.0);
    }
    for v in new_sediment.iter_mut() {
        *v = v.max(0.0);
    }

    Ok(ErosionState {
        height: Grid2D::from_vec(w, h, height)?,
        water: Grid2D::from_vec(w, h, new_water)?,
        sediment: Grid2D::from_vec(w, h, new_sediment)?,
    })
}

/// Runs `p.steps` passes.
pub fn erode(state: ErosionState, p: &ErosionParams, rng: &mut Rng) -> Result<ErosionState, PhysicsError> {
    let mut s = state;
    for _ in 0..p.steps {
        s = erosion_step(&s, p, rng)?;
    }
    Ok(s)
}
