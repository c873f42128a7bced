//! Scalar heat-field flame: stochastic injection, buoyant semi-Lagrangian
//! advection, explicit diffusion and height-dependent cooling.
//!
//! Row 0 is the top of the domain; heat rises toward smaller `y`.

use crate::grid::{Grid2D, Mask};
use crate::image::{field_to_image, RasterImage, Rgb};
use crate::rng::Rng;

use super::PhysicsError;

#[derive(Debug, Clone, PartialEq)]
pub struct FlameParams {
    pub temperature: Grid2D,
    /// Static log-shaped obstacles; they hold no heat.
    pub obstacles: Mask,
    /// Heat pulses per step.
    pub inject_rate: usize,
    pub inject_heat: f64,
    /// Upward displacement in cells per step per unit of heat.
    pub buoyancy: f64,
    /// Explicit diffusion coefficient, at most 0.25.
    pub alpha: f64,
    /// Cooling coefficient per unit height fraction.
    pub kappa: f64,
    /// Maximum horizontal wobble, as a fraction of the vertical displacement.
    pub sway: f64,
}

impl FlameParams {
    /// Zero field, no obstacles, default coefficients.
    pub fn new(width: usize, height: usize) -> Result<Self, PhysicsError> {
        Ok(Self {
            temperature: Grid2D::zeros(width, height)?,
            obstacles: Mask::filled(width, height, false)?,
            inject_rate: 40,
            inject_heat: 4.0,
            buoyancy: 0.8,
            alpha: 0.2,
            kappa: 0.05,
            sway: 0.5,
        })
    }

    pub fn validate(&self) -> Result<(), PhysicsError> {
        if self.temperature.dims() != self.obstacles.dims() {
            return Err(PhysicsError::ShapeMismatch);
        }
        if !(self.alpha >= 0.0) {
            return Err(PhysicsError::BadParams("alpha must be >= 0".into()));
        }
        if self.alpha > 0.25 {
            return Err(PhysicsError::Unstable(self.alpha));
        }
        if !(0.0..=1.0).contains(&self.kappa) {
            return Err(PhysicsError::BadParams("kappa must be in [0, 1]".into()));
        }
        if !(self.buoyancy >= 0.0 && self.buoyancy.is_finite()) {
            return Err(PhysicsError::BadParams("buoyancy must be >= 0".into()));
        }
        if !(self.inject_heat >= 0.0 && self.inject_heat.is_finite()) {
            return Err(PhysicsError::BadParams("inject_heat must be >= 0".into()));
        }
        if !(self.sway >= 0.0 && self.sway.is_finite()) {
            return Err(PhysicsError::BadParams("sway must be >= 0".into()));
        }
        Ok(())
    }

    /// Cells eligible for heat injection: the bottom 10% of rows plus the
    /// one-cell shell around obstacles. Shell cells are listed twice, which
    /// doubles their injection odds.
    fn injection_sites(&self) -> Vec<usize> {
        let (w, h) = self.temperature.dims();
        let bottom_rows = (h as f64 * 0.1).ceil().max(1.0) as usize;
        let mut sites = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if self.obstacles.get(x, y) {
                    continue;
                }
                let i = y * w + x;
                if y >= h - bottom_rows {
                    sites.push(i);
                }
                if self.touches_obstacle(x, y) {
                    sites.push(i);
                    sites.push(i);
                }
            }
        }
        sites
    }

    fn touches_obstacle(&self, x: usize, y: usize) -> bool {
        let (w, h) = self.obstacles.dims();
        for dy in -1isize..=1 {
            for dx in -1isize..=1 {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if (dx, dy) != (0, 0)
                    && nx >= 0
                    && ny >= 0
                    && (nx as usize) < w
                    && (ny as usize) < h
                    && self.obstacles.get(nx as usize, ny as usize)
                {
                    return true;
                }
            }
        }
        false
    }
}

/// Bilinear sample with border clamping; obstacle cells read as zero heat.
fn sample_heat(t: &Grid2D, obstacles: &Mask, x: f64, y: f64) -> f64 {
    let (w, h) = t.dims();
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let x0 = x.floor() as usize;
    let y0 = y.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let at = |cx: usize, cy: usize| if obstacles.get(cx, cy) { 0.0 } else { t.get(cx, cy) };
    let top = at(x0, y0) * (1.0 - fx) + at(x1, y0) * fx;
    let bottom = at(x0, y1) * (1.0 - fx) + at(x1, y1) * fx;
    top * (1.0 - fy) + bottom * fy
}

/// One step: inject → advect → diffuse → cool.
pub fn flame_step(p: &FlameParams, rng: &mut Rng) -> Result<FlameParams, PhysicsError> {
    p.validate()?;
    let (w, h) = p.temperature.dims();
    let mut t = p.temperature.clone();

    if p.inject_rate > 0 {
        let sites = p.injection_sites();
        if !sites.is_empty() {
            let vals = t.values_mut();
            for _ in 0..p.inject_rate {
                let i = sites[rng.below(sites.len())];
                vals[i] += p.inject_heat;
            }
        }
    }

    if p.buoyancy > 0.0 {
        let wobble: Vec<f64> = (0..w).map(|_| p.sway * rng.signed()).collect();
        let src = t.clone();
        for y in 0..h {
            for x in 0..w {
                if p.obstacles.get(x, y) {
                    continue;
                }
                let lift = p.buoyancy * src.get(x, y);
                if lift == 0.0 {
                    continue;
                }
                let v = sample_heat(&src, &p.obstacles, x as f64 - wobble[x] * lift, y as f64 + lift);
                t.set(x, y, v);
            }
        }
    }

    if p.alpha > 0.0 {
        let src = t.clone();
        for y in 0..h {
            for x in 0..w {
                if p.obstacles.get(x, y) {
                    continue;
                }
                let c = src.get(x, y);
                let mut lap = 0.0;
                for (dx, dy) in [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)] {
                    let (nx, ny) = (x as isize + dx, y as isize + dy);
                    let inside = nx >= 0 && ny >= 0 && (nx as usize) < w && (ny as usize) < h;
                    // reflective at the border and at obstacle faces
                    if inside && !p.obstacles.get(nx as usize, ny as usize) {
                        lap += src.get(nx as usize, ny as usize) - c;
                    }
                }
                t.set(x, y, c + p.alpha * lap);
            }
        }
    }

    if p.kappa > 0.0 {
        for y in 0..h {
            let factor = 1.0 - p.kappa * (1.0 - y as f64 / h as f64);
            for x in 0..w {
                let v = t.get(x, y) * factor;
                t.set(x, y, v);
            }
        }
    }

    for y in 0..h {
        for x in 0..w {
            if p.obstacles.get(x, y) {
                t.set(x, y, 0.0);
            }
        }
    }

    Ok(FlameParams {
        temperature: t,
        ..p.clone()
    })
}

pub const FLAME_PALETTE: [Rgb; 5] = [
    [0, 0, 0],
    [180, 20, 0],
    [255, 120, 0],
    [255, 220, 40],
    [255, 255, 255],
];

/// Maps heat onto black→red→orange→yellow→white up to the 99.5th percentile.
pub fn render_flame(t: &Grid2D) -> RasterImage {
    let reference = crate::math::quantile(t.values(), 0.995).max(1e-9);
    field_to_image(t, &FLAME_PALETTE, 0.0, reference).expect("static palette and positive range")
}
