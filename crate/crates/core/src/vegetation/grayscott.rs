//! Explicit-Euler Gray-Scott reaction-diffusion on a periodic grid.

use crate::grid::Grid2D;

use super::VegetationError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrayScottParams {
    pub feed: f64,
    pub kill: f64,
    pub du: f64,
    pub dv: f64,
    pub dt: f64,
    pub steps: usize,
}

impl Default for GrayScottParams {
    fn default() -> Self {
        Self {
            feed: 0.037,
            kill: 0.06,
            du: 0.16,
            dv: 0.08,
            dt: 1.0,
            steps: 5000,
        }
    }
}

impl GrayScottParams {
    pub fn validate(&self) -> Result<(), VegetationError> {
        if !(self.du >= 0.0 && self.dv >= 0.0 && self.dt > 0.0) {
            return Err(VegetationError::BadParams(
                "diffusion rates must be >= 0 and dt > 0".into(),
            ));
        }
        if !(self.feed.is_finite() && self.kill.is_finite()) {
            return Err(VegetationError::BadParams("feed and kill must be finite".into()));
        }
        let courant = self.dt * self.du.max(self.dv);
        if courant > 0.25 {
            return Err(VegetationError::Unstable(courant));
        }
        Ok(())
    }
}

/// Runs `p.steps` updates of
/// `u' = Du∇²u − uv² + F(1−u)`, `v' = Dv∇²v + uv² − (F+k)v`,
/// clamping both species to `[0, 2]` after each step.
pub fn gray_scott(
    u: &Grid2D,
    v: &Grid2D,
    p: &GrayScottParams,
) -> Result<(Grid2D, Grid2D), VegetationError> {
    if !u.same_dims(v) {
        return Err(VegetationError::ShapeMismatch);
    }
    p.validate()?;
    let (w, h) = u.dims();
    let mut a = u.values().to_vec();
    let mut b = v.values().to_vec();
    let mut a2 = a.clone();
    let mut b2 = b.clone();
    for _ in 0..p.steps {
        for y in 0..h {
            let up = if y == 0 { h - 1 } else { y - 1 } * w;
            let down = if y + 1 == h { 0 } else { y + 1 } * w;
            let row = y * w;
            for x in 0..w {
                let left = if x == 0 { w - 1 } else { x - 1 };
                let right = if x + 1 == w { 0 } else { x + 1 };
                let i = row + x;
                let (ui, vi) = (a[i], b[i]);
                let lap_u = a[row + left] + a[row + right] + a[up + x] + a[down + x] - 4.0 * ui;
                let lap_v = b[row + left] + b[row + right] + b[up + x] + b[down + x] - 4.0 * vi;
                let uvv = ui * vi * vi;
                let du = p.du * lap_u - uvv + p.feed * (1.0 - ui);
                let dv = p.dv * lap_v + uvv - (p.feed + p.kill) * vi;
                a2[i] = (ui + p.dt * du).clamp(0.0, 2.0);
                b2[i] = (vi + p.dt * dv).clamp(0.0, 2.0);
            }
        }
        std::mem::swap(&mut a, &mut a2);
        std::mem::swap(&mut b, &mut b2);
    }
    Ok((Grid2D::from_vec(w, h, a)?, Grid2D::from_vec(w, h, b)?))
}

/// The usual starting state: `u = 1`, `v = 0`, with a centered
/// `side`×`side` square at `u = 0.5`, `v = 0.25`.
pub fn seeded_square(width: usize, height: usize, side: usize) -> Result<(Grid2D, Grid2D), VegetationError> {
    let x0 = width.saturating_sub(side) / 2;
    let y0 = height.saturating_sub(side) / 2;
    let inside = |x: usize, y: usize| x >= x0 && x < x0 + side && y >= y0 && y < y0 + side;
    let u = Grid2D::from_fn(width, height, |x, y| if inside(x, y) { 0.5 } else { 1.0 })?;
    let v = Grid2D::from_fn(width, height, |x, y| if inside(x, y) { 0.25 } else { 0.0 })?;
    Ok((u, v))
}
