//! Floor caustics under a sinusoidal water surface.
//!
//! Vertical photons hit the surface, bend by Snell's law at the local normal
//! and land on a flat floor `depth` below. The floor is periodic with the
//! bin grid, so every launched photon is counted exactly once.

use crate::grid::Grid2D;
use crate::image::{field_to_image, RasterImage, Rgb};
use crate::math::{cos, sin};
use crate::rng::Rng;

use super::PhysicsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn neg(self) -> Vec3 {
        self.scale(-1.0)
    }

    pub fn normalized(self) -> Vec3 {
        self.scale(1.0 / self.length())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveComponent {
    pub amp: f64,
    pub kx: f64,
    pub ky: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WaveSurface {
    pub components: Vec<WaveComponent>,
}

impl WaveSurface {
    pub fn height(&self, x: f64, y: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.amp * sin(c.kx * x + c.ky * y + c.phase))
            .sum()
    }

    /// `(∂h/∂x, ∂h/∂y)`.
    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        self.components.iter().fold((0.0, 0.0), |(gx, gy), c| {
            let d = c.amp * cos(c.kx * x + c.ky * y + c.phase);
            (gx + d * c.kx, gy + d * c.ky)
        })
    }

    /// Upward unit normal `normalize(-∂h/∂x, -∂h/∂y, 1)`.
    pub fn normal(&self, x: f64, y: f64) -> Vec3 {
        let (gx, gy) = self.gradient(x, y);
        Vec3::new(-gx, -gy, 1.0).normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refraction {
    Refracted(Vec3),
    TotalInternalReflection,
}

const UNIT_TOL: f64 = 1e-9;

/// Vector-form Snell refraction of `dir` at a surface with normal `normal`
/// going from index `n1` into `n2`. The normal may face either side.
pub fn refract(dir: Vec3, normal: Vec3, n1: f64, n2: f64) -> Result<Refraction, PhysicsError> {
    for v in [dir, normal] {
        let len = v.length();
        if !((len - 1.0).abs() <= UNIT_TOL) {
            return Err(PhysicsError::NotUnit(len));
        }
    }
    if !(n1 > 0.0 && n2 > 0.0 && n1.is_finite() && n2.is_finite()) {
        return Err(PhysicsError::BadParams("refractive indices must be > 0".into()));
    }
    let mut n = normal;
    let mut cos_i = -n.dot(dir);
    if cos_i < 0.0 {
        n = n.neg();
        cos_i = -cos_i;
    }
    let eta = n1 / n2;
    let k = 1.0 - eta * eta * (1.0 - cos_i * cos_i);
    if k < 0.0 {
        return Ok(Refraction::TotalInternalReflection);
    }
    let t = dir.scale(eta).add(n.scale(eta * cos_i - k.sqrt()));
    Ok(Refraction::Refracted(t.normalized()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CausticsParams {
    pub surface: WaveSurface,
    pub n1: f64,
    pub n2: f64,
    pub depth: f64,
    pub photons: usize,
    /// Floor bins; the surface and floor span one length unit per bin.
    pub bins: (usize, usize),
}

impl CausticsParams {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        if !(self.n1 > 0.0 && self.n2 > 0.0) {
            return Err(PhysicsError::BadParams("refractive indices must be > 0".into()));
        }
        if !(self.depth > 0.0 && self.depth.is_finite()) {
            return Err(PhysicsError::BadParams("depth must be > 0".into()));
        }
        if self.bins.0 == 0 || self.bins.1 == 0 {
            return Err(PhysicsError::BadParams("bins must be nonzero".into()));
        }
        for c in &self.surface.components {
            if !(c.amp >= 0.0 && c.amp.is_finite() && c.kx.is_finite() && c.ky.is_finite() && c.phase.is_finite()) {
                return Err(PhysicsError::BadParams("wave components must be finite with amp >= 0".into()));
            }
        }
        Ok(())
    }
}

/// Photon hit counts per floor bin, row-major. Launches are stratified: the
/// `i`-th photon starts at a uniform point inside bin `i mod bins`.
///
/// A photon that would be totally internally reflected (only possible when
/// `n1 > n2`) is deposited straight below its launch point so the total
/// stays equal to `photons`.
pub fn accumulate_caustics(p: &CausticsParams, seed: u64) -> Result<Vec<u64>, PhysicsError> {
    p.validate()?;
    let (bw, bh) = p.bins;
    let nbins = bw * bh;
    let mut counts = vec![0u64; nbins];
    let mut rng = Rng::new(seed);
    let down = Vec3::new(0.0, 0.0, -1.0);
    let (fw, fh) = (bw as f64, bh as f64);
    for i in 0..p.photons {
        let cell = i % nbins;
        let x = (cell % bw) as f64 + rng.next_f64();
        let y = (cell / bw) as f64 + rng.next_f64();
        let h = p.surface.height(x, y);
        let normal = p.surface.normal(x, y);
        let (hx, hy) = match refract(down, normal, p.n1, p.n2)? {
            Refraction::Refracted(t) if t.z < 0.0 => {
                let s = (h + p.depth) / -t.z;
                (x + s * t.x, y + s * t.y)
            }
            _ => (x, y),
        };
        let bx = (hx.rem_euclid(fw).floor() as usize).min(bw - 1);
        let by = (hy.rem_euclid(fh).floor() as usize).min(bh - 1);
        counts[by * bw + bx] += 1;
    }
    Ok(counts)
}

const WATER_PALETTE: [Rgb; 4] = [[0, 0, 0], [10, 60, 110], [70, 170, 210], [245, 255, 255]];

/// Tone-maps photon counts with `γ = 0.5` against the 99th-percentile bin.
pub fn render_caustics(p: &CausticsParams, seed: u64) -> Result<RasterImage, PhysicsError> {
    let counts = accumulate_caustics(p, seed)?;
    let (bw, bh) = p.bins;
    let as_f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let reference = crate::math::quantile(&as_f, 0.99).max(1e-9);
    let toned = Grid2D::from_vec(
        bw,
        bh,
        as_f.iter().map(|&c| (c / reference).min(1.0).sqrt()).collect(),
    )?;
    Ok(field_to_image(&toned, &WATER_PALETTE, 0.0, 1.0).expect("static palette and range are valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(a: f64) -> f64 {
        a.to_radians()
    }

    #[test]
    fn normal_incidence_passes_straight() {
        let d = Vec3::new(0.0, 0.0, -1.0);
        let n = Vec3::new(0.0, 0.0, 1.0);
        for (n1, n2) in [(1.0, 1.33), (1.5, 1.0), (2.0, 2.0)] {
            match refract(d, n, n1, n2).unwrap() {
                Refraction::Refracted(t) => {
                    assert!((t.x).abs() < 1e-15 && (t.y).abs() < 1e-15 && (t.z + 1.0).abs() < 1e-15)
                }
                Refraction::TotalInternalReflection => panic!("unexpected TIR"),
            }
        }
    }

    #[test]
    fn critical_angle_gives_tir() {
        let t = deg(60.0);
        let d = Vec3::new(t.sin(), 0.0, -t.cos());
        let n = Vec3::new(0.0, 0.0, 1.0);
        assert_eq!(refract(d, n, 1.5, 1.0).unwrap(), Refraction::TotalInternalReflection);
    }

    #[test]
    fn rejects_non_unit_inputs() {
        let n = Vec3::new(0.0, 0.0, 1.0);
        assert!(matches!(
            refract(Vec3::new(0.0, 0.0, -1.1), n, 1.0, 1.33),
            Err(PhysicsError::NotUnit(_))
        ));
        assert!(matches!(
            refract(Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 0.5), 1.0, 1.33),
            Err(PhysicsError::NotUnit(_))
        ));
    }

    #[test]
    fn flat_surface_geometry() {
        let s = WaveSurface {
            components: vec![WaveComponent { amp: 0.0, kx: 1.0, ky: 2.0, phase: 0.3 }],
        };
        assert_eq!(s.height(3.0, 4.0), 0.0);
        assert_eq!(s.normal(3.0, 4.0), Vec3::new(0.0, 0.0, 1.0));
    }

    #[test]
    fn crest_has_vertical_normal() {
        let s = WaveSurface {
            components: vec![WaveComponent { amp: 0.7, kx: 2.0, ky: 0.0, phase: 0.0 }],
        };
        // argument 2x = π/2 at the crest
        let x = std::f64::consts::FRAC_PI_4;
        let (gx, _) = s.gradient(x, 0.0);
        assert!(gx.abs() < 1e-15);
        let n = s.normal(x, 0.0);
        assert!((n.z - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_photons_is_black() {
        let p = CausticsParams {
            surface: WaveSurface::default(),
            n1: 1.0,
            n2: 1.33,
            depth: 5.0,
            photons: 0,
            bins: (8, 8),
        };
        let img = render_caustics(&p, 1).unwrap();
        assert!(img.iter_pixels().all(|px| px.2 == [0, 0, 0]));
    }
}
