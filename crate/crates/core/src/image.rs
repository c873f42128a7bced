//! 8-bit RGB rasters, grayscale conversion, palette mapping and PNG I/O.

use std::io::Cursor;
use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::grid::Grid2D;

pub type Rgb = [u8; 3];

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("palette needs at least 2 stops, got {0}")]
    BadPalette(usize),
    #[error("image dimensions must be nonzero, got {0}x{1}")]
    Empty(usize, usize),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot decode PNG: {0}")]
    Decode(String),
    #[error("cannot encode PNG: {0}")]
    Encode(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RasterImage {
    /// A `width`×`height` image filled with `fill`. Panics on zero dimensions.
    pub fn new(width: usize, height: usize, fill: Rgb) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be nonzero");
        let mut pixels = Vec::with_capacity(width * height * 3);
        for _ in 0..width * height {
            pixels.extend_from_slice(&fill);
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 || pixels.len() != width * height * 3 {
            return Err(ImageError::Empty(width, height));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Rgb {
        let i = (y * self.width + x) * 3;
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    #[inline]
    pub fn put(&mut self, x: usize, y: usize, c: Rgb) {
        let i = (y * self.width + x) * 3;
        self.pixels[i..i + 3].copy_from_slice(&c);
    }

    /// Writes `c` if `(x, y)` lies inside the image.
    #[inline]
    pub fn put_checked(&mut self, x: i64, y: i64, c: Rgb) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.put(x as usize, y as usize, c);
        }
    }

    /// Iterates `(x, y, rgb)` in row-major order.
    pub fn iter_pixels(&self) -> impl Iterator<Item = (usize, usize, Rgb)> + '_ {
        self.pixels.chunks_exact(3).enumerate().map(move |(i, p)| {
            (i % self.width, i / self.width, [p[0], p[1], p[2]])
        })
    }

    pub fn map_pixels(&mut self, mut f: impl FnMut(usize, usize, Rgb) -> Rgb) {
        let w = self.width;
        for (i, p) in self.pixels.chunks_exact_mut(3).enumerate() {
            let c = f(i % w, i / w, [p[0], p[1], p[2]]);
            p.copy_from_slice(&c);
        }
    }

    pub fn encode_png(&self) -> Result<Vec<u8>, ImageError> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Eight);
            let mut writer = enc
                .write_header()
                .map_err(|e| ImageError::Encode(e.to_string()))?;
            writer
                .write_image_data(&self.pixels)
                .map_err(|e| ImageError::Encode(e.to_string()))?;
        }
        Ok(out)
    }

    /// Decodes a PNG. Gray, gray-alpha and RGBA inputs are converted to RGB
    /// (alpha dropped); 16-bit inputs are stripped to 8 bits.
    pub fn decode_png(bytes: &[u8]) -> Result<Self, ImageError> {
        let decode = |e: png::DecodingError| ImageError::Decode(e.to_string());
        let mut dec = png::Decoder::new(Cursor::new(bytes));
        dec.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
        let mut reader = dec.read_info().map_err(decode)?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| ImageError::Decode("image too large".into()))?;
        let mut buf = vec![0; size];
        let info = reader.next_frame(&mut buf).map_err(decode)?;
        let (w, h) = (info.width as usize, info.height as usize);
        let data = &buf[..info.buffer_size()];
        let pixels: Vec<u8> = match info.color_type {
            png::ColorType::Rgb => data.to_vec(),
            png::ColorType::Rgba => data
                .chunks_exact(4)
                .flat_map(|p| [p[0], p[1], p[2]])
                .collect(),
            png::ColorType::Grayscale => data.iter().flat_map(|&g| [g, g, g]).collect(),
            png::ColorType::GrayscaleAlpha => data
                .chunks_exact(2)
                .flat_map(|p| [p[0], p[0], p[0]])
                .collect(),
            png::ColorType::Indexed => {
                return Err(ImageError::Decode("unexpanded palette image".into()))
            }
        };
        Self::from_pixels(w, h, pixels).map_err(|_| ImageError::Decode("bad dimensions".into()))
    }

    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<(), ImageError> {
        let path = path.as_ref();
        let bytes = self.encode_png()?;
        std::fs::write(path, bytes).map_err(|source| ImageError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load_png(path: impl AsRef<Path>) -> Result<Self, ImageError> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|source| ImageError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::decode_png(&bytes)
    }

    /// Grayscale copy using Rec. 709 luma, rounded half-up.
    pub fn to_gray(&self) -> Self {
        let mut out = self.clone();
        out.map_pixels(|_, _, c| {
            let y = luma(c);
            [y, y, y]
        });
        out
    }

    /// Nearest-neighbour resize.
    pub fn resized_nearest(&self, width: usize, height: usize) -> Self {
        let mut out = RasterImage::new(width, height, [0, 0, 0]);
        for y in 0..height {
            let sy = y * self.height / height;
            for x in 0..width {
                let sx = x * self.width / width;
                out.put(x, y, self.get(sx, sy));
            }
        }
        out
    }
}

/// Rec. 709 luma as a float in `[0, 255]`.
#[inline]
pub fn luminance(c: Rgb) -> f64 {
    0.2126 * c[0] as f64 + 0.7152 * c[1] as f64 + 0.0722 * c[2] as f64
}

/// Rec. 709 luma rounded half-up to a byte.
#[inline]
pub fn luma(c: Rgb) -> u8 {
    (luminance(c) + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Free-function form of [`RasterImage::to_gray`].
pub fn to_gray(img: &RasterImage) -> RasterImage {
    img.to_gray()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Color at parameter `t ∈ [0, 1]` along evenly spaced palette stops.
pub fn palette_color(palette: &[Rgb], t: f64) -> Rgb {
    let t = t.clamp(0.0, 1.0);
    let segs = (palette.len() - 1) as f64;
    let pos = t * segs;
    let i = (pos.floor() as usize).min(palette.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (palette[i], palette[i + 1]);
    let mix = |ca: u8, cb: u8| (ca as f64 + (cb as f64 - ca as f64) * f).round() as u8;
    [mix(a[0], b[0]), mix(a[1], b[1]), mix(a[2], b[2])]
}

/// Maps a scalar field onto a palette: `t = clamp((v-lo)/(hi-lo), 0, 1)`.
pub fn field_to_image(
    grid: &Grid2D,
    palette: &[Rgb],
    lo: f64,
    hi: f64,
) -> Result<RasterImage, ImageError> {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(ImageError::InvalidRange { lo, hi });
    }
    if palette.len() < 2 {
        return Err(ImageError::BadPalette(palette.len()));
    }
    let mut img = RasterImage::new(grid.width(), grid.height(), palette[0]);
    let span = hi - lo;
    img.map_pixels(|x, y, _| palette_color(palette, (grid.get(x, y) - lo) / span));
    Ok(img)
}

/// Multiplies a color by a factor in `[0, 1]`, rounding to nearest.
#[inline]
pub fn scale_rgb(c: Rgb, f: f64) -> Rgb {
    let s = |v: u8| (v as f64 * f).round().clamp(0.0, 255.0) as u8;
    [s(c[0]), s(c[1]), s(c[2])]
}

/// Linear blend `a·(1-t) + b·t`.
#[inline]
pub fn blend(a: Rgb, b: Rgb, t: f64) -> Rgb {
    let t = t.clamp(0.0, 1.0);
    let m = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * t).round() as u8;
    [m(a[0], b[0]), m(a[1], b[1]), m(a[2], b[2])]
}
