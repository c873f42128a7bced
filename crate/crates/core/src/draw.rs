//! Coverage-based raster primitives. All shapes are tested at pixel centers
//! `(x + 0.5, y + 0.5)` and written with a flat color, so drawing order only
//! matters where different colors overlap.

use crate::image::{RasterImage, Rgb};

/// Calls `f(x, y)` for every pixel whose center lies within `half_width` of
/// the segment `(x0, y0)–(x1, y1)`. Half-widths below 0.5 are raised to 0.5
/// so thin strokes stay connected.
pub fn for_each_capsule_pixel(
    width: usize,
    height: usize,
    (x0, y0): (f64, f64),
    (x1, y1): (f64, f64),
    half_width: f64,
    mut f: impl FnMut(usize, usize),
) {
    let r = half_width.max(0.5);
    let min_x = (x0.min(x1) - r).floor().max(0.0);
    let max_x = (x0.max(x1) + r).ceil().min(width as f64 - 1.0);
    let min_y = (y0.min(y1) - r).floor().max(0.0);
    let max_y = (y0.max(y1) + r).ceil().min(height as f64 - 1.0);
    if min_x > max_x || min_y > max_y {
        return;
    }
    let (dx, dy) = (x1 - x0, y1 - y0);
    let len2 = dx * dx + dy * dy;
    let r2 = r * r;
    for py in min_y as usize..=max_y as usize {
        for px in min_x as usize..=max_x as usize {
            let (cx, cy) = (px as f64 + 0.5, py as f64 + 0.5);
            let t = if len2 > 0.0 {
                (((cx - x0) * dx + (cy - y0) * dy) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let (qx, qy) = (x0 + t * dx - cx, y0 + t * dy - cy);
            if qx * qx + qy * qy <= r2 {
                f(px, py);
            }
        }
    }
}

pub fn draw_line(img: &mut RasterImage, a: (f64, f64), b: (f64, f64), width: f64, color: Rgb) {
    let (w, h) = (img.width(), img.height());
    for_each_capsule_pixel(w, h, a, b, width / 2.0, |x, y| img.put(x, y, color));
}

/// Filled ellipse with semi-axes `rx`, `ry` rotated by `rotation` radians.
/// The pixel containing the center is always covered.
pub fn for_each_ellipse_pixel(
    width: usize,
    height: usize,
    (cx, cy): (f64, f64),
    rx: f64,
    ry: f64,
    rotation: f64,
    mut f: impl FnMut(usize, usize),
) {
    let (s, c) = (crate::math::sin(rotation), crate::math::cos(rotation));
    let ext = rx.max(ry).max(0.0);
    let min_x = (cx - ext).floor().max(0.0);
    let max_x = (cx + ext).ceil().min(width as f64 - 1.0);
    let min_y = (cy - ext).floor().max(0.0);
    let max_y = (cy + ext).ceil().min(height as f64 - 1.0);
    let center_px = (cx.floor(), cy.floor());
    if min_x <= max_x && min_y <= max_y && rx > 0.0 && ry > 0.0 {
        for py in min_y as usize..=max_y as usize {
            for px in min_x as usize..=max_x as usize {
                let (dx, dy) = (px as f64 + 0.5 - cx, py as f64 + 0.5 - cy);
                let u = dx * c + dy * s;
                let v = -dx * s + dy * c;
                if (u * u) / (rx * rx) + (v * v) / (ry * ry) <= 1.0
                    && (px as f64, py as f64) != center_px
                {
                    f(px, py);
                }
            }
        }
    }
    let (px, py) = center_px;
    if px >= 0.0 && py >= 0.0 && px < width as f64 && py < height as f64 {
        f(px as usize, py as usize);
    }
}

pub fn fill_ellipse(
    img: &mut RasterImage,
    center: (f64, f64),
    rx: f64,
    ry: f64,
    rotation: f64,
    color: Rgb,
) {
    let (w, h) = (img.width(), img.height());
    for_each_ellipse_pixel(w, h, center, rx, ry, rotation, |x, y| img.put(x, y, color));
}

pub fn fill_rect(img: &mut RasterImage, x0: f64, y0: f64, x1: f64, y1: f64, color: Rgb) {
    let xa = x0.max(0.0).round() as usize;
    let ya = y0.max(0.0).round() as usize;
    let xb = (x1.round().max(0.0) as usize).min(img.width());
    let yb = (y1.round().max(0.0) as usize).min(img.height());
    for y in ya..yb {
        for x in xa..xb {
            img.put(x, y, color);
        }
    }
}

/// Evaluates a cubic Bézier at `t`.
pub fn cubic_point(p: &[(f64, f64); 4], t: f64) -> (f64, f64) {
    let u = 1.0 - t;
    let (b0, b1, b2, b3) = (u * u * u, 3.0 * u * u * t, 3.0 * u * t * t, t * t * t);
    (
        b0 * p[0].0 + b1 * p[1].0 + b2 * p[2].0 + b3 * p[3].0,
        b0 * p[0].1 + b1 * p[1].1 + b2 * p[2].1 + b3 * p[3].1,
    )
}
