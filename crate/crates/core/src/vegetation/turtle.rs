//! Turtle interpretation of L-system strings and tree rasterization.

use thiserror::Error;

use crate::draw::{draw_line, fill_ellipse};
use crate::image::{RasterImage, Rgb};
use crate::math::{cos, sin};

use super::lsystem::LSystem;

/// Leaf ellipse aspect: semi-axes are `0.5·step` along the heading and
/// `0.25·step` across it.
const LEAF_LONG: f64 = 0.5;
const LEAF_SHORT: f64 = 0.25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TurtleError {
    #[error("unbalanced brackets at symbol {0}")]
    UnbalancedBrackets(usize),
    #[error("nothing to draw")]
    EmptyOutput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub width: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf {
    pub cx: f64,
    pub cy: f64,
    pub rx: f64,
    pub ry: f64,
    pub rotation: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TurtleOutput {
    pub segments: Vec<Segment>,
    pub leaves: Vec<Leaf>,
}

impl TurtleOutput {
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    x0: s.x0 + dx,
                    y0: s.y0 + dy,
                    x1: s.x1 + dx,
                    y1: s.y1 + dy,
                    ..*s
                })
                .collect(),
            leaves: self
                .leaves
                .iter()
                .map(|l| Leaf {
                    cx: l.cx + dx,
                    cy: l.cy + dy,
                    ..*l
                })
                .collect(),
        }
    }
}

/// Heading pointing up the image (toward negative y).
pub const HEADING_UP: f64 = -std::f64::consts::FRAC_PI_2;

/// Walks `symbols`: `F` draws, `f` moves, `+`/`-` turn by `ls.angle`, `[`/`]`
/// push/pop state, `L` drops a leaf. Other symbols are ignored. Heading is in
/// radians in image coordinates (y down).
pub fn turtle_render(
    symbols: &str,
    ls: &LSystem,
    origin: (f64, f64),
    heading: f64,
) -> Result<TurtleOutput, TurtleError> {
    let turn = ls.angle.to_radians();
    let mut out = TurtleOutput::default();
    let (mut x, mut y) = origin;
    let mut h = heading;
    let mut depth = 0usize;
    let mut stack: Vec<(f64, f64, f64, usize)> = Vec::new();
    let mut step = ls.step;
    let mut width = ls.width;

    for (i, c) in symbols.chars().enumerate() {
        match c {
            'F' | 'f' => {
                let (nx, ny) = (x + step * cos(h), y + step * sin(h));
                if c == 'F' {
                    out.segments.push(Segment {
                        x0: x,
                        y0: y,
                        x1: nx,
                        y1: ny,
                        width,
                        depth,
                    });
                }
                x = nx;
                y = ny;
            }
            '+' => h += turn,
            '-' => h -= turn,
            '[' => {
                stack.push((x, y, h, depth));
                depth += 1;
                step = ls.step * crate::math::pow(ls.step_decay, depth as f64);
                width = ls.width * crate::math::pow(ls.width_decay, depth as f64);
            }
            ']' => {
                let (px, py, ph, pd) = stack.pop().ok_or(TurtleError::UnbalancedBrackets(i))?;
                x = px;
                y = py;
                h = ph;
                depth = pd;
                step = ls.step * crate::math::pow(ls.step_decay, depth as f64);
                width = ls.width * crate::math::pow(ls.width_decay, depth as f64);
            }
            'L' => out.leaves.push(Leaf {
                cx: x,
                cy: y,
                rx: LEAF_LONG * step,
                ry: LEAF_SHORT * step,
                rotation: h,
                depth,
            }),
            _ => {}
        }
    }
    if !stack.is_empty() {
        return Err(TurtleError::UnbalancedBrackets(symbols.chars().count()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeStyle {
    pub background: Rgb,
    pub bark: Rgb,
    pub leaf: Rgb,
    /// Leaf color variation per depth level, blended toward `leaf_tip`.
    pub leaf_tip: Rgb,
}

impl Default for TreeStyle {
    fn default() -> Self {
        Self {
            background: [232, 238, 240],
            bark: [84, 60, 40],
            leaf: [46, 110, 40],
            leaf_tip: [120, 170, 60],
        }
    }
}

/// Draws branches then leaves, scaled uniformly so the geometry's bounding
/// box fills the image with a 5% margin and sits centered.
pub fn rasterize_tree(
    t: &TurtleOutput,
    width: usize,
    height: usize,
    style: &TreeStyle,
) -> Result<RasterImage, TurtleError> {
    if t.segments.is_empty() && t.leaves.is_empty() {
        return Err(TurtleError::EmptyOutput);
    }
    let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64, r: f64| {
        bb.0 = bb.0.min(x - r);
        bb.1 = bb.1.min(y - r);
        bb.2 = bb.2.max(x + r);
        bb.3 = bb.3.max(y + r);
    };
    for s in &t.segments {
        grow(s.x0, s.y0, s.width / 2.0);
        grow(s.x1, s.y1, s.width / 2.0);
    }
    for l in &t.leaves {
        grow(l.cx, l.cy, l.rx.max(l.ry));
    }
    let (bw, bh) = ((bb.2 - bb.0).max(1e-9), (bb.3 - bb.1).max(1e-9));
    let usable_w = width as f64 * 0.9;
    let usable_h = height as f64 * 0.9;
    let scale = (usable_w / bw).min(usable_h / bh);
    let (cx, cy) = ((bb.0 + bb.2) / 2.0, (bb.1 + bb.3) / 2.0);
    let (ox, oy) = (width as f64 / 2.0, height as f64 / 2.0);
    let map = |x: f64, y: f64| ((x - cx) * scale + ox, (y - cy) * scale + oy);

    let mut img = RasterImage::new(width, height, style.background);
    let max_depth = t
        .segments
        .iter()
        .map(|s| s.depth)
        .chain(t.leaves.iter().map(|l| l.depth))
        .max()
        .unwrap_or(0)
        .max(1);
    for s in &t.segments {
        draw_line(&mut img, map(s.x0, s.y0), map(s.x1, s.y1), (s.width * scale).max(1.0), style.bark);
    }
    for l in &t.leaves {
        let tint = l.depth as f64 / max_depth as f64;
        let color = crate::image::blend(style.leaf, style.leaf_tip, tint);
        fill_ellipse(&mut img, map(l.cx, l.cy), l.rx * scale, l.ry * scale, l.rotation, color);
    }
    Ok(img)
}
