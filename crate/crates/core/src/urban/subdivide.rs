use crate::rng::Rng;

use super::UrbanError;

/// Axis-aligned rectangle `[x0, x1) × [y0, y1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self { x0, y0, x1, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    /// Area of the intersection of the two interiors.
    pub fn overlap(&self, o: &Rect) -> f64 {
        let w = self.x1.min(o.x1) - self.x0.max(o.x0);
        let h = self.y1.min(o.y1) - self.y0.max(o.y0);
        if w > 0.0 && h > 0.0 {
            w * h
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreetSegment {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Subdivision {
    pub blocks: Vec<Rect>,
    pub streets: Vec<StreetSegment>,
}

/// Recursively splits the longer side (width on ties) at `0.5 ± jitter·u`,
/// `u` uniform in `[−1, 1)`. A rectangle whose longer side is at most
/// `2·min_block` becomes a block. The split fraction is clamped so neither
/// child is thinner than `min_block`.
pub fn grid_subdivide(bbox: Rect, min_block: f64, jitter: f64, rng: &mut Rng) -> Result<Subdivision, UrbanError> {
    if !(min_block > 0.0 && min_block.is_finite()) {
        return Err(UrbanError::BadParams("min_block must be > 0".into()));
    }
    if !(0.0..=0.3).contains(&jitter) {
        return Err(UrbanError::BadParams(format!("jitter must be in [0, 0.3], got {jitter}")));
    }
    if !(bbox.width() > 0.0 && bbox.height() > 0.0) {
        return Err(UrbanError::BadParams("bbox must have positive area".into()));
    }
    let mut out = Subdivision::default();
    let mut stack = vec![bbox];
    while let Some(r) = stack.pop() {
        let (w, h) = (r.width(), r.height());
        let side = w.max(h);
        if side <= 2.0 * min_block {
            out.blocks.push(r);
            continue;
        }
        let lo = min_block / side;
        let f = (0.5 + jitter * rng.signed()).clamp(lo, 1.0 - lo);
        if w >= h {
            let x = r.x0 + f * w;
            out.streets.push(StreetSegment { a: (x, r.y0), b: (x, r.y1) });
            // right pushed first so the left half is processed first
            stack.push(Rect::new(x, r.y0, r.x1, r.y1));
            stack.push(Rect::new(r.x0, r.y0, x, r.y1));
        } else {
            let y = r.y0 + f * h;
            out.streets.push(StreetSegment { a: (r.x0, y), b: (r.x1, y) });
            stack.push(Rect::new(r.x0, y, r.x1, r.y1));
            stack.push(Rect::new(r.x0, r.y0, r.x1, y));
        }
    }
    Ok(out)
}
