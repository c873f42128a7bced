use crate::image::{RasterImage, Rgb};
use crate::rng::hash_words;

use super::PatternError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TilingKind {
    Square,
    Brick,
    Herringbone,
    Hex,
}

/// Integer tile coordinates. Only equality and lattice offsets carry meaning.
pub type TileId = (i64, i64);

#[derive(Debug, Clone, PartialEq)]
pub struct TilingSpec {
    pub kind: TilingKind,
    /// Tile size in px. Herringbone bricks are `2·tile_h × tile_h`; hex
    /// cells sit on a lattice with column pitch `tile_w` and row pitch
    /// `tile_h`.
    pub tile_w: usize,
    pub tile_h: usize,
    pub grout: usize,
    pub palette: Vec<Rgb>,
    pub grout_color: Rgb,
    /// Per-tile brightness perturbation, fraction in `[0, 1]`.
    pub color_jitter: f64,
    pub seed: u64,
}

impl TilingSpec {
    pub fn validate(&self) -> Result<(), PatternError> {
        if self.tile_w == 0 || self.tile_h == 0 {
            return Err(PatternError::BadParams("tile dimensions must be >= 1".into()));
        }
        if self.palette.is_empty() {
            return Err(PatternError::BadParams("palette is empty".into()));
        }
        if !(0.0..=1.0).contains(&self.color_jitter) {
            return Err(PatternError::BadParams("color_jitter must be in [0, 1]".into()));
        }
        if self.kind == TilingKind::Herringbone && self.grout >= self.tile_h {
            return Err(PatternError::BadParams("grout must be thinner than the brick".into()));
        }
        Ok(())
    }

    /// Pixel shifts that map the id map onto itself, with the id offset each
    /// one induces.
    pub fn periods(&self) -> [((usize, usize), TileId); 2] {
        let (tw, th, g) = (self.tile_w, self.tile_h, self.grout);
        match self.kind {
            TilingKind::Square => [((tw + g, 0), (1, 0)), ((0, th + g), (0, 1))],
            TilingKind::Brick => [((tw + g, 0), (1, 0)), ((0, 2 * (th + g)), (0, 2))],
            // four cells along x is 2a + b, four cells down is 2a − b
            TilingKind::Herringbone => [((4 * th, 0), (2, 2)), ((0, 4 * th), (2, -2))],
            TilingKind::Hex => [((tw, 0), (1, 0)), ((0, 2 * th), (0, 2))],
        }
    }
}

/// Tile id per pixel, `None` for grout.
#[derive(Debug, Clone, PartialEq)]
pub struct TileMap {
    width: usize,
    height: usize,
    ids: Vec<Option<TileId>>,
}

impl TileMap {
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn get(&self, x: usize, y: usize) -> Option<TileId> {
        self.ids[y * self.width + x]
    }

    pub fn is_grout(&self, x: usize, y: usize) -> bool {
        self.get(x, y).is_none()
    }
}

fn div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn square_id(s: &TilingSpec, x: i64, y: i64) -> Option<TileId> {
    let (pw, ph) = ((s.tile_w + s.grout) as i64, (s.tile_h + s.grout) as i64);
    if x.rem_euclid(pw) >= s.tile_w as i64 || y.rem_euclid(ph) >= s.tile_h as i64 {
        return None;
    }
    Some((div(x, pw), div(y, ph)))
}

fn brick_id(s: &TilingSpec, x: i64, y: i64) -> Option<TileId> {
    let (pw, ph) = ((s.tile_w + s.grout) as i64, (s.tile_h + s.grout) as i64);
    let row = div(y, ph);
    let offset = if row.rem_euclid(2) == 1 { pw / 2 } else { 0 };
    let xs = x + offset;
    if xs.rem_euclid(pw) >= s.tile_w as i64 || y.rem_euclid(ph) >= s.tile_h as i64 {
        return None;
    }
    Some((div(xs, pw), row))
}

/// Lattice `a = (1, 1)`, `b = (2, −2)` in cell units: an offset is a lattice
/// vector iff `dx + dy` is even and `dx − dy ≡ 0 (mod 4)`. One horizontal
/// brick covers cells (0,0),(1,0) and one vertical brick (2,−1),(2,0).
const HERRING_CELLS: [((i64, i64), i64); 4] = [((0, 0), 0), ((1, 0), 0), ((2, -1), 1), ((2, 0), 1)];

fn herring_cell_id(cx: i64, cy: i64) -> TileId {
    for &((rx, ry), kind) in &HERRING_CELLS {
        let (dx, dy) = (cx - rx, cy - ry);
        if (dx + dy).rem_euclid(2) == 0 && (dx - dy).rem_euclid(4) == 0 {
            let m = (dx + dy) / 2;
            let n = (dx - dy) / 4;
            return (m, 2 * n + kind);
        }
    }
    unreachable!("the four representatives cover every residue class")
}

fn herringbone_id(s: &TilingSpec, x: i64, y: i64) -> Option<TileId> {
    let u = s.tile_h as i64;
    let g = s.grout as i64;
    let (cx, cy) = (div(x, u), div(y, u));
    let (lx, ly) = (x.rem_euclid(u), y.rem_euclid(u));
    let id = herring_cell_id(cx, cy);
    if (lx < g && herring_cell_id(cx - 1, cy) != id) || (ly < g && herring_cell_id(cx, cy - 1) != id) {
        return None;
    }
    Some(id)
}

/// Integer Voronoi over row-offset centers, in doubled coordinates so pixel
/// centers and half-pitch offsets stay integral.
fn hex_id(s: &TilingSpec, x: i64, y: i64) -> Option<TileId> {
    let (sx, sy) = (s.tile_w as i64, s.tile_h as i64);
    let (px, py) = (2 * x + 1, 2 * y + 1);
    let r0 = div(py, 2 * sy);
    let mut best = (i64::MAX, (0, 0));
    let mut second = i64::MAX;
    for r in r0 - 1..=r0 + 2 {
        let off = if r.rem_euclid(2) == 1 { sx } else { 0 };
        let c0 = div(px - off, 2 * sx);
        for c in c0 - 1..=c0 + 2 {
            let (qx, qy) = (2 * sx * c + off, 2 * sy * r);
            let d = (px - qx).pow(2) + (py - qy).pow(2);
            if d < best.0 || (d == best.0 && (r, c) < (best.1 .1, best.1 .0)) {
                second = best.0;
                best = (d, (c, r));
            } else if d < second {
                second = d;
            }
        }
    }
    if s.grout > 0 {
        let gap = (second as f64).sqrt() - (best.0 as f64).sqrt();
        if gap < 2.0 * s.grout as f64 {
            return None;
        }
    }
    Some(best.1)
}

pub fn tile_id_at(s: &TilingSpec, x: i64, y: i64) -> Option<TileId> {
    match s.kind {
        TilingKind::Square => square_id(s, x, y),
        TilingKind::Brick => brick_id(s, x, y),
        TilingKind::Herringbone => herringbone_id(s, x, y),
        TilingKind::Hex => hex_id(s, x, y),
    }
}

fn unit_hash(words: &[u64]) -> f64 {
    (hash_words(words) >> 11) as f64 / (1u64 << 53) as f64
}

fn tile_color(s: &TilingSpec, id: TileId) -> Rgb {
    let key = [s.seed, id.0 as u64, id.1 as u64];
    let base = s.palette[(hash_words(&key) % s.palette.len() as u64) as usize];
    let j = 1.0 + s.color_jitter * (unit_hash(&[s.seed ^ 0x5EED, id.0 as u64, id.1 as u64]) - 0.5);
    base.map(|v| (v as f64 * j).round().clamp(0.0, 255.0) as u8)
}

pub fn tile_pattern(s: &TilingSpec, width: usize, height: usize) -> Result<(RasterImage, TileMap), PatternError> {
    s.validate()?;
    if width == 0 || height == 0 {
        return Err(PatternError::BadParams("image must be non-empty".into()));
    }
    let mut ids = Vec::with_capacity(width * height);
    let mut img = RasterImage::new(width, height, s.grout_color);
    for y in 0..height {
        for x in 0..width {
            let id = tile_id_at(s, x as i64, y as i64);
            if let Some(id) = id {
                img.put(x, y, tile_color(s, id));
            }
            ids.push(id);
        }
    }
    Ok((img, TileMap { width, height, ids }))
}
