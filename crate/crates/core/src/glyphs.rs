//! Meaningless writing: invented stroke glyphs, Markov-chain glyph
//! sequences, handwriting and print page layout, and textured page rendering.

use thiserror::Error;

use crate::draw::{cubic_point, for_each_capsule_pixel};
use crate::image::{scale_rgb, RasterImage, Rgb};
use crate::math::{cos, pow, sin, PI};
use crate::noise::{fbm_field, Fbm};
use crate::rng::Rng;
use crate::sampling::DiscreteSampler;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlyphError {
    #[error("bad Markov model: {0}")]
    BadModel(String),
    #[error("glyph size {em} px exceeds the writable width {writable} px")]
    GlyphTooLarge { em: f64, writable: f64 },
    #[error("word {index} ({len} glyphs) cannot fit on one line")]
    WordTooLong { index: usize, len: usize },
    #[error("invalid layout: {0}")]
    BadLayout(String),
    #[error("placement refers to slot {0}, beyond the glyph sequence")]
    MissingSlot(usize),
    #[error("glyph index {0} is out of range")]
    MissingGlyph(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GlyphStyle {
    Brush,
    Print,
}

/// Four control points in the unit em-box, y down.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicStroke(pub [(f64, f64); 4]);

#[derive(Debug, Clone, PartialEq)]
pub struct GlyphPrototype {
    pub strokes: Vec<CubicStroke>,
    /// Stroke thickness in em units.
    pub weight: f64,
    /// Brush strokes thin toward both ends.
    pub tapered: bool,
}

impl GlyphPrototype {
    pub fn control_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.strokes.iter().flat_map(|s| s.0.iter().copied())
    }
}

const PRINT_WEIGHT: f64 = 0.09;
const PRINT_GRID: [f64; 3] = [0.15, 0.5, 0.85];

pub fn make_glyph_set(n: usize, style: GlyphStyle, rng: &mut Rng) -> Vec<GlyphPrototype> {
    (0..n)
        .map(|_| match style {
            GlyphStyle::Brush => brush_glyph(rng),
            GlyphStyle::Print => print_glyph(rng),
        })
        .collect()
}

fn brush_glyph(rng: &mut Rng) -> GlyphPrototype {
    let count = 2 + rng.below(3);
    let mut strokes = Vec::with_capacity(count);
    // each stroke starts near where the previous one ended, like a pen lift
    let mut start = (rng.range(0.1, 0.9), rng.range(0.1, 0.9));
    for _ in 0..count {
        let mut pts = [start; 4];
        for p in pts.iter_mut().skip(1) {
            *p = (rng.range(0.08, 0.92), rng.range(0.08, 0.92));
        }
        strokes.push(CubicStroke(pts));
        let end = pts[3];
        start = (
            (end.0 + 0.3 * rng.signed()).clamp(0.08, 0.92),
            (end.1 + 0.3 * rng.signed()).clamp(0.08, 0.92),
        );
    }
    GlyphPrototype {
        strokes,
        weight: rng.range(0.06, 0.13),
        tapered: true,
    }
}

fn print_glyph(rng: &mut Rng) -> GlyphPrototype {
    let count = 1 + rng.below(4);
    let mut strokes = Vec::with_capacity(count);
    while strokes.len() < count {
        let a = (PRINT_GRID[rng.below(3)], PRINT_GRID[rng.below(3)]);
        let b = if rng.chance(0.5) {
            (PRINT_GRID[rng.below(3)], a.1)
        } else {
            (a.0, PRINT_GRID[rng.below(3)])
        };
        if a == b {
            continue;
        }
        let third = |t: f64| (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1));
        strokes.push(CubicStroke([a, third(1.0 / 3.0), third(2.0 / 3.0), b]));
    }
    GlyphPrototype {
        strokes,
        weight: PRINT_WEIGHT,
        tapered: false,
    }
}

/// First-order chain over glyph indices.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovModel {
    start: Vec<f64>,
    trans: Vec<Vec<f64>>,
}

fn check_distribution(row: &[f64], what: &str) -> Result<(), GlyphError> {
    if row.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
        return Err(GlyphError::BadModel(format!("{what} has a negative or non-finite entry")));
    }
    let s: f64 = row.iter().sum();
    if (s - 1.0).abs() > 1e-9 {
        return Err(GlyphError::BadModel(format!("{what} sums to {s}, not 1")));
    }
    Ok(())
}

impl MarkovModel {
    pub fn new(start: Vec<f64>, trans: Vec<Vec<f64>>) -> Result<Self, GlyphError> {
        let s = start.len();
        if s == 0 {
            return Err(GlyphError::BadModel("no states".into()));
        }
        if trans.len() != s || trans.iter().any(|r| r.len() != s) {
            return Err(GlyphError::BadModel(format!("transition matrix must be {s}×{s}")));
        }
        check_distribution(&start, "start vector")?;
        for (i, row) in trans.iter().enumerate() {
            check_distribution(row, &format!("row {i}"))?;
        }
        Ok(Self { start, trans })
    }

    /// A random chain where each state favors a few successors, which gives
    /// sequences recurring glyph pairs the way real scripts have.
    pub fn random(states: usize, rng: &mut Rng) -> Result<Self, GlyphError> {
        if states == 0 {
            return Err(GlyphError::BadModel("no states".into()));
        }
        let normalize = |mut row: Vec<f64>| {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= s);
            row
        };
        let start = normalize((0..states).map(|_| 0.2 + rng.next_f64()).collect());
        let trans = (0..states)
            .map(|_| {
                let row: Vec<f64> = (0..states)
                    .map(|_| {
                        let u = rng.next_f64();
                        0.05 + pow(u, 4.0) * 4.0
                    })
                    .collect();
                normalize(row)
            })
            .collect();
        Self::new(start, trans)
    }

    pub fn states(&self) -> usize {
        self.start.len()
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn trans(&self) -> &[Vec<f64>] {
        &self.trans
    }
}

pub fn markov_sample(m: &MarkovModel, length: usize, rng: &mut Rng) -> Result<Vec<usize>, GlyphError> {
    if length == 0 {
        return Ok(Vec::new());
    }
    let bad = |e: crate::sampling::SamplingError| GlyphError::BadModel(e.to_string());
    let start = DiscreteSampler::new(&m.start).map_err(bad)?;
    let rows = m
        .trans
        .iter()
        .map(|r| DiscreteSampler::new(r))
        .collect::<Result<Vec<_>, _>>()
        .map_err(bad)?;
    let mut seq = Vec::with_capacity(length);
    let mut s = start.sample(rng);
    seq.push(s);
    for _ in 1..length {
        s = rows[s].sample(rng);
        seq.push(s);
    }
    Ok(seq)
}

/// Truncated geometric word lengths on `1..=max_len`, `P(k) ∝ p(1−p)^(k−1)`.
pub fn sample_word_lengths(n_words: usize, p: f64, max_len: usize, rng: &mut Rng) -> Vec<usize> {
    let weights: Vec<f64> = (0..max_len.max(1)).map(|k| p * pow(1.0 - p, k as f64)).collect();
    match DiscreteSampler::new(&weights) {
        Ok(s) => (0..n_words).map(|_| 1 + s.sample(rng)).collect(),
        Err(_) => vec![1; n_words],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageLayout {
    pub width: usize,
    pub height: usize,
    pub margin: f64,
    pub line_height: f64,
    /// Space between words, in em.
    pub word_gap: f64,
    /// Zero for print.
    pub baseline_jitter: f64,
    /// Radians; zero for print.
    pub slant_jitter: f64,
    pub style: GlyphStyle,
}

impl PageLayout {
    pub fn print(width: usize, height: usize) -> Self {
        let m = width.min(height) as f64 * 0.08;
        Self {
            width,
            height,
            margin: m,
            line_height: height as f64 / 22.0,
            word_gap: 0.6,
            baseline_jitter: 0.0,
            slant_jitter: 0.0,
            style: GlyphStyle::Print,
        }
    }

    pub fn handwriting(width: usize, height: usize) -> Self {
        Self {
            line_height: height as f64 / 16.0,
            word_gap: 0.9,
            baseline_jitter: height as f64 * 0.004,
            slant_jitter: 0.12,
            style: GlyphStyle::Brush,
            ..Self::print(width, height)
        }
    }

    pub fn writable(&self) -> (f64, f64) {
        (
            self.width as f64 - 2.0 * self.margin,
            self.height as f64 - 2.0 * self.margin,
        )
    }

    pub fn validate(&self) -> Result<(), GlyphError> {
        let (ww, wh) = self.writable();
        if !(self.margin >= 0.0 && ww > 0.0 && wh > 0.0) {
            return Err(GlyphError::BadLayout("margins leave no writable area".into()));
        }
        if !(self.line_height > 0.0) {
            return Err(GlyphError::BadLayout("line_height must be > 0".into()));
        }
        if !(self.word_gap >= 0.0 && self.baseline_jitter >= 0.0 && self.slant_jitter >= 0.0) {
            return Err(GlyphError::BadLayout("gaps and jitters must be >= 0".into()));
        }
        Ok(())
    }
}

/// One glyph box: top-left corner `(x, y)`, side `em`, rotated about its
/// center. `slot` indexes the glyph sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub slot: usize,
    pub line: usize,
    pub x: f64,
    pub y: f64,
    pub em: f64,
    pub rotation: f64,
}

/// Fills lines left to right, wrapping whole words and stopping at the
/// bottom margin. Only brush layouts draw jitter from `rng`.
pub fn layout_page(
    word_lengths: &[usize],
    glyph_em: f64,
    l: &PageLayout,
    rng: &mut Rng,
) -> Result<Vec<Placement>, GlyphError> {
    l.validate()?;
    let (ww, _) = l.writable();
    if !(glyph_em > 0.0) || glyph_em > ww {
        return Err(GlyphError::GlyphTooLarge { em: glyph_em, writable: ww });
    }
    let capacity = (ww / glyph_em).floor() as usize;
    if let Some((index, &len)) = word_lengths.iter().enumerate().find(|(_, &n)| n > capacity) {
        return Err(GlyphError::WordTooLong { index, len });
    }
    let right = l.width as f64 - l.margin;
    let bottom = l.height as f64 - l.margin;
    let brush = l.style == GlyphStyle::Brush;
    let mut out = Vec::new();
    let mut line = 0usize;
    let mut x = l.margin;
    let mut slot = 0usize;
    let line_top = |line: usize| l.margin + line as f64 * l.line_height;
    if line_top(0) + glyph_em > bottom {
        return Ok(out);
    }
    'words: for &len in word_lengths {
        if len == 0 {
            continue;
        }
        if x > l.margin && x + len as f64 * glyph_em > right {
            line += 1;
            x = l.margin;
        }
        if line_top(line) + glyph_em > bottom {
            break 'words;
        }
        for _ in 0..len {
            let mut y = line_top(line);
            let mut rotation = 0.0;
            if brush {
                y = (y + l.baseline_jitter * rng.signed()).clamp(l.margin, bottom - glyph_em);
                rotation = l.slant_jitter * rng.signed();
            }
            out.push(Placement {
                slot,
                line,
                x,
                y,
                em: glyph_em,
                rotation,
            });
            slot += 1;
            x += glyph_em;
        }
        x += l.word_gap * glyph_em;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageStyle {
    pub paper: Rgb,
    pub ink: Rgb,
    /// `0` gives a flat page.
    pub texture_strength: f64,
    pub ruled: bool,
}

impl Default for PageStyle {
    fn default() -> Self {
        Self {
            paper: [246, 241, 228],
            ink: [24, 22, 38],
            texture_strength: 0.15,
            ruled: false,
        }
    }
}

const RULE_COLOR: Rgb = [170, 190, 220];

/// Paper texture and rules first, then every placed glyph flat in ink.
/// Glyph at `placements[i]` is `glyphs[sequence[slot]]`.
pub fn render_page(
    placements: &[Placement],
    sequence: &[usize],
    glyphs: &[GlyphPrototype],
    l: &PageLayout,
    style: &PageStyle,
    seed: u64,
) -> Result<RasterImage, GlyphError> {
    l.validate()?;
    let ts = style.texture_strength.clamp(0.0, 1.0);
    let (w, h) = (l.width, l.height);
    let mut img = RasterImage::new(w, h, style.paper);
    if ts > 0.0 {
        let tex = fbm_field(w, h, (w.max(h) as f64 / 6.0).max(1.0), Fbm::default(), seed)
            .map_err(|e| GlyphError::BadLayout(e.to_string()))?
            .normalized();
        img.map_pixels(|x, y, c| scale_rgb(c, 1.0 - ts * tex.get(x, y)));
    }
    if style.ruled {
        let mut k = 1;
        loop {
            let y = l.margin + k as f64 * l.line_height - 1.0;
            if y >= h as f64 - l.margin {
                break;
            }
            let row = y.round() as usize;
            for x in 0..w {
                img.put(x, row, RULE_COLOR);
            }
            k += 1;
        }
    }
    for p in placements {
        let id = *sequence.get(p.slot).ok_or(GlyphError::MissingSlot(p.slot))?;
        let g = glyphs.get(id).ok_or(GlyphError::MissingGlyph(id))?;
        draw_glyph(&mut img, g, p, style.ink);
    }
    Ok(img)
}

fn draw_glyph(img: &mut RasterImage, g: &GlyphPrototype, p: &Placement, ink: Rgb) {
    let (w, h) = (img.width(), img.height());
    let (c, s) = (cos(p.rotation), sin(p.rotation));
    let to_px = |(u, v): (f64, f64)| {
        let (du, dv) = (u - 0.5, v - 0.5);
        (
            p.x + p.em * (0.5 + c * du - s * dv),
            p.y + p.em * (0.5 + s * du + c * dv),
        )
    };
    let base = g.weight * p.em;
    let pieces = ((p.em / 2.0).ceil() as usize).max(8);
    for stroke in &g.strokes {
        let mut prev = to_px(cubic_point(&stroke.0, 0.0));
        for k in 1..=pieces {
            let t = k as f64 / pieces as f64;
            let next = to_px(cubic_point(&stroke.0, t));
            let thick = if g.tapered {
                base * (0.45 + 0.55 * sin(PI * (t - 0.5 / pieces as f64)))
            } else {
                base
            };
            for_each_capsule_pixel(w, h, prev, next, thick / 2.0, |x, y| img.put(x, y, ink));
            prev = next;
        }
    }
}
