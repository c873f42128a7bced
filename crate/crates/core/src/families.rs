//! The registry of built-in generator families. Each family renders a
//! validated parameter map and a seed to an image of any size.

use thiserror::Error;

use crate::draw::for_each_ellipse_pixel;
use crate::grid::{Grid2D, Mask};
use crate::image::{palette_color, RasterImage, Rgb};
use crate::math::{PI, TAU};
use crate::noise::{fbm_field, Fbm};
use crate::params::{validate_params, GeneratorSpec, ParamError, ParamKind, ParamReader, ParamSpec, Params};
use crate::rng::Rng;
use crate::{glyphs, patterns, physics, urban, vegetation};

pub const MIN_DIM: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("image must be at least {MIN_DIM}×{MIN_DIM}, got {0}×{1}")]
    TooSmall(usize, usize),
    #[error("generation failed: {0}")]
    Generation(String),
}

fn gen_err(e: impl std::fmt::Display) -> FamilyError {
    FamilyError::Generation(e.to_string())
}

type RenderFn = fn(&ParamReader, u64, usize, usize) -> Result<RasterImage, FamilyError>;

pub struct Family {
    pub name: &'static str,
    pub summary: &'static str,
    pub schema: &'static [ParamSpec],
    render: RenderFn,
}

impl Family {
    pub fn render(&self, params: &Params, seed: u64, width: usize, height: usize) -> Result<RasterImage, FamilyError> {
        if width < MIN_DIM || height < MIN_DIM {
            return Err(FamilyError::TooSmall(width, height));
        }
        validate_params(self.schema, params)?;
        (self.render)(&ParamReader(params), seed, width, height)
    }
}

impl std::fmt::Debug for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Family").field("name", &self.name).finish()
    }
}

pub fn families() -> &'static [Family] {
    &FAMILIES
}

pub fn family(name: &str) -> Result<&'static Family, FamilyError> {
    FAMILIES
        .iter()
        .find(|f| f.name == name)
        .ok_or_else(|| FamilyError::UnknownFamily(name.to_string()))
}

pub fn render_spec(spec: &GeneratorSpec, width: usize, height: usize) -> Result<RasterImage, FamilyError> {
    family(&spec.family)?.render(&spec.params, spec.seed, width, height)
}

static FAMILIES: [Family; 12] = [
    Family {
        name: "chladni",
        summary: "sand on a vibrating plate, Boltzmann-scattered onto nodal lines",
        schema: &[
            ParamSpec {
                name: "modes",
                kind: ParamKind::List { min_len: 2, max_len: 8, min: 1.0, max: 16.0 },
                doc: "flattened (m, n) pairs; seed-chosen when absent",
            },
            ParamSpec::number("beta_scale", 0.05, 20.0, "multiplier on the median-based inverse temperature"),
            ParamSpec::integer("particles", 0.0, 5e6, "grain count; default 10% of the pixel count"),
            ParamSpec::number("radius", 0.0, 8.0, "grain radius in px"),
        ],
        render: chladni,
    },
    Family {
        name: "caustics",
        summary: "light refracted through a wavy water surface onto a pool floor",
        schema: &[
            ParamSpec::integer("waves", 1.0, 16.0, "surface wave components"),
            ParamSpec::number("amplitude", 0.0, 0.05, "wave amplitude as a fraction of image width"),
            ParamSpec::number("depth", 0.01, 2.0, "floor depth as a fraction of image width"),
            ParamSpec::number("ior", 1.0, 2.5, "refractive index of the water"),
            ParamSpec::integer("photons_per_pixel", 1.0, 64.0, "photons per floor bin"),
        ],
        render: caustics,
    },
    Family {
        name: "dunes",
        summary: "noise terrain carved by rain, flow, erosion and deposition",
        schema: &[
            ParamSpec::integer("steps", 0.0, 2000.0, "erosion steps"),
            ParamSpec::number("relief", 1.0, 500.0, "terrain height range"),
            ParamSpec::number("rain", 0.0, 1.0, "rain per cell per step"),
            ParamSpec::number("capacity", 0.0, 10.0, "sediment capacity coefficient"),
        ],
        render: dunes,
    },
    Family {
        name: "flame",
        summary: "buoyant heat advected, diffused and cooled above burning logs",
        schema: &[
            ParamSpec::integer("steps", 1.0, 2000.0, "simulation steps"),
            ParamSpec::integer("logs", 0.0, 3.0, "log obstacles"),
            ParamSpec::number("buoyancy", 0.0, 3.0, "upward drift per unit heat"),
            ParamSpec::number("cooling", 0.0, 1.0, "cooling coefficient"),
            ParamSpec::number("sway", 0.0, 2.0, "horizontal wobble"),
        ],
        render: flame,
    },
    Family {
        name: "tree",
        summary: "stochastic L-system tree with elliptical leaves",
        schema: &[
            ParamSpec {
                name: "grammar",
                kind: ParamKind::Text,
                doc: "L-system text; a built-in stochastic tree when absent",
            },
            ParamSpec::integer("iterations", 0.0, 9.0, "rewriting iterations"),
            ParamSpec::number("angle", 0.0, 180.0, "turn angle in degrees"),
        ],
        render: tree,
    },
    Family {
        name: "bark",
        summary: "Gray-Scott reaction-diffusion stretched into bark texture",
        schema: &[
            ParamSpec::number("feed", 0.0, 0.12, "feed rate"),
            ParamSpec::number("kill", 0.0, 0.08, "kill rate"),
            ParamSpec::integer("steps", 0.0, 20000.0, "integration steps"),
            ParamSpec::integer("spots", 1.0, 64.0, "initial seed squares"),
        ],
        render: bark,
    },
    Family {
        name: "city",
        summary: "layered city: coastline, population, grown roads, lights",
        schema: &[
            ParamSpec::number("sea_fraction", 0.0, 1.0, "fraction of water cells"),
            ParamSpec::integer("centers", 1.0, 12.0, "urban centers for polycentric cities"),
            ParamSpec::choice("centric", &["mono", "poly"], "settlement structure"),
            ParamSpec::choice("road_model", &["colonize", "preferential", "grid"], "road growth model"),
            ParamSpec::choice("density", &["sparse", "dense"], "layout density"),
            ParamSpec::choice("lighting", &["night", "day"], "render mode"),
        ],
        render: city,
    },
    Family {
        name: "handwriting",
        summary: "brush-stroke pseudo-script on textured paper",
        schema: &[
            ParamSpec::integer("glyphs", 1.0, 200.0, "size of the invented glyph set"),
            ParamSpec::number("texture", 0.0, 1.0, "paper texture strength"),
            ParamSpec::choice("ruled", &["yes", "no"], "draw ruled lines"),
        ],
        render: handwriting,
    },
    Family {
        name: "print",
        summary: "printed pseudo-text in a blocky invented typeface",
        schema: &[
            ParamSpec::integer("glyphs", 1.0, 200.0, "size of the invented glyph set"),
            ParamSpec::number("texture", 0.0, 1.0, "paper texture strength"),
            ParamSpec::choice("ruled", &["yes", "no"], "draw ruled lines"),
        ],
        render: print,
    },
    Family {
        name: "tiles",
        summary: "tiled floor with cracks, stains and chipped edges",
        schema: &[
            ParamSpec::choice("kind", &["square", "brick", "herringbone", "hex", "any"], "tiling; `any` lets the seed choose"),
            ParamSpec::number("tile", 4.0, 1024.0, "tile size in px"),
            ParamSpec::integer("grout", 0.0, 16.0, "grout width in px"),
            ParamSpec::integer("cracks", 0.0, 500.0, "crack count"),
            ParamSpec::number("stain", 0.0, 1.0, "stain strength"),
            ParamSpec::number("chips", 0.0, 1.0, "chipped tile probability"),
        ],
        render: tiles,
    },
    Family {
        name: "granulation",
        summary: "solar granulation from warped Voronoi cells",
        schema: &[
            ParamSpec::number("cell", 4.0, 512.0, "typical granule size in px"),
            ParamSpec::number("warp", 0.0, 2.0, "warp amplitude relative to the cell size"),
        ],
        render: granulation,
    },
    Family {
        name: "clouds",
        summary: "fBM cloud cover over a sky gradient",
        schema: &[
            ParamSpec::number("coverage", 0.0, 1.0, "cloud-covered fraction"),
            ParamSpec::number("softness", 0.0, 1.0, "edge softness"),
        ],
        render: clouds,
    },
];

fn chladni(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let modes: Vec<physics::Mode> = match p.list("modes") {
        Some(xs) => {
            if xs.len() % 2 != 0 || xs.iter().any(|x| x.fract() != 0.0) {
                return Err(ParamError::new("modes", "expected integer (m, n) pairs").into());
            }
            let modes: Vec<_> = xs
                .chunks(2)
                .map(|c| physics::Mode {
                    m: c[0] as u32,
                    n: c[1] as u32,
                    amp: 1.0,
                })
                .collect();
            if modes.iter().any(|m| m.m == m.n) {
                return Err(ParamError::new("modes", "m = n gives a zero field").into());
            }
            modes
        }
        None => {
            let mut modes = Vec::new();
            while modes.len() < 2 {
                let m = 1 + rng.below(7) as u32;
                let n = 1 + rng.below(7) as u32;
                if m != n {
                    modes.push(physics::Mode {
                        m,
                        n,
                        amp: rng.range(0.5, 1.0),
                    });
                }
            }
            modes
        }
    };
    let params = physics::ChladniParams {
        modes,
        plate: 1.0,
        beta: 1.0,
        particles: p.usize("particles", w * h / 10),
        splat_radius: p.number("radius", 0.7),
    };
    params.validate().map_err(gen_err)?;
    let field = physics::chladni_field(&params, w, h).map_err(gen_err)?;
    let beta = physics::default_beta(&field) * p.number("beta_scale", 1.0);
    let pts = physics::boltzmann_particles(&field, beta, params.particles, &mut rng).map_err(gen_err)?;
    Ok(physics::render_particles(&pts, params.splat_radius, w, h, [24, 22, 28], [232, 212, 168]))
}

fn caustics(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let wf = w as f64;
    let waves = p.usize("waves", 5);
    let amplitude = p.number("amplitude", 0.015) * wf;
    let components = (0..waves)
        .map(|_| {
            let wavelength = wf * rng.range(0.1, 0.3);
            let k = TAU / wavelength;
            let theta = rng.range(0.0, TAU);
            physics::WaveComponent {
                amp: amplitude * rng.range(0.5, 1.0) / (waves as f64).sqrt(),
                kx: k * crate::math::cos(theta),
                ky: k * crate::math::sin(theta),
                phase: rng.range(0.0, TAU),
            }
        })
        .collect();
    let cp = physics::CausticsParams {
        surface: physics::WaveSurface { components },
        n1: 1.0,
        n2: p.number("ior", 1.33),
        depth: p.number("depth", 0.5) * wf,
        photons: p.usize("photons_per_pixel", 8) * w * h,
        bins: (w, h),
    };
    physics::render_caustics(&cp, rng.next_u64()).map_err(gen_err)
}

const SAND: [Rgb; 4] = [[70, 44, 24], [160, 112, 64], [220, 176, 116], [250, 226, 180]];

fn dunes(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let relief = p.number("relief", 60.0);
    let base = fbm_field(w, h, (w.max(h) as f64 / 2.5).max(1.0), Fbm::default(), rng.next_u64()).map_err(gen_err)?;
    // long transverse ridges riding on the noise
    let ridge_len = w as f64 / rng.range(6.0, 10.0);
    let tilt = rng.range(-0.4, 0.4);
    let height = Grid2D::from_fn(w, h, |x, y| {
        let n = base.get(x, y);
        let phase = (x as f64 + tilt * y as f64) / ridge_len * TAU + 3.0 * n;
        relief * (0.6 * n + 0.25 * crate::math::sin(phase).abs())
    })
    .map_err(gen_err)?;
    let params = physics::ErosionParams {
        rain: p.number("rain", 0.01),
        capacity: p.number("capacity", 1.0),
        steps: p.usize("steps", 60),
        ..Default::default()
    };
    let state = physics::erode(physics::ErosionState::dry(height), &params, &mut rng).map_err(gen_err)?;
    let surface = Grid2D::from_fn(w, h, |x, y| state.height.get(x, y) + state.sediment.get(x, y)).map_err(gen_err)?;
    Ok(hillshade(&surface, &SAND))
}

/// Lambert shading from the upper left.
fn hillshade(z: &Grid2D, palette: &[Rgb]) -> RasterImage {
    let (w, h) = z.dims();
    let (lx, ly, lz) = (-0.6, -0.6, 0.53);
    let mut img = RasterImage::new(w, h, palette[0]);
    img.map_pixels(|x, y, _| {
        let (xi, yi) = (x as isize, y as isize);
        let gx = (z.get_clamped(xi + 1, yi) - z.get_clamped(xi - 1, yi)) / 2.0;
        let gy = (z.get_clamped(xi, yi + 1) - z.get_clamped(xi, yi - 1)) / 2.0;
        let norm = (gx * gx + gy * gy + 1.0).sqrt();
        let shade = ((-gx * lx - gy * ly + lz) / norm).clamp(0.0, 1.0);
        palette_color(palette, shade)
    });
    img
}

fn flame(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let s = w.max(h).div_ceil(160).max(1);
    let (sw, sh) = (w.div_ceil(s).max(8), h.div_ceil(s).max(8));
    let mut fp = physics::FlameParams::new(sw, sh).map_err(gen_err)?;
    fp.inject_rate = sw / 2;
    fp.buoyancy = p.number("buoyancy", 0.8);
    fp.kappa = p.number("cooling", 0.03);
    fp.sway = p.number("sway", 0.5);
    let logs = p.usize("logs", 2);
    let mut obstacles = Mask::filled(sw, sh, false).map_err(gen_err)?;
    // hearth floor with an opening; heat only escapes through the opening
    let floor = (sh as f64 * 0.1).ceil() as usize;
    let gap = sw as f64 * rng.range(0.3, 0.45);
    let mid = sw as f64 * (0.5 + rng.range(-0.05, 0.05));
    for y in sh - floor..sh {
        for x in 0..sw {
            if ((x as f64 + 0.5) - mid).abs() > gap / 2.0 {
                obstacles.set(x, y, true);
            }
        }
    }
    for k in 0..logs {
        let cx = mid + gap * rng.range(-0.15, 0.15);
        let cy = sh as f64 * (0.96 - 0.03 * k as f64);
        let tilt = rng.range(-0.3, 0.3) + if k % 2 == 0 { 0.0 } else { PI / 8.0 };
        for_each_ellipse_pixel(sw, sh, (cx, cy), gap * 0.4, sh as f64 * 0.025, tilt, |x, y| {
            obstacles.set(x, y, true)
        });
    }
    fp.obstacles = obstacles.clone();
    for _ in 0..p.usize("steps", 150) {
        fp = physics::flame_step(&fp, &mut rng).map_err(gen_err)?;
    }
    let t = fp.temperature.resized(w, h).map_err(gen_err)?;
    let mut img = physics::render_flame(&t);
    img.map_pixels(|x, y, c| {
        let (ox, oy) = ((x * sw / w).min(sw - 1), (y * sh / h).min(sh - 1));
        if obstacles.get(ox, oy) {
            [46, 26, 14]
        } else {
            c
        }
    });
    Ok(img)
}

const TREE_GRAMMAR: &str = "axiom: FX
angle: 26
step: 10
width: 5
step_decay: 0.8
width_decay: 0.68
X -(0.4)-> F[+XL][-XL]FX
X -(0.3)-> F[++XL][-XL][+XL]
X -(0.3)-> F[-XL]F[+XL]X
";

fn tree(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let text = p.text("grammar", TREE_GRAMMAR);
    let mut ls = vegetation::parse_lsystem(text).map_err(|e| ParamError::new("grammar", e.to_string()))?;
    ls.angle = p.number("angle", ls.angle);
    let mut rng = Rng::new(seed);
    let symbols = vegetation::expand_capped(&ls, p.usize("iterations", 6), &mut rng, 2_000_000)
        .map_err(|e| ParamError::new("iterations", e.to_string()))?;
    let t = vegetation::turtle_render(&symbols, &ls, (0.0, 0.0), vegetation::HEADING_UP)
        .map_err(|e| ParamError::new("grammar", e.to_string()))?;
    vegetation::rasterize_tree(&t, w, h, &vegetation::TreeStyle::default()).map_err(gen_err)
}

const BARK: [Rgb; 4] = [[34, 22, 14], [86, 60, 40], [132, 100, 70], [176, 150, 118]];
const BARK_SIM: usize = 128;

fn bark(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let n = BARK_SIM;
    let mut u = Grid2D::filled(n, n, 1.0).map_err(gen_err)?;
    let mut v = Grid2D::zeros(n, n).map_err(gen_err)?;
    for _ in 0..p.usize("spots", 12) {
        let (cx, cy) = (rng.below(n), rng.below(n));
        for dy in 0..6 {
            for dx in 0..6 {
                let (x, y) = ((cx + dx) % n, (cy + dy) % n);
                u.set(x, y, 0.5);
                v.set(x, y, 0.25);
            }
        }
    }
    let gp = vegetation::GrayScottParams {
        feed: p.number("feed", 0.037),
        kill: p.number("kill", 0.06),
        steps: p.usize("steps", 2500),
        ..Default::default()
    };
    let (_, v) = vegetation::gray_scott(&u, &v, &gp).map_err(gen_err)?;
    let v = v.normalized();
    // periodic texture, repeated twice across and stretched along the trunk
    let (kx, ky) = (2.0 * n as f64 / w as f64, 0.6 * n as f64 / h as f64);
    let mut img = RasterImage::new(w, h, BARK[0]);
    img.map_pixels(|x, y, _| {
        let sx = (x as f64 * kx) as usize % n;
        let sy = (y as f64 * ky) as usize % n;
        palette_color(&BARK, 1.0 - v.get(sx, sy))
    });
    Ok(img)
}

fn city(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let spec = urban::CitySpec {
        width: w,
        height: h,
        sea_fraction: p.number("sea_fraction", 0.3),
        centers: p.usize("centers", 3),
        centric: match p.text("centric", "poly") {
            "mono" => urban::Centricity::Mono,
            _ => urban::Centricity::Poly,
        },
        road_model: match p.text("road_model", "colonize") {
            "preferential" => urban::RoadModel::Preferential,
            "grid" => urban::RoadModel::Grid,
            _ => urban::RoadModel::Colonize,
        },
        density: match p.text("density", "dense") {
            "sparse" => urban::Density::Sparse,
            _ => urban::Density::Dense,
        },
        lighting: match p.text("lighting", "night") {
            "day" => urban::LightingMode::Day,
            _ => urban::LightingMode::Night,
        },
        seed,
    };
    urban::render_city_spec(&spec).map_err(gen_err)
}

fn page(p: &ParamReader, seed: u64, w: usize, h: usize, style: glyphs::GlyphStyle) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let (layout, em, texture) = match style {
        glyphs::GlyphStyle::Brush => (glyphs::PageLayout::handwriting(w, h), w as f64 / 22.0, 0.15),
        glyphs::GlyphStyle::Print => (glyphs::PageLayout::print(w, h), w as f64 / 40.0, 0.05),
    };
    let count = p.usize("glyphs", 28);
    let set = glyphs::make_glyph_set(count, style, &mut rng);
    let model = glyphs::MarkovModel::random(count, &mut rng).map_err(gen_err)?;
    let capacity = ((layout.writable().0 / em).floor() as usize).max(1);
    let words = glyphs::sample_word_lengths(600, 0.35, 12.min(capacity), &mut rng);
    let placements = glyphs::layout_page(&words, em, &layout, &mut rng).map_err(gen_err)?;
    let sequence = glyphs::markov_sample(&model, placements.len(), &mut rng).map_err(gen_err)?;
    let style = glyphs::PageStyle {
        texture_strength: p.number("texture", texture),
        ruled: p.text("ruled", "no") == "yes",
        ..Default::default()
    };
    glyphs::render_page(&placements, &sequence, &set, &layout, &style, rng.next_u64()).map_err(gen_err)
}

fn handwriting(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    page(p, seed, w, h, glyphs::GlyphStyle::Brush)
}

fn print(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    page(p, seed, w, h, glyphs::GlyphStyle::Print)
}

const CERAMIC: [Rgb; 4] = [[196, 120, 84], [214, 196, 170], [150, 84, 60], [228, 220, 204]];

fn tiles(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let kind = match p.text("kind", "any") {
        "square" => patterns::TilingKind::Square,
        "brick" => patterns::TilingKind::Brick,
        "herringbone" => patterns::TilingKind::Herringbone,
        "hex" => patterns::TilingKind::Hex,
        _ => [
            patterns::TilingKind::Square,
            patterns::TilingKind::Brick,
            patterns::TilingKind::Herringbone,
            patterns::TilingKind::Hex,
        ][rng.below(4)],
    };
    let tile = p.number("tile", (w as f64 / 10.0).max(4.0)).round().max(4.0) as usize;
    let grout = p.usize("grout", (w / 256).max(1));
    let (tile_w, tile_h) = match kind {
        patterns::TilingKind::Brick => (tile, (tile / 2).max(1)),
        patterns::TilingKind::Herringbone => (tile, (tile / 2).max(grout + 1)),
        _ => (tile, tile),
    };
    let spec = patterns::TilingSpec {
        kind,
        tile_w,
        tile_h,
        grout,
        palette: CERAMIC.to_vec(),
        grout_color: [118, 110, 102],
        color_jitter: 0.12,
        seed: rng.next_u64(),
    };
    let (img, ids) = patterns::tile_pattern(&spec, w, h).map_err(gen_err)?;
    let img = patterns::apply_chips(&img, &ids, p.number("chips", 0.1), rng.next_u64()).map_err(gen_err)?;
    let img = patterns::apply_cracks(&img, &ids, p.usize("cracks", 5), 0.75, &mut rng).map_err(gen_err)?;
    patterns::apply_stains(&img, p.number("stain", 0.35), rng.next_u64()).map_err(gen_err)
}

fn granulation(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    let mut rng = Rng::new(seed);
    let cell = p.number("cell", (w.max(h) as f64 / 14.0).max(4.0));
    let (nx, ny) = ((w as f64 / cell).ceil() as i64 + 1, (h as f64 / cell).ceil() as i64 + 1);
    let mut points = Vec::new();
    for gy in -1..ny {
        for gx in -1..nx {
            points.push((
                (gx as f64 + 0.5 + 0.4 * rng.signed()) * cell,
                (gy as f64 + 0.5 + 0.4 * rng.signed()) * cell,
            ));
        }
    }
    let vp = patterns::VoronoiParams {
        warp_amp: p.number("warp", 0.25) * cell,
        warp_scale: 0.8 * cell,
        ridge_width: (cell * 0.08).max(1.0),
    };
    patterns::voronoi_shaded(&points, &vp, w, h, rng.next_u64()).map_err(gen_err)
}

fn clouds(p: &ParamReader, seed: u64, w: usize, h: usize) -> Result<RasterImage, FamilyError> {
    patterns::cloud_field(w, h, p.number("coverage", 0.45), p.number("softness", 0.12), seed).map_err(gen_err)
}
