use procsim::grid::{Grid2D, Mask};
use procsim::patterns::{tile_id_at, TilingKind, TilingSpec};
use procsim::physics::{
    accumulate_caustics, chladni_field, erosion_step, flame_step, refract, render_particles, CausticsParams,
    ChladniParams, ErosionParams, ErosionState, FlameParams, Mode, Refraction, Vec3, WaveComponent, WaveSurface,
};
use procsim::rng::Rng;
use procsim::urban::{grid_subdivide, land_mask, Rect};
use proptest::prelude::*;

fn field(w: usize, h: usize, seed: u64, scale: f64) -> Grid2D {
    let mut rng = Rng::new(seed);
    Grid2D::from_fn(w, h, |_, _| rng.next_f64() * scale).unwrap()
}

fn quiet(t: Grid2D, alpha: f64, kappa: f64) -> FlameParams {
    let (w, h) = t.dims();
    FlameParams {
        temperature: t,
        obstacles: Mask::filled(w, h, false).unwrap(),
        inject_rate: 0,
        inject_heat: 0.0,
        buoyancy: 0.0,
        alpha,
        kappa,
        sway: 0.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diffusion_conserves_heat(w in 2usize..40, h in 2usize..40, alpha in 0.0f64..=0.25, seed: u64, steps in 1usize..30) {
        let t = field(w, h, seed, 8.0);
        let before = t.sum();
        let mut p = quiet(t, alpha, 0.0);
        let mut rng = Rng::new(seed);
        for _ in 0..steps {
            p = flame_step(&p, &mut rng).unwrap();
        }
        prop_assert!(((p.temperature.sum() - before) / before).abs() < 1e-9);
        prop_assert!(p.temperature.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn cooling_never_adds_heat(w in 2usize..30, h in 2usize..30, kappa in 0.0f64..=1.0, alpha in 0.0f64..=0.25, seed: u64) {
        let mut p = quiet(field(w, h, seed, 3.0), alpha, kappa);
        let mut rng = Rng::new(seed ^ 1);
        let mut last = p.temperature.sum();
        for _ in 0..10 {
            p = flame_step(&p, &mut rng).unwrap();
            let now = p.temperature.sum();
            prop_assert!(now <= last * (1.0 + 1e-12));
            last = now;
        }
    }

    #[test]
    fn caustics_keep_every_photon(
        amps in proptest::collection::vec((0.0f64..3.0, -2.0f64..2.0, -2.0f64..2.0, 0.0f64..6.3), 0..4),
        n1 in 0.5f64..2.0,
        n2 in 0.5f64..2.0,
        depth in 0.1f64..30.0,
        photons in 0usize..5000,
        bw in 1usize..32,
        bh in 1usize..32,
        seed: u64,
    ) {
        let surface = WaveSurface {
            components: amps.into_iter().map(|(amp, kx, ky, phase)| WaveComponent { amp, kx, ky, phase }).collect(),
        };
        let p = CausticsParams { surface, n1, n2, depth, photons, bins: (bw, bh) };
        let counts = accumulate_caustics(&p, seed).unwrap();
        prop_assert_eq!(counts.len(), bw * bh);
        prop_assert_eq!(counts.iter().sum::<u64>(), photons as u64);
    }

    #[test]
    fn erosion_conserves_solid_mass(
        w in 3usize..24,
        h in 3usize..24,
        rain in 0.0f64..0.2,
        rain_jitter in 0.0f64..=1.0,
        capacity in 0.0f64..3.0,
        dissolve in 0.01f64..=1.0,
        deposit in 0.01f64..=1.0,
        evaporation in 0.0f64..0.9,
        seed: u64,
    ) {
        let mut s = ErosionState::dry(field(w, h, seed, 10.0));
        let p = ErosionParams { rain, rain_jitter, capacity, dissolve, deposit, evaporation, steps: 0 };
        let before = s.solid_mass();
        let mut rng = Rng::new(seed);
        for _ in 0..60 {
            s = erosion_step(&s, &p, &mut rng).unwrap();
        }
        prop_assert!(((s.solid_mass() - before) / before).abs() < 1e-9);
        prop_assert!(s.water.values().iter().chain(s.sediment.values()).all(|&v| v >= 0.0 && v.is_finite()));
    }

    #[test]
    fn refraction_round_trips(theta in 0.0f64..1.55, phi in 0.0f64..std::f64::consts::TAU, n1 in 1.0f64..2.5, n2 in 1.0f64..2.5) {
        let d = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), -theta.cos());
        let up = Vec3::new(0.0, 0.0, 1.0);
        match refract(d, up, n1, n2).unwrap() {
            Refraction::Refracted(t) => {
                prop_assert!((t.length() - 1.0).abs() < 1e-12);
                // Snell: n1 sin θ1 = n2 sin θ2
                let s2 = (t.x * t.x + t.y * t.y).sqrt();
                prop_assert!((n1 * theta.sin() - n2 * s2).abs() < 1e-9);
                let Refraction::Refracted(b) = refract(t, up.neg(), n2, n1).unwrap() else {
                    return Err(TestCaseError::fail("reverse path reflected"));
                };
                prop_assert!((b.x - d.x).abs() < 1e-9 && (b.y - d.y).abs() < 1e-9 && (b.z - d.z).abs() < 1e-9);
            }
            Refraction::TotalInternalReflection => prop_assert!(n1 * theta.sin() > n2),
        }
    }

    #[test]
    fn chladni_field_is_antisymmetric(
        modes in proptest::collection::vec((1u32..8, 1u32..8, -2.0f64..2.0), 1..4),
        side in 2usize..48,
    ) {
        let modes: Vec<Mode> = modes.into_iter().filter(|&(m, n, _)| m != n).map(|(m, n, amp)| Mode { m, n, amp }).collect();
        prop_assume!(!modes.is_empty());
        let p = ChladniParams { modes, plate: 1.0, beta: 1.0, particles: 0, splat_radius: 0.0 };
        let a = chladni_field(&p, side, side).unwrap();
        for y in 0..side {
            for x in 0..side {
                prop_assert!((a.get(x, y) + a.get(y, x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn land_mask_floods_exactly(w in 1usize..80, h in 1usize..80, q in 0.0f64..=1.0, seed: u64) {
        let m = land_mask(w, h, q, seed).unwrap();
        prop_assert_eq!(w * h - m.count(), (q * (w * h) as f64).floor() as usize);
    }

    #[test]
    fn blocks_partition_their_box(bw in 10.0f64..500.0, bh in 10.0f64..500.0, min_block in 2.0f64..60.0, jitter in 0.0f64..=0.3, seed: u64) {
        let bbox = Rect::new(0.0, 0.0, bw, bh);
        let s = grid_subdivide(bbox, min_block, jitter, &mut Rng::new(seed)).unwrap();
        let total: f64 = s.blocks.iter().map(Rect::area).sum();
        prop_assert!((total - bbox.area()).abs() <= 1e-9 * bbox.area());
        for (i, a) in s.blocks.iter().enumerate() {
            for b in &s.blocks[i + 1..] {
                prop_assert!(a.overlap(b) <= 1e-9);
            }
        }
    }

    #[test]
    fn particle_splats_ignore_order_and_repeats(
        pts in proptest::collection::vec((-5.0f64..70.0, -5.0f64..70.0), 0..60),
        r in 0.0f64..4.0,
    ) {
        let img = render_particles(&pts, r, 64, 64, [0, 0, 0], [255, 255, 255]);
        let mut doubled: Vec<(f64, f64)> = pts.iter().rev().copied().collect();
        doubled.extend(pts.iter().copied());
        prop_assert_eq!(render_particles(&doubled, r, 64, 64, [0, 0, 0], [255, 255, 255]), img);
    }

    #[test]
    fn tilings_repeat_with_their_periods(kind in 0usize..4, tw in 2usize..24, th in 2usize..24, grout in 0usize..4) {
        let kind = [TilingKind::Square, TilingKind::Brick, TilingKind::Herringbone, TilingKind::Hex][kind];
        let s = TilingSpec {
            kind,
            tile_w: tw,
            tile_h: th,
            grout,
            palette: vec![[1, 2, 3]],
            grout_color: [0, 0, 0],
            color_jitter: 0.0,
            seed: 0,
        };
        for ((px, py), (di, dj)) in s.periods() {
            for y in -20i64..20 {
                for x in -20i64..20 {
                    let here = tile_id_at(&s, x, y).map(|(i, j)| (i + di, j + dj));
                    prop_assert_eq!(tile_id_at(&s, x + px as i64, y + py as i64), here);
                }
            }
        }
    }
}
