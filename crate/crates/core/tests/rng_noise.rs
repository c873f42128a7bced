use procsim::image::{luma, RasterImage};
use procsim::noise::{domain_warp, fbm, fbm_field, perlin2, Fbm, NoiseTable};
use procsim::rng::Rng;

#[test]
fn splitmix_reference_streams() {
    let mut r = Rng::new(0);
    assert_eq!(r.next_u64(), 0xE220A8397B1DCDAF);
    assert_eq!(r.next_u64(), 0x6E789E6AA1B965F4);
    assert_eq!(r.next_u64(), 0x06C45D188009454F);
    let mut r = Rng::new(1);
    assert_eq!(r.next_u64(), 0x910A2DEC89025CC1);
    assert_eq!(r.next_u64(), 0xBEEB8DA1658EEC67);
    assert_eq!(r.next_u64(), 0xF893A2EEFB32555E);
}

#[test]
fn uniform_mean_is_one_half() {
    let mut r = Rng::new(12345);
    let n = 1_000_000;
    let mean = (0..n).map(|_| r.next_f64()).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.002, "mean {mean}");
}

#[test]
fn next_f64_is_half_open() {
    let mut r = Rng::new(7);
    assert!((0..100_000).map(|_| r.next_f64()).all(|u| (0.0..1.0).contains(&u)));
}

#[test]
fn pure_red_grays_to_54() {
    assert_eq!(luma([255, 0, 0]), 54);
    let img = RasterImage::new(2, 2, [255, 0, 0]).to_gray();
    assert!(img.iter_pixels().all(|(_, _, c)| c == [54, 54, 54]));
}

#[test]
fn perlin_range_over_a_million_samples() {
    let table = NoiseTable::new(3);
    let mut r = Rng::new(99);
    for _ in 0..1_000_000 {
        let (x, y) = (r.signed() * 200.0, r.signed() * 200.0);
        let v = perlin2(x, y, &table);
        assert!((-1.0..=1.0).contains(&v), "perlin2({x}, {y}) = {v}");
    }
}

#[test]
fn lattice_zeros() {
    let table = NoiseTable::new(11);
    for i in -16..=16 {
        for j in -16..=16 {
            assert_eq!(perlin2(i as f64, j as f64, &table), 0.0);
        }
    }
    assert_eq!(perlin2(3.0, 7.0, &table), 0.0);
}

#[test]
fn fbm_geometric_bound() {
    let table = NoiseTable::new(5);
    let p = Fbm {
        octaves: 4,
        lacunarity: 2.0,
        gain: 0.5,
    };
    assert_eq!(p.amplitude_bound(), 1.875);
    let mut r = Rng::new(8);
    for _ in 0..100_000 {
        let v = fbm(r.signed() * 50.0, r.signed() * 50.0, p, &table).unwrap();
        assert!(v.abs() <= 1.875);
    }
}

#[test]
fn fbm_rejects_zero_octaves() {
    let table = NoiseTable::new(5);
    let p = Fbm {
        octaves: 0,
        ..Fbm::default()
    };
    assert!(fbm(0.5, 0.5, p, &table).is_err());
}

#[test]
fn single_cell_field_at_origin_is_zero() {
    let g = fbm_field(1, 1, 10.0, Fbm::default(), 4).unwrap();
    assert_eq!(g.values(), &[0.0]);
}

#[test]
fn field_is_sign_balanced() {
    let g = fbm_field(256, 256, 32.0, Fbm::default(), 21).unwrap();
    assert!(g.min() < 0.0 && g.max() > 0.0);
    assert_eq!(g, fbm_field(256, 256, 32.0, Fbm::default(), 21).unwrap());
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

#[test]
fn different_seeds_are_uncorrelated() {
    for (s1, s2) in [(1, 2), (3, 4), (100, 101)] {
        let a = fbm_field(256, 256, 16.0, Fbm::default(), s1).unwrap();
        let b = fbm_field(256, 256, 16.0, Fbm::default(), s2).unwrap();
        let r = pearson(a.values(), b.values());
        assert!((-0.2..=0.2).contains(&r), "seeds {s1},{s2}: r = {r}");
    }
}

#[test]
fn warp_displacement_is_bounded() {
    let table = NoiseTable::new(2);
    let mut r = Rng::new(4);
    for _ in 0..10_000 {
        let (x, y) = (r.signed() * 30.0, r.signed() * 30.0);
        let (wx, wy) = domain_warp(x, y, 3.0, &table);
        assert!(((wx - x).powi(2) + (wy - y).powi(2)).sqrt() <= 3.0 * 2f64.sqrt() + 1e-12);
        assert_eq!(domain_warp(x, y, 3.0, &table), (wx, wy));
    }
}
