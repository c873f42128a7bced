use procsim::glyphs::{
    layout_page, make_glyph_set, markov_sample, render_page, sample_word_lengths, GlyphError, GlyphStyle, MarkovModel,
    PageLayout, PageStyle,
};
use procsim::rng::Rng;

#[test]
fn markov_transitions_converge_to_the_matrix() {
    let trans = vec![
        vec![0.1, 0.6, 0.3, 0.0],
        vec![0.25, 0.25, 0.25, 0.25],
        vec![0.7, 0.0, 0.1, 0.2],
        vec![0.0, 0.5, 0.0, 0.5],
    ];
    let m = MarkovModel::new(vec![0.25; 4], trans.clone()).unwrap();
    let seq = markov_sample(&m, 100_000, &mut Rng::new(17)).unwrap();
    let mut counts = [[0u64; 4]; 4];
    for w in seq.windows(2) {
        counts[w[0]][w[1]] += 1;
    }
    for (i, row) in counts.iter().enumerate() {
        let total: u64 = row.iter().sum();
        assert!(total > 5000, "state {i} visited {total} times");
        for (j, &c) in row.iter().enumerate() {
            let p = c as f64 / total as f64;
            assert!((p - trans[i][j]).abs() <= 0.01, "P({i}->{j}) = {p}, want {}", trans[i][j]);
        }
    }
}

#[test]
fn random_models_are_row_stochastic() {
    let mut rng = Rng::new(4);
    for states in [1, 5, 40] {
        let m = MarkovModel::random(states, &mut rng).unwrap();
        assert!((m.start().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for row in m.trans() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            assert!(row.iter().all(|&p| p >= 0.0));
        }
    }
}

#[test]
fn glyph_control_points_stay_in_the_em_box() {
    for style in [GlyphStyle::Brush, GlyphStyle::Print] {
        let set = make_glyph_set(50, style, &mut Rng::new(8));
        assert_eq!(set.len(), 50);
        for g in &set {
            assert!((1..=6).contains(&g.strokes.len()));
            assert!(g.control_points().all(|(x, y)| (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)));
        }
        assert_eq!(set, make_glyph_set(50, style, &mut Rng::new(8)));
    }
}

fn words(n: usize, seed: u64) -> Vec<usize> {
    sample_word_lengths(n, 0.35, 12, &mut Rng::new(seed))
}

#[test]
fn print_lines_sit_on_exact_baselines() {
    let l = PageLayout::print(400, 300);
    let placed = layout_page(&words(200, 1), 12.0, &l, &mut Rng::new(2)).unwrap();
    assert!(!placed.is_empty());
    for p in &placed {
        let k = (p.y - l.margin) / l.line_height;
        assert_eq!(p.y, l.margin + k.round() * l.line_height);
        assert_eq!(p.line as f64, k.round());
        assert_eq!(p.rotation, 0.0);
    }
}

#[test]
fn placements_stay_inside_margins() {
    for l in [PageLayout::print(320, 240), PageLayout::handwriting(320, 240)] {
        let placed = layout_page(&words(300, 5), 10.0, &l, &mut Rng::new(6)).unwrap();
        for p in &placed {
            assert!(p.x >= l.margin && p.x + p.em <= l.width as f64 - l.margin + 1e-9);
            assert!(p.y >= l.margin && p.y + p.em <= l.height as f64 - l.margin + 1e-9);
        }
    }
}

#[test]
fn placements_read_left_to_right_then_down() {
    for l in [PageLayout::print(500, 400), PageLayout::handwriting(500, 400)] {
        let placed = layout_page(&words(400, 9), 11.0, &l, &mut Rng::new(3)).unwrap();
        for w in placed.windows(2) {
            let (a, b) = (w[0], w[1]);
            assert_eq!(b.slot, a.slot + 1);
            if a.line == b.line {
                assert!(b.x > a.x);
            } else {
                assert_eq!(b.line, a.line + 1);
            }
        }
    }
}

#[test]
fn overlong_word_and_oversized_glyph_are_errors() {
    let l = PageLayout::print(200, 200);
    let capacity = ((200.0 - 2.0 * l.margin) / 10.0) as usize;
    assert!(matches!(
        layout_page(&[2, capacity + 1], 10.0, &l, &mut Rng::new(0)),
        Err(GlyphError::WordTooLong { index: 1, .. })
    ));
    assert!(matches!(
        layout_page(&[1], 500.0, &l, &mut Rng::new(0)),
        Err(GlyphError::GlyphTooLarge { .. })
    ));
}

#[test]
fn texture_only_touches_the_background() {
    let l = PageLayout::handwriting(240, 180);
    let glyphs = make_glyph_set(20, GlyphStyle::Brush, &mut Rng::new(1));
    let placed = layout_page(&words(80, 2), 12.0, &l, &mut Rng::new(3)).unwrap();
    let m = MarkovModel::random(20, &mut Rng::new(4)).unwrap();
    let seq = markov_sample(&m, placed.len(), &mut Rng::new(5)).unwrap();
    let plain = PageStyle {
        texture_strength: 0.0,
        ..PageStyle::default()
    };
    let textured = PageStyle {
        texture_strength: 0.5,
        ..PageStyle::default()
    };
    let a = render_page(&placed, &seq, &glyphs, &l, &plain, 9).unwrap();
    let b = render_page(&placed, &seq, &glyphs, &l, &textured, 9).unwrap();
    let inked = |img: &procsim::RasterImage| -> Vec<bool> { img.iter_pixels().map(|(_, _, c)| c == plain.ink).collect() };
    assert_eq!(inked(&a), inked(&b));
    assert!(inked(&a).iter().any(|&i| i));
    assert_ne!(a, b);
    assert_eq!(b, render_page(&placed, &seq, &glyphs, &l, &textured, 9).unwrap());
}

#[test]
fn blank_untextured_page_is_uniform() {
    let l = PageLayout::print(64, 48);
    let style = PageStyle {
        texture_strength: 0.0,
        ..PageStyle::default()
    };
    let img = render_page(&[], &[], &[], &l, &style, 1).unwrap();
    assert!(img.iter_pixels().all(|(_, _, c)| c == style.paper));
}

#[test]
fn print_pages_ignore_the_layout_rng() {
    let l = PageLayout::print(300, 200);
    let w = words(100, 7);
    let a = layout_page(&w, 10.0, &l, &mut Rng::new(1)).unwrap();
    let b = layout_page(&w, 10.0, &l, &mut Rng::new(999)).unwrap();
    assert_eq!(a, b);
}
