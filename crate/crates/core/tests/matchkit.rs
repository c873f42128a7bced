use std::collections::{BTreeSet, HashMap};

use procsim::image::{luma, RasterImage, Rgb};
use procsim::manifest::{Manifest, ManifestEntry};
use procsim::matchkit::{
    accuracy_report, append_answers, assemble_trials, perceptual_features, rank_candidates, read_answers, score,
    wilson_interval, Answer, DecoyPolicy, Evaluator, JudgeRequest, MatchError, MatchOutcome, Mode, CANDIDATES,
    WILSON_Z95,
};
use procsim::params::Params;
use procsim::rng::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn manifest(families: usize, seeds: u64) -> Manifest {
    let mut images = Vec::new();
    for f in 0..families {
        let family = format!("fam{f:02}");
        for s in 0..seeds {
            images.push(ManifestEntry {
                id: ManifestEntry::image_id(&family, s),
                family: family.clone(),
                seed: s,
                params: Params::new(),
                path: String::new(),
                sha256: String::new(),
            });
        }
    }
    Manifest { images }
}

fn family_of(m: &Manifest, id: &str) -> String {
    m.get(id).unwrap().family.clone()
}

#[test]
fn truth_slot_is_uniform() {
    let m = manifest(12, 2);
    let (_, truths) = assemble_trials(&m, 10_000, Mode::Color, DecoyPolicy::OtherFamilies, &mut Rng::new(2024)).unwrap();
    let mut counts = [0u64; CANDIDATES];
    for t in &truths.truths {
        counts[t.truth_index] += 1;
    }
    let e = 1000.0;
    let stat: f64 = counts.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let p = 1.0 - ChiSquared::new(9.0).unwrap().cdf(stat);
    assert!(p > 0.001, "chi-square p = {p}, counts {counts:?}");
}

#[test]
fn ten_families_put_every_other_family_among_the_decoys() {
    let m = manifest(10, 2);
    let (trials, truths) = assemble_trials(&m, 300, Mode::Color, DecoyPolicy::OtherFamilies, &mut Rng::new(5)).unwrap();
    for (trial, truth) in trials.trials.iter().zip(&truths.truths) {
        let reference = m.get(&trial.reference).unwrap();
        assert_eq!(reference.family, truth.family);
        let true_id = &trial.candidates[truth.truth_index];
        let true_entry = m.get(true_id).unwrap();
        assert_eq!(true_entry.family, truth.family);
        assert_ne!(true_entry.seed, reference.seed);
        let decoys: BTreeSet<String> = trial
            .candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != truth.truth_index)
            .map(|(_, id)| family_of(&m, id))
            .collect();
        assert_eq!(decoys.len(), 9);
        assert!(!decoys.contains(&truth.family));
    }
}

#[test]
fn too_few_families_or_seeds_are_errors() {
    assert!(matches!(
        assemble_trials(&manifest(5, 2), 10, Mode::Color, DecoyPolicy::OtherFamilies, &mut Rng::new(0)),
        Err(MatchError::InsufficientFamilies { have: 5, need: 10 })
    ));
    assert!(matches!(
        assemble_trials(&manifest(12, 1), 10, Mode::Color, DecoyPolicy::OtherFamilies, &mut Rng::new(0)),
        Err(MatchError::InsufficientSeeds { .. })
    ));
}

#[test]
fn scoring_undoes_the_shuffle() {
    let m = manifest(11, 3);
    let (trials, truths) = assemble_trials(&m, 500, Mode::Gray, DecoyPolicy::OtherFamilies, &mut Rng::new(9)).unwrap();
    let mut rng = Rng::new(10);
    let answers: Vec<Answer> = trials
        .trials
        .iter()
        .map(|t| Answer {
            trial_id: t.id.clone(),
            evaluator: Evaluator::Human,
            mode: t.mode,
            choice: rng.below(CANDIDATES),
            latency_ms: 0,
            session: None,
        })
        .collect();
    let outcomes = score(&answers, &truths).unwrap();
    for ((o, a), t) in outcomes.iter().zip(&answers).zip(&truths.truths) {
        assert_eq!(o.correct, a.choice == t.truth_index);
        // the candidate behind the chosen slot came from the reference's family
        // and not from the reference itself exactly when the answer is right
        let trial = &trials.trials.iter().find(|x| x.id == a.trial_id).unwrap();
        let chosen = m.get(&trial.candidates[a.choice]).unwrap();
        assert_eq!(o.correct, chosen.family == t.family);
    }
}

fn noise_image(seed: u64, w: usize, h: usize) -> RasterImage {
    let mut rng = Rng::new(seed);
    let base: Rgb = [rng.below(256) as u8, rng.below(256) as u8, rng.below(256) as u8];
    let mut img = RasterImage::new(w, h, base);
    let stripe = 2 + rng.below(12);
    img.map_pixels(|x, y, c| {
        if (x / stripe + y / (stripe + 1)).is_multiple_of(2) {
            c
        } else {
            [rng.below(256) as u8, c[1] / 2, c[2]]
        }
    });
    img
}

#[test]
fn byte_identical_truth_always_wins() {
    let m = manifest(12, 2);
    // both seeds of a family render the same picture
    let images: HashMap<String, RasterImage> = m
        .images
        .iter()
        .map(|e| {
            let fam: u64 = e.family[3..].parse().unwrap();
            (e.id.clone(), noise_image(fam, 64, 48))
        })
        .collect();
    for mode in [Mode::Color, Mode::Gray] {
        let (trials, truths) = assemble_trials(&m, 200, mode, DecoyPolicy::OtherFamilies, &mut Rng::new(77)).unwrap();
        let answers: Vec<Answer> = trials
            .trials
            .iter()
            .map(|t| {
                let r = perceptual_features(&images[&t.reference], mode);
                let c: Vec<Vec<f64>> = t.candidates.iter().map(|id| perceptual_features(&images[id], mode)).collect();
                Answer {
                    trial_id: t.id.clone(),
                    evaluator: Evaluator::Perceptual,
                    mode,
                    choice: rank_candidates(&r, &c).unwrap()[0],
                    latency_ms: 0,
                    session: None,
                }
            })
            .collect();
        let report = accuracy_report(&score(&answers, &truths).unwrap()).unwrap();
        assert_eq!(report.correct, 200, "{mode:?}");
        assert_eq!(report.accuracy, 1.0);
    }
}

/// A recolored copy whose every pixel keeps its grayscale value.
fn same_luma_recolor(img: &RasterImage, rng: &mut Rng) -> RasterImage {
    let mut out = img.clone();
    out.map_pixels(|_, _, c| {
        let target = luma(c);
        loop {
            let r = rng.below(256) as u8;
            let b = rng.below(256) as u8;
            let g = ((target as f64 - 0.2126 * r as f64 - 0.0722 * b as f64) / 0.7152).round();
            if (0.0..=255.0).contains(&g) {
                let cand = [r, g as u8, b];
                if luma(cand) == target {
                    return cand;
                }
            }
        }
    });
    out
}

#[test]
fn gray_features_ignore_luminance_preserving_recoloring() {
    let mut rng = Rng::new(31);
    for seed in 0..20 {
        let img = noise_image(seed, 80, 70);
        let other = same_luma_recolor(&img, &mut rng);
        assert_ne!(img, other);
        assert_eq!(perceptual_features(&img, Mode::Gray), perceptual_features(&other, Mode::Gray));
        assert_ne!(perceptual_features(&img, Mode::Color), perceptual_features(&other, Mode::Color));
    }
}

#[test]
fn wire_documents_carry_no_truth() {
    let m = manifest(10, 2);
    let (trials, truths) = assemble_trials(&m, 20, Mode::Color, DecoyPolicy::OtherFamilies, &mut Rng::new(3)).unwrap();
    let trials_json = serde_json::to_value(&trials).unwrap();
    let truths_json = serde_json::to_value(&truths).unwrap();
    assert!(truths_json.to_string().contains("truth_index"));
    for key in ["truth_index", "permutation", "family"] {
        assert!(!trials_json.to_string().contains(key), "trials mention {key}");
    }
    let img = RasterImage::new(16, 16, [1, 2, 3]);
    let req = JudgeRequest::new(&trials.trials[0], &img, &vec![img.clone(); CANDIDATES]);
    let wire = serde_json::to_value(&req).unwrap();
    let keys: BTreeSet<&str> = wire.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, BTreeSet::from(["candidates", "mode", "reference", "trial_id"]));
}

fn outcomes(k: usize, n: usize) -> Vec<MatchOutcome> {
    (0..n)
        .map(|i| MatchOutcome {
            trial_id: format!("t{i:05}"),
            evaluator: Evaluator::External,
            family: if i % 2 == 0 { "a" } else { "b" }.into(),
            choice: 0,
            correct: i < k,
            latency_ms: 5,
            session: None,
        })
        .collect()
}

#[test]
fn seventy_four_of_a_hundred() {
    let r = accuracy_report(&outcomes(74, 100)).unwrap();
    assert_eq!((r.n, r.correct, r.accuracy), (100, 74, 0.74));
    // reference values computed independently
    assert!((r.wilson95.0 - 0.646_290_105_508_128_2).abs() < 1e-12);
    assert!((r.wilson95.1 - 0.815_953_015_352_518_6).abs() < 1e-12);
    assert_eq!(r.by_family["a"].n + r.by_family["b"].n, 100);
    assert_eq!(r.by_family["a"].correct, 37);
    assert!(matches!(accuracy_report(&[]), Err(MatchError::EmptyResults)));
}

#[test]
fn wilson_interval_brackets_the_estimate() {
    assert_eq!(wilson_interval(0, 100, WILSON_Z95).0, 0.0);
    assert!((wilson_interval(0, 100, WILSON_Z95).1 - 0.036_993_498_206_985_68).abs() < 1e-12);
    assert_eq!(wilson_interval(100, 100, WILSON_Z95).1, 1.0);
    for n in 1..60 {
        for k in 0..=n {
            let (lo, hi) = wilson_interval(k, n, WILSON_Z95);
            let p = k as f64 / n as f64;
            assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
        }
    }
}

#[test]
fn answer_log_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("results.jsonl");
    let a = Answer {
        trial_id: "t00001".into(),
        evaluator: Evaluator::Random,
        mode: Mode::Gray,
        choice: 7,
        latency_ms: 0,
        session: Some("s1".into()),
    };
    append_answers(&path, std::slice::from_ref(&a)).unwrap();
    append_answers(&path, &[a.clone(), a.clone()]).unwrap();
    assert_eq!(read_answers(&path).unwrap(), vec![a.clone(), a.clone(), a]);
    std::fs::write(&path, "{\"trial_id\": 3}\n").unwrap();
    assert!(matches!(read_answers(&path), Err(MatchError::Malformed { line: 1, .. })));
}
