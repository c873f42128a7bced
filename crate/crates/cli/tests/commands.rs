mod support;

use std::fs;

use procsim::image::sha256_hex;
use procsim::manifest::Manifest;
use procsim::params::Sidecar;
use support::{code, make_trials, p, reported_accuracy, reported_n, run, small_gallery, stderr, stdout};

#[test]
fn generate_writes_png_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("a.png");
    let out = run(&["generate", "chladni", "--seed", "42", "--size", "64x48", "-o", p(&png)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let img = procsim::RasterImage::load_png(&png).unwrap();
    assert_eq!((img.width(), img.height()), (64, 48));
    let side: Sidecar = serde_json::from_str(&fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!((side.spec.family.as_str(), side.spec.seed, side.width, side.height), ("chladni", 42, 64, 48));

    let again = dir.path().join("b.png");
    run(&["generate", "chladni", "--seed", "42", "--size", "64x48", "-o", p(&again)]);
    assert_eq!(fs::read(&png).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn generate_default_path_uses_the_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out_dir = dir.path().join("imgs");
    fs::write(&cfg, format!("{{\"output_dir\": {:?}, \"width\": 32, \"height\": 32}}", p(&out_dir))).unwrap();
    let out = run(&["--config", p(&cfg), "generate", "tiles", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out_dir.join("tiles-s5.png").is_file());
    assert!(out_dir.join("tiles-s5.json").is_file());
}

#[test]
fn generate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("x.png");
    assert_eq!(code(&run(&["generate", "nosuch", "-o", p(&o)])), 2);

    let params = dir.path().join("params.json");
    fs::write(&params, "{\"beta\": -4}").unwrap();
    let out = run(&["generate", "chladni", "--params", p(&params), "--size", "32x32", "-o", p(&o)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("beta"), "{}", stderr(&out));

    fs::write(&params, "{\"no_such_key\": 1}").unwrap();
    let out = run(&["generate", "chladni", "--params", p(&params), "--size", "32x32", "-o", p(&o)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("no_such_key"), "{}", stderr(&out));

    assert_eq!(code(&run(&["generate", "chladni", "--size", "8x64", "-o", p(&o)])), 3);

    let file = dir.path().join("plain-file");
    fs::write(&file, "").unwrap();
    let blocked = file.join("sub").join("x.png");
    assert_eq!(code(&run(&["generate", "chladni", "--size", "32x32", "-o", p(&blocked)])), 4);

    assert_eq!(code(&run(&["generate"])), 1);
}

#[test]
fn gallery_manifest_lists_every_image_with_its_hash() {
    let g = small_gallery();
    let m = Manifest::load(&g.manifest).unwrap();
    assert_eq!(m.images.len(), 24);
    assert_eq!(m.families().len(), 12);
    for e in &m.images {
        let bytes = fs::read(g.root.join(&e.path)).unwrap();
        assert_eq!(sha256_hex(&bytes), e.sha256, "{}", e.id);
    }
}

#[test]
fn gallery_rerun_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let out = run(&["gallery", "--size", "48x40", "--seed", "9", "--per-family", "1", "--out", p(d)]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(
        fs::read(a.join("manifest.json")).unwrap(),
        fs::read(b.join("manifest.json")).unwrap()
    );
}

#[test]
fn gallery_into_a_file_is_unwritable() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f");
    fs::write(&file, "x").unwrap();
    let out = run(&["gallery", "--size", "32x32", "--per-family", "1", "--out", p(&file.join("g"))]);
    assert_eq!(code(&out), 4);
}

#[test]
fn trials_need_ten_families() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"families": ["chladni", "tiles", "clouds", "tree", "flame"]}"#).unwrap();
    let g = dir.path().join("g");
    let out = run(&["--config", p(&cfg), "gallery", "--size", "32x32", "--out", p(&g)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = run(&["trials", "--manifest", p(&g.join("manifest.json")), "-n", "5"]);
    assert_eq!(code(&out), 5);
    assert!(stderr(&out).contains("famil"), "{}", stderr(&out));
}

#[test]
fn truths_are_stored_apart_and_private() {
    let dir = tempfile::tempdir().unwrap();
    let (trials, truths) = make_trials(dir.path(), 30, "color", 1);
    let trials_text = fs::read_to_string(&trials).unwrap();
    assert!(!trials_text.contains("truth_index") && !trials_text.contains("permutation"));
    assert!(fs::read_to_string(&truths).unwrap().contains("truth_index"));
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        assert_eq!(fs::metadata(&truths).unwrap().permissions().mode() & 0o777, 0o600);
    }
}

#[test]
fn eval_and_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (trials, truths) = make_trials(dir.path(), 120, "color", 2);
    let g = small_gallery();
    let results = dir.path().join("results.jsonl");
    for mode in ["color", "gray"] {
        let out = run(&[
            "eval", "--trials", p(&trials), "--manifest", p(&g.manifest), "--matcher", "perceptual", "--mode", mode,
            "--results", p(&results),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    let json = dir.path().join("report.json");
    let out = run(&["report", "--results", p(&results), "--truths", p(&truths), "--json", p(&json)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(reported_n(&text), 240);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["n"], 240);
    assert!((reported_accuracy(&text) - report["accuracy"].as_f64().unwrap()).abs() < 1e-4);
    assert_eq!(report["by_family"].as_object().unwrap().len(), 12);

    let out = run(&[
        "report", "--results", p(&results), "--truths", p(&truths), "--evaluator", "random",
    ]);
    assert_eq!(code(&out), 7, "no random answers were logged");
}

#[test]
fn report_on_nothing_exits_7() {
    let dir = tempfile::tempdir().unwrap();
    let (_, truths) = make_trials(dir.path(), 3, "color", 1);
    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&run(&["report", "--results", p(&empty), "--truths", p(&truths)])), 7);
    let missing = dir.path().join("missing.jsonl");
    assert_eq!(code(&run(&["report", "--results", p(&missing), "--truths", p(&truths)])), 7);
}

#[test]
fn malformed_inputs_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let g = small_gallery();
    let results = dir.path().join("r.jsonl");
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"trials\": [ {\"id\": 1} ]}").unwrap();
    let out = run(&["eval", "--trials", p(&bad), "--manifest", p(&g.manifest), "--results", p(&results)]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));

    let (trials, truths) = make_trials(dir.path(), 4, "color", 1);
    let text = fs::read_to_string(&trials).unwrap().replacen("chladni-s", "ghost-s", 1);
    let ghost = dir.path().join("ghost.json");
    fs::write(&ghost, text).unwrap();
    let out = run(&["eval", "--trials", p(&ghost), "--manifest", p(&g.manifest), "--results", p(&results)]);
    assert_eq!(code(&out), 5, "{}", stderr(&out));

    fs::write(&results, "not json\n").unwrap();
    assert_eq!(code(&run(&["report", "--results", p(&results), "--truths", p(&truths)])), 5);
}

#[test]
fn unreachable_judge_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let (trials, _) = make_trials(dir.path(), 2, "gray", 1);
    let g = small_gallery();
    let dead = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        format!("http://{}/judge", l.local_addr().unwrap())
    };
    let out = run(&[
        "eval", "--trials", p(&trials), "--manifest", p(&g.manifest), "--matcher", "external", "--results",
        p(&dir.path().join("r.jsonl")), "--judge-endpoint", &dead, "--judge-retries", "1", "--judge-timeout-ms", "500",
    ]);
    assert_eq!(code(&out), 6, "{}", stderr(&out));
}

#[test]
fn families_lists_all_twelve() {
    let out = run(&["families"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let names: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with(' '))
        .filter_map(|l| l.split_whitespace().next())
        .collect();
    assert_eq!(names.len(), 12);
    assert!(names.contains(&"chladni") && names.contains(&"city"));
}
