//! Helpers shared by the CLI test binaries.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use tempfile::TempDir;

pub fn procsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_procsim"))
}

pub fn run(args: &[&str]) -> Output {
    procsim().args(args).output().expect("spawn procsim")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 temp path")
}

/// A small gallery of every family, two seeds each, built once per test
/// binary and shared read-only.
pub struct Gallery {
    _dir: TempDir,
    pub root: PathBuf,
    pub manifest: PathBuf,
}

pub fn small_gallery() -> &'static Gallery {
    static G: OnceLock<Gallery> = OnceLock::new();
    G.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().join("gallery");
        let out = run(&["gallery", "--size", "64x64", "--seed", "3", "--out", p(&root)]);
        assert_eq!(code(&out), 0, "gallery failed: {}", stderr(&out));
        Gallery {
            manifest: root.join("manifest.json"),
            root,
            _dir: dir,
        }
    })
}

/// Writes trials and truths for the shared gallery into `dir`.
pub fn make_trials(dir: &Path, n: usize, mode: &str, seed: u64) -> (PathBuf, PathBuf) {
    let g = small_gallery();
    let trials = dir.join("trials.json");
    let truths = dir.join("truths.json");
    let out = run(&[
        "trials",
        "--manifest",
        p(&g.manifest),
        "-n",
        &n.to_string(),
        "--mode",
        mode,
        "--seed",
        &seed.to_string(),
        "--out",
        p(&trials),
        "--truths",
        p(&truths),
    ]);
    assert_eq!(code(&out), 0, "trials failed: {}", stderr(&out));
    (trials, truths)
}

/// Pulls `accuracy  X` out of the printed report.
pub fn reported_accuracy(report: &str) -> f64 {
    report
        .lines()
        .find_map(|l| l.strip_prefix("accuracy"))
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| panic!("no accuracy line in:\n{report}"))
}

pub fn reported_n(report: &str) -> usize {
    report
        .lines()
        .find_map(|l| l.strip_prefix("n "))
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| panic!("no n line in:\n{report}"))
}
