use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::Instant;

use procsim::image::RasterImage;
use procsim::manifest::{resolve, Manifest};
use procsim::matchkit::{
    accuracy_report, append_answers, assemble_trials, judge_external, perceptual_features, rank_candidates,
    read_answers, score, Answer, DecoyPolicy, Evaluator, MatchError, Mode, Report, Trial, TrialSet, TruthSet,
};
use procsim::rng::{hash_words, Rng};
use rayon::prelude::*;

use crate::config::JudgeSettings;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Matcher {
    Perceptual,
    External,
    Random,
}

pub fn load_manifest(path: &Path) -> Result<Manifest, CliError> {
    Manifest::load(path).map_err(|e| CliError::MalformedInput(e.to_string()))
}

fn manifest_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// Images of a manifest, loaded on demand.
pub struct ImageStore {
    manifest: Manifest,
    dir: PathBuf,
}

impl ImageStore {
    pub fn open(manifest_path: &Path) -> Result<Self, CliError> {
        Ok(Self {
            manifest: load_manifest(manifest_path)?,
            dir: manifest_dir(manifest_path),
        })
    }

    pub fn contains(&self, id: &str) -> bool {
        self.manifest.get(id).is_some()
    }

    pub fn load(&self, id: &str) -> Result<RasterImage, CliError> {
        let entry = self
            .manifest
            .get(id)
            .ok_or_else(|| CliError::MalformedInput(format!("image `{id}` is not in the manifest")))?;
        let path = resolve(&self.dir, entry);
        RasterImage::load_png(&path).map_err(|e| CliError::Other(e.to_string()))
    }

    pub fn load_presented(&self, id: &str, mode: Mode) -> Result<RasterImage, CliError> {
        Ok(mode.present(&self.load(id)?))
    }
}

pub struct TrialsOptions {
    pub n: usize,
    pub mode: Mode,
    pub decoys: DecoyPolicy,
    pub seed: u64,
}

/// Writes the trials and the separate truths file.
pub fn make_trials(manifest_path: &Path, opts: &TrialsOptions, trials_out: &Path, truths_out: &Path) -> Result<(), CliError> {
    let manifest = load_manifest(manifest_path)?;
    let mut rng = Rng::new(opts.seed);
    let (trials, truths) = assemble_trials(&manifest, opts.n, opts.mode, opts.decoys, &mut rng)?;
    let unwritable = |e: MatchError| CliError::Unwritable(e.to_string());
    for p in [trials_out, truths_out] {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Unwritable(format!("{}: {e}", dir.display())))?;
        }
    }
    trials.save(trials_out).map_err(unwritable)?;
    truths.save(truths_out).map_err(unwritable)?;
    Ok(())
}

pub fn load_trials(path: &Path) -> Result<TrialSet, CliError> {
    TrialSet::load(path).map_err(|e| CliError::MalformedInput(e.to_string()))
}

pub struct EvalOptions<'a> {
    pub matcher: Matcher,
    /// Overrides each trial's own mode.
    pub mode: Option<Mode>,
    pub seed: u64,
    pub judge: &'a JudgeSettings,
}

fn check_ids(trials: &TrialSet, store: &ImageStore) -> Result<(), CliError> {
    for t in &trials.trials {
        for id in std::iter::once(&t.reference).chain(&t.candidates) {
            if !store.contains(id) {
                return Err(CliError::MalformedInput(format!(
                    "trial {} names image `{id}`, which is not in the manifest",
                    t.id
                )));
            }
        }
    }
    Ok(())
}

fn perceptual_answers(trials: &TrialSet, store: &ImageStore, mode_of: impl Fn(&Trial) -> Mode + Sync) -> Result<Vec<Answer>, CliError> {
    let needed: BTreeSet<(String, Mode)> = trials
        .trials
        .iter()
        .flat_map(|t| {
            let m = mode_of(t);
            std::iter::once(&t.reference)
                .chain(&t.candidates)
                .map(move |id| (id.clone(), m))
        })
        .collect();
    let needed: Vec<(String, Mode)> = needed.into_iter().collect();
    let features: HashMap<(String, Mode), Vec<f64>> = needed
        .par_iter()
        .map(|(id, m)| Ok(((id.clone(), *m), perceptual_features(&store.load(id)?, *m))))
        .collect::<Result<_, CliError>>()?;
    trials
        .trials
        .par_iter()
        .map(|t| {
            let m = mode_of(t);
            let get = |id: &String| &features[&(id.clone(), m)];
            let cands: Vec<Vec<f64>> = t.candidates.iter().map(|c| get(c).clone()).collect();
            let order = rank_candidates(get(&t.reference), &cands)?;
            Ok(Answer {
                trial_id: t.id.clone(),
                evaluator: Evaluator::Perceptual,
                mode: m,
                choice: order[0],
                latency_ms: 0,
                session: None,
            })
        })
        .collect()
}

fn external_answers(
    trials: &TrialSet,
    store: &ImageStore,
    judge: &JudgeSettings,
    mode_of: impl Fn(&Trial) -> Mode + Sync,
) -> Result<Vec<Answer>, CliError> {
    let client = judge.client();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(judge.concurrency)
        .build()
        .map_err(|e| CliError::Other(e.to_string()))?;
    pool.install(|| {
        trials
            .trials
            .par_iter()
            .map(|t| {
                let m = mode_of(t);
                let mut presented = t.clone();
                presented.mode = m;
                let reference = store.load_presented(&t.reference, m)?;
                let cands = t
                    .candidates
                    .iter()
                    .map(|c| store.load_presented(c, m))
                    .collect::<Result<Vec<_>, _>>()?;
                let start = Instant::now();
                let verdict = judge_external(&presented, &reference, &cands, &client)?;
                if verdict.retries > 0 {
                    eprintln!("trial {}: judge answered after {} retries", t.id, verdict.retries);
                }
                Ok(Answer {
                    trial_id: t.id.clone(),
                    evaluator: Evaluator::External,
                    mode: m,
                    choice: verdict.choice,
                    latency_ms: start.elapsed().as_millis() as u64,
                    session: None,
                })
            })
            .collect()
    })
}

/// Answers every trial with the chosen matcher and appends the answers to
/// the results log in trial order. Returns how many were written.
pub fn eval(trials_path: &Path, manifest_path: &Path, results: &Path, opts: &EvalOptions) -> Result<usize, CliError> {
    let trials = load_trials(trials_path)?;
    let mode_of = |t: &Trial| opts.mode.unwrap_or(t.mode);
    let answers = match opts.matcher {
        Matcher::Random => trials
            .trials
            .iter()
            .enumerate()
            .map(|(i, t)| Answer {
                trial_id: t.id.clone(),
                evaluator: Evaluator::Random,
                mode: mode_of(t),
                choice: Rng::new(hash_words(&[opts.seed, i as u64])).below(t.candidates.len()),
                latency_ms: 0,
                session: None,
            })
            .collect(),
        Matcher::Perceptual => {
            let store = ImageStore::open(manifest_path)?;
            check_ids(&trials, &store)?;
            perceptual_answers(&trials, &store, mode_of)?
        }
        Matcher::External => {
            let store = ImageStore::open(manifest_path)?;
            check_ids(&trials, &store)?;
            external_answers(&trials, &store, opts.judge, mode_of)?
        }
    };
    append_answers(results, &answers).map_err(|e| CliError::Unwritable(e.to_string()))?;
    Ok(answers.len())
}

#[derive(Debug, Default)]
pub struct ReportFilter {
    pub session: Option<String>,
    pub evaluator: Option<Evaluator>,
}

pub fn report(results: &Path, truths_path: &Path, filter: &ReportFilter) -> Result<Report, CliError> {
    let answers = match read_answers(results) {
        Ok(a) => a,
        // a log that was never written holds no results
        Err(MatchError::Io { source, .. }) if source.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let answers: Vec<Answer> = answers
        .into_iter()
        .filter(|a| filter.session.as_ref().is_none_or(|s| a.session.as_ref() == Some(s)))
        .filter(|a| filter.evaluator.is_none_or(|e| a.evaluator == e))
        .collect();
    if answers.is_empty() {
        return Err(MatchError::EmptyResults.into());
    }
    let truths = TruthSet::load(truths_path).map_err(|e| CliError::MalformedInput(e.to_string()))?;
    Ok(accuracy_report(&score(&answers, &truths)?)?)
}
