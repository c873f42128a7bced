use std::collections::{BTreeMap, HashMap};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Evaluator, MatchError, Mode, TruthSet, CANDIDATES};

/// Two-sided 95% normal quantile.
pub const WILSON_Z95: f64 = 1.959_963_984_540_054;

/// One line of the results log: a matcher's pick, recorded without knowing
/// whether it is right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub trial_id: String,
    pub evaluator: Evaluator,
    pub mode: Mode,
    pub choice: usize,
    pub latency_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
}

/// An answer joined with its truth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchOutcome {
    pub trial_id: String,
    pub evaluator: Evaluator,
    /// Family of the trial's reference image.
    pub family: String,
    pub choice: usize,
    pub correct: bool,
    pub latency_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyStats {
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub wilson95: (f64, f64),
    pub by_family: BTreeMap<String, FamilyStats>,
}

/// Appends one JSON line per answer.
pub fn append_answers(path: impl AsRef<Path>, answers: &[Answer]) -> Result<(), MatchError> {
    let path = path.as_ref();
    let io = |source| MatchError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut buf = String::new();
    for a in answers {
        buf.push_str(&serde_json::to_string(a).expect("answer serializes"));
        buf.push('\n');
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io)?;
    f.write_all(buf.as_bytes()).map_err(io)
}

/// Reads a results log; blank lines are skipped.
pub fn read_answers(path: impl AsRef<Path>) -> Result<Vec<Answer>, MatchError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| MatchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| MatchError::Malformed {
                path: path.display().to_string(),
                line: i + 1,
                reason: e.to_string(),
            })
        })
        .collect()
}

/// Scores answers by undoing the trial's shuffle: the chosen slot is right
/// when it held pre-shuffle candidate 0.
pub fn score(answers: &[Answer], truths: &TruthSet) -> Result<Vec<MatchOutcome>, MatchError> {
    let by_id: HashMap<&str, _> = truths.truths.iter().map(|t| (t.trial_id.as_str(), t)).collect();
    answers
        .iter()
        .map(|a| {
            let t = by_id
                .get(a.trial_id.as_str())
                .ok_or_else(|| MatchError::UnknownTrial(a.trial_id.clone()))?;
            if a.choice >= CANDIDATES || a.choice >= t.permutation.len() {
                return Err(MatchError::ChoiceOutOfRange(a.choice as i64));
            }
            let correct = t.permutation[a.choice] == 0;
            debug_assert_eq!(correct, a.choice == t.truth_index);
            Ok(MatchOutcome {
                trial_id: a.trial_id.clone(),
                evaluator: a.evaluator,
                family: t.family.clone(),
                choice: a.choice,
                correct,
                latency_ms: a.latency_ms,
                session: a.session.clone(),
            })
        })
        .collect()
}

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).clamp(0.0, p), (center + half).clamp(p, 1.0))
}

pub fn accuracy_report(outcomes: &[MatchOutcome]) -> Result<Report, MatchError> {
    if outcomes.is_empty() {
        return Err(MatchError::EmptyResults);
    }
    let n = outcomes.len();
    let correct = outcomes.iter().filter(|o| o.correct).count();
    let mut by_family: BTreeMap<String, FamilyStats> = BTreeMap::new();
    for o in outcomes {
        let s = by_family.entry(o.family.clone()).or_insert(FamilyStats {
            n: 0,
            correct: 0,
            accuracy: 0.0,
        });
        s.n += 1;
        s.correct += o.correct as usize;
    }
    for s in by_family.values_mut() {
        s.accuracy = s.correct as f64 / s.n as f64;
    }
    Ok(Report {
        n,
        correct,
        accuracy: correct as f64 / n as f64,
        wilson95: wilson_interval(correct, n, WILSON_Z95),
        by_family,
    })
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n         {}", self.n)?;
        writeln!(f, "correct   {}", self.correct)?;
        writeln!(f, "accuracy  {:.4}", self.accuracy)?;
        writeln!(f, "wilson95  [{:.4}, {:.4}]", self.wilson95.0, self.wilson95.1)?;
        writeln!(f)?;
        writeln!(f, "{:<14} {:>6} {:>8} {:>9}", "family", "n", "correct", "accuracy")?;
        for (fam, s) in &self.by_family {
            writeln!(f, "{:<14} {:>6} {:>8} {:>9.4}", fam, s.n, s.correct, s.accuracy)?;
        }
        Ok(())
    }
}
