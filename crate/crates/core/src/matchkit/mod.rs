//! Multiple-choice matching: a reference image and ten candidates, one of
//! which comes from the same generator. Trials are assembled from a gallery
//! manifest, answered by a matcher (built-in perceptual features, a random
//! chooser, an external HTTP judge, or a person), and scored afterwards
//! against a separately stored truths file.

mod features;
mod judge;
mod report;
mod trials;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::image::RasterImage;

pub use features::{perceptual_features, rank_candidates, COLOR_BINS, GRADIENT_BINS, GRAY_BINS};
pub use judge::{judge_external, JudgeConfig, JudgeRequest, JudgeResponse, JudgeVerdict};
pub use report::{
    accuracy_report, append_answers, read_answers, score, wilson_interval, Answer, FamilyStats, MatchOutcome, Report,
    WILSON_Z95,
};
pub use trials::{assemble_trials, DecoyPolicy, Trial, TrialSet, Truth, TruthSet, CANDIDATES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Color,
    Gray,
}

impl Mode {
    /// The image as a matcher sees it in this mode.
    pub fn present(self, img: &RasterImage) -> RasterImage {
        match self {
            Mode::Color => img.clone(),
            Mode::Gray => img.to_gray(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Color => "color",
            Mode::Gray => "gray",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "color" => Ok(Mode::Color),
            "gray" => Ok(Mode::Gray),
            _ => Err(format!("unknown mode `{s}`, expected color or gray")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluator {
    Perceptual,
    External,
    Human,
    Random,
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("need at least {need} families with images, manifest has {have}")]
    InsufficientFamilies { have: usize, need: usize },
    #[error("family `{family}` has {have} image(s), needs {need}")]
    InsufficientSeeds { family: String, have: usize, need: usize },
    #[error("feature vectors differ in length: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("no candidates to rank")]
    NoCandidates,
    #[error("judge timed out after {retries} retries")]
    JudgeTimeout { retries: u32 },
    #[error("judge unavailable after {retries} retries: {reason}")]
    JudgeUnavailable { retries: u32, reason: String },
    #[error("judge reply is malformed: {0}")]
    JudgeMalformed(String),
    #[error("no results to report")]
    EmptyResults,
    #[error("answer for unknown trial `{0}`")]
    UnknownTrial(String),
    #[error("choice {0} is out of range")]
    ChoiceOutOfRange(i64),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed line {line} in {path}: {reason}")]
    Malformed { path: String, line: usize, reason: String },
}
