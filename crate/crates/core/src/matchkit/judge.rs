use std::thread;
use std::time::Duration;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::image::RasterImage;

use super::{MatchError, Mode, Trial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgeConfig {
    /// Full URL of the judge, e.g. `http://127.0.0.1:9000/judge`.
    pub endpoint: String,
    pub timeout_ms: u64,
    pub retries: u32,
    /// Delay before the first retry; doubles on each later one.
    pub backoff_ms: u64,
}

impl Default for JudgeConfig {
    fn default() -> Self {
        Self {
            endpoint: "http://127.0.0.1:9000/judge".into(),
            timeout_ms: 30_000,
            retries: 3,
            backoff_ms: 250,
        }
    }
}

/// The document POSTed to the judge. Images are base64 PNGs, already
/// converted for `mode`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgeRequest {
    pub trial_id: String,
    pub mode: Mode,
    pub reference: String,
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgeResponse {
    pub choice: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JudgeVerdict {
    pub choice: usize,
    /// Failed attempts before the one that answered.
    pub retries: u32,
}

impl JudgeRequest {
    pub fn new(trial: &Trial, reference: &RasterImage, candidates: &[RasterImage]) -> Self {
        let b64 = |img: &RasterImage| STANDARD.encode(img.encode_png().expect("in-memory PNG encoding"));
        Self {
            trial_id: trial.id.clone(),
            mode: trial.mode,
            reference: b64(reference),
            candidates: candidates.iter().map(b64).collect(),
        }
    }
}

enum Failure {
    Timeout,
    Unavailable(String),
}

fn classify(e: ureq::Error) -> Failure {
    match e {
        ureq::Error::Timeout(_) => Failure::Timeout,
        ureq::Error::Io(io) if matches!(io.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) => {
            Failure::Timeout
        }
        other => Failure::Unavailable(other.to_string()),
    }
}

fn parse_choice(body: &str, n: usize) -> Result<usize, MatchError> {
    let r: JudgeResponse =
        serde_json::from_str(body).map_err(|e| MatchError::JudgeMalformed(format!("not a choice document: {e}")))?;
    let c = r
        .choice
        .as_i64()
        .ok_or_else(|| MatchError::JudgeMalformed(format!("choice {} is not an integer", r.choice)))?;
    if c < 0 || c as usize >= n {
        return Err(MatchError::JudgeMalformed(format!("choice {c} is outside 0..{n}")));
    }
    Ok(c as usize)
}

/// Asks an external judge which candidate matches the reference. Transport
/// failures, timeouts and non-2xx replies are retried with exponential
/// backoff; a reply that is not an in-range integer choice is not.
pub fn judge_external(
    trial: &Trial,
    reference: &RasterImage,
    candidates: &[RasterImage],
    cfg: &JudgeConfig,
) -> Result<JudgeVerdict, MatchError> {
    let request = JudgeRequest::new(trial, reference, candidates);
    let config = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_millis(cfg.timeout_ms)))
        .http_status_as_error(false)
        .build();
    let agent = ureq::Agent::new_with_config(config);

    let mut last = Failure::Unavailable("no attempt made".into());
    for attempt in 0..=cfg.retries {
        if attempt > 0 {
            let factor = 1u64 << (attempt - 1).min(16);
            thread::sleep(Duration::from_millis(cfg.backoff_ms.saturating_mul(factor)));
        }
        match agent.post(&cfg.endpoint).send_json(&request) {
            Ok(mut resp) if resp.status().is_success() => match resp.body_mut().read_to_string() {
                Ok(body) => {
                    let choice = parse_choice(&body, candidates.len())?;
                    return Ok(JudgeVerdict { choice, retries: attempt });
                }
                Err(e) => last = classify(e),
            },
            Ok(resp) => last = Failure::Unavailable(format!("HTTP {}", resp.status())),
            Err(e) => last = classify(e),
        }
    }
    Err(match last {
        Failure::Timeout => MatchError::JudgeTimeout { retries: cfg.retries },
        Failure::Unavailable(reason) => MatchError::JudgeUnavailable {
            retries: cfg.retries,
            reason,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_parsing() {
        assert_eq!(parse_choice(r#"{"choice":3}"#, 10).unwrap(), 3);
        for bad in [r#"{"choice":11}"#, r#"{"choice":-1}"#, r#"{"choice":2.5}"#, r#"{"choice":"4"}"#, "[]"] {
            assert!(matches!(parse_choice(bad, 10), Err(MatchError::JudgeMalformed(_))), "{bad}");
        }
    }

    #[test]
    fn request_has_no_truth() {
        let t = Trial {
            id: "t00000".into(),
            reference: "a-s1".into(),
            candidates: (0..10).map(|i| format!("c{i}")).collect(),
            mode: Mode::Gray,
        };
        let img = RasterImage::new(4, 4, [9, 9, 9]);
        let req = JudgeRequest::new(&t, &img, &vec![img.clone(); 10]);
        let v = serde_json::to_value(&req).unwrap();
        let mut keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        keys.sort();
        assert_eq!(keys, ["candidates", "mode", "reference", "trial_id"]);
        assert_eq!(v["mode"], "gray");
    }
}
