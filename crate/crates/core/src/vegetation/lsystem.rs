//! Line-oriented stochastic L-system grammar.
//!
//! ```text
//! # fractal plant
//! axiom: X
//! angle: 25
//! step: 10
//! X -(0.7)-> F[+X][-X]FL
//! X -(0.3)-> F[-X]L
//! F -> FF
//! ```
//!
//! Header keys: `axiom` (required), `angle` (degrees), `step`, `width`,
//! `step_decay`, `width_decay`. A rule without a probability shares the
//! weight its symbol's explicit probabilities leave unclaimed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::rng::Rng;

pub const DEFAULT_EXPANSION_CAP: usize = 10_000_000;

const PROB_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LSystemError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expansion would exceed {cap} symbols")]
    ExpansionTooLarge { cap: usize },
}

fn parse_err(line: usize, message: impl Into<String>) -> LSystemError {
    LSystemError::Parse {
        line,
        message: message.into(),
    }
}

/// Whether `c` belongs to the drawing alphabet: letters, `+ - [ ]`.
pub fn is_symbol(c: char) -> bool {
    c.is_ascii_alphabetic() || matches!(c, '+' | '-' | '[' | ']')
}

#[derive(Debug, Clone, PartialEq)]
pub struct Production {
    pub weight: f64,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LSystem {
    pub axiom: String,
    pub rules: BTreeMap<char, Vec<Production>>,
    /// Turn angle in degrees.
    pub angle: f64,
    /// Segment length at depth 0.
    pub step: f64,
    /// Segment width at depth 0.
    pub width: f64,
    pub step_decay: f64,
    pub width_decay: f64,
}

impl Default for LSystem {
    fn default() -> Self {
        Self {
            axiom: String::new(),
            rules: BTreeMap::new(),
            angle: 25.0,
            step: 10.0,
            width: 2.0,
            step_decay: 1.0,
            width_decay: 0.7,
        }
    }
}

struct PendingRule {
    line: usize,
    prob: Option<f64>,
    body: String,
}

/// Parses grammar text; LF and CRLF line endings are both accepted.
pub fn parse_lsystem(text: &str) -> Result<LSystem, LSystemError> {
    let mut ls = LSystem::default();
    let mut axiom = None;
    let mut pending: BTreeMap<char, Vec<PendingRule>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(arrow_pos) = line.find('-').filter(|_| line.contains("->")) {
            let (head, rest) = line.split_at(arrow_pos);
            let head = head.trim();
            let mut chars = head.chars();
            let symbol = match (chars.next(), chars.next()) {
                (Some(c), None) if is_symbol(c) => c,
                _ => {
                    return Err(parse_err(
                        line_no,
                        format!("rule head must be a single symbol, got {head:?}"),
                    ))
                }
            };
            let (prob, body) = parse_arrow(rest, line_no)?;
            if let Some(bad) = body.chars().find(|&c| !is_symbol(c)) {
                return Err(parse_err(line_no, format!("invalid symbol {bad:?} in production")));
            }
            pending.entry(symbol).or_default().push(PendingRule {
                line: line_no,
                prob,
                body,
            });
            continue;
        }

        let Some((key, value)) = line.split_once(':') else {
            return Err(parse_err(line_no, "malformed arrow; expected `X -> body`"));
        };
        let value = value.trim();
        let number = || -> Result<f64, LSystemError> {
            value
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line_no, format!("{} expects a number", key.trim())))
        };
        match key.trim() {
            "axiom" => {
                if value.is_empty() {
                    return Err(parse_err(line_no, "empty axiom"));
                }
                if let Some(bad) = value.chars().find(|&c| !is_symbol(c)) {
                    return Err(parse_err(line_no, format!("invalid symbol {bad:?} in axiom")));
                }
                axiom = Some(value.to_string());
            }
            "angle" => ls.angle = number()?,
            "step" => ls.step = positive(number()?, line_no, "step")?,
            "width" => ls.width = positive(number()?, line_no, "width")?,
            "step_decay" => ls.step_decay = unit_interval(number()?, line_no, "step_decay")?,
            "width_decay" => ls.width_decay = unit_interval(number()?, line_no, "width_decay")?,
            other => return Err(parse_err(line_no, format!("unknown header {other:?}"))),
        }
    }

    ls.axiom = axiom.ok_or_else(|| parse_err(text.lines().count().max(1), "missing axiom"))?;

    for (symbol, rules) in pending {
        let explicit: f64 = rules.iter().filter_map(|r| r.prob).sum();
        let last_line = rules.last().map(|r| r.line).unwrap_or(1);
        if explicit > 1.0 + PROB_TOL {
            return Err(parse_err(
                last_line,
                format!("probabilities for {symbol:?} sum to {explicit} > 1"),
            ));
        }
        let implicit = rules.iter().filter(|r| r.prob.is_none()).count();
        let share = if implicit > 0 {
            let remaining = 1.0 - explicit;
            if remaining <= PROB_TOL {
                let line = rules.iter().find(|r| r.prob.is_none()).map(|r| r.line).unwrap_or(last_line);
                return Err(parse_err(
                    line,
                    format!("no probability left for unweighted rules of {symbol:?}"),
                ));
            }
            remaining / implicit as f64
        } else {
            0.0
        };
        let prods = rules
            .into_iter()
            .map(|r| Production {
                weight: r.prob.unwrap_or(share),
                body: r.body,
            })
            .collect();
        ls.rules.insert(symbol, prods);
    }
    Ok(ls)
}

/// Parses `-> body` or `-(p)-> body` (the text after the head symbol).
fn parse_arrow(rest: &str, line: usize) -> Result<(Option<f64>, String), LSystemError> {
    let malformed = || parse_err(line, "malformed arrow; expected `->` or `-(p)->`");
    if let Some(body) = rest.strip_prefix("->") {
        return Ok((None, body.trim().to_string()));
    }
    let inner = rest.strip_prefix("-(").ok_or_else(malformed)?;
    let (prob_text, after) = inner.split_once(")->").ok_or_else(malformed)?;
    let prob: f64 = prob_text
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad probability {:?}", prob_text.trim())))?;
    if !(prob > 0.0) || !prob.is_finite() {
        return Err(parse_err(line, format!("probability must be positive, got {prob}")));
    }
    Ok((Some(prob), after.trim().to_string()))
}

fn positive(v: f64, line: usize, key: &str) -> Result<f64, LSystemError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(parse_err(line, format!("{key} must be > 0")))
    }
}

fn unit_interval(v: f64, line: usize, key: &str) -> Result<f64, LSystemError> {
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(parse_err(line, format!("{key} must be in (0, 1]")))
    }
}

/// Canonical text form with every probability explicit.
pub fn format_lsystem(ls: &LSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "axiom: {}", ls.axiom);
    let _ = writeln!(out, "angle: {}", ls.angle);
    let _ = writeln!(out, "step: {}", ls.step);
    let _ = writeln!(out, "width: {}", ls.width);
    let _ = writeln!(out, "step_decay: {}", ls.step_decay);
    let _ = writeln!(out, "width_decay: {}", ls.width_decay);
    for (sym, prods) in &ls.rules {
        for p in prods {
            let _ = writeln!(out, "{sym} -({})-> {}", p.weight, p.body);
        }
    }
    out
}

/// `n` parallel rewriting passes with the default size cap.
pub fn expand(ls: &LSystem, n: usize, rng: &mut Rng) -> Result<String, LSystemError> {
    expand_capped(ls, n, rng, DEFAULT_EXPANSION_CAP)
}

/// Symbols without a rule copy through. A symbol with several alternatives
/// draws one per occurrence; single-rule symbols consume no randomness.
pub fn expand_capped(
    ls: &LSystem,
    n: usize,
    rng: &mut Rng,
    cap: usize,
) -> Result<String, LSystemError> {
    let mut current = ls.axiom.clone();
    if current.len() > cap {
        return Err(LSystemError::ExpansionTooLarge { cap });
    }
    for _ in 0..n {
        let mut next = String::with_capacity(current.len() * 2);
        for c in current.chars() {
            match ls.rules.get(&c) {
                None => next.push(c),
                Some(prods) if prods.len() == 1 => next.push_str(&prods[0].body),
                Some(prods) => {
                    let total: f64 = prods.iter().map(|p| p.weight).sum();
                    let mut u = rng.next_f64() * total;
                    let mut chosen = &prods[prods.len() - 1];
                    for p in prods {
                        if u < p.weight {
                            chosen = p;
                            break;
                        }
                        u -= p.weight;
                    }
                    next.push_str(&chosen.body);
                }
            }
            if next.len() > cap {
                return Err(LSystemError::ExpansionTooLarge { cap });
            }
        }
        current = next;
    }
    Ok(current)
}
