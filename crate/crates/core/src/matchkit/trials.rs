use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::manifest::{Manifest, ManifestEntry};
use crate::rng::Rng;

use super::{MatchError, Mode};

pub const CANDIDATES: usize = 10;

/// Where the nine decoys come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoyPolicy {
    /// One image from each of nine other families.
    #[default]
    OtherFamilies,
    /// Nine more seeds of the reference's own family.
    SameFamily,
}

/// What a matcher is shown. Carries no hint of which candidate is true.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trial {
    pub id: String,
    pub reference: String,
    /// Image ids in presentation order.
    pub candidates: Vec<String>,
    pub mode: Mode,
}

/// The answer key for one trial, stored apart from the trials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truth {
    pub trial_id: String,
    /// Family of the reference image.
    pub family: String,
    pub truth_index: usize,
    /// `permutation[slot]` is the pre-shuffle index of the candidate shown
    /// in `slot`; pre-shuffle index 0 is the true candidate.
    pub permutation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrialSet {
    pub trials: Vec<Trial>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TruthSet {
    pub truths: Vec<Truth>,
}

fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, MatchError> {
    let text = fs::read_to_string(path).map_err(|source| MatchError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| MatchError::Malformed {
        path: path.display().to_string(),
        line: e.line(),
        reason: e.to_string(),
    })
}

fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<(), MatchError> {
    let mut text = serde_json::to_string_pretty(value).expect("trial data serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| MatchError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl TrialSet {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, MatchError> {
        let set: TrialSet = load_json(path.as_ref())?;
        for t in &set.trials {
            if t.candidates.len() != CANDIDATES {
                return Err(MatchError::Malformed {
                    path: path.as_ref().display().to_string(),
                    line: 0,
                    reason: format!("trial {} has {} candidates", t.id, t.candidates.len()),
                });
            }
        }
        Ok(set)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MatchError> {
        save_json(self, path.as_ref())
    }
}

impl TruthSet {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, MatchError> {
        load_json(path.as_ref())
    }

    /// Written owner-read/write only on Unix.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), MatchError> {
        let path = path.as_ref();
        save_json(self, path)?;
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            fs::set_permissions(path, fs::Permissions::from_mode(0o600)).map_err(|source| MatchError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        Ok(())
    }

    pub fn get(&self, trial_id: &str) -> Option<&Truth> {
        self.truths.iter().find(|t| t.trial_id == trial_id)
    }
}

/// Builds `n` trials. Each picks a family uniformly, a reference image in
/// it, a true candidate from the same family with a different seed
/// (preferring identical params), and nine decoys per `policy`, then
/// shuffles the ten candidates.
pub fn assemble_trials(
    manifest: &Manifest,
    n: usize,
    mode: Mode,
    policy: DecoyPolicy,
    rng: &mut Rng,
) -> Result<(TrialSet, TruthSet), MatchError> {
    let families = manifest.families();
    let groups: Vec<Vec<&ManifestEntry>> = families
        .iter()
        .map(|f| manifest.images.iter().filter(|e| e.family == *f).collect())
        .collect();
    if policy == DecoyPolicy::OtherFamilies && families.len() < CANDIDATES {
        return Err(MatchError::InsufficientFamilies {
            have: families.len(),
            need: CANDIDATES,
        });
    }
    if families.is_empty() {
        return Err(MatchError::InsufficientFamilies { have: 0, need: 1 });
    }

    let mut trials = Vec::with_capacity(n);
    let mut truths = Vec::with_capacity(n);
    for t in 0..n {
        let fi = rng.below(families.len());
        let group = &groups[fi];
        let need = match policy {
            DecoyPolicy::OtherFamilies => 2,
            DecoyPolicy::SameFamily => CANDIDATES + 1,
        };
        if group.len() < need {
            return Err(MatchError::InsufficientSeeds {
                family: families[fi].to_string(),
                have: group.len(),
                need,
            });
        }
        let reference = group[rng.below(group.len())];
        let siblings: Vec<&ManifestEntry> = group
            .iter()
            .copied()
            .filter(|e| e.id != reference.id && e.seed != reference.seed)
            .collect();
        let same_params: Vec<&ManifestEntry> =
            siblings.iter().copied().filter(|e| e.params == reference.params).collect();
        let pool = if same_params.is_empty() { &siblings } else { &same_params };
        if pool.is_empty() {
            return Err(MatchError::InsufficientSeeds {
                family: families[fi].to_string(),
                have: 1,
                need: 2,
            });
        }
        let truth = pool[rng.below(pool.len())];

        let mut canonical = vec![truth.id.clone()];
        match policy {
            DecoyPolicy::OtherFamilies => {
                let mut others: Vec<usize> = (0..families.len()).filter(|&i| i != fi).collect();
                rng.shuffle(&mut others);
                for &o in &others[..CANDIDATES - 1] {
                    let g = &groups[o];
                    canonical.push(g[rng.below(g.len())].id.clone());
                }
            }
            DecoyPolicy::SameFamily => {
                let mut rest: Vec<&ManifestEntry> = group
                    .iter()
                    .copied()
                    .filter(|e| e.id != reference.id && e.id != truth.id)
                    .collect();
                rng.shuffle(&mut rest);
                canonical.extend(rest[..CANDIDATES - 1].iter().map(|e| e.id.clone()));
            }
        }

        let mut permutation: Vec<usize> = (0..CANDIDATES).collect();
        rng.shuffle(&mut permutation);
        let truth_index = permutation.iter().position(|&p| p == 0).expect("0 is in the permutation");
        let id = format!("t{t:05}");
        trials.push(Trial {
            id: id.clone(),
            reference: reference.id.clone(),
            candidates: permutation.iter().map(|&p| canonical[p].clone()).collect(),
            mode,
        });
        truths.push(Truth {
            trial_id: id,
            family: families[fi].to_string(),
            truth_index,
            permutation,
        });
    }
    Ok((TrialSet { trials }, TruthSet { truths }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Params;

    fn toy_manifest(families: usize, seeds: u64) -> Manifest {
        let mut images = Vec::new();
        for f in 0..families {
            for s in 0..seeds {
                let family = format!("fam{f}");
                images.push(ManifestEntry {
                    id: ManifestEntry::image_id(&family, s),
                    family,
                    seed: s,
                    params: Params::new(),
                    path: String::new(),
                    sha256: String::new(),
                });
            }
        }
        Manifest { images }
    }

    #[test]
    fn exactly_ten_families() {
        let m = toy_manifest(10, 2);
        let (trials, truths) = assemble_trials(&m, 200, Mode::Color, DecoyPolicy::default(), &mut Rng::new(1)).unwrap();
        for (t, k) in trials.trials.iter().zip(&truths.truths) {
            assert_eq!(t.candidates.len(), CANDIDATES);
            let fam = |id: &str| m.get(id).unwrap().family.clone();
            let mut fams: Vec<String> = t.candidates.iter().map(|c| fam(c)).collect();
            fams.sort();
            fams.dedup();
            assert_eq!(fams.len(), CANDIDATES);
            assert!(!t.candidates.contains(&t.reference));
            let truth = &t.candidates[k.truth_index];
            assert_eq!(fam(truth), fam(&t.reference));
            assert_ne!(truth, &t.reference);
        }
    }

    #[test]
    fn too_few_families_or_seeds() {
        let err = assemble_trials(&toy_manifest(5, 2), 1, Mode::Color, DecoyPolicy::default(), &mut Rng::new(1));
        assert!(matches!(err, Err(MatchError::InsufficientFamilies { have: 5, .. })));
        let err = assemble_trials(&toy_manifest(12, 1), 1, Mode::Color, DecoyPolicy::default(), &mut Rng::new(1));
        assert!(matches!(err, Err(MatchError::InsufficientSeeds { .. })));
        let err = assemble_trials(&toy_manifest(1, 10), 1, Mode::Color, DecoyPolicy::SameFamily, &mut Rng::new(1));
        assert!(matches!(err, Err(MatchError::InsufficientSeeds { need: 11, .. })));
    }

    #[test]
    fn same_family_decoys() {
        let m = toy_manifest(1, 11);
        let (trials, _) = assemble_trials(&m, 20, Mode::Gray, DecoyPolicy::SameFamily, &mut Rng::new(4)).unwrap();
        for t in &trials.trials {
            let mut c = t.candidates.clone();
            c.sort();
            c.dedup();
            assert_eq!(c.len(), CANDIDATES);
            assert!(!c.contains(&t.reference));
        }
    }
}
