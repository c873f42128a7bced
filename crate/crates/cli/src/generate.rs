use std::fs;
use std::path::{Path, PathBuf};

use procsim::families;
use procsim::image::{sha256_hex, RasterImage};
use procsim::manifest::{Manifest, ManifestEntry};
use procsim::params::{GeneratorSpec, Params, Sidecar};
use rayon::prelude::*;

use crate::error::CliError;

fn unwritable(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Unwritable(format!("cannot write {}: {e}", path.display()))
}

/// Encodes and writes a PNG, returning the SHA-256 of the file bytes.
pub fn write_png(img: &RasterImage, path: &Path) -> Result<String, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| unwritable(dir, e))?;
    }
    let bytes = img.encode_png().map_err(|e| CliError::Other(e.to_string()))?;
    fs::write(path, &bytes).map_err(|e| unwritable(path, e))?;
    Ok(sha256_hex(&bytes))
}

pub fn read_params(path: Option<&Path>) -> Result<Params, CliError> {
    let Some(p) = path else {
        return Ok(Params::new());
    };
    let text = fs::read_to_string(p).map_err(|e| CliError::InvalidParams(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::InvalidParams(format!("malformed params in {}: {e}", p.display())))
}

/// Renders one image and writes it with a JSON sidecar next to it.
pub fn generate(spec: &GeneratorSpec, width: usize, height: usize, out: &Path) -> Result<PathBuf, CliError> {
    // resolve the family first so an unknown name wins over bad params
    families::family(&spec.family)?;
    let img = families::render_spec(spec, width, height)?;
    write_png(&img, out)?;
    let sidecar = Sidecar {
        spec: spec.clone(),
        width,
        height,
    };
    let side_path = out.with_extension("json");
    let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    text.push('\n');
    fs::write(&side_path, text).map_err(|e| unwritable(&side_path, e))?;
    Ok(out.to_path_buf())
}

/// Renders `per_family` seeds (`seed`, `seed + 1`, ...) of each family into
/// `out_dir` and writes `out_dir/manifest.json`.
pub fn gallery(
    family_names: &[&str],
    per_family: usize,
    seed: u64,
    width: usize,
    height: usize,
    out_dir: &Path,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| unwritable(out_dir, e))?;
    let jobs: Vec<(&str, u64)> = family_names
        .iter()
        .flat_map(|&f| (0..per_family as u64).map(move |i| (f, seed + i)))
        .collect();
    let entries: Vec<ManifestEntry> = jobs
        .par_iter()
        .map(|&(family, s)| {
            let spec = GeneratorSpec {
                family: family.to_string(),
                params: Params::new(),
                seed: s,
            };
            let img = families::render_spec(&spec, width, height)?;
            let id = ManifestEntry::image_id(family, s);
            let file = format!("{id}.png");
            let sha256 = write_png(&img, &out_dir.join(&file))?;
            Ok(ManifestEntry {
                id,
                family: spec.family,
                seed: s,
                params: spec.params,
                path: file,
                sha256,
            })
        })
        .collect::<Result<_, CliError>>()?;
    let path = out_dir.join("manifest.json");
    Manifest { images: entries }
        .save(&path)
        .map_err(|e| CliError::Unwritable(e.to_string()))?;
    Ok(path)
}
