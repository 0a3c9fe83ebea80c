//! On-disk cache of filtration levels, keyed by a digest of the filtration.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::CliError;
use crate::coarse::{CoarseFiltration, Relation};

pub const CACHE_ENV: &str = "COARSE_RIGIDITY_CACHE";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Hex SHA-256 of the filtration's JSON form.
pub fn cache_key(f: &CoarseFiltration) -> String {
    let json = serde_json::to_string(f).expect("filtrations serialize");
    Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn entry(dir: &Path, f: &CoarseFiltration) -> PathBuf {
    dir.join(format!("levels-{}.json", cache_key(f)))
}

/// Seeds `f` from the cache; returns the number of cached levels now held.
/// A missing or unreadable entry is not an error.
pub fn load_levels(dir: &Path, f: &CoarseFiltration) -> usize {
    let levels: Option<Vec<Relation>> = std::fs::read_to_string(entry(dir, f))
        .ok()
        .and_then(|text| serde_json::from_str(&text).ok());
    match levels {
        Some(levels) => f.preload_levels(levels).unwrap_or(1),
        None => f.cached_levels().len(),
    }
}

/// Writes the levels computed so far, via a temporary file and a rename.
pub fn store_levels(dir: &Path, f: &CoarseFiltration) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let levels: Vec<Relation> = f.cached_levels().iter().map(|l| (**l).clone()).collect();
    let path = entry(dir, f);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    super::write_file(&tmp, &serde_json::to_string(&levels).expect("relations serialize"))?;
    std::fs::rename(&tmp, &path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
