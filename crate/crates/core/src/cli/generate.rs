//! Deterministic construction of the spaces and the isometry of a scenario.

use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;

use super::scenario::{IsometrySpec, Scenario};
use super::{read_json, to_json, write_file, CliError};
use crate::coarse::{band, CoarseFiltration, Relation};
use crate::rigidity::embed_from_map;
use crate::roe::random::{random_hermitian, stream_rng, unitary_exponential};
use crate::roe::SparseOperator;

/// RNG stream for the permutation; the Hermitian perturbation uses stream 1.
const PERMUTATION_STREAM: u64 = 0;
const HERMITIAN_STREAM: u64 = 1;

#[derive(Debug, Clone)]
pub struct Inputs {
    pub source: CoarseFiltration,
    pub target: CoarseFiltration,
    pub isometry: SparseOperator,
    /// The map the isometry was built from, when there is one.
    pub truth: Option<Vec<usize>>,
}

/// A permutation of `{0..n}` with `|σ(x) - x| <= d`: consecutive blocks of
/// random length at most `d + 1`, each shuffled.
pub fn local_permutation<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<usize> {
    let mut sigma: Vec<usize> = (0..n).collect();
    let mut start = 0;
    while start < n {
        let len = rng.random_range(1..=d + 1).min(n - start);
        sigma[start..start + len].shuffle(rng);
        start += len;
    }
    sigma
}

fn same_size(source: &CoarseFiltration, target: &CoarseFiltration, what: &str) -> Result<usize, CliError> {
    if source.size() != target.size() {
        return Err(CliError::Spec(format!(
            "isometry.{what}: source has {} points, target has {}",
            source.size(),
            target.size()
        )));
    }
    Ok(source.size())
}

pub fn build_inputs(s: &Scenario) -> Result<Inputs, CliError> {
    let source = s.source.build()?;
    let target = s.target_spec().build()?;
    let (isometry, truth) = match &s.isometry {
        IsometrySpec::Permutation { max_displacement } => {
            let n = same_size(&source, &target, "permutation")?;
            let sigma = local_permutation(n, *max_displacement, &mut stream_rng(s.seed, PERMUTATION_STREAM));
            let p = SparseOperator::partial_translation(&Relation::graph_of(n, &sigma).expect("permutation"));
            (p, Some(sigma))
        }
        IsometrySpec::PerturbedPermutation {
            max_displacement,
            theta,
            band_radius,
        } => {
            let n = same_size(&source, &target, "perturbed_permutation")?;
            if !theta.is_finite() {
                return Err(CliError::Spec("isometry.theta must be finite".into()));
            }
            let sigma = local_permutation(n, *max_displacement, &mut stream_rng(s.seed, PERMUTATION_STREAM));
            let p = SparseOperator::partial_translation(&Relation::graph_of(n, &sigma).expect("permutation"));
            let h = random_hermitian(&band(n, *band_radius), 1.0, &mut stream_rng(s.seed, HERMITIAN_STREAM));
            let u = unitary_exponential(&h, *theta) * p.to_dense();
            (SparseOperator::from_dense(&u), Some(sigma))
        }
        IsometrySpec::Embedding { map } => {
            if map.len() != source.size() {
                return Err(CliError::Spec(format!(
                    "isometry.map: has {} entries, source has {} points",
                    map.len(),
                    source.size()
                )));
            }
            let iso = embed_from_map(map, target.size()).map_err(|e| CliError::Spec(format!("isometry.map: {e}")))?;
            (iso.u, Some(map.clone()))
        }
        IsometrySpec::MatrixFile { path } => (read_json(path)?, None),
    };
    Ok(Inputs {
        source,
        target,
        isometry,
        truth,
    })
}

/// Writes `source.json`, `target.json`, `isometry.json` and, when known,
/// `truth.json` into `out`. Returns the written paths.
pub fn generate(s: &Scenario, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let inputs = build_inputs(s)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let mut files = vec![
        ("source.json", to_json(&inputs.source)),
        ("target.json", to_json(&inputs.target)),
        ("isometry.json", to_json(&inputs.isometry)),
    ];
    if let Some(t) = &inputs.truth {
        files.push(("truth.json", to_json(t)));
    }
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = out.join(name);
        write_file(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}
