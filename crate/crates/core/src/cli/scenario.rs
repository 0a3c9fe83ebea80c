//! Scenario files: which spaces, which isometry, which checks.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::coarse::{
    group_entourage, metric_entourage, CoarseFiltration, GroupTable, MetricSource, Relation, DEFAULT_MAX_LEVEL,
};
use crate::rigidity::{PipelineConfig, Stage};

/// Current scenario and report schema version.
pub const SCHEMA_VERSION: u32 = 1;

fn default_max_level() -> usize {
    DEFAULT_MAX_LEVEL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    pub seed: u64,
    pub source: SpaceSpec,
    /// Defaults to the source space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<SpaceSpec>,
    pub isometry: IsometrySpec,
    #[serde(default)]
    pub pipeline: PipelineConfig,
    #[serde(default)]
    pub probes: ProbeSpec,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { order: usize },
    /// Order `2n`.
    Dihedral { n: usize },
    Table { table: GroupTable },
}

impl GroupSpec {
    pub fn build(&self) -> GroupTable {
        match self {
            GroupSpec::Cyclic { order } => GroupTable::cyclic(*order),
            GroupSpec::Dihedral { n } => GroupTable::dihedral(*n),
            GroupSpec::Table { table } => table.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// `{0..size}` with the radius-`radius` band as generator.
    Band {
        size: usize,
        radius: usize,
        #[serde(default = "default_max_level")]
        max_level: usize,
    },
    /// Integer points in `ℤ^d` with Euclidean radius.
    MetricPoints {
        points: Vec<Vec<i64>>,
        radius: f64,
        #[serde(default = "default_max_level")]
        max_level: usize,
    },
    MetricTable {
        table: Vec<Vec<f64>>,
        radius: f64,
        #[serde(default = "default_max_level")]
        max_level: usize,
    },
    Group {
        group: GroupSpec,
        generators: Vec<usize>,
        #[serde(default = "default_max_level")]
        max_level: usize,
    },
    Filter {
        size: usize,
        base: Vec<Vec<usize>>,
        #[serde(default = "default_max_level")]
        max_level: usize,
    },
    Amplified { base: Box<SpaceSpec>, factor: usize },
    Explicit {
        generator: Relation,
        #[serde(default = "default_max_level")]
        max_level: usize,
    },
    /// A serialized filtration.
    File { path: PathBuf },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<CoarseFiltration, CliError> {
        let spec = |e: &dyn std::fmt::Display| CliError::Spec(e.to_string());
        Ok(match self {
            SpaceSpec::Band { size, radius, max_level } => {
                CoarseFiltration::band(*size, *radius, *max_level).map_err(|e| spec(&e))?
            }
            SpaceSpec::MetricPoints { points, radius, max_level } => {
                let e = metric_entourage(&MetricSource::Points(points.clone()), *radius).map_err(|e| spec(&e))?;
                CoarseFiltration::metric(e, *max_level).map_err(|e| spec(&e))?
            }
            SpaceSpec::MetricTable { table, radius, max_level } => {
                let e = metric_entourage(&MetricSource::Table(table.clone()), *radius).map_err(|e| spec(&e))?;
                CoarseFiltration::metric(e, *max_level).map_err(|e| spec(&e))?
            }
            SpaceSpec::Group {
                group,
                generators,
                max_level,
            } => {
                let table = group.build();
                let s: BTreeSet<usize> = generators.iter().copied().collect();
                let e = group_entourage(&table, &s).map_err(|e| spec(&e))?;
                CoarseFiltration::group(e, *max_level).map_err(|e| spec(&e))?
            }
            SpaceSpec::Filter { size, base, max_level } => {
                let base = base.iter().map(|b| b.iter().copied().collect()).collect();
                CoarseFiltration::filter_restricted(*size, base, *max_level).map_err(|e| spec(&e))?
            }
            SpaceSpec::Amplified { base, factor } => base.build()?.amplify(*factor).map_err(|e| spec(&e))?,
            SpaceSpec::Explicit { generator, max_level } => {
                CoarseFiltration::explicit(generator.clone(), *max_level).map_err(|e| spec(&e))?
            }
            SpaceSpec::File { path } => super::read_json(path)?,
        })
    }

    fn resolve(&mut self, dir: &Path) -> Result<(), CliError> {
        match self {
            SpaceSpec::File { path } => resolve_path(path, dir),
            SpaceSpec::Amplified { base, .. } => base.resolve(dir),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum IsometrySpec {
    /// A seeded permutation with `|σ(x) - x| <= max_displacement`.
    Permutation { max_displacement: usize },
    /// `exp(iθH)·P` with `H` Hermitian, supported on the radius-`band_radius`
    /// band and rescaled to norm one.
    PerturbedPermutation {
        max_displacement: usize,
        theta: f64,
        band_radius: usize,
    },
    /// The 0/1 isometry of an injective map.
    Embedding { map: Vec<usize> },
    /// A serialized operator.
    MatrixFile { path: PathBuf },
}

impl IsometrySpec {
    fn resolve(&mut self, dir: &Path) -> Result<(), CliError> {
        match self {
            IsometrySpec::MatrixFile { path } => resolve_path(path, dir),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSpec {
    /// Ghost profile of the isometry along initial segments.
    pub ghost: bool,
    /// Operator-norm localization probe on the source space.
    pub onl: Option<OnlProbeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnlProbeSpec {
    pub e_level: usize,
    pub m: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Every stage ran without failure.
    PipelineSucceeds,
    /// The pipeline fails exactly at this stage.
    FailsAtStage { stage: Stage },
    /// The bijection (or `f` when none was built) equals the generated map.
    RecoversGroundTruth,
    /// `Y_{x,δ}` contains the generated image of every `x`.
    LocatorsContainTruth,
    /// Level of `{(h(x), σ(x))}` in the target is at most `level`.
    ClosenessToTruthAtMost { level: usize },
    /// `g∘f` is within `level` of the identity.
    GfClosenessAtMost { level: usize },
    /// Forward distortion `k' <= k + offset` for all `k <= up_to`.
    ForwardDistortionWithin { offset: usize, up_to: usize },
    /// Both maps bounded and expanding with finite tables.
    TablesFinite,
    /// Level of the locator union in the target is at most `level`.
    TargetUnionAtMost { level: usize },
    /// The ONL probe localizes every sample by ball level `level`.
    OnlLocalizesAtMost { level: usize },
}

fn resolve_path(path: &mut PathBuf, dir: &Path) -> Result<(), CliError> {
    if path.is_relative() {
        *path = dir.join(&*path);
    }
    if !path.exists() {
        return Err(CliError::Io(format!("referenced file {} does not exist", path.display())));
    }
    Ok(())
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))?;
        match value.get("version") {
            None => return Err(CliError::Spec("missing required field `version`".into())),
            Some(v) if v.as_u64() != Some(SCHEMA_VERSION as u64) => {
                return Err(CliError::Spec(format!("unsupported version {v}, expected {SCHEMA_VERSION}")))
            }
            _ => {}
        }
        serde_json::from_value(value).map_err(|e| CliError::Spec(e.to_string()))
    }

    /// Loads a scenario, resolving file references against its directory
    /// and checking they exist.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut s = Self::from_json(&text)?;
        let dir = path.parent().unwrap_or(Path::new("."));
        s.source.resolve(dir)?;
        if let Some(t) = &mut s.target {
            t.resolve(dir)?;
        }
        s.isometry.resolve(dir)?;
        Ok(s)
    }

    pub fn target_spec(&self) -> &SpaceSpec {
        self.target.as_ref().unwrap_or(&self.source)
    }
}
