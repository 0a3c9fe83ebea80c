//! Running scenarios, evaluating checks, and comparing reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::cache::{cache_dir, load_levels, store_levels};
use super::generate::{build_inputs, Inputs};
use super::scenario::{CheckSpec, Scenario, SCHEMA_VERSION};
use super::{to_json, write_file, CliError, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_STAGE_FAILED};
use crate::coarse::MembershipCertificate;
use crate::rigidity::{closeness_level, full_pipeline, PipelineOutcome, PointMap, StageStatus};
use crate::roe::{ghost_profile, initial_segments, onl_probe, GhostProfile, OnlReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub source_size: usize,
    pub target_size: usize,
    pub isometry_entries: usize,
    pub truth: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ProbeResults {
    pub ghost: Option<GhostProfile>,
    pub onl: Option<OnlReport>,
    /// Probe errors, by probe name.
    pub errors: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub check: CheckSpec,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub exit_code: i32,
    pub first_failing_stage: Option<String>,
    pub strict: bool,
}

/// Wall-clock milliseconds; the only field excluded from reproducibility.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Timing {
    pub inputs_ms: f64,
    pub pipeline_ms: f64,
    pub probes_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact_version: String,
    pub scenario: Scenario,
    /// Hex SHA-256 of the scenario as echoed.
    pub scenario_digest: String,
    pub inputs: InputSummary,
    pub outcome: PipelineOutcome,
    pub probes: ProbeResults,
    pub checks: Vec<CheckVerdict>,
    pub verdict: Verdict,
    pub timing: Timing,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Builds the inputs (seeding level caches from `COARSE_RIGIDITY_CACHE` if
/// set) and runs the scenario.
pub fn run(scenario: &Scenario, strict: bool) -> Result<Report, CliError> {
    let start = Instant::now();
    let inputs = build_inputs(scenario)?;
    let cache = cache_dir();
    if let Some(dir) = &cache {
        load_levels(dir, &inputs.source);
        load_levels(dir, &inputs.target);
    }
    let inputs_ms = ms(start);
    let mut report = run_with_inputs(scenario, &inputs, strict);
    if let Some(dir) = &cache {
        store_levels(dir, &inputs.source)?;
        store_levels(dir, &inputs.target)?;
    }
    report.timing.inputs_ms = inputs_ms;
    report.timing.total_ms = ms(start);
    Ok(report)
}

pub fn run_with_inputs(scenario: &Scenario, inputs: &Inputs, strict: bool) -> Report {
    let t = Instant::now();
    let outcome = full_pipeline(&inputs.isometry, &inputs.source, &inputs.target, &scenario.pipeline);
    let pipeline_ms = ms(t);

    let t = Instant::now();
    let mut probes = ProbeResults::default();
    if scenario.probes.ghost {
        let n = inputs.isometry.rows().max(inputs.isometry.cols());
        match ghost_profile(&inputs.isometry, &initial_segments(n)) {
            Ok(g) => probes.ghost = Some(g),
            Err(e) => {
                probes.errors.insert("ghost".into(), e.to_string());
            }
        }
    }
    if let Some(spec) = &scenario.probes.onl {
        match onl_probe(&inputs.source, spec.e_level, spec.m, spec.samples, scenario.seed) {
            Ok(r) => probes.onl = Some(r),
            Err(e) => {
                probes.errors.insert("onl".into(), e.to_string());
            }
        }
    }
    let probes_ms = ms(t);

    let checks: Vec<CheckVerdict> = scenario
        .checks
        .iter()
        .map(|c| evaluate(c, &outcome, inputs, &probes))
        .collect();
    let verdict = decide(scenario, &outcome, &checks, strict);
    let digest = Sha256::digest(serde_json::to_string(scenario).expect("scenarios serialize").as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    Report {
        schema_version: SCHEMA_VERSION,
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: scenario.clone(),
        scenario_digest: digest,
        inputs: InputSummary {
            source_size: inputs.source.size(),
            target_size: inputs.target.size(),
            isometry_entries: inputs.isometry.nnz(),
            truth: inputs.truth.clone(),
        },
        outcome,
        probes,
        checks,
        verdict,
        timing: Timing {
            inputs_ms: 0.0,
            pipeline_ms,
            probes_ms,
            total_ms: pipeline_ms + probes_ms,
        },
    }
}

fn decide(scenario: &Scenario, outcome: &PipelineOutcome, checks: &[CheckVerdict], strict: bool) -> Verdict {
    let first_failing_stage = outcome.failed_stage.map(|s| {
        serde_json::to_value(s)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    });
    let expects_failure = scenario.checks.iter().any(|c| matches!(c, CheckSpec::FailsAtStage { .. }));
    let checks_ok = checks.iter().all(|c| c.passed);
    let strict_ok = !strict
        || (!checks.is_empty() && outcome.stages.iter().all(|s| s.status != StageStatus::Skipped));
    let exit_code = if outcome.failed_stage.is_some() && !expects_failure {
        EXIT_STAGE_FAILED
    } else if checks_ok && strict_ok {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    };
    Verdict {
        passed: exit_code == EXIT_PASS,
        exit_code,
        first_failing_stage,
        strict,
    }
}

fn verdict(check: &CheckSpec, passed: bool, detail: impl Into<String>) -> CheckVerdict {
    CheckVerdict {
        check: check.clone(),
        passed,
        detail: detail.into(),
    }
}

fn level_at_most(check: &CheckSpec, what: &str, cert: Option<&MembershipCertificate>, bound: usize) -> CheckVerdict {
    match cert.and_then(MembershipCertificate::level) {
        Some(l) => verdict(check, l <= bound, format!("{what} at level {l}, bound {bound}")),
        None if cert.is_some() => verdict(check, false, format!("{what} refused within the cap")),
        None => verdict(check, false, format!("{what} not computed")),
    }
}

fn evaluate(check: &CheckSpec, outcome: &PipelineOutcome, inputs: &Inputs, probes: &ProbeResults) -> CheckVerdict {
    let eq = outcome.equivalence.as_ref();
    let recovered: Option<PointMap> = eq.map(|e| e.bijection.clone().unwrap_or_else(|| e.f.clone()));
    match check {
        CheckSpec::PipelineSucceeds => match outcome.failed_stage {
            None => verdict(check, true, "all stages ok"),
            Some(s) => verdict(check, false, format!("failed at {s:?}")),
        },
        CheckSpec::FailsAtStage { stage } => verdict(
            check,
            outcome.failed_stage == Some(*stage),
            format!("failed stage {:?}", outcome.failed_stage),
        ),
        CheckSpec::RecoversGroundTruth => match (&inputs.truth, recovered) {
            (None, _) => verdict(check, false, "scenario has no ground truth"),
            (_, None) => verdict(check, false, "no map recovered"),
            (Some(truth), Some(h)) => {
                let wrong: Vec<usize> = (0..truth.len()).filter(|&x| h.get(x) != Some(truth[x])).collect();
                verdict(check, wrong.is_empty(), format!("{} points differ", wrong.len()))
            }
        },
        CheckSpec::LocatorsContainTruth => match (&inputs.truth, &outcome.locators) {
            (Some(truth), Some(loc)) => {
                let missing = (0..truth.len()).filter(|&x| !loc.y_of[x].contains(&truth[x])).count();
                verdict(check, missing == 0, format!("{missing} locators miss the true image"))
            }
            _ => verdict(check, false, "no ground truth or no locators"),
        },
        CheckSpec::ClosenessToTruthAtMost { level } => match (&inputs.truth, recovered) {
            (Some(truth), Some(h)) => {
                let t = PointMap::total(inputs.target.size(), truth).expect("truth lies in the target");
                match closeness_level(&h, &t, &inputs.target) {
                    Ok(cert) => level_at_most(check, "closeness to truth", Some(&cert), *level),
                    Err(e) => verdict(check, false, e.to_string()),
                }
            }
            _ => verdict(check, false, "no ground truth or no recovered map"),
        },
        CheckSpec::GfClosenessAtMost { level } => {
            level_at_most(check, "g∘f closeness", eq.and_then(|e| e.gf_closeness.as_ref()), *level)
        }
        CheckSpec::ForwardDistortionWithin { offset, up_to } => match eq {
            None => verdict(check, false, "no distortion table"),
            Some(e) => {
                let table = &e.f_distortion.forward;
                let bad = (0..=*up_to).find(|&k| table.get(k).and_then(|d| d.level()).is_none_or(|l| l > k + offset));
                match bad {
                    None => verdict(check, true, format!("k' <= k + {offset} for k <= {up_to}")),
                    Some(k) => verdict(
                        check,
                        false,
                        format!("k = {k}: k' = {:?}", table.get(k).and_then(|d| d.level())),
                    ),
                }
            }
        },
        CheckSpec::TablesFinite => match eq {
            None => verdict(check, false, "no distortion tables"),
            Some(e) => {
                let ok = e.f_distortion.is_coarse_embedding() && e.g_distortion.is_coarse_embedding();
                verdict(check, ok, format!("f and g coarse embeddings: {ok}"))
            }
        },
        CheckSpec::TargetUnionAtMost { level } => {
            level_at_most(check, "locator union", eq.map(|e| &e.target_union), *level)
        }
        CheckSpec::OnlLocalizesAtMost { level } => match &probes.onl {
            None => verdict(check, false, "onl probe not run"),
            Some(r) => match r.localization_level {
                Some(l) => verdict(check, l <= *level, format!("localized at ball level {l}")),
                None => verdict(check, false, "not localized within the cap"),
            },
        },
    }
}

/// `table,direction,k,level` rows for both maps; refusals have an empty
/// level.
pub fn distortion_csv(outcome: &PipelineOutcome) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["map", "direction", "k", "level"]).expect("in-memory");
    if let Some(eq) = &outcome.equivalence {
        for (name, report) in [("f", &eq.f_distortion), ("g", &eq.g_distortion)] {
            for (dir, table) in [("forward", &report.forward), ("backward", &report.backward)] {
                for e in table {
                    let level = e.level().map(|l| l.to_string()).unwrap_or_default();
                    w.write_record([name, dir, &e.k.to_string(), &level]).expect("in-memory");
                }
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("ascii")
}

/// `m,size,eps` rows of a ghost profile.
pub fn ghost_csv(profile: &GhostProfile) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["m", "size", "eps"]).expect("in-memory");
    for (m, (set, eps)) in profile.exhaustion.iter().zip(&profile.eps).enumerate() {
        w.write_record([m.to_string(), set.len().to_string(), format!("{eps:e}")])
            .expect("in-memory");
    }
    String::from_utf8(w.into_inner().expect("in-memory")).expect("ascii")
}

/// Writes `report.json`, `distortion.csv` and, if probed, `ghost.csv`.
pub fn write_outputs(report: &Report, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    let mut files = vec![
        (out.join("report.json"), report.to_json()),
        (out.join("distortion.csv"), distortion_csv(&report.outcome)),
    ];
    if let Some(g) = &report.probes.ghost {
        files.push((out.join("ghost.csv"), ghost_csv(g)));
    }
    for (path, contents) in &files {
        write_file(path, contents)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

/// One differing leaf between two reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffEntry {
    /// JSON-pointer style path, e.g. `/outcome/config/delta`.
    pub path: String,
    pub left: Value,
    pub right: Value,
}

/// Field-level differences between two serialized reports, ignoring
/// `timing`. Reports with different schema versions are not comparable.
pub fn report_diff(a: &Value, b: &Value) -> Result<Vec<DiffEntry>, CliError> {
    let version = |v: &Value| v.get("schema_version").and_then(Value::as_u64);
    match (version(a), version(b)) {
        (Some(x), Some(y)) if x == y => {}
        (x, y) => return Err(CliError::SchemaMismatch(format!("schema versions {x:?} and {y:?}"))),
    }
    let strip = |v: &Value| {
        let mut v = v.clone();
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        v
    };
    let mut out = Vec::new();
    diff_values("", &strip(a), &strip(b), &mut out);
    Ok(out)
}

fn diff_values(path: &str, a: &Value, b: &Value, out: &mut Vec<DiffEntry>) {
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let keys: std::collections::BTreeSet<&String> = x.keys().chain(y.keys()).collect();
            for k in keys {
                let sub = format!("{path}/{k}");
                diff_values(
                    &sub,
                    x.get(k).unwrap_or(&Value::Null),
                    y.get(k).unwrap_or(&Value::Null),
                    out,
                );
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            for i in 0..x.len().max(y.len()) {
                diff_values(
                    &format!("{path}/{i}"),
                    x.get(i).unwrap_or(&Value::Null),
                    y.get(i).unwrap_or(&Value::Null),
                    out,
                );
            }
        }
        _ if a != b => out.push(DiffEntry {
            path: path.to_string(),
            left: a.clone(),
            right: b.clone(),
        }),
        _ => {}
    }
}
