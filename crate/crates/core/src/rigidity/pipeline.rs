//! End-to-end recovery with a stage log and structured partial results.

use serde::{Deserialize, Serialize};

use super::distortion::{
    closeness_level, entourage_union_level, source_union_level, verify_coarse_expanding, DistortionReport,
};
use super::locators::{concentration_check, locator_sets, ConcentrationReport, IsometryData, Locators};
use super::maps::{cantor_bernstein, recover_maps, PointMap, RecoveredMaps};
use super::RigidityError;
use crate::coarse::{CoarseFiltration, MembershipCertificate, DEFAULT_MAX_LEVEL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub delta: f64,
    pub eta: f64,
    pub eps: f64,
    /// Distortion tables are filled for `k = 0..=max_level`.
    pub max_level: usize,
    pub isometry_tol: f64,
    /// Select injective maps and straighten them into a bijection.
    pub require_bijection: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            delta: 0.5,
            eta: 0.5,
            eps: 0.4,
            max_level: DEFAULT_MAX_LEVEL,
            isometry_tol: 1e-10,
            require_bijection: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    CheckIsometry,
    Locators,
    Concentration,
    RecoverMaps,
    Distortion,
    Closeness,
    Bijection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Ok,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub status: StageStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveredEquivalence {
    pub f: PointMap,
    pub g: PointMap,
    pub uncovered_targets: Vec<usize>,
    pub f_distortion: DistortionReport,
    pub g_distortion: DistortionReport,
    /// `g∘f` against the identity of the source.
    pub gf_closeness: Option<MembershipCertificate>,
    /// `f∘g` against the identity of the target, where `g` is defined.
    pub fg_closeness: Option<MembershipCertificate>,
    /// Level of `⋃_x Y_{x,δ} × Y_{x,δ}` in the target.
    pub target_union: MembershipCertificate,
    /// Level of `⋃_y X_{y,δ} × X_{y,δ}` in the source.
    pub source_union: MembershipCertificate,
    pub bijection: Option<PointMap>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutcome {
    pub config: PipelineConfig,
    pub stages: Vec<StageRecord>,
    pub isometry_defect: Option<f64>,
    pub locators: Option<Locators>,
    pub concentration: Option<ConcentrationReport>,
    pub equivalence: Option<RecoveredEquivalence>,
    pub failed_stage: Option<Stage>,
}

impl PipelineOutcome {
    pub fn succeeded(&self) -> bool {
        self.failed_stage.is_none()
    }

    fn record(&mut self, stage: Stage, status: StageStatus, detail: impl Into<String>) {
        if status == StageStatus::Failed && self.failed_stage.is_none() {
            self.failed_stage = Some(stage);
        }
        self.stages.push(StageRecord {
            stage,
            status,
            detail: detail.into(),
        });
    }

    fn fail(mut self, stage: Stage, err: impl std::fmt::Display) -> Self {
        self.record(stage, StageStatus::Failed, err.to_string());
        self
    }
}

/// Runs every stage in order; the first failing stage ends the run and the
/// outcome keeps whatever was computed before it.
pub fn full_pipeline(
    u: &crate::roe::SparseOperator,
    source: &CoarseFiltration,
    target: &CoarseFiltration,
    config: &PipelineConfig,
) -> PipelineOutcome {
    let mut out = PipelineOutcome {
        config: config.clone(),
        stages: Vec::new(),
        isometry_defect: None,
        locators: None,
        concentration: None,
        equivalence: None,
        failed_stage: None,
    };

    if u.cols() != source.size() || u.rows() != target.size() {
        let err = RigidityError::Shape {
            expected: (target.size(), source.size()),
            got: u.shape(),
        };
        return out.fail(Stage::CheckIsometry, err);
    }
    match IsometryData::check(u, config.isometry_tol) {
        Ok(iso) => {
            out.isometry_defect = Some(iso.defect);
            out.record(Stage::CheckIsometry, StageStatus::Ok, format!("defect {:e}", iso.defect));
        }
        Err(e) => {
            if let RigidityError::NotIsometry { defect, .. } = e {
                out.isometry_defect = Some(defect);
            }
            return out.fail(Stage::CheckIsometry, e);
        }
    }

    let loc = match locator_sets(u, config.delta) {
        Ok(l) => l,
        Err(e) => return out.fail(Stage::Locators, e),
    };
    let detail = format!("max locator size {}", loc.max_size());
    out.locators = Some(loc.clone());
    out.record(Stage::Locators, StageStatus::Ok, detail);

    match concentration_check(u, config.eta, config.eps) {
        Ok(report) => {
            let passes = report.passes;
            let detail = format!(
                "max tails {:.3e} / {:.3e}",
                report.max_source_tail, report.max_target_tail
            );
            out.concentration = Some(report);
            if !passes {
                return out.fail(Stage::Concentration, format!("tails reach eps = {}: {detail}", config.eps));
            }
            out.record(Stage::Concentration, StageStatus::Ok, detail);
        }
        Err(e) => return out.fail(Stage::Concentration, e),
    }

    let RecoveredMaps {
        f,
        g,
        uncovered_targets,
    } = match recover_maps(&loc, config.require_bijection) {
        Ok(m) => m,
        Err(e) => return out.fail(Stage::RecoverMaps, e),
    };
    out.record(
        Stage::RecoverMaps,
        StageStatus::Ok,
        format!("{} targets outside the range", uncovered_targets.len()),
    );

    let tables = verify_coarse_expanding(&f, source, target, config.max_level).and_then(|fd| {
        let gd = verify_coarse_expanding(&g, target, source, config.max_level)?;
        Ok((fd, gd))
    });
    let (f_distortion, g_distortion) = match tables {
        Ok(t) => t,
        Err(e) => return out.fail(Stage::Distortion, e),
    };
    let unions = entourage_union_level(&loc, target).and_then(|t| Ok((t, source_union_level(&loc, source)?)));
    let (target_union, source_union) = match unions {
        Ok(u) => u,
        Err(e) => return out.fail(Stage::Distortion, e),
    };
    let mut eq = RecoveredEquivalence {
        f: f.clone(),
        g: g.clone(),
        uncovered_targets,
        f_distortion,
        g_distortion,
        gf_closeness: None,
        fg_closeness: None,
        target_union,
        source_union,
        bijection: None,
    };
    // The tables are measurements: a refusal at level `k` only means the
    // image relation outgrew the filtration cap, which happens near the cap
    // whenever it is below the diameter. Checks decide what is acceptable.
    let first_refusal = |r: &DistortionReport| {
        r.forward.iter().chain(&r.backward).find(|e| !e.certificate.is_contained()).map(|e| e.k)
    };
    let detail = match (first_refusal(&eq.f_distortion), first_refusal(&eq.g_distortion)) {
        (None, None) => "both tables finite up to the cap".to_string(),
        (a, b) => format!("first refusal: f at k={a:?}, g at k={b:?}"),
    };
    out.record(Stage::Distortion, StageStatus::Ok, detail);

    let id_x = PointMap::total(source.size(), &(0..source.size()).collect::<Vec<_>>()).expect("identity");
    let id_y = PointMap::total(target.size(), &(0..target.size()).collect::<Vec<_>>()).expect("identity");
    let closeness = closeness_level(&g.after(&f), &id_x, source)
        .and_then(|gf| Ok((gf, closeness_level(&f.after(&g), &id_y, target)?)));
    match closeness {
        Ok((gf, fg)) => {
            let ok = gf.is_contained() && fg.is_contained();
            let detail = format!("g∘f at {:?}, f∘g at {:?}", gf.level(), fg.level());
            eq.gf_closeness = Some(gf);
            eq.fg_closeness = Some(fg);
            if !ok {
                out.equivalence = Some(eq);
                return out.fail(Stage::Closeness, detail);
            }
            out.record(Stage::Closeness, StageStatus::Ok, detail);
        }
        Err(e) => {
            out.equivalence = Some(eq);
            return out.fail(Stage::Closeness, e);
        }
    }

    if !config.require_bijection {
        out.record(Stage::Bijection, StageStatus::Skipped, "not requested");
    } else if !g.is_total() {
        let detail = format!("g is partial: {} targets outside the range", eq.uncovered_targets.len());
        out.record(Stage::Bijection, StageStatus::Skipped, detail);
    } else {
        match cantor_bernstein(&f, &g) {
            Ok(h) => {
                eq.bijection = Some(h);
                out.record(Stage::Bijection, StageStatus::Ok, "bijection assembled");
            }
            Err(e) => {
                out.equivalence = Some(eq);
                return out.fail(Stage::Bijection, e);
            }
        }
    }
    out.equivalence = Some(eq);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coarse::{band, Relation};
    use crate::rigidity::embed_from_map;
    use crate::roe::random::{random_hermitian, stream_rng, unitary_exponential};
    use crate::roe::SparseOperator;

    fn permutation(sigma: &[usize]) -> SparseOperator {
        SparseOperator::partial_translation(&Relation::graph_of(sigma.len(), sigma).unwrap())
    }

    #[test]
    fn permutation_is_recovered_exactly() {
        let n = 30;
        let sigma: Vec<usize> = (0..n).map(|i| (i / 3) * 3 + (2 - i % 3)).collect();
        let f = CoarseFiltration::band(n, 1, 64).unwrap();
        let out = full_pipeline(&permutation(&sigma), &f, &f, &PipelineConfig::default());
        assert!(out.succeeded(), "{:?}", out.stages);
        let eq = out.equivalence.unwrap();
        assert_eq!(eq.bijection.unwrap().to_total().unwrap(), sigma);
        assert_eq!(eq.gf_closeness.unwrap().level(), Some(0));
        assert_eq!(eq.target_union.level(), Some(0));
        assert_eq!(eq.f_distortion.forward[1].level(), Some(5));
    }

    #[test]
    fn perturbed_permutation_is_recovered() {
        let n = 40;
        let sigma: Vec<usize> = (0..n).map(|i| i ^ 1).collect();
        let mut rng = stream_rng(9, 0);
        let h = random_hermitian(&band(n, 1), 1.0, &mut rng);
        let u = SparseOperator::from_dense(&(unitary_exponential(&h, 0.1) * permutation(&sigma).to_dense()));
        let f = CoarseFiltration::band(n, 1, 64).unwrap();
        let out = full_pipeline(&u, &f, &f, &PipelineConfig::default());
        assert!(out.succeeded(), "{:?}", out.stages);
        assert_eq!(out.equivalence.unwrap().bijection.unwrap().to_total().unwrap(), sigma);
    }

    #[test]
    fn embedding_skips_bijection() {
        let fm: Vec<usize> = (0..16).map(|x| 2 * x).collect();
        let iso = embed_from_map(&fm, 32).unwrap();
        let source = CoarseFiltration::band(16, 1, 64).unwrap();
        let target = CoarseFiltration::band(32, 1, 64).unwrap();
        let out = full_pipeline(&iso.u, &source, &target, &PipelineConfig::default());
        assert!(out.succeeded(), "{:?}", out.stages);
        let last = out.stages.last().unwrap();
        assert_eq!((last.stage, last.status), (Stage::Bijection, StageStatus::Skipped));
        let eq = out.equivalence.unwrap();
        assert_eq!(eq.f.to_total().unwrap(), fm);
        assert_eq!(eq.fg_closeness.unwrap().level(), Some(0));
    }

    #[test]
    fn non_isometry_fails_first_stage() {
        let mut u = SparseOperator::identity(4);
        u.set(0, 0, num_complex::Complex64::new(2.0, 0.0));
        let f = CoarseFiltration::band(4, 1, 8).unwrap();
        let out = full_pipeline(&u, &f, &f, &PipelineConfig::default());
        assert_eq!(out.failed_stage, Some(Stage::CheckIsometry));
        assert!((out.isometry_defect.unwrap() - 3.0).abs() < 1e-12);
        assert!(out.equivalence.is_none());
    }

    #[test]
    fn spread_isometry_fails_concentration() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let mut u = SparseOperator::zeros(2, 2);
        for (y, x, v) in [(0, 0, r), (0, 1, r), (1, 0, r), (1, 1, -r)] {
            u.set(y, x, num_complex::Complex64::new(v, 0.0));
        }
        let f = CoarseFiltration::band(2, 1, 8).unwrap();
        // every entry has locator value 1/√2, so δ = 0.5 keeps everything
        assert!(full_pipeline(&u, &f, &f, &PipelineConfig::default()).succeeded());
        let config = PipelineConfig {
            delta: 0.8,
            eta: 0.8,
            ..PipelineConfig::default()
        };
        let out = full_pipeline(&u, &f, &f, &config);
        assert_eq!(out.failed_stage, Some(Stage::Concentration));
        assert!(out.concentration.is_some());
    }
}
