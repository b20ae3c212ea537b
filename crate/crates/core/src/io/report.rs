//! JSON analysis reports.

use serde::{Deserialize, Serialize};

use crate::configspace::{self, GlobalMode};
use crate::error::Result;
use crate::linalg;
use crate::pattern::{pattern_tile, CreasePattern, PatternClass, GEOMETRY_TOL};
use crate::selffold::{self, Analysis, FoldabilityVerdict};
use crate::sim::{self, fold_path, forward_force_along_path};
use crate::vertex;

pub const DEFAULT_REPORT_TOL: f64 = 1e-9;

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternInfo {
    pub source: String,
    pub class: PatternClass,
    pub tile_angles_deg: Option<[f64; 4]>,
    pub rows: usize,
    pub cols: usize,
    pub vertex_count: usize,
    pub interior_vertex_count: usize,
    pub crease_count: usize,
    pub tangent_space_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub id: usize,
    pub vertex_modes: Vec<u8>,
    pub mv: String,
    pub driver_crease: usize,
    /// Unit tangent at the flat state.
    pub tangent: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSummary {
    pub driver_max_deg: f64,
    pub points: usize,
    pub min: f64,
    pub max: f64,
    pub all_positive: bool,
    pub max_closure_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictEntry {
    pub mode: usize,
    pub uniquely_self_foldable: bool,
    pub predicted_unique: Option<bool>,
    pub span_residual: f64,
    pub surrounding_span_dim: usize,
    pub perpendicularity: f64,
    pub forward_force: f64,
    pub driving_force: Option<Vec<f64>>,
    pub forward_force_trace: Option<TraceSummary>,
    pub trace_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub report: f64,
    pub geometry: f64,
    pub rank_cutoff: f64,
    pub rank_ambiguous_band: [f64; 2],
    pub kernel: f64,
    pub loop_product: f64,
    pub branch_dedup_angle: f64,
    pub branch_confirm_driver_deg: f64,
    pub branch_confirm_angle: f64,
    pub in_span: f64,
    pub perpendicular: f64,
    pub newton_converged: f64,
    pub newton_accept: f64,
    pub propagation: f64,
    pub point_closure: f64,
    pub placement: f64,
}

impl Tolerances {
    pub fn with_report(report: f64) -> Self {
        Tolerances {
            report,
            geometry: GEOMETRY_TOL,
            rank_cutoff: linalg::RANK_CUTOFF,
            rank_ambiguous_band: [linalg::AMBIGUOUS_BAND.0, linalg::AMBIGUOUS_BAND.1],
            kernel: configspace::KERNEL_TOL,
            loop_product: configspace::LOOP_TOL,
            branch_dedup_angle: configspace::DEDUP_ANGLE,
            branch_confirm_driver_deg: configspace::CONFIRM_DRIVER.to_degrees(),
            branch_confirm_angle: configspace::CONFIRM_ANGLE,
            in_span: selffold::IN_SPAN_TOL,
            perpendicular: selffold::PERPENDICULAR_TOL,
            newton_converged: vertex::NEWTON_CONVERGED,
            newton_accept: vertex::NEWTON_ACCEPT,
            propagation: sim::PROPAGATION_TOL,
            point_closure: sim::POINT_CLOSURE_TOL,
            placement: sim::PLACEMENT_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisReport {
    pub tool: String,
    pub tool_version: String,
    pub pattern: PatternInfo,
    pub mode_count: usize,
    pub modes: Vec<ModeEntry>,
    pub verdicts: Vec<VerdictEntry>,
    pub tolerances: Tolerances,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Parses and validates a report; unknown or missing fields are errors.
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn pattern_info(p: &CreasePattern, source: &str, class: PatternClass, dim: usize) -> PatternInfo {
    PatternInfo {
        source: source.to_string(),
        class,
        tile_angles_deg: pattern_tile(p).ok().map(|t| t.angles().map(|a| round15(a.to_degrees()))),
        rows: p.rows(),
        cols: p.cols(),
        vertex_count: p.vertices().len(),
        interior_vertex_count: p.stars().len(),
        crease_count: p.crease_count(),
        tangent_space_dim: dim,
    }
}

pub fn mode_entry(id: usize, m: &GlobalMode) -> ModeEntry {
    ModeEntry {
        id,
        vertex_modes: m.vertex_modes.clone(),
        mv: m.mv_string(),
        driver_crease: m.driver_crease,
        tangent: m.tangent.normalized().components.iter().map(|x| round15(*x)).collect(),
    }
}

/// Path settings for the forward-force trace.
#[derive(Clone, Copy, Debug)]
pub struct TraceSettings {
    pub driver_max: f64,
    pub steps: usize,
}

pub fn verdict_entry(
    p: &CreasePattern,
    mode: &GlobalMode,
    v: &FoldabilityVerdict,
    trace: Option<TraceSettings>,
    report_tol: f64,
) -> VerdictEntry {
    let mut entry = VerdictEntry {
        mode: v.target_mode,
        uniquely_self_foldable: v.uniquely_self_foldable,
        predicted_unique: v.diagnostics.predicted_unique,
        span_residual: round15(v.diagnostics.span_residual),
        surrounding_span_dim: v.diagnostics.surrounding_span_dim,
        perpendicularity: round15(v.diagnostics.perpendicularity),
        forward_force: round15(v.diagnostics.forward_force),
        driving_force: v
            .driving_force
            .as_ref()
            .map(|f| f.torques.iter().map(|x| round15(*x)).collect()),
        forward_force_trace: None,
        trace_error: None,
    };
    if let (Some(force), Some(t)) = (&v.driving_force, trace) {
        let run = || -> Result<TraceSummary> {
            let path = fold_path(p, mode, t.driver_max, t.steps)?;
            let d = forward_force_along_path(force, &path)?;
            let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let closure = path
                .points
                .iter()
                .map(|pt| configspace::global_closure_residual(p, &pt.folding_angles))
                .fold(0.0, f64::max);
            Ok(TraceSummary {
                driver_max_deg: round15(t.driver_max.to_degrees()),
                points: path.points.len(),
                min: round15(min),
                max: round15(max),
                all_positive: min > report_tol,
                max_closure_residual: closure,
            })
        };
        match run() {
            Ok(s) => entry.forward_force_trace = Some(s),
            Err(e) => entry.trace_error = Some(e.to_string()),
        }
    }
    entry
}

pub fn build_report(
    p: &CreasePattern,
    source: &str,
    analysis: &Analysis,
    selected: &[usize],
    trace: Option<TraceSettings>,
    report_tol: f64,
) -> AnalysisReport {
    AnalysisReport {
        tool: "origami-selffold".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        pattern: pattern_info(p, source, analysis.pattern_class, analysis.tangent_space_dim),
        mode_count: analysis.modes.len(),
        modes: analysis
            .modes
            .iter()
            .enumerate()
            .map(|(i, m)| mode_entry(i + 1, m))
            .collect(),
        verdicts: selected
            .iter()
            .map(|&k| verdict_entry(p, &analysis.modes[k - 1], &analysis.verdicts[k - 1], trace, report_tol))
            .collect(),
        tolerances: Tolerances::with_report(report_tol),
    }
}
