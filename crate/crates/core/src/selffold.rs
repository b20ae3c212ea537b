//! Unique self-foldability: a folding mode can be driven by a constant
//! per-crease torque without also driving the other branches exactly when its
//! tangent lies outside the span of the other valid tangents.

use serde::{Deserialize, Serialize};

use crate::configspace::{
    enumerate_modes, surrounding_tangents, tangent_space_dim, valid_tangents_of, GlobalMode, TangentVector,
};
use crate::error::{Error, Result};
use crate::linalg::span_basis;
use crate::pattern::{classify_pattern, CreasePattern, PatternClass};

/// A direction is in the span when its residual falls below this.
pub const IN_SPAN_TOL: f64 = 1e-8;
/// Largest tolerated dot product between a synthesized force and a
/// surrounding tangent.
pub const PERPENDICULAR_TOL: f64 = 1e-10;

/// Constant torque per crease.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivingForce {
    pub torques: Vec<f64>,
}

impl DrivingForce {
    pub fn as_tangent(&self) -> TangentVector {
        TangentVector::new(self.torques.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpanTest {
    pub in_span: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub span_residual: f64,
    /// Largest |f . t| over the surrounding tangents (0 without a force).
    pub perpendicularity: f64,
    /// f . direction at the flat state (0 without a force).
    pub forward_force: f64,
    pub tangent_space_dim: usize,
    pub surrounding_span_dim: usize,
    /// Verdict expected from the pattern class, if the class has one.
    pub predicted_unique: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldabilityVerdict {
    pub pattern_class: PatternClass,
    pub mode_count: usize,
    /// 1-based index into the mode list.
    pub target_mode: usize,
    pub uniquely_self_foldable: bool,
    pub driving_force: Option<DrivingForce>,
    pub direction: TangentVector,
    pub diagnostics: Diagnostics,
}

pub fn span_membership(direction: &TangentVector, surrounding: &[TangentVector]) -> SpanTest {
    let d = direction.to_dvector();
    let basis = span_basis(
        &surrounding.iter().map(|t| t.to_dvector()).collect::<Vec<_>>(),
        d.len(),
    );
    let proj = &basis * (basis.transpose() * &d);
    let residual = (d - proj).norm();
    SpanTest {
        in_span: residual < IN_SPAN_TOL,
        residual,
    }
}

pub fn synthesize_driving_force(direction: &TangentVector, surrounding: &[TangentVector]) -> Result<DrivingForce> {
    let test = span_membership(direction, surrounding);
    if test.in_span {
        return Err(Error::NotUniquelySelfFoldable { residual: test.residual });
    }
    let d = direction.to_dvector();
    let basis = span_basis(
        &surrounding.iter().map(|t| t.to_dvector()).collect::<Vec<_>>(),
        d.len(),
    );
    let f = &d - &basis * (basis.transpose() * &d);
    let f = &f / f.norm();
    Ok(DrivingForce {
        torques: f.iter().copied().collect(),
    })
}

pub fn forward_force(force: &DrivingForce, tangent: &TangentVector) -> Result<f64> {
    if force.torques.len() != tangent.len() {
        return Err(Error::DimensionMismatch {
            expected: force.torques.len(),
            found: tangent.len(),
        });
    }
    Ok(force.as_tangent().dot(tangent))
}

/// Verdict expected for each covered pattern class.
pub fn predicted_verdict(class: PatternClass) -> Option<bool> {
    match class {
        PatternClass::MiuraLike | PatternClass::ChickenWireLike => Some(false),
        PatternClass::GenericFlatFoldable | PatternClass::GenericNonFlatFoldable => Some(true),
        PatternClass::Unsupported => None,
    }
}

/// Mode catalogue and per-mode verdicts of a pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub pattern_class: PatternClass,
    pub tangent_space_dim: usize,
    pub modes: Vec<GlobalMode>,
    pub verdicts: Vec<FoldabilityVerdict>,
}

fn pattern_class_or_unsupported(p: &CreasePattern) -> Result<PatternClass> {
    match classify_pattern(p) {
        Err(Error::MixedVertexGeometry) => Ok(PatternClass::Unsupported),
        other => other,
    }
}

fn verdict_for(
    class: PatternClass,
    modes: &[GlobalMode],
    valid: &[TangentVector],
    target: usize,
    tangent_dim: usize,
) -> Result<FoldabilityVerdict> {
    let direction = modes[target - 1].tangent.normalized();
    let surrounding = surrounding_tangents(valid, &direction)?;
    let span = span_membership(&direction, &surrounding);
    let surrounding_dim = span_basis(
        &surrounding.iter().map(|t| t.to_dvector()).collect::<Vec<_>>(),
        direction.len(),
    )
    .ncols();
    let force = if span.in_span {
        None
    } else {
        Some(synthesize_driving_force(&direction, &surrounding)?)
    };
    let (perp, fwd) = match &force {
        Some(f) => (
            surrounding
                .iter()
                .map(|t| forward_force(f, t).map(f64::abs))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max),
            forward_force(f, &direction)?,
        ),
        None => (0.0, 0.0),
    };
    let unique = force.is_some();
    if unique && tangent_dim <= surrounding_dim {
        return Err(Error::InternalInconsistency(format!(
            "mode {target} separable although the surrounding tangents span {surrounding_dim} of {tangent_dim} dimensions"
        )));
    }
    if unique && (perp >= PERPENDICULAR_TOL || fwd <= 0.0) {
        return Err(Error::InternalInconsistency(format!(
            "synthesized force for mode {target} fails perpendicularity ({perp:e}) or positivity ({fwd:e})"
        )));
    }
    let predicted = predicted_verdict(class);
    if let Some(want) = predicted {
        if want != unique {
            return Err(Error::InternalInconsistency(format!(
                "{class:?} pattern predicts uniquely_self_foldable = {want} for mode {target}, span test gives {unique} (residual {:e}, {} modes)",
                span.residual,
                modes.len()
            )));
        }
    }
    Ok(FoldabilityVerdict {
        pattern_class: class,
        mode_count: modes.len(),
        target_mode: target,
        uniquely_self_foldable: unique,
        driving_force: force,
        direction,
        diagnostics: Diagnostics {
            span_residual: span.residual,
            perpendicularity: perp,
            forward_force: fwd,
            tangent_space_dim: tangent_dim,
            surrounding_span_dim: surrounding_dim,
            predicted_unique: predicted,
        },
    })
}

/// Full pipeline for one mode (1-based).
pub fn analyze(p: &CreasePattern, target_mode: usize) -> Result<FoldabilityVerdict> {
    let class = pattern_class_or_unsupported(p)?;
    let modes = enumerate_modes(p)?;
    check_target(target_mode, modes.len())?;
    let valid = valid_tangents_of(&modes);
    verdict_for(class, &modes, &valid, target_mode, tangent_space_dim(p)?)
}

/// Full pipeline for every mode.
pub fn analyze_all(p: &CreasePattern) -> Result<Analysis> {
    let class = pattern_class_or_unsupported(p)?;
    let modes = enumerate_modes(p)?;
    let valid = valid_tangents_of(&modes);
    let dim = tangent_space_dim(p)?;
    let verdicts = (1..=modes.len())
        .map(|k| verdict_for(class, &modes, &valid, k, dim))
        .collect::<Result<Vec<_>>>()?;
    Ok(Analysis {
        pattern_class: class,
        tangent_space_dim: dim,
        modes,
        verdicts,
    })
}

/// Same as [`analyze_all`] but without the class cross-check, so the raw span
/// test can be inspected when it disagrees with the class prediction.
pub fn analyze_all_unchecked(p: &CreasePattern) -> Result<Analysis> {
    let class = pattern_class_or_unsupported(p)?;
    let modes = enumerate_modes(p)?;
    let valid = valid_tangents_of(&modes);
    let dim = tangent_space_dim(p)?;
    let verdicts = (1..=modes.len())
        .map(|k| verdict_for(PatternClass::Unsupported, &modes, &valid, k, dim))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .map(|mut v| {
            v.pattern_class = class;
            v.diagnostics.predicted_unique = predicted_verdict(class);
            v
        })
        .collect();
    Ok(Analysis {
        pattern_class: class,
        tangent_space_dim: dim,
        modes,
        verdicts,
    })
}

fn check_target(target: usize, count: usize) -> Result<()> {
    if target == 0 || target > count {
        return Err(Error::DimensionMismatch {
            expected: count,
            found: target,
        });
    }
    Ok(())
}
