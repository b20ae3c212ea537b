//! One-parameter folding along a mode: folding-angle propagation, sampled
//! paths and 3D reconstruction of the folded sheet.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::configspace::{global_closure_residual, GlobalMode, TangentVector};
use crate::error::{Error, Result};
use crate::linalg::{lift, rotation};
use crate::pattern::CreasePattern;
use crate::selffold::{forward_force, DrivingForce};
use crate::vertex::{transfer_flat_foldable, transfer_general_from, different_crease, LocalMode};

/// Creases derived twice must agree within this (radians).
pub const PROPAGATION_TOL: f64 = 1e-9;
/// Largest closure residual tolerated on a propagated point.
pub const POINT_CLOSURE_TOL: f64 = 1e-9;
/// Two placements of the same face must agree within this (length units).
pub const PLACEMENT_TOL: f64 = 1e-8;
/// Consecutive path points differ by less than this on every crease.
pub const PATH_MAX_STEP: f64 = 5.0 * PI / 180.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigPoint {
    pub folding_angles: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldPath {
    pub points: Vec<ConfigPoint>,
    pub driver_values: Vec<f64>,
    /// Cumulative chord length from the flat state.
    pub arc_length: Vec<f64>,
    pub mode: GlobalMode,
}

/// Folding angles of every crease when the mode's driver crease is folded to
/// `driver`. Vertices are visited in row-major order, each as soon as one of
/// its folding creases is known.
pub fn propagate_fold(p: &CreasePattern, mode: &GlobalMode, driver: f64) -> Result<ConfigPoint> {
    let n = p.crease_count();
    if mode.tangent.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: mode.tangent.len(),
        });
    }
    if !driver.is_finite() || driver.abs() >= PI {
        return Err(Error::AngleOutOfRange(driver));
    }
    let t = &mode.tangent.components;
    let mut angle: Vec<Option<f64>> = vec![None; n];
    angle[mode.driver_crease] = Some(driver);
    let stars = p.stars();
    let mut done = vec![false; stars.len()];
    loop {
        let next = stars.iter().enumerate().find_map(|(k, s)| {
            if done[k] {
                return None;
            }
            (0..4)
                .find(|&i| t[s.creases[i]] != 0.0 && angle[s.creases[i]].is_some())
                .map(|i| (k, i))
        });
        let Some((k, i)) = next else { break };
        done[k] = true;
        let star = &stars[k];
        let m = star.creases.map(|c| t[c]);
        let known = angle[star.creases[i]].unwrap();
        let solved: [f64; 4] = if star.geometry.is_flat_foldable() {
            let mut out = [0.0; 4];
            for j in 0..4 {
                out[j] = transfer_flat_foldable(m[j] / m[i], known)?;
            }
            out
        } else {
            let max = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let local = LocalMode {
                label: mode.vertex_modes[k],
                multipliers: m.map(|x| x / max),
                different_crease: different_crease(&m),
            };
            transfer_general_from(&star.geometry, &local, i, known)?
        };
        for j in 0..4 {
            let c = star.creases[j];
            match angle[c] {
                Some(old) => {
                    let delta = (old - solved[j]).abs();
                    if delta > PROPAGATION_TOL {
                        return Err(Error::InconsistentPropagation { crease: c, delta });
                    }
                }
                None => angle[c] = Some(solved[j]),
            }
        }
    }
    for (k, s) in stars.iter().enumerate() {
        if !done[k] && s.creases.iter().any(|c| t[*c] != 0.0) {
            return Err(Error::InconsistentPropagation {
                crease: s.creases[0],
                delta: f64::NAN,
            });
        }
    }
    let folding_angles: Vec<f64> = angle.into_iter().map(|a| a.unwrap_or(0.0)).collect();
    let residual = global_closure_residual(p, &folding_angles);
    if residual >= POINT_CLOSURE_TOL {
        return Err(Error::NoConvergence(format!("closure residual {residual:e} after propagation")));
    }
    Ok(ConfigPoint { folding_angles })
}

fn max_change(a: &ConfigPoint, b: &ConfigPoint) -> f64 {
    a.folding_angles
        .iter()
        .zip(&b.folding_angles)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Path from the flat state to `driver_max`, sampled uniformly in the tangent
/// of the half driver angle. Extra points are inserted wherever a step would
/// move some crease by [`PATH_MAX_STEP`] or more.
pub fn fold_path(p: &CreasePattern, mode: &GlobalMode, driver_max: f64, steps: usize) -> Result<FoldPath> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("a path needs at least 2 steps, got {steps}")));
    }
    if !driver_max.is_finite() || driver_max.abs() >= PI {
        return Err(Error::AngleOutOfRange(driver_max));
    }
    let tau_max = (driver_max / 2.0).tan();
    let taus: Vec<f64> = (0..steps).map(|k| tau_max * k as f64 / (steps - 1) as f64).collect();
    let samples: Vec<(f64, ConfigPoint)> = taus
        .par_iter()
        .map(|tau| {
            let d = 2.0 * tau.atan();
            propagate_fold(p, mode, d).map(|pt| (*tau, pt))
        })
        .collect::<Result<_>>()?;
    let mut taus_out = vec![samples[0].0];
    let mut points = vec![samples[0].1.clone()];
    for w in samples.windows(2) {
        refine(p, mode, &w[0], &w[1], 0, &mut taus_out, &mut points)?;
    }
    let driver_values: Vec<f64> = taus_out.iter().map(|t| 2.0 * t.atan()).collect();
    let mut arc_length = vec![0.0];
    for w in points.windows(2) {
        let step: f64 = w[0]
            .folding_angles
            .iter()
            .zip(&w[1].folding_angles)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        arc_length.push(arc_length.last().unwrap() + step);
    }
    Ok(FoldPath {
        points,
        driver_values,
        arc_length,
        mode: mode.clone(),
    })
}

fn refine(
    p: &CreasePattern,
    mode: &GlobalMode,
    a: &(f64, ConfigPoint),
    b: &(f64, ConfigPoint),
    depth: usize,
    taus: &mut Vec<f64>,
    points: &mut Vec<ConfigPoint>,
) -> Result<()> {
    if max_change(&a.1, &b.1) < PATH_MAX_STEP || depth > 30 {
        taus.push(b.0);
        points.push(b.1.clone());
        return Ok(());
    }
    let mid_tau = 0.5 * (a.0 + b.0);
    let mid = (mid_tau, propagate_fold(p, mode, 2.0 * mid_tau.atan())?);
    refine(p, mode, a, &mid, depth + 1, taus, points)?;
    refine(p, mode, &mid, b, depth + 1, taus, points)
}

/// Rigid placement of a face: `x -> rotation * x + translation` applied to
/// flat coordinates lifted to `z = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Placement {
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
}

impl Placement {
    pub fn identity() -> Self {
        Placement {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn apply(&self, x: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * x + self.translation
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Placement) -> Placement {
        Placement {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    /// Rotation by `angle` about the line through `a` along `axis`.
    fn about_line(a: &Vector3<f64>, axis: &Vector3<f64>, angle: f64) -> Placement {
        let r = rotation(axis, angle);
        Placement {
            translation: a - r * a,
            rotation: r,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoldedState {
    pub placements: Vec<Placement>,
    pub vertex_positions: Vec<Vector3<f64>>,
    /// Largest disagreement found between two placements of a face.
    pub max_deviation: f64,
}

/// Places faces breadth-first from face 0 (held in the `z = 0` plane) and
/// checks every crease against both of its faces.
pub fn reconstruct_3d(p: &CreasePattern, point: &ConfigPoint) -> Result<FoldedState> {
    let n = p.crease_count();
    if point.folding_angles.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: point.folding_angles.len(),
        });
    }
    let nf = p.faces().len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (ci, c) in p.creases().iter().enumerate() {
        adj[c.left_face].push(ci);
        adj[c.right_face].push(ci);
    }
    let pos3 = |v: usize| lift(&p.vertices()[v].position);
    // Placement of the other face across crease `ci`, given placement of `from`.
    let across = |ci: usize, from: usize, pl: &Placement| -> (usize, Placement) {
        let c = &p.creases()[ci];
        let a = pos3(c.vertices[0]);
        let axis = pos3(c.vertices[1]) - a;
        let rho = point.folding_angles[ci];
        let (to, angle) = if from == c.right_face { (c.left_face, rho) } else { (c.right_face, -rho) };
        (to, pl.compose(&Placement::about_line(&a, &axis, angle)))
    };
    let mut placements: Vec<Option<Placement>> = vec![None; nf];
    placements[0] = Some(Placement::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let pl = placements[f].clone().unwrap();
        for &ci in &adj[f] {
            let (g, pg) = across(ci, f, &pl);
            if placements[g].is_none() {
                placements[g] = Some(pg);
                queue.push_back(g);
            }
        }
    }
    let placements: Vec<Placement> = placements
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::NonManifold("face graph is disconnected".into())))
        .collect::<Result<_>>()?;
    let mut max_deviation = 0.0f64;
    for ci in 0..n {
        let c = &p.creases()[ci];
        let (g, pg) = across(ci, c.right_face, &placements[c.right_face]);
        for v in p.faces()[g] {
            let x = pos3(v);
            max_deviation = max_deviation.max((pg.apply(&x) - placements[g].apply(&x)).norm());
        }
    }
    if max_deviation >= PLACEMENT_TOL {
        return Err(Error::InconsistentPlacement { deviation: max_deviation });
    }
    let mut vertex_positions = vec![None; p.vertices().len()];
    for (fi, f) in p.faces().iter().enumerate() {
        for &v in f {
            if vertex_positions[v].is_none() {
                vertex_positions[v] = Some(placements[fi].apply(&pos3(v)));
            }
        }
    }
    Ok(FoldedState {
        placements,
        vertex_positions: vertex_positions.into_iter().map(|x| x.unwrap()).collect(),
        max_deviation,
    })
}

/// Unit finite-difference tangents of a path (forward at the start, backward
/// at the end, central elsewhere).
pub fn path_tangents(path: &FoldPath) -> Vec<TangentVector> {
    let pts = &path.points;
    let k = pts.len();
    (0..k)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1.min(k - 1)),
                _ if i == k - 1 => (k - 2, k - 1),
                _ => (i - 1, i + 1),
            };
            let d: Vec<f64> = pts[b]
                .folding_angles
                .iter()
                .zip(&pts[a].folding_angles)
                .map(|(x, y)| x - y)
                .collect();
            TangentVector::new(d).normalized()
        })
        .collect()
}

pub fn forward_force_along_path(force: &DrivingForce, path: &FoldPath) -> Result<Vec<f64>> {
    if path.points.len() < 2 {
        return Err(Error::InvalidArgument("path has fewer than 2 points".into()));
    }
    path_tangents(path).iter().map(|t| forward_force(force, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placement_compose_is_associative_with_identity() {
        let a = Placement::about_line(&Vector3::new(1.0, 0.0, 0.0), &Vector3::new(0.0, 1.0, 0.0), 0.3);
        let id = Placement::identity();
        assert_eq!(a.compose(&id), a);
        let x = Vector3::new(0.2, 0.5, 0.0);
        let b = a.compose(&a);
        assert!((b.apply(&x) - a.apply(&a.apply(&x))).norm() < 1e-15);
    }
}
