//! Configuration space near the flat state: first-order constraints, tangent
//! space dimension and the folding modes (branches) through the flat state.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{angle_between, lift, numerical_rank, pseudo_solve};
use crate::pattern::CreasePattern;
use crate::vertex::{
    closure_system, local_modes, vertex_closure_residual, vertex_multipliers, Assignment, LocalMode,
    NEWTON_ACCEPT, NEWTON_CONVERGED, NEWTON_MAX_ITER, ZERO_MULTIPLIER,
};

/// Kernel membership tolerance, relative to the vector norm.
pub const KERNEL_TOL: f64 = 1e-10;
/// Relative tolerance on scale agreement around a loop of vertices.
pub const LOOP_TOL: f64 = 1e-9;
/// Branches closer than this (radians, after sign normalisation) coincide.
pub const DEDUP_ANGLE: f64 = 1e-6;
/// Largest interior-vertex count accepted by the exhaustive enumerator.
pub const ENUMERATION_CAP: usize = 20;
/// Driver angle reached when confirming a branch by a finite fold.
pub const CONFIRM_DRIVER: f64 = 5.0 * std::f64::consts::PI / 180.0;
pub const CONFIRM_STEP: f64 = std::f64::consts::PI / 180.0;
/// A confirmed fold must stay within this angle (radians) of its tangent.
pub const CONFIRM_ANGLE: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub components: Vec<f64>,
}

impl TangentVector {
    pub fn new(components: Vec<f64>) -> Self {
        TangentVector { components }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TangentVector) -> f64 {
        self.components.iter().zip(&other.components).map(|(a, b)| a * b).sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        TangentVector::new(self.components.iter().map(|x| x / n).collect())
    }

    pub fn negated(&self) -> Self {
        TangentVector::new(self.components.iter().map(|x| -x).collect())
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.components)
    }

    pub fn from_dvector(v: &DVector<f64>) -> Self {
        TangentVector::new(v.iter().copied().collect())
    }
}

/// One folding branch through the flat state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalMode {
    /// Local mode (1 or 2) per interior vertex; 0 where the vertex stays flat.
    pub vertex_modes: Vec<u8>,
    /// Flat-state folding multipliers, largest magnitude 1, positive on the
    /// driver crease.
    pub tangent: TangentVector,
    pub mv: Vec<Assignment>,
    /// First crease of largest multiplier; used to drive the fold.
    pub driver_crease: usize,
    /// Bitmask of the local-mode assignment that produced the branch.
    pub assignment: u64,
}

impl GlobalMode {
    fn new(p: &CreasePattern, raw: &[f64], labels: &[u8], assignment: u64) -> Self {
        let max = raw.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let driver = raw
            .iter()
            .position(|x| x.abs() >= max * (1.0 - 1e-9))
            .unwrap_or(0);
        let s = raw[driver].signum() / max;
        let comps: Vec<f64> = raw
            .iter()
            .map(|x| {
                let y = x * s;
                if y.abs() < ZERO_MULTIPLIER {
                    0.0
                } else {
                    y
                }
            })
            .collect();
        let vertex_modes = p
            .stars()
            .iter()
            .zip(labels)
            .map(|(star, l)| {
                if star.creases.iter().all(|c| comps[*c] == 0.0) {
                    0
                } else {
                    *l
                }
            })
            .collect();
        GlobalMode {
            vertex_modes,
            mv: comps.iter().map(|x| Assignment::from_value(*x, 0.0)).collect(),
            tangent: TangentVector::new(comps),
            driver_crease: driver,
            assignment,
        }
    }

    pub fn mv_string(&self) -> String {
        self.mv.iter().map(|a| a.letter()).collect()
    }

    /// Multipliers of the creases around interior vertex `star` (local order).
    pub fn local_multipliers(&self, p: &CreasePattern, star: usize) -> [f64; 4] {
        p.stars()[star].creases.map(|c| self.tangent.components[c])
    }
}

/// First-order constraint: two rows per interior vertex, summing crease
/// velocities times unit crease directions.
pub fn flat_constraint_matrix(p: &CreasePattern) -> DMatrix<f64> {
    let n = p.crease_count();
    let mut a = DMatrix::zeros(2 * p.stars().len(), n);
    for (k, star) in p.stars().iter().enumerate() {
        for (c, u) in star.creases.iter().zip(&star.directions) {
            a[(2 * k, *c)] = u.x;
            a[(2 * k + 1, *c)] = u.y;
        }
    }
    a
}

pub fn tangent_space_dim(p: &CreasePattern) -> Result<usize> {
    let a = flat_constraint_matrix(p);
    Ok(p.crease_count() - numerical_rank(&a)?)
}

pub fn in_kernel(p: &CreasePattern, t: &TangentVector) -> bool {
    let a = flat_constraint_matrix(p);
    (a * t.to_dvector()).norm() <= KERNEL_TOL * t.norm()
}

fn star_axes(p: &CreasePattern) -> Vec<[Vector3<f64>; 4]> {
    p.stars().iter().map(|s| s.directions.map(|d| lift(&d))).collect()
}

/// Stacked closure residual (3 per interior vertex) and its Jacobian.
pub fn global_closure(p: &CreasePattern, angles: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let axes = star_axes(p);
    closure_with_axes(p, &axes, angles)
}

fn closure_with_axes(p: &CreasePattern, axes: &[[Vector3<f64>; 4]], angles: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
    let v = p.stars().len();
    let mut r = DVector::zeros(3 * v);
    let mut j = DMatrix::zeros(3 * v, p.crease_count());
    for (k, star) in p.stars().iter().enumerate() {
        let rho = star.creases.map(|c| angles[c]);
        let (res, cols) = closure_system(&axes[k], &rho);
        for row in 0..3 {
            r[3 * k + row] = res[row];
            for i in 0..4 {
                j[(3 * k + row, star.creases[i])] += cols[i][row];
            }
        }
    }
    (r, j)
}

/// Largest vertex closure residual of a configuration.
pub fn global_closure_residual(p: &CreasePattern, angles: &[f64]) -> f64 {
    p.stars()
        .iter()
        .map(|s| vertex_closure_residual(&s.geometry, &s.creases.map(|c| angles[c])))
        .fold(0.0, f64::max)
}

/// Local modes of every interior vertex, in star order.
pub fn star_modes(p: &CreasePattern) -> Result<Vec<[LocalMode; 2]>> {
    p.stars().iter().map(|s| local_modes(&s.geometry)).collect()
}

struct Component {
    tangent: Vec<f64>,
    members: Vec<bool>,
}

/// Splits a per-vertex choice of local multipliers into linked components and
/// returns the first-order tangent of each consistent one. `None` when a crease
/// folds at one end but not the other.
fn first_order_components(p: &CreasePattern, local: &[[f64; 4]]) -> Option<Vec<Component>> {
    let stars = p.stars();
    let n = p.crease_count();
    let mut ends: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (k, star) in stars.iter().enumerate() {
        for i in 0..4 {
            ends[star.creases[i]].push((k, local[k][i]));
        }
    }
    let mut links: Vec<Vec<(usize, f64, f64)>> = vec![Vec::new(); stars.len()];
    for e in &ends {
        if let [(a, ma), (b, mb)] = e[..] {
            if (ma == 0.0) != (mb == 0.0) {
                return None;
            }
            if ma != 0.0 {
                links[a].push((b, ma, mb));
                links[b].push((a, mb, ma));
            }
        }
    }
    let mut scale: Vec<Option<f64>> = vec![None; stars.len()];
    let mut out = Vec::new();
    for root in 0..stars.len() {
        if scale[root].is_some() {
            continue;
        }
        scale[root] = Some(1.0);
        let mut members = vec![false; stars.len()];
        let mut ok = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            members[v] = true;
            let sv = scale[v].unwrap();
            for &(w, mv, mw) in &links[v] {
                let sw = sv * mv / mw;
                match scale[w] {
                    Some(old) => {
                        if (old - sw).abs() > LOOP_TOL * old.abs().max(sw.abs()) {
                            ok = false;
                        }
                    }
                    None => {
                        scale[w] = Some(sw);
                        queue.push_back(w);
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let mut t = vec![0.0; n];
        for (k, star) in stars.iter().enumerate() {
            if members[k] {
                for i in 0..4 {
                    t[star.creases[i]] = scale[k].unwrap() * local[k][i];
                }
            }
        }
        if t.iter().any(|x| *x != 0.0) {
            out.push(Component { tangent: t, members });
        }
    }
    Some(out)
}

fn mask_labels(v: usize, mask: u64) -> Vec<u8> {
    (0..v).map(|k| if mask >> k & 1 == 1 { 2 } else { 1 }).collect()
}

fn mask_multipliers(modes: &[[LocalMode; 2]], mask: u64) -> Vec<[f64; 4]> {
    modes
        .iter()
        .enumerate()
        .map(|(k, m)| m[(mask >> k & 1) as usize].multipliers)
        .collect()
}

fn sign_canonical(t: &TangentVector) -> DVector<f64> {
    let v = t.to_dvector();
    match v.iter().find(|x| **x != 0.0) {
        Some(x) if *x < 0.0 => -v,
        _ => v,
    }
}

fn dedup(modes: Vec<GlobalMode>) -> Vec<GlobalMode> {
    let mut kept: Vec<(DVector<f64>, GlobalMode)> = Vec::new();
    for m in modes {
        let c = sign_canonical(&m.tangent);
        if !kept.iter().any(|(k, _)| angle_between(k, &c) < DEDUP_ANGLE) {
            kept.push((c, m));
        }
    }
    kept.into_iter().map(|(_, m)| m).collect()
}

/// Gauss-Newton on the full closure system with one crease held fixed.
fn solve_global(
    p: &CreasePattern,
    axes: &[[Vector3<f64>; 4]],
    driver: usize,
    mut x: Vec<f64>,
) -> Option<Vec<f64>> {
    let n = p.crease_count();
    let free: Vec<usize> = (0..n).filter(|&i| i != driver).collect();
    for _ in 0..NEWTON_MAX_ITER {
        let (r, j) = closure_with_axes(p, axes, &x);
        if r.norm() < NEWTON_CONVERGED {
            return Some(x);
        }
        let jf = j.select_columns(free.iter());
        let dx = pseudo_solve(&jf, &r);
        for (c, &i) in free.iter().enumerate() {
            x[i] -= dx[c];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    let (r, _) = closure_with_axes(p, axes, &x);
    (r.norm() < NEWTON_ACCEPT).then_some(x)
}

/// Confirms a first-order branch by folding its driver crease to
/// [`CONFIRM_DRIVER`] and checking the fold keeps the tangent's signs and
/// direction.
pub fn confirm_branch(p: &CreasePattern, mode: &GlobalMode) -> Option<Vec<f64>> {
    let axes = star_axes(p);
    let t = &mode.tangent.components;
    let d = mode.driver_crease;
    let n = t.len();
    let mut x = vec![0.0; n];
    let mut prev: Option<Vec<f64>> = None;
    let steps = (CONFIRM_DRIVER / CONFIRM_STEP).round() as usize;
    for k in 1..=steps {
        let target = CONFIRM_STEP * k as f64;
        let mut guess: Vec<f64> = match &prev {
            None => t.iter().map(|ti| 2.0 * (ti / t[d] * (target / 2.0).tan()).atan()).collect(),
            Some(pr) => (0..n).map(|i| 2.0 * x[i] - pr[i]).collect(),
        };
        guess[d] = target;
        let sol = solve_global(p, &axes, d, guess)?;
        prev = Some(std::mem::replace(&mut x, sol));
    }
    if global_closure_residual(p, &x) >= NEWTON_ACCEPT {
        return None;
    }
    for i in 0..n {
        if t[i] != 0.0 && x[i] * t[i] <= 0.0 {
            return None;
        }
    }
    let xv = DVector::from_column_slice(&x);
    if angle_between(&xv, &mode.tangent.to_dvector()) >= CONFIRM_ANGLE {
        return None;
    }
    Some(x)
}

/// Exhaustive branch enumeration: every assignment of local modes to interior
/// vertices is split into linked components, screened to first order and
/// confirmed by a finite fold.
pub fn enumerate_modes_general(p: &CreasePattern) -> Result<Vec<GlobalMode>> {
    let v = p.stars().len();
    if v > ENUMERATION_CAP {
        return Err(Error::TooManyVertices(v));
    }
    let modes = star_modes(p)?;
    let candidates: Vec<GlobalMode> = (0..1u64 << v)
        .into_par_iter()
        .flat_map_iter(|mask| {
            let local = mask_multipliers(&modes, mask);
            let labels = mask_labels(v, mask);
            first_order_components(p, &local)
                .unwrap_or_default()
                .into_iter()
                .map(move |c| {
                    let l: Vec<u8> = labels
                        .iter()
                        .zip(&c.members)
                        .map(|(l, m)| if *m { *l } else { 0 })
                        .collect();
                    GlobalMode::new(p, &c.tangent, &l, mask)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let candidates = dedup(candidates);
    let confirmed: Vec<GlobalMode> = candidates
        .into_par_iter()
        .filter(|m| confirm_branch(p, m).is_some())
        .collect();
    if confirmed.is_empty() {
        return Err(Error::NoModes);
    }
    Ok(confirmed)
}

/// Mode enumeration for flat-foldable patterns with nonzero multipliers:
/// local modes are assigned vertex by vertex, pruning any interior face whose
/// loop product of multiplier ratios differs from 1.
pub fn enumerate_modes_flat_foldable(p: &CreasePattern) -> Result<Vec<GlobalMode>> {
    let stars = p.stars();
    for s in stars {
        let (pp, q) = vertex_multipliers(&s.geometry)?;
        if pp.abs() < ZERO_MULTIPLIER || q.abs() < ZERO_MULTIPLIER {
            return Err(Error::DegenerateMultiplier { vertex: s.vertex });
        }
    }
    let modes = star_modes(p)?;
    let v = stars.len();
    let faces = interior_face_corners(p);
    // Faces become checkable once their highest-numbered corner is assigned.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (fi, f) in faces.iter().enumerate() {
        let last = f.iter().map(|c| c.0).max().unwrap();
        due[last].push(fi);
    }
    let mut found = Vec::new();
    let mut choice = vec![0usize; v];
    fn search(
        k: usize,
        choice: &mut Vec<usize>,
        modes: &[[LocalMode; 2]],
        faces: &[[(usize, usize, usize); 4]],
        due: &[Vec<usize>],
        found: &mut Vec<Vec<usize>>,
    ) {
        if k == choice.len() {
            found.push(choice.clone());
            return;
        }
        for m in 0..2 {
            choice[k] = m;
            let ok = due[k].iter().all(|&fi| {
                let prod: f64 = faces[fi]
                    .iter()
                    .map(|&(s, cin, cout)| {
                        let mm = &modes[s][choice[s]].multipliers;
                        mm[cout] / mm[cin]
                    })
                    .product();
                (prod - 1.0).abs() <= LOOP_TOL
            });
            if ok {
                search(k + 1, choice, modes, faces, due, found);
            }
        }
    }
    if v > 0 {
        search(0, &mut choice, &modes, &faces, &due, &mut found);
    }
    let mut out = Vec::new();
    for c in found {
        let mask = c.iter().enumerate().fold(0u64, |acc, (k, m)| acc | ((*m as u64) << k));
        let local = mask_multipliers(&modes, mask);
        if let Some(comps) = first_order_components(p, &local) {
            if let [comp] = &comps[..] {
                out.push(GlobalMode::new(p, &comp.tangent, &mask_labels(v, mask), mask));
            }
        }
    }
    let out = dedup(out);
    if out.is_empty() {
        return Err(Error::NoModes);
    }
    Ok(out)
}

/// For each face with four interior corners: per corner, the star index and
/// the local indices of the incoming and outgoing face edges.
fn interior_face_corners(p: &CreasePattern) -> Vec<[(usize, usize, usize); 4]> {
    let star_index = |v: usize| p.stars().iter().position(|s| s.vertex == v);
    let crease_of = |a: usize, b: usize| {
        p.creases()
            .iter()
            .position(|c| c.vertices == [a, b] || c.vertices == [b, a])
    };
    let mut out = Vec::new();
    for f in p.faces() {
        let idx: Vec<Option<usize>> = f.iter().map(|v| star_index(*v)).collect();
        if idx.iter().any(|i| i.is_none()) {
            continue;
        }
        let corners: [(usize, usize, usize); 4] = std::array::from_fn(|k| {
            let s = idx[k].unwrap();
            let star = &p.stars()[s];
            let cin = crease_of(f[(k + 3) % 4], f[k]).unwrap();
            let cout = crease_of(f[k], f[(k + 1) % 4]).unwrap();
            (s, star.local_index(cin).unwrap(), star.local_index(cout).unwrap())
        });
        out.push(corners);
    }
    out
}

/// Ratios of folding multipliers across each corner of an interior face, for
/// local mode 1 and mode 2 at that corner. Corners follow the face's
/// counter-clockwise order.
pub fn face_ratio_table(p: &CreasePattern, face: usize) -> Result<[[f64; 2]; 4]> {
    let f = p.faces().get(face).ok_or_else(|| Error::InvalidGrid(format!("no face {face}")))?;
    let modes = star_modes(p)?;
    let corners = interior_face_corners(p);
    let target: Vec<usize> = f
        .iter()
        .map(|v| p.stars().iter().position(|s| s.vertex == *v).ok_or(Error::BoundaryVertex(*v)))
        .collect::<Result<_>>()?;
    let c = corners
        .iter()
        .find(|c| c.iter().map(|x| x.0).eq(target.iter().copied()))
        .ok_or_else(|| Error::InvalidGrid(format!("face {face} is not interior")))?;
    Ok(c.map(|(s, cin, cout)| {
        [0, 1].map(|m| {
            let mm = &modes[s][m].multipliers;
            mm[cout] / mm[cin]
        })
    }))
}

/// The four two-way choices of ratio around one face, as functions of the
/// flat-foldable multipliers `p` and `q`.
pub fn multiplier_ratio_table(p: f64, q: f64) -> [[f64; 2]; 4] {
    [[-p, -1.0 / q], [1.0 / p, -q], [p, 1.0 / q], [-1.0 / p, q]]
}

/// Choices (0 or 1 per corner) whose product of ratios equals 1 within `tol`.
pub fn loop_product_solutions(table: &[[f64; 2]; 4], tol: f64) -> Vec<[usize; 4]> {
    (0..16usize)
        .map(|m| std::array::from_fn(|k| m >> k & 1))
        .filter(|c: &[usize; 4]| {
            let prod: f64 = (0..4).map(|k| table[k][c[k]]).product();
            (prod - 1.0).abs() <= tol
        })
        .collect()
}

/// Unit tangents of the given modes, each with its antipode.
pub fn valid_tangents_of(modes: &[GlobalMode]) -> Vec<TangentVector> {
    modes
        .iter()
        .flat_map(|m| {
            let u = m.tangent.normalized();
            [u.clone(), u.negated()]
        })
        .collect()
}

/// Modes used for analysis: the exhaustive oracle when affordable, otherwise
/// the flat-foldable enumerator.
pub fn enumerate_modes(p: &CreasePattern) -> Result<Vec<GlobalMode>> {
    if p.stars().len() <= ENUMERATION_CAP {
        enumerate_modes_general(p)
    } else {
        enumerate_modes_flat_foldable(p)
    }
}

pub fn valid_tangents_flat(p: &CreasePattern) -> Result<Vec<TangentVector>> {
    Ok(valid_tangents_of(&enumerate_modes(p)?))
}

/// Valid tangents other than the antipodal pair matching `direction`.
pub fn surrounding_tangents(valid: &[TangentVector], direction: &TangentVector) -> Result<Vec<TangentVector>> {
    let d = direction.to_dvector();
    let neg = -&d;
    let matches = |t: &TangentVector| {
        if t.len() != d.len() {
            return false;
        }
        let tv = t.to_dvector();
        angle_between(&tv, &d) < DEDUP_ANGLE || angle_between(&tv, &neg) < DEDUP_ANGLE
    };
    if !valid.iter().any(matches) {
        return Err(Error::DirectionNotValid);
    }
    Ok(valid.iter().filter(|t| !matches(t)).cloned().collect())
}
