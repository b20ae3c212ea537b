//! Degree-4 vertex kinematics.
//!
//! A vertex is described by its four sector angles in counter-clockwise
//! order. Crease `c_i` sits between sector `i - 1` and sector `i`, so sector
//! `i` spans from `c_i` to `c_{i+1}`. Crease `c_0` points along `+x`.
//!
//! The folding angle of a crease is the rotation of the face on its
//! counter-clockwise side about the outward crease direction; positive is a
//! valley fold.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cross2, lift, pseudo_solve, rotation, skew, vee_antisym, Point};

/// Angle tolerance used for geometric predicates.
pub const ANGLE_TOL: f64 = 1e-9;
/// Multipliers below this (after max-abs normalisation) count as zero.
pub const ZERO_MULTIPLIER: f64 = 1e-9;
/// Newton stops once the residual drops below this.
pub const NEWTON_CONVERGED: f64 = 1e-12;
/// Newton results are accepted up to this residual.
pub const NEWTON_ACCEPT: f64 = 1e-10;
pub const NEWTON_MAX_ITER: usize = 50;
/// Largest change of any crease per continuation step.
pub const MAX_STEP: f64 = 2.0 * PI / 180.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Assignment {
    Mountain,
    Valley,
    Unassigned,
}

impl Assignment {
    pub fn from_value(x: f64, tol: f64) -> Self {
        if x > tol {
            Assignment::Valley
        } else if x < -tol {
            Assignment::Mountain
        } else {
            Assignment::Unassigned
        }
    }

    pub fn letter(self) -> char {
        match self {
            Assignment::Mountain => 'M',
            Assignment::Valley => 'V',
            Assignment::Unassigned => 'F',
        }
    }

    fn sign(self) -> i8 {
        match self {
            Assignment::Mountain => -1,
            Assignment::Valley => 1,
            Assignment::Unassigned => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexGeometry {
    sectors: [f64; 4],
}

impl VertexGeometry {
    pub fn new(sectors: [f64; 4]) -> Result<Self> {
        if sectors.iter().any(|s| !s.is_finite() || *s <= ANGLE_TOL) {
            return Err(Error::DegenerateAngles(format!("sector angles {sectors:?}")));
        }
        let sum: f64 = sectors.iter().sum();
        if (sum - TAU).abs() > ANGLE_TOL {
            return Err(Error::DegenerateAngles(format!("sector angles sum to {sum}")));
        }
        Ok(VertexGeometry { sectors })
    }

    pub fn from_degrees(deg: [f64; 4]) -> Result<Self> {
        Self::new(deg.map(f64::to_radians))
    }

    pub fn sectors(&self) -> [f64; 4] {
        self.sectors
    }

    /// Same vertex with crease `k` relabelled as `c_0`.
    pub fn rotated(&self, k: usize) -> Self {
        VertexGeometry {
            sectors: std::array::from_fn(|i| self.sectors[(i + k) % 4]),
        }
    }

    pub fn is_flat_foldable(&self) -> bool {
        let s = self.sectors;
        (s[0] + s[2] - PI).abs() < ANGLE_TOL && (s[1] + s[3] - PI).abs() < ANGLE_TOL
    }

    /// Whether creases `c_i` and `c_{i+2}` are collinear, for i = 0 and 1.
    pub fn collinear_pairs(&self) -> [bool; 2] {
        let s = self.sectors;
        [(s[0] + s[1] - PI).abs() < ANGLE_TOL, (s[1] + s[2] - PI).abs() < ANGLE_TOL]
    }

    /// Polar angle of each crease.
    pub fn crease_angles(&self) -> [f64; 4] {
        let s = self.sectors;
        [0.0, s[0], s[0] + s[1], s[0] + s[1] + s[2]]
    }

    pub fn directions(&self) -> [Point; 4] {
        self.crease_angles().map(|a| Point::new(a.cos(), a.sin()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalMode {
    pub label: u8,
    pub multipliers: [f64; 4],
    pub different_crease: Option<usize>,
}

impl LocalMode {
    fn from_vector(m: [f64; 4]) -> Self {
        let max = m.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let mut m = m.map(|x| {
            let y = x / max;
            if y.abs() < ZERO_MULTIPLIER {
                0.0
            } else {
                y
            }
        });
        let pos = m.iter().filter(|x| **x > 0.0).count();
        let neg = m.iter().filter(|x| **x < 0.0).count();
        let first = m.iter().find(|x| **x != 0.0).copied().unwrap_or(1.0);
        if neg > pos || (neg == pos && first < 0.0) {
            m = m.map(|x| -x);
        }
        LocalMode {
            label: 0,
            multipliers: m,
            different_crease: different_crease(&m),
        }
    }

    pub fn assignment(&self) -> [Assignment; 4] {
        self.multipliers.map(|x| Assignment::from_value(x, 0.0))
    }
}

/// Index of the single crease whose sign differs from the other three.
pub fn different_crease(m: &[f64; 4]) -> Option<usize> {
    if m.iter().any(|x| *x == 0.0) {
        return None;
    }
    let pos: Vec<usize> = (0..4).filter(|&i| m[i] > 0.0).collect();
    match pos.len() {
        1 => Some(pos[0]),
        3 => (0..4).find(|i| m[*i] < 0.0),
        _ => None,
    }
}

/// Folding multipliers of a flat-foldable vertex with adjacent sectors
/// `alpha` and `beta`.
pub fn folding_multipliers(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < PI && beta > 0.0 && beta < PI) {
        return Err(Error::DegenerateAngles(format!("alpha={alpha}, beta={beta}")));
    }
    let denom_p = ((alpha - beta) / 2.0).cos();
    let denom_q = ((alpha + beta) / 2.0).sin();
    if denom_p.abs() < ANGLE_TOL || denom_q.abs() < ANGLE_TOL {
        return Err(Error::DegenerateAngles(format!("alpha={alpha}, beta={beta}")));
    }
    let p = ((alpha + beta) / 2.0).cos() / denom_p;
    let q = if alpha == beta {
        0.0
    } else {
        -((alpha - beta) / 2.0).sin() / denom_q
    };
    Ok((p, q))
}

/// `(p, q)` of a flat-foldable vertex in its own crease order: mode 1 has
/// multipliers `(p, 1, -p, 1)` and mode 2 `(1, q, 1, -q)`.
pub fn vertex_multipliers(geometry: &VertexGeometry) -> Result<(f64, f64)> {
    if !geometry.is_flat_foldable() {
        return Err(Error::NotFlatFoldable);
    }
    let s = geometry.sectors();
    folding_multipliers(s[2], s[1])
}

pub fn birds_foot_check(geometry: &VertexGeometry, mv: &[Assignment; 4]) -> bool {
    let signs = mv.map(Assignment::sign);
    if signs.contains(&0) {
        return false;
    }
    let s = geometry.sectors();
    if s.iter().any(|x| *x >= PI - ANGLE_TOL) {
        return false;
    }
    let pos = signs.iter().filter(|x| **x > 0).count();
    let d = match pos {
        1 => (0..4).find(|&i| signs[i] > 0),
        3 => (0..4).find(|&i| signs[i] < 0),
        _ => None,
    };
    match d {
        Some(d) => s[(d + 3) % 4] + s[d] < PI - ANGLE_TOL,
        None => false,
    }
}

/// The two folding modes of a rigid-foldable degree-4 vertex, normalised so
/// the largest multiplier has magnitude 1.
pub fn local_modes(geometry: &VertexGeometry) -> Result<[LocalMode; 2]> {
    let s = geometry.sectors();
    if s.iter().any(|x| *x >= PI - ANGLE_TOL) {
        return Err(Error::NotRigidlyFoldable("a sector angle is at least pi".into()));
    }
    let [c0, c1] = geometry.collinear_pairs();
    if c0 && c1 {
        return Err(Error::NotRigidlyFoldable(
            "both opposite crease pairs are collinear".into(),
        ));
    }
    let raw = if geometry.is_flat_foldable() {
        let (p, q) = vertex_multipliers(geometry)?;
        [[p, 1.0, -p, 1.0], [1.0, q, 1.0, -q]]
    } else {
        quadratic_form_modes(geometry)?
    };
    let mut modes = raw.map(LocalMode::from_vector);
    let opposite = |m: &LocalMode, i: usize| m.multipliers[i] * m.multipliers[i + 2] < 0.0;
    let first = if opposite(&modes[0], 0) != opposite(&modes[1], 0) {
        if opposite(&modes[0], 0) {
            0
        } else {
            1
        }
    } else if !opposite(&modes[0], 1) {
        0
    } else {
        1
    };
    if first == 1 {
        modes.swap(0, 1);
    }
    modes[0].label = 1;
    modes[1].label = 2;
    for m in &modes {
        if m.different_crease.is_some() && !birds_foot_check(geometry, &m.assignment()) {
            return Err(Error::NotRigidlyFoldable(format!(
                "mode {:?} is not a bird's foot",
                m.multipliers
            )));
        }
    }
    Ok(modes)
}

/// Null lines of the second-order condition restricted to the first-order
/// kernel.
fn quadratic_form_modes(geometry: &VertexGeometry) -> Result<[[f64; 4]; 2]> {
    let u = geometry.directions();
    let phi = geometry.crease_angles();
    let d = |a: usize, b: usize| cross2(&u[a], &u[b]);
    let k1 = DVector::from_vec(vec![d(1, 2), d(2, 0), d(0, 1), 0.0]);
    let k2 = DVector::from_vec(vec![0.0, d(2, 3), d(3, 1), d(1, 2)]);
    let e1 = &k1 / k1.norm();
    let mut e2 = &k2 - &e1 * e1.dot(&k2);
    e2 /= e2.norm();
    let mut form = DMatrix::<f64>::zeros(4, 4);
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = 0.5 * (phi[j] - phi[i]).sin();
            form[(i, j)] = v;
            form[(j, i)] = v;
        }
    }
    let q11 = e1.dot(&(&form * &e1));
    let q12 = e1.dot(&(&form * &e2));
    let q22 = e2.dot(&(&form * &e2));
    let eig = SymmetricEigen::new(Matrix2::new(q11, q12, q12, q22));
    let (l1, l2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    let scale = l1.abs().max(l2.abs());
    if scale == 0.0 || l1.abs() < 1e-12 * scale || l2.abs() < 1e-12 * scale {
        return Err(Error::NotRigidlyFoldable("degenerate second-order form".into()));
    }
    if l1 * l2 > 0.0 {
        return Err(Error::NotRigidlyFoldable("second-order form is definite".into()));
    }
    let v1 = eig.eigenvectors.column(0);
    let v2 = eig.eigenvectors.column(1);
    let out = [1.0, -1.0].map(|sgn| {
        let a = l2.abs().sqrt() * v1[0] + sgn * l1.abs().sqrt() * v2[0];
        let b = l2.abs().sqrt() * v1[1] + sgn * l1.abs().sqrt() * v2[1];
        let m = &e1 * a + &e2 * b;
        [m[0], m[1], m[2], m[3]]
    });
    Ok(out)
}

pub fn transfer_flat_foldable(multiplier: f64, rho_in: f64) -> Result<f64> {
    if !rho_in.is_finite() || rho_in.abs() >= PI {
        return Err(Error::AngleOutOfRange(rho_in));
    }
    Ok(2.0 * (multiplier * (rho_in / 2.0).tan()).atan())
}

/// Closure defect of the folded vertex: the Frobenius distance from the
/// identity of the product of fold and sector rotations taken around it.
pub fn vertex_closure_residual(geometry: &VertexGeometry, rho: &[f64; 4]) -> f64 {
    let s = geometry.sectors();
    let x = Vector3::x();
    let z = Vector3::z();
    let mut m = Matrix3::<f64>::identity();
    for i in 0..4 {
        m = m * rotation(&x, rho[i]) * rotation(&z, s[i]);
    }
    (m - Matrix3::identity()).norm()
}

/// Product of the four fold rotations about the flat crease directions.
fn fold_product(u: &[Vector3<f64>; 4], rho: &[f64; 4]) -> Matrix3<f64> {
    let mut m = Matrix3::identity();
    for i in 0..4 {
        m *= rotation(&u[i], rho[i]);
    }
    m
}

/// Residual and full 3x4 Jacobian of the rotation closure for one vertex.
pub(crate) fn closure_system(u: &[Vector3<f64>; 4], rho: &[f64; 4]) -> (Vector3<f64>, [Vector3<f64>; 4]) {
    let p = fold_product(u, rho);
    let r = vee_antisym(&p);
    let mut acc = Matrix3::identity();
    let mut cols = [Vector3::zeros(); 4];
    for k in 0..4 {
        let w = acc * u[k];
        let sw = skew(&w);
        cols[k] = vee_antisym(&(sw * p));
        acc *= rotation(&u[k], rho[k]);
    }
    (r, cols)
}

fn solve_vertex(
    u: &[Vector3<f64>; 4],
    driver: usize,
    start: [f64; 4],
) -> Option<[f64; 4]> {
    let free: Vec<usize> = (0..4).filter(|&i| i != driver).collect();
    let mut x = start;
    for _ in 0..NEWTON_MAX_ITER {
        let (r, cols) = closure_system(u, &x);
        if r.norm() < NEWTON_CONVERGED {
            return Some(x);
        }
        let j = DMatrix::from_fn(3, 3, |row, c| cols[free[c]][row]);
        let dx = pseudo_solve(&j, &DVector::from_column_slice(r.as_slice()));
        for (c, &i) in free.iter().enumerate() {
            x[i] -= dx[c];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    let (r, _) = closure_system(u, &x);
    (r.norm() < NEWTON_ACCEPT).then_some(x)
}

pub fn transfer_general(geometry: &VertexGeometry, mode: &LocalMode, rho_in: f64) -> Result<[f64; 3]> {
    let all = transfer_general_from(geometry, mode, 0, rho_in)?;
    Ok([all[1], all[2], all[3]])
}

/// Folding angles of all four creases on the given mode branch when crease
/// `driver` is folded to `rho_in`, by Newton continuation from the flat state.
pub fn transfer_general_from(
    geometry: &VertexGeometry,
    mode: &LocalMode,
    driver: usize,
    rho_in: f64,
) -> Result<[f64; 4]> {
    if !rho_in.is_finite() || rho_in.abs() >= PI {
        return Err(Error::AngleOutOfRange(rho_in));
    }
    let m = mode.multipliers;
    if m[driver] == 0.0 {
        return Err(Error::NotRigidlyFoldable(format!(
            "crease {driver} does not fold in this mode"
        )));
    }
    let u = geometry.directions().map(|d| lift(&d));
    let ratio = m.map(|x| x / m[driver]);
    let tan_half = |d: f64| ratio.map(|r| 2.0 * (r * (d / 2.0).tan()).atan());
    if rho_in == 0.0 {
        return Ok([0.0; 4]);
    }
    let sign = rho_in.signum();
    let mut cur = [0.0; 4];
    let mut cur_d = 0.0f64;
    let mut prev: Option<([f64; 4], f64)> = None;
    let mut h = MAX_STEP;
    let mut failures = 0;
    while (rho_in - cur_d).abs() > 0.0 {
        let remaining = (rho_in - cur_d).abs();
        let step = h.min(remaining);
        let target = if step == remaining { rho_in } else { cur_d + sign * step };
        let mut guess = match prev {
            None => tan_half(target),
            Some((p, pd)) => {
                let t = (target - cur_d) / (cur_d - pd);
                std::array::from_fn(|i| cur[i] + (cur[i] - p[i]) * t)
            }
        };
        guess[driver] = target;
        let jump = (0..4).map(|i| (guess[i] - cur[i]).abs()).fold(0.0, f64::max);
        if jump > MAX_STEP * 1.000001 && step > 1e-6 {
            h = step / 2.0;
            continue;
        }
        match solve_vertex(&u, driver, guess) {
            Some(sol) if sol.iter().all(|a| a.abs() < PI) => {
                prev = Some((cur, cur_d));
                cur = sol;
                cur_d = target;
                failures = 0;
                h = (h * 2.0).min(MAX_STEP);
            }
            _ => {
                failures += 1;
                if failures > 3 {
                    return Err(if cur_d == 0.0 {
                        Error::NoConvergence(format!("no closure solution near driver {target}"))
                    } else {
                        Error::BranchExhausted { reached: cur_d }
                    });
                }
                h = step / 2.0;
            }
        }
    }
    for i in 0..4 {
        if ratio[i] != 0.0 && cur[i] != 0.0 && (cur[i] * ratio[i] * sign) < 0.0 {
            return Err(Error::BranchExhausted { reached: cur_d });
        }
    }
    Ok(cur)
}
