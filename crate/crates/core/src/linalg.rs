//! Small dense linear-algebra helpers shared by the analysis modules.

use nalgebra::{DMatrix, DVector, Matrix3, Rotation3, Unit, Vector2, Vector3};

use crate::error::{Error, Result};

pub type Point = Vector2<f64>;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-9;

/// Relative singular values in this open band make the rank ambiguous.
pub const AMBIGUOUS_BAND: (f64, f64) = (1e-11, 1e-7);

pub fn cross2(a: &Point, b: &Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Counter-clockwise angle from `a` to `b`, in `[0, 2pi)`.
pub fn ccw_angle(a: &Point, b: &Point) -> f64 {
    let t = cross2(a, b).atan2(a.dot(b));
    if t < 0.0 {
        t + std::f64::consts::TAU
    } else {
        t
    }
}

pub fn lift(p: &Point) -> Vector3<f64> {
    Vector3::new(p.x, p.y, 0.0)
}

pub fn rotation(axis: &Vector3<f64>, angle: f64) -> Matrix3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle).into_inner()
}

pub fn skew(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Axial vector of the antisymmetric part of `m`.
pub fn vee_antisym(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Thin SVD `a = u diag(s) v^T`, singular values in decreasing order.
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

// nalgebra's SVD can return a wrong factorization for tall rank-deficient
// matrices, so the decomposition is delegated to faer.
pub fn svd(a: &DMatrix<f64>) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Svd {
            u: DMatrix::zeros(m, 0),
            singular_values: Vec::new(),
            v: DMatrix::zeros(n, 0),
        };
    }
    let fa = faer::Mat::<f64>::from_fn(m, n, |i, j| a[(i, j)]);
    let d = fa.thin_svd().expect("svd converges");
    let (fu, fs, fv) = (d.U(), d.S().column_vector(), d.V());
    Svd {
        u: DMatrix::from_fn(m, k, |i, j| fu[(i, j)]),
        singular_values: (0..k).map(|i| fs[i]).collect(),
        v: DMatrix::from_fn(n, k, |i, j| fv[(i, j)]),
    }
}

fn largest(sv: &[f64]) -> f64 {
    sv.iter().cloned().fold(0.0, f64::max)
}

/// Numerical rank with the shared cutoff, refusing when a singular value sits
/// in the ambiguous band.
pub fn numerical_rank(a: &DMatrix<f64>) -> Result<usize> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0);
    }
    let sv = svd(a).singular_values;
    let max = largest(&sv);
    if max == 0.0 {
        return Ok(0);
    }
    let mut rank = 0;
    for s in &sv {
        let ratio = s / max;
        if ratio > AMBIGUOUS_BAND.0 && ratio < AMBIGUOUS_BAND.1 {
            return Err(Error::RankDeficiencyAmbiguous { ratio });
        }
        if ratio > RANK_CUTOFF {
            rank += 1;
        }
    }
    Ok(rank)
}

/// Orthonormal basis (as columns) of the null space of `a`.
pub fn kernel_basis(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let mut padded = DMatrix::zeros(a.nrows().max(n), n);
    padded.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    let d = svd(&padded);
    let max = largest(&d.singular_values);
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&i| max == 0.0 || d.singular_values[i] <= RANK_CUTOFF * max)
        .map(|i| d.v.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis (as columns) of the span of `vectors`.
pub fn span_basis(vectors: &[DVector<f64>], dim: usize) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(dim, 0);
    }
    let d = svd(&DMatrix::from_columns(vectors));
    let max = largest(&d.singular_values);
    let cols: Vec<DVector<f64>> = (0..d.singular_values.len())
        .filter(|&i| max > 0.0 && d.singular_values[i] > RANK_CUTOFF * max)
        .map(|i| d.u.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Minimum-norm least-squares solution of `j x = r`.
pub fn pseudo_solve(j: &DMatrix<f64>, r: &DVector<f64>) -> DVector<f64> {
    let d = svd(j);
    let max = largest(&d.singular_values);
    let eps = (max * 1e-12).max(1e-300);
    let mut x = DVector::zeros(j.ncols());
    for (i, &s) in d.singular_values.iter().enumerate() {
        if s > eps {
            x += d.v.column(i) * (d.u.column(i).dot(r) / s);
        }
    }
    x
}

/// Angle between two nonzero vectors, stable near 0 and pi.
pub fn angle_between(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let ua = a / a.norm();
    let ub = b / b.norm();
    2.0 * (&ua - &ub).norm().atan2((&ua + &ub).norm())
}
