#![allow(dead_code)]

use origami_selffold::configspace::TangentVector;
use origami_selffold::pattern::CreasePattern;

pub fn deg(x: f64) -> f64 {
    x.to_radians()
}

/// Sector angles at a vertex measured from raw coordinates: the crease
/// directions are sorted by polar angle and consecutive gaps returned.
pub fn measured_sectors(p: &CreasePattern, vertex: usize) -> Vec<f64> {
    let here = p.vertices()[vertex].position;
    let mut dirs: Vec<f64> = p
        .creases()
        .iter()
        .filter_map(|c| {
            if c.vertices[0] == vertex {
                Some(p.vertices()[c.vertices[1]].position - here)
            } else if c.vertices[1] == vertex {
                Some(p.vertices()[c.vertices[0]].position - here)
            } else {
                None
            }
        })
        .map(|d| d.y.atan2(d.x))
        .collect();
    dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = dirs.len();
    (0..n)
        .map(|i| {
            let next = if i + 1 == n { dirs[0] + std::f64::consts::TAU } else { dirs[i + 1] };
            next - dirs[i]
        })
        .collect()
}

pub fn interior_vertices(p: &CreasePattern) -> Vec<usize> {
    (0..p.vertices().len()).filter(|&v| p.vertices()[v].interior).collect()
}

pub fn sorted_degrees(v: &[f64]) -> Vec<f64> {
    let mut d: Vec<f64> = v.iter().map(|x| x.to_degrees()).collect();
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d
}

pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// True when `t` equals `v` up to sign and scale.
pub fn parallel(t: &TangentVector, v: &[f64], tol: f64) -> bool {
    let a = unit(&t.components);
    let b = unit(v);
    let plus: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let minus: f64 = a.iter().zip(&b).map(|(x, y)| (x + y).abs()).fold(0.0, f64::max);
    plus.min(minus) < tol
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Least-squares coefficients of `target` over the columns `basis` via the
/// normal equations, solved with Gaussian elimination.
pub fn lstsq(basis: &[Vec<f64>], target: &[f64]) -> (Vec<f64>, f64) {
    let k = basis.len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = dot(&basis[i], &basis[j]);
        }
        a[i][k] = dot(&basis[i], target);
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap()).unwrap();
        a.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..k).map(|i| a[i][k] / a[i][i]).collect();
    let mut resid = target.to_vec();
    for (c, b) in coef.iter().zip(basis) {
        for (r, x) in resid.iter_mut().zip(b) {
            *r -= c * x;
        }
    }
    (coef, resid.iter().map(|x| x * x).sum::<f64>().sqrt())
}

/// First-order tangents of the 3x3 Miura with multiplier `p`, in crease
/// order: the upper and lower straight rows folding alone, the left and right
/// zig-zag columns led by their vertical creases, and the standard fold.
pub struct MiuraReference {
    pub row_upper: Vec<f64>,
    pub row_lower: Vec<f64>,
    pub column_left: Vec<f64>,
    pub column_right: Vec<f64>,
    pub standard: Vec<f64>,
}

pub fn miura_reference(p: f64) -> MiuraReference {
    let mut row_upper = vec![0.0; 12];
    let mut row_lower = vec![0.0; 12];
    for i in 2..5 {
        row_upper[i] = 1.0;
        row_lower[i + 5] = 1.0;
    }
    MiuraReference {
        row_upper,
        row_lower,
        column_left: vec![1.0, 0.0, -p, p, p, 1.0, 0.0, p, -p, -p, 1.0, 0.0],
        column_right: vec![0.0, 1.0, -p, -p, p, 0.0, 1.0, p, p, -p, 0.0, 1.0],
        standard: vec![1.0, -1.0, -p, p, -p, 1.0, -1.0, p, -p, p, 1.0, -1.0],
    }
}
