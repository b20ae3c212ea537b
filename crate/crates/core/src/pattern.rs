//! Monohedral quadrilateral crease patterns.
//!
//! Patterns live on a `rows x cols` grid of faces. Grid vertex `(r, c)` has
//! index `r * (cols + 1) + c`, with `r` counting from the top row down. Face
//! `(i, j)` lists its corners counter-clockwise starting at the bottom left:
//! `[(i+1, j), (i+1, j+1), (i, j+1), (i, j)]`.
//!
//! Creases are numbered in reading order, one band of rows at a time: the
//! vertical creases of face row `r` left to right, then the horizontal
//! creases below that row left to right.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ccw_angle, cross2, Point};
use crate::vertex::{local_modes, VertexGeometry};

/// Geometric tolerance, relative to a unit tile.
pub const GEOMETRY_TOL: f64 = 1e-9;

/// Generating tile. Corner 0 sits at the origin and edge 0->1 runs along `+x`;
/// the interior angle at corner `k` is the k-th of `alpha, beta, gamma, delta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadTile {
    corners: [[f64; 2]; 4],
}

fn interior_angles(c: &[Point; 4]) -> [f64; 4] {
    std::array::from_fn(|k| {
        let next = c[(k + 1) % 4] - c[k];
        let prev = c[(k + 3) % 4] - c[k];
        ccw_angle(&next, &prev)
    })
}

impl QuadTile {
    pub fn from_corners(corners: [Point; 4]) -> Result<Self> {
        if corners.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::DegenerateTile("non-finite corner".into()));
        }
        let e = corners[1] - corners[0];
        let len = e.norm();
        if len == 0.0 {
            return Err(Error::DegenerateTile("zero-length edge".into()));
        }
        let (c, s) = (e.x / len, e.y / len);
        let origin = corners[0];
        let pts = corners.map(|p| {
            let d = p - origin;
            Point::new(c * d.x + s * d.y, -s * d.x + c * d.y)
        });
        let mut diameter = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                diameter = diameter.max((pts[i] - pts[j]).norm());
            }
        }
        for k in 0..4 {
            if (pts[(k + 1) % 4] - pts[k]).norm() <= GEOMETRY_TOL * diameter {
                return Err(Error::DegenerateTile(format!("edge {k} has zero length")));
            }
        }
        let angles = interior_angles(&pts);
        for (k, a) in angles.iter().enumerate() {
            if *a > PI + GEOMETRY_TOL {
                return Err(Error::NonConvexTile);
            }
            if *a <= GEOMETRY_TOL || (*a - PI).abs() <= GEOMETRY_TOL {
                return Err(Error::DegenerateTile(format!("corner {k} has angle {a}")));
            }
        }
        if (angles.iter().sum::<f64>() - TAU).abs() > GEOMETRY_TOL {
            return Err(Error::NonConvexTile);
        }
        Ok(QuadTile {
            corners: pts.map(|p| [p.x, p.y]),
        })
    }

    /// Tile with the given interior angles (radians). The first edge has unit
    /// length; the remaining lengths maximise the shortest edge. Flat-foldable
    /// angle sets always give a cyclic quadrilateral.
    pub fn from_angles(angles: [f64; 4]) -> Result<Self> {
        for (k, a) in angles.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::InvalidAngle(format!("angle {k} is not finite")));
            }
            if *a <= GEOMETRY_TOL {
                return Err(Error::DegenerateTile(format!("angle {k} is {a}")));
            }
            if *a > PI + GEOMETRY_TOL {
                return Err(Error::NonConvexTile);
            }
            if *a >= PI - GEOMETRY_TOL {
                return Err(Error::DegenerateTile(format!("angle {k} is {a}")));
            }
        }
        let sum: f64 = angles.iter().sum();
        if (sum - TAU).abs() > GEOMETRY_TOL {
            return Err(Error::InvalidAngle(format!(
                "interior angles sum to {} degrees",
                sum.to_degrees()
            )));
        }
        let mut heading = [0.0; 4];
        for k in 1..4 {
            heading[k] = heading[k - 1] + (PI - angles[k]);
        }
        let d = heading.map(|h| Point::new(h.cos(), h.sin()));
        // l1 d1 + l2 d2 + l3 d3 = -d0 has a one-parameter family of solutions.
        let det = cross2(&d[1], &d[2]);
        let base = [
            1.0,
            cross2(&(-d[0]), &d[2]) / det,
            cross2(&d[1], &(-d[0])) / det,
            0.0,
        ];
        let null = [0.0, cross2(&d[2], &d[3]), cross2(&d[3], &d[1]), cross2(&d[1], &d[2])];
        let at = |t: f64| -> [f64; 4] { std::array::from_fn(|i| base[i] + t * null[i]) };
        let worst = |t: f64| at(t).iter().cloned().fold(f64::INFINITY, f64::min);
        let mut best: Option<(f64, f64)> = None;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let dn = null[i] - null[j];
                if dn.abs() < 1e-15 {
                    continue;
                }
                let t = (base[j] - base[i]) / dn;
                let w = worst(t);
                if best.is_none_or(|(_, bw)| w > bw + 1e-15) {
                    best = Some((t, w));
                }
            }
        }
        let (t, w) = best.ok_or_else(|| Error::DegenerateTile("no closing edge lengths".into()))?;
        if w <= GEOMETRY_TOL {
            return Err(Error::DegenerateTile("no closing edge lengths".into()));
        }
        let len = at(t);
        let mut corners = [Point::zeros(); 4];
        for k in 1..4 {
            corners[k] = corners[k - 1] + d[k - 1] * len[k - 1];
        }
        Self::from_corners(corners)
    }

    pub fn from_degrees(deg: [f64; 4]) -> Result<Self> {
        Self::from_angles(deg.map(f64::to_radians))
    }

    /// Parallelogram with acute angle `theta` at corner 0 and sides `a`
    /// (along `+x`) and `b`.
    pub fn parallelogram(theta: f64, a: f64, b: f64) -> Result<Self> {
        check_lengths(a, b)?;
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::InvalidAngle(format!("theta = {theta}")));
        }
        let (c, s) = (theta.cos(), theta.sin());
        Self::from_corners([
            Point::new(0.0, 0.0),
            Point::new(a, 0.0),
            Point::new(a + b * c, b * s),
            Point::new(b * c, b * s),
        ])
    }

    /// Isosceles trapezoid with base `a`, legs `b` and base angles `theta`.
    pub fn isosceles_trapezoid(theta: f64, a: f64, b: f64) -> Result<Self> {
        check_lengths(a, b)?;
        if !(theta > 0.0 && theta < FRAC_PI_2) {
            return Err(Error::InvalidAngle(format!("theta = {theta}")));
        }
        let (c, s) = (theta.cos(), theta.sin());
        if a - 2.0 * b * c <= GEOMETRY_TOL * a {
            return Err(Error::DegenerateTile(
                "legs too long for the base; the top edge vanishes".into(),
            ));
        }
        Self::from_corners([
            Point::new(0.0, 0.0),
            Point::new(a, 0.0),
            Point::new(a - b * c, b * s),
            Point::new(b * c, b * s),
        ])
    }

    pub fn corners(&self) -> [Point; 4] {
        self.corners.map(|[x, y]| Point::new(x, y))
    }

    /// Interior angles `[alpha, beta, gamma, delta]`.
    pub fn angles(&self) -> [f64; 4] {
        interior_angles(&self.corners())
    }

    pub fn is_flat_foldable(&self) -> bool {
        let a = self.angles();
        (a[0] + a[2] - PI).abs() < GEOMETRY_TOL && (a[1] + a[3] - PI).abs() < GEOMETRY_TOL
    }

    pub fn is_parallelogram(&self) -> bool {
        let a = self.angles();
        (a[0] - a[2]).abs() < GEOMETRY_TOL && (a[1] - a[3]).abs() < GEOMETRY_TOL
    }

    /// True when some relabelling has `alpha = beta` and `gamma = delta`.
    pub fn is_isosceles_trapezoid(&self) -> bool {
        let a = self.angles();
        (0..4).any(|k| {
            (a[k] - a[(k + 1) % 4]).abs() < GEOMETRY_TOL
                && (a[(k + 2) % 4] - a[(k + 3) % 4]).abs() < GEOMETRY_TOL
        })
    }

    fn scaled(&self, f: f64) -> Self {
        QuadTile {
            corners: self.corners.map(|[x, y]| [x * f, y * f]),
        }
    }
}

fn check_lengths(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::DegenerateTile(format!("side lengths {a}, {b}")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternKind {
    RotationallySymmetric,
    Miura,
    Imported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternClass {
    MiuraLike,
    ChickenWireLike,
    GenericFlatFoldable,
    GenericNonFlatFoldable,
    Unsupported,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub position: Point,
    pub interior: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Crease {
    pub vertices: [usize; 2],
    /// Face to the left of the directed segment `vertices[0] -> vertices[1]`.
    pub left_face: usize,
    pub right_face: usize,
}

/// The four creases around an interior vertex in counter-clockwise order.
///
/// The starting crease is chosen so the vertex's two folding modes have their
/// different creases at local positions 2 (mode 1) and 1 (mode 2). For
/// flat-foldable vertices this puts the multipliers in the form
/// `(p, 1, -p, 1)` and `(1, q, 1, -q)` with `p > 0 >= q`.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexStar {
    pub vertex: usize,
    pub creases: [usize; 4],
    pub directions: [Point; 4],
    pub geometry: VertexGeometry,
}

impl VertexStar {
    pub fn local_index(&self, crease: usize) -> Option<usize> {
        self.creases.iter().position(|c| *c == crease)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CreasePattern {
    vertices: Vec<Vertex>,
    creases: Vec<Crease>,
    boundary_edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 4]>,
    rows: usize,
    cols: usize,
    tile: Option<QuadTile>,
    kind: PatternKind,
    stars: Vec<VertexStar>,
}

impl CreasePattern {
    /// Builds a pattern from grid-vertex positions in row-major order.
    pub fn from_grid(
        positions: Vec<Point>,
        rows: usize,
        cols: usize,
        tile: Option<QuadTile>,
        kind: PatternKind,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidGrid(format!("{rows}x{cols}")));
        }
        if positions.len() != (rows + 1) * (cols + 1) {
            return Err(Error::InvalidGrid(format!(
                "{} vertices for a {rows}x{cols} grid",
                positions.len()
            )));
        }
        let w = cols + 1;
        let id = |r: usize, c: usize| r * w + c;
        let vertices: Vec<Vertex> = positions
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let (r, c) = (i / w, i % w);
                Vertex {
                    position: *p,
                    interior: r > 0 && r < rows && c > 0 && c < cols,
                }
            })
            .collect();
        let mut faces = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let f = [id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), id(i, j)];
                let mut area = 0.0;
                for k in 0..4 {
                    area += cross2(&positions[f[k]], &positions[f[(k + 1) % 4]]);
                }
                if !(area > 0.0) {
                    return Err(Error::InvalidGrid(format!("face ({i}, {j}) is not counter-clockwise")));
                }
                faces.push(f);
            }
        }
        let mut half_edges = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..4 {
                half_edges.insert((f[k], f[(k + 1) % 4]), fi);
            }
        }
        let mut creases = Vec::new();
        let mut push = |a: usize, b: usize| {
            creases.push(Crease {
                vertices: [a, b],
                left_face: half_edges[&(a, b)],
                right_face: half_edges[&(b, a)],
            })
        };
        for r in 0..rows {
            for c in 1..cols {
                push(id(r, c), id(r + 1, c));
            }
            if r + 1 < rows {
                for c in 0..cols {
                    push(id(r + 1, c), id(r + 1, c + 1));
                }
            }
        }
        let mut boundary_edges = Vec::new();
        for c in 0..cols {
            boundary_edges.push([id(0, c), id(0, c + 1)]);
        }
        for r in 0..rows {
            boundary_edges.push([id(r, cols), id(r + 1, cols)]);
        }
        for c in (0..cols).rev() {
            boundary_edges.push([id(rows, c + 1), id(rows, c)]);
        }
        for r in (0..rows).rev() {
            boundary_edges.push([id(r + 1, 0), id(r, 0)]);
        }
        let mut pattern = CreasePattern {
            vertices,
            creases,
            boundary_edges,
            faces,
            rows,
            cols,
            tile,
            kind,
            stars: Vec::new(),
        };
        pattern.stars = pattern.build_stars()?;
        Ok(pattern)
    }

    fn build_stars(&self) -> Result<Vec<VertexStar>> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.vertices.len()];
        for (ci, c) in self.creases.iter().enumerate() {
            incident[c.vertices[0]].push(ci);
            incident[c.vertices[1]].push(ci);
        }
        let mut stars = Vec::new();
        for (v, vert) in self.vertices.iter().enumerate() {
            if !vert.interior {
                continue;
            }
            let list = &incident[v];
            if list.len() != 4 {
                return Err(Error::WrongDegree { vertex: v, degree: list.len() });
            }
            let mut entries: Vec<(f64, usize, Point)> = list
                .iter()
                .map(|&ci| {
                    let [a, b] = self.creases[ci].vertices;
                    let other = if a == v { b } else { a };
                    let d = self.vertices[other].position - vert.position;
                    let u = d / d.norm();
                    (ccw_angle(&Point::new(1.0, 0.0), &u), ci, u)
                })
                .collect();
            entries.sort_by(|a, b| a.0.total_cmp(&b.0));
            let lowest = (0..4).min_by_key(|&i| entries[i].1).unwrap();
            entries.rotate_left(lowest);
            let sectors: [f64; 4] =
                std::array::from_fn(|i| ccw_angle(&entries[i].2, &entries[(i + 1) % 4].2));
            let geometry = VertexGeometry::new(sectors)?;
            let start = canonical_start(&geometry);
            entries.rotate_left(start);
            stars.push(VertexStar {
                vertex: v,
                creases: std::array::from_fn(|i| entries[i].1),
                directions: std::array::from_fn(|i| entries[i].2),
                geometry: geometry.rotated(start),
            });
        }
        Ok(stars)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn creases(&self) -> &[Crease] {
        &self.creases
    }

    pub fn crease_count(&self) -> usize {
        self.creases.len()
    }

    pub fn boundary_edges(&self) -> &[[usize; 2]] {
        &self.boundary_edges
    }

    pub fn faces(&self) -> &[[usize; 4]] {
        &self.faces
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tile(&self) -> Option<&QuadTile> {
        self.tile.as_ref()
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// Interior vertices in row-major order.
    pub fn stars(&self) -> &[VertexStar] {
        &self.stars
    }

    pub fn star_of(&self, vertex: usize) -> Option<&VertexStar> {
        self.stars.iter().find(|s| s.vertex == vertex)
    }

    pub fn grid_vertex(&self, r: usize, c: usize) -> usize {
        r * (self.cols + 1) + c
    }

    /// Same pattern with every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidGrid(format!("scale factor {factor}")));
        }
        let positions = self.vertices.iter().map(|v| v.position * factor).collect();
        Self::from_grid(
            positions,
            self.rows,
            self.cols,
            self.tile.as_ref().map(|t| t.scaled(factor)),
            self.kind,
        )
    }
}

/// Rotation of the crease order that puts the different creases of the two
/// local modes at positions 2 and 1.
fn canonical_start(geometry: &VertexGeometry) -> usize {
    let Ok([a, b]) = local_modes(geometry) else {
        return 0;
    };
    match (a.different_crease, b.different_crease) {
        (Some(x), Some(y)) if (x + 1) % 4 == y => (y + 2) % 4,
        (Some(x), Some(y)) if (y + 1) % 4 == x => (x + 2) % 4,
        (Some(x), None) | (None, Some(x)) => (x + 2) % 4,
        _ => 0,
    }
}

fn check_grid(rows: usize, cols: usize) -> Result<()> {
    if rows < 2 || cols < 2 {
        return Err(Error::InvalidGrid(format!(
            "{rows}x{cols}: need at least 2x2 faces for an interior vertex"
        )));
    }
    Ok(())
}

/// Patch of the tiling generated by half-turns of `tile` about its edge
/// midpoints.
pub fn generate_rotationally_symmetric(tile: &QuadTile, rows: usize, cols: usize) -> Result<CreasePattern> {
    check_grid(rows, cols)?;
    let p = tile.corners();
    let h = (p[1] - p[0]) + (p[2] - p[3]);
    let v = (p[0] - p[3]) + (p[1] - p[2]);
    let w = cols + 1;
    let mut pos: Vec<Option<Point>> = vec![None; (rows + 1) * w];
    // Corner slots of face (i, j): BL, BR, TR, TL.
    let offsets = [(1, 0), (1, 1), (0, 1), (0, 0)];
    for i in 0..rows {
        for j in 0..cols {
            let odd = (i + j) % 2 == 1;
            for (slot, (dr, dc)) in offsets.iter().enumerate() {
                let point = if odd {
                    let label = (slot + 2) % 4;
                    p[0] + p[1] - p[label] + (v * (i as f64 - 1.0) + h * j as f64) / 2.0
                } else {
                    p[slot] + (v * i as f64 + h * j as f64) / 2.0
                };
                let k = (i + dr) * w + (j + dc);
                if pos[k].is_none() {
                    pos[k] = Some(point);
                }
            }
        }
    }
    CreasePattern::from_grid(
        pos.into_iter().map(|p| p.expect("every grid vertex lies on a face")).collect(),
        rows,
        cols,
        Some(tile.clone()),
        PatternKind::RotationallySymmetric,
    )
}

/// Miura-ori: straight horizontal rows of creases, zig-zag columns.
pub fn generate_miura(theta: f64, len_a: f64, len_b: f64, rows: usize, cols: usize) -> Result<CreasePattern> {
    if !(theta > GEOMETRY_TOL && theta < FRAC_PI_2 - GEOMETRY_TOL) {
        return Err(Error::InvalidAngle(format!(
            "Miura angle must lie strictly between 0 and 90 degrees, got {}",
            theta.to_degrees()
        )));
    }
    check_grid(rows, cols)?;
    let tile = QuadTile::parallelogram(theta, len_a, len_b)?;
    let (c, s) = (theta.cos(), theta.sin());
    let mut pos = Vec::with_capacity((rows + 1) * (cols + 1));
    for r in 0..=rows {
        for col in 0..=cols {
            let shift = if r % 2 == 1 { len_b * c } else { 0.0 };
            pos.push(Point::new(col as f64 * len_a + shift, -(r as f64) * len_b * s));
        }
    }
    CreasePattern::from_grid(pos, rows, cols, Some(tile), PatternKind::Miura)
}

/// Chicken Wire: the rotationally-symmetric tiling of an isosceles trapezoid.
pub fn generate_chicken_wire(theta: f64, len_a: f64, len_b: f64, rows: usize, cols: usize) -> Result<CreasePattern> {
    if !(theta > GEOMETRY_TOL && theta < FRAC_PI_2 - GEOMETRY_TOL) {
        return Err(Error::InvalidAngle(format!(
            "Chicken Wire angle must lie strictly between 0 and 90 degrees, got {}",
            theta.to_degrees()
        )));
    }
    check_grid(rows, cols)?;
    let tile = QuadTile::isosceles_trapezoid(theta, len_a, len_b)?;
    generate_rotationally_symmetric(&tile, rows, cols)
}

pub fn check_kawasaki(pattern: &CreasePattern, vertex: usize) -> Result<bool> {
    let v = pattern
        .vertices
        .get(vertex)
        .ok_or_else(|| Error::InvalidGrid(format!("no vertex {vertex}")))?;
    if !v.interior {
        return Err(Error::BoundaryVertex(vertex));
    }
    let star = pattern.star_of(vertex).ok_or(Error::BoundaryVertex(vertex))?;
    Ok(star.geometry.is_flat_foldable())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < GEOMETRY_TOL
}

/// Classification of a tile's angles, trying every relabelling of its corners.
pub fn classify_tile(tile: &QuadTile) -> PatternClass {
    let a = tile.angles();
    let labellings: Vec<[f64; 4]> = (0..4)
        .flat_map(|k| {
            [
                std::array::from_fn(|i| a[(k + i) % 4]),
                std::array::from_fn(|i| a[(k + 4 - i) % 4]),
            ]
        })
        .collect();
    let acute = |x: f64| x < FRAC_PI_2 - GEOMETRY_TOL;
    if tile.is_parallelogram() && a.iter().any(|x| acute(*x)) {
        return PatternClass::MiuraLike;
    }
    if labellings
        .iter()
        .any(|l| close(l[0], l[1]) && close(l[2], l[3]) && acute(l[0]))
    {
        return PatternClass::ChickenWireLike;
    }
    if tile.is_flat_foldable() {
        if labellings.iter().any(|l| acute(l[0]) && !close(l[0], l[1])) {
            return PatternClass::GenericFlatFoldable;
        }
    } else if labellings
        .iter()
        .any(|l| acute(l[0]) && !close(l[0], l[1]) && !close(l[0], l[3]))
    {
        return PatternClass::GenericNonFlatFoldable;
    }
    PatternClass::Unsupported
}

/// Tile of a pattern: the generating tile, or for imported patterns the first
/// face, provided every interior vertex carries the same sector angles.
pub fn pattern_tile(pattern: &CreasePattern) -> Result<QuadTile> {
    if let Some(t) = pattern.tile() {
        return Ok(t.clone());
    }
    let f = pattern.faces()[0];
    let tile = QuadTile::from_corners(f.map(|v| pattern.vertices()[v].position))?;
    let mut want = tile.angles();
    want.sort_by(f64::total_cmp);
    for star in pattern.stars() {
        let mut s = star.geometry.sectors();
        s.sort_by(f64::total_cmp);
        if (0..4).any(|i| !close(s[i], want[i])) {
            return Err(Error::MixedVertexGeometry);
        }
    }
    Ok(tile)
}

pub fn classify_pattern(pattern: &CreasePattern) -> Result<PatternClass> {
    if pattern.stars().is_empty() {
        return Ok(PatternClass::Unsupported);
    }
    Ok(classify_tile(&pattern_tile(pattern)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_tile_single_vertex() {
        let t = QuadTile::from_degrees([90.0; 4]).unwrap();
        let p = generate_rotationally_symmetric(&t, 2, 2).unwrap();
        assert_eq!(p.vertices().len(), 9);
        assert_eq!(p.stars().len(), 1);
        assert_eq!(p.crease_count(), 4);
        for s in p.stars()[0].geometry.sectors() {
            assert!((s - FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn crease_count_formula() {
        let t = QuadTile::from_degrees([50.0, 110.0, 130.0, 70.0]).unwrap();
        for (r, c) in [(2, 2), (3, 3), (4, 5), (5, 3)] {
            let p = generate_rotationally_symmetric(&t, r, c).unwrap();
            assert_eq!(p.crease_count(), r * (c - 1) + c * (r - 1));
        }
    }

    #[test]
    fn tile_from_angles_keeps_angles() {
        for deg in [[50.0, 110.0, 130.0, 70.0], [50.0, 60.0, 120.0, 130.0], [80.0, 95.0, 85.0, 100.0]] {
            let t = QuadTile::from_degrees(deg).unwrap();
            for (a, d) in t.angles().iter().zip(deg) {
                assert!((a.to_degrees() - d).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn clockwise_tile_is_rejected() {
        let c = [(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)].map(|(x, y)| Point::new(x, y));
        assert!(matches!(QuadTile::from_corners(c), Err(Error::NonConvexTile)));
    }

    #[test]
    fn miura_rejects_right_angle() {
        assert!(matches!(generate_miura(FRAC_PI_2, 1.0, 1.0, 3, 3), Err(Error::InvalidAngle(_))));
        assert!(matches!(generate_chicken_wire(FRAC_PI_2, 2.0, 1.0, 3, 3), Err(Error::InvalidAngle(_))));
    }

    #[test]
    fn miura_canonical_order() {
        let p = generate_miura(60f64.to_radians(), 1.0, 1.0, 3, 3).unwrap();
        for s in p.stars() {
            let deg = s.geometry.sectors().map(f64::to_degrees);
            let want = [120.0, 60.0, 60.0, 120.0];
            for i in 0..4 {
                assert!((deg[i] - want[i]).abs() < 1e-9, "{deg:?}");
            }
        }
    }

    #[test]
    fn boundary_vertex_rejected() {
        let p = generate_miura(1.0, 1.0, 1.0, 2, 2).unwrap();
        assert!(matches!(check_kawasaki(&p, 0), Err(Error::BoundaryVertex(0))));
    }
}
