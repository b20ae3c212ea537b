//! FOLD 1.1 import and export.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::configspace::GlobalMode;
use crate::error::{Error, Result};
use crate::linalg::{ccw_angle, cross2, Point};
use crate::pattern::{CreasePattern, PatternKind};
use crate::sim::{reconstruct_3d, ConfigPoint};
use crate::vertex::Assignment;

/// Folding angles smaller than this export as unassigned.
const ASSIGN_TOL: f64 = 1e-12;
const COORD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_spec: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file_creator: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub frame_classes: Vec<String>,
    pub vertices_coords: Vec<Vec<f64>>,
    pub edges_vertices: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges_assignment: Vec<String>,
    #[serde(rename = "edges_foldAngle", default, skip_serializing_if = "Vec::is_empty")]
    pub edges_fold_angle: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces_vertices: Vec<Vec<usize>>,
}

impl FoldDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedDocument(e.to_string()))
    }
}

/// FOLD document for a pattern. With a configuration the vertices are the
/// folded 3D positions; otherwise the flat 2D coordinates, with crease
/// assignments taken from `mode` when given.
pub fn export_fold(p: &CreasePattern, mode: Option<&GlobalMode>, point: Option<&ConfigPoint>) -> Result<FoldDocument> {
    let n = p.crease_count();
    let (frame, coords) = match point {
        Some(pt) => {
            let state = reconstruct_3d(p, pt)?;
            (
                "foldedForm",
                state.vertex_positions.iter().map(|x| vec![x.x, x.y, x.z]).collect(),
            )
        }
        None => (
            "creasePattern",
            p.vertices().iter().map(|v| vec![v.position.x, v.position.y]).collect(),
        ),
    };
    let assignment = |i: usize| -> Assignment {
        match (point, mode) {
            (Some(pt), _) => Assignment::from_value(pt.folding_angles[i], ASSIGN_TOL),
            (None, Some(m)) => m.mv[i],
            (None, None) => Assignment::Unassigned,
        }
    };
    let mut edges_vertices = Vec::with_capacity(n + p.boundary_edges().len());
    let mut edges_assignment = Vec::new();
    let mut edges_fold_angle = Vec::new();
    for (i, c) in p.creases().iter().enumerate() {
        edges_vertices.push(c.vertices);
        edges_assignment.push(assignment(i).letter().to_string());
        edges_fold_angle.push(point.map_or(0.0, |pt| pt.folding_angles[i].to_degrees()));
    }
    for e in p.boundary_edges() {
        edges_vertices.push(*e);
        edges_assignment.push("B".into());
        edges_fold_angle.push(0.0);
    }
    Ok(FoldDocument {
        file_spec: Some(1.1),
        file_creator: Some(format!("origami-selffold {}", env!("CARGO_PKG_VERSION"))),
        frame_classes: vec![frame.into()],
        vertices_coords: coords,
        edges_vertices,
        edges_assignment,
        edges_fold_angle,
        faces_vertices: p.faces().iter().map(|f| f.to_vec()).collect(),
    })
}

fn signed_area(pts: &[Point], cycle: &[usize]) -> f64 {
    (0..cycle.len())
        .map(|k| cross2(&pts[cycle[k]], &pts[cycle[(k + 1) % cycle.len()]]))
        .sum::<f64>()
        / 2.0
}

/// Faces of a planar straight-line graph, counter-clockwise, outer face
/// removed.
fn trace_faces(pts: &[Point], edges: &[[usize; 2]]) -> Result<Vec<Vec<usize>>> {
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for [a, b] in edges {
        nbrs[*a].push(*b);
        nbrs[*b].push(*a);
    }
    for (v, list) in nbrs.iter_mut().enumerate() {
        let x = Point::new(1.0, 0.0);
        list.sort_by(|a, b| {
            ccw_angle(&x, &(pts[*a] - pts[v])).total_cmp(&ccw_angle(&x, &(pts[*b] - pts[v])))
        });
    }
    let mut seen = HashSet::new();
    let mut faces = Vec::new();
    for [a, b] in edges {
        for start in [(*a, *b), (*b, *a)] {
            if seen.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = start;
            loop {
                if !seen.insert((u, v)) {
                    return Err(Error::NonManifold("face boundary does not close".into()));
                }
                cycle.push(u);
                let list = &nbrs[v];
                let k = list.iter().position(|x| *x == u).unwrap();
                let w = list[(k + list.len() - 1) % list.len()];
                u = v;
                v = w;
                if (u, v) == start {
                    break;
                }
                if cycle.len() > edges.len() * 2 {
                    return Err(Error::NonManifold("face boundary does not close".into()));
                }
            }
            faces.push(cycle);
        }
    }
    let outer: Vec<usize> = (0..faces.len())
        .filter(|&i| signed_area(pts, &faces[i]) <= 0.0)
        .collect();
    if outer.len() != 1 {
        return Err(Error::NonManifold(format!("{} outer boundaries", outer.len())));
    }
    faces.remove(outer[0]);
    Ok(faces)
}

/// Rebuilds a crease pattern from a flat FOLD document. Vertices and creases
/// are renumbered into grid order.
pub fn import_fold(doc: &FoldDocument) -> Result<CreasePattern> {
    if doc.vertices_coords.is_empty() {
        return Err(Error::MalformedDocument("no vertices".into()));
    }
    let mut pts = Vec::with_capacity(doc.vertices_coords.len());
    for (i, c) in doc.vertices_coords.iter().enumerate() {
        match c[..] {
            [x, y] => pts.push(Point::new(x, y)),
            [x, y, z] if z.abs() <= COORD_TOL => pts.push(Point::new(x, y)),
            [_, _, _] => {
                return Err(Error::MalformedDocument(format!(
                    "vertex {i} is out of plane; folded coordinates cannot be imported"
                )))
            }
            _ => return Err(Error::MalformedDocument(format!("vertex {i} has {} coordinates", c.len()))),
        }
        if !pts[i].x.is_finite() || !pts[i].y.is_finite() {
            return Err(Error::MalformedDocument(format!("vertex {i} is not finite")));
        }
    }
    let nv = pts.len();
    let mut edge_set = HashSet::new();
    for (i, [a, b]) in doc.edges_vertices.iter().enumerate() {
        if *a >= nv || *b >= nv || a == b {
            return Err(Error::MalformedDocument(format!("edge {i} is invalid")));
        }
        if !edge_set.insert((*a.min(b), *a.max(b))) {
            return Err(Error::MalformedDocument(format!("edge {i} is duplicated")));
        }
    }
    let faces = if doc.faces_vertices.is_empty() {
        trace_faces(&pts, &doc.edges_vertices)?
    } else {
        let mut faces = Vec::new();
        for f in &doc.faces_vertices {
            if f.iter().any(|v| *v >= nv) {
                return Err(Error::MalformedDocument("face refers to a missing vertex".into()));
            }
            let mut f = f.clone();
            if signed_area(&pts, &f) < 0.0 {
                f.reverse();
            }
            faces.push(f);
        }
        faces
    };
    for (i, f) in faces.iter().enumerate() {
        if f.len() != 4 {
            return Err(Error::NonQuadFace { face: i, corners: f.len() });
        }
    }
    let mut half: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edge_faces: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..4 {
            let (a, b) = (f[k], f[(k + 1) % 4]);
            if !edge_set.contains(&(a.min(b), a.max(b))) {
                return Err(Error::NonManifold(format!("face {fi} uses a missing edge")));
            }
            if half.insert((a, b), fi).is_some() {
                return Err(Error::NonManifold(format!("edge {a}-{b} is shared inconsistently")));
            }
            *edge_faces.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut on_boundary = vec![false; nv];
    for e in &edge_set {
        match edge_faces.get(e).copied().unwrap_or(0) {
            1 => {
                on_boundary[e.0] = true;
                on_boundary[e.1] = true;
            }
            2 => {}
            k => return Err(Error::NonManifold(format!("edge {}-{} borders {k} faces", e.0, e.1))),
        }
    }
    let mut degree = vec![0usize; nv];
    for e in &edge_set {
        degree[e.0] += 1;
        degree[e.1] += 1;
    }
    for v in 0..nv {
        if !on_boundary[v] && degree[v] != 4 {
            return Err(Error::WrongDegree { vertex: v, degree: degree[v] });
        }
    }
    // Grid recovery: start from the corner that is furthest up and left.
    let mut face_count = vec![0usize; nv];
    for f in &faces {
        for v in f {
            face_count[*v] += 1;
        }
    }
    let corner = (0..nv)
        .filter(|&v| face_count[v] == 1)
        .max_by(|&a, &b| (pts[a].y - pts[a].x).total_cmp(&(pts[b].y - pts[b].x)).then(b.cmp(&a)))
        .ok_or_else(|| Error::NonManifold("no grid corner".into()))?;
    let align = |f: &[usize], vertex: usize, slot: usize| -> Option<[usize; 4]> {
        let k = f.iter().position(|x| *x == vertex)?;
        Some(std::array::from_fn(|s| f[(k + (s + 4 - slot)) % 4]))
    };
    let f0 = faces.iter().position(|f| f.contains(&corner)).unwrap();
    let mut grid: Vec<Option<(i64, i64, [usize; 4])>> = vec![None; faces.len()];
    grid[f0] = Some((0, 0, align(&faces[f0], corner, 3).unwrap()));
    let mut queue = std::collections::VecDeque::from([f0]);
    while let Some(f) = queue.pop_front() {
        let (i, j, a) = grid[f].unwrap();
        // (shared directed edge in the neighbour, anchor vertex, its slot, offset)
        let steps = [
            ((a[2], a[1]), a[1], 0, (0, 1)),
            ((a[1], a[0]), a[0], 3, (1, 0)),
            ((a[0], a[3]), a[0], 1, (0, -1)),
            ((a[3], a[2]), a[3], 0, (-1, 0)),
        ];
        for (edge, anchor, slot, (di, dj)) in steps {
            let Some(&g) = half.get(&edge) else { continue };
            let aligned = align(&faces[g], anchor, slot).unwrap();
            let want = (i + di, j + dj, aligned);
            match grid[g] {
                None => {
                    grid[g] = Some(want);
                    queue.push_back(g);
                }
                Some(existing) if existing != want => {
                    return Err(Error::NonManifold("faces do not form a grid".into()));
                }
                _ => {}
            }
        }
    }
    let placed: Vec<(i64, i64, [usize; 4])> = grid
        .into_iter()
        .map(|g| g.ok_or_else(|| Error::NonManifold("face graph is disconnected".into())))
        .collect::<Result<_>>()?;
    let i0 = placed.iter().map(|g| g.0).min().unwrap();
    let j0 = placed.iter().map(|g| g.1).min().unwrap();
    let rows = (placed.iter().map(|g| g.0).max().unwrap() - i0 + 1) as usize;
    let cols = (placed.iter().map(|g| g.1).max().unwrap() - j0 + 1) as usize;
    if rows * cols != faces.len() || (rows + 1) * (cols + 1) != nv {
        return Err(Error::NonManifold("faces do not form a rectangular grid".into()));
    }
    let mut slot_of: Vec<Option<usize>> = vec![None; nv];
    let mut seen_cell = HashSet::new();
    for (i, j, a) in &placed {
        let (i, j) = ((i - i0) as usize, (j - j0) as usize);
        if !seen_cell.insert((i, j)) {
            return Err(Error::NonManifold("two faces share a grid cell".into()));
        }
        let cells = [(i + 1, j), (i + 1, j + 1), (i, j + 1), (i, j)];
        for (v, (r, c)) in a.iter().zip(cells) {
            let idx = r * (cols + 1) + c;
            match slot_of[*v] {
                None => slot_of[*v] = Some(idx),
                Some(old) if old != idx => {
                    return Err(Error::NonManifold(format!("vertex {v} sits at two grid positions")))
                }
                _ => {}
            }
        }
    }
    let mut positions = vec![None; nv];
    for v in 0..nv {
        let idx = slot_of[v].ok_or_else(|| Error::NonManifold(format!("vertex {v} is on no face")))?;
        if positions[idx].replace(pts[v]).is_some() {
            return Err(Error::NonManifold("two vertices share a grid position".into()));
        }
    }
    let expected_edges = rows * (cols + 1) + cols * (rows + 1);
    if edge_set.len() != expected_edges {
        return Err(Error::NonManifold(format!(
            "{} edges for a {rows}x{cols} grid",
            edge_set.len()
        )));
    }
    CreasePattern::from_grid(
        positions.into_iter().map(|p| p.unwrap()).collect(),
        rows,
        cols,
        None,
        PatternKind::Imported,
    )
}

/// Same geometry and combinatorics up to vertex and crease renumbering.
pub fn patterns_isomorphic(a: &CreasePattern, b: &CreasePattern, tol: f64) -> bool {
    if a.vertices().len() != b.vertices().len()
        || a.crease_count() != b.crease_count()
        || a.faces().len() != b.faces().len()
        || a.boundary_edges().len() != b.boundary_edges().len()
    {
        return false;
    }
    let mut map = vec![usize::MAX; a.vertices().len()];
    for (i, va) in a.vertices().iter().enumerate() {
        let hits: Vec<usize> = b
            .vertices()
            .iter()
            .enumerate()
            .filter(|(_, vb)| (vb.position - va.position).norm() <= tol)
            .map(|(j, _)| j)
            .collect();
        match hits[..] {
            [j] if b.vertices()[j].interior == va.interior => map[i] = j,
            _ => return false,
        }
    }
    let key = |x: usize, y: usize| (x.min(y), x.max(y));
    let creases_b: HashSet<_> = b.creases().iter().map(|c| key(c.vertices[0], c.vertices[1])).collect();
    let bound_b: HashSet<_> = b.boundary_edges().iter().map(|e| key(e[0], e[1])).collect();
    let faces_b: HashSet<Vec<usize>> = b
        .faces()
        .iter()
        .map(|f| {
            let mut s = f.to_vec();
            s.sort();
            s
        })
        .collect();
    a.creases()
        .iter()
        .all(|c| creases_b.contains(&key(map[c.vertices[0]], map[c.vertices[1]])))
        && a.boundary_edges().iter().all(|e| bound_b.contains(&key(map[e[0]], map[e[1]])))
        && a.faces().iter().all(|f| {
            let mut s: Vec<usize> = f.iter().map(|v| map[*v]).collect();
            s.sort();
            faces_b.contains(&s)
        })
}
