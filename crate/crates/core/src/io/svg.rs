//! SVG rendering of crease patterns.

use std::fmt::Write;

use crate::configspace::GlobalMode;
use crate::pattern::CreasePattern;
use crate::vertex::Assignment;

fn style(a: Assignment, width: f64) -> String {
    match a {
        Assignment::Mountain => format!("stroke=\"#d62728\" stroke-width=\"{width:.6}\""),
        Assignment::Valley => format!(
            "stroke=\"#1f3fbf\" stroke-width=\"{width:.6}\" stroke-dasharray=\"{:.6} {:.6}\"",
            4.0 * width,
            2.0 * width
        ),
        Assignment::Unassigned => format!("stroke=\"#888888\" stroke-width=\"{width:.6}\""),
    }
}

/// Crease pattern drawing with one user unit per length unit and `y` pointing
/// up. Boundary black, mountains red, valleys blue dashed, unassigned gray.
pub fn export_svg(p: &CreasePattern, mode: Option<&GlobalMode>) -> String {
    let pos: Vec<(f64, f64)> = p.vertices().iter().map(|v| (v.position.x, -v.position.y)).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for (x, y) in &pos {
        x0 = x0.min(*x);
        y0 = y0.min(*y);
        x1 = x1.max(*x);
        y1 = y1.max(*y);
    }
    let size = (x1 - x0).max(y1 - y0).max(1e-12);
    let margin = 0.05 * size;
    let width = 0.01 * size;
    let mut s = String::new();
    let _ = writeln!(s, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        x0 - margin,
        y0 - margin,
        x1 - x0 + 2.0 * margin,
        y1 - y0 + 2.0 * margin
    );
    let _ = writeln!(s, "<g fill=\"none\" stroke-linecap=\"round\">");
    let line = |s: &mut String, a: usize, b: usize, attrs: &str| {
        let _ = writeln!(
            s,
            "<line x1=\"{:.6}\" y1=\"{:.6}\" x2=\"{:.6}\" y2=\"{:.6}\" {attrs}/>",
            pos[a].0, pos[a].1, pos[b].0, pos[b].1
        );
    };
    for e in p.boundary_edges() {
        line(
            &mut s,
            e[0],
            e[1],
            &format!("class=\"boundary\" stroke=\"#000000\" stroke-width=\"{width:.6}\""),
        );
    }
    for (i, c) in p.creases().iter().enumerate() {
        let a = mode.map_or(Assignment::Unassigned, |m| m.mv[i]);
        let class = match a {
            Assignment::Mountain => "mountain",
            Assignment::Valley => "valley",
            Assignment::Unassigned => "unassigned",
        };
        line(
            &mut s,
            c.vertices[0],
            c.vertices[1],
            &format!("class=\"{class}\" data-crease=\"{i}\" {}", style(a, width)),
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
