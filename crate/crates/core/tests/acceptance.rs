//! Acceptance suite. Runs every criterion, prints one `[PASS]`/`[FAIL]` line
//! each, and exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use origami_selffold::configspace::*;
use origami_selffold::io::report::AnalysisReport;
use origami_selffold::io::{export_fold, import_fold, patterns_isomorphic, FoldDocument};
use origami_selffold::linalg::Point;
use origami_selffold::pattern::*;
use origami_selffold::selffold::{analyze_all, analyze_all_unchecked, forward_force};
use origami_selffold::sim::{fold_path, forward_force_along_path, propagate_fold, reconstruct_3d};
use origami_selffold::vertex::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn cli_report(args: &[&str]) -> Result<AnalysisReport, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_origami-selffold"))
        .args(args)
        .env_remove("ORIGAMI_SELFFOLD_TOLERANCE")
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!(
            "exit {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ));
    }
    AnalysisReport::from_json(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()));
    }
    Ok(())
}

/// Mode tangent rescaled to match the reference vector's scale and sign.
fn matched(modes: &[GlobalMode], reference: &[f64]) -> Option<Vec<f64>> {
    let m = modes.iter().find(|m| parallel(&m.tangent, reference, 1e-9))?;
    let k = (0..reference.len())
        .max_by(|&a, &b| reference[a].abs().partial_cmp(&reference[b].abs()).unwrap())
        .unwrap();
    let s = reference[k] / m.tangent.components[k];
    Some(m.tangent.components.iter().map(|x| x * s).collect())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = cli_report(&["analyze", "--miura", "60", "--grid", "3x3", "--json"])?;
    let p = 0.5;
    let r = miura_reference(p);
    let std_id = report
        .modes
        .iter()
        .find(|m| parallel(&TangentVector::new(m.tangent.clone()), &r.standard, 1e-9))
        .map(|m| m.id)
        .ok_or("standard mode not among the reported modes")?;
    let v = report.verdicts.iter().find(|v| v.mode == std_id).ok_or("no verdict for standard mode")?;
    ensure!(!v.uniquely_self_foldable, "standard mode reported uniquely self-foldable");
    ensure!(v.span_residual < 1e-8, "span residual {:e}", v.span_residual);

    let pattern = generate_miura(deg(60.0), 1.0, 1.0, 3, 3).map_err(|e| e.to_string())?;
    let modes = enumerate_modes_general(&pattern).map_err(|e| e.to_string())?;
    let basis: Vec<Vec<f64>> = [&r.row_upper, &r.row_lower, &r.column_left, &r.column_right]
        .iter()
        .map(|b| matched(&modes, b).ok_or("reference direction is not a branch tangent"))
        .collect::<Result<_, _>>()?;
    let standard = matched(&modes, &r.standard).ok_or("standard direction is not a branch tangent")?;
    let (coef, resid) = lstsq(&basis, &standard);
    let want = [-p, p, 1.0, -1.0];
    let err = coef.iter().zip(want).map(|(c, w)| (c - w).abs()).fold(0.0, f64::max);
    ensure!(err < 1e-10 && resid < 1e-10, "coefficients {coef:?}, residual {resid:e}");
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "Miura 60 3x3 standard mode not uniquely self-foldable, span residual {:.1e}, coefficients {:?}, {} branches",
        v.span_residual,
        coef.iter().map(|c| (c * 1e12).round() / 1e12).collect::<Vec<_>>(),
        modes.len()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let report = cli_report(&["analyze", "--chicken-wire", "60", "--grid", "3x3", "--json"])?;
    ensure!(!report.verdicts.is_empty(), "no verdicts");
    for v in &report.verdicts {
        ensure!(!v.uniquely_self_foldable, "mode {} reported uniquely self-foldable", v.mode);
        ensure!(v.span_residual < 1e-8, "mode {} span residual {:e}", v.mode, v.span_residual);
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("Chicken Wire 60 3x3: all {} modes not uniquely self-foldable", report.mode_count))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let tile = QuadTile::from_degrees([50.0, 110.0, 130.0, 70.0]).map_err(|e| e.to_string())?;
    let p = generate_rotationally_symmetric(&tile, 3, 3).map_err(|e| e.to_string())?;
    let ff = enumerate_modes_flat_foldable(&p).map_err(|e| e.to_string())?;
    let general = enumerate_modes_general(&p).map_err(|e| e.to_string())?;
    ensure!(ff.len() == 2 && general.len() == 2, "mode counts {} and {}", ff.len(), general.len());
    for m in &ff {
        ensure!(
            general.iter().any(|g| parallel(&g.tangent, &m.tangent.components, 1e-6)),
            "enumerators disagree"
        );
    }
    let a = analyze_all(&p).map_err(|e| e.to_string())?;
    let mut min_forward = f64::INFINITY;
    for (k, v) in a.verdicts.iter().enumerate() {
        ensure!(v.uniquely_self_foldable, "mode {} not uniquely self-foldable", k + 1);
        let f = v.driving_force.as_ref().ok_or("missing force")?;
        let other = &a.modes[1 - k].tangent.normalized();
        let perp = forward_force(f, other).map_err(|e| e.to_string())?.abs();
        ensure!(perp < 1e-10, "mode {} force not perpendicular: {perp:e}", k + 1);
        let path = fold_path(&p, &a.modes[k], deg(60.0), 50).map_err(|e| e.to_string())?;
        let d = forward_force_along_path(f, &path).map_err(|e| e.to_string())?;
        let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
        ensure!(lo > 0.0, "mode {} forward force drops to {lo}", k + 1);
        min_forward = min_forward.min(lo);
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "tile (50,110,130,70) 3x3: 2 modes from both enumerators, both uniquely self-foldable, min forward force {min_forward:.4}"
    ))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let tile = QuadTile::from_degrees([50.0, 60.0, 120.0, 130.0]).map_err(|e| e.to_string())?;
    let p = generate_rotationally_symmetric(&tile, 3, 3).map_err(|e| e.to_string())?;
    let modes = enumerate_modes_general(&p).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for m in &modes {
        let path = fold_path(&p, m, deg(30.0), 20).map_err(|e| e.to_string())?;
        for pt in &path.points {
            worst = worst.max(global_closure_residual(&p, &pt.folding_angles));
        }
    }
    let a = analyze_all_unchecked(&p).map_err(|e| e.to_string())?;
    let verdicts: Vec<bool> = a.verdicts.iter().map(|v| v.uniquely_self_foldable).collect();
    let summary = format!(
        "tile (50,60,120,130) 3x3: {} branches {:?}, uniquely_self_foldable {:?}, max path closure {:.1e}",
        modes.len(),
        modes.iter().map(|m| m.mv_string()).collect::<Vec<_>>(),
        verdicts,
        worst
    );
    ensure!(worst < 1e-9, "{summary}");
    ensure!(modes.len() == 2, "expected exactly 2 branches; {summary}");
    ensure!(verdicts.iter().all(|v| *v), "{summary}");
    within(start, Duration::from_secs(120))?;
    Ok(summary)
}

fn criterion_5() -> Outcome {
    let tiles = [
        QuadTile::from_degrees([50.0, 110.0, 130.0, 70.0]).map_err(|e| e.to_string())?,
        QuadTile::from_corners([
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.8, 0.7),
            Point::new(0.15, 0.55),
        ])
        .map_err(|e| e.to_string())?,
    ];
    let mut cases = 0;
    for t in &tiles {
        for a in 1..=4 {
            for b in 1..=4 {
                let p = generate_rotationally_symmetric(t, a + 1, b + 1).map_err(|e| e.to_string())?;
                let d = tangent_space_dim(&p).map_err(|e| e.to_string())?;
                ensure!(d == a + b, "{a}x{b} interior vertices: dimension {d}");
                cases += 1;
            }
        }
    }
    Ok(format!("tangent space dimension a+b on {cases} interior-vertex grids"))
}

fn criterion_6() -> Outcome {
    let geometries = [
        [50.0, 70.0, 130.0, 110.0],
        [120.0, 60.0, 60.0, 120.0],
        [105.0, 75.0, 75.0, 105.0],
        [40.0, 100.0, 140.0, 80.0],
        [65.0, 35.0, 115.0, 145.0],
    ];
    let mut worst_diff = 0.0f64;
    let mut worst_closure = 0.0f64;
    let mut samples = 0;
    for deg_angles in geometries {
        let g = VertexGeometry::from_degrees(deg_angles).map_err(|e| e.to_string())?;
        let modes = local_modes(&g).map_err(|e| e.to_string())?;
        let m = &modes[0];
        for i in 0..100 {
            let rho = -PI + 0.1 + (2.0 * PI - 0.2) * (i as f64 + 0.5) / 100.0;
            let general = transfer_general(&g, m, rho).map_err(|e| format!("{deg_angles:?} at {rho}: {e}"))?;
            let mut closed = [rho; 4];
            for k in 1..4 {
                closed[k] = transfer_flat_foldable(m.multipliers[k] / m.multipliers[0], rho).map_err(|e| e.to_string())?;
                worst_diff = worst_diff.max((closed[k] - general[k - 1]).abs());
            }
            worst_closure = worst_closure.max(vertex_closure_residual(&g, &closed));
            worst_closure = worst_closure.max(vertex_closure_residual(&g, &[rho, general[0], general[1], general[2]]));
            samples += 1;
        }
    }
    ensure!(worst_diff < 1e-9, "transfer disagreement {worst_diff:e}");
    ensure!(worst_closure < 1e-10, "closure residual {worst_closure:e}");
    Ok(format!(
        "{samples} samples: max transfer difference {worst_diff:.1e}, max closure {worst_closure:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let tile = QuadTile::from_degrees([50.0, 110.0, 130.0, 70.0]).map_err(|e| e.to_string())?;
    let p = generate_rotationally_symmetric(&tile, 3, 3).map_err(|e| e.to_string())?;
    let (pp, q) = vertex_multipliers(&p.stars()[0].geometry).map_err(|e| e.to_string())?;
    let table = multiplier_ratio_table(pp, q);
    let n = loop_product_solutions(&table, 1e-12).len();
    ensure!(n == 2, "{n} of 16 combinations give a unit loop product (p = {pp}, q = {q})");
    // the same count on the pattern's own central face
    let centre = p
        .faces()
        .iter()
        .position(|f| f.iter().all(|v| p.vertices()[*v].interior))
        .ok_or("no interior face")?;
    let face = face_ratio_table(&p, centre).map_err(|e| e.to_string())?;
    let m = loop_product_solutions(&face, 1e-12).len();
    ensure!(m == 2, "{m} solutions on the pattern face");
    Ok(format!("p = {pp:.6}, q = {q:.6}: 2 of 16 combinations give loop product 1"))
}

fn criterion_8() -> Outcome {
    let t = |a| QuadTile::from_degrees(a).unwrap();
    let patterns = vec![
        generate_rotationally_symmetric(&t([50.0, 110.0, 130.0, 70.0]), 3, 3).unwrap(),
        generate_rotationally_symmetric(&t([50.0, 110.0, 130.0, 70.0]), 4, 5).unwrap(),
        generate_rotationally_symmetric(&t([50.0, 60.0, 120.0, 130.0]), 3, 3).unwrap(),
        generate_rotationally_symmetric(&t([65.0, 95.0, 115.0, 85.0]), 3, 4).unwrap(),
        generate_miura(deg(60.0), 1.0, 1.0, 3, 3).unwrap(),
        generate_miura(deg(45.0), 1.0, 2.0, 4, 3).unwrap(),
        generate_chicken_wire(deg(60.0), 2.0, 1.0, 3, 3).unwrap(),
        generate_chicken_wire(deg(75.0), 2.0, 1.0, 2, 4).unwrap(),
    ];
    for (i, p) in patterns.iter().enumerate() {
        let text = export_fold(p, None, None).unwrap().to_json().unwrap();
        let back = import_fold(&FoldDocument::from_json(&text).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(patterns_isomorphic(p, &back, 1e-9), "pattern {i} does not round-trip");
    }

    let mut vertices = 0;
    for p in &patterns {
        for s in p.stars() {
            let Ok(modes) = local_modes(&s.geometry) else { continue };
            for m in &modes {
                if m.multipliers.contains(&0.0) {
                    continue;
                }
                ensure!(birds_foot_check(&s.geometry, &m.assignment()), "mode assignment is not a bird's foot");
                let d = m.multipliers.iter().position(|x| x.abs() == 1.0).unwrap();
                let a = transfer_general_from(&s.geometry, m, d, 0.4).map_err(|e| e.to_string())?;
                let b = transfer_general_from(&s.geometry, m, d, -0.4).map_err(|e| e.to_string())?;
                ensure!(a.iter().zip(b).all(|(x, y)| (x + y).abs() < 1e-9), "transfer not antisymmetric");
            }
            vertices += 1;
        }
    }

    let mut worst = 0.0f64;
    let mut exports = 0;
    for p in &patterns {
        for m in enumerate_modes(p).map_err(|e| e.to_string())? {
            for d in [20.0, -35.0, 50.0] {
                let Ok(pt) = propagate_fold(p, &m, deg(d)) else { continue };
                let state = reconstruct_3d(p, &pt).map_err(|e| e.to_string())?;
                export_fold(p, Some(&m), Some(&pt)).map_err(|e| e.to_string())?;
                worst = worst.max(state.max_deviation);
                exports += 1;
            }
        }
    }
    ensure!(worst < 1e-8, "placement deviation {worst:e}");
    Ok(format!(
        "{} patterns round-trip, {vertices} vertices consistent, {exports} folded exports with max placement deviation {worst:.1e}",
        patterns.len()
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| format!("criterion_{n}").contains(x.as_str())) {
            continue;
        }
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(msg) => println!("[PASS] criterion {n}: {msg}"),
            Err(msg) => {
                println!("[FAIL] criterion {n}: {msg}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
