mod common;

use common::*;
use origami_selffold::configspace::*;
use origami_selffold::pattern::*;
use origami_selffold::vertex::{birds_foot_check, Assignment};
use origami_selffold::Error;

fn generic(rows: usize, cols: usize) -> CreasePattern {
    let t = QuadTile::from_degrees([50.0, 110.0, 130.0, 70.0]).unwrap();
    generate_rotationally_symmetric(&t, rows, cols).unwrap()
}

fn miura() -> CreasePattern {
    generate_miura(deg(60.0), 1.0, 1.0, 3, 3).unwrap()
}

fn same_branch_set(a: &[GlobalMode], b: &[GlobalMode]) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|m| b.iter().any(|n| parallel(&m.tangent, &n.tangent.components, 1e-6)))
}

#[test]
fn single_vertex_constraints() {
    let p = generic(2, 2);
    let a = flat_constraint_matrix(&p);
    assert_eq!(a.shape(), (2, 4));
    assert_eq!(tangent_space_dim(&p).unwrap(), 2);
}

#[test]
fn miura_constraints() {
    let p = miura();
    let a = flat_constraint_matrix(&p);
    assert_eq!(a.shape(), (8, 12));
    assert_eq!(tangent_space_dim(&p).unwrap(), 4);
}

#[test]
fn four_by_five_dimension() {
    assert_eq!(tangent_space_dim(&generic(4, 5)).unwrap(), 7);
}

#[test]
fn flat_foldable_enumerator_counts() {
    for (r, c) in [(2, 2), (3, 3), (4, 4), (3, 4)] {
        let modes = enumerate_modes_flat_foldable(&generic(r, c)).unwrap();
        assert_eq!(modes.len(), 2, "{r}x{c}");
    }
}

#[test]
fn enumerators_agree_on_generic_patterns() {
    for (r, c) in [(2, 2), (3, 3), (4, 4)] {
        let p = generic(r, c);
        let a = enumerate_modes_flat_foldable(&p).unwrap();
        let b = enumerate_modes_general(&p).unwrap();
        assert!(same_branch_set(&a, &b), "{r}x{c}");
    }
}

#[test]
fn brute_force_loop_products_four_by_four() {
    // every one of the 2^9 mode assignments checked against every interior face
    let p = generic(4, 4);
    let star_of = |v: usize| p.stars().iter().position(|s| s.vertex == v);
    let faces: Vec<(usize, Vec<usize>)> = (0..p.faces().len())
        .filter_map(|f| {
            let idx: Option<Vec<usize>> = p.faces()[f].iter().map(|v| star_of(*v)).collect();
            idx.map(|i| (f, i))
        })
        .collect();
    assert_eq!(faces.len(), 4);
    let tables: Vec<[[f64; 2]; 4]> = faces.iter().map(|(f, _)| face_ratio_table(&p, *f).unwrap()).collect();
    let mut survivors = Vec::new();
    for mask in 0u32..512 {
        let ok = faces.iter().zip(&tables).all(|((_, stars), table)| {
            let prod: f64 = (0..4).map(|k| table[k][((mask >> stars[k]) & 1) as usize]).product();
            (prod - 1.0).abs() < 1e-9
        });
        if ok {
            survivors.push(mask);
        }
    }
    assert_eq!(survivors.len(), 2);
    let modes = enumerate_modes_flat_foldable(&p).unwrap();
    for m in &modes {
        let mask = m.vertex_modes.iter().enumerate().fold(0u32, |acc, (k, l)| acc | (((*l as u32) - 1) << k));
        assert!(survivors.contains(&mask));
    }
}

#[test]
fn miura_branch_set() {
    let p = miura();
    let modes = enumerate_modes_general(&p).unwrap();
    let r = miura_reference(0.5);
    for want in [&r.standard, &r.row_upper, &r.row_lower] {
        assert!(modes.iter().any(|m| parallel(&m.tangent, want, 1e-9)));
    }
    // the oracle also finds the zig-zag column folds
    for want in [&r.column_left, &r.column_right] {
        assert!(modes.iter().any(|m| parallel(&m.tangent, want, 1e-9)));
    }
    assert_eq!(modes.len(), 5);
}

#[test]
fn miura_flat_foldable_enumerator_refuses() {
    assert!(matches!(
        enumerate_modes_flat_foldable(&miura()),
        Err(Error::DegenerateMultiplier { .. })
    ));
}

#[test]
fn non_flat_foldable_enumerator_refuses() {
    let t = QuadTile::from_degrees([50.0, 60.0, 120.0, 130.0]).unwrap();
    let p = generate_rotationally_symmetric(&t, 3, 3).unwrap();
    assert!(matches!(enumerate_modes_flat_foldable(&p), Err(Error::NotFlatFoldable)));
}

#[test]
fn tangents_lie_in_kernel() {
    let pats = [generic(3, 3), generic(4, 4), miura(), generate_chicken_wire(deg(60.0), 2.0, 1.0, 3, 3).unwrap()];
    for p in &pats {
        let a = flat_constraint_matrix(p);
        for m in enumerate_modes(p).unwrap() {
            let t = m.tangent.to_dvector();
            assert!((&a * &t).norm() < 1e-10 * t.norm());
            assert!(in_kernel(p, &m.tangent));
        }
    }
}

#[test]
fn valid_tangents_generic() {
    let p = generic(3, 3);
    let v = valid_tangents_flat(&p).unwrap();
    assert_eq!(v.len(), 4);
    for t in &v {
        assert!((t.norm() - 1.0).abs() < 1e-12);
    }
    assert!(v.iter().any(|t| v.iter().any(|u| (t.dot(u) + 1.0).abs() < 1e-12)));
}

#[test]
fn valid_tangents_single_vertex() {
    assert_eq!(valid_tangents_flat(&generic(2, 2)).unwrap().len(), 4);
}

#[test]
fn surrounding_of_generic_mode() {
    let p = generic(3, 3);
    let modes = enumerate_modes(&p).unwrap();
    let valid = valid_tangents_of(&modes);
    let s = surrounding_tangents(&valid, &modes[0].tangent.normalized()).unwrap();
    assert_eq!(s.len(), 2);
    for t in &s {
        assert!(parallel(t, &modes[1].tangent.components, 1e-12));
    }
    let single = valid_tangents_of(&modes[..1]);
    assert!(surrounding_tangents(&single, &modes[0].tangent).unwrap().is_empty());
}

#[test]
fn surrounding_of_miura_standard() {
    let p = miura();
    let modes = enumerate_modes(&p).unwrap();
    let valid = valid_tangents_of(&modes);
    let r = miura_reference(0.5);
    let s = surrounding_tangents(&valid, &TangentVector::new(unit(&r.standard))).unwrap();
    assert_eq!(s.len(), valid.len() - 2);
    for want in [&r.row_upper, &r.row_lower] {
        assert!(s.iter().any(|t| parallel(t, want, 1e-9)));
    }
}

#[test]
fn surrounding_rejects_invalid_direction() {
    let p = generic(3, 3);
    let valid = valid_tangents_flat(&p).unwrap();
    let bogus = TangentVector::new(vec![1.0; 12]);
    assert!(matches!(surrounding_tangents(&valid, &bogus), Err(Error::DirectionNotValid)));
}

#[test]
fn mode_assignments_are_birds_feet() {
    let pats = [generic(3, 3), miura(), generate_chicken_wire(deg(60.0), 2.0, 1.0, 3, 3).unwrap()];
    for p in &pats {
        for m in enumerate_modes(p).unwrap() {
            for (k, s) in p.stars().iter().enumerate() {
                let local = m.local_multipliers(p, k);
                if local.iter().any(|x| *x == 0.0) {
                    continue;
                }
                let mv = local.map(|x| Assignment::from_value(x, 0.0));
                assert!(birds_foot_check(&s.geometry, &mv), "{:?}", m.mv_string());
            }
        }
    }
}

#[test]
fn single_flip_breaks_generic_modes() {
    let p = generic(3, 3);
    let modes = enumerate_modes_general(&p).unwrap();
    let labels: Vec<Vec<u8>> = modes.iter().map(|m| m.vertex_modes.clone()).collect();
    for l in &labels {
        for k in 0..l.len() {
            let mut flipped = l.clone();
            flipped[k] = 3 - flipped[k];
            assert!(!labels.contains(&flipped));
        }
    }
}

#[test]
fn standard_mode_decomposition() {
    let r = miura_reference(0.5);
    let (coef, resid) = lstsq(
        &[r.row_upper.clone(), r.row_lower.clone(), r.column_left.clone(), r.column_right.clone()],
        &r.standard,
    );
    for (c, want) in coef.iter().zip([-0.5, 0.5, 1.0, -1.0]) {
        assert!((c - want).abs() < 1e-10);
    }
    assert!(resid < 1e-12);
}

#[test]
fn chicken_wire_standard_mode_decomposes() {
    let p = generate_chicken_wire(deg(60.0), 2.0, 1.0, 3, 3).unwrap();
    let modes = enumerate_modes(&p).unwrap();
    let basis: Vec<Vec<f64>> = modes[1..].iter().map(|m| m.tangent.components.clone()).collect();
    let (_, resid) = lstsq(&basis, &modes[0].tangent.components);
    assert!(resid < 1e-10);
}

#[test]
fn ratio_table_two_solutions() {
    let (pp, q) = origami_selffold::vertex::folding_multipliers(deg(50.0), deg(70.0)).unwrap();
    let t = multiplier_ratio_table(pp, q);
    assert_eq!(loop_product_solutions(&t, 1e-12).len(), 2);
}

#[test]
fn too_many_vertices() {
    let p = generic(6, 7);
    assert!(p.stars().len() > ENUMERATION_CAP);
    assert!(matches!(enumerate_modes_general(&p), Err(Error::TooManyVertices(_))));
    assert_eq!(enumerate_modes(&p).unwrap().len(), 2);
}

#[test]
fn confirm_branch_follows_mode() {
    let p = generic(3, 3);
    for m in enumerate_modes(&p).unwrap() {
        let angles = confirm_branch(&p, &m).expect("mode folds");
        assert!(global_closure_residual(&p, &angles) < 1e-9);
    }
}
