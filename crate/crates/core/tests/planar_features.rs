mod common;

use std::f64::consts::PI;

use common::*;
use kwidth::curve_model::PlaneCurve;
use kwidth::features::*;

fn rose_sine(n: usize) -> PlaneCurve {
    PlaneCurve::from_point_components(vec![sampled(n, |u| {
        let r = 1.0 + 0.5 * (3.0 * u).sin();
        [r * u.cos(), r * u.sin()]
    })])
    .unwrap()
}

fn two_circles() -> PlaneCurve {
    PlaneCurve::from_point_components(vec![circle_at(512, [-3.0, 0.0], 1.0), circle_at(512, [3.0, 0.1], 0.8)]).unwrap()
}

#[test]
fn circle_has_no_features() {
    let c = unit_circle(256);
    assert!(find_crossings(&c).unwrap().is_empty());
    assert!(find_inflections(&c).unwrap().is_empty());
    assert!(find_bitangents(&c).unwrap().is_empty());
    let r = fabricius_bjerre_check(&c).unwrap();
    assert_eq!((r.c, r.i, r.t, r.s), (0, 0, 0, 0));
    assert!(r.fb_residual.is_zero());
}

#[test]
fn figure_eight_single_crossing_at_origin() {
    let f = figure_eight(1024);
    let xs = find_crossings(&f).unwrap();
    assert_eq!(xs.len(), 1);
    assert!(xs[0].point[0].abs() < 1e-9 && xs[0].point[1].abs() < 1e-9);
    assert!(xs[0].angle > 0.5);
    let poly: Vec<[f64; 2]> = (0..4096)
        .map(|j| {
            let u = 2.0 * PI * (j as f64 + 0.377) / 4096.0;
            [(2.0 * u).sin(), u.sin()]
        })
        .collect();
    assert_eq!(oracle::crossing_count(&[poly]), 1);
}

#[test]
fn crossings_match_polyline_oracle() {
    for (name, curve) in corpus_curves() {
        let pc = kwidth::curve_model::project_xy(&curve).unwrap();
        let dense = dense_xy(&curve, 4);
        assert_eq!(find_crossings(&pc).unwrap().len(), oracle::crossing_count(&dense), "{name}");
    }
}

#[test]
fn trefoil_braid_has_three_crossings() {
    let pc = plane(r#"{"kind":"torus_2braid","q":3}"#);
    assert_eq!(find_crossings(&pc).unwrap().len(), 3);
}

#[test]
fn sine_rose_has_six_inflections() {
    let d1 = |u: f64| {
        let (r, dr) = (1.0 + 0.5 * (3.0 * u).sin(), 1.5 * (3.0 * u).cos());
        [dr * u.cos() - r * u.sin(), dr * u.sin() + r * u.cos()]
    };
    let d2 = |u: f64| {
        let (r, dr, ddr) = (1.0 + 0.5 * (3.0 * u).sin(), 1.5 * (3.0 * u).cos(), -4.5 * (3.0 * u).sin());
        [
            ddr * u.cos() - 2.0 * dr * u.sin() - r * u.cos(),
            ddr * u.sin() + 2.0 * dr * u.cos() - r * u.sin(),
        ]
    };
    assert_eq!(oracle::inflection_count(d1, d2, 100_000), 6);
    assert_eq!(find_inflections(&rose_sine(1024)).unwrap().len(), 6);
}

#[test]
fn positive_braid_has_no_inflections() {
    for q in [1, 3, 5] {
        let pc = plane(&format!(r#"{{"kind":"torus_2braid","q":{q}}}"#));
        assert!(find_inflections(&pc).unwrap().is_empty());
    }
}

#[test]
fn figure_eight_bitangents_close_identity() {
    let r = fabricius_bjerre_check(&figure_eight(1024)).unwrap();
    assert_eq!((r.c, r.i), (1, 2));
    assert_eq!(r.t as i64 - r.s as i64, 2);
    assert!(r.fb_residual.is_zero());
}

#[test]
fn two_circles_have_four_bitangents() {
    let b = find_bitangents(&two_circles()).unwrap();
    assert_eq!(b.len(), 4);
    assert_eq!(b.iter().filter(|x| x.interior).count(), 2);
}

#[test]
fn total_curvature_circle() {
    assert!((total_curvature(&unit_circle(256)) - 2.0 * PI).abs() < 1e-6);
    let pc = plane(r#"{"kind":"circle"}"#);
    assert!((total_curvature(&pc) - 2.0 * PI).abs() < 1e-6);
}

#[test]
fn total_curvature_doubly_wound() {
    let pc = plane(r#"{"kind":"torus_2braid","q":1}"#);
    assert!((total_curvature(&pc) - 4.0 * PI).abs() < 1e-4);
}

#[test]
fn total_curvature_figure_eight_matches_quadrature() {
    let d1 = |u: f64| [2.0 * (2.0 * u).cos(), u.cos()];
    let d2 = |u: f64| [-4.0 * (2.0 * u).sin(), -u.sin()];
    let reference = oracle::total_curvature(d1, d2, &[0.0, PI, 2.0 * PI], 400);
    let x = total_curvature(&figure_eight(1024));
    assert!((x - reference).abs() < 1e-6, "{x} vs {reference}");
}

#[test]
fn five_braid_counts() {
    let r = fabricius_bjerre_check(&plane(r#"{"kind":"torus_2braid","q":5}"#)).unwrap();
    assert_eq!((r.c, r.i, r.t, r.s), (5, 0, 5, 0));
    assert!(r.fb_residual.is_zero());
}

#[test]
fn residual_vanishes_on_corpus() {
    for (name, pc) in corpus_planes() {
        let r = fabricius_bjerre_check(&pc).unwrap();
        assert!(r.fb_residual.is_zero(), "{name}: {:?}", r.fb_residual);
        assert_eq!(2 * r.c + r.i, 2 * (r.t - r.s), "{name}");
    }
}

#[test]
fn touching_circles_have_no_transverse_crossing() {
    // two unit circles touching at the origin
    let pc = PlaneCurve::from_point_components(vec![circle_at(512, [-1.0, 0.0], 1.0), circle_at(512, [1.0, 0.0], 1.0)]).unwrap();
    assert!(find_crossings(&pc).map_or(true, |v| v.is_empty()));
}

#[test]
fn exterior_crossing_diagnostic() {
    let xs = find_crossings(&figure_eight(1024)).unwrap();
    assert!(xs[0].exterior);
}
