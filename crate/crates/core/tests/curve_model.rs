mod common;

use std::f64::consts::PI;

use common::*;
use kwidth::curve_model::*;
use kwidth::features::total_curvature;
use kwidth::graphic::width2;
use kwidth::Error;

fn stadium(n: usize) -> PlaneCurve {
    let side = 2.0;
    let per = 2.0 * side + 2.0 * PI;
    let pts = (0..n)
        .map(|j| {
            let s = per * j as f64 / n as f64;
            if s < side {
                [-1.0 + s, -1.0]
            } else if s < side + PI {
                let a = -PI / 2.0 + (s - side);
                [1.0 + a.cos(), a.sin()]
            } else if s < 2.0 * side + PI {
                [1.0 - (s - side - PI), 1.0]
            } else {
                let a = PI / 2.0 + (s - 2.0 * side - PI);
                [-1.0 + a.cos(), a.sin()]
            }
        })
        .collect();
    PlaneCurve::from_point_components(vec![pts]).unwrap()
}

#[test]
fn planar_circle_projects_to_itself() {
    let pts: Vec<[f64; 3]> = (0..256)
        .map(|j| {
            let u = 2.0 * PI * j as f64 / 256.0;
            [u.cos(), u.sin(), 0.0]
        })
        .collect();
    let curve = ParamCurve3::from_points("circle", vec![pts.clone()]).unwrap();
    let pc = project_xy(&curve).unwrap();
    for (p, q) in pc.components[0].points.iter().zip(&pts) {
        assert_eq!(*p, [q[0], q[1]]);
    }
    for k in &pc.components[0].curvature {
        assert!((k - 1.0).abs() < 1e-3);
    }
    let pc = project_xy(&gen(r#"{"kind":"circle"}"#)).unwrap();
    assert!(pc.components[0].curvature.iter().all(|k| (k - 1.0).abs() < 1e-12));
}

#[test]
fn trefoil_braid_projects_with_winding_two() {
    let pc = plane(r#"{"kind":"torus_2braid","q":3}"#);
    let x = total_curvature(&pc);
    assert!((x - 4.0 * PI).abs() < 1e-3);
    let turn: f64 = pc.components[0].curvature.iter().zip(&pc.components[0].speed).map(|(k, s)| k * s).sum::<f64>()
        * pc.components[0].du;
    assert!((turn / (2.0 * PI) - 2.0).abs() < 1e-3);
}

#[test]
fn vertical_segment_is_degenerate() {
    let mut pts: Vec<[f64; 3]> = (0..128)
        .map(|j| {
            let u = 2.0 * PI * j as f64 / 128.0;
            [u.cos(), u.sin(), 0.0]
        })
        .collect();
    pts.insert(10, [pts[9][0], pts[9][1], 0.5]);
    let curve = ParamCurve3::from_points("spike", vec![pts]).unwrap();
    assert!(matches!(project_xy(&curve), Err(Error::DegenerateProjection(_))));
}

#[test]
fn circle_is_generic() {
    let r = check_generic(&unit_circle(256), &Tolerances::default());
    assert!(r.is_clear(), "{r:?}");
}

#[test]
fn trefoil_braid_is_generic() {
    let r = check_generic(&plane(r#"{"kind":"torus_2braid","q":3}"#), &Tolerances::default());
    assert!(r.is_clear(), "{r:?}");
}

#[test]
fn concentric_circles_are_flagged() {
    let pc = PlaneCurve::from_point_components(vec![circle_at(512, [0.0, 0.0], 1.0), circle_at(512, [0.0, 0.0], 1.0 + 1e-12)]).unwrap();
    let r = check_generic(&pc, &Tolerances::default());
    assert!(!r.is_clear());
    assert!(r.near_triple_tangency_found || r.non_transverse_double_point_found);
}

#[test]
fn generic_curve_is_unchanged_by_perturbation() {
    let pc = plane(r#"{"kind":"figure_eight"}"#);
    let out = perturb_to_generic(&pc, 3, &Tolerances::default()).unwrap();
    assert_eq!(out.components[0].points, pc.components[0].points);
}

#[test]
fn stadium_is_repaired() {
    let pc = stadium(1200);
    let tol = Tolerances::default();
    assert!(!check_generic(&pc, &tol).is_clear());
    let out = perturb_to_generic(&pc, 7, &tol).unwrap();
    assert!(check_generic(&out, &tol).is_clear());
    assert!(width2(&out).is_ok());
    let again = perturb_to_generic(&pc, 7, &tol).unwrap();
    assert_eq!(out.components[0].points, again.components[0].points);
}

#[test]
fn perturbation_rejects_short_curves() {
    let pc = PlaneCurve {
        components: vec![PlaneComponent {
            points: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            tangents: vec![[1.0, 0.0]; 3],
            curvature: vec![1.0; 3],
            speed: vec![1.0; 3],
            du: 1.0 / 3.0,
        }],
    };
    assert!(matches!(
        perturb_to_generic(&pc, 1, &Tolerances::default()),
        Err(Error::PerturbationFailed { attempts: 0 })
    ));
}

#[test]
fn width1_tilted_circle() {
    assert_eq!(width1(&gen(r#"{"kind":"circle","tilt":0.4}"#)).unwrap(), 2);
}

#[test]
fn width1_bridge_trefoil() {
    let curve = gen(r#"{"kind":"bridge_embedding"}"#);
    assert_eq!(width1(&curve).unwrap(), 8);
    // independent gap count on a dense resampling
    let h = curve.components[0].analytic.as_ref().unwrap();
    let n = 20_000;
    let z: Vec<f64> = (0..n).map(|j| h.param.eval((j as f64 + 0.31) / n as f64)[0][2]).collect();
    let mut crit: Vec<f64> = (0..n)
        .filter(|&j| {
            let (a, b, c) = (z[(j + n - 1) % n], z[j], z[(j + 1) % n]);
            (b > a && b > c) || (b < a && b < c)
        })
        .map(|j| z[j])
        .collect();
    crit.sort_by(f64::total_cmp);
    assert_eq!(crit.len(), 4);
    let total: usize = crit
        .windows(2)
        .map(|w| {
            let level = 0.5 * (w[0] + w[1]);
            (0..n).filter(|&j| (z[j] < level) != (z[(j + 1) % n] < level)).count()
        })
        .sum();
    assert_eq!(total, 8);
}

#[test]
fn width1_planar_curve_is_degenerate() {
    assert!(matches!(width1(&gen(r#"{"kind":"circle"}"#)), Err(Error::DegenerateHeights(_))));
}

#[test]
fn similarity_scales_curvature() {
    let pc = plane(r#"{"kind":"figure_eight"}"#);
    let moved = pc.similarity(0.7, 3.5, [2.0, -1.0]);
    let (a, b) = (&pc.components[0], &moved.components[0]);
    for j in 0..a.len() {
        assert!((a.curvature[j] - 3.5 * b.curvature[j]).abs() < 1e-9 * a.curvature[j].abs().max(1.0));
        assert!((3.5 * a.speed[j] - b.speed[j]).abs() < 1e-9 * b.speed[j]);
    }
    assert!((total_curvature(&pc) - total_curvature(&moved)).abs() < 1e-9);
}

#[test]
fn curve_json_round_trip() {
    let curve = gen(r#"{"kind":"hopf"}"#);
    let text = curve.to_json_string().unwrap();
    let back = ParamCurve3::from_json_str(&text).unwrap();
    assert_eq!(back.components.len(), 2);
    for (a, b) in curve.components.iter().zip(&back.components) {
        assert_eq!(a.points, b.points);
        assert!(b.analytic.is_some());
    }
    assert!(ParamCurve3::from_json_str("{").is_err());
}

#[test]
fn bad_tolerances_are_rejected() {
    let tol = Tolerances {
        angle_min: 0.0,
        line_space_min: 1e-6,
    };
    assert!(tol.validate().is_err());
}
