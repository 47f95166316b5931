mod common;

use std::f64::consts::PI;

use common::*;
use kwidth::curve_model::project_xy;
use kwidth::generators::*;
use kwidth::Error;

#[test]
fn unit_circle_spec() {
    let c = gen(r#"{"kind":"circle","radius":1.0}"#);
    assert_eq!(c.components.len(), 1);
    assert_eq!(c.components[0].points.len(), 256);
    for p in &c.components[0].points {
        assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-12);
        assert_eq!(p[2], 0.0);
    }
}

#[test]
fn trefoil_spec_is_positively_curved_with_winding_two() {
    let pc = project_xy(&gen(r#"{"kind":"torus_2braid","q":3}"#)).unwrap();
    let comp = &pc.components[0];
    assert!(comp.curvature.iter().all(|&k| k > 0.0));
    let turning: f64 = (0..comp.len())
        .map(|j| {
            let (a, b) = (comp.tangents[j], comp.tangents[(j + 1) % comp.len()]);
            (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1])
        })
        .sum();
    assert!((turning - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn bridge_embedding_has_two_maxima() {
    let c = gen(r#"{"kind":"bridge_embedding"}"#);
    let z: Vec<f64> = c.components[0].points.iter().map(|p| p[2]).collect();
    let n = z.len();
    let maxima = (0..n).filter(|&j| z[j] > z[(j + n - 1) % n] && z[j] > z[(j + 1) % n]).count();
    let minima = (0..n).filter(|&j| z[j] < z[(j + n - 1) % n] && z[j] < z[(j + 1) % n]).count();
    assert_eq!((maxima, minima), (2, 2));
}

#[test]
fn braid_closures() {
    assert_eq!(braid_to_curve("s1 s1 s1", 2, 0.05).unwrap().components.len(), 1);
    assert_eq!(braid_to_curve("s1 s1", 2, 0.05).unwrap().components.len(), 2);
    assert_eq!(braid_to_curve("", 2, 0.05).unwrap().components.len(), 2);
    assert_eq!(braid_to_curve("s1 s2", 3, 0.05).unwrap().components.len(), 1);
}

#[test]
fn malformed_words() {
    for (w, n) in [("s0", 2), ("s2", 2), ("x1", 2), ("s1", 1), ("s", 2)] {
        assert!(matches!(parse_braid_word(w, n), Err(Error::Parse(_))), "{w}");
    }
    assert!(parse_braid_word("s1 s2^-1", 3).is_err());
    let letters = parse_braid_word("s1 S2 s1", 3).unwrap();
    assert_eq!(letters.len(), 3);
    assert!(!letters[1].positive);
    assert_eq!(letters[1].position, 1);
}

#[test]
fn braid_word_with_trefoil_letters_matches_torus_spec() {
    let a = project_xy(&braid_to_curve("s1 s1 s1", 2, 0.05).unwrap()).unwrap();
    let w = kwidth::graphic::width2(&a).unwrap();
    assert_eq!(w.w2, 10);
}

#[test]
fn positivity_flags() {
    assert!(spec(r#"{"kind":"torus_2braid","q":3}"#).is_positive_braid());
    assert!(spec(r#"{"kind":"hopf"}"#).is_positive_braid());
    assert!(!spec(r#"{"kind":"circle"}"#).is_positive_braid());
    // inverse letters still sit in braid position over a convex core
    assert!(spec(r#"{"kind":"braid_word","word":"S1 S1 S1","strands":2}"#).is_positive_braid());
    let pc = project_xy(&gen(r#"{"kind":"braid_word","word":"S1 S1 S1","strands":2}"#)).unwrap();
    assert!(pc.components[0].curvature.iter().all(|&k| k > 0.0));
}

#[test]
fn spec_validation() {
    for bad in [
        r#"{"kind":"circle","samples":8}"#,
        r#"{"kind":"torus_2braid","q":3,"epsilon":0.5}"#,
        r#"{"kind":"rose","petals":0}"#,
    ] {
        assert!(generate(&spec(bad)).is_err(), "{bad}");
    }
    assert!(serde_json::from_str::<GeneratorSpec>(r#"{"kind":"circle","bogus":1}"#).is_err());
}

#[test]
fn corpus_names_are_unique() {
    let names: Vec<String> = corpus().iter().map(|s| s.name()).collect();
    let mut dedup = names.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(names.len(), dedup.len());
    assert!(names.len() >= 18);
}

#[test]
fn generation_is_deterministic() {
    let a = gen(r#"{"kind":"torus_2braid","q":5,"seed":4}"#);
    let b = gen(r#"{"kind":"torus_2braid","q":5,"seed":4}"#);
    assert_eq!(a.components[0].points, b.components[0].points);
}

#[test]
fn analytic_derivatives_match_differences() {
    for (name, curve) in corpus_curves() {
        for comp in &curve.components {
            let h = comp.analytic.as_ref().unwrap();
            for k in 0..16 {
                let u = (k as f64 + 0.3) / 16.0;
                let e = 1e-6;
                let [_, d1, _] = h.param.eval(u);
                let [p1, _, _] = h.param.eval(u + e);
                let [p0, _, _] = h.param.eval(u - e);
                for i in 0..3 {
                    let fd = (p1[i] - p0[i]) / (2.0 * e);
                    assert!((fd - d1[i]).abs() < 1e-5 * d1[i].abs().max(1.0), "{name}");
                }
            }
        }
    }
}
