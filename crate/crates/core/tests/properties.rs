mod common;

use std::f64::consts::PI;

use common::*;
use kwidth::curve_model::PlaneCurve;
use kwidth::features::fabricius_bjerre_check;
use kwidth::generators::{parse_braid_word, BraidLetter};
use kwidth::graphic::{analyze_graphic, line_intersections, width2, LineCoord};
use proptest::prelude::*;

fn sample_curves() -> Vec<(&'static str, PlaneCurve)> {
    vec![
        ("circle", unit_circle(256)),
        ("figure_eight", figure_eight(1024)),
        ("trefoil", plane(r#"{"kind":"torus_2braid","q":3}"#)),
        ("hopf", plane(r#"{"kind":"hopf"}"#)),
        ("rose3", plane(r#"{"kind":"rose","petals":3}"#)),
    ]
}

fn invariants(pc: &PlaneCurve) -> (u64, usize, usize, usize, usize) {
    let f = fabricius_bjerre_check(pc).unwrap();
    (width2(pc).unwrap().w2, f.c, f.i, f.t, f.s)
}

fn word(letters: &[BraidLetter]) -> String {
    letters
        .iter()
        .map(|l| format!("{}{}", if l.positive { 's' } else { 'S' }, l.position + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn similarity_preserves_invariants(
        which in 0usize..5,
        angle in 0.0..2.0 * PI,
        log_s in -3.0f64..3.0,
        tx in -50.0f64..50.0,
        ty in -50.0f64..50.0,
    ) {
        let curves = sample_curves();
        let (name, pc) = &curves[which];
        let moved = pc.similarity(angle, log_s.exp(), [tx, ty]);
        prop_assert_eq!(invariants(pc), invariants(&moved), "{}", name);
    }

    #[test]
    fn transverse_line_counts_are_even(which in 0usize..5, theta in 0.0..PI, t in -1.2f64..1.2) {
        let curves = sample_curves();
        let (_, pc) = &curves[which];
        let frame = pc.frame();
        let d = t * frame.radius + frame.center[0] * theta.cos() + frame.center[1] * theta.sin();
        if let Ok(n) = line_intersections(pc, LineCoord::new(theta, d)) {
            prop_assert_eq!(n % 2, 0);
        }
    }

    #[test]
    fn parse_round_trips(raw in prop::collection::vec((0usize..4, any::<bool>()), 0..12)) {
        let letters: Vec<BraidLetter> = raw.iter().map(|&(position, positive)| BraidLetter { position, positive }).collect();
        let text = word(&letters);
        prop_assert_eq!(parse_braid_word(&text, 5).unwrap(), letters);
    }

    #[test]
    fn out_of_range_letters_rejected(k in 5usize..50) {
        let text = format!("s1 s{}", k);
        prop_assert!(parse_braid_word(&text, 5).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn generated_braids_have_no_inflections(q in 1usize..8, eps in 0.02f64..0.2) {
        let pc = plane(&format!(r#"{{"kind":"torus_2braid","q":{q},"epsilon":{eps}}}"#));
        let f = fabricius_bjerre_check(&pc).unwrap();
        prop_assert_eq!((f.i, f.s), (0, 0));
        prop_assert_eq!(f.c, q);
        prop_assert!(f.fb_residual.is_zero());
    }

    #[test]
    fn adjacent_widths_differ_by_two_after_rotation(q in 1usize..6, angle in 0.0..2.0 * PI) {
        let pc = plane(&format!(r#"{{"kind":"torus_2braid","q":{q}}}"#)).similarity(angle, 1.0, [0.0, 0.0]);
        let (g, _) = analyze_graphic(&pc).unwrap();
        for e in &g.edges {
            let [a, b] = e.faces;
            prop_assert_eq!((g.faces[a].width as i64 - g.faces[b].width as i64).abs(), 2);
        }
    }
}
