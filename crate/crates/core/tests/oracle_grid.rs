mod common;

use common::*;
use kwidth::graphic::width2;
use kwidth::oracle::*;
use kwidth::Error;

#[test]
fn circle_at_512() {
    let (w, scan) = grid_width2(&unit_circle(256), (512, 512), 2).unwrap();
    assert_eq!(w, 2);
    assert_eq!(scan.width_multiset(), vec![0, 2]);
    assert!(scan.confidence > 1.0 - MAX_UNCERTAIN);
}

#[test]
fn trefoil_at_1024() {
    let pc = plane(r#"{"kind":"torus_2braid","q":3}"#);
    let (w, scan) = grid_width2(&pc, (1024, 1024), 2).unwrap();
    assert_eq!(w, 10);
    assert_eq!(scan.width_multiset(), vec![0, 2, 2, 2, 4]);
}

#[test]
fn figure_eight_matches_arrangement() {
    let pc = plane(r#"{"kind":"figure_eight"}"#);
    let (w, scan) = grid_width2(&pc, (1024, 1024), 2).unwrap();
    let a = width2(&pc).unwrap();
    assert_eq!(w, a.w2);
    assert_eq!(scan.width_multiset(), a.face_widths);
}

#[test]
fn coarse_grid_is_low_confidence() {
    let pc = plane(r#"{"kind":"rose","petals":7}"#);
    assert!(matches!(grid_width2(&pc, (16, 16), 0), Err(Error::LowConfidence { .. })));
    let scan = grid_scan(&pc, (16, 16), 0).unwrap();
    assert!(scan.confidence < 1.0 - MAX_UNCERTAIN);
}

#[test]
fn invalid_parameters() {
    let pc = unit_circle(256);
    assert!(grid_scan(&pc, (2, 64), 0).is_err());
    assert!(grid_scan(&pc, (64, 64), 9).is_err());
}

#[test]
fn pgm_export() {
    let (_, scan) = grid_width2(&unit_circle(256), (64, 48), 2).unwrap();
    let mut buf = Vec::new();
    scan.write_pgm(&mut buf).unwrap();
    let header = b"P5\n64 48\n255\n";
    assert!(buf.starts_with(header));
    assert_eq!(buf.len(), header.len() + 64 * 48);
}

#[test]
fn scan_serializes_without_cells() {
    let (_, scan) = grid_width2(&unit_circle(256), (128, 128), 1).unwrap();
    let v = serde_json::to_value(&scan).unwrap();
    assert!(v.get("counts").is_none());
    assert_eq!(v["estimate"], 2);
}
