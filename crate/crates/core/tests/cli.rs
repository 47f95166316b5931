use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kwidth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kwidth")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = kwidth(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analyze_trefoil() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "t.json", &["--kind", "torus_2braid", "--q", "3"]);
    let o = kwidth(&["analyze", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["width"]["w2"], 10);
    assert_eq!(v["features"]["fb_residual"]["numerator"], 0);
    assert_eq!(v["format_version"], 1);
}

#[test]
fn analyze_circle_all_bounds_hold() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "c.json", &["--kind", "circle"]);
    let out = dir.path().join("a.json");
    let o = kwidth(&["analyze", "--input", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["width"]["w2"], 2);
    for b in v["bounds"].as_array().unwrap() {
        assert_eq!(b["holds"], true, "{b}");
    }
}

fn concentric_file(dir: &Path) -> PathBuf {
    let ring = |r: f64| -> Vec<[f64; 3]> {
        (0..512)
            .map(|j| {
                let u = 2.0 * PI * j as f64 / 512.0;
                [r * u.cos(), r * u.sin(), 0.0]
            })
            .collect()
    };
    let doc = serde_json::json!({
        "name": "near_degenerate",
        "components": [{"points": ring(1.0)}, {"points": ring(1.0 + 1e-12)}],
    });
    let path = dir.join("near.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    path
}

#[test]
fn near_degenerate_exits_two_with_report() {
    let dir = TempDir::new().unwrap();
    let f = concentric_file(dir.path());
    let o = kwidth(&["analyze", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["near_triple_tangency_found"], true);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--perturb-seed"));
}

#[test]
fn graphic_svg_faces() {
    let dir = TempDir::new().unwrap();
    for (args, labels) in [
        (vec!["--kind", "torus_2braid", "--q", "3"], vec!["0", "2", "2", "2", "4"]),
        (vec!["--kind", "circle"], vec!["0", "2"]),
    ] {
        let f = generate(dir.path(), "g.json", &args);
        let svg = dir.path().join("g.svg");
        let o = kwidth(&["graphic-svg", "--input", f.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let text = std::fs::read_to_string(&svg).unwrap();
        assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
        let mut found: Vec<String> = text
            .split("class=\"face-label\"")
            .skip(1)
            .map(|s| s.split('>').nth(1).unwrap().split('<').next().unwrap().trim().to_string())
            .collect();
        found.sort();
        assert_eq!(found, labels);
    }
}

#[test]
fn oracle_agreement_and_pgm() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "t.json", &["--kind", "torus_2braid", "--q", "3"]);
    let pgm = dir.path().join("t.pgm");
    let o = kwidth(&["oracle", "--input", f.to_str().unwrap(), "--pgm", pgm.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["estimate"], 10);
    assert_eq!(v["agreement"], true);
    assert!(std::fs::read(&pgm).unwrap().starts_with(b"P5\n1024 1024\n"));

    let c = generate(dir.path(), "c.json", &["--kind", "circle"]);
    let o = kwidth(&["oracle", "--input", c.to_str().unwrap(), "--resolution", "256x256"]);
    assert_eq!(json(&o)["estimate"], 2);
}

#[test]
fn coarse_oracle_exits_four() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "r.json", &["--kind", "rose", "--petals", "7"]);
    let o = kwidth(&["oracle", "--input", f.to_str().unwrap(), "--resolution", "64x64", "--refine", "0"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn verify_corpus_passes() {
    let o = kwidth(&["verify", "--corpus"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("torus_2_3"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn bad_input_exits_five() {
    assert_eq!(code(&kwidth(&["analyze", "--input", "/nonexistent/curve.json"])), 5);
    assert_eq!(code(&kwidth(&["generate", "--kind", "nope"])), 5);
    assert_eq!(code(&kwidth(&["generate", "--kind", "braid_word", "--word", "s3", "--strands", "2"])), 5);
    assert_eq!(code(&kwidth(&["oracle", "--input", "x.json", "--resolution", "8x8"])), 5);
    assert_eq!(code(&kwidth(&["frobnicate"])), 5);
}

#[test]
fn threads_flag_and_env() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "h.json", &["--kind", "hopf"]);
    let o = kwidth(&["--threads", "2", "analyze", "--input", f.to_str().unwrap()]);
    assert_eq!(json(&o)["width"]["w2"], 8);
    let o = Command::new(env!("CARGO_BIN_EXE_kwidth"))
        .env("KWIDTH_THREADS", "1")
        .args(["analyze", "--input", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(json(&o)["width"]["w2"], 8);
}

#[test]
fn coincident_components_cannot_be_perturbed_apart() {
    let dir = TempDir::new().unwrap();
    let f = concentric_file(dir.path());
    let o = kwidth(&["analyze", "--input", f.to_str().unwrap(), "--perturb-seed", "5"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("perturbation"));
}

#[test]
fn perturb_seed_repairs_stadium() {
    let n = 1200;
    let per = 4.0 + 2.0 * PI;
    let pts: Vec<[f64; 3]> = (0..n)
        .map(|j| {
            let s = per * j as f64 / n as f64;
            if s < 2.0 {
                [-1.0 + s, -1.0, 0.0]
            } else if s < 2.0 + PI {
                let a = -PI / 2.0 + (s - 2.0);
                [1.0 + a.cos(), a.sin(), 0.0]
            } else if s < 4.0 + PI {
                [1.0 - (s - 2.0 - PI), 1.0, 0.0]
            } else {
                let a = PI / 2.0 + (s - 4.0 - PI);
                [-1.0 + a.cos(), a.sin(), 0.0]
            }
        })
        .collect();
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("stadium.json");
    std::fs::write(&f, serde_json::json!({"name": "stadium", "components": [{"points": pts}]}).to_string()).unwrap();
    let o = kwidth(&["analyze", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = kwidth(&["analyze", "--input", f.to_str().unwrap(), "--perturb-seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["perturbed_with_seed"], 7);
    assert_eq!(v["features"]["fb_residual"]["numerator"], 0);
}

#[test]
fn hopf_svg_widths_sum_to_eight() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "h.json", &["--kind", "hopf"]);
    let svg = dir.path().join("h.svg");
    assert_eq!(code(&kwidth(&["graphic-svg", "--input", f.to_str().unwrap(), "--out", svg.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    let sum: u32 = text
        .split("class=\"face-label\"")
        .skip(1)
        .map(|s| s.split('>').nth(1).unwrap().split('<').next().unwrap().trim().parse::<u32>().unwrap())
        .sum();
    assert_eq!(sum, 8);
}
