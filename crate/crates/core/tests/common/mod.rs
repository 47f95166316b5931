#![allow(dead_code)]

use std::f64::consts::PI;

use kwidth::curve_model::{project_xy, ParamCurve3, PlaneComponent, PlaneCurve};
use kwidth::generators::{generate, GeneratorSpec};

pub fn spec(json: &str) -> GeneratorSpec {
    serde_json::from_str(json).unwrap()
}

pub fn gen(json: &str) -> ParamCurve3 {
    generate(&spec(json)).unwrap()
}

pub fn plane(json: &str) -> PlaneCurve {
    project_xy(&gen(json)).unwrap()
}

pub fn sampled(n: usize, f: impl Fn(f64) -> [f64; 2]) -> Vec<[f64; 2]> {
    (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect()
}

/// Curve from position, velocity and acceleration closures on `[0, 2π)`.
pub fn analytic(n: usize, p: impl Fn(f64) -> [f64; 2], d1: impl Fn(f64) -> [f64; 2], d2: impl Fn(f64) -> [f64; 2]) -> PlaneComponent {
    let du = 2.0 * PI / n as f64;
    let us: Vec<f64> = (0..n).map(|j| j as f64 * du).collect();
    PlaneComponent::from_derivatives(
        us.iter().map(|&u| p(u)).collect(),
        &us.iter().map(|&u| d1(u)).collect::<Vec<_>>(),
        &us.iter().map(|&u| d2(u)).collect::<Vec<_>>(),
        du,
    )
    .unwrap()
}

pub fn unit_circle(n: usize) -> PlaneCurve {
    PlaneCurve::new(vec![analytic(n, |u| [u.cos(), u.sin()], |u| [-u.sin(), u.cos()], |u| [-u.cos(), -u.sin()])]).unwrap()
}

/// `(sin 2u, sin u)`.
pub fn figure_eight(n: usize) -> PlaneCurve {
    PlaneCurve::new(vec![analytic(
        n,
        |u| [(2.0 * u).sin(), u.sin()],
        |u| [2.0 * (2.0 * u).cos(), u.cos()],
        |u| [-4.0 * (2.0 * u).sin(), -u.sin()],
    )])
    .unwrap()
}

pub fn circle_at(n: usize, c: [f64; 2], r: f64) -> Vec<[f64; 2]> {
    sampled(n, |u| [c[0] + r * u.cos(), c[1] + r * u.sin()])
}

/// Dense xy-resampling of every analytic component, offset from the
/// generator's own sample grid.
pub fn dense_xy(curve: &ParamCurve3, factor: usize) -> Vec<Vec<[f64; 2]>> {
    curve
        .components
        .iter()
        .map(|c| {
            let h = c.analytic.as_ref().expect("analytic component");
            let n = c.points.len() * factor;
            (0..n)
                .map(|j| {
                    let [p, _, _] = h.param.eval((j as f64 + 0.377) / n as f64);
                    [p[0], p[1]]
                })
                .collect()
        })
        .collect()
}

pub fn corpus_curves() -> Vec<(String, ParamCurve3)> {
    kwidth::generators::corpus()
        .into_iter()
        .map(|s| (s.name(), generate(&s).unwrap()))
        .collect()
}

pub fn corpus_planes() -> Vec<(String, PlaneCurve)> {
    kwidth::generators::corpus()
        .into_iter()
        .map(|s| (s.name(), project_xy(&generate(&s).unwrap()).unwrap()))
        .collect()
}

/// Independent reference computations on dense polylines.
pub mod oracle {
    use super::*;

    /// Transverse intersections of the line `x·(cos θ, sin θ) = d` with a
    /// closed polyline, by sign changes of the signed distance.
    pub fn line_count(poly: &[[f64; 2]], theta: f64, d: f64) -> usize {
        let (c, s) = (theta.cos(), theta.sin());
        let n = poly.len();
        (0..n)
            .filter(|&j| {
                let a = poly[j][0] * c + poly[j][1] * s - d;
                let b = poly[(j + 1) % n][0] * c + poly[(j + 1) % n][1] * s - d;
                (a < 0.0) != (b < 0.0)
            })
            .count()
    }

    /// Proper segment-segment intersections among closed polylines, O(n²).
    pub fn crossing_count(polys: &[Vec<[f64; 2]>]) -> usize {
        let segs: Vec<([f64; 2], [f64; 2], usize, usize, usize)> = polys
            .iter()
            .enumerate()
            .flat_map(|(ci, p)| {
                let n = p.len();
                (0..n).map(move |j| (p[j], p[(j + 1) % n], ci, j, n))
            })
            .collect();
        let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        let mut count = 0;
        for i in 0..segs.len() {
            for k in i + 1..segs.len() {
                let (a0, a1, ca, ja, na) = segs[i];
                let (b0, b1, cb, jb, _) = segs[k];
                if ca == cb && (jb == ja + 1 || (ja == 0 && jb == na - 1)) {
                    continue;
                }
                let hit = orient(a0, a1, b0) * orient(a0, a1, b1) < 0.0 && orient(b0, b1, a0) * orient(b0, b1, a1) < 0.0;
                if hit {
                    count += 1;
                }
            }
        }
        count
    }

    /// Sign changes of `x'y'' − y'x''` over a dense closed sampling.
    pub fn inflection_count(d1: impl Fn(f64) -> [f64; 2], d2: impl Fn(f64) -> [f64; 2], n: usize) -> usize {
        let k: Vec<f64> = (0..n)
            .map(|j| {
                let u = 2.0 * PI * (j as f64 + 0.5) / n as f64;
                let (a, b) = (d1(u), d2(u));
                a[0] * b[1] - a[1] * b[0]
            })
            .collect();
        (0..n).filter(|&j| (k[j] < 0.0) != (k[(j + 1) % n] < 0.0)).count()
    }

    /// `∫|κ| ds` by 20-point Gauss-Legendre on `m` panels per interval
    /// between the given breakpoints.
    pub fn total_curvature(d1: impl Fn(f64) -> [f64; 2], d2: impl Fn(f64) -> [f64; 2], breaks: &[f64], m: usize) -> f64 {
        let (x, w) = gauss_legendre(20);
        let g = |u: f64| {
            let (a, b) = (d1(u), d2(u));
            (a[0] * b[1] - a[1] * b[0]).abs() / (a[0] * a[0] + a[1] * a[1])
        };
        let mut total = 0.0;
        for pair in breaks.windows(2) {
            let h = (pair[1] - pair[0]) / m as f64;
            for p in 0..m {
                let (l, r) = (pair[0] + p as f64 * h, pair[0] + (p + 1) as f64 * h);
                total += 0.5 * h * x.iter().zip(&w).map(|(xi, wi)| wi * g(0.5 * (r - l) * xi + 0.5 * (r + l))).sum::<f64>();
            }
        }
        total
    }

    /// Nodes and weights by Newton iteration on Legendre polynomials.
    pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let legendre = |x: f64| {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
        };
        (0..n)
            .map(|i| {
                let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                for _ in 0..100 {
                    let (p, dp) = legendre(x);
                    x -= p / dp;
                }
                let (_, dp) = legendre(x);
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .unzip()
    }
}
