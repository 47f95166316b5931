//! Crossings, inflections, double tangents and total curvature of a plane
//! curve, and the identity `c + i/2 = t − s` tying them together.

use serde::{Deserialize, Serialize};

use crate::curve_model::{PlaneComponent, PlaneCurve, Tolerances};
use crate::error::{Error, Result};
use crate::geom::{add, cross, dot, hermite_deriv, norm, perp, scale, sub, unit_angle, Vec2};
use crate::graphic::{check_simple_inflections, inflection_params, select_window, CurveParam, LineCoord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub params: [CurveParam; 2],
    pub point: Vec2,
    /// Angle between the branches, in `(0, π/2]`.
    pub angle: f64,
    pub exterior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inflection {
    pub param: CurveParam,
    pub point: Vec2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bitangent {
    pub params: [CurveParam; 2],
    pub line: LineCoord,
    pub interior: bool,
}

/// An exact rational `numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub numerator: i64,
    pub denominator: i64,
}

impl Rational {
    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub c: usize,
    pub i: usize,
    pub t: usize,
    pub s: usize,
    pub total_curvature: f64,
    /// `c + i/2 − (t − s)`.
    pub fb_residual: Rational,
    pub crossings: Vec<Crossing>,
    pub inflections: Vec<Inflection>,
    pub bitangents: Vec<Bitangent>,
}

struct Segment {
    comp: usize,
    j: usize,
    lo: Vec2,
    hi: Vec2,
}

fn hermite_point(c: &PlaneComponent, j: usize, t: f64) -> (Vec2, Vec2) {
    let n = c.len();
    let k = (j + 1) % n;
    let (p0, p1) = (c.points[j], c.points[k]);
    let (m0, m1) = (c.seg_slope(j), c.seg_slope(k));
    let p = [
        crate::geom::hermite(p0[0], m0[0], p1[0], m1[0], t),
        crate::geom::hermite(p0[1], m0[1], p1[1], m1[1], t),
    ];
    let d = [
        hermite_deriv(p0[0], m0[0], p1[0], m1[0], t),
        hermite_deriv(p0[1], m0[1], p1[1], m1[1], t),
    ];
    (p, d)
}

/// Parameters where two chords cross, if they do, with the crossing taken
/// half-open so a crossing through a shared sample is seen once.
fn chord_hit(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> Option<(f64, f64)> {
    let da = sub(a1, a0);
    let db = sub(b1, b0);
    let den = cross(da, db);
    if den == 0.0 {
        return None;
    }
    let w = sub(b0, a0);
    let t = cross(w, db) / den;
    let u = cross(w, da) / den;
    ((0.0..1.0).contains(&t) && (0.0..1.0).contains(&u)).then_some((t, u))
}

/// Closed chord test with slack, for crossings that land on a shared sample.
fn chord_hit_near(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> Option<(f64, f64)> {
    const SLACK: f64 = 1e-9;
    let da = sub(a1, a0);
    let db = sub(b1, b0);
    let den = cross(da, db);
    if den == 0.0 {
        return None;
    }
    let w = sub(b0, a0);
    let t = cross(w, db) / den;
    let u = cross(w, da) / den;
    let ok = |x: f64| (-SLACK..=1.0 + SLACK).contains(&x);
    (ok(t) && ok(u)).then_some((t, u))
}

fn wrap(x: f64, n: f64) -> f64 {
    let r = x.rem_euclid(n);
    if r >= n {
        0.0
    } else {
        r
    }
}

fn circ_dist(a: f64, b: f64, n: f64) -> f64 {
    let d = (a - b).rem_euclid(n);
    d.min(n - d)
}

/// Newton polish of a chord crossing on the two Hermite segments.
fn polish(pc: &PlaneCurve, a: &Segment, b: &Segment, mut t: f64, mut u: f64) -> (f64, f64, Vec2, Vec2, Vec2) {
    let (ca, cb) = (&pc.components[a.comp], &pc.components[b.comp]);
    for _ in 0..8 {
        let (pa, da) = hermite_point(ca, a.j, t);
        let (pb, db) = hermite_point(cb, b.j, u);
        let r = sub(pa, pb);
        let det = cross(db, da);
        if det == 0.0 {
            break;
        }
        // solve da·dt − db·du = −r
        let dt = cross(r, db) / det;
        let du = -cross(da, r) / det;
        let (nt, nu) = (t + dt, u + du);
        if !(-0.5..=1.5).contains(&nt) || !(-0.5..=1.5).contains(&nu) {
            break;
        }
        t = nt;
        u = nu;
        if dt.abs() + du.abs() < 1e-15 {
            break;
        }
    }
    let (pa, da) = hermite_point(ca, a.j, t);
    let (_, db) = hermite_point(cb, b.j, u);
    (t, u, pa, da, db)
}

fn segments(pc: &PlaneCurve) -> Vec<Segment> {
    let mut segs = Vec::with_capacity(pc.total_samples());
    for (ci, c) in pc.components.iter().enumerate() {
        let n = c.len();
        for j in 0..n {
            let (p, q) = (c.points[j], c.points[(j + 1) % n]);
            segs.push(Segment {
                comp: ci,
                j,
                lo: [p[0].min(q[0]), p[1].min(q[1])],
                hi: [p[0].max(q[0]), p[1].max(q[1])],
            });
        }
    }
    segs.sort_by(|a, b| a.lo[0].total_cmp(&b.lo[0]));
    segs
}

fn adjacent(pc: &PlaneCurve, a: &Segment, b: &Segment) -> bool {
    if a.comp != b.comp {
        return false;
    }
    let n = pc.components[a.comp].len();
    a.j == b.j || (a.j + 1) % n == b.j || (b.j + 1) % n == a.j
}

fn chord(pc: &PlaneCurve, s: &Segment) -> (Vec2, Vec2) {
    let c = &pc.components[s.comp];
    (c.points[s.j], c.points[(s.j + 1) % c.len()])
}

/// Transverse self-intersections with default tolerances.
pub fn find_crossings(pc: &PlaneCurve) -> Result<Vec<Crossing>> {
    find_crossings_with(pc, &Tolerances::default())
}

pub fn find_crossings_with(pc: &PlaneCurve, tol: &Tolerances) -> Result<Vec<Crossing>> {
    let segs = segments(pc);
    let mut out = Vec::new();
    for (ia, a) in segs.iter().enumerate() {
        for b in &segs[ia + 1..] {
            if b.lo[0] > a.hi[0] {
                break;
            }
            if b.lo[1] > a.hi[1] || a.lo[1] > b.hi[1] || adjacent(pc, a, b) {
                continue;
            }
            let (a0, a1) = chord(pc, a);
            let (b0, b1) = chord(pc, b);
            let Some((t, u)) = chord_hit_near(a0, a1, b0, b1) else { continue };
            let (t, u, point, da, db) = polish(pc, a, b, t, u);
            let c = (dot(da, db).abs() / (norm(da) * norm(db))).min(1.0);
            let angle = c.acos();
            if angle < tol.angle_min {
                return Err(Error::NonTransverseCrossing { angle });
            }
            let na = pc.components[a.comp].len() as f64;
            let nb = pc.components[b.comp].len() as f64;
            let mut params = [
                CurveParam {
                    component: a.comp,
                    param: wrap(a.j as f64 + t, na),
                },
                CurveParam {
                    component: b.comp,
                    param: wrap(b.j as f64 + u, nb),
                },
            ];
            params.sort_by(|x, y| (x.component, x.param).partial_cmp(&(y.component, y.param)).unwrap());
            let seen = out.iter().any(|c: &Crossing| {
                c.params.iter().zip(&params).all(|(p, q)| {
                    let n = pc.components[p.component].len() as f64;
                    p.component == q.component && circ_dist(p.param, q.param, n) < 1e-6
                })
            });
            if seen {
                continue;
            }
            out.push(Crossing {
                params,
                point,
                angle,
                exterior: false,
            });
        }
    }
    out.sort_by(|x, y| {
        (x.params[0].component, x.params[0].param)
            .partial_cmp(&(y.params[0].component, y.params[0].param))
            .unwrap()
    });
    let radius = pc.frame().radius;
    for c in &mut out {
        c.exterior = crossing_is_exterior(pc, c, radius);
    }
    Ok(out)
}

/// Number of curve chords met by the ray from `p` in direction `dir`.
fn ray_hits(pc: &PlaneCurve, p: Vec2, dir: Vec2, reach: f64) -> usize {
    let q = add(p, scale(dir, reach));
    pc.components
        .iter()
        .map(|c| {
            let n = c.len();
            (0..n)
                .filter(|&j| chord_hit(p, q, c.points[j], c.points[(j + 1) % n]).is_some())
                .count()
        })
        .sum()
}

/// A crossing is exterior when a point in one of its four corners escapes
/// to infinity along one of 8 rays without meeting the curve.
fn crossing_is_exterior(pc: &PlaneCurve, c: &Crossing, radius: f64) -> bool {
    let comp_a = &pc.components[c.params[0].component];
    let comp_b = &pc.components[c.params[1].component];
    let ta = tangent_at(comp_a, c.params[0].param);
    let tb = tangent_at(comp_b, c.params[1].param);
    let delta = 1e-5 * radius;
    let reach = 4.0 * radius + norm(sub(c.point, pc.frame().center));
    [add(ta, tb), sub(ta, tb), scale(add(ta, tb), -1.0), sub(tb, ta)]
        .iter()
        .filter(|v| norm(**v) > 0.0)
        .any(|v| {
            let p = add(c.point, scale(*v, delta / norm(*v)));
            (0..8).any(|k| {
                let dir = unit_angle(0.1 + k as f64 * std::f64::consts::PI / 4.0);
                ray_hits(pc, p, dir, reach) == 0
            })
        })
}

fn tangent_at(c: &PlaneComponent, s: f64) -> Vec2 {
    let n = c.len();
    let s = s.rem_euclid(n as f64);
    let j = (s.floor() as usize).min(n - 1);
    let (_, d) = hermite_point(c, j, s - j as f64);
    scale(d, 1.0 / norm(d))
}

fn curvature_at(c: &PlaneComponent, s: f64) -> f64 {
    let n = c.len();
    let s = s.rem_euclid(n as f64);
    let j = (s.floor() as usize).min(n - 1);
    let t = s - j as f64;
    (1.0 - t) * c.curvature[j] + t * c.curvature[(j + 1) % n]
}

/// One inflection per sign change of the sampled curvature.
pub fn find_inflections(pc: &PlaneCurve) -> Result<Vec<Inflection>> {
    let (norm_pc, _) = pc.normalized();
    check_simple_inflections(&norm_pc)?;
    Ok(pc
        .components
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| {
            inflection_params(c).into_iter().map(move |s| Inflection {
                param: CurveParam {
                    component: ci,
                    param: s,
                },
                point: c.point_at(s),
            })
        })
        .collect())
}

/// Double tangents, from the self-intersections of the dual curve. A line
/// is interior when the curvature vectors at its two tangency points lie on
/// opposite sides of it.
pub fn find_bitangents(pc: &PlaneCurve) -> Result<Vec<Bitangent>> {
    find_bitangents_with(pc, &Tolerances::default())
}

pub fn find_bitangents_with(pc: &PlaneCurve, tol: &Tolerances) -> Result<Vec<Bitangent>> {
    let (norm_pc, frame) = pc.normalized();
    check_simple_inflections(&norm_pc)?;
    let (set, crossings, _) = select_window(&norm_pc, 0.0)?;
    let lines: Vec<LineCoord> = crossings.iter().map(|c| LineCoord::new(c.theta, c.d)).collect();
    for (k, a) in lines.iter().enumerate() {
        if lines[k + 1..].iter().any(|b| a.distance(b) < tol.line_space_min) {
            return Err(Error::NearTripleTangency(format!(
                "two double tangents within {:e} at θ = {}",
                tol.line_space_min, a.theta
            )));
        }
    }
    let mut out: Vec<Bitangent> = crossings
        .iter()
        .zip(&lines)
        .map(|(c, line)| {
            let params = [c.a, c.b].map(|p| {
                let piece = &set.pieces[p];
                let n = norm_pc.components[piece.comp].len() as f64;
                CurveParam {
                    component: piece.comp,
                    param: piece.param_at(c.theta).rem_euclid(n),
                }
            });
            let normal = line.normal();
            let side = |cp: &CurveParam| {
                let comp = &norm_pc.components[cp.component];
                let k = curvature_at(comp, cp.param);
                let t = tangent_at(comp, cp.param);
                k * dot(perp(t), normal) > 0.0
            };
            Bitangent {
                params,
                line: line.from_normalized(&frame),
                interior: side(&params[0]) != side(&params[1]),
            }
        })
        .collect();
    out.sort_by(|x, y| x.line.theta.total_cmp(&y.line.theta));
    Ok(out)
}

/// Integral of `|κ| ds`, summed over components. Each segment contributes
/// its exact tangent turning; segments holding an inflection are split there.
pub fn total_curvature(pc: &PlaneCurve) -> f64 {
    pc.components
        .iter()
        .map(|c| {
            let n = c.len();
            (0..n)
                .map(|j| {
                    let k = (j + 1) % n;
                    let (t0, t1) = (c.tangents[j], c.tangents[k]);
                    let turn = cross(t0, t1).atan2(dot(t0, t1));
                    let (a, b) = (c.curvature[j] * c.ds(j), c.curvature[k] * c.ds(k));
                    if a * b < 0.0 {
                        let t = a / (a - b);
                        let mid = crate::geom::hermite(0.0, a, turn, b, t);
                        mid.abs() + (turn - mid).abs()
                    } else {
                        turn.abs()
                    }
                })
                .sum::<f64>()
        })
        .sum()
}

pub fn fabricius_bjerre_check(pc: &PlaneCurve) -> Result<FeatureReport> {
    fabricius_bjerre_check_with(pc, &Tolerances::default())
}

pub fn fabricius_bjerre_check_with(pc: &PlaneCurve, tol: &Tolerances) -> Result<FeatureReport> {
    let crossings = find_crossings_with(pc, tol)?;
    let inflections = find_inflections(pc)?;
    let bitangents = find_bitangents_with(pc, tol)?;
    let c = crossings.len();
    let i = inflections.len();
    let s = bitangents.iter().filter(|b| b.interior).count();
    let t = bitangents.len() - s;
    let numerator = 2 * c as i64 + i as i64 - 2 * (t as i64 - s as i64);
    let (numerator, denominator) = if numerator % 2 == 0 { (numerator / 2, 1) } else { (numerator, 2) };
    Ok(FeatureReport {
        c,
        i,
        t,
        s,
        total_curvature: total_curvature(pc),
        fb_residual: Rational {
            numerator,
            denominator,
        },
        crossings,
        inflections,
        bitangents,
    })
}
