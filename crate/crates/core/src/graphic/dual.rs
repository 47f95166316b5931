//! The tangent-line dual curve and its decomposition into θ-monotone pieces.
//!
//! Inside a window `[θ0, θ0+π]` of line space the dual curve splits into
//! pieces that are graphs `d(θ)`: a piece ends either on the seam, where it
//! continues on the other side with `d` negated, or at a cusp.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::line::LineCoord;
use crate::curve_model::{heading, PlaneComponent, PlaneCurve};
use crate::error::{Error, Result};
use crate::geom::{brent_root, dot, hermite, norm, perp, sub, unit_angle, Vec2};

/// Curvature magnitude (unit-diameter frame) treated as zero.
const FLAT_CURVATURE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspMarker {
    pub component: usize,
    /// Fractional sample index of the inflection.
    pub param: f64,
    pub line: LineCoord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualComponent {
    /// Tangent line at each curve sample.
    pub lines: Vec<LineCoord>,
    pub cusps: Vec<CuspMarker>,
    /// Number of times the component crosses the θ-identification.
    pub wraps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualCurve {
    pub components: Vec<DualComponent>,
}

/// Normal angle of the tangent line at a sample: the left normal's heading.
#[inline]
fn normal_angle(tangent: Vec2) -> f64 {
    heading(perp(tangent))
}

/// Tangent lines of every sample with inflection cusps and seam wraps.
pub fn dual_curve(pc: &PlaneCurve) -> DualCurve {
    let (norm_pc, frame) = pc.normalized();
    let components = pc
        .components
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let lines: Vec<LineCoord> = comp
                .points
                .iter()
                .zip(&comp.tangents)
                .map(|(p, t)| {
                    let phi = normal_angle(*t);
                    LineCoord::new(phi, dot(*p, unit_angle(phi)))
                })
                .collect();
            let n = lines.len();
            let mut wraps = 0;
            let mut a = normal_angle(comp.tangents[0]);
            for j in 0..n {
                let b = a + wrap_delta(normal_angle(comp.tangents[(j + 1) % n]) - a);
                wraps += ((b / PI).floor() - (a / PI).floor()).abs() as usize;
                a = b;
            }
            let cusps = inflection_params(&norm_pc.components[ci])
                .into_iter()
                .map(|s| {
                    let tip = cusp_tip(&norm_pc.components[ci], s);
                    let l = LineCoord::new(tip.phi, dot(tip.p, unit_angle(tip.phi)));
                    CuspMarker {
                        component: ci,
                        param: s,
                        line: l.from_normalized(&frame),
                    }
                })
                .collect();
            DualComponent { lines, cusps, wraps }
        })
        .collect();
    DualCurve { components }
}

#[inline]
fn wrap_delta(x: f64) -> f64 {
    (x + PI).rem_euclid(2.0 * PI) - PI
}

/// Fractional sample indices where the curvature changes sign.
pub(crate) fn inflection_params(comp: &PlaneComponent) -> Vec<f64> {
    let n = comp.len();
    let mut out = Vec::new();
    for j in 0..n {
        let (a, b) = (comp.curvature[j], comp.curvature[(j + 1) % n]);
        if (a >= 0.0) != (b >= 0.0) {
            out.push(j as f64 + a / (a - b));
        }
    }
    out
}

/// Rejects curvature that vanishes along an interval (three or more
/// consecutive samples at zero) in a unit-diameter curve.
pub(crate) fn check_simple_inflections(pc: &PlaneCurve) -> Result<()> {
    for (ci, comp) in pc.components.iter().enumerate() {
        let n = comp.len();
        let mut run = 0;
        for j in 0..n + 2 {
            if comp.curvature[j % n].abs() < FLAT_CURVATURE {
                run += 1;
                if run >= 3 {
                    return Err(Error::DegenerateInflection {
                        component: ci,
                        sample: j % n,
                    });
                }
            } else {
                run = 0;
            }
        }
    }
    Ok(())
}

struct Tip {
    phi: f64,
    p: Vec2,
}

/// Position and normal angle at an inflection between samples `j` and `j+1`,
/// assuming curvature is linear in arc length across the segment.
fn cusp_tip(comp: &PlaneComponent, s: f64) -> Tip {
    let n = comp.len();
    let j = s.floor() as usize % n;
    let f = s - s.floor();
    let k = (j + 1) % n;
    let seg = norm(sub(comp.points[k], comp.points[j]));
    let phi0 = normal_angle(comp.tangents[j]);
    let phi = phi0 + comp.curvature[j] * seg * f / 2.0;
    Tip {
        phi,
        p: comp.point_at(s),
    }
}

/// Local max/min type of the height function along a piece: going from
/// large `d` to small `d` across a `Max` piece adds two intersections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CritKind {
    Max,
    Min,
}

impl CritKind {
    /// Change of the intersection count from the gap above to the gap below.
    pub fn jump(self) -> i64 {
        match self {
            CritKind::Max => 2,
            CritKind::Min => -2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum End {
    Seam,
    Cusp(usize),
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PieceSample {
    pub theta: f64,
    pub d: f64,
    pub slope: f64,
    /// Unwrapped fractional sample index along the component.
    pub s: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Piece {
    pub comp: usize,
    pub samples: Vec<PieceSample>,
    pub kind: CritKind,
    pub start: End,
    pub end: End,
    /// Piece that continues this one across the seam at `θ0+π`.
    pub next_over_seam: Option<usize>,
}

impl Piece {
    pub fn theta_lo(&self) -> f64 {
        self.samples[0].theta
    }

    pub fn theta_hi(&self) -> f64 {
        self.samples[self.samples.len() - 1].theta
    }

    fn locate(&self, theta: f64) -> (usize, f64) {
        let s = &self.samples;
        let last = s.len() - 2;
        let i = match s.binary_search_by(|p| p.theta.total_cmp(&theta)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        };
        let h = s[i + 1].theta - s[i].theta;
        let t = if h > 0.0 {
            ((theta - s[i].theta) / h).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (i, t)
    }

    /// Offset `d(θ)` on the Hermite interpolant (clamped to the piece range).
    pub fn eval(&self, theta: f64) -> f64 {
        let (i, t) = self.locate(theta);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let h = b.theta - a.theta;
        hermite(a.d, a.slope * h, b.d, b.slope * h, t)
    }

    /// Curve parameter of the tangency at `θ` (linear in θ between samples).
    pub fn param_at(&self, theta: f64) -> f64 {
        let (i, t) = self.locate(theta);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        a.s + t * (b.s - a.s)
    }

    pub fn slope_at(&self, theta: f64) -> f64 {
        let (i, t) = self.locate(theta);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        a.slope + t * (b.slope - a.slope)
    }

    fn s_range(&self) -> (f64, f64) {
        let a = self.samples[0].s;
        let b = self.samples[self.samples.len() - 1].s;
        (a.min(b), a.max(b))
    }

    /// θ where the piece is tangent at curve parameter `s` (mod `n`), if the
    /// parameter belongs to this piece.
    pub fn theta_of_param(&self, s: f64, n: f64) -> Option<f64> {
        let (lo, hi) = self.s_range();
        let k = ((lo - s) / n).ceil();
        let s = s + k * n;
        if s < lo || s > hi {
            return None;
        }
        for w in self.samples.windows(2) {
            let (a, b) = (w[0].s.min(w[1].s), w[0].s.max(w[1].s));
            if s >= a && s <= b {
                let t = if b > a { (s - w[0].s) / (w[1].s - w[0].s) } else { 0.0 };
                return Some(w[0].theta + t * (w[1].theta - w[0].theta));
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct CuspTip {
    pub theta: f64,
    pub d: f64,
}

/// Dual curve of a unit-diameter plane curve cut into θ-monotone pieces
/// over the window `[theta0, theta0 + π]`.
#[derive(Debug, Clone)]
pub(crate) struct PieceSet {
    pub theta0: f64,
    pub pieces: Vec<Piece>,
    pub tips: Vec<CuspTip>,
}

struct BranchPoint {
    s: f64,
    phi: f64,
    p: Vec2,
}

impl PieceSet {
    /// `pc` must already be normalized to unit diameter.
    pub fn build(pc: &PlaneCurve, theta0: f64) -> Result<PieceSet> {
        check_simple_inflections(pc)?;
        let mut set = PieceSet {
            theta0,
            pieces: Vec::new(),
            tips: Vec::new(),
        };
        for (ci, comp) in pc.components.iter().enumerate() {
            set.add_component(ci, comp)?;
        }
        Ok(set)
    }

    fn add_component(&mut self, ci: usize, comp: &PlaneComponent) -> Result<()> {
        let n = comp.len();
        let phis: Vec<f64> = comp.tangents.iter().map(|t| normal_angle(*t)).collect();
        let infl = inflection_params(comp);
        let mut branches: Vec<(Vec<BranchPoint>, f64, Option<usize>, Option<usize>)> = Vec::new();
        if infl.is_empty() {
            let sign = comp.curvature[0].signum();
            // start the closed branch on a seam crossing
            let k_of = |phi: f64| ((phi - self.theta0) / PI).floor();
            let mut unwrapped = Vec::with_capacity(n + 1);
            let mut cur = phis[0];
            unwrapped.push(cur);
            for j in 1..=n {
                cur += wrap_delta(phis[j % n] - phis[(j - 1) % n]);
                unwrapped.push(cur);
            }
            let j0 = (0..n)
                .find(|&j| k_of(unwrapped[j]) != k_of(unwrapped[j + 1]))
                .ok_or_else(|| {
                    Error::ArrangementInconsistent(format!(
                        "component {ci} has no inflection and never wraps"
                    ))
                })?;
            let total = unwrapped[n] - unwrapped[0];
            let mut pts = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let j = j0 + k;
                let base = if j >= n { total } else { 0.0 };
                pts.push(BranchPoint {
                    s: j as f64,
                    phi: unwrapped[j % n] + base,
                    p: comp.points[j % n],
                });
            }
            // pts runs from sample j0 to j0+n; the seam crossing inside
            // [j0, j0+1] is the branch start and the one inside
            // [j0+n, j0+n+1] (same point) its end. Trim by splitting.
            let mut ext = pts;
            ext.push(BranchPoint {
                s: (j0 + n + 1) as f64,
                phi: unwrapped[(j0 + 1) % n] + if j0 + 1 >= n { 2.0 * total } else { total },
                p: comp.points[(j0 + 1) % n],
            });
            branches.push((ext, sign, None, None));
        } else {
            let m = infl.len();
            let mut tips = Vec::with_capacity(m);
            for &s in &infl {
                let tip = cusp_tip(comp, s);
                let l = LineCoord::new(tip.phi - self.theta0, dot(tip.p, unit_angle(tip.phi)));
                let theta = l.theta + self.theta0;
                let id = self.tips.len();
                self.tips.push(CuspTip {
                    theta,
                    d: l.d,
                });
                tips.push((id, s, tip));
            }
            for b in 0..m {
                let (ta, sa, ref tip_a) = tips[b];
                let (tb, sb_raw, ref tip_b) = tips[(b + 1) % m];
                let sb = if sb_raw > sa { sb_raw } else { sb_raw + n as f64 };
                let first = sa.floor() as usize + 1;
                let last = sb.floor() as usize;
                let sign = comp.curvature[first % n].signum();
                let mut pts = Vec::new();
                pts.push(BranchPoint {
                    s: sa,
                    phi: tip_a.phi,
                    p: tip_a.p,
                });
                let mut cur = tip_a.phi;
                for j in first..=last {
                    let phi = phis[j % n];
                    cur += wrap_delta(phi - cur);
                    if (cur - pts[pts.len() - 1].phi) * sign > 0.0 {
                        pts.push(BranchPoint {
                            s: j as f64,
                            phi: cur,
                            p: comp.points[j % n],
                        });
                    } else {
                        cur = pts[pts.len() - 1].phi;
                    }
                }
                let end_phi = cur + wrap_delta(tip_b.phi - cur);
                pts.push(BranchPoint {
                    s: sb,
                    phi: end_phi,
                    p: tip_b.p,
                });
                branches.push((pts, sign, Some(ta), Some(tb)));
            }
        }
        for (pts, sign, tip_start, tip_end) in branches {
            self.split_branch(ci, comp, &pts, sign, tip_start, tip_end)?;
        }
        Ok(())
    }

    fn split_branch(
        &mut self,
        ci: usize,
        comp: &PlaneComponent,
        pts: &[BranchPoint],
        sign: f64,
        tip_start: Option<usize>,
        tip_end: Option<usize>,
    ) -> Result<()> {
        let theta0 = self.theta0;
        let k_of = |phi: f64| ((phi - theta0) / PI).floor();
        let closed = tip_start.is_none();
        // For a closed branch the first point precedes the starting seam
        // crossing and the last follows the closing one.
        let mut current: Vec<PieceSample> = Vec::new();
        let mut current_k = k_of(pts[0].phi);
        let mut started = !closed;
        let mut pieces_made: Vec<usize> = Vec::new();
        let mut seam_links: Vec<(usize, bool)> = Vec::new();
        let push_sample = |v: &mut Vec<PieceSample>, phi: f64, p: Vec2, s: f64, k: f64| {
            let theta = phi - k * PI;
            let n = unit_angle(theta);
            v.push(PieceSample {
                theta,
                d: dot(p, n),
                slope: dot(p, perp(n)),
                s,
            });
        };
        if started {
            push_sample(&mut current, pts[0].phi, pts[0].p, pts[0].s, current_k);
        }
        for w in pts.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let kb = k_of(b.phi);
            if kb != current_k {
                // seam crossing between a and b
                let boundary = if b.phi > a.phi {
                    theta0 + (current_k + 1.0) * PI
                } else {
                    theta0 + current_k * PI
                };
                let g = (boundary - a.phi) / (b.phi - a.phi);
                let s = a.s + g * (b.s - a.s);
                let p = comp.point_at(s);
                if started {
                    push_sample(&mut current, boundary, p, s, current_k);
                    let id = self.finish_piece(ci, std::mem::take(&mut current), sign, current_k, tip_start, tip_end, pieces_made.is_empty(), false)?;
                    pieces_made.push(id);
                    seam_links.push((id, b.phi > a.phi));
                } else {
                    started = true;
                }
                current_k = kb;
                push_sample(&mut current, boundary, p, s, current_k);
                if closed && (b.s - pts[pts.len() - 1].s).abs() < 1e-12 {
                    break;
                }
            }
            if started && !(closed && (b.s - pts[pts.len() - 1].s).abs() < 1e-12) {
                push_sample(&mut current, b.phi, b.p, b.s, current_k);
            }
        }
        if closed {
            // the trailing fragment repeats the leading seam crossing
            current.clear();
        } else {
            let id = self.finish_piece(ci, current, sign, current_k, tip_start, tip_end, pieces_made.is_empty(), true)?;
            pieces_made.push(id);
        }
        // consecutive pieces along the branch meet on the seam
        let count = pieces_made.len();
        for (idx, &(id, increasing)) in seam_links.iter().enumerate() {
            let next = if idx + 1 < count {
                pieces_made[idx + 1]
            } else if closed {
                pieces_made[0]
            } else {
                continue;
            };
            if increasing {
                self.pieces[id].next_over_seam = Some(next);
            } else {
                self.pieces[next].next_over_seam = Some(id);
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn finish_piece(
        &mut self,
        ci: usize,
        mut samples: Vec<PieceSample>,
        sign: f64,
        k: f64,
        tip_start: Option<usize>,
        tip_end: Option<usize>,
        is_first: bool,
        is_last: bool,
    ) -> Result<usize> {
        let mut start = if is_first {
            tip_start.map_or(End::Seam, End::Cusp)
        } else {
            End::Seam
        };
        let mut end = if is_last {
            tip_end.map_or(End::Seam, End::Cusp)
        } else {
            End::Seam
        };
        if samples.len() >= 2 && samples[0].theta > samples[samples.len() - 1].theta {
            samples.reverse();
            std::mem::swap(&mut start, &mut end);
        }
        samples.dedup_by(|b, a| b.theta <= a.theta);
        if samples.len() < 2 {
            return Err(Error::ArrangementInconsistent(format!(
                "degenerate dual piece on component {ci}"
            )));
        }
        let parity = if (k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let kind = if sign * parity < 0.0 { CritKind::Max } else { CritKind::Min };
        self.pieces.push(Piece {
            comp: ci,
            samples,
            kind,
            start,
            end,
            next_over_seam: None,
        });
        Ok(self.pieces.len() - 1)
    }

    pub fn theta1(&self) -> f64 {
        self.theta0 + PI
    }
}

/// A transverse crossing of two pieces: a bitangent line.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PieceCrossing {
    pub a: usize,
    pub b: usize,
    pub theta: f64,
    pub d: f64,
    /// Angle between the two dual branches at the crossing.
    pub angle: f64,
}

/// Closest non-crossing approach between two pieces, for genericity checks.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NearMiss {
    pub gap: f64,
}

fn shared_endpoint(a: &Piece, b: &Piece) -> (bool, bool) {
    let lo = matches!((a.start, b.start), (End::Cusp(x), End::Cusp(y)) if x == y);
    let hi = matches!((a.end, b.end), (End::Cusp(x), End::Cusp(y)) if x == y);
    (lo, hi)
}

/// All pairwise crossings between pieces, plus near misses below `near_tol`.
pub(crate) fn find_piece_crossings(set: &PieceSet, near_tol: f64) -> (Vec<PieceCrossing>, Vec<NearMiss>) {
    let mut crossings = Vec::new();
    let mut misses = Vec::new();
    let ps = &set.pieces;
    for ia in 0..ps.len() {
        for ib in ia + 1..ps.len() {
            let (a, b) = (&ps[ia], &ps[ib]);
            let lo = a.theta_lo().max(b.theta_lo());
            let hi = a.theta_hi().min(b.theta_hi());
            if hi <= lo {
                continue;
            }
            let (skip_lo, skip_hi) = shared_endpoint(a, b);
            let mut grid: Vec<f64> = a
                .samples
                .iter()
                .chain(b.samples.iter())
                .map(|s| s.theta)
                .filter(|&t| t >= lo && t <= hi)
                .collect();
            grid.push(lo);
            grid.push(hi);
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            if skip_lo {
                grid.retain(|&t| t > lo);
            }
            if skip_hi {
                grid.retain(|&t| t < hi);
            }
            let diff = |t: f64| a.eval(t) - b.eval(t);
            let vals: Vec<f64> = grid.iter().map(|&t| diff(t)).collect();
            for i in 0..vals.len().saturating_sub(1) {
                let (v0, v1) = (vals[i], vals[i + 1]);
                if (v0 > 0.0) != (v1 > 0.0) && v0 != 0.0 {
                    let t = brent_root(diff, grid[i], grid[i + 1], 1e-15);
                    let sa = a.slope_at(t);
                    let sb = b.slope_at(t);
                    let angle = (sa.atan() - sb.atan()).abs();
                    crossings.push(PieceCrossing {
                        a: ia,
                        b: ib,
                        theta: t,
                        d: 0.5 * (a.eval(t) + b.eval(t)),
                        angle,
                    });
                }
            }
            for i in 1..vals.len().saturating_sub(1) {
                let (v0, v1, v2) = (vals[i - 1].abs(), vals[i].abs(), vals[i + 1].abs());
                let same_sign = (vals[i - 1] > 0.0) == (vals[i] > 0.0) && (vals[i] > 0.0) == (vals[i + 1] > 0.0);
                if same_sign && v1 <= v0 && v1 <= v2 && v1 < near_tol {
                    misses.push(NearMiss { gap: v1 });
                }
            }
        }
    }
    crossings.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    (crossings, misses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn circle(n: usize, r: f64, c: Vec2) -> Vec<Vec2> {
        (0..n)
            .map(|j| {
                let t = TAU * j as f64 / n as f64;
                [c[0] + r * t.cos(), c[1] + r * t.sin()]
            })
            .collect()
    }

    #[test]
    fn circle_dual_has_constant_offset() {
        let pc = PlaneCurve::from_point_components(vec![circle(512, 2.0, [0.0, 0.0])]).unwrap();
        let dc = dual_curve(&pc);
        let comp = &dc.components[0];
        assert!(comp.cusps.is_empty());
        assert_eq!(comp.wraps, 2);
        for l in &comp.lines {
            assert!((l.d.abs() - 2.0).abs() < 1e-3);
            assert!(l.theta >= 0.0 && l.theta < PI);
        }
    }

    #[test]
    fn circle_pieces_are_two_flat_graphs() {
        let pc = PlaneCurve::from_point_components(vec![circle(512, 1.0, [0.0, 0.0])]).unwrap();
        let (n, _) = pc.normalized();
        let set = PieceSet::build(&n, 0.1).unwrap();
        assert_eq!(set.pieces.len(), 2);
        for p in &set.pieces {
            assert!((p.theta_lo() - 0.1).abs() < 1e-12);
            assert!((p.theta_hi() - 0.1 - PI).abs() < 1e-12);
            assert!((p.eval(1.0).abs() - 0.5).abs() < 1e-4);
            assert!(p.next_over_seam.is_some());
        }
        let (x, _) = find_piece_crossings(&set, 1e-6);
        assert!(x.is_empty());
    }

    #[test]
    fn two_circles_have_four_bitangents() {
        let pc = PlaneCurve::from_point_components(vec![
            circle(512, 1.0, [-2.0, 0.1]),
            circle(512, 0.8, [2.0, -0.05]),
        ])
        .unwrap();
        let (n, _) = pc.normalized();
        let set = PieceSet::build(&n, 0.0).unwrap();
        let (x, _) = find_piece_crossings(&set, 1e-6);
        assert_eq!(x.len(), 4);
    }
}
