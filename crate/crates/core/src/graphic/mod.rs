//! The graphic: arrangement of the tangent-line dual curve in line space,
//! its faces, and the 2-width obtained by summing face widths.

mod dual;
mod line;
mod sweep;

pub use dual::{dual_curve, CritKind, CuspMarker, DualComponent, DualCurve};
pub use line::{line_intersections, LineCoord, TANGENCY_TOL};

pub(crate) use dual::{check_simple_inflections, find_piece_crossings, inflection_params, NearMiss, PieceCrossing, PieceSet};
pub(crate) use line::line_intersections_tol;
pub(crate) use sweep::Sweep;

use std::collections::VecDeque;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve_model::{Frame, PlaneCurve};
use crate::error::{Error, Result};

/// Seam placements tried in turn when an event lands on the seam.
const WINDOW_STARTS: [f64; 4] = [0.0, 0.013_819_660, 0.027_639_320, 0.041_458_980];

/// Events closer than this to the seam force a different window.
const SEAM_CLEARANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Disk,
    Annulus,
    Mobius,
    /// A region with more than one independent loop.
    Other,
}

/// Location on the curve: component and fractional sample index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParam {
    pub component: usize,
    pub param: f64,
}

/// A valence-4 vertex: a line tangent at two points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub line: LineCoord,
    pub params: [CurveParam; 2],
    pub interior: bool,
    /// Crossing angle of the two dual branches.
    pub angle: f64,
}

/// A dual-curve arc between consecutive vertices along one component.
/// Components without vertices contribute a single closed loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub component: usize,
    pub start_param: f64,
    pub end_param: f64,
    pub from: Option<usize>,
    pub to: Option<usize>,
    /// Faces on the two sides of the edge.
    pub faces: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub id: usize,
    pub representative: LineCoord,
    pub width: u32,
    pub topology: Topology,
    /// First Betti number of the region.
    pub loops: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphicCounts {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub r: usize,
    pub cusps: usize,
    pub annuli: usize,
    pub mobius: usize,
}

impl GraphicCounts {
    /// `v − e + f` with `f` counting disk faces.
    pub fn euler(&self) -> i64 {
        self.v as i64 - self.e as i64 + self.f as i64
    }

    /// `r ∈ {f+1, f+2}`, the latter exactly when a Möbius face exists.
    pub fn region_identity_holds(&self) -> bool {
        (self.r == self.f + 1 && self.mobius == 0) || (self.r == self.f + 2 && self.mobius == 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Graphic {
    pub frame: Frame,
    pub vertices: Vec<Vertex>,
    pub cusps: Vec<CuspMarker>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub counts: GraphicCounts,
    /// Index of the face containing the seed line far from the curve.
    pub seed_face: usize,
    #[serde(skip)]
    pub(crate) pieces: PieceSet,
    #[serde(skip)]
    pub(crate) sweep: Sweep,
    #[serde(skip)]
    pub(crate) adjacency: Vec<(usize, usize, i64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceCertificate {
    pub face: usize,
    pub line: LineCoord,
    pub count: usize,
    pub width: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthResult {
    pub w2: u64,
    /// Face widths in ascending order.
    pub face_widths: Vec<u32>,
    pub certificates: Vec<FaceCertificate>,
    pub counts: GraphicCounts,
}

impl WidthResult {
    /// Largest directly counted intersection number over all faces.
    pub fn max_line_count(&self) -> usize {
        self.certificates.iter().map(|c| c.count).max().unwrap_or(0)
    }
}

impl Graphic {
    pub(crate) fn theta0(&self) -> f64 {
        self.pieces.theta0
    }

    /// Window coordinates of an original-frame line.
    pub(crate) fn to_window(&self, line: LineCoord) -> (f64, f64) {
        let n = line.to_normalized(&self.frame);
        let l = LineCoord::new(n.theta - self.theta0(), n.d);
        (l.theta + self.theta0(), l.d)
    }

    /// Face containing an original-frame line.
    pub fn locate(&self, line: LineCoord) -> usize {
        let (t, d) = self.to_window(line);
        self.sweep.locate(&self.pieces, t, d)
    }

    /// Pairs of faces sharing an edge.
    pub fn adjacent_faces(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.adjacency.iter().map(|&(a, b, _)| (a.min(b), a.max(b))).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The window-coordinate line `(theta, d)` mapped to an original-frame line.
fn window_line(frame: &Frame, theta: f64, d: f64) -> LineCoord {
    LineCoord::new(theta, d).from_normalized(frame)
}

/// Piece decomposition in the first window whose seam is clear of cusp tips
/// and dual self-intersections, with the crossings and near misses found.
pub(crate) fn select_window(norm: &PlaneCurve, near_tol: f64) -> Result<(PieceSet, Vec<PieceCrossing>, Vec<NearMiss>)> {
    for &theta0 in &WINDOW_STARTS {
        let set = PieceSet::build(norm, theta0)?;
        if set.tips.iter().any(|t| near_seam(t.theta, theta0)) {
            continue;
        }
        let (crossings, near) = find_piece_crossings(&set, near_tol);
        if crossings.iter().any(|c| near_seam(c.theta, theta0)) {
            continue;
        }
        // a crossing sitting exactly on the seam is invisible to the piece
        // search and shows up as an order mismatch across the gluing
        if let Err(Error::ArrangementInconsistent(_)) = Sweep::run(&set, &crossings) {
            continue;
        }
        return Ok((set, crossings, near));
    }
    Err(Error::ArrangementInconsistent(
        "every window placement puts an event on the seam".into(),
    ))
}

fn near_seam(theta: f64, theta0: f64) -> bool {
    (theta - theta0).abs() < SEAM_CLEARANCE || (theta - theta0 - PI).abs() < SEAM_CLEARANCE
}

/// Builds the arrangement of the dual curve and labels faces by width,
/// propagated from the face of the seed line `(θ=0, d = 1.5 × radius)`.
pub fn build_graphic(dc: &DualCurve, pc: &PlaneCurve) -> Result<Graphic> {
    if dc.components.len() != pc.components.len() {
        return Err(Error::ArrangementInconsistent(
            "dual curve and plane curve disagree on components".into(),
        ));
    }
    let (norm, frame) = pc.normalized();
    let (set, crossings, _) = select_window(&norm, 0.0)?;
    let mut g = build_from(&norm, frame, set, &crossings)?;
    g.cusps = dc.components.iter().flat_map(|c| c.cusps.iter().copied()).collect();
    Ok(g)
}

fn build_from(norm: &PlaneCurve, frame: Frame, set: PieceSet, crossings: &[PieceCrossing]) -> Result<Graphic> {
    let theta0 = set.theta0;
    let sweep = Sweep::run(&set, crossings)?;
    let nf = sweep.face_count;

    // faces adjacent across each active piece of each slab
    let mut adjacency: Vec<(usize, usize, i64)> = Vec::new();
    for slab in &sweep.slabs {
        for (i, &p) in slab.order.iter().enumerate() {
            let below = sweep.cell_face[slab.cells[i]];
            let above = sweep.cell_face[slab.cells[i + 1]];
            adjacency.push((below, above, set.pieces[p].kind.jump()));
        }
    }
    adjacency.sort_unstable();
    adjacency.dedup();

    let seed_line = LineCoord::new(0.0, 0.75);
    let (st, sd) = {
        let l = LineCoord::new(seed_line.theta - theta0, seed_line.d);
        (l.theta + theta0, l.d)
    };
    let seed_face = sweep.locate(&set, st, sd);
    let widths = propagate_widths(nf, &adjacency, seed_face)?;

    let vertices: Vec<Vertex> = crossings
        .iter()
        .map(|c| {
            let (pa, pb) = (&set.pieces[c.a], &set.pieces[c.b]);
            let na = norm.components[pa.comp].len() as f64;
            let nb = norm.components[pb.comp].len() as f64;
            Vertex {
                line: window_line(&frame, c.theta, c.d),
                params: [
                    CurveParam {
                        component: pa.comp,
                        param: pa.param_at(c.theta).rem_euclid(na),
                    },
                    CurveParam {
                        component: pb.comp,
                        param: pb.param_at(c.theta).rem_euclid(nb),
                    },
                ],
                interior: pa.kind != pb.kind,
                angle: c.angle,
            }
        })
        .collect();

    let edges = build_edges(norm, &set, &sweep, &vertices)?;

    let mut faces = Vec::with_capacity(nf);
    let reps = representatives(&set, &sweep);
    for f in 0..nf {
        let topology = match (sweep.face_cycles[f], sweep.face_odd[f]) {
            (0, _) => Topology::Disk,
            (1, false) => Topology::Annulus,
            (1, true) => Topology::Mobius,
            _ => Topology::Other,
        };
        let (t, d) = reps[f].0;
        faces.push(Face {
            id: f,
            representative: window_line(&frame, t, d),
            width: widths[f],
            topology,
            loops: sweep.face_cycles[f],
            cells: reps[f].1,
        });
    }
    let v = vertices.len();
    let e = edges.iter().filter(|e| e.from.is_some()).count();
    let counts = GraphicCounts {
        v,
        e,
        f: faces.iter().filter(|f| f.topology == Topology::Disk).count(),
        r: nf,
        cusps: set.tips.len(),
        annuli: faces.iter().filter(|f| f.topology == Topology::Annulus).count(),
        mobius: faces.iter().filter(|f| f.topology == Topology::Mobius).count(),
    };
    // Euler characteristic of the open band: vertices − edges + Σ χ(face)
    let chi: i64 = faces.iter().map(|f| 1 - f.loops as i64).sum();
    if v as i64 - e as i64 + chi != 0 {
        return Err(Error::ArrangementInconsistent(format!(
            "Euler characteristic {} ≠ 0 (v={v}, e={e})",
            v as i64 - e as i64 + chi
        )));
    }
    Ok(Graphic {
        frame,
        vertices,
        cusps: Vec::new(),
        edges,
        faces,
        counts,
        seed_face,
        pieces: set,
        sweep,
        adjacency,
    })
}

/// Breadth-first width labeling: crossing a piece from above to below
/// changes the width by the piece's jump.
fn propagate_widths(nf: usize, adjacency: &[(usize, usize, i64)], seed: usize) -> Result<Vec<u32>> {
    let mut nbrs: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nf];
    for &(below, above, jump) in adjacency {
        if below == above {
            return Err(Error::ArrangementInconsistent(format!(
                "face {below} lies on both sides of an edge"
            )));
        }
        nbrs[above].push((below, jump));
        nbrs[below].push((above, -jump));
    }
    let mut w: Vec<Option<i64>> = vec![None; nf];
    w[seed] = Some(0);
    let mut queue = VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        let wf = w[f].unwrap_or(0);
        for &(g, delta) in &nbrs[f] {
            let wg = wf + delta;
            match w[g] {
                None => {
                    w[g] = Some(wg);
                    queue.push_back(g);
                }
                Some(x) if x != wg => {
                    return Err(Error::WidthMismatch(format!(
                        "face {g} reached with widths {x} and {wg}"
                    )))
                }
                _ => {}
            }
        }
    }
    w.into_iter()
        .enumerate()
        .map(|(f, x)| match x {
            Some(v) if v >= 0 => Ok(v as u32),
            Some(v) => Err(Error::WidthMismatch(format!("face {f} has negative width {v}"))),
            None => Err(Error::ArrangementInconsistent(format!("face {f} is unreachable"))),
        })
        .collect()
}

/// For each face, the window point farthest inside its best cell, and the
/// number of cells of the face.
fn representatives(set: &PieceSet, sweep: &Sweep) -> Vec<((f64, f64), usize)> {
    let nf = sweep.face_count;
    let mut best: Vec<(f64, (f64, f64))> = vec![(f64::NEG_INFINITY, (0.0, 0.0)); nf];
    let mut cells = vec![0usize; nf];
    const OPEN_MARGIN: f64 = 0.25;
    for slab in &sweep.slabs {
        let width = slab.theta_hi - slab.theta_lo;
        if width <= 0.0 {
            continue;
        }
        let mid = 0.5 * (slab.theta_lo + slab.theta_hi);
        let vals: Vec<f64> = slab.order.iter().map(|&p| set.pieces[p].eval(mid)).collect();
        for gap in 0..=vals.len() {
            let f = sweep.cell_face[slab.cells[gap]];
            cells[f] += 1;
            let (d, height) = match (gap.checked_sub(1).map(|i| vals[i]), vals.get(gap).copied()) {
                (Some(lo), Some(hi)) => (0.5 * (lo + hi), hi - lo),
                (Some(lo), None) => (lo + OPEN_MARGIN, 2.0 * OPEN_MARGIN),
                (None, Some(hi)) => (hi - OPEN_MARGIN, 2.0 * OPEN_MARGIN),
                (None, None) => (0.0, 2.0 * OPEN_MARGIN),
            };
            let score = (0.5 * height).min(0.5 * width);
            if score > best[f].0 {
                best[f] = (score, (mid, d));
            }
        }
    }
    best.into_iter().zip(cells).map(|((_, p), c)| (p, c)).collect()
}

fn build_edges(norm: &PlaneCurve, set: &PieceSet, sweep: &Sweep, vertices: &[Vertex]) -> Result<Vec<Edge>> {
    let mut edges = Vec::new();
    for (ci, comp) in norm.components.iter().enumerate() {
        let n = comp.len() as f64;
        let mut occ: Vec<(f64, usize)> = vertices
            .iter()
            .enumerate()
            .flat_map(|(vi, v)| {
                v.params
                    .iter()
                    .filter(|p| p.component == ci)
                    .map(move |p| (p.param, vi))
            })
            .collect();
        occ.sort_by(|a, b| a.0.total_cmp(&b.0));
        let spans: Vec<(f64, f64, Option<usize>, Option<usize>)> = if occ.is_empty() {
            vec![(0.0, n, None, None)]
        } else {
            (0..occ.len())
                .map(|i| {
                    let (s0, v0) = occ[i];
                    let (s1, v1) = occ[(i + 1) % occ.len()];
                    let s1 = if s1 <= s0 { s1 + n } else { s1 };
                    (s0, s1, Some(v0), Some(v1))
                })
                .collect()
        };
        for (s0, s1, from, to) in spans {
            // the midpoint can land on a cusp tip, which belongs to no slab
            let faces = [0.5, 0.382, 0.618, 0.25, 0.75]
                .iter()
                .find_map(|f| edge_faces(set, sweep, ci, s0 + f * (s1 - s0), n).ok())
                .map_or_else(|| edge_faces(set, sweep, ci, 0.5 * (s0 + s1), n), Ok)?;
            edges.push(Edge {
                component: ci,
                start_param: s0,
                end_param: s1.rem_euclid(n),
                from,
                to,
                faces,
            });
        }
    }
    Ok(edges)
}

/// Faces on both sides of the dual curve at curve parameter `s`.
fn edge_faces(set: &PieceSet, sweep: &Sweep, comp: usize, s: f64, n: f64) -> Result<[usize; 2]> {
    for (pid, piece) in set.pieces.iter().enumerate() {
        if piece.comp != comp {
            continue;
        }
        if let Some(theta) = piece.theta_of_param(s, n) {
            let slab = &sweep.slabs[sweep.slab_at(theta)];
            if let Some(pos) = slab.order.iter().position(|&p| p == pid) {
                return Ok([
                    sweep.cell_face[slab.cells[pos]],
                    sweep.cell_face[slab.cells[pos + 1]],
                ]);
            }
        }
    }
    Err(Error::ArrangementInconsistent(format!(
        "edge at parameter {s} of component {comp} is not on any active piece"
    )))
}

/// Counts intersections at each face representative and checks them against
/// the propagated widths. Faces whose representative is not certified
/// transverse fall back to 16 random interior points.
pub fn assign_widths(g: &Graphic, pc: &PlaneCurve) -> Result<WidthResult> {
    let (norm, _) = pc.normalized();
    let tol = TANGENCY_TOL;
    let certs: Vec<Result<FaceCertificate>> = g
        .faces
        .par_iter()
        .map(|face| {
            let (t, d) = g.to_window(face.representative);
            let direct = line_intersections_tol(&norm, LineCoord::new(t, d), tol)
                .map(|c| (c, face.representative));
            let (count, line) = match direct {
                Ok(x) => x,
                Err(Error::TangentLine) => fallback_count(g, &norm, face.id, tol)?,
                Err(e) => return Err(e),
            };
            if count != face.width as usize {
                return Err(Error::WidthMismatch(format!(
                    "face {} propagated width {} but its representative meets the curve {} times",
                    face.id, face.width, count
                )));
            }
            Ok(FaceCertificate {
                face: face.id,
                line,
                count,
                width: face.width,
            })
        })
        .collect();
    let certificates = certs.into_iter().collect::<Result<Vec<_>>>()?;
    for &(a, b, _) in &g.adjacency {
        let (wa, wb) = (g.faces[a].width as i64, g.faces[b].width as i64);
        if (wa - wb).abs() != 2 {
            return Err(Error::WidthMismatch(format!(
                "adjacent faces {a} and {b} have widths {wa} and {wb}"
            )));
        }
    }
    let mut face_widths: Vec<u32> = g.faces.iter().map(|f| f.width).collect();
    face_widths.sort_unstable();
    Ok(WidthResult {
        w2: face_widths.iter().map(|&w| w as u64).sum(),
        face_widths,
        certificates,
        counts: g.counts,
    })
}

fn fallback_count(g: &Graphic, norm: &PlaneCurve, face: usize, tol: f64) -> Result<(usize, LineCoord)> {
    let cells: Vec<usize> = (0..g.sweep.cells.len())
        .filter(|&c| g.sweep.cell_face[c] == face)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(face as u64);
    for _ in 0..16 {
        let cell = g.sweep.cells[cells[rng.gen_range(0..cells.len())]];
        let slab = &g.sweep.slabs[cell.slab];
        if slab.theta_hi <= slab.theta_lo {
            continue;
        }
        let t = rng.gen_range(slab.theta_lo..slab.theta_hi);
        let vals: Vec<f64> = slab.order.iter().map(|&p| g.pieces.pieces[p].eval(t)).collect();
        let lo = if cell.gap == 0 { vals.first().map_or(-1.0, |v| v - 0.5) } else { vals[cell.gap - 1] };
        let hi = vals.get(cell.gap).copied().unwrap_or(lo + 0.5);
        if hi <= lo {
            continue;
        }
        let d = rng.gen_range(lo..hi);
        if let Ok(c) = line_intersections_tol(norm, LineCoord::new(t, d), tol) {
            return Ok((c, window_line(&g.frame, t, d)));
        }
    }
    Err(Error::WidthMismatch(format!(
        "no certified transverse line found in face {face}"
    )))
}

/// 2-width of a plane curve.
pub fn width2(pc: &PlaneCurve) -> Result<WidthResult> {
    let dc = dual_curve(pc);
    let g = build_graphic(&dc, pc)?;
    assign_widths(&g, pc)
}

/// Builds the graphic and its width result together.
pub fn analyze_graphic(pc: &PlaneCurve) -> Result<(Graphic, WidthResult)> {
    let dc = dual_curve(pc);
    let g = build_graphic(&dc, pc)?;
    let w = assign_widths(&g, pc)?;
    Ok((g, w))
}
