//! Brute-force 2-width: count intersections over a grid of lines, quarantine
//! cells the dual curve may cross, and flood-fill the rest into regions.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve_model::PlaneCurve;
use crate::error::{Error, Result};
use crate::geom::{dot, hermite, hermite_critical_points, perp, unit_angle, Vec2};
use crate::graphic::inflection_params;

/// Sentinel count for cells the dual curve may cross.
pub const TANGENT: u32 = u32::MAX;

/// Fraction of uncertain area above which a scan is rejected.
pub const MAX_UNCERTAIN: f64 = 0.05;

/// Smallest region counted, in base cells.
pub const MIN_REGION_CELLS: usize = 8;

/// Half-height of the scanned `d` range for a unit-diameter curve.
const D_RANGE: f64 = 0.75;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    pub width: u32,
    /// Area in finest-level cells.
    pub area: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScan {
    /// Columns in θ and rows in d.
    pub resolution: (usize, usize),
    pub refine_rounds: u32,
    /// Row-major per column: `counts[i * nd + r]`, `TANGENT` if uncertain
    /// at the base resolution.
    #[serde(skip)]
    pub counts: Vec<u32>,
    /// Region id per base cell, `u32::MAX` for refined or uncertain cells.
    #[serde(skip)]
    pub region_labels: Vec<u32>,
    pub regions: Vec<Region>,
    /// Certified islands smaller than the minimum region size, left out of
    /// the estimate.
    pub fragments: usize,
    /// Fraction of the scanned area with a certified count.
    pub confidence: f64,
    pub estimate: u64,
}

impl GridScan {
    /// Region widths keyed by region id.
    pub fn region_widths(&self) -> BTreeMap<usize, u32> {
        self.regions.iter().map(|r| (r.id, r.width)).collect()
    }

    /// Region widths in ascending order.
    pub fn width_multiset(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.regions.iter().map(|r| r.width).collect();
        w.sort_unstable();
        w
    }

    /// Binary greymap of the base grid, θ along x and d along y (top = +d);
    /// uncertain cells are black.
    pub fn write_pgm<W: Write>(&self, mut w: W) -> Result<()> {
        let (nt, nd) = self.resolution;
        let max = self.counts.iter().filter(|&&c| c != TANGENT).max().copied().unwrap_or(0).max(1);
        write!(w, "P5\n{nt} {nd}\n255\n")?;
        let mut row = vec![0u8; nt];
        for r in (0..nd).rev() {
            for (i, px) in row.iter_mut().enumerate() {
                let c = self.counts[i * nd + r];
                *px = if c == TANGENT {
                    0
                } else {
                    (48 + (c as u64 * 207 / max as u64)) as u8
                };
            }
            w.write_all(&row)?;
        }
        Ok(())
    }
}

/// Where the dual curve may lie within a column of width `dtheta` centered at
/// one angle, and the intersection profile of lines at that angle.
struct Profile {
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// `(center, half_width)` sorted by center.
    bands: Vec<(f64, f64)>,
    max_half: f64,
}

struct Tip {
    theta: f64,
    d: f64,
    slope: f64,
}

impl Profile {
    fn at(pc: &PlaneCurve, tips: &[Tip], theta: f64, dtheta: f64, dd: f64) -> Profile {
        let n = unit_angle(theta);
        let nt = perp(n);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let mut bands = Vec::new();
        let h2 = 0.125 * dtheta * dtheta;
        for comp in &pc.components {
            let m = comp.len();
            for j in 0..m {
                let k = (j + 1) % m;
                let (p0, p1) = (comp.points[j], comp.points[k]);
                let (s0, s1) = (comp.seg_slope(j), comp.seg_slope(k));
                let (y0, y1) = (dot(p0, n), dot(p1, n));
                let (m0, m1) = (dot(s0, n), dot(s1, n));
                let (crit, nc) = hermite_critical_points(y0, m0, y1, m1);
                let mut prev = y0;
                let mut knots: [f64; 3] = [0.0; 3];
                let mut nk = 0;
                for &t in &crit[..nc] {
                    if t > 0.0 && t < 1.0 {
                        knots[nk] = t;
                        nk += 1;
                    }
                }
                knots[nk] = 1.0;
                for &t in &knots[..=nk] {
                    let y = if t == 1.0 { y1 } else { hermite(y0, m0, y1, m1, t) };
                    lo.push(prev.min(y));
                    hi.push(prev.max(y));
                    if t < 1.0 {
                        let px = hermite(p0[0], s0[0], p1[0], s1[0], t);
                        let py = hermite(p0[1], s0[1], p1[1], s1[1], t);
                        let kappa = (1.0 - t) * comp.curvature[j] + t * comp.curvature[k];
                        let rho = if kappa.abs() > 1e-300 { 1.0 / kappa.abs() } else { f64::INFINITY };
                        let slope = dot([px, py], nt);
                        let half = 0.5 * slope.abs() * dtheta + 2.0 * (rho + y.abs()) * h2;
                        bands.push((y, half.min(4.0)));
                    }
                    prev = y;
                }
            }
        }
        for tip in tips {
            let mut delta = theta - tip.theta;
            let mut d = tip.d;
            while delta > 0.5 * PI {
                delta -= PI;
                d = -d;
            }
            while delta <= -0.5 * PI {
                delta += PI;
                d = -d;
            }
            if delta.abs() <= 1.5 * dtheta {
                bands.push((d, tip.slope.abs() * 2.0 * dtheta + 4.0 * dd));
            }
        }
        lo.sort_by(f64::total_cmp);
        hi.sort_by(f64::total_cmp);
        bands.sort_by(|a, b| a.0.total_cmp(&b.0));
        let max_half = bands.iter().map(|b| b.1).fold(0.0, f64::max);
        Profile { lo, hi, bands, max_half }
    }

    /// Intersection count of the line at height `d`.
    fn count(&self, d: f64) -> u32 {
        let below = self.lo.partition_point(|&x| x < d);
        let done = self.hi.partition_point(|&x| x <= d);
        (below - done) as u32
    }

    /// Count for lines in `[d_lo, d_hi]` if no dual branch can enter it.
    fn certify(&self, d_lo: f64, d_hi: f64) -> u32 {
        let start = self.bands.partition_point(|b| b.0 < d_lo - self.max_half);
        for &(c, h) in &self.bands[start..] {
            if c > d_hi + self.max_half {
                break;
            }
            if c + h >= d_lo && c - h <= d_hi {
                return TANGENT;
            }
        }
        self.count(0.5 * (d_lo + d_hi))
    }
}

fn cusp_tips(pc: &PlaneCurve) -> Vec<Tip> {
    let mut tips = Vec::new();
    for comp in &pc.components {
        for s in inflection_params(comp) {
            let m = comp.len();
            let j = (s.floor() as usize).min(m - 1);
            let t = s - j as f64;
            let tan = {
                let a = comp.tangents[j];
                let b = comp.tangents[(j + 1) % m];
                [(1.0 - t) * a[0] + t * b[0], (1.0 - t) * a[1] + t * b[1]]
            };
            let p: Vec2 = comp.point_at(s);
            let nrm = perp(tan);
            let theta = nrm[1].atan2(nrm[0]).rem_euclid(PI);
            let n = unit_angle(theta);
            tips.push(Tip {
                theta,
                d: dot(p, n),
                slope: dot(p, perp(n)),
            });
        }
    }
    tips
}

/// Per-column cell states: `Ok(count)` for certified base cells, or the
/// refined block of leaf counts (`TANGENT` where still uncertain).
enum CellState {
    Whole(u32),
    Split(Vec<u32>),
}

/// Grid estimate of the 2-width on `nθ × nd` cells over `θ ∈ [0, π)`,
/// `|d| ≤ 1.5 × radius`, refining uncertain cells `refine_rounds` times.
pub fn grid_width2(pc: &PlaneCurve, resolution: (usize, usize), refine_rounds: u32) -> Result<(u64, GridScan)> {
    let scan = grid_scan(pc, resolution, refine_rounds)?;
    let uncertain = 1.0 - scan.confidence;
    if uncertain > MAX_UNCERTAIN {
        return Err(Error::LowConfidence {
            tangent_fraction: uncertain,
        });
    }
    Ok((scan.estimate, scan))
}

/// The scan without the confidence check.
pub fn grid_scan(pc: &PlaneCurve, resolution: (usize, usize), refine_rounds: u32) -> Result<GridScan> {
    let (nt, nd) = resolution;
    if nt < 4 || nd < 4 || refine_rounds > 4 {
        return Err(Error::InvalidCurve(format!(
            "grid resolution {nt}x{nd} with {refine_rounds} refinement rounds is out of range"
        )));
    }
    pc.validate()?;
    let (norm, _) = pc.normalized();
    let tips = cusp_tips(&norm);
    let dtheta = PI / nt as f64;
    let dd = 2.0 * D_RANGE / nd as f64;
    let side = 1usize << refine_rounds;

    let columns: Vec<Vec<CellState>> = (0..nt)
        .into_par_iter()
        .map(|i| {
            let theta = (i as f64 + 0.5) * dtheta;
            let base = Profile::at(&norm, &tips, theta, dtheta, dd);
            let mut cells: Vec<CellState> = (0..nd)
                .map(|r| {
                    let d0 = -D_RANGE + r as f64 * dd;
                    CellState::Whole(base.certify(d0, d0 + dd))
                })
                .collect();
            if refine_rounds == 0 {
                return cells;
            }
            // profiles of the finest sub-columns, coarser levels derived by halving
            let mut level_profiles: Vec<Vec<Profile>> = Vec::new();
            for k in 1..=refine_rounds {
                let sub = 1usize << k;
                let w = dtheta / sub as f64;
                level_profiles.push(
                    (0..sub)
                        .map(|a| Profile::at(&norm, &tips, i as f64 * dtheta + (a as f64 + 0.5) * w, w, dd / sub as f64))
                        .collect(),
                );
            }
            for (r, cell) in cells.iter_mut().enumerate() {
                if !matches!(cell, CellState::Whole(TANGENT)) {
                    continue;
                }
                let d0 = -D_RANGE + r as f64 * dd;
                let mut leaves = vec![TANGENT; side * side];
                refine(&level_profiles, 1, refine_rounds, 0, 0, d0, dd, &mut leaves, side);
                *cell = CellState::Split(leaves);
            }
            cells
        })
        .collect();

    Ok(flood(columns, nt, nd, side, refine_rounds))
}

/// Fills the leaves of the block `(a, b)` at level `k` (sub-column `a`,
/// sub-row `b`).
#[allow(clippy::too_many_arguments)]
fn refine(levels: &[Vec<Profile>], k: u32, rounds: u32, a: usize, b: usize, d0: f64, dd: f64, leaves: &mut [u32], side: usize) {
    let sub = 1usize << k;
    let h = dd / sub as f64;
    for da in 0..2 {
        for db in 0..2 {
            let (ca, cb) = (2 * a + da, 2 * b + db);
            let lo = d0 + cb as f64 * h;
            let c = levels[(k - 1) as usize][ca].certify(lo, lo + h);
            if c != TANGENT {
                let span = side >> k;
                for x in ca * span..(ca + 1) * span {
                    for y in cb * span..(cb + 1) * span {
                        leaves[x * side + y] = c;
                    }
                }
            } else if k < rounds {
                refine(levels, k + 1, rounds, ca, cb, d0, dd, leaves, side);
            }
        }
    }
}

struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = p;
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

fn flood(columns: Vec<Vec<CellState>>, nt: usize, nd: usize, side: usize, rounds: u32) -> GridScan {
    // node ids: base cells first, then leaves of split cells
    let base = nt * nd;
    let mut leaf_base = vec![u32::MAX; base];
    let mut counts = vec![0u32; base];
    let mut node_count: Vec<u32> = Vec::with_capacity(base);
    let mut node_area: Vec<usize> = Vec::with_capacity(base);
    let leaf_area = 1usize;
    for (i, col) in columns.iter().enumerate() {
        for (r, st) in col.iter().enumerate() {
            let c = match st {
                CellState::Whole(c) => *c,
                CellState::Split(_) => TANGENT,
            };
            counts[i * nd + r] = c;
            node_count.push(c);
            node_area.push(side * side * leaf_area);
        }
    }
    for (i, col) in columns.iter().enumerate() {
        for (r, st) in col.iter().enumerate() {
            if let CellState::Split(leaves) = st {
                leaf_base[i * nd + r] = node_count.len() as u32;
                node_count.extend_from_slice(leaves);
                node_area.extend(std::iter::repeat(leaf_area).take(leaves.len()));
            }
        }
    }
    let mut dsu = Dsu {
        parent: (0..node_count.len() as u32).collect(),
    };
    // leaf node of base cell `cell` at sub-position (x, y)
    let leaf = |cell: usize, x: usize, y: usize| -> u32 {
        if leaf_base[cell] == u32::MAX {
            cell as u32
        } else {
            leaf_base[cell] + (x * side + y) as u32
        }
    };
    let link = |dsu: &mut Dsu, a: u32, b: u32| {
        let ca = node_count[a as usize];
        if ca != TANGENT && ca == node_count[b as usize] {
            dsu.union(a, b);
        }
    };
    for i in 0..nt {
        for r in 0..nd {
            let cell = i * nd + r;
            if leaf_base[cell] != u32::MAX {
                for x in 0..side {
                    for y in 0..side {
                        if x + 1 < side {
                            link(&mut dsu, leaf(cell, x, y), leaf(cell, x + 1, y));
                        }
                        if y + 1 < side {
                            link(&mut dsu, leaf(cell, x, y), leaf(cell, x, y + 1));
                        }
                    }
                }
            }
            if r + 1 < nd {
                let up = cell + 1;
                for x in 0..side {
                    link(&mut dsu, leaf(cell, x, side - 1), leaf(up, x, 0));
                }
            }
            if i + 1 < nt {
                let right = cell + nd;
                for y in 0..side {
                    link(&mut dsu, leaf(cell, side - 1, y), leaf(right, 0, y));
                }
            } else {
                // seam: (π, d) is glued to (0, −d)
                let right = nd - 1 - r;
                for y in 0..side {
                    link(&mut dsu, leaf(cell, side - 1, y), leaf(right, 0, side - 1 - y));
                }
            }
        }
    }
    let mut root_region: BTreeMap<u32, usize> = BTreeMap::new();
    let mut regions: Vec<Region> = Vec::new();
    let mut certified = 0usize;
    let mut total = 0usize;
    for node in 0..node_count.len() as u32 {
        let is_split_parent = (node as usize) < base && leaf_base[node as usize] != u32::MAX;
        if is_split_parent {
            continue;
        }
        total += node_area[node as usize];
        let c = node_count[node as usize];
        if c == TANGENT {
            continue;
        }
        certified += node_area[node as usize];
        let root = dsu.find(node);
        let next = regions.len();
        let id = *root_region.entry(root).or_insert(next);
        if id == next {
            regions.push(Region { id, width: c, area: 0 });
        }
        regions[id].area += node_area[node as usize];
    }
    // islands of certified leaves inside uncertain bands
    let min_area = MIN_REGION_CELLS * side * side;
    let mut renumber = vec![u32::MAX; regions.len()];
    let mut kept = Vec::new();
    let mut fragments = 0;
    for r in regions {
        if r.area < min_area {
            fragments += 1;
            certified -= r.area;
        } else {
            renumber[r.id] = kept.len() as u32;
            kept.push(Region { id: kept.len(), ..r });
        }
    }
    let regions = kept;
    let mut region_labels = vec![u32::MAX; base];
    for cell in 0..base {
        if leaf_base[cell] == u32::MAX && counts[cell] != TANGENT {
            region_labels[cell] = renumber[root_region[&dsu.find(cell as u32)]];
        }
    }
    let estimate = regions.iter().map(|r| r.width as u64).sum();
    GridScan {
        resolution: (nt, nd),
        refine_rounds: rounds,
        counts,
        region_labels,
        regions,
        fragments,
        confidence: certified as f64 / total as f64,
        estimate,
    }
}
