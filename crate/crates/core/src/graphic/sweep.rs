//! Sweep over the window `[θ0, θ0+π]` of line space.
//!
//! Between consecutive events (crossings, cusp births and deaths) the active
//! pieces keep a fixed vertical order; the gaps between them are cells.
//! Cells are linked across events and across the seam (with `d ↦ −d`), and
//! the connected components of that link graph are the faces.

use super::dual::{End, PieceCrossing, PieceSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Slab {
    pub theta_lo: f64,
    pub theta_hi: f64,
    /// Active pieces bottom to top.
    pub order: Vec<usize>,
    /// Cell id of each gap; gap `i` lies below `order[i]`.
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Cell {
    pub slab: usize,
    pub gap: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Sweep {
    pub slabs: Vec<Slab>,
    pub cells: Vec<Cell>,
    pub cell_face: Vec<usize>,
    pub face_count: usize,
    /// Independent cycles per face in the cell graph.
    pub face_cycles: Vec<usize>,
    /// Whether some cycle of the face crosses the seam an odd number of times.
    pub face_odd: Vec<bool>,
}

#[derive(Debug, Clone, Copy)]
enum EventKind {
    Cross { a: usize, b: usize },
    Birth { tip: usize, a: usize, b: usize },
    Death { a: usize, b: usize },
}

#[derive(Debug, Clone, Copy)]
struct Event {
    theta: f64,
    kind: EventKind,
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, par) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= par;
        (root, self.parity[x])
    }

    /// Returns `Some(cycle_parity)` when the link closes a cycle.
    fn union(&mut self, a: usize, b: usize, odd: bool) -> Option<bool> {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return Some(pa ^ pb ^ odd);
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ odd;
        None
    }
}

fn collect_events(set: &PieceSet, crossings: &[PieceCrossing]) -> Result<Vec<Event>> {
    let mut events: Vec<Event> = crossings
        .iter()
        .map(|c| Event {
            theta: c.theta,
            kind: EventKind::Cross { a: c.a, b: c.b },
        })
        .collect();
    let mut starts: Vec<Vec<usize>> = vec![Vec::new(); set.tips.len()];
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); set.tips.len()];
    for (id, p) in set.pieces.iter().enumerate() {
        if let End::Cusp(t) = p.start {
            starts[t].push(id);
        }
        if let End::Cusp(t) = p.end {
            ends[t].push(id);
        }
    }
    for (tip, t) in set.tips.iter().enumerate() {
        match (starts[tip].as_slice(), ends[tip].as_slice()) {
            ([a, b], []) => events.push(Event {
                theta: t.theta,
                kind: EventKind::Birth { tip, a: *a, b: *b },
            }),
            ([], [a, b]) => events.push(Event {
                theta: t.theta,
                kind: EventKind::Death { a: *a, b: *b },
            }),
            _ => {
                return Err(Error::ArrangementInconsistent(format!(
                    "cusp {tip} does not join two pieces on one side"
                )))
            }
        }
    }
    events.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    Ok(events)
}

impl Sweep {
    pub fn run(set: &PieceSet, crossings: &[PieceCrossing]) -> Result<Sweep> {
        let events = collect_events(set, crossings)?;
        let theta0 = set.theta0;
        let theta1 = set.theta1();
        let mut order: Vec<usize> = set
            .pieces
            .iter()
            .enumerate()
            .filter(|(_, p)| p.start == End::Seam)
            .map(|(i, _)| i)
            .collect();
        order.sort_by(|&a, &b| set.pieces[a].samples[0].d.total_cmp(&set.pieces[b].samples[0].d));
        let mut sweep = Sweep {
            slabs: Vec::new(),
            cells: Vec::new(),
            cell_face: Vec::new(),
            face_count: 0,
            face_cycles: Vec::new(),
            face_odd: Vec::new(),
        };
        let mut links: Vec<(usize, usize, bool)> = Vec::new();
        sweep.open_slab(theta0, order.clone());
        for ev in &events {
            let prev = sweep.slabs.len() - 1;
            sweep.slabs[prev].theta_hi = ev.theta;
            sweep.check_order(set, prev)?;
            let m = order.len();
            // gap correspondence old -> new
            let mut map: Vec<(usize, usize)> = Vec::new();
            match ev.kind {
                EventKind::Cross { a, b } => {
                    let pa = position(&order, a)?;
                    let pb = position(&order, b)?;
                    if pa.abs_diff(pb) != 1 {
                        return Err(Error::ArrangementInconsistent(format!(
                            "crossing pieces {a},{b} not adjacent at θ={}",
                            ev.theta
                        )));
                    }
                    let k = pa.max(pb);
                    order.swap(pa, pb);
                    for i in 0..=m {
                        if i != k {
                            map.push((i, i));
                        }
                    }
                }
                EventKind::Birth { tip, a, b } => {
                    let t = set.tips[tip];
                    let k = order
                        .iter()
                        .filter(|&&p| set.pieces[p].eval(t.theta) < t.d)
                        .count();
                    let probe = set.pieces[a].samples[1]
                        .theta
                        .min(set.pieces[b].samples[1].theta);
                    let (lower, upper) = if set.pieces[a].eval(probe) <= set.pieces[b].eval(probe) {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    order.insert(k, upper);
                    order.insert(k, lower);
                    for i in 0..=m {
                        match i.cmp(&k) {
                            std::cmp::Ordering::Less => map.push((i, i)),
                            std::cmp::Ordering::Equal => {
                                map.push((i, k));
                                map.push((i, k + 2));
                            }
                            std::cmp::Ordering::Greater => map.push((i, i + 2)),
                        }
                    }
                }
                EventKind::Death { a, b } => {
                    let pa = position(&order, a)?;
                    let pb = position(&order, b)?;
                    if pa.abs_diff(pb) != 1 {
                        return Err(Error::ArrangementInconsistent(format!(
                            "dying pieces {a},{b} not adjacent at θ={}",
                            ev.theta
                        )));
                    }
                    let k = pa.min(pb);
                    order.remove(k + 1);
                    order.remove(k);
                    for i in 0..=m {
                        if i < k {
                            map.push((i, i));
                        } else if i == k || i == k + 2 {
                            map.push((i, k));
                        } else if i > k + 2 {
                            map.push((i, i - 2));
                        }
                    }
                }
            }
            sweep.open_slab(ev.theta, order.clone());
            let next = sweep.slabs.len() - 1;
            for (i, j) in map {
                links.push((sweep.slabs[prev].cells[i], sweep.slabs[next].cells[j], false));
            }
        }
        let last = sweep.slabs.len() - 1;
        sweep.slabs[last].theta_hi = theta1;
        sweep.check_order(set, last)?;
        // seam gluing: the order at θ0+π, reversed, continues into the order at θ0
        let first_order = &sweep.slabs[0].order;
        let last_order = &sweep.slabs[last].order;
        if first_order.len() != last_order.len() {
            return Err(Error::ArrangementInconsistent(format!(
                "{} pieces leave the seam but {} return",
                first_order.len(),
                last_order.len()
            )));
        }
        let m = last_order.len();
        for (j, &p) in last_order.iter().enumerate() {
            if set.pieces[p].end != End::Seam || set.pieces[p].next_over_seam != Some(first_order[m - 1 - j]) {
                return Err(Error::ArrangementInconsistent(format!(
                    "seam order mismatch at position {j}: a crossing was missed"
                )));
            }
        }
        for i in 0..=m {
            links.push((sweep.slabs[last].cells[i], sweep.slabs[0].cells[m - i], true));
        }
        sweep.label_faces(&links);
        Ok(sweep)
    }

    fn open_slab(&mut self, theta_lo: f64, order: Vec<usize>) {
        let slab = self.slabs.len();
        let cells = (0..=order.len())
            .map(|gap| {
                self.cells.push(Cell { slab, gap });
                self.cells.len() - 1
            })
            .collect();
        self.slabs.push(Slab {
            theta_lo,
            theta_hi: theta_lo,
            order,
            cells,
        });
    }

    /// Numeric check that the symbolic order matches the pieces mid-slab.
    fn check_order(&self, set: &PieceSet, slab: usize) -> Result<()> {
        let s = &self.slabs[slab];
        if s.theta_hi - s.theta_lo < 1e-9 {
            return Ok(());
        }
        let mid = 0.5 * (s.theta_lo + s.theta_hi);
        let vals: Vec<f64> = s.order.iter().map(|&p| set.pieces[p].eval(mid)).collect();
        for w in vals.windows(2) {
            if w[0] > w[1] {
                return Err(Error::ArrangementInconsistent(format!(
                    "pieces out of order at θ={mid}: a crossing was missed"
                )));
            }
        }
        Ok(())
    }

    fn label_faces(&mut self, links: &[(usize, usize, bool)]) {
        let n = self.cells.len();
        let mut uf = ParityUnionFind::new(n);
        let mut cycles: Vec<(usize, bool)> = Vec::new();
        for &(a, b, odd) in links {
            if let Some(par) = uf.union(a, b, odd) {
                cycles.push((a, par));
            }
        }
        let mut root_face = vec![usize::MAX; n];
        self.cell_face = vec![0; n];
        let mut count = 0;
        for c in 0..n {
            let (r, _) = uf.find(c);
            if root_face[r] == usize::MAX {
                root_face[r] = count;
                count += 1;
            }
            self.cell_face[c] = root_face[r];
        }
        self.face_count = count;
        self.face_cycles = vec![0; count];
        self.face_odd = vec![false; count];
        for (cell, par) in cycles {
            let f = self.cell_face[cell];
            self.face_cycles[f] += 1;
            self.face_odd[f] |= par;
        }
    }

    /// Slab containing `theta` (window coordinates).
    pub fn slab_at(&self, theta: f64) -> usize {
        match self
            .slabs
            .binary_search_by(|s| s.theta_lo.total_cmp(&theta))
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }

    /// Face containing the window-coordinate point `(theta, d)`.
    pub fn locate(&self, set: &PieceSet, theta: f64, d: f64) -> usize {
        let s = &self.slabs[self.slab_at(theta)];
        let gap = s
            .order
            .iter()
            .filter(|&&p| set.pieces[p].eval(theta) < d)
            .count();
        self.cell_face[s.cells[gap]]
    }
}

fn position(order: &[usize], piece: usize) -> Result<usize> {
    order.iter().position(|&p| p == piece).ok_or_else(|| {
        Error::ArrangementInconsistent(format!("piece {piece} is not active at its event"))
    })
}
