//! SVG drawing of a plane curve next to its graphic. The graphic panel shows
//! the window rectangle in line space, its left and right edges glued with
//! `d` reversed.

use std::fmt::Write;

use crate::curve_model::PlaneCurve;
use crate::graphic::{Graphic, LineCoord};

const PANEL: f64 = 420.0;
const GRAPHIC_W: f64 = 640.0;
const MARGIN: f64 = 30.0;
/// Half-height of the drawn `d` range for a unit-diameter curve.
const D_RANGE: f64 = 0.75;

const STOPS: [[f64; 3]; 5] = [
    [253.0, 231.0, 37.0],
    [94.0, 201.0, 98.0],
    [33.0, 145.0, 140.0],
    [59.0, 82.0, 139.0],
    [68.0, 1.0, 84.0],
];

fn color(t: f64) -> String {
    let x = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let k = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - k as f64;
    let c: Vec<u8> = (0..3)
        .map(|i| (STOPS[k][i] + f * (STOPS[k + 1][i] - STOPS[k][i])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

struct View {
    x0: f64,
    y0: f64,
    theta0: f64,
}

impl View {
    fn map(&self, theta: f64, d: f64) -> (f64, f64) {
        let x = self.x0 + (theta - self.theta0) / std::f64::consts::PI * GRAPHIC_W;
        let y = self.y0 + (D_RANGE - d) / (2.0 * D_RANGE) * PANEL;
        (x, y)
    }
}

fn path(points: &[(f64, f64)], closed: bool) -> String {
    let mut s = String::new();
    for (k, (x, y)) in points.iter().enumerate() {
        let _ = write!(s, "{}{x:.2},{y:.2} ", if k == 0 { "M" } else { "L" });
    }
    if closed {
        s.push('Z');
    }
    s
}

fn curve_panel(out: &mut String, pc: &PlaneCurve) {
    let (norm, _) = pc.normalized();
    let map = |p: [f64; 2]| (MARGIN + (p[0] + 0.5) * PANEL, MARGIN + (0.5 - p[1]) * PANEL);
    let _ = writeln!(
        out,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#ccc"/>"##
    );
    for c in &norm.components {
        let pts: Vec<(f64, f64)> = c.points.iter().map(|&p| map(p)).collect();
        let _ = writeln!(out, r##"<path d="{}" fill="none" stroke="black" stroke-width="1.2"/>"##, path(&pts, true));
    }
}

fn graphic_panel(out: &mut String, g: &Graphic) {
    let theta0 = g.theta0();
    let view = View {
        x0: 2.0 * MARGIN + PANEL,
        y0: MARGIN,
        theta0,
    };
    let max_w = g.faces.iter().map(|f| f.width).max().unwrap_or(0).max(1) as f64;
    const STEPS: usize = 12;
    for slab in &g.sweep.slabs {
        let (t0, t1) = (slab.theta_lo, slab.theta_hi);
        if t1 <= t0 {
            continue;
        }
        let ts: Vec<f64> = (0..=STEPS).map(|k| t0 + (t1 - t0) * k as f64 / STEPS as f64).collect();
        let edge = |gap: usize, upper: bool| -> Vec<(f64, f64)> {
            let idx = if upper { gap } else { gap.wrapping_sub(1) };
            ts.iter()
                .map(|&t| {
                    let d = match slab.order.get(idx) {
                        Some(&p) if !(gap == 0 && !upper) => g.pieces.pieces[p].eval(t),
                        _ if upper => D_RANGE,
                        _ => -D_RANGE,
                    };
                    view.map(t, d.clamp(-D_RANGE, D_RANGE))
                })
                .collect()
        };
        for gap in 0..=slab.order.len() {
            let face = g.sweep.cell_face[slab.cells[gap]];
            let mut poly = edge(gap, false);
            poly.extend(edge(gap, true).into_iter().rev());
            let fill = color(g.faces[face].width as f64 / max_w);
            let _ = writeln!(out, r##"<path d="{}" fill="{fill}" stroke="{fill}" stroke-width="0.3"/>"##, path(&poly, true));
        }
    }
    for piece in &g.pieces.pieces {
        let pts: Vec<(f64, f64)> = piece
            .samples
            .iter()
            .filter(|s| s.d.abs() <= D_RANGE)
            .map(|s| view.map(s.theta, s.d))
            .collect();
        if pts.len() > 1 {
            let _ = writeln!(out, r##"<path d="{}" fill="none" stroke="black" stroke-width="1"/>"##, path(&pts, false));
        }
    }
    let (x0, y0) = view.map(theta0, D_RANGE);
    let (x1, y1) = view.map(theta0 + std::f64::consts::PI, -D_RANGE);
    let _ = writeln!(
        out,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444"/>"##,
        x1 - x0,
        y1 - y0
    );
    for (x, dir) in [(x0, "▲"), (x1, "▼")] {
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="#d33" stroke-dasharray="6 4" stroke-width="1.5"/><text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle" fill="#d33">{dir}</text>"##,
            y0 - 6.0
        );
    }
    let window = |l: &LineCoord| g.to_window(*l);
    for c in &g.cusps {
        let (t, d) = window(&c.line);
        let (x, y) = view.map(t, d);
        let _ = writeln!(
            out,
            r##"<path d="M{:.2},{:.2} L{x:.2},{:.2} L{:.2},{:.2}" fill="none" stroke="#c00" stroke-width="1.5"/>"##,
            x - 4.0,
            y + 4.0,
            y - 3.0,
            x + 4.0,
            y + 4.0
        );
    }
    for v in &g.vertices {
        let (t, d) = window(&v.line);
        let (x, y) = view.map(t, d);
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"##);
    }
    for f in &g.faces {
        let (t, d) = window(&f.representative);
        let (x, y) = view.map(t, d.clamp(-D_RANGE, D_RANGE));
        let ink = if (f.width as f64 / max_w) > 0.5 { "white" } else { "black" };
        let _ = writeln!(
            out,
            r##"<text class="face-label" x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle" fill="{ink}">{}</text>"##,
            y + 4.0,
            f.width
        );
    }
}

/// Two-panel SVG: the normalized plane curve and its graphic with faces
/// shaded and labeled by width.
pub fn render_svg(g: &Graphic, pc: &PlaneCurve, title: &str) -> String {
    let w = 3.0 * MARGIN + PANEL + GRAPHIC_W;
    let h = 2.0 * MARGIN + PANEL + 20.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif">"##
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="white"/>"##);
    curve_panel(&mut out, pc);
    graphic_panel(&mut out, g);
    let _ = writeln!(
        out,
        r##"<text x="{MARGIN}" y="{:.2}" font-size="13">{}: v={} e={} f={} r={}</text>"##,
        h - 10.0,
        escape(title),
        g.counts.v,
        g.counts.e,
        g.counts.f,
        g.counts.r
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
