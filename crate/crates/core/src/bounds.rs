//! Verdicts for the inequalities relating 2-width to crossings, line counts,
//! braid crossings and total curvature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve_model::{project_xy, ParamCurve3, PlaneCurve};
use crate::error::{Error, Result};
use crate::features::{find_crossings, total_curvature, FeatureReport};
use crate::geom::{norm, sub};
use crate::graphic::{inflection_params, WidthResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }

    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
        }
    }

    fn slack(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Relation::Ge | Relation::Gt => lhs - rhs,
            Relation::Le => rhs - lhs,
            Relation::Eq => -(lhs - rhs).abs(),
        }
    }
}

/// One link `lhs relation rhs` of a chain of inequalities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub formula: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub holds: bool,
}

impl Link {
    fn new(formula: &str, lhs: f64, relation: Relation, rhs: f64) -> Link {
        Link {
            formula: formula.into(),
            lhs,
            relation,
            rhs,
            holds: relation.holds(lhs, rhs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub formula: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    pub holds: bool,
    /// Distance from violation, positive when the bound holds strictly.
    pub slack: f64,
    /// False when the bound's premise does not apply to the curve.
    pub applicable: bool,
    /// Intermediate inequalities, if the bound is a chain.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub links: Vec<Link>,
}

impl BoundReport {
    fn new(name: &str, formula: &str, lhs: f64, relation: Relation, rhs: f64) -> BoundReport {
        BoundReport {
            name: name.into(),
            formula: formula.into(),
            lhs,
            relation,
            rhs,
            holds: relation.holds(lhs, rhs),
            slack: relation.slack(lhs, rhs),
            applicable: true,
            links: Vec::new(),
        }
    }
}

/// `c ≤ w2/2` together with the chain `w2 ≥ 2(r − z) ≥ 2f = 2v ≥ 2c`, where
/// `z` is the number of width-0 faces. The uncorrected link `w2 ≥ 2r` and
/// the strict `2r > 2f` are reported as links; only the former can fail.
pub fn check_crossing_bound(fr: &FeatureReport, wr: &WidthResult) -> BoundReport {
    let k = &wr.counts;
    let w2 = wr.w2 as f64;
    let zero = wr.face_widths.iter().filter(|&&w| w == 0).count();
    let (r, f, v, c) = (k.r as f64, k.f as f64, k.v as f64, fr.c as f64);
    let links = vec![
        Link::new("w2 >= 2r", w2, Relation::Ge, 2.0 * r),
        Link::new("w2 >= 2(r - z)", w2, Relation::Ge, 2.0 * (r - zero as f64)),
        Link::new("2r > 2f", 2.0 * r, Relation::Gt, 2.0 * f),
        Link::new("2f = 2v", 2.0 * f, Relation::Eq, 2.0 * v),
        Link::new("2v >= 2c", 2.0 * v, Relation::Ge, 2.0 * c),
    ];
    let mut rep = BoundReport::new("crossing", "c <= w2/2", c, Relation::Le, w2 / 2.0);
    rep.holds = rep.holds && links[1..].iter().all(|l| l.holds);
    rep.links = links;
    rep
}

impl BoundReport {
    /// The chain exactly as `w2 ≥ 2r > 2f = 2v ≥ 2c`.
    pub fn literal_chain_holds(&self) -> bool {
        self.links
            .iter()
            .filter(|l| l.formula != "w2 >= 2(r - z)")
            .all(|l| l.holds)
    }
}

/// `w2 ≥ n(n+1)` where `2n` is the largest certified line count.
pub fn check_line_lower_bound(_pc: &PlaneCurve, wr: &WidthResult) -> BoundReport {
    let n = (wr.max_line_count() / 2) as f64;
    let mut rep = BoundReport::new("line_lower", "w2 >= n(n+1)", wr.w2 as f64, Relation::Ge, n * (n + 1.0));
    rep.links = vec![Link::new("max line count = 2n", 2.0 * n, Relation::Eq, wr.max_line_count() as f64)];
    rep
}

/// `w2 ≤ (c+1)(c+2)` for positively curved braid projections.
pub fn check_braid_upper_bound(fr: &FeatureReport, wr: &WidthResult, is_positively_curved_braid: bool) -> Result<BoundReport> {
    if is_positively_curved_braid && fr.i > 0 {
        return Err(Error::FlagViolation(format!(
            "braid flag set but the projection has {} inflections",
            fr.i
        )));
    }
    let c = fr.c as f64;
    let mut rep = BoundReport::new("braid_upper", "w2 <= (c+1)(c+2)", wr.w2 as f64, Relation::Le, (c + 1.0) * (c + 2.0));
    if !is_positively_curved_braid {
        rep.applicable = false;
        rep.holds = true;
    }
    Ok(rep)
}

/// `w2 > x^{2/3} / (2π)^{2/3}` with `x` the total curvature.
pub fn check_curvature_bound(fr: &FeatureReport, wr: &WidthResult) -> BoundReport {
    let x = fr.total_curvature;
    BoundReport::new(
        "curvature",
        "w2 > x^(2/3) / (2pi)^(2/3)",
        wr.w2 as f64,
        Relation::Gt,
        (x / (2.0 * PI)).powf(2.0 / 3.0),
    )
}

/// Largest total curvature of an arc free of inflections. A component
/// without inflections counts whole.
pub fn max_convex_arc(pc: &PlaneCurve) -> f64 {
    let mut best = 0.0f64;
    for comp in &pc.components {
        let n = comp.len();
        let flex = inflection_params(comp);
        let weight = |j: usize| comp.curvature[j].abs() * comp.ds(j);
        if flex.is_empty() {
            best = best.max((0..n).map(weight).sum());
            continue;
        }
        // integrate from just after each inflection to the next one
        for (k, &s0) in flex.iter().enumerate() {
            let s1 = flex[(k + 1) % flex.len()];
            let s1 = if s1 <= s0 { s1 + n as f64 } else { s1 };
            let mut acc = 0.0;
            let mut j = s0.ceil() as usize;
            while (j as f64) < s1 {
                acc += weight(j % n);
                j += 1;
            }
            best = best.max(acc);
        }
    }
    best
}

/// `w2 > x²/(2π)²` for the longest inflection-free arc.
pub fn check_positive_arc_bound(pc: &PlaneCurve, wr: &WidthResult) -> BoundReport {
    let x = max_convex_arc(pc);
    BoundReport::new("positive_arc", "w2 > x^2 / (2pi)^2", wr.w2 as f64, Relation::Gt, (x / (2.0 * PI)).powi(2))
}

/// Total curvature of the projection `≤ 2π·w2^{3/2}`.
pub fn check_projection_curvature(curve: &ParamCurve3, wr: &WidthResult) -> Result<BoundReport> {
    let x = total_curvature(&project_xy(curve)?);
    Ok(BoundReport::new(
        "projection_curvature",
        "x <= 2pi w2^(3/2)",
        x,
        Relation::Le,
        2.0 * PI * (wr.w2 as f64).powf(1.5),
    ))
}

/// Width with respect to the family of vertical lines, which equals the
/// number of crossings of the projection.
pub fn example3_width(pc: &PlaneCurve) -> Result<usize> {
    let crossings = find_crossings(pc)?;
    let tol = 1e-9 * pc.frame().radius;
    for (k, a) in crossings.iter().enumerate() {
        for b in &crossings[k + 1..] {
            if norm(sub(a.point, b.point)) < tol {
                return Err(Error::NearTripleTangency(format!(
                    "crossings at {:?} coincide",
                    a.point
                )));
            }
        }
        for p in &a.params {
            let q = pc.components[p.component].point_at(p.param);
            if norm(sub(q, a.point)) > 1e-6 * pc.frame().radius {
                return Err(Error::ArrangementInconsistent(format!(
                    "crossing at {:?} is off its branch",
                    a.point
                )));
            }
        }
    }
    Ok(crossings.len())
}

/// Every bound that applies to the curve.
pub fn all_bounds(
    curve: Option<&ParamCurve3>,
    pc: &PlaneCurve,
    fr: &FeatureReport,
    wr: &WidthResult,
    is_positively_curved_braid: bool,
) -> Result<Vec<BoundReport>> {
    let mut out = vec![
        check_crossing_bound(fr, wr),
        check_line_lower_bound(pc, wr),
        check_braid_upper_bound(fr, wr, is_positively_curved_braid)?,
        check_curvature_bound(fr, wr),
        check_positive_arc_bound(pc, wr),
    ];
    if let Some(c) = curve {
        out.push(check_projection_curvature(c, wr)?);
    }
    Ok(out)
}
