//! Closed curves in 3-space and their projections to the plane.

mod genericity;
mod io;

pub use genericity::{check_generic, perturb_to_generic, GenericityReport};
pub use io::{AnalyticDescriptor, ComponentFile, CurveFile};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, norm, scale, sub, Vec2, Vec3};

/// Minimum number of samples per closed component.
pub const MIN_SAMPLES: usize = 16;

/// Numeric thresholds used by genericity certification. Lengths are measured
/// after normalizing the curve to unit diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub angle_min: f64,
    pub line_space_min: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            angle_min: 1e-4,
            line_space_min: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.angle_min > 0.0 && self.line_space_min > 0.0) {
            return Err(Error::InvalidCurve("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// A smooth periodic parametrization on `u ∈ [0, 1)`.
pub trait ClosedParam: Send + Sync {
    /// Position, first and second derivative with respect to `u`.
    fn eval(&self, u: f64) -> [Vec3; 3];
}

/// An analytic parametrization attached to a sampled component, together
/// with the descriptor that regenerates it.
#[derive(Clone)]
pub struct AnalyticHandle {
    pub descriptor: AnalyticDescriptor,
    pub param: Arc<dyn ClosedParam>,
}

impl fmt::Debug for AnalyticHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticHandle")
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

/// One closed component; sample `i` sits at parameter `u = i / len`.
#[derive(Debug, Clone)]
pub struct ParamComponent {
    pub points: Vec<Vec3>,
    pub analytic: Option<AnalyticHandle>,
}

#[derive(Debug, Clone)]
pub struct ParamCurve3 {
    pub name: String,
    pub components: Vec<ParamComponent>,
}

impl ParamCurve3 {
    pub fn from_points(name: impl Into<String>, components: Vec<Vec<Vec3>>) -> Result<Self> {
        let curve = ParamCurve3 {
            name: name.into(),
            components: components
                .into_iter()
                .map(|points| ParamComponent {
                    points,
                    analytic: None,
                })
                .collect(),
        };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidCurve("curve has no components".into()));
        }
        for (ci, comp) in self.components.iter().enumerate() {
            let n = comp.points.len();
            if n < MIN_SAMPLES {
                return Err(Error::InvalidCurve(format!(
                    "component {ci} has {n} samples, need at least {MIN_SAMPLES}"
                )));
            }
            for (j, p) in comp.points.iter().enumerate() {
                if !p.iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidCurve(format!(
                        "component {ci} sample {j} is not finite"
                    )));
                }
                let q = comp.points[(j + 1) % n];
                let d2 = (0..3).map(|k| (q[k] - p[k]).powi(2)).sum::<f64>();
                if d2 == 0.0 {
                    return Err(Error::InvalidCurve(format!(
                        "component {ci} samples {j} and {} coincide",
                        (j + 1) % n
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn total_samples(&self) -> usize {
        self.components.iter().map(|c| c.points.len()).sum()
    }

    /// Largest extent of the axis-aligned bounding box.
    pub fn extent(&self) -> f64 {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in self.components.iter().flat_map(|c| c.points.iter()) {
            for k in 0..3 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max)
    }
}

/// A sampled closed plane curve component with derivative data.
///
/// `speed[j]` is `|dp/du|` and `du` the parameter step, so the cubic Hermite
/// interpolant of segment `j` has end slopes `tangent * speed * du`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneComponent {
    pub points: Vec<Vec2>,
    pub tangents: Vec<Vec2>,
    pub curvature: Vec<f64>,
    pub speed: Vec<f64>,
    pub du: f64,
}

impl PlaneComponent {
    /// Builds a component from positions and first/second derivatives with
    /// respect to a parameter of step `du`.
    pub fn from_derivatives(points: Vec<Vec2>, d1: &[Vec2], d2: &[Vec2], du: f64) -> Result<Self> {
        let n = points.len();
        let mut tangents = Vec::with_capacity(n);
        let mut curvature = Vec::with_capacity(n);
        let mut speed = Vec::with_capacity(n);
        for j in 0..n {
            let s = norm(d1[j]);
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::DegenerateProjection(format!(
                    "zero projected speed at sample {j}"
                )));
            }
            tangents.push(scale(d1[j], 1.0 / s));
            curvature.push(cross(d1[j], d2[j]) / (s * s * s));
            speed.push(s);
        }
        Ok(PlaneComponent {
            points,
            tangents,
            curvature,
            speed,
            du,
        })
    }

    /// Periodic central finite differences on a uniform parameter `u = j/n`.
    pub fn from_samples(points: Vec<Vec2>) -> Result<Self> {
        let n = points.len();
        if n < MIN_SAMPLES {
            return Err(Error::InvalidCurve(format!(
                "{n} samples, need at least {MIN_SAMPLES}"
            )));
        }
        let du = 1.0 / n as f64;
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for j in 0..n {
            let a = points[(j + n - 1) % n];
            let b = points[j];
            let c = points[(j + 1) % n];
            d1.push([(c[0] - a[0]) / (2.0 * du), (c[1] - a[1]) / (2.0 * du)]);
            d2.push([
                (c[0] - 2.0 * b[0] + a[0]) / (du * du),
                (c[1] - 2.0 * b[1] + a[1]) / (du * du),
            ]);
        }
        Self::from_derivatives(points, &d1, &d2, du)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Derivative of position per unit of segment parameter at sample `j`.
    #[inline]
    pub fn seg_slope(&self, j: usize) -> Vec2 {
        scale(self.tangents[j], self.speed[j] * self.du)
    }

    /// Arc length element `ds` of sample `j`.
    #[inline]
    pub fn ds(&self, j: usize) -> f64 {
        self.speed[j] * self.du
    }

    /// Position on the Hermite interpolant at fractional sample index.
    pub fn point_at(&self, s: f64) -> Vec2 {
        let n = self.len();
        let s = s.rem_euclid(n as f64);
        let j = (s.floor() as usize).min(n - 1);
        let t = s - j as f64;
        let k = (j + 1) % n;
        let (m0, m1) = (self.seg_slope(j), self.seg_slope(k));
        [
            crate::geom::hermite(self.points[j][0], m0[0], self.points[k][0], m1[0], t),
            crate::geom::hermite(self.points[j][1], m0[1], self.points[k][1], m1[1], t),
        ]
    }
}

/// The plane curve analyzed by every downstream module.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneCurve {
    pub components: Vec<PlaneComponent>,
}

/// Center and radius used to bring a curve to unit diameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub center: Vec2,
    pub radius: f64,
}

impl Frame {
    /// Scale factor mapping original lengths to unit-diameter lengths.
    pub fn unit(&self) -> f64 {
        0.5 / self.radius
    }

    pub fn to_normalized(&self, p: Vec2) -> Vec2 {
        scale(sub(p, self.center), self.unit())
    }
}

impl PlaneCurve {
    pub fn new(components: Vec<PlaneComponent>) -> Result<Self> {
        let pc = PlaneCurve { components };
        pc.validate()?;
        Ok(pc)
    }

    pub fn from_point_components(components: Vec<Vec<Vec2>>) -> Result<Self> {
        let comps = components
            .into_iter()
            .map(PlaneComponent::from_samples)
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::InvalidCurve("plane curve has no components".into()));
        }
        for (ci, c) in self.components.iter().enumerate() {
            let n = c.len();
            if n < MIN_SAMPLES {
                return Err(Error::InvalidCurve(format!(
                    "component {ci} has {n} samples, need at least {MIN_SAMPLES}"
                )));
            }
            if c.tangents.len() != n || c.curvature.len() != n || c.speed.len() != n {
                return Err(Error::InvalidCurve(format!(
                    "component {ci} has mismatched sample arrays"
                )));
            }
            for j in 0..n {
                if (norm(c.tangents[j]) - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidCurve(format!(
                        "component {ci} tangent {j} is not unit"
                    )));
                }
                if !c.curvature[j].is_finite() || !c.points[j][0].is_finite() || !c.points[j][1].is_finite() {
                    return Err(Error::InvalidCurve(format!(
                        "component {ci} sample {j} is not finite"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn total_samples(&self) -> usize {
        self.components.iter().map(|c| c.len()).sum()
    }

    /// Bounding-box center and the largest sample distance from it.
    pub fn frame(&self) -> Frame {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in self.components.iter().flat_map(|c| c.points.iter()) {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        let radius = self
            .components
            .iter()
            .flat_map(|c| c.points.iter())
            .map(|p| norm(sub(*p, center)))
            .fold(0.0, f64::max);
        Frame {
            center,
            radius: if radius > 0.0 { radius } else { 1.0 },
        }
    }

    /// Copy translated to the frame center and scaled to unit diameter.
    pub fn normalized(&self) -> (PlaneCurve, Frame) {
        let frame = self.frame();
        let u = frame.unit();
        let out = self.similarity(0.0, u, [-frame.center[0] * u, -frame.center[1] * u]);
        (out, frame)
    }

    /// Image under `p ↦ s·R(angle)·p + t`.
    pub fn similarity(&self, angle: f64, s: f64, t: Vec2) -> PlaneCurve {
        let (sn, cs) = angle.sin_cos();
        let rot = |v: Vec2| [cs * v[0] - sn * v[1], sn * v[0] + cs * v[1]];
        let sign = s.signum();
        let components = self
            .components
            .iter()
            .map(|c| PlaneComponent {
                points: c
                    .points
                    .iter()
                    .map(|p| {
                        let r = rot(*p);
                        [s * r[0] + t[0], s * r[1] + t[1]]
                    })
                    .collect(),
                tangents: c.tangents.iter().map(|v| scale(rot(*v), sign)).collect(),
                curvature: c.curvature.iter().map(|k| k / s.abs()).collect(),
                speed: c.speed.iter().map(|v| v * s.abs()).collect(),
                du: c.du,
            })
            .collect();
        PlaneCurve { components }
    }
}

/// Orthogonal projection to the xy-plane. Derivatives come from the
/// analytic handle when present, else from periodic finite differences.
pub fn project_xy(curve: &ParamCurve3) -> Result<PlaneCurve> {
    curve.validate()?;
    let ext = curve.extent().max(f64::MIN_POSITIVE);
    let mut comps = Vec::with_capacity(curve.components.len());
    for (ci, comp) in curve.components.iter().enumerate() {
        let n = comp.points.len();
        let pts: Vec<Vec2> = comp.points.iter().map(|p| [p[0], p[1]]).collect();
        for j in 0..n {
            let d = sub(pts[(j + 1) % n], pts[j]);
            if norm(d) <= 1e-12 * ext {
                return Err(Error::DegenerateProjection(format!(
                    "component {ci}: projected samples {j} and {} coincide",
                    (j + 1) % n
                )));
            }
        }
        let pc = match &comp.analytic {
            Some(h) => {
                let du = 1.0 / n as f64;
                let mut d1 = Vec::with_capacity(n);
                let mut d2 = Vec::with_capacity(n);
                for j in 0..n {
                    let [_, a, b] = h.param.eval(j as f64 * du);
                    d1.push([a[0], a[1]]);
                    d2.push([b[0], b[1]]);
                }
                PlaneComponent::from_derivatives(pts, &d1, &d2, du)?
            }
            None => PlaneComponent::from_samples(pts)?,
        };
        comps.push(pc);
    }
    PlaneCurve::new(comps)
}

/// Sum of intersection counts with one horizontal plane per gap between
/// consecutive critical heights.
pub fn width1(curve: &ParamCurve3) -> Result<usize> {
    curve.validate()?;
    let ext = curve.extent().max(f64::MIN_POSITIVE);
    let mut crit = Vec::new();
    for (ci, comp) in curve.components.iter().enumerate() {
        let n = comp.points.len();
        let z = |j: usize| comp.points[j % n][2];
        let before = crit.len();
        for j in 0..n {
            let (a, b, c) = (z(j + n - 1), z(j), z(j + 1));
            let is_max = b > a && b > c;
            let is_min = b < a && b < c;
            if is_max || is_min {
                // vertex of the parabola through the three samples
                let denom = a - 2.0 * b + c;
                let v = if denom != 0.0 {
                    b - (c - a) * (c - a) / (8.0 * denom)
                } else {
                    b
                };
                crit.push(v);
            }
        }
        if crit.len() == before {
            return Err(Error::DegenerateHeights(format!(
                "component {ci} has no strict height extrema"
            )));
        }
    }
    crit.sort_by(f64::total_cmp);
    let tol = 1e-9 * ext;
    for w in crit.windows(2) {
        if w[1] - w[0] <= tol {
            return Err(Error::DegenerateHeights(format!(
                "critical heights {} and {} coincide",
                w[0], w[1]
            )));
        }
    }
    let mut total = 0;
    for w in crit.windows(2) {
        let level = 0.5 * (w[0] + w[1]);
        for comp in &curve.components {
            let n = comp.points.len();
            total += (0..n)
                .filter(|&j| {
                    let a = comp.points[j][2] >= level;
                    let b = comp.points[(j + 1) % n][2] >= level;
                    a != b
                })
                .count();
        }
    }
    Ok(total)
}

/// Signed angle of a direction, used for the dual curve.
#[inline]
pub(crate) fn heading(v: Vec2) -> f64 {
    v[1].atan2(v[0])
}
