//! Certification and seeded repair of general position.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PlaneComponent, PlaneCurve, Tolerances};
use crate::error::{Error, Result};
use crate::features::find_crossings_with;
use crate::geom::{add, cross, norm, perp, scale, sub, Vec2};
use crate::graphic::{select_window, LineCoord};

const MAX_ATTEMPTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub vertical_tangent_found: bool,
    pub near_triple_tangency_found: bool,
    pub non_transverse_double_point_found: bool,
    /// Smallest branch angle over all crossings, π/2 without crossings.
    pub min_crossing_angle: f64,
    /// Smallest line-space distance between tangency events.
    pub min_feature_separation: f64,
    pub notes: Vec<String>,
}

impl GenericityReport {
    pub fn is_clear(&self) -> bool {
        !(self.vertical_tangent_found || self.near_triple_tangency_found || self.non_transverse_double_point_found)
    }
}

/// Scans for coincident samples, shallow crossings and tangency events
/// that nearly coincide in line space.
pub fn check_generic(pc: &PlaneCurve, tol: &Tolerances) -> GenericityReport {
    let mut rep = GenericityReport {
        vertical_tangent_found: false,
        near_triple_tangency_found: false,
        non_transverse_double_point_found: false,
        min_crossing_angle: std::f64::consts::FRAC_PI_2,
        min_feature_separation: f64::INFINITY,
        notes: Vec::new(),
    };
    if let Err(e) = pc.validate().and_then(|_| tol.validate()) {
        rep.vertical_tangent_found = true;
        rep.notes.push(e.to_string());
        return rep;
    }
    let (unit, _) = pc.normalized();
    for (ci, c) in unit.components.iter().enumerate() {
        let n = c.len();
        if let Some(j) = (0..n).find(|&j| norm(sub(c.points[(j + 1) % n], c.points[j])) < 1e-12) {
            rep.vertical_tangent_found = true;
            rep.notes.push(format!("component {ci}: samples {j} and {} coincide", (j + 1) % n));
        }
    }

    let strict = Tolerances {
        angle_min: 0.0,
        ..*tol
    };
    match find_crossings_with(&unit, &strict) {
        Ok(cs) => {
            for c in &cs {
                rep.min_crossing_angle = rep.min_crossing_angle.min(c.angle);
            }
            if rep.min_crossing_angle < tol.angle_min {
                rep.non_transverse_double_point_found = true;
                rep.notes.push(format!("crossing angle {:e} below {:e}", rep.min_crossing_angle, tol.angle_min));
            }
        }
        Err(e) => {
            rep.non_transverse_double_point_found = true;
            rep.notes.push(e.to_string());
        }
    }

    match select_window(&unit, tol.line_space_min) {
        Ok((set, crossings, near)) => {
            let mut events: Vec<LineCoord> = crossings.iter().map(|c| LineCoord::new(c.theta, c.d)).collect();
            events.extend(set.tips.iter().map(|t| LineCoord::new(t.theta, t.d)));
            for (k, a) in events.iter().enumerate() {
                for b in &events[k + 1..] {
                    rep.min_feature_separation = rep.min_feature_separation.min(a.distance(b));
                }
            }
            for m in &near {
                rep.min_feature_separation = rep.min_feature_separation.min(m.gap);
            }
            if rep.min_feature_separation < tol.line_space_min {
                rep.near_triple_tangency_found = true;
                rep.notes.push(format!(
                    "tangency events {:e} apart in line space",
                    rep.min_feature_separation
                ));
            }
        }
        Err(e) => {
            rep.near_triple_tangency_found = true;
            rep.notes.push(e.to_string());
        }
    }
    rep
}

/// Near-identity planar map `x ↦ A x + Q(x)` in coordinates centered at
/// `center` and scaled by `radius`, with `Q` quadratic.
struct Warp {
    center: Vec2,
    radius: f64,
    a: [[f64; 2]; 2],
    /// Coefficients of `x², xy, y²` per output coordinate.
    q: [[f64; 3]; 2],
}

impl Warp {
    fn random(rng: &mut ChaCha8Rng, center: Vec2, radius: f64) -> Warp {
        let rot: f64 = rng.gen_range(-3e-4..3e-4);
        let stretch: f64 = rng.gen_range(-3e-4..3e-4);
        let axis: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let (sa, ca) = axis.sin_cos();
        let (k1, k2) = (1.0 + stretch, 1.0 / (1.0 + stretch));
        // R(rot) · R(axis) · diag(k1, k2) · R(−axis)
        let s = [
            [k1 * ca * ca + k2 * sa * sa, (k1 - k2) * ca * sa],
            [(k1 - k2) * ca * sa, k1 * sa * sa + k2 * ca * ca],
        ];
        let (sr, cr) = rot.sin_cos();
        let a = [
            [cr * s[0][0] - sr * s[1][0], cr * s[0][1] - sr * s[1][1]],
            [sr * s[0][0] + cr * s[1][0], sr * s[0][1] + cr * s[1][1]],
        ];
        let mut q = [[0.0; 3]; 2];
        for row in &mut q {
            for v in row.iter_mut() {
                *v = rng.gen_range(-2e-4..2e-4);
            }
        }
        Warp { center, radius, a, q }
    }

    fn apply(&self, p: Vec2) -> Vec2 {
        let x = scale(sub(p, self.center), 1.0 / self.radius);
        let quad = [x[0] * x[0], x[0] * x[1], x[1] * x[1]];
        let y = [0, 1].map(|r| {
            self.a[r][0] * x[0] + self.a[r][1] * x[1] + (0..3).map(|k| self.q[r][k] * quad[k]).sum::<f64>()
        });
        add(scale(y, self.radius), self.center)
    }

    /// Jacobian at `p`.
    fn jacobian(&self, p: Vec2) -> [[f64; 2]; 2] {
        let x = scale(sub(p, self.center), 1.0 / self.radius);
        [0, 1].map(|r| {
            let q = self.q[r];
            [
                self.a[r][0] + 2.0 * q[0] * x[0] + q[1] * x[1],
                self.a[r][1] + q[1] * x[0] + 2.0 * q[2] * x[1],
            ]
        })
    }

    /// Second derivative along `v`.
    fn hessian(&self, v: Vec2) -> Vec2 {
        [0, 1].map(|r| {
            let q = self.q[r];
            (2.0 * q[0] * v[0] * v[0] + 2.0 * q[1] * v[0] * v[1] + 2.0 * q[2] * v[1] * v[1]) / self.radius
        })
    }

    fn component(&self, c: &PlaneComponent) -> PlaneComponent {
        let n = c.len();
        let mut out = PlaneComponent {
            points: Vec::with_capacity(n),
            tangents: Vec::with_capacity(n),
            curvature: Vec::with_capacity(n),
            speed: Vec::with_capacity(n),
            du: c.du,
        };
        for j in 0..n {
            let p = c.points[j];
            let t = c.tangents[j];
            let jm = self.jacobian(p);
            let mul = |v: Vec2| [jm[0][0] * v[0] + jm[0][1] * v[1], jm[1][0] * v[0] + jm[1][1] * v[1]];
            let jt = mul(t);
            let acc = add(mul(scale(perp(t), c.curvature[j])), self.hessian(t));
            let g = norm(jt);
            out.points.push(self.apply(p));
            out.tangents.push(scale(jt, 1.0 / g));
            out.curvature.push(cross(jt, acc) / (g * g * g));
            out.speed.push(c.speed[j] * g);
        }
        out
    }
}

/// Returns `pc` unchanged if it is already generic, else the first of up to
/// 32 seeded near-identity warps that passes `check_generic`. Every sample
/// moves by at most `1e-3` of the diameter.
pub fn perturb_to_generic(pc: &PlaneCurve, seed: u64, tol: &Tolerances) -> Result<PlaneCurve> {
    if pc.validate().is_err() || tol.validate().is_err() {
        return Err(Error::PerturbationFailed { attempts: 0 });
    }
    if check_generic(pc, tol).is_clear() {
        return Ok(pc.clone());
    }
    let frame = pc.frame();
    for attempt in 1..=MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt as u64));
        let warp = Warp::random(&mut rng, frame.center, frame.radius);
        let out = PlaneCurve {
            components: pc.components.iter().map(|c| warp.component(c)).collect(),
        };
        if out.validate().is_ok() && check_generic(&out, tol).is_clear() {
            return Ok(out);
        }
    }
    Err(Error::PerturbationFailed {
        attempts: MAX_ATTEMPTS,
    })
}
