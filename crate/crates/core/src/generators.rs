//! Analytic curve families: circles, roses, spirals, braid closures and a
//! 2-bridge trefoil embedding. Every generated component carries its exact
//! parametrization.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve_model::{AnalyticDescriptor, AnalyticHandle, ClosedParam, ParamComponent, ParamCurve3};
use crate::error::{Error, Result};
use crate::geom::Vec3;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const TAU: f64 = 2.0 * PI;

fn default_samples() -> usize {
    256
}
fn default_dense() -> usize {
    512
}
fn default_radius() -> f64 {
    1.0
}
fn default_epsilon() -> f64 {
    0.05
}
fn default_amplitude() -> f64 {
    0.5
}
fn default_windings() -> usize {
    2
}
fn default_strands() -> usize {
    2
}
fn default_circles() -> Vec<[f64; 3]> {
    vec![[-1.7, 0.05, 1.0], [1.6, -0.08, 0.8]]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Circle of the given radius, rotated by `tilt` about the x-axis.
    Circle {
        #[serde(default = "default_radius")]
        radius: f64,
        #[serde(default)]
        tilt: f64,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    /// Planar circles `[cx, cy, r]`, one component each.
    MultiCircle {
        #[serde(default = "default_circles")]
        circles: Vec<[f64; 3]>,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    FigureEight {
        #[serde(default = "default_dense")]
        samples: usize,
    },
    /// `r = 1 + a·sin(kθ)` with a small asymmetric term.
    Rose {
        petals: usize,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default = "default_dense")]
        samples: usize,
    },
    /// Positively curved curve winding `windings` times around the origin.
    SpiralClosed {
        #[serde(default = "default_windings")]
        windings: usize,
        #[serde(default = "default_dense")]
        samples_per_winding: usize,
    },
    BraidWord {
        word: String,
        #[serde(default = "default_strands")]
        strands: usize,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default = "default_dense")]
        samples_per_winding: usize,
        #[serde(default)]
        seed: u64,
    },
    /// Closure of `σ₁^q` on two strands.
    #[serde(rename = "torus_2braid")]
    Torus2Braid {
        q: usize,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default = "default_dense")]
        samples_per_winding: usize,
        #[serde(default)]
        seed: u64,
    },
    Hopf {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default = "default_dense")]
        samples_per_winding: usize,
    },
    /// Two planar circles far apart.
    Unlink2 {
        #[serde(default = "default_samples")]
        samples: usize,
    },
    #[serde(rename = "torus_link_2_4")]
    TorusLink24 {
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        #[serde(default = "default_dense")]
        samples_per_winding: usize,
    },
    /// Trefoil with two maxima and two minima of height.
    BridgeEmbedding {
        #[serde(default = "default_dense")]
        samples: usize,
    },
}

impl GeneratorSpec {
    pub fn name(&self) -> String {
        match self {
            GeneratorSpec::Circle { tilt, .. } if *tilt != 0.0 => "tilted_circle".into(),
            GeneratorSpec::Circle { .. } => "circle".into(),
            GeneratorSpec::MultiCircle { circles, .. } => format!("multi_circle_{}", circles.len()),
            GeneratorSpec::FigureEight { .. } => "figure_eight".into(),
            GeneratorSpec::Rose { petals, .. } => format!("rose_{petals}"),
            GeneratorSpec::SpiralClosed { windings, .. } => format!("spiral_{windings}"),
            GeneratorSpec::BraidWord { word, strands, .. } => {
                format!("braid_{strands}_{}", word.split_whitespace().collect::<Vec<_>>().join("_"))
            }
            GeneratorSpec::Torus2Braid { q, .. } => format!("torus_2_{q}"),
            GeneratorSpec::Hopf { .. } => "hopf".into(),
            GeneratorSpec::Unlink2 { .. } => "unlink2".into(),
            GeneratorSpec::TorusLink24 { .. } => "torus_link_2_4".into(),
            GeneratorSpec::BridgeEmbedding { .. } => "bridge_trefoil".into(),
        }
    }

    /// Braid kinds, whose projections are positively curved by construction.
    pub fn is_positive_braid(&self) -> bool {
        self.braid().is_some()
    }

    /// Word, strand count, epsilon, samples per winding and seed of braid kinds.
    fn braid(&self) -> Option<(String, usize, f64, usize, u64)> {
        let rep = |k: usize| vec!["s1"; k].join(" ");
        match self {
            GeneratorSpec::BraidWord {
                word,
                strands,
                epsilon,
                samples_per_winding,
                seed,
            } => Some((word.clone(), *strands, *epsilon, *samples_per_winding, *seed)),
            GeneratorSpec::Torus2Braid {
                q,
                epsilon,
                samples_per_winding,
                seed,
            } => Some((rep(*q), 2, *epsilon, *samples_per_winding, *seed)),
            GeneratorSpec::Hopf {
                epsilon,
                samples_per_winding,
            } => Some((rep(2), 2, *epsilon, *samples_per_winding, 0)),
            GeneratorSpec::TorusLink24 {
                epsilon,
                samples_per_winding,
            } => Some((rep(4), 2, *epsilon, *samples_per_winding, 0)),
            _ => None,
        }
    }

    fn with_epsilon(&self, eps: f64) -> GeneratorSpec {
        let mut s = self.clone();
        match &mut s {
            GeneratorSpec::BraidWord { epsilon, .. }
            | GeneratorSpec::Torus2Braid { epsilon, .. }
            | GeneratorSpec::Hopf { epsilon, .. }
            | GeneratorSpec::TorusLink24 { epsilon, .. } => *epsilon = eps,
            _ => {}
        }
        s
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidCurve(format!("{}: {m}", self.name())));
        match self {
            GeneratorSpec::Circle { radius, samples, tilt } => {
                if !(*radius > 0.0 && radius.is_finite() && tilt.is_finite()) {
                    return bad("radius must be positive");
                }
                check_samples(*samples)
            }
            GeneratorSpec::MultiCircle { circles, samples } => {
                if circles.is_empty() || circles.iter().any(|c| !(c[2] > 0.0) || c.iter().any(|x| !x.is_finite())) {
                    return bad("circles need positive radii");
                }
                check_samples(*samples)
            }
            GeneratorSpec::Rose { petals, amplitude, samples } => {
                if *petals < 1 || !(*amplitude > 0.0 && *amplitude < 1.0) {
                    return bad("need petals ≥ 1 and 0 < amplitude < 1");
                }
                check_samples(*samples)
            }
            GeneratorSpec::SpiralClosed {
                windings,
                samples_per_winding,
            } => {
                if *windings < 1 {
                    return bad("windings must be at least 1");
                }
                check_samples(*samples_per_winding)
            }
            GeneratorSpec::FigureEight { samples }
            | GeneratorSpec::Unlink2 { samples }
            | GeneratorSpec::BridgeEmbedding { samples } => check_samples(*samples),
            _ => {
                let (word, strands, eps, spw, _) = self.braid().unwrap_or_default();
                if !(eps > 0.0 && eps < 0.25) {
                    return bad("epsilon must lie in (0, 0.25)");
                }
                check_samples(spw)?;
                parse_braid_word(&word, strands).map(|_| ())
            }
        }
    }
}

fn check_samples(n: usize) -> Result<()> {
    if n < 64 {
        return Err(Error::InvalidCurve(format!("{n} samples per winding; need at least 64")));
    }
    Ok(())
}

/// Parametrization given in terms of `t ∈ [0, 2π)` with derivatives in `t`.
struct TParam<F>(F);

impl<F> ClosedParam for TParam<F>
where
    F: Fn(f64) -> [Vec3; 3] + Send + Sync,
{
    fn eval(&self, u: f64) -> [Vec3; 3] {
        let [p, d1, d2] = (self.0)(TAU * u.rem_euclid(1.0));
        [p, scale3(d1, TAU), scale3(d2, TAU * TAU)]
    }
}

fn scale3(v: Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

fn planar<F>(f: F) -> Arc<dyn ClosedParam>
where
    F: Fn(f64) -> [[f64; 2]; 3] + Send + Sync + 'static,
{
    Arc::new(TParam(move |t| {
        let [p, d1, d2] = f(t);
        [[p[0], p[1], 0.0], [d1[0], d1[1], 0.0], [d2[0], d2[1], 0.0]]
    }))
}

/// Planar polar curve `r(t)·e^{i m t}` from `r, r', r''`.
fn polar(r: [f64; 3], m: f64, t: f64) -> [[f64; 2]; 3] {
    let (s, c) = (m * t).sin_cos();
    let [r0, r1, r2] = r;
    [
        [r0 * c, r0 * s],
        [r1 * c - m * r0 * s, r1 * s + m * r0 * c],
        [
            r2 * c - 2.0 * m * r1 * s - m * m * r0 * c,
            r2 * s + 2.0 * m * r1 * c - m * m * r0 * s,
        ],
    ]
}

fn circle_param(cx: f64, cy: f64, r: f64, phase: f64) -> Arc<dyn ClosedParam> {
    planar(move |t| {
        let (s, c) = (t + phase).sin_cos();
        [[cx + r * c, cy + r * s], [-r * s, r * c], [-r * c, -r * s]]
    })
}

fn figure_eight_param() -> Arc<dyn ClosedParam> {
    planar(|t| {
        let (s1, c1) = t.sin_cos();
        let (s2, c2) = (2.0 * t).sin_cos();
        [
            [s2 + 0.1 * c1, s1],
            [2.0 * c2 - 0.1 * s1, c1],
            [-4.0 * s2 - 0.1 * c1, -s1],
        ]
    })
}

fn rose_param(k: usize, a: f64) -> Arc<dyn ClosedParam> {
    let k = k as f64;
    planar(move |t| {
        let (sk, ck) = (k * t).sin_cos();
        let (sp, cp) = (t + 0.7).sin_cos();
        let r = [
            1.0 + a * sk + 0.03 * cp,
            a * k * ck - 0.03 * sp,
            -a * k * k * sk - 0.03 * cp,
        ];
        polar(r, 1.0, t)
    })
}

fn spiral_param(m: usize) -> Arc<dyn ClosedParam> {
    let m = m as f64;
    planar(move |t| {
        let (s, c) = t.sin_cos();
        let (s2, c2) = (2.0 * t + 0.4).sin_cos();
        let r = [
            1.0 + 0.3 * c + 0.02 * s2,
            -0.3 * s + 0.04 * c2,
            -0.3 * c - 0.08 * s2,
        ];
        polar(r, m, t)
    })
}

fn tilted_circle_param(r: f64, tilt: f64) -> Arc<dyn ClosedParam> {
    let (sa, ca) = tilt.sin_cos();
    Arc::new(TParam(move |t: f64| {
        let (s, c) = t.sin_cos();
        [
            [r * c, r * s * ca, r * s * sa],
            [-r * s, r * c * ca, r * c * sa],
            [-r * c, -r * s * ca, -r * s * sa],
        ]
    }))
}

fn bridge_param() -> Arc<dyn ClosedParam> {
    Arc::new(TParam(|t: f64| {
        let (s2, c2) = (2.0 * t).sin_cos();
        let (s1, c1) = t.sin_cos();
        let xy = polar([2.0 + c2, -2.0 * s2, -4.0 * c2], 3.0, t);
        let z = [s2 + 0.2 * s1, 2.0 * c2 + 0.2 * c1, -4.0 * s2 - 0.2 * s1];
        [
            [xy[0][0], xy[0][1], z[0]],
            [xy[1][0], xy[1][1], z[1]],
            [xy[2][0], xy[2][1], z[2]],
        ]
    }))
}

/// A braid generator `σ_k^{±1}` acting on positions `k−1` and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidLetter {
    /// Lower of the two exchanged positions, 0-based.
    pub position: usize,
    pub positive: bool,
}

/// Parses whitespace-separated `s<k>` / `S<k>` tokens, `1 ≤ k < strands`.
pub fn parse_braid_word(word: &str, strands: usize) -> Result<Vec<BraidLetter>> {
    if strands < 2 {
        return Err(Error::Parse(format!("need at least 2 strands, got {strands}")));
    }
    word.split_whitespace()
        .map(|tok| {
            let positive = match tok.chars().next() {
                Some('s') => true,
                Some('S') => false,
                _ => return Err(Error::Parse(format!("bad braid token {tok:?}"))),
            };
            let k: usize = tok[1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad braid token {tok:?}")))?;
            if k == 0 || k >= strands {
                return Err(Error::Parse(format!(
                    "generator index {k} out of range for {strands} strands"
                )));
            }
            Ok(BraidLetter {
                position: k - 1,
                positive,
            })
        })
        .collect()
}

/// Positions reached after each letter, starting from `start`.
fn trace(letters: &[BraidLetter], start: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(letters.len() + 1);
    let mut p = start;
    out.push(p);
    for l in letters {
        if p == l.position {
            p += 1;
        } else if p == l.position + 1 {
            p -= 1;
        }
        out.push(p);
    }
    out
}

/// Cycles of the closure permutation, each listed by starting position per
/// winding.
fn closure_cycles(letters: &[BraidLetter], strands: usize) -> Vec<Vec<usize>> {
    let perm: Vec<usize> = (0..strands).map(|p| *trace(letters, p).last().unwrap_or(&p)).collect();
    let mut seen = vec![false; strands];
    let mut cycles = Vec::new();
    for p in 0..strands {
        if seen[p] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut q = p;
        while !seen[q] {
            seen[q] = true;
            cyc.push(q);
            q = perm[q];
        }
        cycles.push(cyc);
    }
    cycles
}

fn smoothstep(t: f64) -> [f64; 3] {
    let t2 = t * t;
    [
        t2 * t * (10.0 - 15.0 * t + 6.0 * t2),
        30.0 * t2 * (1.0 - t) * (1.0 - t),
        60.0 * t * (1.0 - 3.0 * t + 2.0 * t2),
    ]
}

/// One component of a braid closure on the cylinder shell `1−2ε ≤ r ≤ 1`.
struct BraidParam {
    strands: usize,
    epsilon: f64,
    height: f64,
    bounds: Vec<f64>,
    letters: Vec<BraidLetter>,
    /// Position before each segment, per winding.
    positions: Vec<Vec<usize>>,
}

impl BraidParam {
    fn new(letters: &[BraidLetter], strands: usize, epsilon: f64, seed: u64, starts: &[usize]) -> Self {
        let l = letters.len().max(1);
        let offset = (seed as f64 * GOLDEN).fract();
        let bounds = (0..=l)
            .map(|j| {
                if j == 0 || j == l {
                    TAU * j as f64 / l as f64
                } else {
                    TAU * (j as f64 + 0.15 * (j as f64 * GOLDEN + offset).fract()) / l as f64
                }
            })
            .collect();
        BraidParam {
            strands,
            epsilon,
            height: 0.25,
            bounds,
            letters: letters.to_vec(),
            positions: starts.iter().map(|&p| trace(letters, p)).collect(),
        }
    }

    fn radius(&self, pos: f64) -> f64 {
        1.0 - 2.0 * self.epsilon * (1.0 - pos / (self.strands - 1) as f64)
    }
}

impl ClosedParam for BraidParam {
    fn eval(&self, u: f64) -> [Vec3; 3] {
        let m = self.positions.len();
        let big = TAU * m as f64 * u.rem_euclid(1.0);
        let w = ((big / TAU).floor() as usize).min(m - 1);
        let theta = big - TAU * w as f64;
        let j = self.bounds[1..].partition_point(|&b| b <= theta).min(self.bounds.len() - 2);
        let (b0, b1) = (self.bounds[j], self.bounds[j + 1]);
        let span = b1 - b0;
        let tau = ((theta - b0) / span).clamp(0.0, 1.0);
        let trace = &self.positions[w];
        let (p0, dp) = if self.letters.is_empty() {
            (trace[0] as f64, 0.0)
        } else {
            (trace[j] as f64, trace[j + 1] as f64 - trace[j] as f64)
        };
        let [s0, s1, s2] = smoothstep(tau);
        let k = 2.0 * self.epsilon / (self.strands - 1) as f64;
        let r = [
            self.radius(p0 + dp * s0),
            k * dp * s1 / span,
            k * dp * s2 / (span * span),
        ];
        let zs = if dp == 0.0 {
            0.0
        } else {
            let positive = self.letters[j].positive;
            dp * if positive { 1.0 } else { -1.0 } * self.height
        };
        let (sn, cs) = (PI * tau).sin_cos();
        let z = [
            zs * sn.powi(3),
            zs * 3.0 * PI * sn * sn * cs / span,
            zs * PI * PI * (6.0 * sn * cs * cs - 3.0 * sn.powi(3)) / (span * span),
        ];
        let xy = polar(r, 1.0, theta);
        let c = TAU * m as f64;
        [
            [xy[0][0], xy[0][1], z[0]],
            [c * xy[1][0], c * xy[1][1], c * z[1]],
            [c * c * xy[2][0], c * c * xy[2][1], c * c * z[2]],
        ]
    }
}

fn component_params(spec: &GeneratorSpec) -> Result<Vec<(Arc<dyn ClosedParam>, usize)>> {
    spec.validate()?;
    let out = match spec {
        GeneratorSpec::Circle { radius, tilt, samples } => {
            let p = if *tilt == 0.0 {
                circle_param(0.0, 0.0, *radius, 0.0)
            } else {
                tilted_circle_param(*radius, *tilt)
            };
            vec![(p, *samples)]
        }
        GeneratorSpec::MultiCircle { circles, samples } => circles
            .iter()
            .map(|c| (circle_param(c[0], c[1], c[2], 0.0), *samples))
            .collect(),
        GeneratorSpec::Unlink2 { samples } => vec![
            (circle_param(-2.5, 0.07, 1.0, 0.0), *samples),
            (circle_param(2.5, -0.04, 0.85, 0.0), *samples),
        ],
        GeneratorSpec::FigureEight { samples } => vec![(figure_eight_param(), *samples)],
        GeneratorSpec::Rose {
            petals,
            amplitude,
            samples,
        } => vec![(rose_param(*petals, *amplitude), (*samples).max(64 * petals))],
        GeneratorSpec::SpiralClosed {
            windings,
            samples_per_winding,
        } => vec![(spiral_param(*windings), samples_per_winding * windings)],
        GeneratorSpec::BridgeEmbedding { samples } => vec![(bridge_param(), *samples)],
        _ => {
            let (word, strands, eps, spw, seed) = spec.braid().unwrap_or_default();
            let letters = parse_braid_word(&word, strands)?;
            closure_cycles(&letters, strands)
                .into_iter()
                .map(|cyc| {
                    let n = spw * cyc.len();
                    let p: Arc<dyn ClosedParam> = Arc::new(BraidParam::new(&letters, strands, eps, seed, &cyc));
                    (p, n)
                })
                .collect()
        }
    };
    Ok(out)
}

/// Exact parametrization of one component of a generated curve.
pub fn component_param(spec: &GeneratorSpec, component: usize) -> Result<Arc<dyn ClosedParam>> {
    component_params(spec)?
        .into_iter()
        .nth(component)
        .map(|(p, _)| p)
        .ok_or_else(|| Error::InvalidCurve(format!("{} has no component {component}", spec.name())))
}

fn sample_curve(spec: &GeneratorSpec) -> Result<ParamCurve3> {
    let components = component_params(spec)?
        .into_iter()
        .enumerate()
        .map(|(ci, (param, n))| ParamComponent {
            points: (0..n).map(|i| param.eval(i as f64 / n as f64)[0]).collect(),
            analytic: Some(AnalyticHandle {
                descriptor: AnalyticDescriptor {
                    generator: spec.clone(),
                    component: ci,
                },
                param,
            }),
        })
        .collect();
    let curve = ParamCurve3 {
        name: spec.name(),
        components,
    };
    curve.validate()?;
    Ok(curve)
}

/// True when the projection has strictly positive curvature at four times
/// the sample density.
fn projection_positively_curved(curve: &ParamCurve3) -> bool {
    curve.components.iter().all(|c| {
        let Some(h) = &c.analytic else { return false };
        let n = 4 * c.points.len();
        (0..n).all(|i| {
            let [_, d1, d2] = h.param.eval(i as f64 / n as f64);
            let speed = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
            d1[0] * d2[1] - d1[1] * d2[0] > 1e-12 * speed.powi(3)
        })
    })
}

/// Samples a curve family. Braid kinds halve epsilon up to three times until
/// the projection is positively curved; the stored descriptor records the
/// epsilon actually used.
pub fn generate(spec: &GeneratorSpec) -> Result<ParamCurve3> {
    let Some((_, _, eps, _, _)) = spec.braid() else {
        return sample_curve(spec);
    };
    const RETRIES: usize = 3;
    for k in 0..=RETRIES {
        let s = spec.with_epsilon(eps / 2f64.powi(k as i32));
        let curve = sample_curve(&s)?;
        if projection_positively_curved(&curve) {
            return Ok(curve);
        }
    }
    Err(Error::CurvatureSignFailure { retries: RETRIES })
}

/// Closure of a braid word placed near the unit cylinder.
pub fn braid_to_curve(word: &str, strands: usize, epsilon: f64) -> Result<ParamCurve3> {
    generate(&GeneratorSpec::BraidWord {
        word: word.to_string(),
        strands,
        epsilon,
        samples_per_winding: default_dense(),
        seed: 0,
    })
}

/// Planar test corpus: unknots, figure-eight, roses, spirals and braid
/// closures up to nine crossings.
pub fn corpus() -> Vec<GeneratorSpec> {
    let mut out = vec![
        GeneratorSpec::Circle {
            radius: 1.0,
            tilt: 0.0,
            samples: 256,
        },
        GeneratorSpec::FigureEight { samples: 512 },
    ];
    out.extend((3..=7).map(|k| GeneratorSpec::Rose {
        petals: k,
        amplitude: 0.5,
        samples: 512,
    }));
    out.extend((2..=3).map(|m| GeneratorSpec::SpiralClosed {
        windings: m,
        samples_per_winding: 512,
    }));
    out.extend([1, 3, 5, 7, 9].map(|q| GeneratorSpec::Torus2Braid {
        q,
        epsilon: 0.05,
        samples_per_winding: 512,
        seed: 0,
    }));
    out.push(GeneratorSpec::Hopf {
        epsilon: 0.05,
        samples_per_winding: 512,
    });
    out.push(GeneratorSpec::Unlink2 { samples: 256 });
    out.push(GeneratorSpec::TorusLink24 {
        epsilon: 0.05,
        samples_per_winding: 512,
    });
    for word in ["s1 s2", "s1 s2 s1 s2"] {
        out.push(GeneratorSpec::BraidWord {
            word: word.into(),
            strands: 3,
            epsilon: 0.05,
            samples_per_winding: 512,
            seed: 0,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(p: &dyn ClosedParam) {
        let h = 1e-6;
        for i in 0..37 {
            let u = (i as f64 + 0.31) / 37.0;
            let [_, d1, d2] = p.eval(u);
            let [a, a1, _] = p.eval(u - h);
            let [b, b1, _] = p.eval(u + h);
            for k in 0..3 {
                let fd1 = (b[k] - a[k]) / (2.0 * h);
                let fd2 = (b1[k] - a1[k]) / (2.0 * h);
                assert!((fd1 - d1[k]).abs() < 1e-4 * (1.0 + d1[k].abs()), "d1 {k} at {u}");
                assert!((fd2 - d2[k]).abs() < 1e-3 * (1.0 + d2[k].abs()), "d2 {k} at {u}");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for spec in corpus() {
            for (p, _) in component_params(&spec).unwrap() {
                fd_check(p.as_ref());
            }
        }
        fd_check(bridge_param().as_ref());
        fd_check(tilted_circle_param(1.0, 0.3).as_ref());
    }

    #[test]
    fn braid_closure_components() {
        assert_eq!(braid_to_curve("s1 s1 s1", 2, 0.05).unwrap().components.len(), 1);
        assert_eq!(braid_to_curve("s1 s1", 2, 0.05).unwrap().components.len(), 2);
        assert_eq!(braid_to_curve("", 2, 0.05).unwrap().components.len(), 2);
        assert_eq!(braid_to_curve("s1 S2", 3, 0.05).unwrap().components.len(), 1);
    }

    #[test]
    fn malformed_words_are_rejected() {
        for w in ["x1", "s0", "s3", "s", "s1s1"] {
            assert!(matches!(parse_braid_word(w, 3), Err(Error::Parse(_))), "{w}");
        }
    }

    #[test]
    fn braids_are_positively_curved() {
        for q in [3, 9] {
            let c = generate(&GeneratorSpec::Torus2Braid {
                q,
                epsilon: 0.05,
                samples_per_winding: 512,
                seed: 0,
            })
            .unwrap();
            assert!(projection_positively_curved(&c));
        }
    }

    #[test]
    fn spec_json_roundtrip() {
        for spec in corpus() {
            let s = serde_json::to_string(&spec).unwrap();
            assert_eq!(serde_json::from_str::<GeneratorSpec>(&s).unwrap(), spec);
        }
        let s: GeneratorSpec = serde_json::from_str(r#"{"kind":"torus_2braid","q":5}"#).unwrap();
        assert!(matches!(s, GeneratorSpec::Torus2Braid { q: 5, .. }));
    }
}
