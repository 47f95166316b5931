//! Curve JSON documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AnalyticHandle, ParamComponent, ParamCurve3};
use crate::error::{Error, Result};
use crate::generators::{component_param, GeneratorSpec};
use crate::geom::Vec3;

/// Regenerates the analytic parametrization of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticDescriptor {
    pub generator: GeneratorSpec,
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentFile {
    pub points: Vec<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    #[serde(default)]
    pub name: String,
    pub components: Vec<ComponentFile>,
}

impl CurveFile {
    pub fn from_curve(curve: &ParamCurve3) -> Self {
        CurveFile {
            name: curve.name.clone(),
            components: curve
                .components
                .iter()
                .map(|c| ComponentFile {
                    points: c.points.clone(),
                    analytic: c.analytic.as_ref().map(|h| h.descriptor.clone()),
                })
                .collect(),
        }
    }

    /// Validates the document and reattaches analytic handles, checking
    /// that each regenerated parametrization reproduces the stored points.
    pub fn into_curve(self) -> Result<ParamCurve3> {
        let mut components = Vec::with_capacity(self.components.len());
        for (ci, c) in self.components.into_iter().enumerate() {
            if c.points.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::InvalidCurve(format!(
                    "component {ci} contains a non-finite coordinate"
                )));
            }
            let analytic = match c.analytic {
                None => None,
                Some(desc) => {
                    let param = component_param(&desc.generator, desc.component)?;
                    let n = c.points.len();
                    let scale = c
                        .points
                        .iter()
                        .flatten()
                        .fold(1.0f64, |m, v| m.max(v.abs()));
                    for (j, p) in c.points.iter().enumerate() {
                        let [q, _, _] = param.eval(j as f64 / n as f64);
                        let dev = (0..3).map(|k| (q[k] - p[k]).abs()).fold(0.0, f64::max);
                        if dev > 1e-9 * scale {
                            return Err(Error::InvalidCurve(format!(
                                "component {ci}: analytic descriptor does not reproduce sample {j}"
                            )));
                        }
                    }
                    Some(AnalyticHandle {
                        descriptor: desc,
                        param,
                    })
                }
            };
            components.push(ParamComponent {
                points: c.points,
                analytic,
            });
        }
        let curve = ParamCurve3 {
            name: self.name,
            components,
        };
        curve.validate()?;
        Ok(curve)
    }
}

impl ParamCurve3 {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: CurveFile = serde_json::from_str(s)?;
        file.into_curve()
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json_string(&self) -> Result<String> {
        crate::report::to_json_string(&CurveFile::from_curve(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_huge_numbers() {
        let mut s = String::from(r#"{"name":"x","components":[{"points":["#);
        for j in 0..20 {
            if j > 0 {
                s.push(',');
            }
            s.push_str(&format!("[{j}, 1e400, 0]"));
        }
        s.push_str("]}]}");
        assert!(ParamCurve3::from_json_str(&s).is_err());
    }

    #[test]
    fn rejects_nan_literal() {
        assert!(ParamCurve3::from_json_str(r#"{"name":"x","components":[{"points":[[NaN,0,0]]}]}"#).is_err());
    }
}
