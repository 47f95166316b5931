use thiserror::Error;

/// Errors raised anywhere in the width pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("degenerate projection: {0}")]
    DegenerateProjection(String),
    #[error("no generic perturbation found after {attempts} attempts")]
    PerturbationFailed { attempts: usize },
    #[error("curve is not in general position")]
    NotGeneric(Box<crate::curve_model::GenericityReport>),
    #[error("critical heights coincide: {0}")]
    DegenerateHeights(String),
    #[error("non-transverse crossing (angle {angle:e} rad)")]
    NonTransverseCrossing { angle: f64 },
    #[error("curvature vanishes on an interval near component {component}, sample {sample}")]
    DegenerateInflection { component: usize, sample: usize },
    #[error("three or more tangency events share a line: {0}")]
    NearTripleTangency(String),
    #[error("line is tangent to the curve within tolerance")]
    TangentLine,
    #[error("arrangement inconsistent: {0}")]
    ArrangementInconsistent(String),
    #[error("width labelings disagree: {0}")]
    WidthMismatch(String),
    #[error("grid scan confidence too low: {tangent_fraction:.4} of cells uncertain")]
    LowConfidence { tangent_fraction: f64 },
    #[error("generated curve is not positively curved after {retries} retries")]
    CurvatureSignFailure { retries: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("flag violation: {0}")]
    FlagViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
