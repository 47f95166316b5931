//! JSON output with round-trip float precision.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::error::Result;

pub const FORMAT_VERSION: u32 = 1;

/// Pretty formatter writing every float with 17 significant digits.
struct Precise<'a>(PrettyFormatter<'a>);

macro_rules! forward {
    ($($name:ident),*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
            self.0.$name(w)
        })*
    };
}

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value == value.trunc() && value.abs() < 1e15 {
            write!(w, "{value:.1}")
        } else {
            write!(w, "{value:.16e}")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    forward!(begin_array, end_array, end_array_value, begin_object, end_object, begin_object_value, end_object_value);
}

/// Serializes `value` as indented JSON with 17 significant digits per float.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::with_indent(b"  ")));
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

use crate::bounds::{all_bounds, BoundReport};
use crate::curve_model::{check_generic, perturb_to_generic, project_xy, width1, GenericityReport, ParamCurve3, PlaneCurve, Tolerances};
use crate::error::Error;
use crate::features::{fabricius_bjerre_check_with, FeatureReport};
use crate::graphic::{analyze_graphic, Graphic, WidthResult};

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub tolerances: Tolerances,
    /// Seed for repairing a non-generic projection; `None` rejects it.
    pub perturb_seed: Option<u64>,
}

/// Everything computed for one curve.
#[derive(Debug, Clone, Serialize)]
pub struct Analysis {
    pub format_version: u32,
    pub name: String,
    pub genericity: GenericityReport,
    /// Seed used to perturb the projection, if it was perturbed.
    pub perturbed_with_seed: Option<u64>,
    pub positively_curved_braid: bool,
    pub features: FeatureReport,
    pub graphic: Graphic,
    pub width: WidthResult,
    pub bounds: Vec<BoundReport>,
    /// Sum over height gaps, absent when critical heights are degenerate.
    pub width1: Option<usize>,
    #[serde(skip)]
    pub plane: PlaneCurve,
}

impl Analysis {
    /// True when every bound holds and `c + i/2 = t − s`.
    pub fn verified(&self) -> bool {
        self.features.fb_residual.is_zero() && self.bounds.iter().all(|b| b.holds)
    }
}

/// Whether every component was produced by a braid generator.
pub fn is_generated_braid(curve: &ParamCurve3) -> bool {
    curve
        .components
        .iter()
        .all(|c| c.analytic.as_ref().is_some_and(|h| h.descriptor.generator.is_positive_braid()))
}

/// Projects, certifies genericity (perturbing if a seed is given), and runs
/// features, graphic, widths and bounds.
pub fn analyze(curve: &ParamCurve3, opts: &AnalyzeOptions) -> Result<Analysis> {
    let tol = &opts.tolerances;
    tol.validate()?;
    let mut pc = project_xy(curve)?;
    let mut genericity = check_generic(&pc, tol);
    let mut perturbed_with_seed = None;
    if !genericity.is_clear() {
        let Some(seed) = opts.perturb_seed else {
            return Err(Error::NotGeneric(Box::new(genericity)));
        };
        pc = perturb_to_generic(&pc, seed, tol)?;
        genericity = check_generic(&pc, tol);
        perturbed_with_seed = Some(seed);
    }
    let features = fabricius_bjerre_check_with(&pc, tol)?;
    let (graphic, width) = analyze_graphic(&pc)?;
    let braid = is_generated_braid(curve) && perturbed_with_seed.is_none();
    let bounds = all_bounds(perturbed_with_seed.is_none().then_some(curve), &pc, &features, &width, braid)?;
    Ok(Analysis {
        format_version: FORMAT_VERSION,
        name: curve.name.clone(),
        genericity,
        perturbed_with_seed,
        positively_curved_braid: braid,
        features,
        graphic,
        width,
        bounds,
        width1: width1(curve).ok(),
        plane: pc,
    })
}
