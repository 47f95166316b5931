//! 2-width of closed space curves.
//!
//! A curve is projected to the plane, its tangent lines trace the dual curve
//! in the Möbius band of lines, and the faces of that arrangement carry the
//! number of times their lines meet the curve. The 2-width is the sum of
//! those numbers over all faces.
//!
//! ```
//! use kwidth::{curve_model::project_xy, generators, graphic::width2};
//!
//! let spec = generators::GeneratorSpec::Torus2Braid { q: 3, epsilon: 0.05, samples_per_winding: 512, seed: 0 };
//! let trefoil = generators::generate(&spec).unwrap();
//! let w = width2(&project_xy(&trefoil).unwrap()).unwrap();
//! assert_eq!(w.w2, 10);
//! ```

pub mod bounds;
pub mod curve_model;
pub mod error;
pub mod features;
pub mod generators;
pub mod geom;
pub mod graphic;
pub mod oracle;
pub mod render;
pub mod report;

pub use error::{Error, Result};
