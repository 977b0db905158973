//! Schnyder woods on maximal planar graphs.
//!
//! The crate covers static realizers ([`realizer`]), colored and cycle flips
//! between them ([`flips`]), a dynamic realizer answering coordinate and
//! common-ancestor queries in logarithmic time ([`dynrealizer`]), and a
//! brute-force [`oracle`] used for cross-checking.

pub mod triangulation;
pub mod realizer;
pub mod flips;
pub mod dynforest;
pub mod dynrealizer;
pub mod drawing;
pub mod script;
pub mod oracle;
pub mod random;
pub mod exec;

#[doc(hidden)]
pub mod testkit;

pub use realizer::{Color, EdgeKind, Realizer, RegionVector, Violation, Wood};
pub use triangulation::{Quadrilateral, Triangulation, TriangulationError};
