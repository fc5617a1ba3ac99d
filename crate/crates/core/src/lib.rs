//! Gammoids represented by digraphs.
//!
//! The crate covers vertex-disjoint routings, explicit matroids, the
//! representation transformations (swaps, rebasing, standardization, duality,
//! restriction and contraction), and the arc-complexity and f-width measures
//! computed by exhaustive search.

pub mod bits;
pub mod checks;
pub mod complexity;
pub mod digraph;
pub mod error;
pub mod gammoid;
pub mod generate;
pub mod matroid;
pub mod routing;

pub use complexity::{
    arc_complexity, f_width, in_class, is_superadditive, kw_upper_bound, lower_bound, uniform_rep,
    verify_uniform_conjecture, ComplexityCertificate, Rational, SearchLimits, SuperAdditiveFn, WidthReport,
};
pub use digraph::{Digraph, Path, Vertex};
pub use error::{Error, Result, StandardClause};
pub use gammoid::{Representation, StandardRepresentation};
pub use matroid::{gamma, Matroid};
pub use routing::{is_independent, max_routing, Routing};
