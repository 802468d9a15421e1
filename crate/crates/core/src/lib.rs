//! Projections of three-component links: reduction to the two irreducible
//! projections and explicit L6n1 resolutions verified by link invariants.

pub mod fixtures;
pub mod format;
pub mod generator;
pub mod link_invariants;
pub mod planar_map;
pub mod projection;
pub mod reduction;
pub mod resolver;

pub use format::{parse_diagram, parse_projection, serialize_diagram, serialize_projection, FormatError};
pub use generator::{enumerate_projections, random_projection, EnumerationFilter, GeneratorError};
pub use link_invariants::{
    is_l6n1, jones, kauffman_bracket, InvariantError, L6n1Report, LaurentPolynomial, LinkDiagram, Orientation,
};
pub use planar_map::{are_isomorphic, build_map, Dart, MapError, PlanarMap};
pub use projection::{make_projection, Colour, Projection, ProjectionError, VertexType};
pub use reduction::{
    apply_shortcut, apply_theta_split, classify_irreducible, is_irreducible, reduce, IrreducibleClass, ReductionError,
    ReductionTrace, TraceStep,
};
pub use resolver::{base_resolution, lift_step, resolve_l6n1, Diagram, ResolveError, Resolution};
