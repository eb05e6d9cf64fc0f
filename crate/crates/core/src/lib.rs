//! Maximal arcs of Denniston and Mathon type in PG(2,q), q = 2^h, and the
//! additive partial flocks of the quadratic cone they correspond to.
//!
//! Every construction is paired with a brute-force check: arcs are verified by
//! scanning all lines, flocks by intersecting cone sections, and the trace
//! conditions of the extension search by comparing an exhaustive scan with a
//! GF(2) linear solve.
//!
//! ```
//! use arcflock::{denniston_arc, verify_arc, arc_to_flock, Field, Gf};
//!
//! let f = Field::new(3)?;
//! let arc = denniston_arc(&f, Gf(1), &[Gf(1), Gf(2), Gf(3)])?;
//! let report = verify_arc(&arc);
//! assert!(report.verdict);
//! assert_eq!(report.size, 28);
//!
//! let flock = arc_to_flock(&arc);
//! assert!(flock.verify().verdict);
//! assert!(flock.classify().linear);
//! # Ok::<(), arcflock::Error>(())
//! ```

pub mod error;
pub mod field;
pub mod flock;
pub mod gf2;
pub mod io;
pub mod mathon;
pub mod projective;
pub mod search;

pub use error::{Error, Result};
pub use field::{Field, FieldSpec, Gf};
pub use flock::{
    additive_to_geometric, arc_to_flock, classify_flock, denniston_lines, extend_flock, flock_to_arc,
    geometric_to_additive, plane_compose, project_arc, project_conic_to_plane, singular_plane,
    standardize_plane, verify_partial_flock, Cone, DennistonLines, FlockClass, FlockPlane, FlockReport,
    PartialFlock, StandardForm,
};
pub use mathon::{
    arc_points, close_set, compose, conics_disjoint, denniston_arc, denniston_closure, synthetic_extension,
    verify_arc, verify_maximal_arc, ArcReport, Conic, MathonArc,
};
pub use projective::{Line2, Plane3, Point2, Point3};
pub use search::{
    build_trace_system, construct_extension_arc, guaranteed_degree, rank_analysis, solve_trace_system,
    GroupSpec, TraceConditionSystem,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/arcs.md")]
    mod arcs {}
    #[doc = include_str!("../../../book/src/flocks.md")]
    mod flocks {}
    #[doc = include_str!("../../../book/src/composition.md")]
    mod composition {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
