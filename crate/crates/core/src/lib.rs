//! Weak ε-nets for planar point sets with respect to convex ranges.
//!
//! All predicates are exact over rationals. The crate provides the trivial and
//! quadratic constructions, the improved recursive construction, and an exact
//! verifier that computes the largest subset of `P` whose hull avoids a net.

pub mod arrangement;
pub mod baseline;
pub mod error;
pub mod geometry;
pub mod improved;
pub mod net;
pub mod rational;
pub mod slab;
pub mod triangle_net;
pub mod verifier;

pub use error::{Error, Result};
pub use geometry::{
    convex_hull, ensure_general_position, orient, point_in_hull, segment_line_crossing,
    Containment, Line, Orientation, Point, PointSet, Segment,
};
pub use net::{Net, Tag};
pub use rational::Rational;
