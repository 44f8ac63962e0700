//! Exact planar geometry on rational coordinates.

mod fisk;
mod point;
mod polygon;
mod triangulate;
mod visibility;

pub use fisk::fisk_guards;
pub use point::{
    angle_cmp, cross3, fmt_rat, int, line_intersection, on_segment, orient, orient_exact, rat,
    round_dyadic, segment_contact, strictly_on_segment, Point, Rat, SegmentContact,
};
pub use polygon::{ring_area2, ring_contains, Location, Polygon};
pub use triangulate::triangulate;
pub use visibility::{visibility_region, VisRegion};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("ring {ring} intersects itself")]
    SelfIntersection { ring: usize },
    #[error("hole {hole} is not strictly inside the outer boundary, or touches another ring")]
    HoleOutsideOrTouching { hole: usize },
    #[error("vertex {point:?} appears more than once")]
    DuplicateVertex { point: Box<Point> },
    #[error("ring {ring} is degenerate (too few vertices, collinear neighbours, or zero area)")]
    DegenerateRing { ring: usize },
    #[error("point lies outside the polygon")]
    PointOutside,
    #[error("operation requires a polygon without holes")]
    HasHoles,
    #[error("no ear found while triangulating")]
    TriangulationFailed,
}
