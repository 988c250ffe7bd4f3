//! Geometric kernel: curve sampling, arc length and curvature, exact minimum
//! distances, Gauss linking numbers and whole-link measurement.
//!
//! Everything here is in tube-radius units: a valid configuration has clearance
//! at least 2 between centerlines and curvature radius at least 1.

mod curve;
mod distance;
mod link;
mod linking;
mod vec3;

use thiserror::Error;

pub use curve::{
    circle_length, circumradius, polyline_metrics, sample_planar_curve, sample_toroidal_helix,
    CurveMetrics, Placement, PlanarShape, PolyCurve,
};
pub use distance::{
    min_distance, min_distance_to_set, min_distance_with_radius, min_pairwise_distance,
    min_self_distance, segment_closest_points, segment_distance, segment_distance_sq, segment_gap,
    SegmentGrid, DEFAULT_SKIP_WINDOW, DOUBLY_CRITICAL_COS,
};
pub(crate) use link::assemble as assemble_metrics;
pub use link::{
    measure_link, measure_link_with, normalizing_scale, LinkConfiguration, LinkMetrics,
    MeasureOptions, Provenance,
};
pub use linking::{
    linking_matrix, linking_number, linking_sum, planar_linking_number, INTEGER_TOLERANCE,
};
pub use vec3::{RigidMotion, Vec3};

/// Default discretization per link component.
pub const DEFAULT_POINTS: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("curve needs at least {min} vertices, got {got}")]
    TooFewVertices { got: usize, min: usize },
    #[error("vertex {index} is not finite")]
    NonFinite { index: usize },
    #[error("segment {index} has zero length")]
    DuplicateVertex { index: usize },
    #[error(
        "torus with major radius {major_radius} and minor radius {minor_radius} self-intersects"
    )]
    SelfIntersectingTorus {
        major_radius: f64,
        minor_radius: f64,
    },
    #[error("gibbous curve with delta = {delta} is not convex (need |delta| < 1/4)")]
    NonConvex { delta: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("link with q = {q} must have q or 2q components, got {got}")]
    ComponentCount { q: u32, got: usize },
    #[error("components intersect")]
    Intersecting,
    #[error("linking sum {value} is not within tolerance of an integer; curves too close or under-sampled")]
    NonIntegerLinking { value: f64 },
}
