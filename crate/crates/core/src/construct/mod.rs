//! Link constructions: concentric-helix tori, donut doubling and planar links.

mod limits;
mod planar;
mod sweep;
mod torus;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::GeomError;
use crate::helix::HelixError;

pub use limits::{
    increment_beta, kappa, limit_correction, limiting_alpha, single_alpha_limit, LimitMethod,
};
pub use planar::{build_planar_link, planar_metrics, PlanarFamily, PlanarParams, PlanarSpec};
pub use sweep::{sweep, SweepMethod, SweepRow};
pub(crate) use torus::gap_azimuth;
pub use torus::{
    build_increment_spec, build_increment_spec_with, build_optimal_spec, donut_double,
    doubled_spec, perpendicular_circle, realize_torus, realize_torus_with, DoubledLink, Increment,
    JengaMode, RealizeOptions, Shell, TorusSpec, DEFAULT_OVERLAP_TOLERANCE,
};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Helix(#[from] HelixError),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("components overlap: minimum distance {min_distance} is below 2 - {tolerance}")]
    Overlap { min_distance: f64, tolerance: f64 },
    #[error("components {i} and {j} have linking number {value}, expected magnitude 1")]
    Linking { i: usize, j: usize, value: i64 },
    #[error("t_shells must be at least 1")]
    NoShells,
}

/// Crossing number of `T(pq, q)`, or of two threaded copies of it.
pub fn crossing_number(p: u32, q: u32, doubled: bool) -> u64 {
    let (p, q) = (u64::from(p), u64::from(q));
    let single = p * q * q.saturating_sub(1);
    if doubled {
        2 * single + 2 * q * q
    } else {
        single
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportSpec {
    Torus(TorusSpec),
    Planar(PlanarSpec),
}

/// Analytic summary of a construction, before any measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub spec: ReportSpec,
    /// Components of one copy.
    pub q: u32,
    pub p: u32,
    pub crossing_number: u64,
    /// Length with toroidal corrections; `None` for planar links.
    pub predicted_length: Option<f64>,
    pub alpha_predicted: Option<f64>,
    pub doubled: bool,
    pub mirrored: bool,
    /// Major radius before it was raised to make doubling feasible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inflated_from: Option<f64>,
}

impl ConstructionReport {
    pub fn torus(spec: &TorusSpec, doubled: bool, mirrored: bool) -> Result<Self, ConstructError> {
        let copies = if doubled { 2.0 } else { 1.0 };
        let c = crossing_number(spec.p, spec.q(), doubled);
        let length = copies * spec.predicted_length()?;
        Ok(Self {
            spec: ReportSpec::Torus(spec.clone()),
            q: spec.q(),
            p: spec.p,
            crossing_number: c,
            predicted_length: Some(length),
            alpha_predicted: Some(length / (c as f64).powf(0.75)),
            doubled,
            mirrored,
            inflated_from: None,
        })
    }

    pub fn planar(spec: &PlanarSpec) -> Self {
        Self {
            spec: ReportSpec::Planar(*spec),
            q: spec.q,
            p: 1,
            crossing_number: crossing_number(1, spec.q, false),
            predicted_length: None,
            alpha_predicted: None,
            doubled: false,
            mirrored: false,
            inflated_from: None,
        }
    }
}
