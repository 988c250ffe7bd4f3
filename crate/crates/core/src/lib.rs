//! Ropelength bounds and explicit constructions for `T(pQ, Q)` torus links.
//!
//! All lengths are in tube-radius units: a valid configuration keeps its
//! centerlines at least 2 apart with curvature radius at least 1.
//!
//! - [`bounds`]: lower bounds and their three-quarter coefficients.
//! - [`helix`]: shell capacities, clearance of packed helices, toroidal length
//!   corrections.
//! - [`construct`]: increment and optimal tori, donut doubling, planar links.
//! - [`optimize`]: simplex search over family parameters and shell moves.
//! - [`geom`]: sampling, distances, linking numbers, measurement.
//! - [`io`], [`report`], [`config`]: files, fixed-precision output, run settings.

pub mod bounds;
pub mod config;
pub mod construct;
pub mod geom;
pub mod helix;
pub mod io;
pub mod optimize;
pub mod quadrature;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error(transparent)]
    Geom(#[from] geom::GeomError),
    #[error(transparent)]
    Helix(#[from] helix::HelixError),
    #[error(transparent)]
    Construct(#[from] construct::ConstructError),
    #[error(transparent)]
    Optimize(#[from] optimize::OptimizeError),
    #[error(transparent)]
    Io(#[from] io::IoError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
