//! Parameter search over link families and shell rearrangement.

mod jenga;
mod simplex;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct::{
    build_planar_link, donut_double, realize_torus_with, ConstructError, PlanarFamily,
    PlanarParams, PlanarSpec, RealizeOptions, Shell, TorusSpec,
};
use crate::geom::{measure_link, LinkConfiguration};

pub use jenga::{perpendicular_move, predicted_length, reverse_jenga, SublinkOutcome};
pub use simplex::{minimize, Interval, MinimizeResult, SimplexOptions};

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("expected {expected} parameters, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("initial parameters lie outside their bounds")]
    OutOfBounds,
    #[error("every evaluated point was infeasible")]
    AllInfeasible,
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Objective value of a configuration; `+∞` when components touch.
pub fn normalized_ropelength(link: &LinkConfiguration) -> f64 {
    match measure_link(link) {
        Ok(m) if m.normalized_ropelength.is_finite() => m.normalized_ropelength,
        _ => f64::INFINITY,
    }
}

/// A torus with one shell of `helices` helices, optionally a core, and
/// optionally doubled. Parameters are `[minor radius, major radius]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToroidalFamily {
    pub has_core: bool,
    pub helices: u32,
    pub doubled: bool,
}

impl ToroidalFamily {
    pub fn spec(&self, x: &[f64]) -> TorusSpec {
        TorusSpec {
            shells: vec![Shell {
                radius: x[0],
                count: self.helices,
                phase_offset: 0.0,
            }],
            has_core: self.has_core,
            major_radius: x[1],
            p: 1,
            t_shells: 1,
            method: "toroidal".into(),
        }
    }

    pub fn q(&self) -> u32 {
        u32::from(self.has_core) + self.helices
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Planar { q: u32, family: PlanarFamily },
    Toroidal(ToroidalFamily),
}

impl Family {
    pub fn arity(&self) -> usize {
        match self {
            Family::Planar { family, .. } => family.arity(),
            Family::Toroidal(_) => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    pub family: Family,
    pub initial_params: Vec<f64>,
    pub param_bounds: Vec<Interval>,
    pub n_points: usize,
}

const PLANAR_BOUNDS: [Interval; 6] = [
    Interval::new(0.0, 2.0),
    Interval::new(0.0, FRAC_PI_2),
    Interval::new(0.2, 3.0),
    Interval::new(-0.2499, 0.2499),
    Interval::new(0.2, 5.0),
    Interval::new(0.0, 0.999),
];

impl OptimizationProblem {
    /// Default start and box for a planar family.
    pub fn planar(q: u32, family: PlanarFamily, n_points: usize) -> Self {
        let start = match family {
            PlanarFamily::HybridSquare => PlanarParams {
                rho: 0.6,
                psi: 0.6,
                gamma: 1.0,
                delta: 0.0,
                square_scale: 1.0,
                square_flat_fraction: 0.1,
            },
            _ => PlanarParams::default(),
        };
        Self {
            family: Family::Planar { q, family },
            initial_params: start.to_vec(family),
            param_bounds: PLANAR_BOUNDS[..family.arity()].to_vec(),
            n_points,
        }
    }

    pub fn toroidal(family: ToroidalFamily, initial: [f64; 2], n_points: usize) -> Self {
        Self {
            family: Family::Toroidal(family),
            initial_params: initial.to_vec(),
            param_bounds: vec![Interval::new(2.0, 20.0), Interval::new(2.5, 60.0)],
            n_points,
        }
    }

    pub fn validate(&self) -> Result<(), OptimizeError> {
        let a = self.family.arity();
        for got in [self.initial_params.len(), self.param_bounds.len()] {
            if got != a {
                return Err(OptimizeError::Arity { expected: a, got });
            }
        }
        Ok(())
    }

    /// Builds the configuration at `x` at the problem's resolution.
    pub fn build(&self, x: &[f64]) -> Result<LinkConfiguration, OptimizeError> {
        let opts = RealizeOptions {
            n_points: self.n_points,
            check: false,
            ..Default::default()
        };
        match self.family {
            Family::Planar { q, family } => {
                let params = PlanarParams::from_slice(family, x)?;
                Ok(build_planar_link(q, family, &params, self.n_points)?)
            }
            Family::Toroidal(t) => {
                let spec = t.spec(x);
                if t.doubled {
                    Ok(donut_double(&spec, false, opts)?.link)
                } else {
                    Ok(realize_torus_with(&spec, opts)?)
                }
            }
        }
    }

    /// Normalized ropelength at `x`, or `+∞` when the point is infeasible.
    /// Planar families use their rotational symmetry instead of measuring every
    /// pair.
    pub fn objective(&self, x: &[f64]) -> f64 {
        match self.family {
            Family::Planar { q, family } => {
                let Ok(params) = PlanarParams::from_slice(family, x) else {
                    return f64::INFINITY;
                };
                let spec = PlanarSpec { q, family, params };
                match spec.evaluate(self.n_points) {
                    Ok(m) if m.min_distance() > 0.0 => m.normalized_ropelength,
                    _ => f64::INFINITY,
                }
            }
            Family::Toroidal(_) => match self.build(x) {
                Ok(link) => normalized_ropelength(&link),
                Err(_) => f64::INFINITY,
            },
        }
    }
}

pub fn minimize_params(
    problem: &OptimizationProblem,
    opts: &SimplexOptions,
) -> Result<MinimizeResult, OptimizeError> {
    problem.validate()?;
    minimize(
        &|x: &[f64]| problem.objective(x),
        &problem.initial_params,
        &problem.param_bounds,
        opts,
    )
}
