//! Ropelength lower bounds for `T(pQ, Q)` torus links.
//!
//! Every component links the other `Q - 1` components `p` times each, so its
//! length is at least `2π` plus the shortest convex hull around `p(Q - 1)` unit
//! disks. Three estimates of that hull are available: exact values for up to five
//! disks, the isoperimetric circle, and the Wegner inequality for hexagonal
//! packings.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Area fraction of the hexagonal disk packing, `π/√12`.
pub const PACKING_FRACTION: f64 = 0.906_899_682_117_108_9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("Wegner hull needs at least one disk")]
    NoDisks,
    #[error("a link needs q >= 2 components, got {0}")]
    TooFewComponents(u32),
    #[error("p must be at least 1")]
    ZeroWinding,
}

/// Whether the Wegner bound is backed by the hull argument for this `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rigor {
    Rigorous,
    /// `p > 1` and the Wegner value exceeds the isoperimetric one; the cone
    /// puncture condition behind the hull bound is not guaranteed, so only the
    /// isoperimetric value is certain.
    Conditional,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub p: u32,
    pub q: u32,
    pub crossing_number: u64,
    /// Exact small-hull bound, `p = 1` and `3 <= q <= 6` only.
    pub small_hull_bound: Option<f64>,
    pub isoperimetric_bound: f64,
    pub wegner_bound: f64,
    pub best_bound: f64,
    pub alpha_iso: f64,
    pub alpha_w: f64,
    pub rigor_flag: Rigor,
}

impl BoundsReport {
    pub fn alpha_best(&self) -> f64 {
        self.best_bound / (self.crossing_number as f64).powf(0.75)
    }
}

/// Wegner's lower bound on the perimeter of the convex hull of `n` unit disks.
pub fn wegner_hull_length(n: u64) -> Result<f64, BoundsError> {
    if n == 0 {
        return Err(BoundsError::NoDisks);
    }
    let nf = n as f64;
    let sqrt12 = 12f64.sqrt();
    let ceil_term = wegner_ceiling(n);
    let inner = sqrt12 * (nf - 1.0) + (2.0 - 3f64.sqrt()) * ceil_term + PI;
    Ok((4.0 * PI * inner).sqrt())
}

/// `⌈√(12n − 3) − 3⌉`, nudged down so exact integers do not round up.
fn wegner_ceiling(n: u64) -> f64 {
    let arg = (12.0 * n as f64 - 3.0).sqrt() - 3.0;
    (arg - 1e-12).ceil().max(0.0)
}

/// `⌈√(12n − 3) − 3⌉` without the ceiling; used for series expansions.
fn wegner_hull_length_smooth(n: f64) -> f64 {
    let inner =
        12f64.sqrt() * (n - 1.0) + (2.0 - 3f64.sqrt()) * ((12.0 * n - 3.0).sqrt() - 3.0) + PI;
    (4.0 * PI * inner).sqrt()
}

pub fn crossing_number(p: u32, q: u32) -> u64 {
    u64::from(p) * u64::from(q) * u64::from(q.saturating_sub(1))
}

pub fn lower_bound_report(p: u32, q: u32) -> Result<BoundsReport, BoundsError> {
    if q < 2 {
        return Err(BoundsError::TooFewComponents(q));
    }
    if p == 0 {
        return Err(BoundsError::ZeroWinding);
    }
    let qf = f64::from(q);
    let linked = u64::from(p) * u64::from(q - 1);
    let c = crossing_number(p, q);
    let c34 = (c as f64).powf(0.75);

    let small_hull_bound =
        (p == 1 && (3..=6).contains(&q)).then_some(qf * (4.0 * PI + 2.0 * (qf - 1.0)));
    let isoperimetric_bound = TAU * qf * (1.0 + (linked as f64).sqrt());
    let wegner_bound = qf * (TAU + wegner_hull_length(linked)?);
    let best_bound = small_hull_bound
        .into_iter()
        .chain([isoperimetric_bound, wegner_bound])
        .fold(f64::NEG_INFINITY, f64::max);
    let rigor_flag = if p > 1 && wegner_bound > isoperimetric_bound {
        Rigor::Conditional
    } else {
        Rigor::Rigorous
    };
    Ok(BoundsReport {
        p,
        q,
        crossing_number: c,
        small_hull_bound,
        isoperimetric_bound,
        wegner_bound,
        best_bound,
        alpha_iso: isoperimetric_bound / c34,
        alpha_w: wegner_bound / c34,
        rigor_flag,
    })
}

/// Large-`Q` behaviour of the three-quarter coefficients for fixed `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoefficients {
    pub p: u32,
    /// `√(8π)·(3/p)^{1/4}`.
    pub alpha_w_limit: f64,
    /// `2π / p^{1/4}`.
    pub alpha_iso_limit: f64,
    /// Coefficient of `Q^{-1/2}` in the Wegner coefficient, from the series.
    pub subleading: f64,
}

pub fn asymptotic_coefficients(p: u32) -> Result<AsymptoticCoefficients, BoundsError> {
    if p == 0 {
        return Err(BoundsError::ZeroWinding);
    }
    let pf = f64::from(p);
    let alpha_w_limit = (8.0 * PI).sqrt() * (3.0 / pf).powf(0.25);
    Ok(AsymptoticCoefficients {
        p,
        alpha_w_limit,
        alpha_iso_limit: TAU / pf.powf(0.25),
        subleading: subleading_coefficient(p, alpha_w_limit),
    })
}

/// Ceiling-free Wegner coefficient as a function of a continuous `Q`.
fn alpha_w_smooth(p: f64, q: f64) -> f64 {
    let linked = p * (q - 1.0);
    q * (TAU + wegner_hull_length_smooth(linked)) / (p * q * (q - 1.0)).powf(0.75)
}

/// `g(Q) = (α_w(Q) − α_∞)·√Q = c + d/√Q + O(1/Q)`; Richardson on `Q` and `4Q`
/// removes the `d` term.
fn subleading_coefficient(p: u32, limit: f64) -> f64 {
    let pf = f64::from(p);
    let g = |q: f64| (alpha_w_smooth(pf, q) - limit) * q.sqrt();
    let q0 = 1.0e6;
    2.0 * g(4.0 * q0) - g(q0)
}
