use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::{polyline_metrics, PolyCurve};
use super::distance::{min_pairwise_distance, min_self_distance, DEFAULT_SKIP_WINDOW};
use super::vec3::RigidMotion;
use super::GeomError;
use crate::construct::crossing_number;

/// How a configuration was produced: a method name and its numeric parameters.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub method: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl Provenance {
    pub fn new(method: impl Into<String>) -> Self {
        Self {
            method: method.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// Components of a `T(pQ, Q)`-type link, or of two such links threaded together
/// (then there are `2q` components).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfiguration {
    pub components: Vec<PolyCurve>,
    pub p: u32,
    pub q: u32,
    pub provenance: Provenance,
}

impl LinkConfiguration {
    pub fn new(
        components: Vec<PolyCurve>,
        p: u32,
        q: u32,
        provenance: Provenance,
    ) -> Result<Self, GeomError> {
        let link = Self {
            components,
            p,
            q,
            provenance,
        };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        if self.p == 0 || self.q == 0 {
            return Err(GeomError::InvalidParameter("p and q must be positive"));
        }
        let n = self.components.len();
        if n != self.q as usize && n != 2 * self.q as usize {
            return Err(GeomError::ComponentCount { q: self.q, got: n });
        }
        Ok(())
    }

    /// Two threaded copies of a `q`-component link.
    pub fn is_doubled(&self) -> bool {
        self.components.len() == 2 * self.q as usize
    }

    pub fn crossing_number(&self) -> u64 {
        crossing_number(self.p, self.q, self.is_doubled())
    }

    pub fn total_length(&self) -> f64 {
        self.components.iter().map(PolyCurve::length).sum()
    }

    pub fn transformed(&self, motion: &RigidMotion) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| c.transformed(motion))
                .collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            components: self.components.iter().map(|c| c.scaled(s)).collect(),
            ..self.clone()
        }
    }
}

/// Measured geometry of a configuration, plus its normalized ropelength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkMetrics {
    pub total_length: f64,
    pub min_inter_distance: f64,
    pub min_self_distance: f64,
    pub min_curvature_radius: f64,
    /// Length after rescaling so that clearance is 2 and curvature radius ≥ 1.
    pub normalized_ropelength: f64,
    pub crossing_number: u64,
    pub alpha: f64,
}

impl LinkMetrics {
    pub fn min_distance(&self) -> f64 {
        self.min_inter_distance.min(self.min_self_distance)
    }

    /// Uniform scale that takes the measured configuration to unit tube radius.
    pub fn normalizing_scale(&self) -> f64 {
        normalizing_scale(self.min_distance(), self.min_curvature_radius)
    }
}

#[inline]
pub fn normalizing_scale(min_distance: f64, min_curvature_radius: f64) -> f64 {
    (2.0 / min_distance).max(1.0 / min_curvature_radius)
}

#[derive(Debug, Clone, Copy)]
pub struct MeasureOptions {
    pub skip_window: usize,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            skip_window: DEFAULT_SKIP_WINDOW,
        }
    }
}

pub fn measure_link(link: &LinkConfiguration) -> Result<LinkMetrics, GeomError> {
    measure_link_with(link, MeasureOptions::default())
}

pub fn measure_link_with(
    link: &LinkConfiguration,
    opts: MeasureOptions,
) -> Result<LinkMetrics, GeomError> {
    link.validate()?;
    let min_inter = min_pairwise_distance(&link.components);
    if min_inter <= 0.0 {
        return Err(GeomError::Intersecting);
    }
    let (length, min_curv, min_self) = link
        .components
        .par_iter()
        .map(|c| {
            let m = polyline_metrics(c);
            (
                m.length,
                m.min_curvature_radius,
                min_self_distance(c, opts.skip_window),
            )
        })
        .reduce(
            || (0.0, f64::INFINITY, f64::INFINITY),
            |a, b| (a.0 + b.0, a.1.min(b.1), a.2.min(b.2)),
        );
    if min_self <= 0.0 {
        return Err(GeomError::Intersecting);
    }
    Ok(assemble(
        length,
        min_inter,
        min_self,
        min_curv,
        link.crossing_number(),
    ))
}

pub(crate) fn assemble(
    total_length: f64,
    min_inter_distance: f64,
    min_self_distance: f64,
    min_curvature_radius: f64,
    crossing_number: u64,
) -> LinkMetrics {
    let scale = normalizing_scale(
        min_inter_distance.min(min_self_distance),
        min_curvature_radius,
    );
    let normalized_ropelength = total_length * scale;
    LinkMetrics {
        total_length,
        min_inter_distance,
        min_self_distance,
        min_curvature_radius,
        normalized_ropelength,
        crossing_number,
        alpha: normalized_ropelength / (crossing_number as f64).powf(0.75),
    }
}
