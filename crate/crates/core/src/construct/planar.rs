use std::f64::consts::{PI, TAU};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ConstructError;
use crate::geom::{
    assemble_metrics, linking_number, min_distance_to_set, min_self_distance,
    planar_linking_number, polyline_metrics, sample_planar_curve, LinkConfiguration, LinkMetrics,
    Placement, PlanarShape, PolyCurve, Provenance, DEFAULT_SKIP_WINDOW,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanarFamily {
    Circles,
    Gibbous,
    /// `q − 1` gibbous curves threaded through one rounded square.
    HybridSquare,
}

impl PlanarFamily {
    /// Length of the optimizer's parameter vector.
    pub fn arity(self) -> usize {
        match self {
            PlanarFamily::Circles => 2,
            PlanarFamily::Gibbous => 4,
            PlanarFamily::HybridSquare => 6,
        }
    }
}

impl FromStr for PlanarFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "circles" | "circle" => Ok(PlanarFamily::Circles),
            "gibbous" => Ok(PlanarFamily::Gibbous),
            "hybrid" | "hybrid_square" => Ok(PlanarFamily::HybridSquare),
            _ => Err(format!("unknown planar family {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarParams {
    pub rho: f64,
    pub psi: f64,
    pub gamma: f64,
    pub delta: f64,
    pub square_scale: f64,
    pub square_flat_fraction: f64,
}

impl Default for PlanarParams {
    fn default() -> Self {
        Self {
            rho: 0.5,
            psi: 5.0 * PI / 18.0,
            gamma: 1.0,
            delta: 0.0,
            square_scale: 1.0,
            square_flat_fraction: 0.5,
        }
    }
}

impl PlanarParams {
    /// Reads the leading `family.arity()` entries; the rest keep their defaults.
    pub fn from_slice(family: PlanarFamily, x: &[f64]) -> Result<Self, ConstructError> {
        if x.len() != family.arity() {
            return Err(ConstructError::InvalidSpec(format!(
                "{family:?} takes {} parameters, got {}",
                family.arity(),
                x.len()
            )));
        }
        let mut p = Self::default();
        p.rho = x[0];
        p.psi = x[1];
        if family != PlanarFamily::Circles {
            p.gamma = x[2];
            p.delta = x[3];
        }
        if family == PlanarFamily::HybridSquare {
            p.square_scale = x[4];
            p.square_flat_fraction = x[5];
        }
        Ok(p)
    }

    pub fn to_vec(&self, family: PlanarFamily) -> Vec<f64> {
        let all = [
            self.rho,
            self.psi,
            self.gamma,
            self.delta,
            self.square_scale,
            self.square_flat_fraction,
        ];
        all[..family.arity()].to_vec()
    }

    fn profile(&self, family: PlanarFamily) -> PlanarShape {
        match family {
            PlanarFamily::Circles => PlanarShape::Circle,
            _ => PlanarShape::Gibbous {
                gamma: self.gamma,
                delta: self.delta,
            },
        }
    }

    fn square(&self) -> PlanarShape {
        PlanarShape::RoundedSquare {
            scale: self.square_scale,
            flat_fraction: self.square_flat_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarSpec {
    pub q: u32,
    pub family: PlanarFamily,
    pub params: PlanarParams,
}

impl PlanarSpec {
    fn ring_size(&self) -> u32 {
        match self.family {
            PlanarFamily::HybridSquare => self.q - 1,
            _ => self.q,
        }
    }

    fn validate(&self) -> Result<(), ConstructError> {
        if self.q < 2 {
            return Err(ConstructError::InvalidSpec(
                "planar links need q >= 2".into(),
            ));
        }
        Ok(())
    }

    fn ring_curve(&self, i: u32, n_points: usize) -> Result<PolyCurve, ConstructError> {
        let placement = Placement {
            azimuth: TAU * f64::from(i) / f64::from(self.ring_size()),
            displacement: self.params.rho,
            inclination: self.params.psi,
        };
        Ok(sample_planar_curve(
            &self.params.profile(self.family),
            &placement,
            n_points,
        )?)
    }

    fn square_curve(&self, n_points: usize) -> Result<Option<PolyCurve>, ConstructError> {
        if self.family != PlanarFamily::HybridSquare {
            return Ok(None);
        }
        Ok(Some(sample_planar_curve(
            &self.params.square(),
            &Placement::horizontal(),
            n_points,
        )?))
    }

    fn curves(
        &self,
        n_points: usize,
    ) -> Result<(Vec<PolyCurve>, Option<PolyCurve>), ConstructError> {
        let ring = (0..self.ring_size())
            .map(|i| self.ring_curve(i, n_points))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((ring, self.square_curve(n_points)?))
    }

    /// Every pair must link exactly once. The ring is rotationally symmetric,
    /// so pairs with the first ring curve suffice.
    pub fn check_linking(&self, n_points: usize) -> Result<(), ConstructError> {
        self.validate()?;
        let (ring, square) = self.curves(n_points)?;
        check_curves(&ring, square.as_ref())
    }

    /// Linking check and symmetric metrics from one sampling of the curves.
    pub fn evaluate(&self, n_points: usize) -> Result<LinkMetrics, ConstructError> {
        self.validate()?;
        let (ring, square) = self.curves(n_points)?;
        check_curves(&ring, square.as_ref())?;
        Ok(self.metrics_of(&ring, square.as_ref()))
    }

    fn metrics_of(&self, ring: &[PolyCurve], square: Option<&PolyCurve>) -> LinkMetrics {
        let first = &ring[0];
        let mut others: Vec<&PolyCurve> = ring[1..].iter().collect();
        others.extend(square);
        let mut inter = min_distance_to_set(first, &others);
        let m0 = polyline_metrics(first);
        let mut length = m0.length * f64::from(self.ring_size());
        let mut curvature = m0.min_curvature_radius;
        let mut self_dist = min_self_distance(first, DEFAULT_SKIP_WINDOW);
        if let Some(sq) = square {
            let all: Vec<&PolyCurve> = ring.iter().collect();
            inter = inter.min(min_distance_to_set(sq, &all));
            let ms = polyline_metrics(sq);
            length += ms.length;
            curvature = curvature.min(ms.min_curvature_radius);
            self_dist = self_dist.min(min_self_distance(sq, DEFAULT_SKIP_WINDOW));
        }
        assemble_metrics(
            length,
            inter,
            self_dist,
            curvature,
            super::crossing_number(1, self.q, false),
        )
    }
}

/// Linking number of two planar-family curves; both are planar, so the crossing
/// count through `a`'s flat region is exact.
fn pair_linking(a: &PolyCurve, b: &PolyCurve) -> Result<i64, ConstructError> {
    Ok(match planar_linking_number(a, b)? {
        Some(v) => v,
        None => linking_number(a, b)?,
    })
}

fn check_curves(ring: &[PolyCurve], square: Option<&PolyCurve>) -> Result<(), ConstructError> {
    let check = |i: usize, j: usize, a: &PolyCurve, b: &PolyCurve| {
        let value = pair_linking(a, b)?;
        if value.abs() == 1 {
            Ok(())
        } else {
            Err(ConstructError::Linking { i, j, value })
        }
    };
    for (j, c) in ring.iter().enumerate().skip(1) {
        check(0, j, &ring[0], c)?;
    }
    if let Some(sq) = square {
        for (j, c) in ring.iter().enumerate() {
            check(ring.len(), j, sq, c)?;
        }
    }
    Ok(())
}

/// Places `q` copies of a planar profile around the Z axis (or `q − 1` copies
/// around a central rounded square).
pub fn build_planar_link(
    q: u32,
    family: PlanarFamily,
    params: &PlanarParams,
    n_points: usize,
) -> Result<LinkConfiguration, ConstructError> {
    let spec = PlanarSpec {
        q,
        family,
        params: *params,
    };
    spec.validate()?;
    let (mut ring, square) = spec.curves(n_points)?;
    check_curves(&ring, square.as_ref())?;
    if spec.metrics_of(&ring, square.as_ref()).min_inter_distance <= 0.0 {
        return Err(ConstructError::Geom(crate::geom::GeomError::Intersecting));
    }
    ring.extend(square);
    let prov = params
        .to_vec(family)
        .iter()
        .zip([
            "rho",
            "psi",
            "gamma",
            "delta",
            "square_scale",
            "square_flat_fraction",
        ])
        .fold(
            Provenance::new(format!("planar_{}", family_name(family))),
            |p, (v, k)| p.with(k, *v),
        );
    Ok(LinkConfiguration::new(ring, 1, q, prov)?)
}

fn family_name(f: PlanarFamily) -> &'static str {
    match f {
        PlanarFamily::Circles => "circles",
        PlanarFamily::Gibbous => "gibbous",
        PlanarFamily::HybridSquare => "hybrid_square",
    }
}

/// Metrics of a planar link computed from one ring curve and the square,
/// using the rotational symmetry of the ring. Agrees with measuring the full
/// link up to rounding.
pub fn planar_metrics(spec: &PlanarSpec, n_points: usize) -> Result<LinkMetrics, ConstructError> {
    spec.validate()?;
    let (ring, square) = spec.curves(n_points)?;
    Ok(spec.metrics_of(&ring, square.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::measure_link;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn hopf_from_placement_recipe() {
        let params = PlanarParams {
            rho: 0.5,
            psi: FRAC_PI_4,
            ..Default::default()
        };
        let link = build_planar_link(2, PlanarFamily::Circles, &params, 1000).unwrap();
        let m = measure_link(&link).unwrap();
        assert!((m.normalized_ropelength / (8.0 * PI) - 1.0).abs() < 0.005);
    }

    #[test]
    fn symmetric_metrics_match_full_measure() {
        for (q, family, x) in [
            (5u32, PlanarFamily::Circles, vec![0.5, 0.9]),
            (4, PlanarFamily::Gibbous, vec![0.45, 0.8, 0.85, 0.05]),
            (
                5,
                PlanarFamily::HybridSquare,
                vec![0.6, 0.6, 1.0, 0.0, 1.0, 0.1],
            ),
        ] {
            let params = PlanarParams::from_slice(family, &x).unwrap();
            let spec = PlanarSpec { q, family, params };
            let fast = planar_metrics(&spec, 300).unwrap();
            let link = build_planar_link(q, family, &params, 300).unwrap();
            let full = measure_link(&link).unwrap();
            let rel = (fast.normalized_ropelength / full.normalized_ropelength - 1.0).abs();
            assert!(rel < 1e-9, "{family:?}: {rel}");
        }
    }

    #[test]
    fn arity_enforced() {
        assert!(PlanarParams::from_slice(PlanarFamily::Gibbous, &[0.5, 0.5]).is_err());
        let p = PlanarParams::from_slice(PlanarFamily::Circles, &[0.3, 0.4]).unwrap();
        assert_eq!(p.to_vec(PlanarFamily::Circles), vec![0.3, 0.4]);
    }

    #[test]
    fn unlinked_placement_rejected() {
        let params = PlanarParams {
            rho: 3.0,
            psi: 0.5,
            ..Default::default()
        };
        assert!(matches!(
            build_planar_link(3, PlanarFamily::Circles, &params, 200),
            Err(ConstructError::Linking { .. })
        ));
    }
}
