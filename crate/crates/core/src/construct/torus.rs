use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConstructError, ConstructionReport};
use crate::geom::{
    measure_link, sample_toroidal_helix, LinkConfiguration, PolyCurve, Provenance, RigidMotion,
    Vec3, DEFAULT_POINTS,
};
use crate::helix::{max_helices, required_hole_approx, toroidal_correction, CountMode};

/// Clearance shortfall tolerated when checking a discretized build.
pub const DEFAULT_OVERLAP_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub radius: f64,
    pub count: u32,
    #[serde(default)]
    pub phase_offset: f64,
}

/// Concentric shells of helices around an optional core circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusSpec {
    pub shells: Vec<Shell>,
    pub has_core: bool,
    pub major_radius: f64,
    pub p: u32,
    pub t_shells: u32,
    #[serde(default)]
    pub method: String,
}

impl TorusSpec {
    pub fn q(&self) -> u32 {
        u32::from(self.has_core) + self.shells.iter().map(|s| s.count).sum::<u32>()
    }

    pub fn outer_radius(&self) -> f64 {
        self.shells.last().map_or(0.0, |s| s.radius)
    }

    /// `h = R₀ − r_o`.
    pub fn hole_radius(&self) -> f64 {
        self.major_radius - self.outer_radius()
    }

    pub fn validate(&self) -> Result<(), ConstructError> {
        let bad = |m: &str| Err(ConstructError::InvalidSpec(m.to_string()));
        if self.p == 0 {
            return bad("p must be positive");
        }
        if self.q() == 0 {
            return bad("spec has no components");
        }
        let mut prev: Option<f64> = self.has_core.then_some(0.0);
        for s in &self.shells {
            if s.count == 0 {
                return bad("empty shell");
            }
            if !(s.radius >= 2.0) || !s.radius.is_finite() {
                return bad("shell radius below 2");
            }
            if let Some(r) = prev {
                if s.radius - r < 2.0 - 1e-12 {
                    return bad("shells closer than 2");
                }
            }
            prev = Some(s.radius);
        }
        if !(self.hole_radius() > 0.0) || !self.major_radius.is_finite() {
            return bad("major radius does not clear the outer shell");
        }
        Ok(())
    }

    fn helix_length(&self, r: f64) -> f64 {
        let pf = f64::from(self.p);
        TAU * (self.major_radius.powi(2) + (pf * r).powi(2)).sqrt()
    }

    /// Length if every helix were straightened onto a cylinder.
    pub fn straight_length(&self) -> f64 {
        let core = if self.has_core {
            TAU * self.major_radius
        } else {
            0.0
        };
        core + self
            .shells
            .iter()
            .map(|s| f64::from(s.count) * self.helix_length(s.radius))
            .sum::<f64>()
    }

    /// Length of the toroidal helices, shell by shell.
    pub fn predicted_length(&self) -> Result<f64, ConstructError> {
        let core = if self.has_core {
            TAU * self.major_radius
        } else {
            0.0
        };
        let shells = self
            .shells
            .iter()
            .map(|s| {
                let c = toroidal_correction(self.major_radius / s.radius, self.p)?;
                Ok(f64::from(s.count) * self.helix_length(s.radius) * c)
            })
            .sum::<Result<f64, ConstructError>>()?;
        Ok(core + shells)
    }

    /// `R₀ ≥ 2r_o + 2`: a second copy fits through the hole.
    pub fn min_doubling_radius(&self) -> f64 {
        2.0 * self.outer_radius() + 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Increment {
    Four,
    Five,
}

impl Increment {
    pub fn step(self) -> u32 {
        match self {
            Increment::Four => 4,
            Increment::Five => 5,
        }
    }
}

impl FromStr for Increment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "4" | "inc4" | "four" => Ok(Increment::Four),
            "5" | "inc5" | "five" => Ok(Increment::Five),
            _ => Err(format!("unknown increment {s:?}")),
        }
    }
}

/// How the hole is sized when the outer shell is only partly filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JengaMode {
    /// Size the hole for a full outer shell.
    #[default]
    Naive,
    /// Size the hole for the shell that actually demands the most.
    DeferredRadius,
}

impl FromStr for JengaMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "naive" => Ok(JengaMode::Naive),
            "deferred" | "deferred_radius" => Ok(JengaMode::DeferredRadius),
            _ => Err(format!("unknown jenga mode {s:?}")),
        }
    }
}

/// Core circle plus shells at radius `2i` holding `increment·i` helices.
pub fn build_increment_spec(
    t_shells: u32,
    increment: Increment,
    jenga: JengaMode,
) -> Result<TorusSpec, ConstructError> {
    build_increment_spec_with(t_shells, increment, jenga, None)
}

/// As [`build_increment_spec`] with the outer shell holding `outer_count`
/// helices instead of `increment·T`.
pub fn build_increment_spec_with(
    t_shells: u32,
    increment: Increment,
    jenga: JengaMode,
    outer_count: Option<u32>,
) -> Result<TorusSpec, ConstructError> {
    if t_shells == 0 {
        return Err(ConstructError::NoShells);
    }
    let k = increment.step();
    let full_outer = k * t_shells;
    let mut shells: Vec<Shell> = (1..=t_shells)
        .map(|i| Shell {
            radius: 2.0 * f64::from(i),
            count: k * i,
            phase_offset: 0.0,
        })
        .collect();
    if let Some(n) = outer_count {
        if n > full_outer {
            return Err(ConstructError::InvalidSpec(format!(
                "outer shell holds at most {full_outer} helices"
            )));
        }
        shells.last_mut().expect("t_shells >= 1").count = n;
    }
    let hole_for = |n: u32, r: f64| {
        required_hole_approx(n, r).ok_or_else(|| {
            ConstructError::InvalidSpec(format!("{n} helices cannot share radius {r}"))
        })
    };
    let r_o = 2.0 * f64::from(t_shells);
    let hole = match jenga {
        JengaMode::Naive => hole_for(full_outer, r_o)?,
        JengaMode::DeferredRadius => shells
            .iter()
            .map(|s| hole_for(s.count, s.radius))
            .try_fold(0.0f64, |m, h| h.map(|h| m.max(h)))?,
    };
    shells.retain(|s| s.count > 0);
    // An emptied outer shell still sets r_o: the hole is measured from it.
    let spec = TorusSpec {
        shells,
        has_core: true,
        major_radius: hole + r_o,
        p: 1,
        t_shells,
        method: format!("inc{k}"),
    };
    spec.validate()?;
    Ok(spec)
}

/// Shells at radius `2i`, hole radius `2T`, each shell filled to capacity.
pub fn build_optimal_spec(t_shells: u32, mode: CountMode) -> Result<TorusSpec, ConstructError> {
    if t_shells == 0 {
        return Err(ConstructError::NoShells);
    }
    let t = f64::from(t_shells);
    let hole = 2.0 * t;
    let shells = (1..=t_shells)
        .into_par_iter()
        .map(|i| {
            let r = 2.0 * f64::from(i);
            Ok(Shell {
                radius: r,
                count: max_helices(r, hole, mode)?,
                phase_offset: 0.0,
            })
        })
        .collect::<Result<Vec<_>, ConstructError>>()?
        .into_iter()
        .filter(|s| s.count > 0)
        .collect();
    let spec = TorusSpec {
        shells,
        has_core: false,
        major_radius: 4.0 * t,
        p: 1,
        t_shells,
        method: "optimal".into(),
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizeOptions {
    pub n_points: usize,
    pub overlap_tolerance: f64,
    pub check: bool,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        Self {
            n_points: DEFAULT_POINTS,
            overlap_tolerance: DEFAULT_OVERLAP_TOLERANCE,
            check: true,
        }
    }
}

fn provenance(spec: &TorusSpec) -> Provenance {
    let method = if spec.method.is_empty() {
        "torus"
    } else {
        &spec.method
    };
    Provenance::new(method)
        .with("t_shells", f64::from(spec.t_shells))
        .with("major_radius", spec.major_radius)
        .with("outer_radius", spec.outer_radius())
}

fn components(spec: &TorusSpec, n_points: usize) -> Result<Vec<PolyCurve>, ConstructError> {
    let mut jobs: Vec<(f64, u32, u32, f64)> = Vec::new();
    if spec.has_core {
        jobs.push((0.0, 1, 0, 0.0));
    }
    for s in &spec.shells {
        jobs.extend((0..s.count).map(|j| (s.radius, s.count, j, s.phase_offset)));
    }
    jobs.into_par_iter()
        .map(|(r, n, j, phase)| {
            sample_toroidal_helix(spec.major_radius, r, spec.p, n, j, phase, n_points)
                .map_err(ConstructError::from)
        })
        .collect()
}

pub fn realize_torus(
    spec: &TorusSpec,
    n_points: usize,
) -> Result<LinkConfiguration, ConstructError> {
    realize_torus_with(
        spec,
        RealizeOptions {
            n_points,
            ..RealizeOptions::default()
        },
    )
}

/// Samples every component; with `check` set, a clearance below
/// `2 − overlap_tolerance` is an error.
pub fn realize_torus_with(
    spec: &TorusSpec,
    opts: RealizeOptions,
) -> Result<LinkConfiguration, ConstructError> {
    spec.validate()?;
    let link = LinkConfiguration::new(
        components(spec, opts.n_points)?,
        spec.p,
        spec.q(),
        provenance(spec),
    )?;
    if opts.check {
        check_clearance(&link, opts.overlap_tolerance)?;
    }
    Ok(link)
}

fn check_clearance(link: &LinkConfiguration, tolerance: f64) -> Result<(), ConstructError> {
    let m = measure_link(link)?;
    if m.min_distance() < 2.0 - tolerance {
        return Err(ConstructError::Overlap {
            min_distance: m.min_distance(),
            tolerance,
        });
    }
    Ok(())
}

/// `spec` with its major radius raised to the doubling minimum if needed, and
/// the original radius when it was raised.
pub fn doubled_spec(spec: &TorusSpec) -> (TorusSpec, Option<f64>) {
    let need = spec.min_doubling_radius();
    if spec.major_radius >= need {
        return (spec.clone(), None);
    }
    let mut s = spec.clone();
    s.major_radius = need;
    (s, Some(spec.major_radius))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubledLink {
    pub link: LinkConfiguration,
    pub report: ConstructionReport,
}

/// Two copies of `spec` threaded through each other's holes.
///
/// The copy is (optionally mirrored through the XY plane,) turned a quarter
/// turn about the x-axis and moved out by `R₀` along x, so its core circle
/// passes through the centre of the first torus.
pub fn donut_double(
    spec: &TorusSpec,
    mirror: bool,
    opts: RealizeOptions,
) -> Result<DoubledLink, ConstructError> {
    let (spec, inflated_from) = doubled_spec(spec);
    if let Some(old) = inflated_from {
        log::info!(
            "major radius raised from {old} to {} for doubling",
            spec.major_radius
        );
    }
    let first = realize_torus_with(
        &spec,
        RealizeOptions {
            check: false,
            ..opts
        },
    )?;
    let motion = RigidMotion::translation(Vec3::new(spec.major_radius, 0.0, 0.0))
        .compose(&RigidMotion::rotation(Vec3::X, FRAC_PI_2));
    let copy: Vec<PolyCurve> = first
        .components
        .iter()
        .map(|c| {
            let c = if mirror {
                c.map(|v| Vec3::new(v.x, v.y, -v.z))
            } else {
                c.clone()
            };
            c.transformed(&motion)
        })
        .collect();
    let mut components = first.components;
    components.extend(copy);
    let mut prov = provenance(&spec)
        .with("doubled", 1.0)
        .with("mirror", f64::from(u8::from(mirror)));
    if let Some(old) = inflated_from {
        prov = prov.with("inflated_from", old);
    }
    let link = LinkConfiguration::new(components, spec.p, spec.q(), prov)?;
    if opts.check {
        check_clearance(&link, opts.overlap_tolerance)?;
    }
    let mut report = ConstructionReport::torus(&spec, true, mirror)?;
    report.inflated_from = inflated_from;
    Ok(DoubledLink { link, report })
}

/// A meridian circle of radius `r_o + 2` around the core at angle `azimuth`:
/// it links every helix and the core once.
pub fn perpendicular_circle(
    spec: &TorusSpec,
    azimuth: f64,
    n_points: usize,
) -> Result<PolyCurve, ConstructError> {
    if n_points < 3 {
        return Err(ConstructError::InvalidSpec("need at least 3 points".into()));
    }
    let radius = spec.outer_radius() + 2.0;
    let (s, c) = azimuth.sin_cos();
    let radial = Vec3::new(c, s, 0.0);
    let center = radial * spec.major_radius;
    let vertices = (0..n_points)
        .map(|k| {
            let t = TAU * k as f64 / n_points as f64;
            center + radial * (radius * t.cos()) + Vec3::Z * (radius * t.sin())
        })
        .collect();
    Ok(PolyCurve::closed(vertices)?)
}

/// Angle halfway between the first two helices of the outer shell, where a
/// perpendicular circle has the most room.
pub(crate) fn gap_azimuth(spec: &TorusSpec) -> f64 {
    spec.shells
        .last()
        .map_or(0.0, |s| PI / f64::from(s.count.max(1)))
}
