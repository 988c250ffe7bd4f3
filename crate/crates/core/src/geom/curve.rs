//! Discretized space curves and the samplers that produce them.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use super::vec3::{RigidMotion, Vec3};
use super::GeomError;

/// An ordered polyline, closed by default. One link component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct PolyCurve {
    vertices: Vec<Vec3>,
    closed: bool,
}

#[derive(Deserialize)]
struct RawCurve {
    vertices: Vec<Vec3>,
    #[serde(default = "default_closed")]
    closed: bool,
}

fn default_closed() -> bool {
    true
}

impl TryFrom<RawCurve> for PolyCurve {
    type Error = GeomError;
    fn try_from(raw: RawCurve) -> Result<Self, GeomError> {
        PolyCurve::new(raw.vertices, raw.closed)
    }
}

impl PolyCurve {
    /// Builds a closed curve, checking the vertex-count and distinct-neighbour invariants.
    pub fn closed(vertices: Vec<Vec3>) -> Result<Self, GeomError> {
        Self::new(vertices, true)
    }

    pub fn open(vertices: Vec<Vec3>) -> Result<Self, GeomError> {
        Self::new(vertices, false)
    }

    pub fn new(vertices: Vec<Vec3>, closed: bool) -> Result<Self, GeomError> {
        let min = if closed { 3 } else { 2 };
        if vertices.len() < min {
            return Err(GeomError::TooFewVertices {
                got: vertices.len(),
                min,
            });
        }
        if let Some(i) = vertices.iter().position(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite { index: i });
        }
        let curve = Self { vertices, closed };
        if let Some(i) = (0..curve.segment_count()).find(|&i| {
            let (a, b) = curve.segment(i);
            a == b
        }) {
            return Err(GeomError::DuplicateVertex { index: i });
        }
        Ok(curve)
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    #[inline]
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of segment `i`; the last segment of a closed curve wraps to vertex 0.
    #[inline]
    pub fn segment(&self, i: usize) -> (Vec3, Vec3) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        (0..self.segment_count()).map(move |i| self.segment(i))
    }

    pub fn max_segment_length(&self) -> f64 {
        self.segments()
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.distance(b)).sum()
    }

    /// Same point set traversed backwards.
    pub fn reversed(&self) -> PolyCurve {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyCurve {
            vertices: v,
            closed: self.closed,
        }
    }

    pub fn transformed(&self, motion: &RigidMotion) -> PolyCurve {
        self.map(|p| motion.apply(p))
    }

    pub fn scaled(&self, s: f64) -> PolyCurve {
        self.map(|p| p * s)
    }

    /// Applies `f` to every vertex. The caller keeps `f` injective on the vertex set.
    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> PolyCurve {
        PolyCurve {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
            closed: self.closed,
        }
    }
}

/// Length and the tightest three-point circumradius of a polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveMetrics {
    pub length: f64,
    /// `f64::INFINITY` when every vertex triple is collinear.
    pub min_curvature_radius: f64,
}

/// Circumradius of the triangle `a b c`; infinite for collinear or repeated points.
#[inline]
pub fn circumradius(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let twice_area = ab.cross(ac).norm();
    if twice_area == 0.0 {
        return f64::INFINITY;
    }
    let r = ab.norm() * ac.norm() * (c - b).norm() / (2.0 * twice_area);
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

pub fn polyline_metrics(curve: &PolyCurve) -> CurveMetrics {
    let v = curve.vertices();
    let n = v.len();
    let triples = if curve.is_closed() {
        n
    } else {
        n.saturating_sub(2)
    };
    let min_curvature_radius = (0..triples)
        .map(|i| circumradius(v[i], v[(i + 1) % n], v[(i + 2) % n]))
        .fold(f64::INFINITY, f64::min);
    CurveMetrics {
        length: curve.length(),
        min_curvature_radius,
    }
}

/// One component of a toroidal `n_shell`-helix: shell radius `minor_radius` about a
/// core circle of radius `major_radius` in the XY plane, winding `p` times around
/// the core. `shell_index` rotates the helix by `2π·shell_index/n_shell` about Z and
/// `phase` shifts its meridional angle.
pub fn sample_toroidal_helix(
    major_radius: f64,
    minor_radius: f64,
    p: u32,
    n_shell: u32,
    shell_index: u32,
    phase: f64,
    n_points: usize,
) -> Result<PolyCurve, GeomError> {
    if n_points < 3 {
        return Err(GeomError::TooFewVertices {
            got: n_points,
            min: 3,
        });
    }
    if !(minor_radius >= 0.0) || !(major_radius > minor_radius) {
        return Err(GeomError::SelfIntersectingTorus {
            major_radius,
            minor_radius,
        });
    }
    if p == 0 || n_shell == 0 {
        return Err(GeomError::InvalidParameter(
            "p and n_shell must be positive",
        ));
    }
    // Rotating by `offset` about Z is the same curve as shifting the meridional
    // angle by `-p·offset`; doing the latter puts every helix's vertices at the
    // same toroidal angles, so neighbouring chords sag alike.
    let offset = TAU * f64::from(shell_index) / f64::from(n_shell);
    let pf = f64::from(p);
    let vertices = (0..n_points)
        .map(|k| {
            let theta = TAU * k as f64 / n_points as f64;
            let (sm, cm) = (pf * (theta - offset) + phase).sin_cos();
            let rho = major_radius + minor_radius * cm;
            let (sl, cl) = theta.sin_cos();
            Vec3::new(rho * cl, rho * sl, minor_radius * sm)
        })
        .collect();
    PolyCurve::closed(vertices)
}

/// Planar convex profiles used for low-Q links, in a local (u, v) frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum PlanarShape {
    /// Unit circle.
    Circle,
    /// `u = γ(cos θ + δ cos 2θ)`, `v = sin θ`; convex for `|δ| < 1/4`.
    Gibbous { gamma: f64, delta: f64 },
    /// Square of half-width `scale` whose corners are quarter circles; a fraction
    /// `flat_fraction` of each half-side is straight.
    RoundedSquare { scale: f64, flat_fraction: f64 },
}

impl PlanarShape {
    pub fn validate(&self) -> Result<(), GeomError> {
        match *self {
            PlanarShape::Circle => Ok(()),
            PlanarShape::Gibbous { gamma, delta } => {
                if !(gamma > 0.0) || !gamma.is_finite() {
                    return Err(GeomError::InvalidParameter(
                        "gibbous gamma must be positive",
                    ));
                }
                if !(delta.abs() < 0.25) {
                    return Err(GeomError::NonConvex { delta });
                }
                Ok(())
            }
            PlanarShape::RoundedSquare {
                scale,
                flat_fraction,
            } => {
                if !(scale > 0.0) || !scale.is_finite() {
                    return Err(GeomError::InvalidParameter(
                        "rounded square scale must be positive",
                    ));
                }
                if !(0.0..1.0).contains(&flat_fraction) {
                    return Err(GeomError::InvalidParameter(
                        "rounded square flat fraction must lie in [0, 1)",
                    ));
                }
                Ok(())
            }
        }
    }

    fn local_points(&self, n: usize) -> Vec<(f64, f64)> {
        match *self {
            PlanarShape::Circle => (0..n)
                .map(|k| {
                    let t = TAU * k as f64 / n as f64;
                    (t.cos(), t.sin())
                })
                .collect(),
            PlanarShape::Gibbous { gamma, delta } => (0..n)
                .map(|k| {
                    let t = TAU * k as f64 / n as f64;
                    (gamma * (t.cos() + delta * (2.0 * t).cos()), t.sin())
                })
                .collect(),
            PlanarShape::RoundedSquare {
                scale,
                flat_fraction,
            } => rounded_square_points(scale, flat_fraction, n),
        }
    }
}

/// Arc-length sampling, starting at `(s, -a)` and running counter-clockwise.
fn rounded_square_points(scale: f64, flat_fraction: f64, n: usize) -> Vec<(f64, f64)> {
    let a = flat_fraction * scale;
    let c = (1.0 - flat_fraction) * scale;
    let side = 2.0 * a;
    let arc = FRAC_PI_2 * c;
    let total = 4.0 * (side + arc);
    (0..n)
        .map(|k| {
            let mut u = total * k as f64 / n as f64;
            let mut quarter = 0;
            while quarter < 3 && u >= side + arc {
                u -= side + arc;
                quarter += 1;
            }
            let (x, y) = if u < side {
                (scale, -a + u)
            } else {
                let ang = (u - side) / c;
                (a + c * ang.cos(), a + c * ang.sin())
            };
            let (s, co) = (f64::from(quarter) * FRAC_PI_2).sin_cos();
            (co * x - s * y, s * x + co * y)
        })
        .collect()
}

/// Where a planar profile goes: start in the XZ plane (local u along X, v along Z),
/// rotate about Z by `azimuth`, push out along the new radial direction by
/// `displacement`, then tilt about that radial direction by `inclination`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Placement {
    pub azimuth: f64,
    pub displacement: f64,
    pub inclination: f64,
}

impl Placement {
    /// The placement that lays the profile flat in the XY plane about the origin.
    pub fn horizontal() -> Self {
        Self {
            azimuth: 0.0,
            displacement: 0.0,
            inclination: -FRAC_PI_2,
        }
    }

    fn frame(&self) -> (Vec3, Vec3, Vec3) {
        let (s, c) = self.azimuth.sin_cos();
        let radial = Vec3::new(c, s, 0.0);
        let tangential = Vec3::new(-s, c, 0.0);
        let (si, ci) = self.inclination.sin_cos();
        // Z rotated about the radial axis by the inclination.
        let up = Vec3::Z * ci - tangential * si;
        (radial * self.displacement, radial, up)
    }
}

pub fn sample_planar_curve(
    shape: &PlanarShape,
    placement: &Placement,
    n_points: usize,
) -> Result<PolyCurve, GeomError> {
    if n_points < 3 {
        return Err(GeomError::TooFewVertices {
            got: n_points,
            min: 3,
        });
    }
    shape.validate()?;
    let (center, u_axis, v_axis) = placement.frame();
    let vertices = shape
        .local_points(n_points)
        .into_iter()
        .map(|(u, v)| center + u_axis * u + v_axis * v)
        .collect();
    PolyCurve::closed(vertices)
}

/// Exact arc length of a closed planar circle, for reference in callers.
pub fn circle_length(radius: f64) -> f64 {
    2.0 * PI * radius
}
