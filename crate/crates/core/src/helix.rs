//! Packing mathematics for concentric shells of helices.
//!
//! `n` helices share a cylinder of radius `r` and are spread evenly around it. The
//! cylinder closes up into a torus whose hole has radius `h`, so each helix rises
//! `H = 2πh` per turn. Two neighbouring helices, offset by `θ` along their shared
//! parameter, are at squared distance
//!
//! ```text
//! d²(θ) = 2r²(1 − cos(θ + 2π/n)) + h²θ²
//! ```
//!
//! and a packing is admissible when the minimum of `d` is at least 2.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::adaptive_simpson;

/// Safety decrement applied to the continuous count in approximate mode.
pub const DEFAULT_EPSILON: f64 = TAU - 6.0;

/// Absolute tolerance of every correction quadrature.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

const THETA_TOLERANCE: f64 = 1e-10;
const SCAN_POINTS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HelixError {
    #[error("shell radius {0} is too small (need r >= 2)")]
    ShellTooSmall(f64),
    #[error("hole radius must be positive, got {0}")]
    NonPositiveHole(f64),
    #[error("could not bracket the minimum for n = {n}, r = {r}, h = {h}")]
    Bracket { n: f64, r: f64, h: f64 },
    #[error("cubic approximation invalid: effective count {0} is at most 2")]
    CubicDomain(f64),
    #[error("torus ratio {ratio} self-intersects")]
    SelfIntersecting { ratio: f64 },
    #[error("p must be at least 1")]
    ZeroWinding,
    #[error("need at least one shell")]
    NoShells,
}

/// One shell-packing question: can `n` helices of radius `r` share a hole of
/// radius `h` with offset `theta_delta` between neighbours?
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixShellProblem {
    pub r: f64,
    pub h: f64,
    pub n: u32,
    pub theta_delta: f64,
    pub epsilon: f64,
}

impl HelixShellProblem {
    pub fn new(r: f64, h: f64, n: u32) -> Result<Self, HelixError> {
        let problem = Self {
            r,
            h,
            n,
            theta_delta: 0.0,
            epsilon: DEFAULT_EPSILON,
        };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<(), HelixError> {
        check_shell(self.r, self.h)?;
        if self.n == 0 {
            return Err(HelixError::Bracket {
                n: 0.0,
                r: self.r,
                h: self.h,
            });
        }
        Ok(())
    }

    pub fn squared_distance(&self) -> f64 {
        squared_pair_distance(f64::from(self.n), self.r, self.h, self.theta_delta)
    }

    /// Minimizes over `theta_delta`, storing the minimizer.
    pub fn solve(&mut self) -> Result<PairMinimum, HelixError> {
        let m = pair_min_distance(self.n, self.r, self.h)?;
        self.theta_delta = m.theta_at_min;
        Ok(m)
    }

    pub fn continuous_count(&self) -> f64 {
        continuous_count(self.r, self.h)
    }
}

fn check_shell(r: f64, h: f64) -> Result<(), HelixError> {
    if !(r >= 2.0) || !r.is_finite() {
        return Err(HelixError::ShellTooSmall(r));
    }
    if !(h > 0.0) {
        return Err(HelixError::NonPositiveHole(h));
    }
    Ok(())
}

#[inline]
pub fn squared_pair_distance(n: f64, r: f64, h: f64, theta: f64) -> f64 {
    2.0 * r * r * (1.0 - (theta + TAU / n).cos()) + h * h * theta * theta
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairMinimum {
    pub distance: f64,
    pub theta_at_min: f64,
}

/// Closest approach of two neighbouring helices among `n` on one shell.
pub fn pair_min_distance(n: u32, r: f64, h: f64) -> Result<PairMinimum, HelixError> {
    pair_min_distance_frac(f64::from(n), r, h)
}

/// As [`pair_min_distance`] for a real-valued helix count.
///
/// The minimizer lies in `[−2π/n, 0]`: the derivative is positive at 0 and
/// negative at `−2π/n`. A coarse scan picks the best cell, golden-section
/// search refines it and a few Newton steps finish it.
pub fn pair_min_distance_frac(n: f64, r: f64, h: f64) -> Result<PairMinimum, HelixError> {
    if !(n >= 1.0) || !(r > 0.0) || !(h > 0.0) || !(n * r * h).is_finite() {
        return Err(HelixError::Bracket { n, r, h });
    }
    let f = |t: f64| squared_pair_distance(n, r, h, t);
    let lo = (-TAU / n).max(-PI);
    let step = -lo / SCAN_POINTS as f64;
    let best = (0..=SCAN_POINTS)
        .map(|k| lo + step * k as f64)
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .ok_or(HelixError::Bracket { n, r, h })?;
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(0.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > THETA_TOLERANCE {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    // Newton on f' polishes tall shells, where the minimizer sits far below the
    // golden-section tolerance.
    let mut theta = 0.5 * (a + b);
    for _ in 0..8 {
        let phase = theta + TAU / n;
        let d1 = 2.0 * r * r * phase.sin() + 2.0 * h * h * theta;
        let d2 = 2.0 * r * r * phase.cos() + 2.0 * h * h;
        if !(d2 > 0.0) {
            break;
        }
        let next = (theta - d1 / d2).clamp(lo, 0.0);
        if !(f(next) <= f(theta)) || next == theta {
            break;
        }
        theta = next;
    }
    let d2 = f(theta);
    if !d2.is_finite() {
        return Err(HelixError::Bracket { n, r, h });
    }
    Ok(PairMinimum {
        distance: d2.max(0.0).sqrt(),
        theta_at_min: theta,
    })
}

/// `N_a = πhr / √(h² + r²)`, the continuous helix count from the rectangle
/// approximation.
pub fn continuous_count(r: f64, h: f64) -> f64 {
    PI * h * r / (h * h + r * r).sqrt()
}

/// How shell capacities are decided.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", content = "epsilon", rename_all = "snake_case")]
pub enum CountMode {
    /// Largest `n` whose neighbours stay at distance ≥ 2.
    #[default]
    Exact,
    /// `⌊N_a − ε⌋`.
    Approx(f64),
}

/// Rounding allowance when testing a computed clearance against 2.
pub const CLEARANCE_SLACK: f64 = 1e-12;

/// Capacity of a shell of radius `r` around a hole of radius `h`.
pub fn max_helices(r: f64, h: f64, mode: CountMode) -> Result<u32, HelixError> {
    check_shell(r, h)?;
    let approx = |eps: f64| {
        let v = (continuous_count(r, h) - eps).floor();
        if v < 1.0 {
            0
        } else {
            v as u32
        }
    };
    match mode {
        CountMode::Approx(eps) => Ok(approx(eps)),
        CountMode::Exact => {
            let fits = |n: u32| -> Result<bool, HelixError> {
                Ok(pair_min_distance(n, r, h)?.distance >= 2.0 - CLEARANCE_SLACK)
            };
            let mut n = approx(DEFAULT_EPSILON).max(1);
            while n >= 2 && !fits(n)? {
                n -= 1;
            }
            while fits(n + 1)? {
                n += 1;
            }
            Ok(n)
        }
    }
}

/// Hole radius `n r / √(π²r² − n²)` that the rectangle approximation demands for
/// `n` helices on a shell of radius `r`; `None` when no hole suffices.
pub fn required_hole_approx(n: u32, r: f64) -> Option<f64> {
    if n == 0 {
        return Some(0.0);
    }
    let nf = f64::from(n);
    let disc = PI * PI * r * r - nf * nf;
    (disc > 0.0).then(|| nf * r / disc.sqrt())
}

/// Smallest hole radius at which `n` helices on radius `r` keep clearance 2, by
/// bisection to relative precision `1e-12`. `None` when even a straight cylinder
/// cannot hold them.
pub fn required_hole_exact(n: u32, r: f64) -> Result<Option<f64>, HelixError> {
    if n <= 1 {
        return Ok(Some(0.0));
    }
    if !(r > 0.0) {
        return Err(HelixError::ShellTooSmall(r));
    }
    // Tall limit of the pair distance is the chord 2r sin(π/n).
    if 2.0 * r * (PI / f64::from(n)).sin() <= 2.0 {
        return Ok(None);
    }
    let fits = |h: f64| -> Result<bool, HelixError> {
        Ok(pair_min_distance(n, r, h)?.distance >= 2.0 - CLEARANCE_SLACK)
    };
    let mut hi = required_hole_approx(n, r).unwrap_or(r).max(1.0);
    let mut guard = 0;
    while !fits(hi)? {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Ok(None);
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Terms of the cubic Taylor model of `d²` around `θ = 0`, at the real count
/// `n = N_a − ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicModel {
    pub r: f64,
    pub n: f64,
    pub s: f64,
    pub a: f64,
}

impl CubicModel {
    pub fn new(r: f64, h: f64, epsilon: f64) -> Result<Self, HelixError> {
        check_shell(r, h)?;
        let n = continuous_count(r, h) - epsilon;
        if !(n > 2.0) {
            return Err(HelixError::CubicDomain(n));
        }
        let (s, c) = (TAU / n).sin_cos();
        Ok(Self {
            r,
            n,
            s,
            a: r * r * c + h * h,
        })
    }

    /// `−r²sθ³/3 + Aθ² + 2r²sθ + 4r² sin²(π/n)`
    pub fn eval(&self, theta: f64) -> f64 {
        let r2 = self.r * self.r;
        let half = (PI / self.n).sin();
        -r2 * self.s * theta.powi(3) / 3.0
            + self.a * theta * theta
            + 2.0 * r2 * self.s * theta
            + 4.0 * r2 * half * half
    }

    /// `ζ = 8r⁴s² / (√(4A² + 8r⁴s²) + 2A)`, the cancellation-free form.
    fn zeta(&self) -> Result<f64, HelixError> {
        let r4s2 = self.r.powi(4) * self.s * self.s;
        let disc = 4.0 * self.a * self.a + 8.0 * r4s2;
        let denom = disc.sqrt() + 2.0 * self.a;
        if disc < 0.0 || !(denom > 0.0) {
            return Err(HelixError::CubicDomain(self.n));
        }
        Ok(8.0 * r4s2 / denom)
    }

    /// Stationary point near zero, `θ = −ζ / (2r²s)`.
    pub fn stationary_theta(&self) -> Result<f64, HelixError> {
        Ok(-self.zeta()? / (2.0 * self.r * self.r * self.s))
    }

    /// Value at the stationary point via the closed form
    /// `4r² sin²(π/n) − ζ + ζ³/(24r⁴s²) + Aζ²/(4r⁴s²)`.
    pub fn closed_form_minimum(&self) -> Result<f64, HelixError> {
        let z = self.zeta()?;
        let r2 = self.r * self.r;
        let r4s2 = r2 * r2 * self.s * self.s;
        let half = (PI / self.n).sin();
        Ok(4.0 * r2 * half * half - z + z.powi(3) / (24.0 * r4s2) + self.a * z * z / (4.0 * r4s2))
    }
}

/// Squared minimum distance of the cubic model at `n = N_a − ε`.
pub fn cubic_min_distance(r: f64, h: f64, epsilon: f64) -> Result<f64, HelixError> {
    CubicModel::new(r, h, epsilon)?.closed_form_minimum()
}

/// Length of a toroidal helix relative to the straight helix with the same
/// radii: `∫₀^{2π} √(1 + (ratio − cos θ)²/p²) dθ / (2π √((ratio/p)² + 1))` with
/// `ratio = R/r`.
pub fn toroidal_correction(ratio: f64, p: u32) -> Result<f64, HelixError> {
    if p == 0 {
        return Err(HelixError::ZeroWinding);
    }
    if !(ratio >= 1.0) || !ratio.is_finite() {
        return Err(HelixError::SelfIntersecting { ratio });
    }
    if ratio == 1.0 && p > 1 {
        log::warn!("toroidal correction at ratio 1 with p = {p}: the torus touches its axis");
    }
    let pf = f64::from(p);
    let integral = adaptive_simpson(
        |t| (1.0 + ((ratio - t.cos()) / pf).powi(2)).sqrt(),
        0.0,
        TAU,
        QUADRATURE_TOLERANCE,
    );
    Ok(integral / (TAU * ((ratio / pf).powi(2) + 1.0).sqrt()))
}

/// Length-weighted toroidal correction over the shells of the doubled
/// four-increment torus with `t_shells` shells: shell `i` has radius `2i`, `4i`
/// helices, and the major radius is `4T`.
pub fn aggregate_correction(t_shells: u32) -> Result<f64, HelixError> {
    if t_shells == 0 {
        return Err(HelixError::NoShells);
    }
    let t = f64::from(t_shells);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..=t_shells {
        let fi = f64::from(i);
        // count × straight length, up to a common factor
        let weight = fi * (4.0 * t * t + fi * fi).sqrt();
        num += weight * toroidal_correction(2.0 * t / fi, 1)?;
        den += weight;
    }
    Ok(num / den)
}

/// Limiting correction when shells fill the torus continuously: radii `2xT`
/// for `x ∈ (0, 1]`, major radius `βT`, helix density `weight(x)`.
pub fn continuum_correction(beta: f64, weight: impl Fn(f64) -> f64 + Sync) -> f64 {
    let inner = |x: f64| {
        if x == 0.0 {
            return TAU * beta;
        }
        adaptive_simpson(
            |t| (4.0 * x * x + (beta - 2.0 * x * t.cos()).powi(2)).sqrt(),
            0.0,
            TAU,
            1e-11,
        )
    };
    let num = adaptive_simpson(|x| weight(x) * inner(x), 0.0, 1.0, 1e-10);
    let den = adaptive_simpson(
        |x| weight(x) * TAU * (beta * beta + 4.0 * x * x).sqrt(),
        0.0,
        1.0,
        1e-11,
    );
    num / den
}
