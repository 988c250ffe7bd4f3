//! Large-`T` three-quarter coefficients of the torus constructions.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::helix::continuum_correction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitMethod {
    Inc4Single,
    Inc4Doubled,
    Inc5Single,
    Inc5Doubled,
    OptimalDoubled,
}

impl LimitMethod {
    pub const ALL: [LimitMethod; 5] = [
        LimitMethod::Inc4Single,
        LimitMethod::Inc4Doubled,
        LimitMethod::Inc5Single,
        LimitMethod::Inc5Doubled,
        LimitMethod::OptimalDoubled,
    ];
}

impl FromStr for LimitMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inc4_single" => Ok(LimitMethod::Inc4Single),
            "inc4_doubled" => Ok(LimitMethod::Inc4Doubled),
            "inc5_single" => Ok(LimitMethod::Inc5Single),
            "inc5_doubled" => Ok(LimitMethod::Inc5Doubled),
            "optimal_doubled" => Ok(LimitMethod::OptimalDoubled),
            _ => Err(format!("unknown limit method {s:?}")),
        }
    }
}

/// `R₀ / T` of the single increment-`k` torus: `2 + 2k/√(4π² − k²)`.
pub fn increment_beta(k: u32) -> f64 {
    let k = f64::from(k);
    2.0 + 2.0 * k / (4.0 * PI * PI - k * k).sqrt()
}

/// `2π(1/√(π² − 4) + 1/2)√8`
pub fn kappa() -> f64 {
    TAU * (1.0 / (PI * PI - 4.0).sqrt() + 0.5) * 8f64.sqrt()
}

/// Straight-helix coefficient of a single torus with `k·i` helices on shell
/// `i` and major radius `βT`:
/// `2πk((β² + 4)^{3/2} − β³) / (12 (k/2)^{3/2})`.
pub fn single_alpha_limit(k: u32, beta: f64) -> f64 {
    let kf = f64::from(k);
    TAU * kf * ((beta * beta + 4.0).powf(1.5) - beta.powi(3)) / (12.0 * (kf / 2.0).powf(1.5))
}

fn optimal_alpha() -> f64 {
    ((7.0 + 5.0 * SQRT_2) * PI).sqrt()
        * (10f64.sqrt() - 2.0 + 3.0 * (0.4f64.sqrt().atanh() - 0.5f64.atanh()))
}

fn beta_of(method: LimitMethod) -> f64 {
    match method {
        LimitMethod::Inc4Single => increment_beta(4),
        LimitMethod::Inc5Single => increment_beta(5),
        // doubling needs R₀ ≥ 2r_o + 2, i.e. β ≥ 4
        LimitMethod::Inc4Doubled => increment_beta(4).max(4.0),
        LimitMethod::Inc5Doubled => increment_beta(5).max(4.0),
        LimitMethod::OptimalDoubled => 4.0,
    }
}

/// Length-weighted toroidal correction in the continuum limit.
pub fn limit_correction(method: LimitMethod) -> f64 {
    let beta = beta_of(method);
    match method {
        // helices per unit radius grow like x / √(1 + x²) in the optimal torus
        LimitMethod::OptimalDoubled => continuum_correction(beta, |x| x / (1.0 + x * x).sqrt()),
        _ => continuum_correction(beta, |x| x),
    }
}

pub fn limiting_alpha(method: LimitMethod, corrected: bool) -> f64 {
    let base = match method {
        LimitMethod::Inc4Single => single_alpha_limit(4, beta_of(method)),
        LimitMethod::Inc5Single => single_alpha_limit(5, beta_of(method)),
        LimitMethod::Inc4Doubled => single_alpha_limit(4, beta_of(method)) / SQRT_2,
        LimitMethod::Inc5Doubled => single_alpha_limit(5, beta_of(method)) / SQRT_2,
        LimitMethod::OptimalDoubled => optimal_alpha(),
    };
    if corrected {
        base * limit_correction(method)
    } else {
        base
    }
}
