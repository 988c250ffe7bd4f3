//! Three-quarter coefficients of doubled constructions as the shell count grows.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::torus::{build_increment_spec_with, build_optimal_spec, doubled_spec};
use super::{crossing_number, ConstructError, Increment, JengaMode, TorusSpec};
use crate::bounds::lower_bound_report;
use crate::helix::CountMode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Inc4,
    Inc5,
    Optimal,
}

impl FromStr for SweepMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "inc4" => Ok(SweepMethod::Inc4),
            "inc5" => Ok(SweepMethod::Inc5),
            "optimal" => Ok(SweepMethod::Optimal),
            _ => Err(format!("unknown sweep method {s:?}")),
        }
    }
}

/// One shell count. `q` counts the components of the doubled link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: u32,
    pub q: u32,
    pub crossing_number: u64,
    pub alpha_best: f64,
    pub alpha_worst: f64,
    /// `alpha_best` over the best lower bound for the same component count.
    pub ratio_to_lower_bound: f64,
}

fn doubled_alpha(spec: &TorusSpec) -> Result<(u32, u64, f64), ConstructError> {
    let (spec, _) = doubled_spec(spec);
    let c = crossing_number(spec.p, spec.q(), true);
    let length = 2.0 * spec.predicted_length()?;
    Ok((2 * spec.q(), c, length / (c as f64).powf(0.75)))
}

fn row(method: SweepMethod, t: u32, mode: CountMode) -> Result<SweepRow, ConstructError> {
    let (worst, best) = match method {
        SweepMethod::Optimal => {
            let s = build_optimal_spec(t, mode)?;
            (s.clone(), s)
        }
        SweepMethod::Inc4 | SweepMethod::Inc5 => {
            let inc = if method == SweepMethod::Inc4 {
                Increment::Four
            } else {
                Increment::Five
            };
            let worst = build_increment_spec_with(t, inc, JengaMode::Naive, None)?;
            // Best case: the outer shell holds only as many as the one inside it.
            let best = if t >= 2 {
                build_increment_spec_with(
                    t,
                    inc,
                    JengaMode::DeferredRadius,
                    Some(inc.step() * (t - 1)),
                )?
            } else {
                worst.clone()
            };
            (worst, best)
        }
    };
    let (q_worst, c_worst, alpha_worst) = doubled_alpha(&worst)?;
    let (q_best, _, alpha_best) = doubled_alpha(&best)?;
    let lower = lower_bound_report(1, q_best)
        .map_err(|e| ConstructError::InvalidSpec(e.to_string()))?
        .alpha_best();
    Ok(SweepRow {
        t,
        q: q_worst,
        crossing_number: c_worst,
        alpha_best,
        alpha_worst,
        ratio_to_lower_bound: alpha_best / lower,
    })
}

/// Rows for `t_min..=t_max`, in order.
pub fn sweep(
    method: SweepMethod,
    t_min: u32,
    t_max: u32,
    mode: CountMode,
) -> Result<Vec<SweepRow>, ConstructError> {
    if t_min == 0 || t_max < t_min {
        return Err(ConstructError::InvalidSpec(format!(
            "need 1 <= tmin <= tmax, got {t_min}..{t_max}"
        )));
    }
    (t_min..=t_max)
        .into_par_iter()
        .map(|t| row(method, t, mode))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_ordered_and_above_lower_bound() {
        let rows = sweep(SweepMethod::Inc4, 1, 8, CountMode::Exact).unwrap();
        assert_eq!(rows.len(), 8);
        for (k, r) in rows.iter().enumerate() {
            assert_eq!(r.t, k as u32 + 1);
            assert!(r.ratio_to_lower_bound > 1.0);
            let lb = lower_bound_report(1, r.q).unwrap().alpha_best();
            assert!(r.alpha_worst > lb);
        }
        assert!(sweep(SweepMethod::Inc4, 5, 4, CountMode::Exact).is_err());
    }
}
