//! Moving helices inward ("reverse Jenga") and the perpendicular-circle move.

use serde::{Deserialize, Serialize};

use super::{normalized_ropelength, OptimizeError};
use crate::construct::{
    gap_azimuth, perpendicular_circle, realize_torus_with, ConstructError, RealizeOptions,
    TorusSpec,
};
use crate::geom::{LinkConfiguration, Provenance};
use crate::helix::{max_helices, required_hole_exact, CountMode};

/// Length of the toroidal helices (and core) of `spec`.
pub fn predicted_length(spec: &TorusSpec) -> Result<f64, ConstructError> {
    spec.predicted_length()
}

/// Smallest hole that keeps every shell at clearance 2, or `None` if some
/// shell is over capacity for any hole.
fn needed_hole(spec: &TorusSpec) -> Result<Option<f64>, ConstructError> {
    let mut h = 0.0f64;
    for s in &spec.shells {
        match required_hole_exact(s.count, s.radius)? {
            Some(v) => h = h.max(v),
            None => return Ok(None),
        }
    }
    Ok(Some(h))
}

/// Candidate: one helix moved from the outer shell to shell `to`.
fn moved(spec: &TorusSpec, to: usize) -> Result<TorusSpec, ConstructError> {
    let mut s = spec.clone();
    let last = s.shells.len() - 1;
    s.shells[last].count -= 1;
    s.shells[to].count += 1;
    if s.shells[last].count == 0 {
        s.shells.pop();
    }
    if let Some(h) = needed_hole(&s)? {
        s.major_radius = s.major_radius.min(s.outer_radius() + h);
    }
    Ok(s)
}

/// Greedily moves outer helices into inner shells that still have exact
/// capacity at the current hole, keeping the move that shortens the predicted
/// length most, until no move helps. `Q` is preserved and the length never
/// increases.
pub fn reverse_jenga(spec: &TorusSpec) -> Result<TorusSpec, ConstructError> {
    spec.validate()?;
    let mut current = spec.clone();
    let mut length = current.predicted_length()?;
    loop {
        let n = current.shells.len();
        if n < 2 {
            break;
        }
        let hole = current.hole_radius();
        let mut best: Option<(TorusSpec, f64)> = None;
        for i in 0..n - 1 {
            let s = current.shells[i];
            if max_helices(s.radius, hole, CountMode::Exact)? <= s.count {
                continue;
            }
            let cand = moved(&current, i)?;
            let l = cand.predicted_length()?;
            if l < length - 1e-12 && best.as_ref().is_none_or(|b| l < b.1) {
                best = Some((cand, l));
            }
        }
        match best {
            Some((s, l)) => {
                current = s;
                length = l;
            }
            None => break,
        }
    }
    Ok(current)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SublinkOutcome {
    pub baseline: f64,
    pub candidate: f64,
    pub improved: bool,
}

/// Replaces one outer helix by a meridian circle around the whole torus, which
/// links every other component once, and compares normalized ropelengths of
/// the two realizations.
pub fn perpendicular_move(
    spec: &TorusSpec,
    n_points: usize,
) -> Result<(SublinkOutcome, LinkConfiguration), OptimizeError> {
    let opts = RealizeOptions {
        n_points,
        check: false,
        ..Default::default()
    };
    let base = realize_torus_with(spec, opts)?;
    let baseline = normalized_ropelength(&base);
    let mut reduced = spec.clone();
    let Some(outer) = reduced.shells.last_mut() else {
        return Err(ConstructError::InvalidSpec("no shell to take a helix from".into()).into());
    };
    outer.count -= 1;
    if outer.count == 0 {
        reduced.shells.pop();
    }
    if reduced.q() == 0 {
        return Err(ConstructError::InvalidSpec("nothing left to link with".into()).into());
    }
    let circle = perpendicular_circle(spec, gap_azimuth(&reduced), n_points)?;
    let mut link = realize_torus_with(&reduced, opts)?;
    link.components.push(circle);
    link.q = spec.q();
    link.provenance = Provenance::new("perpendicular_move")
        .with("major_radius", spec.major_radius)
        .with("circle_radius", spec.outer_radius() + 2.0);
    link.validate().map_err(ConstructError::from)?;
    let candidate = normalized_ropelength(&link);
    let improved = candidate < baseline;
    Ok((
        SublinkOutcome {
            baseline,
            candidate,
            improved,
        },
        if improved { link } else { base },
    ))
}
