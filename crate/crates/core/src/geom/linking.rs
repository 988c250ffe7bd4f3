//! Gauss linking number of two closed polygons.
//!
//! Each pair of segments contributes the signed solid angle of the quadrilateral
//! they span, divided by 4π. For closed polygons the sum is an integer up to
//! rounding, so no quadrature error is involved.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::curve::PolyCurve;
use super::vec3::Vec3;
use super::GeomError;

/// Accumulated sums farther than this from an integer are rejected.
pub const INTEGER_TOLERANCE: f64 = 0.1;

#[inline]
fn unit(v: Vec3) -> Option<Vec3> {
    let n = v.norm();
    (n > 0.0 && n.is_finite()).then(|| v * (1.0 / n))
}

#[inline]
fn asin_clamped(x: f64) -> f64 {
    x.clamp(-1.0, 1.0).asin()
}

/// Signed solid angle subtended by segment `a0 a1` as seen sweeping segment `b0 b1`.
fn pair_solid_angle(a0: Vec3, a1: Vec3, b0: Vec3, b1: Vec3) -> f64 {
    let r13 = b0 - a0;
    let r14 = b1 - a0;
    let r23 = b0 - a1;
    let r24 = b1 - a1;
    let faces = [
        unit(r13.cross(r14)),
        unit(r14.cross(r24)),
        unit(r24.cross(r23)),
        unit(r23.cross(r13)),
    ];
    let [Some(n1), Some(n2), Some(n3), Some(n4)] = faces else {
        return 0.0;
    };
    let omega = asin_clamped(n1.dot(n2))
        + asin_clamped(n2.dot(n3))
        + asin_clamped(n3.dot(n4))
        + asin_clamped(n4.dot(n1));
    let orientation = (b1 - b0).cross(a1 - a0).dot(r13);
    if orientation > 0.0 {
        omega
    } else if orientation < 0.0 {
        -omega
    } else {
        0.0
    }
}

/// The real-valued double sum, before rounding.
pub fn linking_sum(a: &PolyCurve, b: &PolyCurve) -> f64 {
    let total: f64 = (0..a.segment_count())
        .into_par_iter()
        .map(|i| {
            let (a0, a1) = a.segment(i);
            b.segments()
                .map(|(b0, b1)| pair_solid_angle(a0, a1, b0, b1))
                .sum::<f64>()
        })
        .sum();
    total / (4.0 * PI)
}

/// Integer Gauss linking number of two disjoint closed curves.
pub fn linking_number(a: &PolyCurve, b: &PolyCurve) -> Result<i64, GeomError> {
    if !a.is_closed() || !b.is_closed() {
        return Err(GeomError::InvalidParameter(
            "linking number needs closed curves",
        ));
    }
    let s = linking_sum(a, b);
    let rounded = s.round();
    if (s - rounded).abs() > INTEGER_TOLERANCE || !s.is_finite() {
        return Err(GeomError::NonIntegerLinking { value: s });
    }
    Ok(rounded as i64)
}

/// Unit normal (right-handed with the curve's direction) and centroid of `a`
/// when all its vertices lie in one plane.
fn plane_of(a: &PolyCurve) -> Option<(Vec3, Vec3)> {
    let v = a.vertices();
    let centroid = v.iter().fold(Vec3::ZERO, |s, &p| s + p) * (1.0 / v.len() as f64);
    let area = (0..v.len()).fold(Vec3::ZERO, |s, i| {
        s + (v[i] - centroid).cross(v[(i + 1) % v.len()] - centroid)
    });
    let normal = unit(area)?;
    let extent = v.iter().map(|&p| (p - centroid).norm()).fold(0.0, f64::max);
    let flat = v
        .iter()
        .all(|&p| (p - centroid).dot(normal).abs() <= 1e-9 * (1.0 + extent));
    flat.then_some((normal, centroid))
}

/// Linking number through the flat region bounded by a planar curve `a`: signed
/// crossings of `b` through the plane, each weighted by the winding number of `a`
/// around the crossing point. Exact and linear in the curve sizes; `None` when `a`
/// is not planar. Touching curves are not detected.
pub fn planar_linking_number(a: &PolyCurve, b: &PolyCurve) -> Result<Option<i64>, GeomError> {
    if !a.is_closed() || !b.is_closed() {
        return Err(GeomError::InvalidParameter(
            "linking number needs closed curves",
        ));
    }
    let Some((n, c)) = plane_of(a) else {
        return Ok(None);
    };
    let e1 = unit(if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Y }.cross(n))
        .expect("helper axis is not parallel to the normal");
    let e2 = n.cross(e1);
    let poly: Vec<(f64, f64)> = a
        .vertices()
        .iter()
        .map(|&p| ((p - c).dot(e1), (p - c).dot(e2)))
        .collect();
    let winding = |x: f64, y: f64| -> i64 {
        let mut w = 0;
        for i in 0..poly.len() {
            let (x0, y0) = poly[i];
            let (x1, y1) = poly[(i + 1) % poly.len()];
            let side = (x1 - x0) * (y - y0) - (x - x0) * (y1 - y0);
            if y0 <= y && y1 > y && side > 0.0 {
                w += 1;
            } else if y1 <= y && y0 > y && side < 0.0 {
                w -= 1;
            }
        }
        w
    };
    let mut total = 0;
    for (p, q) in b.segments() {
        let (sp, sq) = ((p - c).dot(n), (q - c).dot(n));
        if (sp > 0.0) == (sq > 0.0) {
            continue;
        }
        let x = p + (q - p) * (sp / (sp - sq));
        let w = winding((x - c).dot(e1), (x - c).dot(e2));
        total += if sq > sp { w } else { -w };
    }
    Ok(Some(total))
}

/// Linking numbers of every unordered pair `(i, j)`, `i < j`, row-major.
pub fn linking_matrix(curves: &[PolyCurve]) -> Result<Vec<Vec<i64>>, GeomError> {
    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .iter()
        .map(|&(i, j)| linking_number(&curves[i], &curves[j]))
        .collect::<Result<Vec<_>, _>>()?;
    let mut m = vec![vec![0i64; n]; n];
    for (&(i, j), v) in pairs.iter().zip(values) {
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{sample_planar_curve, Placement, PlanarShape, RigidMotion};
    use std::f64::consts::FRAC_PI_2;

    fn unit_circle(n: usize) -> PolyCurve {
        sample_planar_curve(&PlanarShape::Circle, &Placement::horizontal(), n).unwrap()
    }

    fn hopf_pair() -> (PolyCurve, PolyCurve) {
        let a = unit_circle(200);
        let b = a
            .transformed(&RigidMotion::rotation(Vec3::X, FRAC_PI_2))
            .map(|p| p + Vec3::X);
        (a, b)
    }

    #[test]
    fn hopf_circles_link_once() {
        let (a, b) = hopf_pair();
        assert_eq!(linking_number(&a, &b).unwrap().abs(), 1);
        assert!((linking_sum(&a, &b).abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn planar_count_matches_gauss_sum() {
        let (a, b) = hopf_pair();
        let lk = linking_number(&a, &b).unwrap();
        assert_eq!(planar_linking_number(&a, &b).unwrap(), Some(lk));
        assert_eq!(planar_linking_number(&b, &a).unwrap(), Some(lk));
        assert_eq!(planar_linking_number(&a.reversed(), &b).unwrap(), Some(-lk));
        let far = b.map(|p| p + Vec3::new(4.0, 0.0, 0.0));
        assert_eq!(planar_linking_number(&a, &far).unwrap(), Some(0));
        let bent = a.map(|p| p + Vec3::Z * (p.x * p.x));
        assert_eq!(planar_linking_number(&bent, &b).unwrap(), None);
    }

    #[test]
    fn distant_circles_do_not_link() {
        let a = unit_circle(100);
        let b = a.map(|p| p + Vec3::new(5.0, 0.0, 0.0));
        assert_eq!(linking_number(&a, &b).unwrap(), 0);
    }

    #[test]
    fn reversing_either_curve_flips_sign() {
        let (a, b) = hopf_pair();
        let lk = linking_number(&a, &b).unwrap();
        assert_eq!(linking_number(&a.reversed(), &b).unwrap(), -lk);
        assert_eq!(linking_number(&a, &b.reversed()).unwrap(), -lk);
        assert_eq!(linking_number(&b, &a).unwrap(), lk);
    }
}
