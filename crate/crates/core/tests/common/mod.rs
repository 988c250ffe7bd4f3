//! Independent oracles: exhaustive segment distances and linking numbers from
//! signed projected crossings.

#![allow(dead_code)]

use ropebound::geom::{PolyCurve, Vec3};

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn arr(v: Vec3) -> [f64; 3] {
    v.to_array()
}

/// Distance between two segments: minimise over the edges of the parameter
/// square and at the interior stationary point, if any.
pub fn seg_dist(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> f64 {
    let (p1, q1, p2, q2) = (arr(p1), arr(q1), arr(p2), arr(q2));
    let d1 = sub(q1, p1);
    let d2 = sub(q2, p2);
    let at = |s: f64, t: f64| {
        let a = [p1[0] + s * d1[0], p1[1] + s * d1[1], p1[2] + s * d1[2]];
        let b = [p2[0] + t * d2[0], p2[1] + t * d2[1], p2[2] + t * d2[2]];
        let d = sub(a, b);
        dot(d, d)
    };
    // point-to-segment parameter
    let proj = |x: [f64; 3], o: [f64; 3], d: [f64; 3]| {
        let dd = dot(d, d);
        if dd == 0.0 {
            0.0
        } else {
            (dot(sub(x, o), d) / dd).clamp(0.0, 1.0)
        }
    };
    let mut best = f64::INFINITY;
    for s in [0.0, 1.0] {
        let x = [p1[0] + s * d1[0], p1[1] + s * d1[1], p1[2] + s * d1[2]];
        best = best.min(at(s, proj(x, p2, d2)));
    }
    for t in [0.0, 1.0] {
        let x = [p2[0] + t * d2[0], p2[1] + t * d2[1], p2[2] + t * d2[2]];
        best = best.min(at(proj(x, p1, d1), t));
    }
    let (a, b, c) = (dot(d1, d1), dot(d1, d2), dot(d2, d2));
    let r = sub(p1, p2);
    let (d, e) = (dot(d1, r), dot(d2, r));
    let den = a * c - b * b;
    if den > 1e-14 * a * c {
        let s = (b * e - c * d) / den;
        let t = (a * e - b * d) / den;
        if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
            best = best.min(at(s, t));
        }
    }
    best.sqrt()
}

pub fn segments(c: &PolyCurve) -> Vec<(Vec3, Vec3)> {
    let v = c.vertices();
    let n = if c.is_closed() { v.len() } else { v.len() - 1 };
    (0..n).map(|i| (v[i], v[(i + 1) % v.len()])).collect()
}

pub fn brute_distance(a: &PolyCurve, b: &PolyCurve) -> f64 {
    let sb = segments(b);
    segments(a)
        .iter()
        .flat_map(|&(p, q)| sb.iter().map(move |&(r, s)| seg_dist(p, q, r, s)))
        .fold(f64::INFINITY, f64::min)
}

pub fn brute_pairwise(curves: &[PolyCurve]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            best = best.min(brute_distance(&curves[i], &curves[j]));
        }
    }
    best
}

/// Linking number as half the signed crossing count of the XY projection.
/// Assumes a generic projection.
pub fn crossing_linking(a: &PolyCurve, b: &PolyCurve) -> i64 {
    let mut twice = 0i64;
    for (p, q) in segments(a) {
        for (r, s) in segments(b) {
            let d1 = (q.x - p.x, q.y - p.y);
            let d2 = (s.x - r.x, s.y - r.y);
            let den = d1.0 * d2.1 - d1.1 * d2.0;
            if den == 0.0 {
                continue;
            }
            let w = (r.x - p.x, r.y - p.y);
            let t = (w.0 * d2.1 - w.1 * d2.0) / den;
            let u = (w.0 * d1.1 - w.1 * d1.0) / den;
            if !(0.0..1.0).contains(&t) || !(0.0..1.0).contains(&u) {
                continue;
            }
            let za = p.z + t * (q.z - p.z);
            let zb = r.z + u * (s.z - r.z);
            // a over b with b crossing from right to left counts +1
            let sign = if den > 0.0 { 1 } else { -1 };
            twice += if za > zb { sign } else { -sign };
        }
    }
    assert!(twice % 2 == 0, "odd crossing count {twice}");
    twice / 2
}

pub fn max_abs_diff(a: &PolyCurve, b: &PolyCurve) -> f64 {
    a.vertices()
        .iter()
        .zip(b.vertices())
        .map(|(u, v)| (*u - *v).norm())
        .fold(0.0, f64::max)
}
