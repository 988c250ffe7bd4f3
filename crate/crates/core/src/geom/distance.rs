//! Exact minimum segment–segment distances with a uniform-grid broad phase.
//!
//! Segments are binned by midpoint into cubic cells of edge
//! `max segment length + query radius`. Any pair of segments closer than the
//! query radius then has midpoints in the same or adjacent cells, so scanning the
//! 27-cell neighbourhood is exact for all pairs within the radius. The radius is
//! an upper bound on the answer (a strided vertex–vertex scan), so the grid result
//! is the brute-force minimum itself, not an approximation of it.

use std::collections::HashMap;

use rayon::prelude::*;

use super::curve::PolyCurve;
use super::vec3::Vec3;

/// Segment pairs this close along a curve are left to the curvature check.
pub const DEFAULT_SKIP_WINDOW: usize = 5;

const STRIDE_SAMPLES: usize = 48;

/// Closest points on segments `p1 q1` and `p2 q2` (closest-point clamping).
pub fn segment_closest_points(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> (Vec3, Vec3) {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_sq();
    let e = d2.norm_sq();
    let f = d2.dot(r);
    let (s, t);
    if a == 0.0 && e == 0.0 {
        return (p1, p2);
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            } else {
                t = t0;
                s = s0;
            }
        }
    }
    (p1 + d1 * s, p2 + d2 * t)
}

/// Squared distance between segments `p1 q1` and `p2 q2`.
pub fn segment_distance_sq(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> f64 {
    let (a, b) = segment_closest_points(p1, q1, p2, q2);
    (a - b).norm_sq()
}

#[inline]
pub fn segment_distance(p1: Vec3, q1: Vec3, p2: Vec3, q2: Vec3) -> f64 {
    segment_distance_sq(p1, q1, p2, q2).sqrt()
}

/// Cyclic (or linear, for open curves) index gap between two segments.
#[inline]
pub fn segment_gap(i: usize, j: usize, n_segments: usize, closed: bool) -> usize {
    let d = i.abs_diff(j);
    if closed {
        d.min(n_segments - d)
    } else {
        d
    }
}

type CellKey = (i64, i64, i64);

#[derive(Clone, Copy)]
struct Entry {
    curve: u32,
    segment: u32,
}

/// Midpoint-binned segments of one or more curves.
pub struct SegmentGrid<'a> {
    curves: Vec<&'a PolyCurve>,
    cell: f64,
    cells: HashMap<CellKey, Vec<Entry>>,
}

impl<'a> SegmentGrid<'a> {
    /// Bins every segment of `curves`; exact for pairs closer than `radius` given
    /// that no queried segment is longer than `max_query_segment`.
    pub fn new(curves: &[&'a PolyCurve], radius: f64, max_query_segment: f64) -> Self {
        let max_len = curves
            .iter()
            .map(|c| c.max_segment_length())
            .fold(max_query_segment, f64::max);
        // Slack keeps floating-point cell boundaries from splitting a qualifying pair.
        let cell = ((max_len + radius.max(0.0)) * (1.0 + 1e-9) + 1e-12).max(1e-9);
        let mut cells: HashMap<CellKey, Vec<Entry>> = HashMap::new();
        for (ci, c) in curves.iter().enumerate() {
            for (si, (a, b)) in c.segments().enumerate() {
                cells
                    .entry(key((a + b) * 0.5, cell))
                    .or_default()
                    .push(Entry {
                        curve: ci as u32,
                        segment: si as u32,
                    });
            }
        }
        Self {
            curves: curves.to_vec(),
            cell,
            cells,
        }
    }

    /// Calls `visit(curve, segment, a, b)` for every binned segment near `p q`.
    fn for_each_near(&self, p: Vec3, q: Vec3, mut visit: impl FnMut(usize, usize, Vec3, Vec3)) {
        let (kx, ky, kz) = key((p + q) * 0.5, self.cell);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = self.cells.get(&(kx + dx, ky + dy, kz + dz)) {
                        for e in list {
                            let c = self.curves[e.curve as usize];
                            let (a, b) = c.segment(e.segment as usize);
                            visit(e.curve as usize, e.segment as usize, a, b);
                        }
                    }
                }
            }
        }
    }
}

#[inline]
fn key(p: Vec3, cell: f64) -> CellKey {
    (
        (p.x / cell).floor() as i64,
        (p.y / cell).floor() as i64,
        (p.z / cell).floor() as i64,
    )
}

fn stride(n: usize) -> usize {
    (n / STRIDE_SAMPLES).max(1)
}

/// Upper bound on the curve–curve distance from a strided vertex scan.
fn vertex_upper_bound(a: &PolyCurve, b: &PolyCurve) -> f64 {
    let (sa, sb) = (stride(a.len()), stride(b.len()));
    let mut best = f64::INFINITY;
    for &p in a.vertices().iter().step_by(sa) {
        for &q in b.vertices().iter().step_by(sb) {
            best = best.min((p - q).norm_sq());
        }
    }
    best.sqrt()
}

/// Exact minimum distance between two polylines.
pub fn min_distance(a: &PolyCurve, b: &PolyCurve) -> f64 {
    min_distance_with_radius(a, b, vertex_upper_bound(a, b))
}

/// Grid query with a caller-chosen radius. Pairs farther apart than `radius` are
/// not seen by the grid; if none is within it, falls back to a full scan.
pub fn min_distance_with_radius(a: &PolyCurve, b: &PolyCurve, radius: f64) -> f64 {
    let grid = SegmentGrid::new(&[b], radius, a.max_segment_length());
    let best = (0..a.segment_count())
        .into_par_iter()
        .map(|i| {
            let (p, q) = a.segment(i);
            let mut m = f64::INFINITY;
            grid.for_each_near(p, q, |_, _, s, t| {
                m = m.min(segment_distance_sq(p, q, s, t));
            });
            m
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt();
    if best <= radius {
        best
    } else {
        full_scan(a, b)
    }
}

fn full_scan(a: &PolyCurve, b: &PolyCurve) -> f64 {
    (0..a.segment_count())
        .into_par_iter()
        .map(|i| {
            let (p, q) = a.segment(i);
            b.segments()
                .map(|(s, t)| segment_distance_sq(p, q, s, t))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
}

/// Floor on the `|cos|` allowed between a self-distance chord and either segment
/// for the pair to count as a doubly-critical approach. Coarse curves get a
/// looser bound equal to their largest turning sine.
pub const DOUBLY_CRITICAL_COS: f64 = 0.01;

fn critical_cos(a: &PolyCurve) -> f64 {
    let n = a.segment_count();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let j = i + 1;
        if j == n && !a.is_closed() {
            break;
        }
        let (p, q) = a.segment(i);
        let (s, t) = a.segment(j % n);
        let (u, v) = (q - p, t - s);
        let denom = u.norm() * v.norm();
        if denom > 0.0 {
            worst = worst.max(u.cross(v).norm() / denom);
        }
    }
    worst.max(DOUBLY_CRITICAL_COS)
}

#[inline]
fn nearly_perpendicular(chord: Vec3, dir: Vec3, tol: f64) -> bool {
    chord.dot(dir).abs() <= tol * (chord.norm_sq() * dir.norm_sq()).sqrt()
}

/// Squared distance of a self pair, or `None` when the chord between the closest
/// points is not close to perpendicular to both segments.
#[inline]
fn critical_distance_sq(p: Vec3, q: Vec3, s: Vec3, t: Vec3, tol: f64) -> Option<f64> {
    // The closest-point chord differs from the midpoint chord by at most half of
    // each segment, which bounds how perpendicular the midpoint chord must be.
    let (u, v) = (q - p, t - s);
    let (lu, lv) = (u.norm(), v.norm());
    let mid = (p + q - s - t) * 0.5;
    let slack = 0.5 * (lu + lv);
    let bound = tol * (mid.norm() + slack) + slack;
    if mid.dot(u).abs() > bound * lu || mid.dot(v).abs() > bound * lv {
        return None;
    }
    let (a, b) = segment_closest_points(p, q, s, t);
    let chord = a - b;
    let d2 = chord.norm_sq();
    if d2 < 1e-24
        || (nearly_perpendicular(chord, q - p, tol) && nearly_perpendicular(chord, t - s, tol))
    {
        Some(d2)
    } else {
        None
    }
}

fn self_upper_bound(a: &PolyCurve, skip_window: usize, tol: f64) -> f64 {
    let n = a.segment_count();
    let s = stride(a.len());
    let mut best = f64::INFINITY;
    for i in (0..n).step_by(s) {
        let (p, q) = a.segment(i);
        for j in (i + 1..n).step_by(s) {
            if segment_gap(i, j, n, a.is_closed()) > skip_window {
                let (u, v) = a.segment(j);
                if let Some(d2) = critical_distance_sq(p, q, u, v, tol) {
                    best = best.min(d2);
                }
            }
        }
    }
    best.sqrt()
}

/// Minimum self-approach distance of one curve: the closest pair of segments more
/// than `skip_window` apart along the curve whose connecting chord is within
/// perpendicular to both (see `DOUBLY_CRITICAL_COS`). Nearby arcs of a bent curve
/// are left to the curvature check.
pub fn min_self_distance(a: &PolyCurve, skip_window: usize) -> f64 {
    let n = a.segment_count();
    let closed = a.is_closed();
    let tol = critical_cos(a);
    let scan = |lo: usize,
                hi: usize,
                visit: &(dyn Fn(usize, &mut dyn FnMut(usize, Vec3, Vec3)) + Sync)| {
        (lo..hi)
            .into_par_iter()
            .map(|i| {
                let (p, q) = a.segment(i);
                let mut m = f64::INFINITY;
                visit(i, &mut |j, s, t| {
                    if j > i && segment_gap(i, j, n, closed) > skip_window {
                        if let Some(d2) = critical_distance_sq(p, q, s, t, tol) {
                            m = m.min(d2);
                        }
                    }
                });
                m
            })
            .reduce(|| f64::INFINITY, f64::min)
            .sqrt()
    };
    let radius = self_upper_bound(a, skip_window, tol);
    if radius.is_finite() {
        let grid = SegmentGrid::new(&[a], radius, 0.0);
        let best = scan(0, n, &|i, f| {
            let (p, q) = a.segment(i);
            grid.for_each_near(p, q, |_, j, s, t| f(j, s, t));
        });
        if best <= radius {
            return best;
        }
    }
    scan(0, n, &|_, f| {
        for (j, (s, t)) in a.segments().enumerate() {
            f(j, s, t);
        }
    })
}

const BLOCK_SEGMENTS: usize = 16;

/// A run of consecutive segments and a sphere containing them.
struct Block<'a> {
    curve: &'a PolyCurve,
    start: usize,
    end: usize,
    center: Vec3,
    radius: f64,
}

fn blocks(curve: &PolyCurve) -> Vec<Block<'_>> {
    let n = curve.segment_count();
    (0..n)
        .step_by(BLOCK_SEGMENTS)
        .map(|start| {
            let end = (start + BLOCK_SEGMENTS).min(n);
            let pts: Vec<Vec3> = (start..end)
                .flat_map(|i| {
                    let (a, b) = curve.segment(i);
                    [a, b]
                })
                .collect();
            let center = pts.iter().fold(Vec3::ZERO, |s, &p| s + p) * (1.0 / pts.len() as f64);
            let radius = pts.iter().map(|&p| (p - center).norm()).fold(0.0, f64::max);
            Block {
                curve,
                start,
                end,
                center,
                radius,
            }
        })
        .collect()
}

fn block_pair_min_sq(a: &Block, b: &Block) -> f64 {
    let mut m = f64::INFINITY;
    for i in a.start..a.end {
        let (p, q) = a.curve.segment(i);
        for j in b.start..b.end {
            let (s, t) = b.curve.segment(j);
            m = m.min(segment_distance_sq(p, q, s, t));
        }
    }
    m
}

/// Minimum distance from `probe` to any of `others`. Segments are grouped in
/// blocks with bounding spheres; block pairs are visited in order of their
/// sphere lower bound and the scan stops once that bound exceeds the best
/// distance found, so the result is exact.
pub fn min_distance_to_set(probe: &PolyCurve, others: &[&PolyCurve]) -> f64 {
    if others.is_empty() {
        return f64::INFINITY;
    }
    let pb = blocks(probe);
    let ob: Vec<Block> = others.iter().flat_map(|c| blocks(c)).collect();
    let mut pairs: Vec<(f64, usize, usize)> = pb
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            ob.iter().enumerate().map(move |(j, b)| {
                let lower = ((a.center - b.center).norm() - a.radius - b.radius).max(0.0);
                (lower, i, j)
            })
        })
        .collect();
    pairs.sort_unstable_by(|x, y| x.0.total_cmp(&y.0));
    let mut best = f64::INFINITY;
    for (lower, i, j) in pairs {
        if lower * lower > best {
            break;
        }
        best = best.min(block_pair_min_sq(&pb[i], &ob[j]));
    }
    best.sqrt()
}

/// Minimum distance over all pairs of distinct curves, with one grid for the set.
pub fn min_pairwise_distance(curves: &[PolyCurve]) -> f64 {
    if curves.len() < 2 {
        return f64::INFINITY;
    }
    // Any pair gives an upper bound on the global minimum; neighbours in the list
    // are usually adjacent in space.
    let radius = curves
        .windows(2)
        .map(|w| vertex_upper_bound(&w[0], &w[1]))
        .fold(f64::INFINITY, f64::min);
    let refs: Vec<&PolyCurve> = curves.iter().collect();
    let grid = SegmentGrid::new(&refs, radius, 0.0);
    curves
        .par_iter()
        .enumerate()
        .map(|(ci, c)| {
            let mut m = f64::INFINITY;
            for (p, q) in c.segments() {
                grid.for_each_near(p, q, |cj, _, s, t| {
                    if cj > ci {
                        m = m.min(segment_distance_sq(p, q, s, t));
                    }
                });
            }
            m
        })
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt()
}
