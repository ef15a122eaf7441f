//! Parametrization-free distances between curves, loops and loop collections.
//!
//! Curves are compared with the discrete Fréchet distance after dropping
//! repeated points and interior vertices that sit on the segment joining
//! their neighbours, so refining a polyline without moving it leaves every
//! distance unchanged.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("a curve needs at least one point")]
    Empty,
    #[error("non-finite coordinate at point {0}")]
    NonFinite(usize),
}

pub type Point = [f64; 2];

/// A polyline in the plane. A closed curve joins its last point back to its
/// first; the first point is not repeated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCurve {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl PolyCurve {
    pub fn new(points: Vec<Point>, closed: bool) -> Result<Self, MetricError> {
        if points.is_empty() {
            return Err(MetricError::Empty);
        }
        if let Some(i) = points.iter().position(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(MetricError::NonFinite(i));
        }
        Ok(Self { points, closed })
    }

    pub fn open(points: Vec<Point>) -> Result<Self, MetricError> {
        Self::new(points, false)
    }

    pub fn closed(points: Vec<Point>) -> Result<Self, MetricError> {
        Self::new(points, true)
    }

    /// Bounding box `[xmin, ymin, xmax, ymax]`.
    pub fn bounds(&self) -> [f64; 4] {
        self.points.iter().fold([f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY], |b, p| {
            [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])]
        })
    }
}

#[inline]
fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// `b` lies on the segment from `a` to `c`, strictly between or at an end.
fn passes_through(a: Point, b: Point, c: Point) -> bool {
    let (u, v) = ([b[0] - a[0], b[1] - a[1]], [c[0] - b[0], c[1] - b[1]]);
    let cross = u[0] * v[1] - u[1] * v[0];
    let dot = u[0] * v[0] + u[1] * v[1];
    let scale = (u[0] * u[0] + u[1] * u[1]).sqrt() * (v[0] * v[0] + v[1] * v[1]).sqrt();
    dot >= 0.0 && cross.abs() <= 1e-9 * scale
}

/// Points of `c` with repeats and straight-through vertices removed.
pub fn canonical(c: &PolyCurve) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(c.points.len());
    for &p in &c.points {
        if out.last() == Some(&p) {
            continue;
        }
        while out.len() >= 2 && passes_through(out[out.len() - 2], out[out.len() - 1], p) {
            out.pop();
        }
        out.push(p);
    }
    if c.closed {
        while out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        // the seam: vertices on either side of the first point
        loop {
            let n = out.len();
            if n < 3 {
                break;
            }
            if passes_through(out[n - 2], out[n - 1], out[0]) {
                out.pop();
            } else if passes_through(out[n - 1], out[0], out[1]) {
                out.remove(0);
            } else {
                break;
            }
        }
    }
    out
}

/// Discrete Fréchet distance by the Eiter–Mannila recurrence over two rows.
/// Returns early with `f64::INFINITY` once every coupling is known to
/// exceed `cap`.
fn frechet(a: &[Point], b: &[Point], cap: f64) -> f64 {
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m];
    let mut cur = vec![f64::INFINITY; m];
    for (i, &p) in a.iter().enumerate() {
        let mut row_min = f64::INFINITY;
        for j in 0..m {
            let d = dist(p, b[j]);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = d.max(best);
            row_min = row_min.min(cur[j]);
        }
        if row_min > cap {
            return f64::INFINITY;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[m - 1]
}

/// Discrete Fréchet distance between two open polylines.
pub fn curve_distance(c1: &PolyCurve, c2: &PolyCurve) -> f64 {
    frechet(&canonical(c1), &canonical(c2), f64::INFINITY)
}

/// Fréchet distance between closed loops, minimized over the starting
/// vertex and orientation of the second loop.
pub fn loop_distance(l1: &PolyCurve, l2: &PolyCurve) -> f64 {
    loop_distance_capped(l1, l2, f64::INFINITY)
}

fn loop_distance_capped(l1: &PolyCurve, l2: &PolyCurve, cap: f64) -> f64 {
    let mut a = canonical(l1);
    a.push(a[0]);
    let b = canonical(l2);
    let m = b.len();
    let mut best = cap;
    let mut opened = Vec::with_capacity(m + 1);
    for reverse in [false, true] {
        for r in 0..m {
            // every coupling pairs the two starting points
            if dist(a[0], b[r]) >= best {
                continue;
            }
            opened.clear();
            if reverse {
                opened.extend((0..=m).map(|k| b[(r + m * 2 - k) % m]));
            } else {
                opened.extend((0..=m).map(|k| b[(r + k) % m]));
            }
            best = best.min(frechet(&a, &opened, best));
        }
    }
    best
}

/// Directed part `sup_{l ∈ from} inf_{k ∈ to} loop_distance(l, k)`.
fn directed(from: &[PolyCurve], to: &[PolyCurve]) -> f64 {
    from.iter()
        .map(|l| to.iter().fold(f64::INFINITY, |best, k| best.min(loop_distance_capped(l, k, best))))
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two loop collections under `loop_distance`.
/// Against an empty collection the distance is the diagonal of the bounding
/// box of all loops involved; two empty collections are at distance zero.
pub fn ensemble_distance(e1: &[PolyCurve], e2: &[PolyCurve]) -> f64 {
    match (e1.is_empty(), e2.is_empty()) {
        (true, true) => 0.0,
        (false, false) => directed(e1, e2).max(directed(e2, e1)),
        _ => {
            let b = e1.iter().chain(e2).map(PolyCurve::bounds).fold(
                [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY],
                |b, c| [b[0].min(c[0]), b[1].min(c[1]), b[2].max(c[2]), b[3].max(c[3])],
            );
            (b[2] - b[0]).hypot(b[3] - b[1])
        }
    }
}

/// Distance between two domain boundaries given as closed polylines.
pub fn domain_distance(b1: &PolyCurve, b2: &PolyCurve) -> f64 {
    loop_distance(b1, b2)
}

/// The boundary polyline of a lattice domain, counterclockwise.
pub fn lattice_boundary(d: &crate::hexlattice::LatticeDomain) -> PolyCurve {
    let mesh = d.mesh();
    let points = d.boundary_walk().edges.iter().map(|e| e.tail().position(mesh)).collect();
    PolyCurve { points, closed: true }
}
