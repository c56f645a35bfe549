use std::cmp::Ordering;

use crate::error::{Error, Result};

const ROUNDOFF: f64 = 1e-12;

/// What produced a rate point.
#[derive(Clone, Debug, PartialEq)]
pub enum PointParams {
    None,
    Beta(f64),
    Lambda(f64),
    Label(String),
}

/// A guaranteed rate `r` and an excess rate `r_prime`, in bits (or qubits)
/// per channel use.
#[derive(Clone, Debug, PartialEq)]
pub struct RatePoint {
    pub r: f64,
    pub r_prime: f64,
    pub params: PointParams,
}

impl RatePoint {
    /// Coordinates within round-off of zero, or below it, become zero.
    pub fn new(r: f64, r_prime: f64, params: PointParams) -> Self {
        debug_assert!(r >= -1e-6 && r_prime >= -1e-6, "negative rate ({r}, {r_prime})");
        Self { r: snap(r), r_prime: snap(r_prime), params }
    }

    pub fn coords(&self) -> (f64, f64) {
        (self.r, self.r_prime)
    }
}

/// A set of rate points with its upper-right Pareto frontier.
#[derive(Clone, Debug, PartialEq)]
pub struct RateRegion {
    pub points: Vec<RatePoint>,
    pub frontier: Vec<RatePoint>,
}

impl RateRegion {
    pub fn from_points(points: Vec<RatePoint>) -> Result<Self> {
        pareto_frontier(&points)
    }
}

fn snap(x: f64) -> f64 {
    if x < ROUNDOFF {
        0.0
    } else {
        x
    }
}

fn lex(a: &RatePoint, b: &RatePoint) -> Ordering {
    a.r.total_cmp(&b.r).then(a.r_prime.total_cmp(&b.r_prime))
}

/// Upper-right boundary of the time-sharing hull of `points` (together with
/// their projections onto the axes).
///
/// Points on the boundary between the highest-`r'` point and the highest-`r`
/// point are kept, collinear ones included, ordered by `(r, r')`.
pub fn pareto_frontier(points: &[RatePoint]) -> Result<RateRegion> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("pareto frontier of an empty point set".into()));
    }
    if points.iter().any(|p| !(p.r.is_finite() && p.r_prime.is_finite())) {
        return Err(Error::Domain("non-finite rate point".into()));
    }
    let mut sorted: Vec<&RatePoint> = points.iter().collect();
    sorted.sort_by(|a, b| lex(a, b));
    sorted.dedup_by(|a, b| a.r == b.r && a.r_prime == b.r_prime);

    let scale = sorted.iter().map(|p| p.r.abs().max(p.r_prime.abs())).fold(1.0, f64::max);
    let tol = 1e-12 * scale * scale;
    // cross > 0: the turn o→a→b is counter-clockwise, so `a` lies below o→b
    let cross = |o: &RatePoint, a: &RatePoint, b: &RatePoint| (a.r - o.r) * (b.r_prime - o.r_prime) - (a.r_prime - o.r_prime) * (b.r - o.r);
    let mut hull: Vec<&RatePoint> = Vec::with_capacity(sorted.len());
    for p in sorted {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) > tol {
            hull.pop();
        }
        hull.push(p);
    }

    let top = hull.iter().map(|p| p.r_prime).fold(f64::NEG_INFINITY, f64::max);
    let start = hull.iter().rposition(|p| p.r_prime == top).expect("nonempty hull");
    let frontier = hull[start..].iter().map(|&p| p.clone()).collect();
    Ok(RateRegion { points: points.to_vec(), frontier })
}

/// `count` evenly spaced values covering `[0, 1]`.
pub fn uniform_grid(count: usize) -> Result<Vec<f64>> {
    match count {
        0 => Err(Error::InvalidArgument("grid needs at least one point".into())),
        1 => Ok(vec![0.0]),
        _ => Ok((0..count).map(|i| i as f64 / (count - 1) as f64).collect()),
    }
}

/// Time sharing between an unassisted code at rate `c` and a fully assisted
/// code at rate `c_ea`: the points `((1−λ)c, λ c_ea)`.
pub fn time_division_region(c: f64, c_ea: f64, lambdas: &[f64]) -> Result<RateRegion> {
    if !(c.is_finite() && c >= 0.0 && c_ea.is_finite() && c_ea >= 0.0) {
        return Err(Error::InvalidArgument(format!("time-division rates ({c}, {c_ea}) must be nonnegative")));
    }
    if let Some(l) = lambdas.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::InvalidArgument(format!("time-sharing fraction {l} outside [0, 1]")));
    }
    let points = lambdas.iter().map(|&l| RatePoint::new((1.0 - l) * c, l * c_ea, PointParams::Lambda(l))).collect::<Vec<_>>();
    pareto_frontier(&points)
}

/// The segment from `(c, 0)` to `(0, c_ea)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeDivisionLine {
    pub c: f64,
    pub c_ea: f64,
}

impl TimeDivisionLine {
    /// Perpendicular distance of `p` beyond the segment; negative inside the
    /// triangle it bounds.
    pub fn margin(&self, p: &RatePoint) -> f64 {
        // line: r/c + r'/c_ea = 1, i.e. c_ea·r + c·r' − c·c_ea = 0
        let norm = (self.c * self.c + self.c_ea * self.c_ea).sqrt();
        if norm == 0.0 {
            return p.r.hypot(p.r_prime);
        }
        (self.c_ea * p.r + self.c * p.r_prime - self.c * self.c_ea) / norm
    }
}
