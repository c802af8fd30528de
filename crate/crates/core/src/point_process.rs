//! Poisson point sets on intervals and rectangles, and the deterministic
//! transformations (thinning, superposition, rotation, transposition) used
//! to couple them.
//!
//! Sampling conventions: 1D processes are generated by exponential gaps, so
//! the output is sorted by construction; 2D processes draw a Poisson count
//! followed by i.i.d. uniform placement. Both are exact. Coordinates are
//! `f64`; coincident coordinates have probability zero and are not treated
//! specially at sampling time.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::stream::{exp_gap, UnitStream};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidParameter(format!(
                "interval [{lo}, {hi}] is not a valid interval"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Axis-aligned rectangle: a space interval crossed with a time interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: Interval,
    pub t: Interval,
}

impl Rect {
    pub fn new(x: Interval, t: Interval) -> Self {
        Rect { x, t }
    }

    /// Rectangle `[0, x_hi] x [0, t_hi]`.
    pub fn anchored(x_hi: f64, t_hi: f64) -> Result<Self> {
        Ok(Rect {
            x: Interval::new(0.0, x_hi)?,
            t: Interval::new(0.0, t_hi)?,
        })
    }

    pub fn area(&self) -> f64 {
        self.x.length() * self.t.length()
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.x.contains(p.x) && self.t.contains(p.t)
    }
}

/// One planar point, position `x` at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub t: f64,
}

impl Point2 {
    pub fn new(x: f64, t: f64) -> Self {
        Point2 { x, t }
    }
}

/// Strictly increasing finite point set on a line.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Points1D {
    pts: Vec<f64>,
}

impl Points1D {
    pub fn empty() -> Self {
        Points1D { pts: Vec::new() }
    }

    /// Build from an arbitrary list; sorts and rejects duplicates and
    /// non-finite values.
    pub fn new(mut pts: Vec<f64>) -> Result<Self> {
        if pts.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(
                "coincident coordinates in a 1D point set".into(),
            ));
        }
        Ok(Points1D { pts })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.pts.iter().copied()
    }

    /// Consecutive gaps, including the gap from `lo` to the first point.
    pub fn gaps_from(&self, lo: f64) -> Vec<f64> {
        let mut prev = lo;
        self.pts
            .iter()
            .map(|&p| {
                let g = p - prev;
                prev = p;
                g
            })
            .collect()
    }

    /// Number of points in the half-open interval `(lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.pts.iter().filter(|&&p| p > lo && p <= hi).count()
    }

    /// CSV with header `x`, one point per line, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x\n");
        for &p in &self.pts {
            let _ = writeln!(out, "{p:.16e}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line == "x") {
                continue;
            }
            let v: f64 = line
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad coordinate on line {}", i + 1)))?;
            pts.push(v);
        }
        Points1D::new(pts)
    }
}

/// Finite planar point set, sorted by time then position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Points2D {
    pts: Vec<Point2>,
}

impl Points2D {
    pub fn empty() -> Self {
        Points2D { pts: Vec::new() }
    }

    /// Build from an arbitrary list; sorts by `(t, x)` and rejects duplicate
    /// pairs and non-finite values.
    pub fn new(mut pts: Vec<Point2>) -> Result<Self> {
        if pts.iter().any(|p| !(p.x.is_finite() && p.t.is_finite())) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        pts.sort_by(|a, b| (a.t, a.x).partial_cmp(&(b.t, b.x)).unwrap());
        if pts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(
                "duplicate pair in a 2D point set".into(),
            ));
        }
        Ok(Points2D { pts })
    }

    pub fn as_slice(&self) -> &[Point2] {
        &self.pts
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Point2> + '_ {
        self.pts.iter().copied()
    }

    /// Number of points in `[0, x] x [0, t]`.
    pub fn count_in_rect(&self, x: f64, t: f64) -> usize {
        self.pts
            .iter()
            .filter(|p| p.x <= x && p.t <= t && p.x >= 0.0 && p.t >= 0.0)
            .count()
    }

    /// CSV with header `x,t`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,t\n");
        for p in &self.pts {
            let _ = writeln!(out, "{:.16e},{:.16e}", p.x, p.t);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pts = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line == "x,t") {
                continue;
            }
            let (a, b) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidInput(format!("missing comma on line {}", i + 1)))?;
            let x: f64 = a.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("bad x coordinate on line {}", i + 1))
            })?;
            let t: f64 = b.trim().parse().map_err(|_| {
                Error::InvalidInput(format!("bad t coordinate on line {}", i + 1))
            })?;
            pts.push(Point2::new(x, t));
        }
        Points2D::new(pts)
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if !rate.is_finite() || rate < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "intensity must be finite and nonnegative, got {rate}"
        )));
    }
    Ok(())
}

/// Homogeneous Poisson process of the given intensity on an interval,
/// generated by exponential gaps.
pub fn sample_poisson_1d(iv: Interval, rate: f64, stream: UnitStream) -> Result<Points1D> {
    check_rate(rate)?;
    let mut pts = Vec::new();
    if rate > 0.0 {
        let mut rng = stream.rng();
        let mut pos = iv.lo();
        loop {
            pos += exp_gap(&mut rng, rate);
            if pos > iv.hi() {
                break;
            }
            pts.push(pos);
        }
    }
    Ok(Points1D { pts })
}

/// Homogeneous Poisson process on a rectangle: Poisson count, then i.i.d.
/// uniform placement, sorted by time.
pub fn sample_poisson_2d(r: Rect, rate: f64, stream: UnitStream) -> Result<Points2D> {
    check_rate(rate)?;
    let mean = rate * r.area();
    let mut pts = Vec::new();
    if mean > 0.0 {
        let mut rng = stream.rng();
        let n = Poisson::new(mean)
            .map_err(|e| Error::InvalidParameter(format!("poisson mean {mean}: {e}")))?
            .sample(&mut rng) as u64;
        pts.reserve(n as usize);
        for _ in 0..n {
            let x = r.x.lo() + rng.gen::<f64>() * r.x.length();
            let t = r.t.lo() + rng.gen::<f64>() * r.t.length();
            pts.push(Point2::new(x, t));
        }
        pts.sort_by(|a, b| (a.t, a.x).partial_cmp(&(b.t, b.x)).unwrap());
    }
    Ok(Points2D { pts })
}

/// Independently keep each point with probability `keep_prob`.
/// Returns `(kept, removed)`; the two parts partition the input exactly.
pub fn thin(p: &Points1D, keep_prob: f64, stream: UnitStream) -> Result<(Points1D, Points1D)> {
    if !(0.0..=1.0).contains(&keep_prob) || !keep_prob.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "keep probability must lie in [0, 1], got {keep_prob}"
        )));
    }
    let mut rng = stream.rng();
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for &pt in &p.pts {
        if rng.gen::<f64>() < keep_prob {
            kept.push(pt);
        } else {
            removed.push(pt);
        }
    }
    Ok((Points1D { pts: kept }, Points1D { pts: removed }))
}

/// Sorted union of two point sets on the same interval.
pub fn superpose(a: &Points1D, b: &Points1D) -> Points1D {
    let mut pts = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.pts.len() && j < b.pts.len() {
        if a.pts[i] <= b.pts[j] {
            pts.push(a.pts[i]);
            i += 1;
        } else {
            pts.push(b.pts[j]);
            j += 1;
        }
    }
    pts.extend_from_slice(&a.pts[i..]);
    pts.extend_from_slice(&b.pts[j..]);
    Points1D { pts }
}

/// Rotate a planar point set by 180 degrees about the rectangle centre:
/// `(x, t) -> (x_hi + x_lo - x, t_hi + t_lo - t)`. An involution; each
/// coordinate is one floating subtraction, so the double reflection is
/// bit-exact on dyadic coordinates.
pub fn rotate180(p: &Points2D, r: Rect) -> Result<Points2D> {
    for q in &p.pts {
        if !r.contains(*q) {
            return Err(Error::InvalidInput(format!(
                "point ({}, {}) lies outside the rectangle",
                q.x, q.t
            )));
        }
    }
    let pts = p
        .pts
        .iter()
        .map(|q| Point2::new(r.x.hi() + r.x.lo() - q.x, r.t.hi() + r.t.lo() - q.t))
        .collect();
    // Reuse the validating constructor for the sort order.
    Points2D::new(pts)
}

/// Swap the coordinates of every point: `(x, t) -> (t, x)`. An involution.
pub fn transpose_points(p: &Points2D) -> Points2D {
    let pts = p.pts.iter().map(|q| Point2::new(q.t, q.x)).collect();
    Points2D::new(pts).expect("transposing cannot introduce duplicates")
}
