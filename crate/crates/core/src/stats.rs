//! Goodness-of-fit kernel: just the tests the verification suites need.
//!
//! All tests use asymptotic null distributions and a fixed significance
//! level of 0.01; suites run them on pinned seeds so pass/fail is
//! deterministic. Each result is a [`TestReport`] that serializes to JSON.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::coupling::Trajectory;
use crate::error::{Error, Result};
use crate::point_process::{Interval, Points1D, Points2D, Rect};

/// Default significance level of the acceptance suites.
pub const ALPHA: f64 = 0.01;

/// Outcome of one named statistical check.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TestReport {
    pub name: String,
    pub statistic: f64,
    pub p_value: f64,
    pub pass: bool,
    pub alpha: f64,
    pub n: usize,
    pub notes: String,
}

impl TestReport {
    fn new(name: &str, statistic: f64, p_value: f64, n: usize, notes: String) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestReport {
            name: name.to_string(),
            statistic,
            p_value,
            pass: p_value >= ALPHA,
            alpha: ALPHA,
            n,
            notes,
        }
    }

    /// Re-evaluate the verdict at a different significance level.
    pub fn at_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self.pass = self.p_value >= alpha;
        self
    }
}

/// Survival function of the Kolmogorov distribution at `x`.
fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // Jacobi theta form, accurate for small arguments.
        let v = std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let w = (2.0 * std::f64::consts::PI).sqrt() / x;
        let cdf = w * ((-v).exp() + (-9.0 * v).exp() + (-25.0 * v).exp() + (-49.0 * v).exp());
        1.0 - cdf
    } else {
        let mut s = 0.0;
        for k in 1..=20 {
            let term = (-2.0 * (k as f64).powi(2) * x * x).exp();
            s += if k % 2 == 1 { term } else { -term };
        }
        2.0 * s
    }
}

/// One-sample Kolmogorov-Smirnov test of positive gaps against the
/// exponential distribution with the given rate.
pub fn ks_exponential(gaps: &[f64], rate: f64) -> Result<TestReport> {
    if gaps.is_empty() {
        return Err(Error::InvalidInput("no gaps to test".into()));
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "rate must be positive, got {rate}"
        )));
    }
    if gaps.iter().any(|&g| !(g.is_finite() && g > 0.0)) {
        return Err(Error::InvalidInput("gaps must be positive".into()));
    }
    let mut sorted = gaps.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &g) in sorted.iter().enumerate() {
        let cdf = -(-rate * g).exp_m1();
        d = d.max((cdf - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - cdf).abs());
    }
    let p = kolmogorov_sf(n.sqrt() * d);
    Ok(TestReport::new(
        "ks-exponential",
        d,
        p,
        sorted.len(),
        format!("rate {rate}"),
    ))
}

/// Index-of-dispersion test of counts against a known Poisson mean:
/// `sum (c_i - mean)^2 / mean` referred to chi-squared with `n` degrees of
/// freedom, two-sided.
pub fn dispersion_test(counts: &[u64], mean: f64) -> Result<TestReport> {
    if counts.is_empty() {
        return Err(Error::InvalidInput("no counts to test".into()));
    }
    if !(mean.is_finite() && mean > 0.0) {
        return Err(Error::InvalidInput(format!(
            "mean must be positive, got {mean}"
        )));
    }
    let n = counts.len();
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2) / mean)
        .sum();
    let chi = ChiSquared::new(n as f64).expect("positive degrees of freedom");
    let lower = chi.cdf(stat);
    let p = 2.0 * lower.min(1.0 - lower);
    Ok(TestReport::new(
        "dispersion",
        stat / n as f64,
        p,
        n,
        format!("poisson mean {mean}"),
    ))
}

/// Pearson chi-squared uniformity test of planar points over a `k x m`
/// grid of equal bins.
pub fn chi2_uniform(points: &Points2D, r: Rect, bins: (usize, usize)) -> Result<TestReport> {
    let (k, m) = bins;
    if k * m < 2 {
        return Err(Error::InvalidParameter("need at least 2 bins".into()));
    }
    let n = points.len();
    let expected = n as f64 / (k * m) as f64;
    if expected < 5.0 {
        return Err(Error::InvalidInput(format!(
            "expected count per bin {expected:.2} is below 5"
        )));
    }
    let mut counts = vec![0usize; k * m];
    for p in points.iter() {
        if !r.contains(p) {
            return Err(Error::InvalidInput("point outside the rectangle".into()));
        }
        let i = (((p.x - r.x.lo()) / r.x.length() * k as f64) as usize).min(k - 1);
        let j = (((p.t - r.t.lo()) / r.t.length() * m as f64) as usize).min(m - 1);
        counts[i * m + j] += 1;
    }
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let df = (k * m - 1) as f64;
    let p = 1.0 - ChiSquared::new(df).expect("df > 0").cdf(stat);
    Ok(TestReport::new(
        "chi2-uniform",
        stat,
        p,
        n,
        format!("{k}x{m} bins"),
    ))
}

/// One-dimensional uniformity over equal bins of an interval.
pub fn chi2_uniform_1d(points: &[f64], iv: Interval, bins: usize) -> Result<TestReport> {
    if bins < 2 {
        return Err(Error::InvalidParameter("need at least 2 bins".into()));
    }
    let n = points.len();
    let expected = n as f64 / bins as f64;
    if expected < 5.0 {
        return Err(Error::InvalidInput(format!(
            "expected count per bin {expected:.2} is below 5"
        )));
    }
    let mut counts = vec![0usize; bins];
    for &p in points {
        if !iv.contains(p) {
            return Err(Error::InvalidInput("point outside the interval".into()));
        }
        let i = (((p - iv.lo()) / iv.length() * bins as f64) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p = 1.0 - ChiSquared::new((bins - 1) as f64).expect("df > 0").cdf(stat);
    Ok(TestReport::new(
        "chi2-uniform-1d",
        stat,
        p,
        n,
        format!("{bins} bins"),
    ))
}

/// Gaps of the concatenation of independent replications laid end to end.
/// The concatenation of independent Poisson processes on consecutive
/// intervals is one Poisson process, so every gap (seams included) is a
/// clean exponential draw and the boundary-selection bias of a single
/// short window vanishes.
pub fn pooled_gaps(samples: &[Points1D], iv: Interval) -> Vec<f64> {
    let len = iv.length();
    let mut gaps = Vec::new();
    let mut prev = 0.0;
    for (r, s) in samples.iter().enumerate() {
        let offset = r as f64 * len;
        for p in s.iter() {
            let pos = offset + (p - iv.lo());
            let g = pos - prev;
            if g > 0.0 {
                gaps.push(g);
            }
            prev = pos;
        }
    }
    gaps
}

/// Bundle of Poisson checks for replicated 1D samples on a common
/// interval: count dispersion, pooled-position uniformity, and the gap
/// K-S over the concatenated replications.
pub fn poisson_report_1d(
    samples: &[Points1D],
    iv: Interval,
    intensity: f64,
) -> Result<Vec<TestReport>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no replications".into()));
    }
    let mean = intensity * iv.length();
    let counts: Vec<u64> = samples.iter().map(|s| s.len() as u64).collect();
    let mut reports = vec![dispersion_test(&counts, mean)?];

    let pooled: Vec<f64> = samples.iter().flat_map(|s| s.iter()).collect();
    let bins = (pooled.len() / 40).clamp(2, 25);
    reports.push(chi2_uniform_1d(&pooled, iv, bins)?);

    let gaps = pooled_gaps(samples, iv);
    reports.push(ks_exponential(&gaps, intensity)?);
    Ok(reports)
}

/// Bundle of Poisson checks for replicated planar samples on a common
/// rectangle: count dispersion and pooled uniformity.
pub fn poisson_report_2d(
    samples: &[Points2D],
    r: Rect,
    intensity: f64,
) -> Result<Vec<TestReport>> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no replications".into()));
    }
    let mean = intensity * r.area();
    let counts: Vec<u64> = samples.iter().map(|s| s.len() as u64).collect();
    let mut reports = vec![dispersion_test(&counts, mean)?];
    let pooled = Points2D::new(samples.iter().flat_map(|s| s.iter()).collect())
        .map_err(|_| Error::InvalidInput("replications share a point".into()))?;
    reports.push(chi2_uniform(&pooled, r, (5, 5))?);
    Ok(reports)
}

/// Pearson correlation with the Fisher-z test against zero.
pub fn independence_corr(a: &[f64], b: &[f64]) -> Result<TestReport> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 30 {
        return Err(Error::InvalidInput(format!(
            "need at least 30 pairs, got {n}"
        )));
    }
    let nf = n as f64;
    let (ma, mb) = (
        a.iter().sum::<f64>() / nf,
        b.iter().sum::<f64>() / nf,
    );
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let (da, db) = (a[i] - ma, b[i] - mb);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidInput("a sequence is constant".into()));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let (p, z) = if r.abs() >= 1.0 {
        (0.0, f64::INFINITY)
    } else {
        let z = r.atanh() * (nf - 3.0).sqrt();
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        (2.0 * (1.0 - normal.cdf(z.abs())), z)
    };
    let _ = z;
    Ok(TestReport::new("independence-corr", r, p, n, String::new()))
}

/// Mean and standard error of terminal slopes `traj(t_max)/t_max` over
/// replications.
pub fn slope_estimate(trajs: &[Trajectory], t_max: f64) -> (f64, f64) {
    let n = trajs.len();
    if n == 0 || t_max <= 0.0 {
        return (0.0, 0.0);
    }
    let slopes: Vec<f64> = trajs.iter().map(|t| t.value_at(t_max) / t_max).collect();
    let mean = slopes.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// One row of the alpha-beta balance table.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VtRow {
    pub x: f64,
    pub y: f64,
    /// `(#alpha - #beta)` in `[0, tx] x [0, ty]`, divided by `t`.
    pub value: f64,
    /// Limit value `2 sqrt(xy)`.
    pub reference: f64,
}

/// Build the table from per-rectangle counts.
pub fn vt_rows_from_counts(
    alpha_counts: &[usize],
    beta_counts: &[usize],
    t: f64,
    grid: &[(f64, f64)],
) -> Vec<VtRow> {
    grid.iter()
        .zip(alpha_counts.iter().zip(beta_counts))
        .map(|(&(x, y), (&a, &b))| VtRow {
            x,
            y,
            value: (a as f64 - b as f64) / t,
            reference: 2.0 * (x * y).sqrt(),
        })
        .collect()
}

/// Signed alpha-beta balance of scaled rectangles: for each grid point
/// `(x, y)`, the count difference in `[0, tx] x [0, ty]` over `t`, next to
/// its limit `2 sqrt(xy)`.
pub fn v_measure_diagnostic(
    alphas: &Points2D,
    betas: &Points2D,
    t: f64,
    grid: &[(f64, f64)],
) -> Result<Vec<VtRow>> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale t must be positive, got {t}"
        )));
    }
    let alpha_counts: Vec<usize> = grid
        .iter()
        .map(|&(x, y)| alphas.count_in_rect(t * x, t * y))
        .collect();
    let beta_counts: Vec<usize> = grid
        .iter()
        .map(|&(x, y)| betas.count_in_rect(t * x, t * y))
        .collect();
    Ok(vt_rows_from_counts(&alpha_counts, &beta_counts, t, grid))
}
