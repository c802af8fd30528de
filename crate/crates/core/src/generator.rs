//! The configuration-space generator of the process and its adjoint.
//!
//! For a bounded functional `f` on finite configurations of `[0, T1]`,
//!
//! ```text
//! G f(x)  = integral_0^T1 [f(R_t x) - f(x)] dt + (1/lambda) [f(L x) - f(x)]
//! G* g(y) = integral_0^T1 [g(L_s y) - g(y)] ds + (1/lambda) [g(R y) - g(y)]
//! ```
//!
//! where `R_t` inserts an alpha point at `t` (the particle at or right of
//! `t` moves onto `t`, or a new particle appears past the last one), `L`
//! removes the leftmost particle, `L_s` inserts a point at `s` moving the
//! particle directly to the left of `s` onto it (or prepends), and `R`
//! removes the rightmost particle. Writing the jump terms as differences
//! keeps `G 1 = G* 1 = 0` exact in floating point. The integrands are
//! smooth between consecutive particles, so each segment is integrated by
//! fixed-order Gauss-Legendre quadrature.

use std::sync::OnceLock;

use crate::engine::ParticleConfig;
use crate::error::{Error, Result};
use crate::point_process::{sample_poisson_1d, Interval};
use crate::stream::UnitStream;

const QUAD_ORDER: usize = 16;

/// Nodes and weights of Gauss-Legendre quadrature on `[-1, 1]`, computed
/// once by Newton iteration on the Legendre polynomial.
fn gauss_legendre_16() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = QUAD_ORDER;
        let mut out = Vec::with_capacity(n);
        for i in 1..=n {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            out.push((x, w));
        }
        out
    })
}

/// Value and derivative of the Legendre polynomial `P_n` at `x`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0f64, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn quad_segment<F: FnMut(f64) -> Result<f64>>(a: f64, b: f64, mut f: F) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for &(x, w) in gauss_legendre_16() {
        acc += w * f(mid + half * x)?;
    }
    Ok(acc * half)
}

fn check_params(lambda: f64, t1: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) || !(t1.is_finite() && t1 >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need lambda > 0 and T1 >= 0, got lambda={lambda}, T1={t1}"
        )));
    }
    Ok(())
}

fn eval<F: Fn(&ParticleConfig) -> f64>(f: &F, c: &ParticleConfig) -> Result<f64> {
    let v = f(c);
    if !v.is_finite() {
        return Err(Error::NonFiniteValue(format!(
            "functional returned {v} on a configuration of {} particles",
            c.len()
        )));
    }
    Ok(v)
}

/// Apply the generator to `f` at configuration `c`.
pub fn generator_apply<F: Fn(&ParticleConfig) -> f64>(
    f: &F,
    c: &ParticleConfig,
    lambda: f64,
    t1: f64,
) -> Result<f64> {
    check_params(lambda, t1)?;
    let base = eval(f, c)?;
    let xs = c.positions().to_vec();
    let n = xs.len();
    let mut total = 0.0;

    // Insertion segments: on (x_{i-1}, x_i] the particle x_i moves onto t.
    let mut scratch = ParticleConfig::from_sorted(xs.clone());
    let mut prev = 0.0;
    for i in 0..n {
        total += quad_segment(prev, xs[i], |t| {
            scratch.set_position(i, t);
            Ok(eval(f, &scratch)? - base)
        })?;
        scratch.set_position(i, xs[i]);
        prev = xs[i];
    }
    // Final segment: a particle appears at t past the last one.
    let mut appended = xs.clone();
    appended.push(t1.max(prev));
    let mut scratch = ParticleConfig::from_sorted(appended);
    total += quad_segment(prev, t1, |t| {
        scratch.set_position(n, t);
        Ok(eval(f, &scratch)? - base)
    })?;

    // Exit to the left.
    let dropped = ParticleConfig::from_sorted(xs.get(1..).unwrap_or(&[]).to_vec());
    total += (eval(f, &dropped)? - base) / lambda;
    Ok(total)
}

/// Apply the adjoint generator to `g` at configuration `c`.
pub fn adjoint_apply<G: Fn(&ParticleConfig) -> f64>(
    g: &G,
    c: &ParticleConfig,
    lambda: f64,
    t1: f64,
) -> Result<f64> {
    check_params(lambda, t1)?;
    let base = eval(g, c)?;
    let xs = c.positions().to_vec();
    let n = xs.len();
    let mut total = 0.0;

    // Prepend segment: on [0, x_1) a new leftmost particle appears at s.
    let first = xs.first().copied().unwrap_or(t1);
    let mut prepended = vec![0.0];
    prepended.extend_from_slice(&xs);
    let mut scratch = ParticleConfig::from_sorted(prepended);
    total += quad_segment(0.0, first.min(t1), |s| {
        scratch.set_position(0, s);
        Ok(eval(g, &scratch)? - base)
    })?;

    // Displacement segments: on [x_i, x_{i+1}) the particle x_i moves
    // right onto s.
    let mut scratch = ParticleConfig::from_sorted(xs.clone());
    for i in 0..n {
        let hi = if i + 1 < n { xs[i + 1] } else { t1 };
        total += quad_segment(xs[i], hi, |s| {
            scratch.set_position(i, s);
            Ok(eval(g, &scratch)? - base)
        })?;
        scratch.set_position(i, xs[i]);
    }

    // Exit to the right.
    let dropped = ParticleConfig::from_sorted(xs.get(..n.saturating_sub(1)).unwrap_or(&[]).to_vec());
    total += (eval(g, &dropped)? - base) / lambda;
    Ok(total)
}

/// Poisson(lambda) configuration on `[0, t1]`: one draw from the
/// stationary measure.
pub fn sample_mu(lambda: f64, t1: f64, stream: UnitStream) -> Result<ParticleConfig> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let pts = sample_poisson_1d(Interval::new(0.0, t1)?, lambda, stream)?;
    Ok(ParticleConfig::from_sorted(pts.as_slice().to_vec()))
}

/// The exponential test family `x -> exp(-a * sum x_i)`.
pub fn exp_sum_functional(a: f64) -> impl Fn(&ParticleConfig) -> f64 {
    move |c: &ParticleConfig| (-a * c.positions().iter().sum::<f64>()).exp()
}

/// Monte-Carlo check of the duality pairing: mean and standard error of
/// `Gf(c) g(c) - f(c) G*g(c)` over `samples` draws from the stationary
/// measure. The mean must vanish when `G*` is the true adjoint.
pub fn duality_gap<F, G>(
    f: &F,
    g: &G,
    lambda: f64,
    t1: f64,
    samples: u64,
    stream: UnitStream,
) -> Result<(f64, f64)>
where
    F: Fn(&ParticleConfig) -> f64,
    G: Fn(&ParticleConfig) -> f64,
{
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for k in 0..samples {
        let c = sample_mu(lambda, t1, stream.child(k))?;
        let v = generator_apply(f, &c, lambda, t1)? * eval(g, &c)?
            - eval(f, &c)? * adjoint_apply(g, &c, lambda, t1)?;
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq - n * mean * mean).max(0.0) / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(v: &[f64]) -> ParticleConfig {
        ParticleConfig::new(v.to_vec()).unwrap()
    }

    #[test]
    fn quadrature_nodes_integrate_polynomials_exactly() {
        // Order 16 is exact through degree 31.
        let val = quad_segment(0.0, 1.0, |x| Ok(x.powi(9))).unwrap();
        assert!((val - 0.1).abs() < 1e-14);
        let val = quad_segment(-1.0, 2.0, |x| Ok(3.0 * x * x)).unwrap();
        assert!((val - 9.0).abs() < 1e-12);
    }

    #[test]
    fn generator_annihilates_constants_exactly() {
        let one = |_: &ParticleConfig| 1.0;
        for c in [config(&[]), config(&[0.4]), config(&[0.1, 0.5, 0.9])] {
            assert_eq!(generator_apply(&one, &c, 1.0, 1.0).unwrap(), 0.0);
            assert_eq!(adjoint_apply(&one, &c, 1.0, 1.0).unwrap(), 0.0);
            assert_eq!(generator_apply(&one, &c, 0.5, 2.0).unwrap(), 0.0);
            assert_eq!(adjoint_apply(&one, &c, 2.0, 3.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn generator_on_particle_count() {
        // For f = n: Gf = (T1 - x_n) - 1/lambda on nonempty configurations.
        let count = |c: &ParticleConfig| c.len() as f64;
        let got = generator_apply(&count, &config(&[0.4]), 1.0, 1.0).unwrap();
        assert!((got - (-0.4)).abs() < 1e-12, "got {got}");
        let got = generator_apply(&count, &config(&[0.2, 0.7]), 2.0, 3.0).unwrap();
        assert!((got - (3.0 - 0.7 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn adjoint_on_particle_count_of_empty() {
        // Every insertion adds one particle, so the integral term is T1.
        let count = |c: &ParticleConfig| c.len() as f64;
        let got = adjoint_apply(&count, &config(&[]), 1.0, 1.0).unwrap();
        assert!((got - 1.0).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn generator_matches_closed_form_for_exponential_family() {
        // For f(x) = exp(-a sum x_i) every segment integral has the closed
        // form e^{-a(S - x_i)} (e^{-a lo} - e^{-a hi}) / a.
        let a = 0.7;
        let f = exp_sum_functional(a);
        for (c, lambda, t1) in [
            (config(&[0.3, 0.8, 1.4]), 1.0, 2.0),
            (config(&[0.5]), 0.5, 1.0),
            (config(&[]), 2.0, 1.5),
        ] {
            let xs = c.positions();
            let s: f64 = xs.iter().sum();
            let base = (-a * s).exp();
            let mut expect = 0.0;
            let mut prev = 0.0;
            for (i, &x) in xs.iter().enumerate() {
                let partial = s - x;
                expect +=
                    (-a * partial).exp() * ((-a * prev).exp() - (-a * x).exp()) / a - (x - prev) * base;
                let _ = i;
                prev = x;
            }
            expect += (-a * s).exp() * ((-a * prev).exp() - (-a * t1).exp()) / a - (t1 - prev) * base;
            let tail: f64 = xs.get(1..).map_or(0.0, |r| r.iter().sum());
            expect += ((-a * tail).exp() - base) / lambda;
            let got = generator_apply(&f, &c, lambda, t1).unwrap();
            assert!(
                (got - expect).abs() < 1e-10,
                "got {got}, closed form {expect}"
            );
        }
    }

    #[test]
    fn non_finite_functionals_are_reported() {
        let bad = |c: &ParticleConfig| {
            if c.len() > 1 {
                f64::NAN
            } else {
                1.0
            }
        };
        let c = config(&[0.2, 0.6]);
        assert!(matches!(
            generator_apply(&bad, &c, 1.0, 1.0),
            Err(Error::NonFiniteValue(_))
        ));
    }

    #[test]
    fn mu_sampling_statistics() {
        assert!(sample_mu(0.0, 1.0, UnitStream::new(1, 0)).is_err());
        let reps = 2000u64;
        let mut empties = 0usize;
        let mut total = 0usize;
        for r in 0..reps {
            let c = sample_mu(1.0, 1.0, UnitStream::new(60_000, r)).unwrap();
            total += c.len();
            empties += c.is_empty() as usize;
        }
        // P(empty) = e^{-1} = 0.3679; SE over 2000 draws is 0.011.
        let p_empty = empties as f64 / reps as f64;
        assert!((p_empty - 0.3679).abs() < 3.3 * 0.011, "p_empty {p_empty}");
        let mean = total as f64 / reps as f64;
        assert!((mean - 1.0).abs() < 3.0 * (1.0f64 / reps as f64).sqrt());
    }

    #[test]
    fn duality_gap_vanishes_for_exponential_pairs() {
        let f = exp_sum_functional(1.0);
        let g = exp_sum_functional(0.5);
        let (mean, se) = duality_gap(&f, &g, 1.0, 2.0, 4000, UnitStream::new(61_000, 0)).unwrap();
        assert!(mean.abs() <= 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn duality_gap_detects_a_wrong_adjoint() {
        // Pairing Gf at lambda with an adjoint evaluated at a different
        // lambda must leave a visible gap.
        let f = exp_sum_functional(1.0);
        let g = exp_sum_functional(0.5);
        let lambda = 1.0;
        let t1 = 2.0;
        let samples = 8000u64;
        let stream = UnitStream::new(62_000, 0);
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for k in 0..samples {
            let c = sample_mu(lambda, t1, stream.child(k)).unwrap();
            let v = generator_apply(&f, &c, lambda, t1).unwrap() * g(&c)
                - f(&c) * adjoint_apply(&g, &c, 1.3 * lambda, t1).unwrap();
            sum += v;
            sum_sq += v * v;
        }
        let n = samples as f64;
        let mean: f64 = sum / n;
        let se = ((sum_sq - n * mean * mean) / (n - 1.0) / n).sqrt();
        assert!(mean.abs() > 3.0 * se, "wrong adjoint not detected");
    }
}
