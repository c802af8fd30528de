//! Ready-made driving scenarios and replication plumbing.
//!
//! The stationary scenario pairs Poisson(lambda) sources with
//! Poisson(1/lambda) sinks and unit interior intensity. The empty-start
//! scenario drops both boundary processes. Large runs use the streaming
//! feeds, which generate the same processes gap by gap without
//! materializing the point sets.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{DriveEvent, SimInputs};
use crate::error::{Error, Result};
use crate::point_process::{sample_poisson_1d, sample_poisson_2d, Interval, Points1D, Rect};
use crate::stream::{exp_gap, UnitStream};

/// Stationary inputs on `[0, t1] x [0, t2]`: sources of intensity `lambda`,
/// sinks of intensity `1/lambda`, interior alpha points of intensity 1.
/// Resamples on a duplicate event time, a probability-zero event.
pub fn stationary_inputs(lambda: f64, t1: f64, t2: f64, stream: UnitStream) -> Result<SimInputs> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    for attempt in 0..16 {
        let s = stream.child(attempt);
        let sources = sample_poisson_1d(Interval::new(0.0, t1)?, lambda, s.child(0))?;
        let sinks = sample_poisson_1d(Interval::new(0.0, t2)?, 1.0 / lambda, s.child(1))?;
        let alphas = sample_poisson_2d(Rect::anchored(t1, t2)?, 1.0, s.child(2))?;
        match SimInputs::new(t1, t2, sources, sinks, alphas, lambda) {
            Ok(inp) => return Ok(inp),
            Err(Error::DuplicateEventTime(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidInput(
        "could not draw distinct event times in 16 attempts".into(),
    ))
}

/// Inputs with empty axes: only the interior alpha process.
pub fn empty_start_inputs(t1: f64, t2: f64, stream: UnitStream) -> Result<SimInputs> {
    let alphas = sample_poisson_2d(Rect::anchored(t1, t2)?, 1.0, stream.child(2))?;
    SimInputs::new(t1, t2, Points1D::empty(), Points1D::empty(), alphas, 0.0)
}

/// Streaming merged feed of alpha events (interior intensity 1) and sink
/// events (intensity `sink_rate`), generated in time order by exponential
/// gaps. Equivalent in distribution to materializing the point sets.
pub struct StationaryFeed {
    t1: f64,
    t2: f64,
    sink_rate: f64,
    alpha_rng: ChaCha8Rng,
    sink_rng: ChaCha8Rng,
    next_alpha: f64,
    next_sink: f64,
}

impl StationaryFeed {
    pub fn new(t1: f64, t2: f64, sink_rate: f64, stream: UnitStream) -> Self {
        let mut alpha_rng = stream.child(0).rng();
        let mut sink_rng = stream.child(1).rng();
        let next_alpha = if t1 > 0.0 {
            exp_gap(&mut alpha_rng, t1)
        } else {
            f64::INFINITY
        };
        let next_sink = if sink_rate > 0.0 {
            exp_gap(&mut sink_rng, sink_rate)
        } else {
            f64::INFINITY
        };
        StationaryFeed {
            t1,
            t2,
            sink_rate,
            alpha_rng,
            sink_rng,
            next_alpha,
            next_sink,
        }
    }
}

impl Iterator for StationaryFeed {
    type Item = (f64, DriveEvent);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_alpha.min(self.next_sink) > self.t2 {
            return None;
        }
        if self.next_alpha <= self.next_sink {
            let t = self.next_alpha;
            let x = self.alpha_rng.gen::<f64>() * self.t1;
            self.next_alpha += exp_gap(&mut self.alpha_rng, self.t1);
            Some((t, DriveEvent::Alpha { x }))
        } else {
            let t = self.next_sink;
            self.next_sink += exp_gap(&mut self.sink_rng, self.sink_rate);
            Some((t, DriveEvent::Sink))
        }
    }
}

/// Sample stationary sources for a streaming run.
pub fn stationary_sources(lambda: f64, t1: f64, stream: UnitStream) -> Result<Vec<f64>> {
    Ok(sample_poisson_1d(Interval::new(0.0, t1)?, lambda, stream.child(3))?
        .as_slice()
        .to_vec())
}

/// Result of one streamed empty-start run.
#[derive(Debug, Clone)]
pub struct EmptyStartRun {
    pub final_config: crate::engine::ParticleConfig,
    /// Alpha points falling in each requested `[0, x] x [0, t]` rectangle.
    pub alpha_counts: Vec<usize>,
    /// Beta corners (jump origins) falling in each requested rectangle.
    pub beta_counts: Vec<usize>,
}

/// Stream one empty-start run (interior intensity 1, no sources, no
/// sinks), counting alpha points and beta corners per requested rectangle
/// on the fly instead of materializing the point sets.
pub fn run_empty_start(t1: f64, t2: f64, rects: &[(f64, f64)], stream: UnitStream) -> EmptyStartRun {
    let mut alpha_counts = vec![0usize; rects.len()];
    let mut beta_counts = vec![0usize; rects.len()];
    let hint = (2.0 * t1.min(t2)) as usize + 64;
    let feed = StationaryFeed::new(t1, t2, 0.0, stream).inspect(|&(t, ev)| {
        if let DriveEvent::Alpha { x } = ev {
            for (i, &(rx, rt)) in rects.iter().enumerate() {
                if x <= rx && t <= rt {
                    alpha_counts[i] += 1;
                }
            }
        }
    });
    let final_config = crate::engine::evolve_with(t1, &[], hint, feed, |ev| {
        if let crate::engine::EventKind::AlphaJump { from, .. } = ev.kind {
            for (i, &(rx, rt)) in rects.iter().enumerate() {
                if from <= rx && ev.time <= rt {
                    beta_counts[i] += 1;
                }
            }
        }
    });
    EmptyStartRun {
        final_config,
        alpha_counts,
        beta_counts,
    }
}

/// Run `reps` independent replications in parallel. Replication `r` receives
/// `base.child(r)`; results are collected in replication order, so the
/// output is independent of the worker schedule.
pub fn replicate<T, F>(base: UnitStream, reps: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, UnitStream) -> T + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|r| f(r, base.child(r)))
        .collect()
}
