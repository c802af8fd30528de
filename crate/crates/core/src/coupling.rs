//! Second-class particle machinery.
//!
//! A second-class particle is the discrepancy between two coupled runs that
//! share interior alpha points. The isolated particle `X_t` compares a run
//! against the same run with its first consuming sink removed: it starts at
//! the origin, jumps to the position of the first consumed particle, and
//! afterwards jumps to the previous position of the nearest particle on its
//! right whenever that particle is pulled to the left of `X` (by an alpha
//! point or by a sink). The thick/thin coupling of a pair `(eta, sigma)`
//! carries a whole family of discrepancy particles; `Z_t` is the member
//! whose space-time path leaves the vertical axis through the smallest
//! removed sink.
//!
//! In a finite box a discrepancy can vanish: when the region to the right
//! of a ghost empties, an alpha creation merges the coupled runs, and a
//! sink can swallow the ghost when the leaner run is empty. Both outcomes
//! freeze the trajectory and stamp it absorbed; pathwise checks quantify
//! over times before the absorption.

use std::fmt::Write as _;

use crate::engine::{evolve, Config, DriveEvent, Event, EventKind, EventLog, SimInputs};
use crate::error::{Error, Result};
use crate::point_process::{sample_poisson_1d, superpose, thin, Interval, Points1D};
use crate::scenario::{stationary_sources, StationaryFeed};
use crate::stream::UnitStream;

/// Piecewise-constant, right-continuous, nondecreasing path started at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    jumps: Vec<(f64, f64)>,
    absorbed_at: Option<f64>,
}

impl Trajectory {
    pub fn new(jumps: Vec<(f64, f64)>, absorbed_at: Option<f64>) -> Result<Self> {
        let ok_times = jumps.windows(2).all(|w| w[0].0 < w[1].0);
        let ok_positions = jumps.windows(2).all(|w| w[0].1 < w[1].1);
        let ok_start = jumps.first().map_or(true, |&(t, x)| t >= 0.0 && x > 0.0);
        if !(ok_times && ok_positions && ok_start) {
            return Err(Error::InvalidInput(
                "trajectory jumps must increase strictly in time and position".into(),
            ));
        }
        Ok(Trajectory { jumps, absorbed_at })
    }

    pub fn constant_zero() -> Self {
        Trajectory {
            jumps: Vec::new(),
            absorbed_at: None,
        }
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    /// Time after which the underlying discrepancy no longer exists; the
    /// trajectory is frozen from there on.
    pub fn absorbed_at(&self) -> Option<f64> {
        self.absorbed_at
    }

    /// Right-continuous evaluation; 0 before the first jump.
    pub fn value_at(&self, t: f64) -> f64 {
        match self.jumps.partition_point(|&(s, _)| s <= t) {
            0 => 0.0,
            k => self.jumps[k - 1].1,
        }
    }

    /// Final value of the path.
    pub fn last_value(&self) -> f64 {
        self.jumps.last().map_or(0.0, |&(_, x)| x)
    }

    /// CSV with header `t,x`, starting from the origin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x\n0,0\n");
        for &(t, x) in &self.jumps {
            let _ = writeln!(out, "{t:.16e},{x:.16e}");
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Single-ghost tracking (the isolated second-class particle).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum GhostState {
    NotBorn,
    At(f64),
    Absorbed,
}

struct IsolatedTracker {
    state: GhostState,
    jumps: Vec<(f64, f64)>,
    absorbed_at: Option<f64>,
}

impl IsolatedTracker {
    fn new() -> Self {
        IsolatedTracker {
            state: GhostState::NotBorn,
            jumps: Vec::new(),
            absorbed_at: None,
        }
    }

    fn jump_to(&mut self, time: f64, pos: f64) {
        self.state = GhostState::At(pos);
        self.jumps.push((time, pos));
    }

    fn absorb(&mut self, time: f64) {
        self.state = GhostState::Absorbed;
        self.absorbed_at = Some(time);
    }

    fn step(&mut self, ev: &Event) {
        match (self.state, ev.kind) {
            (GhostState::NotBorn, EventKind::SinkConsume { from }) => {
                self.jump_to(ev.time, from);
            }
            (GhostState::At(x), EventKind::SinkConsume { from }) if x < from => {
                self.jump_to(ev.time, from);
            }
            (GhostState::At(x), EventKind::AlphaJump { from, to }) if to <= x && x < from => {
                self.jump_to(ev.time, from);
            }
            (GhostState::At(x), EventKind::AlphaCreate { at }) if at <= x => {
                // No particle remains on the ghost's right: the coupled runs
                // coincide from here on.
                self.absorb(ev.time);
            }
            (GhostState::At(_), EventKind::SinkVoid) => {
                // The leaner run is empty, so in the coupled run this sink
                // consumes the ghost itself.
                self.absorb(ev.time);
            }
            _ => {}
        }
    }

    fn finish(self) -> Trajectory {
        Trajectory {
            jumps: self.jumps,
            absorbed_at: self.absorbed_at,
        }
    }
}

/// Trajectory of the isolated second-class particle of a logged run.
pub fn isolated_second_class(log: &EventLog) -> Trajectory {
    let mut tracker = IsolatedTracker::new();
    for ev in log.events() {
        tracker.step(ev);
    }
    tracker.finish()
}

/// Isolated second-class particle of the process run from left to right:
/// transpose the inputs, evolve, and track. The result reads as
/// `x -> X'_x`.
pub fn second_class_lr(inp: &SimInputs) -> Trajectory {
    let transposed = inp.transpose();
    isolated_second_class(&evolve(&transposed))
}

/// Streamed single-run tracker for long horizons; avoids materializing the
/// event log. Equivalent to `isolated_second_class(evolve(inputs))` with
/// the streaming scenario of [`StationaryFeed`].
pub fn run_isolated_second_class(
    lambda: f64,
    t1: f64,
    t2: f64,
    stream: UnitStream,
) -> Result<Trajectory> {
    let sources = stationary_sources(lambda, t1, stream)?;
    let feed = StationaryFeed::new(t1, t2, 1.0 / lambda, stream);
    let mut tracker = IsolatedTracker::new();
    crate::engine::evolve_with(
        t1,
        &sources,
        (lambda * t1) as usize + 64,
        feed,
        |ev| tracker.step(ev),
    );
    Ok(tracker.finish())
}

// ---------------------------------------------------------------------------
// Thick/thin coupled pairs.
// ---------------------------------------------------------------------------

/// Which boundary process is densified in the coupled copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    /// `delta >= gamma`: add sources of intensity `delta - gamma`, keep each
    /// sink with probability `gamma / delta`.
    ThickenSources,
    /// `delta <= gamma`: the transposed construction; sinks gain intensity
    /// `1/delta - 1/gamma` and sources are `delta/gamma`-thinned. Realised
    /// by transposing and thickening with `(1/gamma, 1/delta)`.
    ThinSources,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSpec {
    pub gamma: f64,
    pub delta: f64,
    pub mode: CouplingMode,
}

impl CouplingSpec {
    pub fn new(gamma: f64, delta: f64, mode: CouplingMode) -> Result<Self> {
        if !(gamma.is_finite() && delta.is_finite()) || gamma <= 0.0 || delta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "intensities must be positive, got gamma={gamma} delta={delta}"
            )));
        }
        let consistent = match mode {
            CouplingMode::ThickenSources => delta >= gamma,
            CouplingMode::ThinSources => delta <= gamma,
        };
        if !consistent {
            return Err(Error::InvalidParameter(format!(
                "mode {mode:?} inconsistent with gamma={gamma}, delta={delta}"
            )));
        }
        Ok(CouplingSpec { gamma, delta, mode })
    }
}

/// Two runs sharing alpha points; `sigma` has the denser sources and the
/// thinned sinks.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub eta_inputs: SimInputs,
    pub sigma_inputs: SimInputs,
    pub removed_sinks: Points1D,
    pub added_sources: Points1D,
}

/// Couple a stationary base run with its thick/thin modification. In
/// `ThinSources` mode the returned pair lives in the transposed frame.
pub fn make_coupled_pair(
    base: &SimInputs,
    spec: CouplingSpec,
    stream: UnitStream,
) -> Result<CoupledPair> {
    match spec.mode {
        CouplingMode::ThinSources => {
            let transposed = base.transpose();
            let spec_t = CouplingSpec::new(
                1.0 / spec.gamma,
                1.0 / spec.delta,
                CouplingMode::ThickenSources,
            )?;
            make_coupled_pair(&transposed, spec_t, stream)
        }
        CouplingMode::ThickenSources => {
            let iv = Interval::new(0.0, base.t1())?;
            for attempt in 0..16 {
                let s = stream.child(attempt);
                let added = sample_poisson_1d(iv, spec.delta - spec.gamma, s.child(0))?;
                let (kept, removed) = thin(base.sinks(), spec.gamma / spec.delta, s.child(1))?;
                let merged = superpose(base.sources(), &added);
                if merged.as_slice().windows(2).any(|w| w[0] == w[1]) {
                    continue;
                }
                let sigma = SimInputs::new(
                    base.t1(),
                    base.t2(),
                    merged,
                    kept,
                    base.alphas().clone(),
                    spec.delta,
                )?;
                return Ok(CoupledPair {
                    eta_inputs: base.clone(),
                    sigma_inputs: sigma,
                    removed_sinks: removed,
                    added_sources: added,
                });
            }
            Err(Error::InvalidInput(
                "could not draw distinct added sources in 16 attempts".into(),
            ))
        }
    }
}

fn check_coupled(eta: &EventLog, sigma: &EventLog) -> Result<()> {
    let (e, s) = (eta.inputs(), sigma.inputs());
    let sources_subset = e
        .sources()
        .iter()
        .all(|x| s.sources().as_slice().binary_search_by(|p| p.partial_cmp(&x).unwrap()).is_ok());
    let sinks_subset = s
        .sinks()
        .iter()
        .all(|x| e.sinks().as_slice().binary_search_by(|p| p.partial_cmp(&x).unwrap()).is_ok());
    if e.alphas() != s.alphas() || !sources_subset || !sinks_subset {
        return Err(Error::InvalidInput(
            "logs are not a thick/thin coupled pair".into(),
        ));
    }
    Ok(())
}

/// Flux of the discrepancy family through `x` at time `t`: the difference
/// of closed-interval counts, where particles gone through a sink count as
/// sitting at zero.
pub fn flux(eta: &EventLog, sigma: &EventLog, x: f64, t: f64) -> Result<i64> {
    check_coupled(eta, sigma)?;
    let eta_in = eta.config_at(t)?.count_in(0.0, x);
    let sigma_in = sigma.config_at(t)?.count_in(0.0, x);
    let consumed = |log: &EventLog| {
        log.events()
            .iter()
            .take_while(|ev| ev.time <= t)
            .filter(|ev| matches!(ev.kind, EventKind::SinkConsume { .. }))
            .count() as i64
    };
    Ok(flux_value(sigma_in, consumed(sigma) as usize, eta_in, consumed(eta) as usize))
}

/// The flux arithmetic shared by log-based and streamed runs.
pub fn flux_value(
    sigma_in: usize,
    sigma_consumed: usize,
    eta_in: usize,
    eta_consumed: usize,
) -> i64 {
    (sigma_in + sigma_consumed) as i64 - (eta_in + eta_consumed) as i64
}

// ---------------------------------------------------------------------------
// Ghost-family tracking for coupled pairs.
// ---------------------------------------------------------------------------

/// How one merged event changes the discrepancy family.
#[derive(Debug, Clone, Copy, PartialEq)]
enum GhostMove {
    /// The leftmost ghost at or above the event site relocates to `p`;
    /// ghosts between shift one slot to the right.
    Shift { q: f64, p: f64 },
    /// A ghost is created at `p` by a removed sink consuming in `eta`.
    Birth { p: f64 },
    /// The ghost at `q` vanishes because `eta` created where `sigma` jumped.
    MergeDeath { q: f64 },
    /// The ghost at `q` is consumed by a shared sink while `eta` is empty.
    SinkDeath { q: f64 },
}

fn classify_alpha(eta_kind: EventKind, sigma_kind: EventKind) -> Result<Option<GhostMove>> {
    match (eta_kind, sigma_kind) {
        (EventKind::AlphaJump { from: p, .. }, EventKind::AlphaJump { from: q, .. }) => {
            if q == p {
                Ok(None)
            } else if q < p {
                Ok(Some(GhostMove::Shift { q, p }))
            } else {
                Err(Error::InvalidInput(
                    "sigma jumped from further right than eta; logs are not coupled".into(),
                ))
            }
        }
        (EventKind::AlphaCreate { .. }, EventKind::AlphaJump { from: q, .. }) => {
            Ok(Some(GhostMove::MergeDeath { q }))
        }
        (EventKind::AlphaCreate { .. }, EventKind::AlphaCreate { .. }) => Ok(None),
        _ => Err(Error::InvalidInput(
            "inconsistent alpha events in coupled logs".into(),
        )),
    }
}

fn classify_shared_sink(eta_kind: EventKind, sigma_kind: EventKind) -> Result<Option<GhostMove>> {
    match (eta_kind, sigma_kind) {
        (EventKind::SinkConsume { from: p }, EventKind::SinkConsume { from: q }) => {
            if q == p {
                Ok(None)
            } else if q < p {
                Ok(Some(GhostMove::Shift { q, p }))
            } else {
                Err(Error::InvalidInput(
                    "sigma consumed further right than eta; logs are not coupled".into(),
                ))
            }
        }
        (EventKind::SinkVoid, EventKind::SinkConsume { from: q }) => {
            Ok(Some(GhostMove::SinkDeath { q }))
        }
        (EventKind::SinkVoid, EventKind::SinkVoid) => Ok(None),
        _ => Err(Error::InvalidInput(
            "inconsistent sink events in coupled logs".into(),
        )),
    }
}

/// The ordered ghost family plus the tracked member `Z`.
struct FamilyTracker {
    ghosts: Config,
    z: GhostState,
    jumps: Vec<(f64, f64)>,
    absorbed_at: Option<f64>,
}

impl FamilyTracker {
    fn new(t1: f64, initial: &[f64], capacity_hint: usize) -> Self {
        FamilyTracker {
            ghosts: Config::from_sorted(t1, initial, capacity_hint.max(16)),
            z: GhostState::NotBorn,
            jumps: Vec::new(),
            absorbed_at: None,
        }
    }

    fn apply(&mut self, time: f64, mv: GhostMove) {
        match mv {
            GhostMove::Shift { q, p } => {
                if let GhostState::At(z) = self.z {
                    if q <= z && z < p {
                        // Order-preserving relabelling: every ghost in
                        // [q, p) moves to its successor, the last one to p.
                        let next = self.ghosts.succ_gt(z).filter(|&g| g < p).unwrap_or(p);
                        self.z = GhostState::At(next);
                        self.jumps.push((time, next));
                    }
                }
                let removed = self.ghosts.remove(q);
                debug_assert!(removed, "shift source must be a ghost");
                self.ghosts.insert(p);
            }
            GhostMove::Birth { p } => {
                self.ghosts.insert(p);
                if self.z == GhostState::NotBorn {
                    self.z = GhostState::At(p);
                    self.jumps.push((time, p));
                }
            }
            GhostMove::MergeDeath { q } | GhostMove::SinkDeath { q } => {
                let removed = self.ghosts.remove(q);
                debug_assert!(removed, "dying ghost must be present");
                if self.z == GhostState::At(q) {
                    self.z = GhostState::Absorbed;
                    self.absorbed_at = Some(time);
                }
            }
        }
    }

    fn finish(self) -> Trajectory {
        Trajectory {
            jumps: self.jumps,
            absorbed_at: self.absorbed_at,
        }
    }
}

/// Track `Z`, the second-class particle of `sigma` with respect to `eta`
/// whose path leaves the vertical axis through the smallest consuming
/// removed sink. When no removed sink consumes, the trajectory stays at 0.
pub fn track_z(pair: &CoupledPair, eta: &EventLog, sigma: &EventLog) -> Result<Trajectory> {
    if eta.inputs() != &pair.eta_inputs || sigma.inputs() != &pair.sigma_inputs {
        return Err(Error::InvalidInput(
            "logs do not correspond to the coupled pair".into(),
        ));
    }
    check_coupled(eta, sigma)?;
    let removed = pair.removed_sinks.as_slice();
    let mut tracker = FamilyTracker::new(
        eta.inputs().t1(),
        pair.added_sources.as_slice(),
        pair.added_sources.len() + removed.len(),
    );

    let eta_events = eta.events();
    let sigma_events = sigma.events();
    let mut j = 0usize;
    for ev in eta_events {
        let is_removed = removed
            .binary_search_by(|p| p.partial_cmp(&ev.time).unwrap())
            .is_ok();
        let mv = if is_removed {
            match ev.kind {
                EventKind::SinkConsume { from } => Some(GhostMove::Birth { p: from }),
                EventKind::SinkVoid => None,
                _ => {
                    return Err(Error::InvalidInput(
                        "removed sink time carries a non-sink event".into(),
                    ))
                }
            }
        } else {
            let sev = sigma_events.get(j).ok_or_else(|| {
                Error::InvalidInput("sigma log ended before eta log".into())
            })?;
            if sev.time != ev.time {
                return Err(Error::InvalidInput(
                    "coupled logs disagree on shared event times".into(),
                ));
            }
            j += 1;
            match ev.kind {
                EventKind::AlphaJump { .. } | EventKind::AlphaCreate { .. } => {
                    classify_alpha(ev.kind, sev.kind)?
                }
                EventKind::SinkConsume { .. } | EventKind::SinkVoid => {
                    classify_shared_sink(ev.kind, sev.kind)?
                }
            }
        };
        if let Some(mv) = mv {
            tracker.apply(ev.time, mv);
        }
    }
    if j != sigma_events.len() {
        return Err(Error::InvalidInput(
            "sigma log has events the eta log lacks".into(),
        ));
    }
    Ok(tracker.finish())
}

/// Summary of one streamed coupled run.
#[derive(Debug, Clone)]
pub struct PairSummary {
    pub z: Trajectory,
    pub eta_consumed: usize,
    pub sigma_consumed: usize,
    pub eta_final: Vec<f64>,
    pub sigma_final: Vec<f64>,
    pub removed_count: usize,
    pub added_count: usize,
}

impl PairSummary {
    /// Flux through `x` at the final time.
    pub fn final_flux(&self, x: f64) -> i64 {
        let count = |v: &[f64]| v.iter().filter(|&&p| p > 0.0 && p <= x).count();
        flux_value(
            count(&self.sigma_final),
            self.sigma_consumed,
            count(&self.eta_final),
            self.eta_consumed,
        )
    }
}

/// Stream a full thick/thin coupled run without materializing logs.
/// `eta` is stationary `(gamma, 1/gamma)`; `sigma` adds sources of
/// intensity `delta - gamma` and keeps each sink with probability
/// `gamma/delta`.
pub fn run_coupled_pair(
    gamma: f64,
    delta: f64,
    t1: f64,
    t2: f64,
    stream: UnitStream,
) -> Result<PairSummary> {
    if !(gamma > 0.0 && delta >= gamma) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < gamma <= delta, got gamma={gamma} delta={delta}"
        )));
    }
    use rand::Rng;
    let base_sources = stationary_sources(gamma, t1, stream)?;
    let added = sample_poisson_1d(
        Interval::new(0.0, t1)?,
        delta - gamma,
        stream.child(4),
    )?;
    let mut sigma_sources = base_sources.clone();
    sigma_sources.extend(added.iter());
    sigma_sources.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let hint = (delta * t1) as usize + 64;
    let mut eta = Config::from_sorted(t1, &base_sources, hint);
    let mut sigma = Config::from_sorted(t1, &sigma_sources, hint);
    let mut tracker = FamilyTracker::new(t1, added.as_slice(), hint.min(4096));
    let mut coin = stream.child(5).rng();
    let keep_prob = gamma / delta;

    let mut eta_consumed = 0usize;
    let mut sigma_consumed = 0usize;
    let mut removed_count = 0usize;

    for (time, drive) in StationaryFeed::new(t1, t2, 1.0 / gamma, stream) {
        match drive {
            DriveEvent::Alpha { x } => {
                let p = eta.take_succ(x);
                eta.insert(x);
                let q = sigma.take_succ(x);
                sigma.insert(x);
                let eta_kind = match p {
                    Some(from) => EventKind::AlphaJump { from, to: x },
                    None => EventKind::AlphaCreate { at: x },
                };
                let sigma_kind = match q {
                    Some(from) => EventKind::AlphaJump { from, to: x },
                    None => EventKind::AlphaCreate { at: x },
                };
                if let Some(mv) = classify_alpha(eta_kind, sigma_kind)? {
                    tracker.apply(time, mv);
                }
            }
            DriveEvent::Sink => {
                let keep = coin.gen::<f64>() < keep_prob;
                if keep {
                    let p = eta.pop_min();
                    let q = sigma.pop_min();
                    if p.is_some() {
                        eta_consumed += 1;
                    }
                    if q.is_some() {
                        sigma_consumed += 1;
                    }
                    let eta_kind = match p {
                        Some(from) => EventKind::SinkConsume { from },
                        None => EventKind::SinkVoid,
                    };
                    let sigma_kind = match q {
                        Some(from) => EventKind::SinkConsume { from },
                        None => EventKind::SinkVoid,
                    };
                    if let Some(mv) = classify_shared_sink(eta_kind, sigma_kind)? {
                        tracker.apply(time, mv);
                    }
                } else {
                    removed_count += 1;
                    if let Some(from) = eta.pop_min() {
                        eta_consumed += 1;
                        tracker.apply(time, GhostMove::Birth { p: from });
                    }
                }
            }
        }
    }

    Ok(PairSummary {
        z: tracker.finish(),
        eta_consumed,
        sigma_consumed,
        eta_final: eta.into_sorted_vec(),
        sigma_final: sigma.into_sorted_vec(),
        removed_count,
        added_count: added.len(),
    })
}

// ---------------------------------------------------------------------------
// Pathwise checks.
// ---------------------------------------------------------------------------

fn event_position(kind: EventKind) -> Option<f64> {
    match kind {
        EventKind::AlphaJump { from, .. } => Some(from),
        EventKind::AlphaCreate { at } => Some(at),
        EventKind::SinkConsume { from } => Some(from),
        EventKind::SinkVoid => None,
    }
}

/// Check that the full run and its sink-free companion share all events in
/// the region strictly to the right of the isolated second-class path (the
/// sink influence stays on the other side of the wave). Events at or after
/// the trajectory's absorption time carry no claim.
pub fn verify_lemma22(
    log_full: &EventLog,
    log_nosinks: &EventLog,
    traj: &Trajectory,
) -> Result<bool> {
    if !log_nosinks.inputs().sinks().is_empty()
        || log_full.inputs().sources() != log_nosinks.inputs().sources()
        || log_full.inputs().alphas() != log_nosinks.inputs().alphas()
    {
        return Err(Error::InvalidInput(
            "companion log must share sources and alphas and carry no sinks".into(),
        ));
    }
    let horizon = traj.absorbed_at().unwrap_or(f64::INFINITY);
    let full = log_full.events();
    let nosinks = log_nosinks.events();
    let (mut i, mut j) = (0usize, 0usize);
    while i < full.len() || j < nosinks.len() {
        let tf = full.get(i).map_or(f64::INFINITY, |e| e.time);
        let tn = nosinks.get(j).map_or(f64::INFINITY, |e| e.time);
        if tf < tn {
            // Sink event of the full run only.
            let ev = &full[i];
            i += 1;
            if ev.time >= horizon {
                continue;
            }
            if let Some(pos) = event_position(ev.kind) {
                if matches!(ev.kind, EventKind::SinkConsume { .. })
                    && pos > traj.value_at(ev.time)
                {
                    return Ok(false);
                }
            }
        } else if tf == tn {
            let (ef, en) = (&full[i], &nosinks[j]);
            i += 1;
            j += 1;
            if ef.time >= horizon {
                continue;
            }
            let wave = traj.value_at(ef.time);
            let in_region = |k: EventKind| event_position(k).is_some_and(|p| p > wave);
            if (in_region(ef.kind) || in_region(en.kind)) && ef.kind != en.kind {
                return Ok(false);
            }
        } else {
            // The sink-free run has an event at a time the full run lacks;
            // inputs share alpha times, so this cannot happen.
            return Err(Error::InvalidInput(
                "companion log has an event time the full log lacks".into(),
            ));
        }
    }
    Ok(true)
}

/// Check the staircase ordering between the upward particle `X` and the
/// left-to-right particle `X'` from the same realization: `X(X'(x)) <= x`
/// on the union of jump abscissae of both trajectories plus the horizon.
pub fn verify_ordering(x_traj: &Trajectory, xprime_traj: &Trajectory, x_horizon: f64) -> bool {
    let mut grid: Vec<f64> = xprime_traj.jumps().iter().map(|&(x, _)| x).collect();
    grid.extend(x_traj.jumps().iter().map(|&(_, v)| v));
    grid.push(0.0);
    grid.push(x_horizon);
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();
    for &x in &grid {
        if x > x_horizon {
            break;
        }
        let t = xprime_traj.value_at(x);
        if x_traj.value_at(t) > x {
            return false;
        }
    }
    true
}
