//! Acceptance suite: one test per verification criterion, every tolerance
//! pinned in code, every random input drawn from a fixed seed so the whole
//! suite is deterministic. Run with `--nocapture` to see one line per
//! criterion.

use hammersley_core::coupling::{
    isolated_second_class, make_coupled_pair, run_coupled_pair, run_isolated_second_class,
    second_class_lr, track_z, verify_lemma22, verify_ordering, CoupledPair, CouplingMode,
    CouplingSpec,
};
use hammersley_core::engine::{evolve, time_reverse_check, EventLog, SimInputs};
use hammersley_core::generator::{
    adjoint_apply, duality_gap, exp_sum_functional, generator_apply, sample_mu,
};
use hammersley_core::paths::{
    check_lis_equals_crossings, lis_bruteforce, lis_patience, lis_weak, weak_axis_departure,
    WeakPathInstance,
};
use hammersley_core::point_process::{
    sample_poisson_1d, sample_poisson_2d, Interval, Point2, Points1D, Points2D, Rect,
};
use hammersley_core::scenario::{replicate, run_empty_start, stationary_inputs};
use hammersley_core::stats::{
    chi2_uniform, dispersion_test, independence_corr, ks_exponential, pooled_gaps,
    vt_rows_from_counts,
};
use hammersley_core::stream::UnitStream;

fn criterion(name: &str, ok: bool, detail: &str) {
    if ok {
        println!("[PASS] {name}: {detail}");
    } else {
        println!("[FAIL] {name}: {detail}");
        panic!("{name} failed: {detail}");
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v[v.len() / 2]
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn c01_lis_ground_truth() {
    let pi = [5.0, 3.0, 6.0, 2.0, 8.0, 7.0, 1.0, 4.0, 9.0];
    let pts = Points2D::new(
        pi.iter()
            .enumerate()
            .map(|(i, &v)| Point2::new((i + 1) as f64, v))
            .collect(),
    )
    .unwrap();
    let got = lis_patience(&pts);
    criterion(
        "criterion 1 (longest-chain ground truth)",
        got == 4,
        &format!("permutation (5 3 6 2 8 7 1 4 9) -> {got}, expected 4"),
    );
}

#[test]
fn c02_patience_equals_bruteforce() {
    let mut tested = 0u64;
    let mut k = 0u64;
    while tested < 10_000 {
        let p = sample_poisson_2d(
            Rect::anchored(1.0, 1.0).unwrap(),
            6.0,
            UnitStream::new(20_200, k),
        )
        .unwrap();
        k += 1;
        if p.len() > 12 {
            continue;
        }
        let fast = lis_patience(&p);
        let slow = lis_bruteforce(&p).unwrap();
        assert_eq!(fast, slow, "instance {k}: patience {fast} vs brute {slow}");
        tested += 1;
    }
    criterion(
        "criterion 2 (oracle equivalence)",
        true,
        "patience = brute force on 10000 instances with at most 12 points",
    );
}

#[test]
fn c03_weak_path_equals_crossings() {
    let lambdas = [(0.5f64, 3334u64), (1.0, 3333), (2.0, 3333)];
    for (li, (lambda, reps)) in lambdas.iter().enumerate() {
        let oks = replicate(UnitStream::new(20_300 + li as u64, 0), *reps, |r, s| {
            let boxr = Rect::anchored(20.0, 20.0).unwrap();
            let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
            let sources =
                sample_poisson_1d(Interval::new(0.0, 20.0).unwrap(), *lambda, s.child(1)).unwrap();
            let sinks =
                sample_poisson_1d(Interval::new(0.0, 20.0).unwrap(), 1.0 / lambda, s.child(2))
                    .unwrap();
            let ok = check_lis_equals_crossings(&interior, &sources, &sinks, boxr).unwrap();
            (r, ok)
        });
        for (r, ok) in &oks {
            assert!(ok, "lambda {lambda}, replication {r}");
        }
    }
    criterion(
        "criterion 3 (weak path = box crossings)",
        true,
        "exact on 10000 stationary instances, lambda in {0.5, 1, 2}, 20 x 20",
    );
}

#[test]
fn c04_time_reversal_involution() {
    let lambdas = [(0.5f64, 334u64), (1.0, 333), (2.0, 333)];
    for (li, (lambda, reps)) in lambdas.iter().enumerate() {
        let oks = replicate(UnitStream::new(20_400 + li as u64, 0), *reps, |r, s| {
            let inp = stationary_inputs(*lambda, 30.0, 30.0, s).unwrap();
            (r, time_reverse_check(&evolve(&inp)))
        });
        for (r, ok) in &oks {
            assert!(ok, "lambda {lambda}, replication {r}");
        }
    }
    criterion(
        "criterion 4 (time-reversal involution)",
        true,
        "exact on 1000 stationary runs, 30 x 30, lambda in {0.5, 1, 2}",
    );
}

/// Counting-measure domination: every order statistic of the denser run
/// sits at or left of its counterpart.
fn dominates(sigma: &[f64], eta: &[f64]) -> bool {
    sigma.len() >= eta.len() && eta.iter().zip(sigma).all(|(e, s)| s <= e)
}

fn coupled_pair(seed_base: u64, r: u64, t1: f64, t2: f64) -> (CoupledPair, EventLog, EventLog) {
    let base = stationary_inputs(1.0, t1, t2, UnitStream::new(seed_base, r)).unwrap();
    let spec = CouplingSpec::new(1.0, 1.5, CouplingMode::ThickenSources).unwrap();
    let pair = make_coupled_pair(&base, spec, UnitStream::new(seed_base + 1, r)).unwrap();
    let eta = evolve(&pair.eta_inputs);
    let sigma = evolve(&pair.sigma_inputs);
    (pair, eta, sigma)
}

#[test]
fn c05_pathwise_couplings() {
    // Count domination between the lean and dense runs, at every event
    // time of either run.
    let oks = replicate(UnitStream::new(0, 0), 1000, |r, _| {
        let (_, eta, sigma) = coupled_pair(20_500, r, 25.0, 25.0);
        let mut sigma_states: Vec<(f64, Vec<f64>)> = vec![(0.0, sigma.inputs().sources().as_slice().to_vec())];
        sigma.walk_states(|ev, state| sigma_states.push((ev.time, state.to_vec())));
        let mut eta_states: Vec<(f64, Vec<f64>)> = vec![(0.0, eta.inputs().sources().as_slice().to_vec())];
        eta.walk_states(|ev, state| eta_states.push((ev.time, state.to_vec())));
        let mut times: Vec<f64> = sigma_states.iter().map(|s| s.0).collect();
        times.extend(eta_states.iter().map(|s| s.0));
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let state_at = |states: &[(f64, Vec<f64>)], t: f64| -> Vec<f64> {
            let i = states.partition_point(|s| s.0 <= t);
            states[i - 1].1.clone()
        };
        times
            .iter()
            .all(|&t| dominates(&state_at(&sigma_states, t), &state_at(&eta_states, t)))
    });
    for (r, ok) in oks.iter().enumerate() {
        assert!(ok, "count domination failed on replication {r}");
    }

    // The removed-sink particle never overtakes the isolated one.
    let oks = replicate(UnitStream::new(0, 0), 1000, |r, _| {
        let (pair, eta, sigma) = coupled_pair(20_510, r, 50.0, 25.0);
        let x = isolated_second_class(&eta);
        let z = track_z(&pair, &eta, &sigma).unwrap();
        let horizon = x.absorbed_at().unwrap_or(f64::INFINITY);
        let mut times: Vec<f64> = z.jumps().iter().map(|j| j.0).collect();
        times.extend(x.jumps().iter().map(|j| j.0));
        times
            .iter()
            .filter(|&&t| t < horizon)
            .all(|&t| z.value_at(t) <= x.value_at(t))
    });
    for (r, ok) in oks.iter().enumerate() {
        assert!(ok, "Z <= X failed on replication {r}");
    }

    // Staircase ordering of the upward and left-to-right particles.
    let lambdas = [(0.5f64, 334u64), (1.0, 333), (2.0, 333)];
    for (li, (lambda, reps)) in lambdas.iter().enumerate() {
        let oks = replicate(UnitStream::new(20_520 + li as u64, 0), *reps, |r, s| {
            let inp = stationary_inputs(*lambda, 30.0, 30.0, s).unwrap();
            let log = evolve(&inp);
            let x = isolated_second_class(&log);
            let xp = second_class_lr(&inp);
            (r, verify_ordering(&x, &xp, inp.t1()))
        });
        for (r, ok) in &oks {
            assert!(ok, "ordering failed: lambda {lambda}, replication {r}");
        }
    }

    // Sink-free companion shares all events on the stationary side of the
    // isolated particle's path.
    let oks = replicate(UnitStream::new(20_530, 0), 1000, |r, s| {
        let inp = stationary_inputs(1.0, 30.0, 12.0, s).unwrap();
        let log = evolve(&inp);
        let companion = SimInputs::new(
            inp.t1(),
            inp.t2(),
            inp.sources().clone(),
            Points1D::empty(),
            inp.alphas().clone(),
            inp.lambda_meta(),
        )
        .unwrap();
        let traj = isolated_second_class(&log);
        (r, verify_lemma22(&log, &evolve(&companion), &traj).unwrap())
    });
    for (r, ok) in &oks {
        assert!(ok, "wave separation failed on replication {r}");
    }

    criterion(
        "criterion 5 (pathwise couplings)",
        true,
        "domination, Z <= X, X(X'(x)) <= x and wave separation exact on 1000 seeds each",
    );
}

#[test]
fn c06_isolated_particle_speed() {
    // The particle travels at speed 1/lambda^2; boxes leave room so it
    // never reaches the East side.
    let cases = [
        (1.0f64, 3400.0f64, 0.95f64, 1.05f64, 20_601u64),
        (2.0, 1200.0, 0.22, 0.28, 20_602),
        (0.5, 13500.0, 3.6, 4.4, 20_605),
    ];
    for (lambda, t1, lo, hi, seed) in cases {
        let t = 2000.0;
        let slopes = replicate(UnitStream::new(seed, 0), 100, |_, s| {
            let traj = run_isolated_second_class(lambda, t1, t, s).unwrap();
            assert!(
                traj.absorbed_at().is_none(),
                "trajectory reached the box edge; widen the box"
            );
            traj.value_at(t) / t
        });
        let (mean, se) = mean_se(&slopes);
        criterion(
            "criterion 6 (isolated particle speed)",
            (lo..=hi).contains(&mean),
            &format!(
                "lambda {lambda}: mean X_t/t = {mean:.4} (se {se:.4}) in [{lo}, {hi}], t = {t}, 100 reps"
            ),
        );
    }
}

#[test]
fn c07_thick_thin_coupling_and_flux() {
    let (gamma, delta, t) = (1.0f64, 1.5f64, 2000.0f64);
    let summaries = replicate(UnitStream::new(20_700, 0), 100, |_, s| {
        run_coupled_pair(gamma, delta, 4000.0, t, s).unwrap()
    });
    let z_slopes: Vec<f64> = summaries
        .iter()
        .map(|sm| {
            assert!(sm.z.absorbed_at().is_none(), "Z absorbed; widen the box");
            assert!(sm.removed_count > 0, "no removed sinks in realization");
            sm.z.value_at(t) / t
        })
        .collect();
    let (z_mean, z_se) = mean_se(&z_slopes);
    let z_target = 1.0 / (gamma * delta);
    criterion(
        "criterion 7a (removed-sink particle speed)",
        (z_mean - z_target).abs() <= 0.1 * z_target,
        &format!("mean Z_t/t = {z_mean:.4} (se {z_se:.4}) within 10% of {z_target:.4}"),
    );

    let limit = |x: f64| 1.0 / delta - 1.0 / gamma + x * (delta - gamma);
    for x in [0.25, 0.5, 1.0, 2.0] {
        let vals: Vec<f64> = summaries
            .iter()
            .map(|sm| sm.final_flux(x * t) as f64 / t)
            .collect();
        let (mean, se) = mean_se(&vals);
        criterion(
            "criterion 7b (flux table)",
            (mean - limit(x)).abs() <= 3.0 * se,
            &format!(
                "x = {x}: mean F(xt, t)/t = {mean:.5} vs limit {:.5} (se {se:.5})",
                limit(x)
            ),
        );
    }
}

#[test]
fn c08_burke_outputs() {
    let tallies = replicate(UnitStream::new(20_800, 0), 200, |_, s| {
        evolve(&stationary_inputs(1.0, 50.0, 50.0, s).unwrap()).boundary()
    });
    let beta_counts: Vec<u64> = tallies.iter().map(|t| t.beta.len() as u64).collect();
    let disp = dispersion_test(&beta_counts, 2500.0).unwrap();
    criterion(
        "criterion 8 (corner count dispersion)",
        disp.pass,
        &format!("beta counts vs Poisson(2500): p = {:.4}", disp.p_value),
    );

    let pooled = Points2D::new(tallies.iter().flat_map(|t| t.beta.iter()).collect()).unwrap();
    let chi = chi2_uniform(&pooled, Rect::anchored(50.0, 50.0).unwrap(), (5, 5)).unwrap();
    criterion(
        "criterion 8 (corner uniformity)",
        chi.pass,
        &format!("5x5 chi-square: p = {:.4}", chi.p_value),
    );

    let iv = Interval::new(0.0, 50.0).unwrap();
    let east: Vec<Points1D> = tallies.iter().map(|t| t.east_entries.clone()).collect();
    let north: Vec<Points1D> = tallies.iter().map(|t| t.north_exits.clone()).collect();
    let ks_east = ks_exponential(&pooled_gaps(&east, iv), 1.0).unwrap();
    criterion(
        "criterion 8 (east entries)",
        ks_east.pass,
        &format!("gap KS vs Exp(1): p = {:.4}", ks_east.p_value),
    );
    let ks_north = ks_exponential(&pooled_gaps(&north, iv), 1.0).unwrap();
    criterion(
        "criterion 8 (north exits)",
        ks_north.pass,
        &format!("gap KS vs Exp(1): p = {:.4}", ks_north.p_value),
    );

    let bc: Vec<f64> = beta_counts.iter().map(|&c| c as f64).collect();
    let ec: Vec<f64> = east.iter().map(|e| e.len() as f64).collect();
    let nc: Vec<f64> = north.iter().map(|n| n.len() as f64).collect();
    for (label, a, b) in [
        ("beta/east", &bc, &ec),
        ("beta/north", &bc, &nc),
        ("east/north", &ec, &nc),
    ] {
        let rep = independence_corr(a, b).unwrap();
        criterion(
            "criterion 8 (independence)",
            rep.pass,
            &format!("{label} correlation {:.4}: p = {:.4}", rep.statistic, rep.p_value),
        );
    }
}

#[test]
fn c09_generator_duality() {
    // Constants are annihilated exactly.
    let one = |_: &hammersley_core::engine::ParticleConfig| 1.0;
    for k in 0..20u64 {
        let c = sample_mu(1.0, 2.0, UnitStream::new(20_900, k)).unwrap();
        assert_eq!(generator_apply(&one, &c, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(adjoint_apply(&one, &c, 1.0, 2.0).unwrap(), 0.0);
    }
    criterion(
        "criterion 9 (constants)",
        true,
        "G1 = G*1 = 0 exactly on 20 sampled configurations",
    );

    for (i, a) in [0.5, 1.0].into_iter().enumerate() {
        for (j, b) in [0.5, 1.0].into_iter().enumerate() {
            let f = exp_sum_functional(a);
            let g = exp_sum_functional(b);
            let (mean, se) = duality_gap(
                &f,
                &g,
                1.0,
                2.0,
                100_000,
                UnitStream::new(20_910 + 2 * i as u64 + j as u64, 0),
            )
            .unwrap();
            criterion(
                "criterion 9 (adjoint duality)",
                mean.abs() <= 3.0 * se,
                &format!(
                    "a = {a}, b = {b}: mean(Gf.g - f.G*g) = {mean:.2e}, 3se = {:.2e}, 100000 samples",
                    3.0 * se
                ),
            );
        }
    }
}

#[test]
fn c10_local_poisson_window() {
    // Empty-start process at height t = 1000; particle gaps in the window
    // [t-50, t+50] pooled across 100 replications match Exp(1).
    let windows = replicate(UnitStream::new(21_000, 0), 100, |_, s| {
        let run = run_empty_start(1075.0, 1000.0, &[], s);
        Points1D::new(
            run.final_config
                .positions()
                .iter()
                .copied()
                .filter(|&x| (950.0..=1050.0).contains(&x))
                .collect(),
        )
        .unwrap()
    });
    let gaps = pooled_gaps(&windows, Interval::new(950.0, 1050.0).unwrap());
    let ks = ks_exponential(&gaps, 1.0).unwrap();
    criterion(
        "criterion 10 (local Poisson window)",
        ks.pass,
        &format!(
            "{} pooled gaps vs Exp(1): D = {:.4}, p = {:.4}",
            gaps.len(),
            ks.statistic,
            ks.p_value
        ),
    );
}

#[test]
fn c11_path_length_limits() {
    // Stationary identity: the longest weak path to (t, t) averages 2t.
    let t = 100.0;
    let lens = replicate(UnitStream::new(851_000, 0), 200, |_, s| {
        let boxr = Rect::anchored(t, t).unwrap();
        let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
        let sources =
            sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(1)).unwrap();
        let sinks = sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(2)).unwrap();
        let w = WeakPathInstance::new(interior, sources, sinks, (t, t)).unwrap();
        lis_weak(&w) as f64
    });
    let (mean, se) = mean_se(&lens);
    criterion(
        "criterion 11a (stationary weak-path mean)",
        (mean - 2.0 * t).abs() <= 3.0 * se,
        &format!("mean {mean:.2} vs 2t = {}, se {se:.2}, 200 reps", 2.0 * t),
    );

    // Empty-start longest-path means rise towards 2.
    let mut means = Vec::new();
    for (i, t) in [250.0f64, 500.0, 1000.0].iter().enumerate() {
        let finals = replicate(UnitStream::new(21_110 + i as u64, 0), 200, |_, s| {
            run_empty_start(*t, *t, &[], s).final_config.len() as f64 / t
        });
        means.push(mean_se(&finals).0);
    }
    criterion(
        "criterion 11b (empty-start trend)",
        means[0] < means[1] && means[1] < means[2] && (1.80..=2.00).contains(&means[2]),
        &format!(
            "mean L(t,t)/t = {:.4}, {:.4}, {:.4} at t = 250, 500, 1000; last in [1.80, 2.00]",
            means[0], means[1], means[2]
        ),
    );
}

#[test]
fn c12_axis_departure_vanishes() {
    let departures = |t: f64, seed: u64| -> Vec<f64> {
        replicate(UnitStream::new(seed, 0), 100, |_, s| {
            let boxr = Rect::anchored(t, t).unwrap();
            let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
            let sources =
                sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(1)).unwrap();
            let sinks =
                sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(2)).unwrap();
            let w = WeakPathInstance::new(interior, sources, sinks, (t, t)).unwrap();
            weak_axis_departure(&w) / t
        })
    };
    let med_small = median(departures(200.0, 21_200));
    let med_large = median(departures(2000.0, 21_201));
    criterion(
        "criterion 12 (axis departure trend)",
        med_large < med_small,
        &format!(
            "median departure/t: {med_small:.4} at t = 200 vs {med_large:.4} at t = 2000, 100 reps each"
        ),
    );
}

#[test]
fn c13_alpha_beta_balance() {
    let t = 1000.0;
    let grid = [(1.0, 1.0), (4.0, 1.0), (1.0, 4.0)];
    let rects: Vec<(f64, f64)> = grid.iter().map(|&(x, y)| (t * x, t * y)).collect();
    let reps = 8u64;
    let runs = replicate(UnitStream::new(21_300, 0), reps, |_, s| {
        let run = run_empty_start(4.0 * t, 4.0 * t, &rects, s);
        (run.alpha_counts, run.beta_counts)
    });
    for (g, &(x, y)) in grid.iter().enumerate() {
        let vals: Vec<f64> = runs
            .iter()
            .map(|(a, b)| vt_rows_from_counts(&[a[g]], &[b[g]], t, &[(x, y)])[0].value)
            .collect();
        let (mean, _) = mean_se(&vals);
        let reference = 2.0 * (x * y).sqrt();
        criterion(
            "criterion 13 (alpha-beta balance)",
            (mean - reference).abs() <= 0.1 * reference,
            &format!("(x, y) = ({x}, {y}): mean {mean:.4} within 10% of {reference}"),
        );
    }
}
