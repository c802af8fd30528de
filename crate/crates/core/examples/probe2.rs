use std::time::Instant;
use hammersley_core::engine::*;
use hammersley_core::generator::*;
use hammersley_core::paths::*;
use hammersley_core::point_process::*;
use hammersley_core::scenario::*;
use hammersley_core::stats::*;
use hammersley_core::stream::UnitStream;

fn main() {
    // Burke suite: lambda=1, T=50, 200 reps
    let t0 = Instant::now();
    let base = UnitStream::new(810_000, 0);
    let tallies: Vec<BoundaryTally> = replicate(base, 200, |_, s| {
        let inp = stationary_inputs(1.0, 50.0, 50.0, s).unwrap();
        evolve(&inp).boundary()
    });
    let beta_counts: Vec<u64> = tallies.iter().map(|t| t.beta.len() as u64).collect();
    let disp = dispersion_test(&beta_counts, 2500.0).unwrap();
    let pooled_beta = Points2D::new(tallies.iter().flat_map(|t| t.beta.iter()).collect()).unwrap();
    let chi = chi2_uniform(&pooled_beta, Rect::anchored(50.0, 50.0).unwrap(), (5, 5)).unwrap();
    let east: Vec<Points1D> = tallies.iter().map(|t| t.east_entries.clone()).collect();
    let north: Vec<Points1D> = tallies.iter().map(|t| t.north_exits.clone()).collect();
    let iv = Interval::new(0.0, 50.0).unwrap();
    let ks_e = ks_exponential(&pooled_gaps(&east, iv), 1.0).unwrap();
    let ks_n = ks_exponential(&pooled_gaps(&north, iv), 1.0).unwrap();
    let bc: Vec<f64> = beta_counts.iter().map(|&c| c as f64).collect();
    let ec: Vec<f64> = east.iter().map(|e| e.len() as f64).collect();
    let nc: Vec<f64> = north.iter().map(|n| n.len() as f64).collect();
    let c1 = independence_corr(&bc, &ec).unwrap();
    let c2 = independence_corr(&bc, &nc).unwrap();
    let c3 = independence_corr(&ec, &nc).unwrap();
    println!("burke: disp p={:.3} chi p={:.3} ksE p={:.3} ksN p={:.3} corr p=({:.3},{:.3},{:.3}) ({:?})",
        disp.p_value, chi.p_value, ks_e.p_value, ks_n.p_value, c1.p_value, c2.p_value, c3.p_value, t0.elapsed());

    // duality at the four (a,b) combos, 1e5 samples
    let t0 = Instant::now();
    for a in [0.5, 1.0] {
        for b in [0.5, 1.0] {
            let f = exp_sum_functional(a);
            let g = exp_sum_functional(b);
            let (m, se) = duality_gap(&f, &g, 1.0, 2.0, 100_000, UnitStream::new(820_000 + (a*10.0) as u64 + (b*100.0) as u64, 0)).unwrap();
            println!("duality a={a} b={b}: |mean|/se = {:.2}", m.abs() / se);
        }
    }
    println!("duality time {:?}", t0.elapsed());

    // local-poisson: a=1, t=1000, w=50, 100 reps
    let t0 = Instant::now();
    let windows: Vec<Points1D> = replicate(UnitStream::new(830_000, 0), 100, |_, s| {
        let run = run_empty_start(1075.0, 1000.0, &[], s);
        let pos: Vec<f64> = run.final_config.positions().iter().copied().filter(|&x| (950.0..=1050.0).contains(&x)).collect();
        Points1D::new(pos).unwrap()
    });
    let ivw = Interval::new(950.0, 1050.0).unwrap();
    let gaps = pooled_gaps(&windows, ivw);
    let ks = ks_exponential(&gaps, 1.0).unwrap();
    println!("local-poisson: n_gaps={} D={:.4} p={:.3} ({:?})", gaps.len(), ks.statistic, ks.p_value, t0.elapsed());

    // ulam trend, 200 reps at t in {250, 500, 1000}
    let t0 = Instant::now();
    let mut means = Vec::new();
    for (i, t) in [250.0, 500.0, 1000.0].iter().enumerate() {
        let finals: Vec<usize> = replicate(UnitStream::new(840_000 + i as u64, 0), 200, |_, s| {
            run_empty_start(*t, *t, &[], s).final_config.len()
        });
        means.push(finals.iter().sum::<usize>() as f64 / 200.0 / t);
    }
    println!("ulam L(t,t)/t means: {:?} ({:?})", means, t0.elapsed());

    // stationary weak length == 2t, t=100, 200 reps
    let t0 = Instant::now();
    let lens: Vec<usize> = replicate(UnitStream::new(850_000, 0), 200, |_, s| {
        let boxr = Rect::anchored(100.0, 100.0).unwrap();
        let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
        let sources = sample_poisson_1d(Interval::new(0.0, 100.0).unwrap(), 1.0, s.child(1)).unwrap();
        let sinks = sample_poisson_1d(Interval::new(0.0, 100.0).unwrap(), 1.0, s.child(2)).unwrap();
        let w = WeakPathInstance::new(interior, sources, sinks, (100.0, 100.0)).unwrap();
        lis_weak(&w)
    });
    let mean = lens.iter().sum::<usize>() as f64 / 200.0;
    let var = lens.iter().map(|&l| (l as f64 - mean).powi(2)).sum::<f64>() / 199.0;
    let se = (var / 200.0).sqrt();
    println!("stationary weak mean {mean:.2} (target 200) se {se:.2} z {:.2} ({:?})", (mean-200.0)/se, t0.elapsed());

    // weak-path departure medians at t=200 vs t=2000 (reduced reps probe)
    let t0 = Instant::now();
    let dep = |t: f64, seed: u64, reps: u64| -> Vec<f64> {
        replicate(UnitStream::new(seed, 0), reps, |_, s| {
            let boxr = Rect::anchored(t, t).unwrap();
            let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
            let sources = sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(1)).unwrap();
            let sinks = sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(2)).unwrap();
            let w = WeakPathInstance::new(interior, sources, sinks, (t, t)).unwrap();
            weak_axis_departure(&w) / t
        })
    };
    let mut d200 = dep(200.0, 860_000, 100);
    let mut d2000 = dep(2000.0, 861_000, 20);
    d200.sort_by(|a, b| a.partial_cmp(b).unwrap());
    d2000.sort_by(|a, b| a.partial_cmp(b).unwrap());
    println!("departure medians: t=200 -> {:.4}, t=2000 -> {:.4} ({:?})", d200[d200.len()/2], d2000[d2000.len()/2], t0.elapsed());
}
