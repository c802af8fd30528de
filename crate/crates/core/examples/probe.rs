use std::time::Instant;
use hammersley_core::coupling::*;
use hammersley_core::engine::*;
use hammersley_core::paths::*;
use hammersley_core::point_process::*;
use hammersley_core::scenario::*;
use hammersley_core::stream::UnitStream;

fn main() {
    // 1) time-reversal at criterion-4 geometry, void-heavy lambda=0.5
    let t0 = Instant::now();
    let mut fails = 0;
    for (li, lambda) in [0.5, 1.0, 2.0].iter().enumerate() {
        for seed in 0..120u64 {
            let inp = stationary_inputs(*lambda, 30.0, 30.0, UnitStream::new(100_000 + li as u64, seed)).unwrap();
            let log = evolve(&inp);
            if !time_reverse_check(&log) { fails += 1; if fails < 3 { println!("REVERSAL FAIL lambda={lambda} seed={seed}"); } }
        }
    }
    println!("reversal sweep: {fails} failures in 360 runs ({:?})", t0.elapsed());

    // 2) lemma22 + ordering + Z<=X at small-but-voidy geometries
    let t0 = Instant::now();
    let mut f22 = 0; let mut ford = 0; let mut fzx = 0;
    for seed in 0..150u64 {
        let inp = stationary_inputs(1.0, 30.0, 12.0, UnitStream::new(200_000, seed)).unwrap();
        let log = evolve(&inp);
        let nos = SimInputs::new(30.0, 12.0, inp.sources().clone(), Points1D::empty(), inp.alphas().clone(), 1.0).unwrap();
        let traj = isolated_second_class(&log);
        if !verify_lemma22(&log, &evolve(&nos), &traj).unwrap() { f22 += 1; }

        let inp2 = stationary_inputs(0.5, 30.0, 30.0, UnitStream::new(201_000, seed)).unwrap();
        let log2 = evolve(&inp2);
        let x = isolated_second_class(&log2);
        let xp = second_class_lr(&inp2);
        if !verify_ordering(&x, &xp, 30.0) { ford += 1; if ford < 3 { println!("ORD FAIL seed={seed}"); } }

        let base = stationary_inputs(1.0, 50.0, 25.0, UnitStream::new(202_000, seed)).unwrap();
        let spec = CouplingSpec::new(1.0, 1.5, CouplingMode::ThickenSources).unwrap();
        let pair = make_coupled_pair(&base, spec, UnitStream::new(203_000, seed)).unwrap();
        let eta = evolve(&pair.eta_inputs);
        let sig = evolve(&pair.sigma_inputs);
        let x2 = isolated_second_class(&eta);
        let z = track_z(&pair, &eta, &sig).unwrap();
        let hor = x2.absorbed_at().unwrap_or(f64::INFINITY);
        let mut ts: Vec<f64> = z.jumps().iter().map(|j| j.0).collect();
        ts.extend(x2.jumps().iter().map(|j| j.0));
        if ts.iter().filter(|&&t| t < hor).any(|&t| z.value_at(t) > x2.value_at(t)) { fzx += 1; }
    }
    println!("lemma22 {f22}/150, ordering {ford}/150, z<=x {fzx}/150 fails ({:?})", t0.elapsed());

    // 3) throughput: single streamed X run lambda=0.5 box 9200x2000
    let t0 = Instant::now();
    let traj = run_isolated_second_class(0.5, 9200.0, 2000.0, UnitStream::new(300_000, 0)).unwrap();
    println!("X run lambda=0.5: X_2000/2000 = {:.3}, absorbed={:?}, {:?}", traj.last_value()/2000.0, traj.absorbed_at(), t0.elapsed());

    // 4) throughput: coupled pair gamma=1 delta=1.5 box 4000x2000
    let t0 = Instant::now();
    let s = run_coupled_pair(1.0, 1.5, 4000.0, 2000.0, UnitStream::new(301_000, 0)).unwrap();
    println!("pair run: Z/t = {:.3} flux(2000)/2000 = {:.4}, {:?}", s.z.value_at(2000.0)/2000.0, s.final_flux(2000.0) as f64/2000.0, t0.elapsed());

    // 5) empty start 1000x1000 + 4000x4000 counts
    let t0 = Instant::now();
    let r = run_empty_start(1000.0, 1000.0, &[], UnitStream::new(302_000, 0));
    println!("empty 1000^2: L(t,t)/t = {:.3}, {:?}", r.final_config.len() as f64 / 1000.0, t0.elapsed());
    let t0 = Instant::now();
    let r = run_empty_start(4000.0, 4000.0, &[(1000.0,1000.0),(4000.0,1000.0),(1000.0,4000.0)], UnitStream::new(303_000, 0));
    let v: Vec<f64> = r.alpha_counts.iter().zip(&r.beta_counts).map(|(&a,&b)| (a as f64-b as f64)/1000.0).collect();
    println!("empty 4000^2 vt: {:?} (want ~[2,4,4]), {:?}", v, t0.elapsed());

    // 6) weak instance t=2000 timing
    let t0 = Instant::now();
    let s = UnitStream::new(304_000, 0);
    let interior = sample_poisson_2d(Rect::anchored(2000.0, 2000.0).unwrap(), 1.0, s.child(0)).unwrap();
    let sources = sample_poisson_1d(Interval::new(0.0, 2000.0).unwrap(), 1.0, s.child(1)).unwrap();
    let sinks = sample_poisson_1d(Interval::new(0.0, 2000.0).unwrap(), 1.0, s.child(2)).unwrap();
    println!("  sample: {:?}", t0.elapsed());
    let t1 = Instant::now();
    let w = WeakPathInstance::new(interior, sources, sinks, (2000.0, 2000.0)).unwrap();
    let dep = weak_axis_departure(&w);
    println!("weak t=2000: departure/t = {:.4}, build+dp {:?}", dep/2000.0, t1.elapsed());

    // 7) crossings at criterion-3 geometry, all lambdas
    let t0 = Instant::now();
    let mut fx = 0;
    for (li, lambda) in [0.5, 1.0, 2.0].iter().enumerate() {
        for seed in 0..200u64 {
            let s = UnitStream::new(400_000 + li as u64, seed);
            let boxr = Rect::anchored(20.0, 20.0).unwrap();
            let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
            let sources = sample_poisson_1d(Interval::new(0.0, 20.0).unwrap(), *lambda, s.child(1)).unwrap();
            let sinks = sample_poisson_1d(Interval::new(0.0, 20.0).unwrap(), 1.0 / lambda, s.child(2)).unwrap();
            if !check_lis_equals_crossings(&interior, &sources, &sinks, boxr).unwrap() { fx += 1; }
        }
    }
    println!("crossings sweep: {fx}/600 fails ({:?})", t0.elapsed());
}
