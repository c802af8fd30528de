use hammersley_core::engine::*;
use hammersley_core::paths::*;
use hammersley_core::point_process::*;
use hammersley_core::scenario::replicate;
use hammersley_core::stream::UnitStream;

fn main() {
    // Identity weak == all sinks + final at t=100 on 200 seeds, and z-scores
    // of the 2t test across several base seeds.
    for base in [850_000u64, 851_000, 852_000, 853_000, 854_000, 855_000] {
        let pairs: Vec<(usize, usize, bool)> = replicate(UnitStream::new(base, 0), 200, |_, s| {
            let t = 100.0;
            let boxr = Rect::anchored(t, t).unwrap();
            let interior = sample_poisson_2d(boxr, 1.0, s.child(0)).unwrap();
            let sources = sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(1)).unwrap();
            let sinks = sample_poisson_1d(Interval::new(0.0, t).unwrap(), 1.0, s.child(2)).unwrap();
            let w = WeakPathInstance::new(interior.clone(), sources.clone(), sinks.clone(), (t, t)).unwrap();
            let weak = lis_weak(&w);
            let inp = SimInputs::new(t, t, sources, sinks, interior, 1.0).unwrap();
            let log = evolve(&inp);
            let crossings = log.path_count_box(t, t).unwrap();
            (weak, crossings, weak == crossings)
        });
        let mism = pairs.iter().filter(|p| !p.2).count();
        let lens: Vec<f64> = pairs.iter().map(|p| p.0 as f64).collect();
        let mean = lens.iter().sum::<f64>() / 200.0;
        let var = lens.iter().map(|&l| (l - mean).powi(2)).sum::<f64>() / 199.0;
        let se = (var / 200.0).sqrt();
        println!("base {base}: identity mismatches {mism}/200, mean {mean:.2}, z {:+.2}", (mean - 200.0) / se);
    }
}
