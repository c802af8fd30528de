use hammersley_core::coupling::run_isolated_second_class;
use hammersley_core::scenario::replicate;
use hammersley_core::stream::UnitStream;
use std::time::Instant;

fn main() {
    for (lambda, t1, seed) in [(1.0f64, 3400.0f64, 20_601u64), (2.0, 1200.0, 20_602), (0.5, 13500.0, 20_605)] {
        let t0 = Instant::now();
        let vals: Vec<(f64, bool)> = replicate(UnitStream::new(seed, 0), 100, |_, s| {
            let traj = run_isolated_second_class(lambda, t1, 2000.0, s).unwrap();
            (traj.value_at(2000.0), traj.absorbed_at().is_some())
        });
        let absorbed = vals.iter().filter(|v| v.1).count();
        let xs: Vec<f64> = vals.iter().map(|v| v.0).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 99.0).sqrt();
        let max = xs.iter().cloned().fold(f64::MIN, f64::max);
        println!("lambda {lambda} T1 {t1}: mean {mean:.1} sd {sd:.1} max {max:.1} absorbed {absorbed} slope {:.4} ({:?})", mean/2000.0, t0.elapsed());
    }
}
