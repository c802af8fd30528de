//! Longest North-East path lengths.
//!
//! A strictly North-East path through a planar point set is a chain that
//! increases strictly in both coordinates; its length is computed by
//! patience sorting in `O(n log n)`. A weakly North-East path from the
//! origin may first run along one axis, collecting every axis point up to
//! its departure coordinate, before turning strictly North-East through
//! the interior. A path that climbed both axes beyond the origin could not
//! be North-East, so the two axis options are exclusive.

use crate::engine::{evolve, SimInputs};
use crate::error::{Error, Result};
use crate::point_process::{Point2, Points1D, Points2D, Rect};

/// Length of the longest strictly increasing chain, by patience sorting.
pub fn lis_patience(p: &Points2D) -> usize {
    let mut pts: Vec<Point2> = p.as_slice().to_vec();
    // Equal x cannot chain; descending t within equal x keeps them apart.
    pts.sort_by(|a, b| (a.x, b.t).partial_cmp(&(b.x, a.t)).unwrap());
    let mut tails: Vec<f64> = Vec::new();
    for q in &pts {
        let i = tails.partition_point(|&tail| tail < q.t);
        if i == tails.len() {
            tails.push(q.t);
        } else {
            tails[i] = q.t;
        }
    }
    tails.len()
}

const BRUTE_CAP: usize = 20;

/// Exact longest-chain length by quadratic dynamic programming. Refuses
/// instances larger than 20 points; the independent oracle for
/// [`lis_patience`].
pub fn lis_bruteforce(p: &Points2D) -> Result<usize> {
    if p.len() > BRUTE_CAP {
        return Err(Error::SizeCapExceeded {
            got: p.len(),
            cap: BRUTE_CAP,
        });
    }
    let mut pts: Vec<Point2> = p.as_slice().to_vec();
    pts.sort_by(|a, b| (a.x, a.t).partial_cmp(&(b.x, b.t)).unwrap());
    let mut best = vec![0usize; pts.len()];
    let mut overall = 0;
    for i in 0..pts.len() {
        let mut b = 1;
        for j in 0..i {
            if pts[j].x < pts[i].x && pts[j].t < pts[i].t {
                b = b.max(best[j] + 1);
            }
        }
        best[i] = b;
        overall = overall.max(b);
    }
    Ok(overall)
}

/// One weak-path problem: interior points, axis points and a target corner.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakPathInstance {
    interior: Points2D,
    sources: Points1D,
    sinks: Points1D,
    target: (f64, f64),
}

impl WeakPathInstance {
    /// Validates domains and forbids coordinate ties among interior points
    /// (they have probability zero and would make chain strictness
    /// ambiguous in deterministic vectors).
    pub fn new(
        interior: Points2D,
        sources: Points1D,
        sinks: Points1D,
        target: (f64, f64),
    ) -> Result<Self> {
        let (tx, tt) = target;
        if !(tx.is_finite() && tt.is_finite()) || tx < 0.0 || tt < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "target corner ({tx}, {tt}) must be finite and nonnegative"
            )));
        }
        if interior
            .iter()
            .any(|p| !(0.0..=tx).contains(&p.x) || !(0.0..=tt).contains(&p.t))
        {
            return Err(Error::InvalidInput("interior point outside the box".into()));
        }
        if sources.iter().any(|s| !(0.0..=tx).contains(&s)) {
            return Err(Error::InvalidInput("source beyond the target".into()));
        }
        if sinks.iter().any(|s| !(0.0..=tt).contains(&s)) {
            return Err(Error::InvalidInput("sink beyond the target".into()));
        }
        let mut xs: Vec<f64> = interior.iter().map(|p| p.x).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if xs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("tied x coordinates".into()));
        }
        let mut ts: Vec<f64> = interior.iter().map(|p| p.t).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if ts.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("tied t coordinates".into()));
        }
        Ok(WeakPathInstance {
            interior,
            sources,
            sinks,
            target,
        })
    }

    pub fn interior(&self) -> &Points2D {
        &self.interior
    }

    pub fn sources(&self) -> &Points1D {
        &self.sources
    }

    pub fn sinks(&self) -> &Points1D {
        &self.sinks
    }

    pub fn target(&self) -> (f64, f64) {
        self.target
    }
}

/// Longest-chain length starting at each point, plus lookup tables for
/// "best chain entirely right of x" and "entirely above t".
struct ChainTables {
    by_x: Vec<(f64, u32)>,
    suffix_by_x: Vec<u32>,
    by_t: Vec<(f64, u32)>,
    suffix_by_t: Vec<u32>,
    best: u32,
}

impl ChainTables {
    fn build(interior: &Points2D) -> Self {
        let pts = interior.as_slice();
        let n = pts.len();

        // Ranks of t values.
        let mut order_t: Vec<u32> = (0..n as u32).collect();
        order_t.sort_by(|&a, &b| {
            pts[a as usize]
                .t
                .partial_cmp(&pts[b as usize].t)
                .unwrap()
        });
        let mut t_rank = vec![0u32; n];
        for (r, &i) in order_t.iter().enumerate() {
            t_rank[i as usize] = r as u32;
        }

        // Longest chain starting at each point: sweep x descending; the
        // Fenwick tree holds, per reversed t-rank prefix, the best chain
        // among already-seen points (strictly larger x).
        let mut order_x: Vec<u32> = (0..n as u32).collect();
        order_x.sort_by(|&a, &b| {
            pts[b as usize]
                .x
                .partial_cmp(&pts[a as usize].x)
                .unwrap()
        });
        let mut fenwick = MaxFenwick::new(n);
        let mut f_start = vec![0u32; n];
        let mut i = 0;
        while i < order_x.len() {
            // Batch equal x so the batch members do not see each other.
            let mut j = i;
            let x = pts[order_x[i] as usize].x;
            while j < order_x.len() && pts[order_x[j] as usize].x == x {
                j += 1;
            }
            for &k in &order_x[i..j] {
                let k = k as usize;
                let rev = n as u32 - 1 - t_rank[k];
                let tail = if rev == 0 { 0 } else { fenwick.prefix_max(rev - 1) };
                f_start[k] = tail + 1;
            }
            for &k in &order_x[i..j] {
                let k = k as usize;
                fenwick.update(n as u32 - 1 - t_rank[k], f_start[k]);
            }
            i = j;
        }

        let make = |key: &dyn Fn(&Point2) -> f64| {
            let mut v: Vec<(f64, u32)> = (0..n).map(|k| (key(&pts[k]), f_start[k])).collect();
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let mut suffix = vec![0u32; n + 1];
            for k in (0..n).rev() {
                suffix[k] = suffix[k + 1].max(v[k].1);
            }
            (v, suffix)
        };
        let (by_x, suffix_by_x) = make(&|p: &Point2| p.x);
        let (by_t, suffix_by_t) = make(&|p: &Point2| p.t);
        let best = f_start.iter().copied().max().unwrap_or(0);
        ChainTables {
            by_x,
            suffix_by_x,
            by_t,
            suffix_by_t,
            best,
        }
    }

    /// Longest chain using only points with x strictly greater than `x0`.
    fn best_right_of(&self, x0: f64) -> u32 {
        let i = self.by_x.partition_point(|&(x, _)| x <= x0);
        self.suffix_by_x[i]
    }

    /// Longest chain using only points with t strictly greater than `t0`.
    fn best_above(&self, t0: f64) -> u32 {
        let i = self.by_t.partition_point(|&(t, _)| t <= t0);
        self.suffix_by_t[i]
    }
}

/// Length of the longest weakly North-East path from the origin to the
/// target: the best of the pure interior chain, an x-axis prefix followed
/// by a chain strictly to its right, and a y-axis prefix followed by a
/// chain strictly above it.
pub fn lis_weak(w: &WeakPathInstance) -> usize {
    let tables = ChainTables::build(&w.interior);
    weak_best(w, &tables).0 as usize
}

/// Maximum departure coordinate over all optimal weak paths: the largest
/// coordinate of a last axis point that still attains the optimum, or 0
/// when no axis departure does better than the pure interior chain.
pub fn weak_axis_departure(w: &WeakPathInstance) -> f64 {
    let tables = ChainTables::build(&w.interior);
    let (best, _) = weak_best(w, &tables);
    let mut departure: f64 = 0.0;
    let mut attained = tables.best == best;
    for (k, s) in w.sources.iter().enumerate() {
        if (k as u32 + 1) + tables.best_right_of(s) == best {
            departure = departure.max(s);
            attained = true;
        }
    }
    for (m, y) in w.sinks.iter().enumerate() {
        if (m as u32 + 1) + tables.best_above(y) == best {
            departure = departure.max(y);
            attained = true;
        }
    }
    debug_assert!(attained, "some optimal route must attain the optimum");
    departure
}

fn weak_best(w: &WeakPathInstance, tables: &ChainTables) -> (u32, ()) {
    let mut best = tables.best;
    for (k, s) in w.sources.iter().enumerate() {
        best = best.max(k as u32 + 1 + tables.best_right_of(s));
    }
    for (m, y) in w.sinks.iter().enumerate() {
        best = best.max(m as u32 + 1 + tables.best_above(y));
    }
    (best, ())
}

/// Evolve the instance as a Hammersley run and confirm that the weak-path
/// length equals the number of space-time paths meeting the box.
pub fn check_lis_equals_crossings(
    interior: &Points2D,
    sources: &Points1D,
    sinks: &Points1D,
    boxr: Rect,
) -> Result<bool> {
    let (t1, t2) = (boxr.x.hi(), boxr.t.hi());
    let inputs = SimInputs::new(
        t1,
        t2,
        sources.clone(),
        sinks.clone(),
        interior.clone(),
        0.0,
    )?;
    let log = evolve(&inputs);
    let crossings = log.path_count_box(t1, t2)?;
    let instance =
        WeakPathInstance::new(interior.clone(), sources.clone(), sinks.clone(), (t1, t2))?;
    Ok(lis_weak(&instance) == crossings)
}

struct MaxFenwick {
    v: Vec<u32>,
}

impl MaxFenwick {
    fn new(n: usize) -> Self {
        MaxFenwick { v: vec![0; n + 1] }
    }

    fn update(&mut self, i: u32, val: u32) {
        let mut i = i as usize + 1;
        while i < self.v.len() {
            self.v[i] = self.v[i].max(val);
            i += i & i.wrapping_neg();
        }
    }

    /// Max over positions `0..=i`.
    fn prefix_max(&self, i: u32) -> u32 {
        let mut i = i as usize + 1;
        let mut m = 0;
        while i > 0 {
            m = m.max(self.v[i]);
            i -= i & i.wrapping_neg();
        }
        m
    }
}
