//! Sampling, empirical tails with three-sigma binomial bands, tail-bound
//! validation and norm-based confidence intervals.
//!
//! Samples are generated in fixed chunks of [`CHUNK`] values. Chunk `k` uses
//! ChaCha8 seeded from `seed` on stream `k`, so a batch depends only on
//! `(rv, n, seed)` and never on the number of threads.

use std::fmt::Write as _;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{characteristic, norm, AnalyticRV, RandomVariable, SpaceDescriptor};
use crate::error::{Error, Result};
use crate::report::{fmt_num, Constants, DiagnosticsReport, GridKind, PointRecord, Verdict};
use crate::tail::left_inverse;

pub const CHUNK: usize = 1 << 16;
pub const GENERATOR_LABEL: &str = "chacha8/seed_from_u64/stream=chunk/chunk=65536";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleBatch {
    values: Vec<f64>,
    seed: u64,
    generator_label: String,
}

impl SampleBatch {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn generator_label(&self) -> &str {
        &self.generator_label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Single-column CSV with header `value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.values.len() + 1));
        out.push_str("value\n");
        for v in &self.values {
            let _ = writeln!(out, "{}", fmt_num(*v));
        }
        out
    }
}

/// Inverse-transform sampling of `n` values.
pub fn sample(rv: &RandomVariable, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Usage("sample size n must be at least 1".into()));
    }
    let mut values = vec![0.0; n];
    match rv {
        RandomVariable::Discrete(d) => {
            let atoms = d.atoms();
            let mut cum = Vec::with_capacity(atoms.len());
            let mut acc = 0.0;
            for a in atoms {
                acc += a.1;
                cum.push(acc);
            }
            let last = atoms.len() - 1;
            fill(&mut values, seed, |rng| {
                let u: f64 = rng.gen();
                atoms[cum.partition_point(|&c| c <= u).min(last)].0
            });
        }
        RandomVariable::Analytic(AnalyticRV::PowerSingularity { alpha, scale }) => {
            let (alpha, scale) = (*alpha, *scale);
            fill(&mut values, seed, |rng| {
                let w: f64 = rng.sample(Open01);
                scale * w.powf(-alpha)
            });
        }
    }
    Ok(SampleBatch { values, seed, generator_label: GENERATOR_LABEL.into() })
}

fn fill<F>(values: &mut [f64], seed: u64, draw: F)
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    values.par_chunks_mut(CHUNK).enumerate().for_each(|(k, chunk)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        for v in chunk.iter_mut() {
            *v = draw(&mut rng);
        }
    });
}

fn band(hits: usize, n: usize) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, 3.0 * (p * (1.0 - p) / n as f64).sqrt())
}

/// Fraction of values `>= t` and its three-sigma half width.
pub fn empirical_tail(batch: &SampleBatch, t: f64) -> (f64, f64) {
    if batch.values.is_empty() {
        return (0.0, 0.0);
    }
    band(batch.values.iter().filter(|&&v| v >= t).count(), batch.values.len())
}

/// Checks `empirical_tail(t) <= T(t / c) + halfWidth` at every grid point,
/// where `c` is the norm of `rv` in `space`. Rows carry the estimate, the
/// bound and their ratio; the norm is recorded as `c`.
pub fn verify_tail_bound(
    space: &SpaceDescriptor,
    rv: &RandomVariable,
    grid: &[f64],
    n: usize,
    seed: u64,
) -> Result<DiagnosticsReport> {
    if grid.is_empty() {
        return Err(Error::Usage("empty t-grid".into()));
    }
    let c = norm(space, rv)?;
    if !c.is_finite() {
        return Err(Error::Usage(format!("the variable is not in {space} (infinite norm)")));
    }
    let tail = characteristic(space)?;
    let batch = sample(rv, n, seed)?;
    let mut sorted = batch.values.clone();
    sorted.sort_unstable_by(f64::total_cmp);

    let mut values = Vec::with_capacity(grid.len());
    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for &t in grid {
        let (est, hw) = band(n - sorted.partition_point(|&v| v < t), n);
        let bound = if c > 0.0 { tail.eval(t / c) } else { 0.0 };
        worst = worst.max(est - bound - hw);
        if est > bound + hw {
            failures.push(t);
        }
        values.push(PointRecord::new(t, est, bound));
    }
    let mut notes = vec![
        format!("n = {n}, seed = {seed}, generator {GENERATOR_LABEL}"),
        format!("norm c = {}", fmt_num(c)),
        format!("max of estimate - bound - halfWidth: {worst:.6e}"),
    ];
    if !failures.is_empty() {
        notes.push(format!("bound exceeded beyond the band at t = {failures:?}"));
    }
    Ok(DiagnosticsReport {
        subject: format!("tail bound {space}"),
        grid_kind: GridKind::T,
        values,
        delta_values: vec![],
        verdict: if failures.is_empty() { Verdict::BoundedRatio } else { Verdict::Violated },
        constants: Some(Constants { c: Some(c), c1: None, c2: None }),
        notes,
    })
}

/// Inputs of a norm-based confidence interval `θ_n ± radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiRequest {
    pub sigma: f64,
    pub wn: f64,
    pub alpha: f64,
    pub space: SpaceDescriptor,
}

impl CiRequest {
    pub fn new(sigma: f64, wn: f64, alpha: f64, space: SpaceDescriptor) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Validation(format!("alpha = {alpha} must lie in (0, 1)")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::Validation(format!("sigma = {sigma} must be positive")));
        }
        if !(wn > 0.0 && wn.is_finite()) {
            return Err(Error::Validation(format!("wn = {wn} must be positive")));
        }
        Ok(CiRequest { sigma, wn, alpha, space })
    }
}

/// `σ·[T]^{-1}(α) / w(n)`.
pub fn confidence_interval(req: &CiRequest) -> Result<f64> {
    let req = CiRequest::new(req.sigma, req.wn, req.alpha, req.space.clone())?;
    let tail = characteristic(&req.space)?;
    let u = req.sigma * left_inverse(&tail, req.alpha)?;
    Ok(u / req.wn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{DiscreteRV, YoungFunction};

    fn two_point(v: f64, p: f64) -> RandomVariable {
        DiscreteRV::two_point(v, p).unwrap().into()
    }

    #[test]
    fn constant_and_determinism() {
        let c: RandomVariable = DiscreteRV::constant(3.5).unwrap().into();
        assert_eq!(sample(&c, 5, 9).unwrap().values(), &[3.5; 5]);
        let rv = two_point(10.0, 0.01);
        let a = sample(&rv, 200_000, 42).unwrap();
        let b = sample(&rv, 200_000, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample(&rv, 200_000, 43).unwrap());
        assert!(matches!(sample(&rv, 0, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn independent_of_thread_count() {
        let rv: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| sample(&rv, 3 * CHUNK + 17, 5).unwrap());
        assert_eq!(single, sample(&rv, 3 * CHUNK + 17, 5).unwrap());
    }

    #[test]
    fn binomial_band() {
        let rv = two_point(10.0, 0.01);
        let batch = sample(&rv, 1_000_000, 7).unwrap();
        let (est, hw) = empirical_tail(&batch, 10.0);
        assert!((hw - 3.0 * (0.01f64 * 0.99 / 1e6).sqrt()).abs() < 3e-5);
        assert!((est - 0.01).abs() <= hw);
        let zeros: RandomVariable = DiscreteRV::constant(0.0).unwrap().into();
        assert_eq!(empirical_tail(&sample(&zeros, 10, 1).unwrap(), 1.0), (0.0, 0.0));
    }

    #[test]
    fn power_singularity_tail() {
        let rv: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        let (est, hw) = empirical_tail(&sample(&rv, 1_000_000, 3).unwrap(), 2.0);
        assert!((est - 0.25).abs() <= hw, "{est} {hw}");
    }

    #[test]
    fn tail_bounds() {
        let lp2 = SpaceDescriptor::lp(2.0).unwrap();
        let r = verify_tail_bound(&lp2, &two_point(10.0, 0.01), &[2.0, 10.0, 20.0], 100_000, 1).unwrap();
        assert_eq!(r.verdict, Verdict::BoundedRatio);
        let one: RandomVariable = DiscreteRV::constant(1.0).unwrap().into();
        let r = verify_tail_bound(&lp2, &one, &[3.0], 1000, 1).unwrap();
        assert_eq!(r.values[0].lhs, 0.0);
        let heavy: RandomVariable = AnalyticRV::power_singularity(0.6).unwrap().into();
        assert!(matches!(verify_tail_bound(&lp2, &heavy, &[3.0], 10, 1), Err(Error::Usage(_))));
    }

    #[test]
    fn intervals() {
        let lp2 = SpaceDescriptor::lp(2.0).unwrap();
        let r = confidence_interval(&CiRequest::new(1.0, 10.0, 0.01, lp2.clone()).unwrap()).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
        let r2 = confidence_interval(&CiRequest::new(2.0, 10.0, 0.01, lp2).unwrap()).unwrap();
        assert!((r2 - 2.0).abs() < 1e-10);
        let cube = SpaceDescriptor::orlicz(YoungFunction::power(3.0).unwrap());
        let r = confidence_interval(&CiRequest::new(1.0, 1.0, 0.001, cube).unwrap()).unwrap();
        assert!((r - 10.0).abs() < 1e-9);
        let linf = SpaceDescriptor::lp(f64::INFINITY).unwrap();
        assert!(CiRequest::new(1.0, 1.0, 1.5, linf).is_err());
    }
}
