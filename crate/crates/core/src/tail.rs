//! Tail functions as first-class values: dilation, partial order,
//! equivalence, the infimal split `∨`, and left inversion.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::rv::{AnalyticRV, RandomVariable};
use crate::error::{Error, Result};
use crate::optimize::{bisect_threshold, grid_refine_min, le_rel, lin_grid};

/// Default validity threshold for closed-form tails.
pub const DEFAULT_T0: f64 = 2.0;
/// Search range for left inversion.
pub const INVERSE_RANGE: (f64, f64) = (1e-9, 1e12);

const CONST_MIN: f64 = 1.0 / 1_048_576.0;
const CONST_MAX: f64 = 1_048_576.0;
const ORDER_RTOL: f64 = 1e-12;
const VEE_GRID: usize = 256;

/// Where a tail function's values come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Provenance {
    ClosedForm,
    OptimizationBound,
    /// Values beyond `extrapolated_beyond` repeat the last tabulated value.
    #[serde(rename_all = "camelCase")]
    Tabulated { extrapolated_beyond: f64 },
    Composed,
}

/// Nonincreasing map `t ↦ μ{|ξ| ≥ t}` (or a bound of that form).
#[derive(Clone)]
pub struct TailFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    total_mass: f64,
    t0: f64,
    provenance: Provenance,
}

impl fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailFunction")
            .field("total_mass", &self.total_mass)
            .field("t0", &self.t0)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl TailFunction {
    pub fn new<F>(eval: F, total_mass: f64, t0: f64, provenance: Provenance) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(total_mass >= 0.0) {
            return Err(Error::Validation(format!("total mass {total_mass} must be >= 0")));
        }
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::Validation(format!("threshold t0 = {t0} must be positive")));
        }
        Ok(TailFunction {
            eval: Arc::new(eval),
            total_mass,
            t0,
            provenance,
        })
    }

    /// Probabilistic closed-form tail with the default threshold.
    pub fn probabilistic<F>(eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        TailFunction::new(eval, 1.0, DEFAULT_T0, Provenance::ClosedForm).unwrap()
    }

    /// Log-log interpolated table of `(t, value)` points, constant beyond the
    /// last point and equal to the first value (capped by total mass) before
    /// the first point.
    pub fn tabulated(points: Vec<(f64, f64)>, total_mass: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation("empty tail table".into()));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0) || w[1].1 > w[0].1) {
            return Err(Error::Validation(
                "tail table must have increasing t and nonincreasing values".into(),
            ));
        }
        if points[0].0 <= 0.0 {
            return Err(Error::Validation("tail table abscissae must be positive".into()));
        }
        let last = points.last().unwrap().0;
        let table = points;
        let eval = move |t: f64| {
            let n = table.len();
            if t <= table[0].0 {
                return table[0].1;
            }
            if t >= table[n - 1].0 {
                return table[n - 1].1;
            }
            let k = table.partition_point(|p| p.0 <= t);
            let (t1, v1) = table[k - 1];
            let (t2, v2) = table[k];
            let s = (t.ln() - t1.ln()) / (t2.ln() - t1.ln());
            if v1 > 0.0 && v2 > 0.0 {
                (v1.ln() + s * (v2.ln() - v1.ln())).exp()
            } else {
                v1 + s * (v2 - v1)
            }
        };
        TailFunction::new(
            eval,
            total_mass,
            DEFAULT_T0,
            Provenance::Tabulated {
                extrapolated_beyond: last,
            },
        )
    }

    /// Value at `t`, clamped to `[0, total_mass]`; `t <= 0` gives the total
    /// mass.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.total_mass;
        }
        let v = (self.eval)(t);
        if v.is_nan() {
            return self.total_mass;
        }
        v.clamp(0.0, self.total_mass)
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_t0(mut self, t0: f64) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::Validation(format!("threshold t0 = {t0} must be positive")));
        }
        self.t0 = t0;
        Ok(self)
    }

    pub(crate) fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }
}

/// Witness `(t0, C1)` for `T1(t) <= T2(t / C1)` on grid points `t >= t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderWitness {
    pub t0: f64,
    pub c1: f64,
}

/// Witness `(t0, C1, C2)` for `T2(t / C2) <= T1(t) <= T2(t / C1)` on grid
/// points `t >= t0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceWitness {
    pub t0: f64,
    pub c1: f64,
    pub c2: f64,
}

/// Exact exceedance function `t ↦ P(|ξ| ≥ t)`.
pub fn tail_of_rv(rv: &RandomVariable) -> TailFunction {
    match rv {
        RandomVariable::Discrete(d) => {
            // suffix sums over atoms sorted by value
            let atoms = d.atoms().to_vec();
            let mut suffix = vec![0.0; atoms.len() + 1];
            for i in (0..atoms.len()).rev() {
                suffix[i] = suffix[i + 1] + atoms[i].1;
            }
            TailFunction::probabilistic(move |t| {
                let k = atoms.partition_point(|a| a.0 < t);
                suffix[k].min(1.0)
            })
        }
        RandomVariable::Analytic(AnalyticRV::PowerSingularity { alpha, scale }) => {
            let (alpha, scale) = (*alpha, *scale);
            // scale·ω^{-α} >= t  ⇔  ω <= (t/scale)^{-1/α}
            TailFunction::probabilistic(move |t| (t / scale).powf(-1.0 / alpha).min(1.0))
        }
    }
}

/// `t ↦ T(t / c)`.
pub fn dilate(tail: &TailFunction, c: f64) -> Result<TailFunction> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("dilation constant {c} must be positive")));
    }
    let inner = tail.clone();
    TailFunction::new(
        move |t| inner.eval(t / c),
        tail.total_mass,
        c * tail.t0,
        Provenance::Composed,
    )
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Usage("empty t-grid".into()));
    }
    if grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Usage("t-grid points must be positive and finite".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("t-grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Smallest `C` in the search range with `T1(t) <= T2(t / C)`, or infinity.
fn min_upper_constant(t1: &TailFunction, t2: &TailFunction, t: f64) -> f64 {
    let lhs = t1.eval(t);
    let holds = |c: f64| le_rel(lhs, t2.eval(t / c), ORDER_RTOL);
    if holds(CONST_MIN) {
        CONST_MIN
    } else if !holds(CONST_MAX) {
        f64::INFINITY
    } else {
        bisect_threshold(holds, CONST_MIN, CONST_MAX, 1e-14)
    }
}

/// Largest `C` in the search range with `T2(t / C) <= T1(t)`, or zero.
fn max_lower_constant(t1: &TailFunction, t2: &TailFunction, t: f64) -> f64 {
    let rhs = t1.eval(t);
    // y = 1/C; the predicate is monotone increasing in y.
    let holds = |y: f64| le_rel(t2.eval(t * y), rhs, ORDER_RTOL);
    if holds(CONST_MIN) {
        CONST_MAX
    } else if !holds(CONST_MAX) {
        0.0
    } else {
        1.0 / bisect_threshold(holds, CONST_MIN, CONST_MAX, 1e-14)
    }
}

fn suffix_fold(values: &[f64], init: f64, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let mut out = vec![init; values.len()];
    let mut acc = init;
    for i in (0..values.len()).rev() {
        acc = f(acc, values[i]);
        out[i] = acc;
    }
    out
}

/// Searches for `(t0, C1)` with `T1(t) <= T2(t / C1)` at every grid point
/// `t >= t0`, `C1` in `[2^-20, 2^20]`. The smallest admissible grid `t0` is
/// returned, with the smallest constant that works from there on.
pub fn order_check(
    t1: &TailFunction,
    t2: &TailFunction,
    grid: &[f64],
) -> Result<Option<OrderWitness>> {
    validate_grid(grid)?;
    let per_point: Vec<f64> = grid.iter().map(|&t| min_upper_constant(t1, t2, t)).collect();
    let needed = suffix_fold(&per_point, CONST_MIN, f64::max);
    Ok(grid
        .iter()
        .zip(&needed)
        .find(|(_, c)| **c <= CONST_MAX)
        .map(|(&t0, &c1)| OrderWitness { t0, c1 }))
}

/// Searches for `(t0, C1, C2)` with `T2(t / C2) <= T1(t) <= T2(t / C1)` at
/// every grid point `t >= t0`. No ordering between `C1` and `C2` is imposed.
pub fn equivalence_check(
    t1: &TailFunction,
    t2: &TailFunction,
    grid: &[f64],
) -> Result<Option<EquivalenceWitness>> {
    validate_grid(grid)?;
    let upper: Vec<f64> = grid.iter().map(|&t| min_upper_constant(t1, t2, t)).collect();
    let lower: Vec<f64> = grid.iter().map(|&t| max_lower_constant(t1, t2, t)).collect();
    let c1s = suffix_fold(&upper, CONST_MIN, f64::max);
    let c2s = suffix_fold(&lower, CONST_MAX, f64::min);
    Ok((0..grid.len())
        .find(|&i| c1s[i] <= CONST_MAX && c2s[i] >= CONST_MIN)
        .map(|i| EquivalenceWitness {
            t0: grid[i],
            c1: c1s[i],
            c2: c2s[i],
        }))
}

/// `(T1 ∨ T2)(t) = inf_{x ∈ [0,1]} T1(t x) + T2(t (1 - x))`.
pub fn vee(t1: &TailFunction, t2: &TailFunction) -> Result<TailFunction> {
    let same_mass = t1.total_mass == t2.total_mass
        || (t1.total_mass.is_finite()
            && t2.total_mass.is_finite()
            && (t1.total_mass - t2.total_mass).abs() <= 1e-12 * t1.total_mass.max(t2.total_mass));
    if !same_mass {
        return Err(Error::Domain(format!(
            "tails have different total mass ({} vs {})",
            t1.total_mass, t2.total_mass
        )));
    }
    let (a, b) = (t1.clone(), t2.clone());
    let total = t1.total_mass;
    let xs = lin_grid(0.0, 1.0, VEE_GRID);
    TailFunction::new(
        move |t| {
            let objective = |x: f64| a.eval(t * x) + b.eval(t * (1.0 - x));
            let (_, v) = grid_refine_min(objective, &xs, 1e-10);
            v.clamp(0.0, total)
        },
        total,
        t1.t0.max(t2.t0),
        Provenance::Composed,
    )
}

/// Smallest `t` in the default search range with `T(t) <= level`.
pub fn left_inverse(tail: &TailFunction, level: f64) -> Result<f64> {
    left_inverse_in(tail, level, INVERSE_RANGE.0, INVERSE_RANGE.1)
}

/// Smallest `t` in `[lo, hi]` with `T(t) <= level`, bisected down to adjacent
/// floating-point numbers.
pub fn left_inverse_in(tail: &TailFunction, level: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Usage(format!("invalid inversion bracket [{lo}, {hi}]")));
    }
    if level.is_nan() {
        return Err(Error::Domain("inversion level is NaN".into()));
    }
    let (t_lo, t_hi) = (tail.eval(lo), tail.eval(hi));
    if t_lo <= level {
        return Ok(lo);
    }
    if t_hi > level {
        return Err(Error::Range {
            level,
            lo,
            hi,
            t_lo,
            t_hi,
        });
    }
    Ok(bisect_threshold(|t| tail.eval(t) <= level, lo, hi, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::rv::DiscreteRV;
    use crate::optimize::log_grid;

    fn power(p: f64) -> TailFunction {
        TailFunction::probabilistic(move |t| t.powf(-p).min(1.0))
    }

    fn raw(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> TailFunction {
        TailFunction::new(f, f64::INFINITY, DEFAULT_T0, Provenance::ClosedForm).unwrap()
    }

    #[test]
    fn two_point_tail_counts_atom() {
        let rv = DiscreteRV::two_point(10.0, 0.01).unwrap().into();
        let t = tail_of_rv(&rv);
        assert_eq!(t.eval(10.0), 0.01);
        assert_eq!(t.eval(10.0 + 1e-12), 0.0);
        assert_eq!(t.eval(5.0), 0.01);
        assert_eq!(t.eval(0.0), 1.0);
    }

    #[test]
    fn constant_tail_is_indicator() {
        let t = tail_of_rv(&DiscreteRV::constant(1.0).unwrap().into());
        assert_eq!(t.eval(0.5), 1.0);
        assert_eq!(t.eval(1.0), 1.0);
        assert_eq!(t.eval(1.5), 0.0);
    }

    #[test]
    fn power_singularity_tail() {
        let rv = AnalyticRV::power_singularity(0.5).unwrap().into();
        let t = tail_of_rv(&rv);
        // oracle: Lebesgue measure of {ω ∈ (0,1): ω^{-1/2} >= 2} by midpoint counting
        let n = 1_000_000;
        let count = (0..n)
            .filter(|&i| {
                let w = (i as f64 + 0.5) / n as f64;
                w.powf(-0.5) >= 2.0
            })
            .count();
        assert!((t.eval(2.0) - 0.25).abs() < 1e-15);
        assert!((count as f64 / n as f64 - 0.25).abs() < 2e-6);
    }

    #[test]
    fn dilate_examples() {
        let t = TailFunction::probabilistic(|t| (1.0 / t).min(1.0));
        assert_eq!(dilate(&t, 2.0).unwrap().eval(8.0), 0.25);
        let id = dilate(&t, 1.0).unwrap();
        for s in log_grid(1e-3, 1e3, 50) {
            assert_eq!(id.eval(s), t.eval(s));
        }
        let q = power(2.0);
        let d = dilate(&q, 0.5).unwrap();
        assert!((d.eval(5.0) - 0.01).abs() < 1e-15);
        assert_eq!(d.t0(), 1.0);
        assert!(matches!(dilate(&q, 0.0), Err(Error::Domain(_))));
        assert!(matches!(dilate(&q, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn order_check_examples() {
        let grid = log_grid(1.0, 1e6, 100);
        let w = order_check(&power(2.0), &power(1.0), &grid).unwrap().unwrap();
        assert_eq!(w.t0, 1.0);
        assert!((w.c1 - 1.0).abs() < 1e-9, "{w:?}");

        let w = order_check(&raw(|t| 1.0 / t), &raw(|t| 2.0 / t), &grid)
            .unwrap()
            .unwrap();
        assert!((w.c1 - 0.5).abs() < 1e-9, "{w:?}");

        assert!(matches!(
            order_check(&power(1.0), &power(2.0), &[]),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn order_check_absent_for_heavier_tail() {
        // C1 would need to reach sqrt(t_max); the grid must extend past 2^40
        // before that exceeds the search range.
        let grid = log_grid(1.0, 1e13, 200);
        // oracle: explicit check that no constant in range works at the last point
        let last = *grid.last().unwrap();
        assert!(1.0 / last > (CONST_MAX / last).powi(2));
        assert!(order_check(&power(1.0), &power(2.0), &grid).unwrap().is_none());
    }

    #[test]
    fn equivalence_examples() {
        let grid = log_grid(1.0, 1e6, 100);
        let w = equivalence_check(&raw(|t| 1.0 / t), &raw(|t| 2.0 / t), &grid)
            .unwrap()
            .unwrap();
        assert_eq!(w.t0, 1.0);
        assert!((w.c1 - 0.5).abs() < 1e-9 && (w.c2 - 0.5).abs() < 1e-9, "{w:?}");

        let t = power(2.0);
        let w = equivalence_check(&t, &t, &grid).unwrap().unwrap();
        assert!((w.c1 - 1.0).abs() < 1e-9 && (w.c2 - 1.0).abs() < 1e-9, "{w:?}");

        let wide = log_grid(1.0, 1e13, 200);
        assert!(equivalence_check(&power(2.0), &power(1.0), &wide).unwrap().is_none());
    }

    #[test]
    fn vee_examples() {
        let t = TailFunction::probabilistic(|t| (1.0 / t).min(1.0));
        let v = vee(&t, &t).unwrap();
        // oracle: dense grid over the split point
        let dense = (0..=100_000)
            .map(|i| {
                let x = i as f64 / 100_000.0;
                t.eval(8.0 * x) + t.eval(8.0 * (1.0 - x))
            })
            .fold(f64::INFINITY, f64::min);
        assert!((dense - 0.5).abs() < 1e-9);
        assert!((v.eval(8.0) - 0.5).abs() < 1e-12);
        for s in log_grid(0.1, 1e4, 100) {
            assert!(v.eval(s) <= 2.0 * t.eval(s / 2.0) + 1e-15);
        }
    }

    #[test]
    fn vee_rejects_mass_mismatch() {
        let a = power(1.0);
        let b = raw(|t| 1.0 / t);
        assert!(matches!(vee(&a, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn left_inverse_examples() {
        assert!((left_inverse(&power(2.0), 0.01).unwrap() - 10.0).abs() < 1e-10);
        let cube = TailFunction::probabilistic(|t| (1.0 / (t * t * t)).min(1.0));
        assert!((left_inverse(&cube, 0.001).unwrap() - 10.0).abs() < 1e-10);
        assert_eq!(left_inverse(&power(2.0), 1.0).unwrap(), INVERSE_RANGE.0);
        let e = left_inverse(&power(2.0), 1e-30).unwrap_err();
        assert!(matches!(e, Error::Range { .. }));
    }

    #[test]
    fn tabulated_interpolates_log_linearly() {
        let t = TailFunction::tabulated(vec![(1.0, 1.0), (10.0, 0.01), (100.0, 0.0001)], 1.0)
            .unwrap();
        assert!((t.eval(10f64.sqrt()) - 0.1).abs() < 1e-12);
        assert_eq!(t.eval(1000.0), 0.0001);
        assert_eq!(
            t.provenance(),
            Provenance::Tabulated {
                extrapolated_beyond: 100.0
            }
        );
        assert!(TailFunction::tabulated(vec![(1.0, 0.1), (2.0, 0.2)], 1.0).is_err());
    }
}
