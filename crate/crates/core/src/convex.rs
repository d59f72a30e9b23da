//! Numerical Young–Fenchel transform and the Grand Lebesgue Space tail bounds
//! derived from it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog::psi::PsiFunction;
use crate::error::{Error, Result};
use crate::optimize::golden_section_min;
use crate::tail::{Provenance, TailFunction, DEFAULT_T0};

const GRID_UNIFORM: usize = 256;
const GRID_CLUSTERED: usize = 256;
const CLUSTER_DECADES: f64 = 12.0;
const REFINE_RTOL: f64 = 1e-10;
const EXPANSION_LIMIT: f64 = 1e300;

/// Real function on an interval `[lo, hi]` (`hi` may be `+∞`). `eval` may
/// return `+∞` at or beyond the domain edge.
#[derive(Clone)]
pub struct ScalarFunction {
    lo: f64,
    hi: f64,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    convexity_checked: bool,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("convexity_checked", &self.convexity_checked)
            .finish_non_exhaustive()
    }
}

impl ScalarFunction {
    pub fn new<F>(lo: f64, hi: f64, eval: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lo.is_finite() && hi >= lo) {
            return Err(Error::Domain(format!("invalid domain [{lo}, {hi}]")));
        }
        Ok(ScalarFunction {
            lo,
            hi,
            eval: Arc::new(eval),
            convexity_checked: false,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y < self.lo || y > self.hi {
            return f64::INFINITY;
        }
        (self.eval)(y)
    }

    pub fn convexity_checked(&self) -> bool {
        self.convexity_checked
    }

    /// Verifies convexity through slopes on a 1000-point grid over a finite
    /// window of the domain and records the result.
    pub fn check_convexity(mut self) -> Result<Self> {
        let hi = if self.hi.is_finite() {
            self.hi - (self.hi - self.lo) * 1e-6
        } else {
            self.lo + 100.0
        };
        if !self.convex_on(self.lo, hi) {
            return Err(Error::Domain(format!(
                "function is not convex on [{}, {hi}]",
                self.lo
            )));
        }
        self.convexity_checked = true;
        Ok(self)
    }

    fn convex_on(&self, lo: f64, hi: f64) -> bool {
        let n = 1000;
        let ys: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let vals: Vec<f64> = ys.iter().map(|&y| self.eval(y)).collect();
        if vals.iter().any(|v| !v.is_finite()) {
            return true;
        }
        let slopes: Vec<f64> = (1..n)
            .map(|i| (vals[i] - vals[i - 1]) / (ys[i] - ys[i - 1]))
            .collect();
        slopes
            .windows(2)
            .all(|s| s[1] - s[0] >= -1e-9 * s[0].abs().max(s[1].abs()).max(1.0))
    }
}

/// Outcome of a conjugate evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LegendreValue {
    pub value: f64,
    /// Maximizing `y` (the last probed point when divergent).
    pub argmax: f64,
    /// The supremum sits at (or is the limit towards) a domain edge.
    pub boundary: bool,
    /// The objective is unbounded on an infinite domain.
    pub divergent: bool,
}

fn candidate_grid(lo: f64, hi: f64) -> Vec<f64> {
    let mut ys = Vec::with_capacity(GRID_UNIFORM + GRID_CLUSTERED + 2);
    let width = hi - lo;
    for i in 0..GRID_UNIFORM {
        ys.push(lo + width * i as f64 / (GRID_UNIFORM - 1) as f64);
    }
    // cluster toward the right endpoint: y = hi - width·10^{-u}
    for i in 0..GRID_CLUSTERED {
        let u = CLUSTER_DECADES * i as f64 / (GRID_CLUSTERED - 1) as f64;
        ys.push(hi - width * 10f64.powf(-u));
    }
    // and geometrically from the left when the window spans many decades
    if lo > 0.0 && hi / lo > 1e3 {
        let (l0, l1) = (lo.ln(), hi.ln());
        for i in 0..GRID_CLUSTERED {
            ys.push((l0 + (l1 - l0) * i as f64 / (GRID_CLUSTERED - 1) as f64).exp());
        }
    }
    ys.retain(|y| *y >= lo && *y <= hi);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

/// Supremum of `x·y - f(y)` over `y ∈ [lo, hi]` (finite `hi`).
fn sup_on_window<F: Fn(f64) -> f64>(f: &F, x: f64, lo: f64, hi: f64) -> LegendreValue {
    let objective = |y: f64| {
        let v = f(y);
        if v.is_nan() || v == f64::INFINITY {
            f64::NEG_INFINITY
        } else {
            x * y - v
        }
    };
    if hi == lo {
        return LegendreValue {
            value: objective(lo),
            argmax: lo,
            boundary: true,
            divergent: false,
        };
    }
    let ys = candidate_grid(lo, hi);
    let vals: Vec<f64> = ys.iter().map(|&y| objective(y)).collect();
    let mut best = 0;
    for i in 1..vals.len() {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    let a = ys[best.saturating_sub(1)];
    let b = ys[(best + 1).min(ys.len() - 1)];
    let mut out = (ys[best], vals[best]);
    if b > a {
        let (y, neg) = golden_section_min(|y| -objective(y), a, b, REFINE_RTOL);
        if -neg > out.1 {
            out = (y, -neg);
        }
    }
    LegendreValue {
        value: out.1,
        argmax: out.0,
        boundary: best == 0 || best == ys.len() - 1,
        divergent: false,
    }
}

fn sup_affine_minus<F: Fn(f64) -> f64>(f: &F, x: f64, lo: f64, hi: f64) -> LegendreValue {
    if hi.is_finite() {
        return sup_on_window(f, x, lo, hi);
    }
    let mut upper = (lo.abs() * 2.0).max(lo + 1.0);
    loop {
        let r = sup_on_window(f, x, lo, upper);
        let at_edge = r.argmax >= upper * (1.0 - 1e-6) || r.argmax >= upper - 1e-9;
        if !at_edge {
            return LegendreValue {
                boundary: r.argmax <= lo,
                ..r
            };
        }
        if upper >= EXPANSION_LIMIT || r.value == f64::INFINITY {
            return LegendreValue {
                value: f64::INFINITY,
                argmax: upper,
                boundary: true,
                divergent: true,
            };
        }
        upper = (upper * 16.0).min(EXPANSION_LIMIT);
    }
}

/// `h*(x) = sup_y (x·y - h(y))` over the domain of `h`.
pub fn legendre(h: &ScalarFunction, x: f64) -> f64 {
    legendre_detailed(h, x).value
}

pub fn legendre_detailed(h: &ScalarFunction, x: f64) -> LegendreValue {
    sup_affine_minus(&|y| (h.eval)(y), x, h.lo, h.hi)
}

/// `p ↦ p·log ψ(p)` on `[max(1, A), B)`.
pub fn psi_tilde(psi: &PsiFunction) -> Result<ScalarFunction> {
    let (a, b) = psi.support();
    let lo = a.max(1.0);
    if lo > b {
        return Err(Error::Domain(format!(
            "ψ support ({a}, {b}) does not meet [1, ∞)"
        )));
    }
    let psi = psi.clone();
    ScalarFunction::new(lo, b, move |p| {
        let v = psi.eval(p);
        if v == f64::INFINITY {
            f64::INFINITY
        } else {
            p * v.ln()
        }
    })
}

/// `t ↦ min(1, exp(-ψ̃*(log t)))`.
pub fn gls_upper_tail(psi: &PsiFunction) -> Result<TailFunction> {
    let h = psi_tilde(psi)?;
    TailFunction::new(
        move |t| (-legendre(&h, t.ln())).exp().min(1.0),
        1.0,
        DEFAULT_T0,
        Provenance::OptimizationBound,
    )
}

/// `t ↦ min(1, exp(-ψ̃*(log(t / C))))` for `ψ_{B,β}`; `C` is user supplied.
pub fn gls_lower_tail(psi: &PsiFunction, c: f64) -> Result<TailFunction> {
    if !matches!(psi, PsiFunction::GridBlowup { .. }) {
        return Err(Error::Usage(
            "the two-sided GLS bound is only available for the grid-blowup ψ".into(),
        ));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("dilation constant C = {c} must be positive")));
    }
    let h = psi_tilde(psi)?;
    TailFunction::new(
        move |t| (-legendre(&h, (t / c).ln())).exp().min(1.0),
        1.0,
        DEFAULT_T0 * c,
        Provenance::OptimizationBound,
    )
}
