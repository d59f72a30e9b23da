use serde::{Deserialize, Serialize};

use crate::convex::ScalarFunction;
use crate::error::{Error, Result};
use crate::optimize::{bisect_threshold, golden_section_min, le_rel, log_grid};

const E: f64 = std::f64::consts::E;

/// Young function `N` of an Orlicz space. Evaluated on `|u|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "camelCase")]
pub enum YoungFunction {
    /// `c·|u|^p`.
    Power { p: f64, c: f64 },
    /// `c·|u|^p·log^q(e + |u|)`.
    PowerLog { p: f64, q: f64, c: f64 },
    /// Pointwise maximum.
    Max {
        first: Box<YoungFunction>,
        second: Box<YoungFunction>,
    },
    /// Numerical Legendre transform of the inner function on `[0, ∞)`.
    Conjugate { of: Box<YoungFunction> },
}

impl YoungFunction {
    pub fn power(p: f64) -> Result<Self> {
        Self::scaled_power(p, 1.0)
    }

    pub fn scaled_power(p: f64, c: f64) -> Result<Self> {
        check_common(p, c)?;
        Ok(YoungFunction::Power { p, c })
    }

    pub fn power_log(p: f64, q: f64) -> Result<Self> {
        Self::scaled_power_log(p, q, 1.0)
    }

    pub fn scaled_power_log(p: f64, q: f64, c: f64) -> Result<Self> {
        check_common(p, c)?;
        if !q.is_finite() {
            return Err(Error::Validation(format!("q = {q} must be finite")));
        }
        if q < 0.0 && p <= 1.0 {
            return Err(Error::Validation(format!(
                "q = {q} < 0 requires p > 1 for a strictly increasing Young function"
            )));
        }
        let n = YoungFunction::PowerLog { p, q, c };
        n.check_strictly_increasing()?;
        Ok(n)
    }

    pub fn eval(&self, u: f64) -> f64 {
        let u = u.abs();
        match self {
            YoungFunction::Power { p, c } => c * u.powf(*p),
            YoungFunction::PowerLog { p, q, c } => {
                if u == 0.0 {
                    0.0
                } else {
                    c * u.powf(*p) * (E + u).ln().powf(*q)
                }
            }
            YoungFunction::Max { first, second } => first.eval(u).max(second.eval(u)),
            YoungFunction::Conjugate { of } => concave_sup(|y| u * y - of.eval(y)).max(0.0),
        }
    }

    /// Polynomial growth order at infinity, used to decide whether moments of
    /// heavy-tailed variables under `N` are finite.
    pub fn growth_exponent(&self) -> f64 {
        match self {
            YoungFunction::Power { p, .. } | YoungFunction::PowerLog { p, .. } => *p,
            YoungFunction::Max { first, second } => {
                first.growth_exponent().max(second.growth_exponent())
            }
            YoungFunction::Conjugate { of } => {
                let p = of.growth_exponent();
                if p > 1.0 {
                    p / (p - 1.0)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Smallest `u >= 0` with `N(u) >= y`, to relative precision 1e-13.
    pub fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y == f64::INFINITY {
            return f64::INFINITY;
        }
        let mut hi = 1.0;
        while self.eval(hi) < y {
            hi *= 2.0;
            if hi > 1e300 {
                return f64::INFINITY;
            }
        }
        let mut lo = hi / 2.0;
        while lo > 1e-300 && self.eval(lo) >= y {
            lo /= 2.0;
        }
        bisect_threshold(|u| self.eval(u) >= y, lo, hi, 1e-13)
    }

    fn check_strictly_increasing(&self) -> Result<()> {
        let grid = log_grid(1e-6, 1e6, 1000);
        let vals: Vec<f64> = grid.iter().map(|&u| self.eval(u)).collect();
        if vals.windows(2).any(|w| !(w[1] > w[0])) || vals[0] < 0.0 {
            return Err(Error::Validation(format!(
                "Young function {self:?} is not strictly increasing"
            )));
        }
        Ok(())
    }

    pub(crate) fn check_convex(&self) -> Result<()> {
        let f = self.clone();
        ScalarFunction::new(0.0, 10.0, move |u| f.eval(u))?.check_convexity()?;
        // second look at large arguments, on a log grid
        let grid = log_grid(1e-3, 1e6, 1000);
        let vals: Vec<f64> = grid.iter().map(|&u| self.eval(u)).collect();
        let slopes: Vec<f64> = (1..grid.len())
            .map(|i| (vals[i] - vals[i - 1]) / (grid[i] - grid[i - 1]))
            .collect();
        if slopes.windows(2).all(|s| le_rel(s[0], s[1], 1e-9)) {
            Ok(())
        } else {
            Err(Error::Domain(format!("Young function {self:?} is not convex")))
        }
    }
}

/// `sup_{y >= 0} f(y)` for concave `f`. Doubling brackets the maximizer,
/// golden section does the rest. Divergence gives `+∞`.
fn concave_sup<F: Fn(f64) -> f64>(f: F) -> f64 {
    let mut hi = 1.0;
    while f(2.0 * hi) > f(hi) {
        hi *= 2.0;
        if hi > 1e300 {
            return f64::INFINITY;
        }
    }
    let lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    let (_, v) = golden_section_min(|y| -f(y), lo, 2.0 * hi, 1e-13);
    (-v).max(f(0.0))
}

fn check_common(p: f64, c: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Validation(format!("p = {p} must be finite and >= 1")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Validation(format!("coefficient c = {c} must be > 0")));
    }
    Ok(())
}

/// `u ↦ max(N1(u), N2(u))`.
pub fn young_max(first: &YoungFunction, second: &YoungFunction) -> YoungFunction {
    YoungFunction::Max {
        first: Box::new(first.clone()),
        second: Box::new(second.clone()),
    }
}

/// `N*(v) = sup_{u >= 0} (u·v - N(u))`, evaluated numerically.
pub fn conjugate_young(n: &YoungFunction) -> Result<YoungFunction> {
    n.check_convex()?;
    Ok(YoungFunction::Conjugate {
        of: Box::new(n.clone()),
    })
}
