use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generating function of a Grand Lebesgue Space: `ψ(p)` on a support
/// interval, `+∞` outside it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "camelCase")]
pub enum PsiFunction {
    /// `(B - p)^{-β}` on `[1, B)`.
    GridBlowup { b: f64, beta: f64 },
    /// `p^{1/m}` on `[1, ∞)`.
    PowerRoot { m: f64 },
    /// Moment profile `p ↦ |ξ|_p` tabulated at increasing `p`; `log ψ` is
    /// interpolated linearly between nodes.
    Natural { table: Vec<(f64, f64)> },
    /// `1` at `p = r`, `+∞` elsewhere.
    Degenerate { r: f64 },
}

impl PsiFunction {
    pub fn grid_blowup(b: f64, beta: f64) -> Result<Self> {
        if !(b > 1.0 && b.is_finite()) {
            return Err(Error::Validation(format!("B = {b} must be finite and > 1")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Validation(format!("beta = {beta} must be > 0")));
        }
        Ok(PsiFunction::GridBlowup { b, beta })
    }

    pub fn power_root(m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Validation(format!("m = {m} must be > 0")));
        }
        Ok(PsiFunction::PowerRoot { m })
    }

    pub fn degenerate(r: f64) -> Result<Self> {
        if !(r >= 1.0 && r.is_finite()) {
            return Err(Error::Validation(format!("r = {r} must be finite and >= 1")));
        }
        Ok(PsiFunction::Degenerate { r })
    }

    pub fn natural(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::Validation("natural ψ needs at least one node".into()));
        }
        if table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Validation("natural ψ nodes must increase in p".into()));
        }
        if table.iter().any(|&(p, v)| !(p >= 1.0 && v > 0.0 && v.is_finite())) {
            return Err(Error::Validation(
                "natural ψ needs p >= 1 and finite positive values".into(),
            ));
        }
        Ok(PsiFunction::Natural { table })
    }

    /// Closed support `[A, B]`; `ψ` may still be infinite at `B`.
    pub fn support(&self) -> (f64, f64) {
        match self {
            PsiFunction::GridBlowup { b, .. } => (1.0, *b),
            PsiFunction::PowerRoot { .. } => (1.0, f64::INFINITY),
            PsiFunction::Natural { table } => (table[0].0, table[table.len() - 1].0),
            PsiFunction::Degenerate { r } => (*r, *r),
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        match self {
            PsiFunction::GridBlowup { b, beta } => {
                if (1.0..*b).contains(&p) {
                    (b - p).powf(-beta)
                } else {
                    f64::INFINITY
                }
            }
            PsiFunction::PowerRoot { m } => {
                if p >= 1.0 && p.is_finite() {
                    p.powf(1.0 / m)
                } else {
                    f64::INFINITY
                }
            }
            PsiFunction::Natural { table } => {
                let n = table.len();
                if p < table[0].0 || p > table[n - 1].0 {
                    return f64::INFINITY;
                }
                if n == 1 || p == table[n - 1].0 {
                    return table[n - 1].1;
                }
                let k = table.partition_point(|e| e.0 <= p);
                let (p1, v1) = table[k - 1];
                let (p2, v2) = table[k];
                let s = (p - p1) / (p2 - p1);
                (v1.ln() + s * (v2.ln() - v1.ln())).exp()
            }
            PsiFunction::Degenerate { r } => {
                if p == *r {
                    1.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Moment orders at which GLS norms are sampled: logarithmically
    /// clustered toward a finite right endpoint, geometric on `[1, 10^4]` for
    /// `ψ_m`, the table nodes for natural functions.
    pub fn p_grid(&self) -> Vec<f64> {
        match self {
            PsiFunction::GridBlowup { b, .. } => {
                let a = 1.0;
                (0..400)
                    .map(|i| {
                        let u = 8.0 * i as f64 / 399.0;
                        b - (b - a) * 10f64.powf(-u)
                    })
                    .collect()
            }
            PsiFunction::PowerRoot { .. } => crate::optimize::log_grid(1.0, 1e4, 400),
            PsiFunction::Natural { table } => table.iter().map(|e| e.0).collect(),
            PsiFunction::Degenerate { r } => vec![*r],
        }
    }
}
