use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight of a generalized Lorentz quasinorm `sup_t w(t)·T_ξ(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "camelCase")]
pub enum WeightFunction {
    /// `t^p`.
    Power { p: f64 },
    /// Log-log interpolation of `(t, w)` nodes; the end segments are
    /// extended as power laws.
    Tabulated { table: Vec<(f64, f64)> },
}

impl WeightFunction {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::Validation(format!("weight exponent p = {p} must be > 0")));
        }
        Ok(WeightFunction::Power { p })
    }

    pub fn tabulated(table: Vec<(f64, f64)>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::Validation("tabulated weight needs at least two nodes".into()));
        }
        let ok = table.iter().all(|&(t, w)| t > 0.0 && w > 0.0 && w.is_finite())
            && table.windows(2).all(|x| x[1].0 > x[0].0 && x[1].1 > x[0].1);
        if !ok {
            return Err(Error::Validation(
                "weight nodes must be positive and strictly increasing".into(),
            ));
        }
        Ok(WeightFunction::Tabulated { table })
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightFunction::Power { p } => t.powf(*p),
            WeightFunction::Tabulated { table } => {
                let n = table.len();
                let k = table.partition_point(|e| e.0 <= t).clamp(1, n - 1);
                let (t1, w1) = table[k - 1];
                let (t2, w2) = table[k];
                let slope = (w2.ln() - w1.ln()) / (t2.ln() - t1.ln());
                (w1.ln() + slope * (t.ln() - t1.ln())).exp()
            }
        }
    }
}
