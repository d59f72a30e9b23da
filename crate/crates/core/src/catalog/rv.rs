use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely supported nonnegative random variable on a probability space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteRV {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteRV {
    /// Builds a random variable from `(value, probability)` pairs. Values must
    /// be distinct and nonnegative, probabilities positive and summing to one.
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Validation("random variable has no atoms".into()));
        }
        let mut total = 0.0;
        for &(v, p) in &atoms {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Validation(format!("atom value {v} must be finite and >= 0")));
            }
            if !(p.is_finite() && p > 0.0) {
                return Err(Error::Validation(format!("atom probability {p} must be > 0")));
            }
            total += p;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        let mut atoms = atoms;
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if atoms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Validation("atom values must be distinct".into()));
        }
        Ok(DiscreteRV { atoms })
    }

    /// `P(ξ = value) = prob`, `P(ξ = 0) = 1 - prob`.
    pub fn two_point(value: f64, prob: f64) -> Result<Self> {
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(Error::Validation(format!("two-point probability {prob} outside (0, 1]")));
        }
        if prob == 1.0 || value == 0.0 {
            return DiscreteRV::new(vec![(value, 1.0)]);
        }
        DiscreteRV::new(vec![(0.0, 1.0 - prob), (value, prob)])
    }

    pub fn constant(c: f64) -> Result<Self> {
        DiscreteRV::new(vec![(c, 1.0)])
    }

    /// Atoms sorted by increasing value.
    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn max_value(&self) -> f64 {
        self.atoms.last().map(|a| a.0).unwrap_or(0.0)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("scale {c} must be positive")));
        }
        Ok(DiscreteRV {
            atoms: self.atoms.iter().map(|&(v, p)| (v * c, p)).collect(),
        })
    }

    /// `E f(ξ)`.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.atoms.iter().map(|&(v, p)| p * f(v)).sum()
    }
}

/// Random variables given by a closed form on `((0, 1), Lebesgue)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "camelCase")]
pub enum AnalyticRV {
    /// `ω ↦ scale · ω^{-alpha}`.
    PowerSingularity { alpha: f64, scale: f64 },
}

impl AnalyticRV {
    pub fn power_singularity(alpha: f64) -> Result<Self> {
        Self::scaled_power_singularity(alpha, 1.0)
    }

    pub fn scaled_power_singularity(alpha: f64, scale: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Validation(format!("exponent alpha = {alpha} must lie in (0, 1)")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Validation(format!("scale {scale} must be positive")));
        }
        Ok(AnalyticRV::PowerSingularity { alpha, scale })
    }

    pub fn eval(&self, omega: f64) -> f64 {
        match *self {
            AnalyticRV::PowerSingularity { alpha, scale } => scale * omega.powf(-alpha),
        }
    }

    /// Value at `ω = e^{-s}`; lets integrals over `(0, 1)` run over `s ∈ [0, ∞)`
    /// without underflow near the singularity.
    pub fn eval_log(&self, s: f64) -> f64 {
        match *self {
            AnalyticRV::PowerSingularity { alpha, scale } => scale * (alpha * s).exp(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        match *self {
            AnalyticRV::PowerSingularity { alpha, scale } => {
                Self::scaled_power_singularity(alpha, scale * c)
            }
        }
    }
}

/// Either kind of random variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum RandomVariable {
    Discrete(DiscreteRV),
    Analytic(AnalyticRV),
}

impl RandomVariable {
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Ok(match self {
            RandomVariable::Discrete(d) => RandomVariable::Discrete(d.scaled(c)?),
            RandomVariable::Analytic(a) => RandomVariable::Analytic(a.scaled(c)?),
        })
    }
}

impl From<DiscreteRV> for RandomVariable {
    fn from(d: DiscreteRV) -> Self {
        RandomVariable::Discrete(d)
    }
}

impl From<AnalyticRV> for RandomVariable {
    fn from(a: AnalyticRV) -> Self {
        RandomVariable::Analytic(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_mass() {
        assert!(DiscreteRV::new(vec![(1.0, 0.5), (2.0, 0.4)]).is_err());
        assert!(DiscreteRV::new(vec![(1.0, -0.5), (2.0, 1.5)]).is_err());
        assert!(DiscreteRV::new(vec![(1.0, 0.5), (1.0, 0.5)]).is_err());
        assert!(DiscreteRV::new(vec![]).is_err());
    }

    #[test]
    fn two_point_layout() {
        let rv = DiscreteRV::two_point(10.0, 0.01).unwrap();
        assert_eq!(rv.atoms(), &[(0.0, 0.99), (10.0, 0.01)]);
        assert_eq!(rv.max_value(), 10.0);
    }

    #[test]
    fn analytic_alpha_range() {
        assert!(AnalyticRV::power_singularity(1.0).is_err());
        assert!(AnalyticRV::power_singularity(0.0).is_err());
        let a = AnalyticRV::power_singularity(0.5).unwrap();
        assert!((a.eval(0.25) - 2.0).abs() < 1e-15);
        assert!((a.eval_log(4.0_f64.ln()) - 2.0).abs() < 1e-14);
    }
}
