//! Catalog of rearrangement-invariant spaces: descriptors, norms of concrete
//! random variables, Tchebychev characteristics and fundamental functions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::convex::gls_upper_tail;
use crate::error::{Error, Result};
use crate::tail::{Provenance, TailFunction, DEFAULT_T0};

mod norm;
mod parse;
pub mod psi;
pub mod rv;
pub mod weight;
pub mod young;

pub use norm::{lp_norm, norm};
pub use parse::parse_space_spec;
pub use psi::PsiFunction;
pub use rv::{AnalyticRV, DiscreteRV, RandomVariable};
pub use weight::WeightFunction;
pub use young::{conjugate_young, young_max, YoungFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MeasureModel {
    /// `(0, 1)` with Lebesgue measure.
    Probabilistic,
    /// `(0, ∞)` with Lebesgue measure.
    SigmaFiniteInfinite,
}

impl MeasureModel {
    pub fn total_mass(self) -> f64 {
        match self {
            MeasureModel::Probabilistic => 1.0,
            MeasureModel::SigmaFiniteInfinite => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase")]
pub enum Family {
    /// `L_p`, `1 <= p <= ∞`.
    Lp { p: f64 },
    Lorentz { w: WeightFunction },
    Orlicz { n: YoungFunction },
    Gls { psi: PsiFunction },
}

/// One space from the catalog together with its measure model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub family: Family,
    pub measure: MeasureModel,
}

impl SpaceDescriptor {
    pub fn new(family: Family, measure: MeasureModel) -> Result<Self> {
        match &family {
            Family::Lp { p } => {
                if !(*p >= 1.0) {
                    return Err(Error::Validation(format!("L_p needs p >= 1, got {p}")));
                }
            }
            Family::Lorentz { .. } | Family::Orlicz { .. } | Family::Gls { .. } => {
                if measure != MeasureModel::Probabilistic {
                    return Err(Error::Validation(
                        "Lorentz, Orlicz and GLS spaces are only cataloged over a probability space"
                            .into(),
                    ));
                }
            }
        }
        Ok(SpaceDescriptor { family, measure })
    }

    pub fn lp(p: f64) -> Result<Self> {
        SpaceDescriptor::new(Family::Lp { p }, MeasureModel::Probabilistic)
    }

    pub fn lp_infinite_measure(p: f64) -> Result<Self> {
        SpaceDescriptor::new(Family::Lp { p }, MeasureModel::SigmaFiniteInfinite)
    }

    pub fn orlicz(n: YoungFunction) -> Self {
        SpaceDescriptor {
            family: Family::Orlicz { n },
            measure: MeasureModel::Probabilistic,
        }
    }

    pub fn lorentz(w: WeightFunction) -> Self {
        SpaceDescriptor {
            family: Family::Lorentz { w },
            measure: MeasureModel::Probabilistic,
        }
    }

    pub fn gls(psi: PsiFunction) -> Self {
        SpaceDescriptor {
            family: Family::Gls { psi },
            measure: MeasureModel::Probabilistic,
        }
    }

    pub fn is_probabilistic(&self) -> bool {
        self.measure == MeasureModel::Probabilistic
    }

    /// Short family label used in report subjects.
    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Lp { p } if p.is_infinite() => "linf",
            Family::Lp { .. } => "lp",
            Family::Lorentz { .. } => "lorentz",
            Family::Orlicz { .. } => "orlicz",
            Family::Gls { .. } => "gls",
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Lp { p } if p.is_infinite() => write!(f, "linf")?,
            Family::Lp { p } => write!(f, "lp:p={p}")?,
            Family::Lorentz { w } => match w {
                WeightFunction::Power { p } => write!(f, "lorentz:w=power,p={p}")?,
                WeightFunction::Tabulated { table } => {
                    write!(f, "lorentz:w=tabulated({} nodes)", table.len())?
                }
            },
            Family::Orlicz { n } => write!(f, "orlicz:{}", young_label(n))?,
            Family::Gls { psi } => match psi {
                PsiFunction::GridBlowup { b, beta } => write!(f, "gls:B={b},beta={beta}")?,
                PsiFunction::PowerRoot { m } => write!(f, "gls:form=powerroot,m={m}")?,
                PsiFunction::Degenerate { r } => write!(f, "gls:form=degenerate,r={r}")?,
                PsiFunction::Natural { table } => {
                    write!(f, "gls:form=natural({} nodes)", table.len())?
                }
            },
        }
        if self.measure == MeasureModel::SigmaFiniteInfinite {
            let sep = if matches!(self.family, Family::Lp { p } if p.is_infinite()) {
                ":"
            } else {
                ","
            };
            write!(f, "{sep}measure=infinite")?;
        }
        Ok(())
    }
}

fn young_label(n: &YoungFunction) -> String {
    match n {
        YoungFunction::Power { p, c } if *c == 1.0 => format!("form=power,p={p}"),
        YoungFunction::Power { p, c } => format!("form=power,p={p},c={c}"),
        YoungFunction::PowerLog { p, q, c } if *c == 1.0 => format!("form=powerlog,p={p},q={q}"),
        YoungFunction::PowerLog { p, q, c } => format!("form=powerlog,p={p},q={q},c={c}"),
        YoungFunction::Max { first, second } => {
            format!("max({}; {})", young_label(first), young_label(second))
        }
        YoungFunction::Conjugate { of } => format!("conjugate({})", young_label(of)),
    }
}

/// Closed-form (or optimization-bound) Tchebychev characteristic.
pub fn characteristic(space: &SpaceDescriptor) -> Result<TailFunction> {
    let mass = space.measure.total_mass();
    let closed = |f: Box<dyn Fn(f64) -> f64 + Send + Sync>| {
        TailFunction::new(f, mass, DEFAULT_T0, Provenance::ClosedForm)
    };
    match &space.family {
        Family::Lp { p } if p.is_infinite() => {
            closed(Box::new(move |t| if t > 1.0 { 0.0 } else { mass }))
        }
        Family::Lp { p } => {
            let p = *p;
            closed(Box::new(move |t| t.powf(-p).min(mass)))
        }
        Family::Lorentz { w } => {
            let w = w.clone();
            closed(Box::new(move |t| (1.0 / w.eval(t)).min(1.0)))
        }
        Family::Orlicz { n } => {
            let n = n.clone();
            closed(Box::new(move |t| (1.0 / n.eval(t)).min(1.0)))
        }
        Family::Gls { psi } => Ok(gls_upper_tail(psi)?.with_provenance(Provenance::OptimizationBound)),
    }
}

/// Fundamental function `δ ↦ φ_F(δ)` of a cataloged space.
#[derive(Clone)]
pub struct Fundamental {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    measure: MeasureModel,
    asymptotic: bool,
    increasing_from: f64,
}

impl fmt::Debug for Fundamental {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fundamental")
            .field("measure", &self.measure)
            .field("asymptotic", &self.asymptotic)
            .finish_non_exhaustive()
    }
}

impl Fundamental {
    pub fn eval(&self, delta: f64) -> Result<f64> {
        let ok = match self.measure {
            MeasureModel::Probabilistic => delta > 0.0 && delta <= 1.0,
            MeasureModel::SigmaFiniteInfinite => delta > 0.0 && delta.is_finite(),
        };
        if !ok {
            return Err(Error::Domain(format!(
                "δ = {delta} outside the admissible range for {:?} measure",
                self.measure
            )));
        }
        Ok((self.eval)(delta))
    }

    /// Whether the values are an asymptotic form with unit constants rather
    /// than the exact fundamental function.
    pub fn is_asymptotic(&self) -> bool {
        self.asymptotic
    }

    /// `t` beyond which `t ↦ 1/φ(1/t)` is increasing.
    pub fn increasing_from(&self) -> f64 {
        self.increasing_from
    }
}

/// `sup_p δ^{1/p} / ψ(p)`: the GLS norm of an indicator of measure `δ`.
pub(crate) fn gls_indicator_norm(psi: &PsiFunction, delta: f64) -> f64 {
    let ld = delta.ln();
    psi.p_grid()
        .into_iter()
        .map(|p| {
            let v = psi.eval(p);
            if v == f64::INFINITY {
                f64::NEG_INFINITY
            } else {
                ld / p - v.ln()
            }
        })
        .fold(f64::NEG_INFINITY, f64::max)
        .exp()
}

pub fn fundamental(space: &SpaceDescriptor) -> Result<Fundamental> {
    let make = |f: Box<dyn Fn(f64) -> f64 + Send + Sync>, asymptotic: bool, from: f64| Fundamental {
        eval: Arc::from(f),
        measure: space.measure,
        asymptotic,
        increasing_from: from,
    };
    Ok(match &space.family {
        Family::Lp { p } => {
            let p = *p;
            make(Box::new(move |d| d.powf(1.0 / p)), false, 1.0)
        }
        Family::Orlicz { n } => {
            let n = n.clone();
            make(Box::new(move |d| 1.0 / n.inverse(1.0 / d)), false, 1.0)
        }
        Family::Lorentz { w } => {
            // ‖I_D‖ = sup_t w(t)·δ·1{t <= 1} = δ·w(1) for increasing w
            let w1 = w.eval(1.0);
            make(Box::new(move |d| d * w1), false, 1.0)
        }
        Family::Gls { psi } => match psi {
            PsiFunction::GridBlowup { b, beta } => {
                let (b, beta) = (*b, *beta);
                make(
                    Box::new(move |d| d.powf(1.0 / b) * d.ln().abs().powf(beta)),
                    true,
                    (beta * b).exp(),
                )
            }
            PsiFunction::Degenerate { r } => {
                let r = *r;
                make(Box::new(move |d| d.powf(1.0 / r)), false, 1.0)
            }
            other => {
                let psi = other.clone();
                make(Box::new(move |d| gls_indicator_norm(&psi, d)), false, 1.0)
            }
        },
    })
}

/// Tabulated natural generating function `p ↦ |ξ|_p`. Grid points where the
/// moment is infinite truncate the support to the finite prefix.
pub fn natural_psi(rv: &RandomVariable, p_grid: &[f64]) -> Result<PsiFunction> {
    if p_grid.is_empty() {
        return Err(Error::Usage("empty p-grid".into()));
    }
    let mut table = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let v = lp_norm(rv, p)?;
        if !v.is_finite() {
            break;
        }
        table.push((p, v));
    }
    if table.is_empty() {
        return Err(Error::Domain(format!(
            "moment of order {} is already infinite",
            p_grid[0]
        )));
    }
    PsiFunction::natural(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_examples() {
        let t = characteristic(&SpaceDescriptor::lp(2.0).unwrap()).unwrap();
        assert!((t.eval(10.0) - 0.01).abs() < 1e-15);
        assert_eq!(t.eval(0.5), 1.0);
        let inf = characteristic(&SpaceDescriptor::lp_infinite_measure(2.0).unwrap()).unwrap();
        assert_eq!(inf.eval(0.5), 4.0);
        let linf = characteristic(&SpaceDescriptor::lp(f64::INFINITY).unwrap()).unwrap();
        assert_eq!(linf.eval(1.0), 1.0);
        assert_eq!(linf.eval(1.0001), 0.0);
        let orl = characteristic(&SpaceDescriptor::orlicz(YoungFunction::power(3.0).unwrap())).unwrap();
        assert!((orl.eval(10.0) - 0.001).abs() < 1e-15);
        let lor = characteristic(&SpaceDescriptor::lorentz(WeightFunction::power(2.0).unwrap())).unwrap();
        assert!((lor.eval(10.0) - 0.01).abs() < 1e-15);
        let gls = characteristic(&SpaceDescriptor::gls(PsiFunction::power_root(1.0).unwrap())).unwrap();
        let s = 5.0 * std::f64::consts::E;
        assert!((gls.eval(s) - (-5.0f64).exp()).abs() < 1e-12);
        assert_eq!(gls.provenance(), Provenance::OptimizationBound);
    }

    #[test]
    fn fundamental_examples() {
        let lp = fundamental(&SpaceDescriptor::lp(2.0).unwrap()).unwrap();
        assert!((lp.eval(0.25).unwrap() - 0.5).abs() < 1e-15);
        let orl = fundamental(&SpaceDescriptor::orlicz(YoungFunction::power(2.0).unwrap())).unwrap();
        assert!((orl.eval(0.25).unwrap() - 0.5).abs() < 1e-12);
        let gls = fundamental(&SpaceDescriptor::gls(PsiFunction::grid_blowup(2.0, 1.0).unwrap())).unwrap();
        // 0.01^{1/2}·|log 0.01| = 0.1·4.60517...
        assert!((gls.eval(0.01).unwrap() - 0.460_517_018_598_809).abs() < 1e-12);
        assert!(gls.is_asymptotic());
        assert!(matches!(lp.eval(1.5), Err(Error::Domain(_))));
        assert!(matches!(lp.eval(0.0), Err(Error::Domain(_))));
        let lor = fundamental(&SpaceDescriptor::lorentz(WeightFunction::power(2.0).unwrap())).unwrap();
        assert_eq!(lor.eval(0.3).unwrap(), 0.3);
    }

    #[test]
    fn gls_indicator_norm_scaling() {
        // sup_p δ^{1/p}(B-p)^β is maximized at B - p ≈ βB²/|log δ|, which
        // gives δ^{1/B}·(βB²/(e|log δ|))^β: the log factor enters with
        // exponent -β, unlike the unit-constant asymptotic form.
        let (b, beta) = (2.0, 1.0);
        let psi = PsiFunction::grid_blowup(b, beta).unwrap();
        for d in crate::optimize::log_grid(1e-300, 1e-30, 10) {
            let l = d.ln().abs();
            let predicted = d.powf(1.0 / b) * (beta * b * b / (std::f64::consts::E * l)).powf(beta);
            let r = gls_indicator_norm(&psi, d) / predicted;
            assert!((r - 1.0).abs() < 0.1, "{d}: {r}");
        }
    }

    #[test]
    fn descriptor_validation() {
        assert!(SpaceDescriptor::lp(0.5).is_err());
        assert!(SpaceDescriptor::new(
            Family::Orlicz {
                n: YoungFunction::power(2.0).unwrap()
            },
            MeasureModel::SigmaFiniteInfinite
        )
        .is_err());
    }

    #[test]
    fn display_roundtrips_through_parser() {
        for s in [
            "lp:p=2",
            "linf",
            "lorentz:w=power,p=2",
            "orlicz:form=powerlog,p=2,q=1",
            "gls:B=2,beta=0.5",
            "gls:form=powerroot,m=1",
            "gls:form=degenerate,r=2",
            "lp:p=3,measure=infinite",
        ] {
            let d = parse_space_spec(s).unwrap();
            assert_eq!(parse_space_spec(&d.to_string()).unwrap(), d, "{s}");
        }
    }
}
