//! Two-point random variables `P(ξ = t) = q`, `P(ξ = 0) = 1 - q` that sit on
//! the unit sphere of a space and attain its characteristic at `t`.
//!
//! Grand Lebesgue spaces have no witness here. Their characteristic remains
//! an upper bound.

use serde::{Deserialize, Serialize};

use crate::catalog::{
    characteristic, norm, DiscreteRV, RandomVariable, SpaceDescriptor, WeightFunction,
    YoungFunction,
};
use crate::error::{Error, Result};
use crate::tail::tail_of_rv;

/// Tolerance on both the unit norm and the tail match.
pub const SATURATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessReport {
    /// Family label of the space the witness was built for.
    pub family: String,
    pub t: f64,
    pub rv: DiscreteRV,
    pub norm_value: f64,
    pub tail_at_t: f64,
    pub characteristic_at_t: f64,
    pub saturated: bool,
}

impl WitnessReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("witness report serializes")
    }
}

fn saturates(norm_value: f64, tail: f64, ch: f64) -> bool {
    (norm_value - 1.0).abs() <= SATURATION_TOL && (tail - ch).abs() <= SATURATION_TOL
}

fn build(space: &SpaceDescriptor, t: f64, prob: f64) -> Result<WitnessReport> {
    let rv = DiscreteRV::two_point(t, prob)?;
    let wrapped = RandomVariable::Discrete(rv.clone());
    let norm_value = norm(space, &wrapped)?;
    let tail_at_t = tail_of_rv(&wrapped).eval(t);
    let characteristic_at_t = characteristic(space)?.eval(t);
    Ok(WitnessReport {
        family: space.family_name().to_string(),
        t,
        rv,
        norm_value,
        tail_at_t,
        characteristic_at_t,
        saturated: saturates(norm_value, tail_at_t, characteristic_at_t),
    })
}

/// `P(ξ = t) = t^{-p}`.
pub fn lp_witness(p: f64, t: f64) -> Result<WitnessReport> {
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::Domain(format!("witness level t = {t} must exceed 1")));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p = {p} must be finite and >= 1")));
    }
    build(&SpaceDescriptor::lp(p)?, t, t.powf(-p))
}

/// `P(ξ = t) = 1/N(t)`, so that `E N(ξ) = 1`.
pub fn orlicz_witness(n: &YoungFunction, t: f64) -> Result<WitnessReport> {
    let nt = n.eval(t);
    if !(nt > 1.0 && t.is_finite()) {
        return Err(Error::Domain(format!("N(t) = {nt} at t = {t}; the witness needs N(t) > 1")));
    }
    build(&SpaceDescriptor::orlicz(n.clone()), t, 1.0 / nt)
}

/// `P(ξ = t) = 1/w(t)`.
pub fn lorentz_witness(w: &WeightFunction, t: f64) -> Result<WitnessReport> {
    let wt = w.eval(t);
    if !(wt > 1.0 && t.is_finite()) {
        return Err(Error::Domain(format!("w(t) = {wt} at t = {t}; the witness needs w(t) > 1")));
    }
    build(&SpaceDescriptor::lorentz(w.clone()), t, 1.0 / wt)
}

/// Recomputes norm and characteristic through the catalog and checks the
/// saturation tolerances.
pub fn verify_saturation(space: &SpaceDescriptor, report: &WitnessReport) -> Result<bool> {
    if space.family_name() != report.family {
        return Err(Error::Usage(format!(
            "witness built for {} cannot be checked against {space}",
            report.family
        )));
    }
    let rv = RandomVariable::Discrete(report.rv.clone());
    let norm_value = norm(space, &rv)?;
    let tail = tail_of_rv(&rv).eval(report.t);
    let ch = characteristic(space)?.eval(report.t);
    Ok(saturates(norm_value, tail, ch))
}
