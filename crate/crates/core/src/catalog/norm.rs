use super::psi::PsiFunction;
use super::rv::{AnalyticRV, DiscreteRV, RandomVariable};
use super::weight::WeightFunction;
use super::young::YoungFunction;
use super::{Family, SpaceDescriptor};
use crate::error::{Error, Result};
use crate::optimize::{bisect_threshold, golden_section_min, log_grid};
use crate::quad::integrate_to_infinity_scaled;

const QUAD_RTOL: f64 = 1e-12;
const LUX_BRACKET: (f64, f64) = (1e-12, 1e12);

/// Norm of `rv` in `space`; `+∞` when the variable is not in the space.
pub fn norm(space: &SpaceDescriptor, rv: &RandomVariable) -> Result<f64> {
    if !space.is_probabilistic() {
        return Err(Error::Usage(
            "norms of random variables are computed over the probability space only".into(),
        ));
    }
    match &space.family {
        Family::Lp { p } => lp_norm(rv, *p),
        Family::Orlicz { n } => luxemburg_norm(n, rv),
        Family::Lorentz { w } => lorentz_quasinorm(w, rv),
        Family::Gls { psi } => gls_norm(psi, rv),
    }
}

/// `|ξ|_p = (E|ξ|^p)^{1/p}`, `p = ∞` giving the essential supremum.
pub fn lp_norm(rv: &RandomVariable, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("moment order p = {p} must be >= 1")));
    }
    match rv {
        RandomVariable::Discrete(d) => Ok(discrete_lp(d, p)),
        RandomVariable::Analytic(a) => analytic_lp(a, p),
    }
}

fn discrete_lp(d: &DiscreteRV, p: f64) -> f64 {
    if p.is_infinite() {
        return d.max_value();
    }
    // log-sum-exp keeps large p from overflowing
    let logs: Vec<f64> = d
        .atoms()
        .iter()
        .filter(|a| a.0 > 0.0)
        .map(|&(v, w)| p * v.ln() + w.ln())
        .collect();
    if logs.is_empty() {
        return 0.0;
    }
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|l| (l - m).exp()).sum();
    ((m + s.ln()) / p).exp()
}

fn analytic_lp(a: &AnalyticRV, p: f64) -> Result<f64> {
    let AnalyticRV::PowerSingularity { alpha, scale } = *a;
    let decay = 1.0 - alpha * p;
    if p.is_infinite() || decay <= 0.0 {
        return Ok(f64::INFINITY);
    }
    // E ξ^p = ∫_0^1 (scale·ω^{-α})^p dω, with ω = e^{-s}
    let moment = integrate_to_infinity_scaled(
        |s| (p * scale.ln() + (alpha * p - 1.0) * s).exp(),
        0.0,
        1.0 / decay,
        QUAD_RTOL,
    )?;
    Ok(moment.powf(1.0 / p))
}

/// `E N(ξ / k)`.
fn orlicz_modular(n: &YoungFunction, rv: &RandomVariable, k: f64) -> Result<f64> {
    match rv {
        RandomVariable::Discrete(d) => Ok(d.expect(|v| n.eval(v / k))),
        RandomVariable::Analytic(a) => {
            let AnalyticRV::PowerSingularity { alpha, .. } = *a;
            let decay = 1.0 - alpha * n.growth_exponent();
            if decay <= 0.0 {
                return Ok(f64::INFINITY);
            }
            integrate_to_infinity_scaled(
                |s| n.eval(a.eval_log(s) / k) * (-s).exp(),
                0.0,
                1.0 / decay,
                QUAD_RTOL,
            )
        }
    }
}

/// `inf{k > 0 : E N(ξ/k) <= 1}` by bisection on `[1e-12, 1e12]`.
fn luxemburg_norm(n: &YoungFunction, rv: &RandomVariable) -> Result<f64> {
    if let RandomVariable::Discrete(d) = rv {
        if d.max_value() == 0.0 {
            return Ok(0.0);
        }
    }
    let (lo, hi) = LUX_BRACKET;
    let fits = |k: f64| orlicz_modular(n, rv, k).map(|m| m <= 1.0);
    if fits(lo)? {
        return Ok(0.0);
    }
    if !fits(hi)? {
        return Ok(f64::INFINITY);
    }
    let mut err = None;
    let rtol = if matches!(rv, RandomVariable::Discrete(_)) {
        1e-15
    } else {
        1e-12
    };
    let k = bisect_threshold(
        |k| match fits(k) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                true
            }
        },
        lo,
        hi,
        rtol,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(k),
    }
}

/// `sup_{t > 0} w(t)·T_ξ(t)`.
fn lorentz_quasinorm(w: &WeightFunction, rv: &RandomVariable) -> Result<f64> {
    match rv {
        RandomVariable::Discrete(d) => {
            // T_ξ is constant on (v_{k-1}, v_k] and w increases, so the
            // supremum over each such piece sits at the atom.
            let atoms = d.atoms();
            let mut tail = 0.0;
            let mut best: f64 = 0.0;
            for &(v, prob) in atoms.iter().rev() {
                tail += prob;
                if v > 0.0 {
                    best = best.max(w.eval(v) * tail.min(1.0));
                }
            }
            Ok(best)
        }
        RandomVariable::Analytic(a) => {
            let AnalyticRV::PowerSingularity { alpha, scale } = *a;
            let f = |lt: f64| {
                let t = lt.exp();
                let tail = (t / scale).powf(-1.0 / alpha).min(1.0);
                w.eval(t) * tail
            };
            let grid: Vec<f64> = log_grid(1e-12 * scale, 1e12 * scale, 2000)
                .into_iter()
                .map(f64::ln)
                .collect();
            let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
            let best = (0..vals.len())
                .max_by(|&i, &j| vals[i].total_cmp(&vals[j]))
                .unwrap();
            if best == vals.len() - 1 && vals[best] > vals[best - 1] {
                return Ok(f64::INFINITY);
            }
            let lo = grid[best.saturating_sub(1)];
            let hi = grid[(best + 1).min(grid.len() - 1)];
            let (_, neg) = golden_section_min(|x| -f(x), lo, hi, 1e-12);
            Ok(vals[best].max(-neg))
        }
    }
}

/// `sup_p |ξ|_p / ψ(p)` over the ψ sampling grid, refined around the best
/// node for continuous ψ.
fn gls_norm(psi: &PsiFunction, rv: &RandomVariable) -> Result<f64> {
    let ratio = |p: f64| -> Result<f64> {
        let v = psi.eval(p);
        if v == f64::INFINITY {
            return Ok(0.0);
        }
        Ok(lp_norm(rv, p)? / v)
    };
    if let PsiFunction::Degenerate { r } = psi {
        return lp_norm(rv, *r);
    }
    let grid = psi.p_grid();
    let mut vals = Vec::with_capacity(grid.len());
    for &p in &grid {
        let r = ratio(p)?;
        if r == f64::INFINITY {
            return Ok(f64::INFINITY);
        }
        vals.push(r);
    }
    let best = (0..vals.len())
        .max_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .unwrap();
    let mut sup = vals[best];
    if !matches!(psi, PsiFunction::Natural { .. }) && grid.len() > 1 {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let (_, neg) = golden_section_min(|p| -ratio(p).unwrap_or(0.0), lo, hi, 1e-12);
        sup = sup.max(-neg);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{SpaceDescriptor, WeightFunction, YoungFunction};

    fn two_point() -> RandomVariable {
        DiscreteRV::two_point(10.0, 0.01).unwrap().into()
    }

    #[test]
    fn lp_examples() {
        let n = norm(&SpaceDescriptor::lp(2.0).unwrap(), &two_point()).unwrap();
        assert!((n - 1.0).abs() < 1e-14);
        let xi2: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        assert!((lp_norm(&xi2, 1.0).unwrap() - 2.0).abs() < 1e-10);
        assert_eq!(lp_norm(&xi2, 2.0).unwrap(), f64::INFINITY);
        assert_eq!(lp_norm(&two_point(), f64::INFINITY).unwrap(), 10.0);
    }

    #[test]
    fn analytic_moments_near_blowup() {
        // oracle: E ξ^p = (1 - p/2)^{-1}
        let xi2: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        for p in [1.9, 1.99, 1.999] {
            let closed = (1.0 - p / 2.0f64).powf(-1.0 / p);
            let got = lp_norm(&xi2, p).unwrap();
            assert!((got / closed - 1.0).abs() < 1e-10, "{p}: {got} vs {closed}");
        }
    }

    #[test]
    fn orlicz_quadratic_witness_has_unit_norm() {
        let s = SpaceDescriptor::orlicz(YoungFunction::power(2.0).unwrap());
        assert!((norm(&s, &two_point()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orlicz_analytic_matches_lp_for_power() {
        // for N(u) = u^p the Luxemburg norm is the L_p norm
        let xi2: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        let s = SpaceDescriptor::orlicz(YoungFunction::power(1.5).unwrap());
        let lux = norm(&s, &xi2).unwrap();
        let lp = lp_norm(&xi2, 1.5).unwrap();
        assert!((lux / lp - 1.0).abs() < 1e-9, "{lux} {lp}");
        let heavy = SpaceDescriptor::orlicz(YoungFunction::power(2.0).unwrap());
        assert_eq!(norm(&heavy, &xi2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn lorentz_values() {
        let s = SpaceDescriptor::lorentz(WeightFunction::power(2.0).unwrap());
        assert!((norm(&s, &two_point()).unwrap() - 1.0).abs() < 1e-14);
        // ξ₂ has T(t) = t^{-2}: w(t) = t gives sup t·min(1, t^{-2}) = 1 at t = 1
        let xi2: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        let s1 = SpaceDescriptor::lorentz(WeightFunction::power(1.0).unwrap());
        assert!((norm(&s1, &xi2).unwrap() - 1.0).abs() < 1e-9);
        let s3 = SpaceDescriptor::lorentz(WeightFunction::power(3.0).unwrap());
        assert_eq!(norm(&s3, &xi2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn gls_constant_rv_has_unit_norm() {
        let one: RandomVariable = DiscreteRV::constant(1.0).unwrap().into();
        for m in [0.5, 1.0, 3.0] {
            let s = SpaceDescriptor::gls(PsiFunction::power_root(m).unwrap());
            assert!((norm(&s, &one).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gls_norm_of_xi2() {
        // |ξ₂|_p / ψ_{2,1/2}(p) = 2^{1/p}(2-p)^{1/2-1/p}, largest at p = 1
        let xi2: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
        let s = SpaceDescriptor::gls(PsiFunction::grid_blowup(2.0, 0.5).unwrap());
        let v = norm(&s, &xi2).unwrap();
        let dense = (0..100_000)
            .map(|i| 1.0 + 0.999 * i as f64 / 99_999.0)
            .map(|p: f64| 2f64.powf(1.0 / p) * (2.0 - p).powf(0.5 - 1.0 / p))
            .fold(0.0f64, f64::max);
        assert!((v - dense).abs() < 1e-8, "{v} {dense}");
    }

    #[test]
    fn infinite_measure_norm_is_usage_error() {
        let s = SpaceDescriptor::lp_infinite_measure(2.0).unwrap();
        assert!(matches!(norm(&s, &two_point()), Err(Error::Usage(_))));
    }
}
