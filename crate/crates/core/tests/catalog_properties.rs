use proptest::prelude::*;

use ri_tails::catalog::{
    characteristic, lp_norm, natural_psi, norm, AnalyticRV, DiscreteRV, PsiFunction,
    RandomVariable, SpaceDescriptor, WeightFunction, YoungFunction,
};
use ri_tails::optimize::{lin_grid, log_grid};

fn discrete() -> impl Strategy<Value = DiscreteRV> {
    prop::collection::vec((0.01f64..50.0, 0.05f64..1.0), 1..6).prop_filter_map(
        "distinct values",
        |raw| {
            let total: f64 = raw.iter().map(|a| a.1).sum();
            let mut atoms: Vec<(f64, f64)> = raw.iter().map(|&(v, w)| (v, w / total)).collect();
            atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
            atoms.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-6);
            // renormalize after dedup
            let s: f64 = atoms.iter().map(|a| a.1).sum();
            for a in atoms.iter_mut() {
                a.1 /= s;
            }
            DiscreteRV::new(atoms).ok()
        },
    )
}

fn homogeneous_spaces() -> Vec<SpaceDescriptor> {
    vec![
        SpaceDescriptor::lp(1.0).unwrap(),
        SpaceDescriptor::lp(2.5).unwrap(),
        SpaceDescriptor::lp(f64::INFINITY).unwrap(),
        SpaceDescriptor::orlicz(YoungFunction::power(3.0).unwrap()),
        SpaceDescriptor::orlicz(YoungFunction::power_log(2.0, 1.0).unwrap()),
        SpaceDescriptor::gls(PsiFunction::grid_blowup(2.0, 0.5).unwrap()),
        SpaceDescriptor::gls(PsiFunction::power_root(1.0).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 24,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn norms_are_homogeneous(rv in discrete(), c in 0.05f64..20.0) {
        let base: RandomVariable = rv.clone().into();
        let scaled: RandomVariable = rv.scaled(c).unwrap().into();
        for space in homogeneous_spaces() {
            let (a, b) = (norm(&space, &base).unwrap(), norm(&space, &scaled).unwrap());
            prop_assert!((b - c * a).abs() <= 1e-10 * (c * a), "{} {} {}", space, a, b);
        }
    }

    #[test]
    fn degenerate_psi_is_lp(rv in discrete(), r in 1.0f64..6.0) {
        let rv: RandomVariable = rv.into();
        let g = norm(&SpaceDescriptor::gls(PsiFunction::degenerate(r).unwrap()), &rv).unwrap();
        let l = lp_norm(&rv, r).unwrap();
        prop_assert!((g - l).abs() <= 1e-10 * l);
    }

    #[test]
    fn unit_luxemburg_norm_saturates_modular(rv in discrete(), p in 1.0f64..4.0, q in 0.0f64..2.0) {
        let n = YoungFunction::power_log(p, q).unwrap();
        let k = norm(&SpaceDescriptor::orlicz(n.clone()), &rv.clone().into()).unwrap();
        let unit = rv.scaled(1.0 / k).unwrap();
        let modular = unit.expect(|v| n.eval(v));
        prop_assert!((modular - 1.0).abs() <= 1e-8, "{}", modular);
    }

    #[test]
    fn lorentz_power_matches_lp_beyond_one(p in 0.5f64..6.0) {
        let lor = characteristic(&SpaceDescriptor::lorentz(WeightFunction::power(p).unwrap())).unwrap();
        // Lp needs p >= 1; compare against the closed form for smaller p
        for t in log_grid(1.0 + 1e-9, 1e6, 200) {
            let expected = t.powf(-p).min(1.0);
            prop_assert!((lor.eval(t) - expected).abs() <= 1e-15);
        }
        if p >= 1.0 {
            let lp = characteristic(&SpaceDescriptor::lp(p).unwrap()).unwrap();
            for t in log_grid(1.0 + 1e-9, 1e6, 200) {
                prop_assert!((lor.eval(t) - lp.eval(t)).abs() <= 1e-15 * lp.eval(t));
            }
        }
    }
}

#[test]
fn analytic_homogeneity() {
    let base = AnalyticRV::power_singularity(0.3).unwrap();
    for c in [0.1, 3.0] {
        let scaled: RandomVariable = base.scaled(c).unwrap().into();
        for space in homogeneous_spaces() {
            let a = norm(&space, &base.into()).unwrap();
            let b = norm(&space, &scaled).unwrap();
            if a.is_infinite() {
                assert!(b.is_infinite());
            } else {
                assert!((b - c * a).abs() <= 1e-10 * c * a, "{space}: {a} {b}");
            }
        }
    }
}

#[test]
fn natural_function_of_inverse_sqrt_matches_grid_blowup() {
    let xi2: RandomVariable = AnalyticRV::power_singularity(0.5).unwrap().into();
    let psi = PsiFunction::grid_blowup(2.0, 0.5).unwrap();
    let ratio_on = |grid: &[f64]| -> Vec<f64> {
        let nat = natural_psi(&xi2, grid).unwrap();
        grid.iter().map(|&p| nat.eval(p) / psi.eval(p)).collect()
    };
    // closed form |ξ₂|_p = (2/(2-p))^{1/p}
    let fine = lin_grid(1.0, 1.999, 500);
    let nat = natural_psi(&xi2, &fine).unwrap();
    for &p in &fine {
        let closed = (2.0 / (2.0 - p)).powf(1.0 / p);
        assert!((nat.eval(p) - closed).abs() <= 1e-9 * closed, "{p}");
    }
    let coarse = ratio_on(&lin_grid(1.0, 1.999, 50));
    let c1 = coarse.iter().cloned().fold(f64::INFINITY, f64::min);
    let c2 = coarse.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!(c1 > 0.5 && c2 < 4.0, "[{c1}, {c2}]");
    for r in ratio_on(&fine) {
        assert!(r >= c1 * (1.0 - 1e-2) && r <= c2 * (1.0 + 1e-2), "{r} outside [{c1}, {c2}]");
    }
}
