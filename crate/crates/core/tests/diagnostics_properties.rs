use proptest::prelude::*;

use ri_tails::catalog::{
    characteristic, parse_space_spec, RandomVariable, SpaceDescriptor, WeightFunction,
    YoungFunction,
};
use ri_tails::diagnostics::{associate_product, regularity_report, sum_characteristic_bounds};
use ri_tails::montecarlo::verify_tail_bound;
use ri_tails::optimize::log_grid;
use ri_tails::report::Verdict;
use ri_tails::tail::{dilate, equivalence_check, tail_of_rv};
use ri_tails::witness::{lorentz_witness, lp_witness, orlicz_witness};

const CATALOG: [&str; 7] = [
    "lp:p=1.5",
    "lp:p=3",
    "orlicz:form=power,p=2",
    "orlicz:form=powerlog,p=2,q=1",
    "lorentz:w=power,p=2",
    "gls:B=2,beta=1",
    "gls:form=powerroot,m=1",
];

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn dilated_characteristics_stay_equivalent(k in 0usize..CATALOG.len(), c in 0.5f64..2.0) {
        let tail = characteristic(&parse_space_spec(CATALOG[k]).unwrap()).unwrap();
        let grid = log_grid(2.0, 1e6, 60);
        let w = equivalence_check(&dilate(&tail, c).unwrap(), &tail, &grid).unwrap();
        prop_assert!(w.is_some(), "{} dilated by {}", CATALOG[k], c);
    }

    #[test]
    fn lebesgue_pairs_are_exact(p in 1.05f64..12.0) {
        let q = p / (p - 1.0);
        let r = associate_product(
            &SpaceDescriptor::lp(p).unwrap(),
            &SpaceDescriptor::lp(q).unwrap(),
            &log_grid(2.0, 1e6, 30),
            &log_grid(1e-6, 1.0, 30),
        )
        .unwrap();
        prop_assert_eq!(r.verdict, Verdict::Exact);
    }

    #[test]
    fn lebesgue_spaces_are_regular(p in 1.0f64..12.0) {
        let r = regularity_report(&SpaceDescriptor::lp(p).unwrap(), &log_grid(2.0, 1e6, 30)).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Exact);
    }

    #[test]
    fn witness_tails_stay_below_characteristic(p in 1.0f64..10.0, t in 1.01f64..1000.0) {
        let w = lp_witness(p, t).unwrap();
        let tail = tail_of_rv(&w.rv.into());
        let ch = characteristic(&SpaceDescriptor::lp(p).unwrap()).unwrap();
        for s in log_grid(1e-2, 1e4, 300) {
            prop_assert!(tail.eval(s) <= ch.eval(s) * (1.0 + 1e-12), "s={}", s);
        }
    }

    #[test]
    fn power_log_witnesses_saturate(p in 1.0f64..4.0, q in 0.0f64..2.0, t in 2.0f64..200.0) {
        let n = YoungFunction::power_log(p, q).unwrap();
        prop_assume!(n.eval(t) > 1.0);
        let w = orlicz_witness(&n, t).unwrap();
        prop_assert!(w.saturated, "{:?}", w);
        let tail = tail_of_rv(&w.rv.into());
        let ch = characteristic(&SpaceDescriptor::orlicz(n)).unwrap();
        for s in log_grid(1e-2, 1e4, 200) {
            prop_assert!(tail.eval(s) <= ch.eval(s) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn lorentz_witness_tails_stay_below(p in 0.5f64..4.0, t in 1.5f64..100.0) {
        let w = WeightFunction::power(p).unwrap();
        let r = lorentz_witness(&w, t).unwrap();
        prop_assert!((r.norm_value - 1.0).abs() <= 1e-10);
        let tail = tail_of_rv(&r.rv.into());
        let ch = characteristic(&SpaceDescriptor::lorentz(w)).unwrap();
        for s in log_grid(1e-2, 1e4, 200) {
            prop_assert!(tail.eval(s) <= ch.eval(s) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn sandwich_holds_for_every_catalog_pair() {
    // GLS tails come from a nested Legendre transform, so their pairs use a coarser grid
    let fine = log_grid(2.0, 1e6, 200);
    let coarse = log_grid(2.0, 1e6, 24);
    let tails: Vec<_> = CATALOG
        .iter()
        .map(|s| characteristic(&parse_space_spec(s).unwrap()).unwrap())
        .collect();
    for i in 0..tails.len() {
        for j in i..tails.len() {
            let gls = CATALOG[i].starts_with("gls") || CATALOG[j].starts_with("gls");
            let grid = if gls { &coarse } else { &fine };
            let r = sum_characteristic_bounds(&tails[i], &tails[j], grid).unwrap();
            assert_ne!(r.verdict, Verdict::Violated, "{} + {}", CATALOG[i], CATALOG[j]);
        }
    }
}

#[test]
fn orlicz_associate_direction_holds() {
    for n in [
        YoungFunction::power(1.5).unwrap(),
        YoungFunction::power(4.0).unwrap(),
        YoungFunction::power_log(3.0, 0.5).unwrap(),
    ] {
        let f = SpaceDescriptor::orlicz(n.clone());
        let g = SpaceDescriptor::orlicz(ri_tails::catalog::conjugate_young(&n).unwrap());
        let r = associate_product(&f, &g, &log_grid(2.0, 1e6, 40), &log_grid(1e-6, 1.0, 40)).unwrap();
        let (lo, hi) = r.ratio_range();
        assert!(lo >= 1.0 - 1e-9 && hi <= 2.0 + 1e-6, "{f}: [{lo}, {hi}]");
        assert_eq!(r.verdict, Verdict::BoundedRatio);
    }
}

#[test]
fn witnesses_never_violate_their_bound() {
    let cube = YoungFunction::power(3.0).unwrap();
    let w2 = WeightFunction::power(2.0).unwrap();
    let cases: Vec<(SpaceDescriptor, RandomVariable)> = vec![
        (SpaceDescriptor::lp(1.5).unwrap(), lp_witness(1.5, 10.0).unwrap().rv.into()),
        (SpaceDescriptor::lp(3.0).unwrap(), lp_witness(3.0, 4.0).unwrap().rv.into()),
        (SpaceDescriptor::orlicz(cube.clone()), orlicz_witness(&cube, 5.0).unwrap().rv.into()),
        (SpaceDescriptor::lorentz(w2.clone()), lorentz_witness(&w2, 10.0).unwrap().rv.into()),
    ];
    let grid = log_grid(1.0, 50.0, 30);
    for (space, rv) in &cases {
        for seed in [1, 2, 3] {
            let r = verify_tail_bound(space, rv, &grid, 1_000_000, seed).unwrap();
            assert_ne!(r.verdict, Verdict::Violated, "{space} seed {seed}: {:?}", r.notes);
        }
    }
}
