use super::*;
use alloc::vec;
use crate::curve::{Curve, ExplodingCurve, FlatCurve, GaussianCurve, PowerCurve, SyntheticCurve};
use crate::models::fh_integral::{FhIntegralModel, VolSpec};
use crate::models::flesaker_hughston::FhRationalModel;
use crate::models::linear_rational::LinearRationalModel;
use crate::time::TenorGrid;
use approx::assert_relative_eq;
use proptest::prelude::*;

fn annual() -> TenorGrid {
    TenorGrid::uniform(0.0, 1.0).unwrap()
}

fn fh() -> crate::models::flesaker_hughston::FhRationalCurve {
    FhRationalModel::exponential(0.02, 0.05, 0.2).unwrap().curve(1.0).unwrap()
}

#[test]
fn flat_sum_matches_geometric_series() {
    let s = sum_to_tolerance(&FlatCurve::new(0.05).unwrap(), 0.0, &annual(), 1e-10, 100_000).unwrap();
    assert!(s.converged && s.tail_bound <= 1e-10);
    assert!((s.value - 19.50416649306589).abs() < 1e-9, "{s:?}");
}

#[test]
fn fh_sum_matches_closed_form() {
    let s = sum_to_tolerance(&fh(), 0.0, &annual(), 1e-10, 100_000).unwrap();
    assert!(s.converged);
    assert!((s.value - 34.502916574310775).abs() < 1e-9, "{s:?}");
}

#[test]
fn synthetic_sum_grows_linearly() {
    let s = sum_to_tolerance(&SyntheticCurve::new(0.5, 1.0).unwrap(), 0.0, &annual(), 1e-10, 10_000).unwrap();
    assert!(!s.converged);
    assert_eq!(s.growth, SumGrowth::Linear);
    assert!(s.value >= 0.5 * 10_000.0);
}

#[test]
fn exploding_sum_is_explosive() {
    let s = sum_to_tolerance(&ExplodingCurve::new(0.1).unwrap(), 0.0, &annual(), 1e-10, 100_000).unwrap();
    assert!(!s.converged);
    assert_eq!(s.growth, SumGrowth::Explosive);
}

#[test]
fn swap_rate_examples() {
    let cfg = LongTermConfig::default();
    let (r, _) = long_term_swap_rate(&FlatCurve::new(0.05).unwrap(), 0.0, &annual(), &cfg).unwrap();
    assert_eq!(r.class, LongTermClass::FinitePositive);
    assert!((r.value.unwrap() - 0.05127109637602404).abs() < 1e-10);

    let (r, sum) = long_term_swap_rate(&fh(), 0.0, &annual(), &cfg).unwrap();
    assert!(sum.converged);
    assert!((r.value.unwrap() - 0.028983057065516).abs() < 1e-10);

    let (r, _) = long_term_swap_rate(&ExplodingCurve::new(0.1).unwrap(), 0.0, &annual(), &cfg).unwrap();
    assert_eq!(r.class, LongTermClass::FiniteNegative);
    assert!((r.value.unwrap() + 0.09516258196404043).abs() < 1e-9);

    let (r, _) = long_term_swap_rate(&SyntheticCurve::new(0.5, 1.0).unwrap(), 0.0, &annual(), &cfg).unwrap();
    assert_eq!(r, LimitEstimate::zero());
}

#[test]
fn yield_examples() {
    let cfg = LongTermConfig::default();
    for r in [0.05, -0.01, 0.0] {
        let y = long_term_yield(&FlatCurve::new(r).unwrap(), 0.0, &cfg).unwrap();
        assert!((y.value.unwrap() - r).abs() < 1e-12);
        assert_eq!(y.class, LongTermClass::of_finite(r, cfg.class_tol));
    }
    let y = long_term_yield(&fh(), 0.0, &cfg).unwrap();
    assert_eq!(y.class, LongTermClass::FinitePositive);
    assert!((y.value.unwrap() - 0.02).abs() < 3e-3);
    let y = long_term_yield(&SyntheticCurve::new(0.5, 1.0).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(y.class, LongTermClass::Zero);
    let y = long_term_yield(&GaussianCurve::new(1e-4).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(y.class, LongTermClass::PlusInfinity);
}

#[test]
fn fh_yield_within_log_two_band() {
    let c = fh();
    for tt in [50.0, 100.0, 200.0, 400.0, 800.0, 1600.0] {
        let y = crate::rates::spot_yield(&c, 0.0, tt).unwrap();
        assert!((y - 0.02).abs() <= 0.7 / tt, "T={tt}: {y}");
    }
}

#[test]
fn simple_rate_examples() {
    let cfg = LongTermConfig::default();
    let l = long_term_simple(&FlatCurve::new(0.05).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(l.class, LongTermClass::PlusInfinity);
    let l = long_term_simple(&SyntheticCurve::new(0.5, 1.0).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(l.class, LongTermClass::Zero);
    let l = long_term_simple(&ExplodingCurve::new(0.1).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(l, LimitEstimate::zero());
}

#[test]
fn long_bond_examples() {
    let cfg = LongTermConfig::default();
    assert_eq!(long_bond(&FlatCurve::new(0.05).unwrap(), 0.0, &cfg).unwrap().class, LongTermClass::Zero);
    let p = long_bond(&SyntheticCurve::new(0.5, 1.0).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(p.class, LongTermClass::FinitePositive);
    assert!((p.value.unwrap() - 0.5).abs() < 1e-12);
    let p = long_bond(&ExplodingCurve::new(0.1).unwrap(), 0.0, &cfg).unwrap();
    assert_eq!(p.class, LongTermClass::PlusInfinity);
}

#[test]
fn k_ratio_examples() {
    let k = bond_sum_ratio_k(&FlatCurve::new(0.05).unwrap(), 0.0, &annual(), 100_000).unwrap();
    assert!(k.value.abs() <= 1e-8, "{k:?}");
    let k = bond_sum_ratio_k(&PowerCurve::new(2.0, 1.0).unwrap(), 0.0, &annual(), 100_000).unwrap();
    assert!((k.value - 0.5).abs() <= 1e-6, "{k:?}");
    let k = bond_sum_ratio_k(&PowerCurve::new(3.0, 1.0).unwrap(), 0.0, &annual(), 100_000).unwrap();
    assert!((k.value - 2.0 / 3.0).abs() <= 1e-6, "{k:?}");
    let k = bond_sum_ratio_k(&SyntheticCurve::new(0.5, 1.0).unwrap(), 0.0, &annual(), 100_000).unwrap();
    assert!(k.value.abs() <= 1e-6, "{k:?}");
}

#[test]
fn fh_closed_form_examples() {
    let c = fh_exponential_closed_forms(0.02, 0.05, 1.0, 1.0, 0.0).unwrap();
    assert_relative_eq!(c.alpha_inf, 49.50166665555566, max_relative = 1e-13);
    assert_relative_eq!(c.beta_inf, 19.50416649306589, max_relative = 1e-13);
    assert_relative_eq!(c.swap_rate, 0.028983057065516, max_relative = 1e-12);
    let big = fh_exponential_closed_forms(0.02, 0.05, 1.0, 1e12, 0.0).unwrap();
    assert!((big.swap_rate - 0.05127109637602404).abs() < 1e-9);
    let close = fh_exponential_closed_forms(0.05 - 1e-9, 0.05, 1.0, 1.0, 0.0).unwrap();
    assert!((close.swap_rate - 1.0 / close.beta_inf).abs() < 1e-9);
    assert!(fh_exponential_closed_forms(0.05, 0.02, 1.0, 1.0, 0.0).is_err());
    assert!(fh_exponential_closed_forms(0.0, 0.02, 1.0, 1.0, 0.0).is_err());
}

#[test]
fn fh_closed_form_matches_truncation_at_later_times() {
    let model = FhRationalModel::exponential(0.03, 0.07, 0.2).unwrap();
    let cfg = LongTermConfig::default();
    for (t, m, delta) in [(0.0, 1.0, 1.0), (2.5, 0.4, 0.5), (7.0, 3.0, 0.25)] {
        let closed = fh_exponential_closed_forms(0.03, 0.07, delta, m, t).unwrap();
        let grid = TenorGrid::uniform(t, delta).unwrap();
        let (r, _) = long_term_swap_rate(&model.curve(m).unwrap(), t, &grid, &cfg).unwrap();
        assert!((r.value.unwrap() - closed.swap_rate).abs() < 1e-8);
    }
}

#[test]
fn lr_closed_form_examples() {
    let m = LinearRationalModel::one_factor(0.1, 0.5, 1.0, 1.0, (0.0, 1.0), 0.05).unwrap();
    let c = lr_closed_forms(&m, &[0.5], 0.0, 1.0).unwrap();
    assert!((c.swap_rate - 0.05127109637602404).abs() < 1e-12);
    assert_relative_eq!(c.s_inf, c.alpha_inf, max_relative = 1e-14);
    // Explicit α with k = 0: one geometric sum.
    let c = lr_closed_forms_explicit(0.05, 0.0, 1.5, 0.3, 1.8, 1.0).unwrap();
    assert!((c.swap_rate - 0.05127109637602404).abs() < 1e-12);
    let c = lr_closed_forms_explicit(0.04, 0.0, 1.5, -0.2, 1.3, 0.5).unwrap();
    assert!((c.swap_rate - (0.02f64.exp_m1() / 0.5)).abs() < 1e-12);
    let flat = LinearRationalModel::one_factor(0.1, 0.5, 1.0, 0.0, (0.0, 1.0), 0.05).unwrap();
    let c = lr_closed_forms(&flat, &[0.3], 0.0, 1.0).unwrap();
    assert!(!c.converged);
    let s = sum_to_tolerance(&flat.curve(&[0.3]).unwrap(), 0.0, &annual(), 1e-10, 10_000).unwrap();
    assert!(!s.converged);
    assert!(lr_closed_forms(&m, &[1.5], 0.0, 1.0).is_err());
}

#[test]
fn lr_closed_form_matches_truncation() {
    let m = LinearRationalModel::new(
        0.3, vec![0.4, 0.6], 0.8, vec![1.0, 0.5], vec![0.0, 0.0], vec![1.0, 1.0], 0.05,
    )
    .unwrap();
    let cfg = LongTermConfig::default();
    for x in [[0.4, 0.6], [0.0, 1.0], [0.9, 0.1]] {
        let closed = lr_closed_forms(&m, &x, 0.0, 1.0).unwrap();
        let (r, _) = long_term_swap_rate(&m.curve(&x).unwrap(), 0.0, &annual(), &cfg).unwrap();
        assert!((r.value.unwrap() - closed.swap_rate).abs() < 1e-8);
    }
}

#[test]
fn yield_constant_over_time_in_models() {
    let cfg = LongTermConfig::default();
    let fhm = FhRationalModel::exponential(0.02, 0.05, 0.2).unwrap();
    let lr = LinearRationalModel::one_factor(0.1, 0.5, 1.0, 1.0, (0.0, 1.0), 0.05).unwrap();
    let fhi = FhIntegralModel::exponential(0.03, VolSpec::Decaying { sigma0: 0.2, kappa: 0.2 }).unwrap();
    let series: [(&dyn Curve, f64); 3] = [
        (&fhm.curve(1.3).unwrap(), 0.02),
        (&lr.curve(&[0.7]).unwrap(), 0.05),
        (&fhi.curve(0.4).unwrap(), 0.03),
    ];
    for (curve, level) in series {
        for t in [0.0, 1.0, 5.0] {
            let y = long_term_yield(curve, t, &cfg).unwrap();
            assert!((y.value.unwrap() - level).abs() < 1e-4, "t={t}: {y:?}");
        }
    }
}

#[test]
fn ladder_classifier_rules() {
    let cfg = LongTermConfig::default();
    let c = classify_ladder(&[1.0, 2.0, 3.0, f64::INFINITY], &cfg);
    assert_eq!(c.class, LongTermClass::PlusInfinity);
    let c = classify_ladder(&[0.3, 0.1, 0.5, 0.2], &cfg);
    assert_eq!(c.class, LongTermClass::Undetermined);
    let c = classify_ladder(&[0.3, 0.1, 0.02, 0.02], &cfg);
    assert_eq!(c, LimitEstimate::new(Some(0.02), LongTermClass::FinitePositive));
    let c = classify_ladder(&[f64::NAN, 0.1], &cfg);
    assert_eq!(c.class, LongTermClass::Undetermined);
}

#[derive(Debug)]
enum Sample {
    Flat(FlatCurve),
    Synthetic(SyntheticCurve),
    Exploding(ExplodingCurve),
    Fh(crate::models::flesaker_hughston::FhRationalCurve),
}

impl Curve for Sample {
    fn price(&self, t: f64, maturity: f64) -> crate::Result<f64> {
        match self {
            Sample::Flat(c) => c.price(t, maturity),
            Sample::Synthetic(c) => c.price(t, maturity),
            Sample::Exploding(c) => c.price(t, maturity),
            Sample::Fh(c) => c.price(t, maturity),
        }
    }
}

fn curve_strategy() -> impl Strategy<Value = Sample> {
    prop_oneof![
        (0.005f64..0.2).prop_map(|r| Sample::Flat(FlatCurve::new(r).unwrap())),
        (0.05f64..0.95, 0.1f64..2.0).prop_map(|(a, l)| Sample::Synthetic(SyntheticCurve::new(a, l).unwrap())),
        (0.01f64..0.4).prop_map(|l| Sample::Exploding(ExplodingCurve::new(l).unwrap())),
        (0.01f64..0.08, 0.01f64..0.1, 0.2f64..5.0).prop_map(|(a, gap, m)| {
            Sample::Fh(FhRationalModel::exponential(a, a + gap, 0.2).unwrap().curve(m).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn swap_rate_sign_laws(curve in curve_strategy()) {
        let cfg = LongTermConfig { n_max: 20_000, ..LongTermConfig::default() };
        let (r, sum) = long_term_swap_rate(&curve, 0.0, &annual(), &cfg).unwrap();
        prop_assert_ne!(r.class, LongTermClass::PlusInfinity);
        if sum.converged {
            prop_assert!(sum.tail_bound <= cfg.sum_tol);
            prop_assert!((r.value.unwrap() - 1.0 / sum.value).abs() <= 1e-10);
            prop_assert!(r.value.unwrap() > 0.0);
        } else if let Some(v) = r.value {
            prop_assert!(v <= 0.0);
        }
        let bond = long_bond(&curve, 0.0, &cfg).unwrap();
        if matches!(bond.class, LongTermClass::FinitePositive | LongTermClass::PlusInfinity) {
            prop_assert!(!sum.converged);
        }
        if bond.class == LongTermClass::PlusInfinity {
            prop_assert_eq!(long_term_simple(&curve, 0.0, &cfg).unwrap(), LimitEstimate::zero());
        }
        let k = bond_sum_ratio_k(&curve, 0.0, &annual(), 5_000).unwrap();
        prop_assert!((0.0..=1.0).contains(&k.value));
    }

    #[test]
    fn partial_sums_non_decreasing(a in 0.05f64..0.95, l in 0.1f64..2.0, n in 1usize..400) {
        let c = SyntheticCurve::new(a, l).unwrap();
        let s1 = sum_to_tolerance(&c, 0.0, &annual(), 1e-10, n).unwrap();
        let s2 = sum_to_tolerance(&c, 0.0, &annual(), 1e-10, n + 1).unwrap();
        prop_assert!(s2.value >= s1.value);
    }
}
