use boundcast::eval::{
    cross_validate, default_gamma_grid, evaluate_test, mape, smape, test_predictions, tune_gamma,
    Criterion, EvalSetup,
};
use boundcast::predictors::{KernelKind, ModelId};
use boundcast::preprocess::TransformStep;
use boundcast::{HyperParams, RegressorSpec, TimeSeries};
use proptest::prelude::*;

fn pair_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec(prop_oneof![-100.0f64..-0.01, 0.01f64..100.0], n),
            prop::collection::vec(-100.0f64..100.0, n),
        )
    })
}

proptest! {
    #[test]
    fn smape_is_bounded((actual, predicted) in pair_strategy()) {
        let s = smape(&actual, &predicted).unwrap();
        prop_assert!((0.0..=200.0 + 1e-9).contains(&s));
    }

    #[test]
    fn mape_is_scale_invariant((actual, predicted) in pair_strategy(), c in prop_oneof![-50.0f64..-0.1, 0.1f64..50.0]) {
        let a2: Vec<f64> = actual.iter().map(|x| c * x).collect();
        let p2: Vec<f64> = predicted.iter().map(|x| c * x).collect();
        let m1 = mape(&actual, &predicted).unwrap();
        let m2 = mape(&a2, &p2).unwrap();
        prop_assert!((m1 - m2).abs() <= 1e-9 * m1.max(1.0));
    }

    #[test]
    fn metrics_vanish_only_on_exact_forecasts((actual, predicted) in pair_strategy()) {
        prop_assert_eq!(mape(&actual, &actual).unwrap(), 0.0);
        prop_assert_eq!(smape(&actual, &actual).unwrap(), 0.0);
        let exact = actual.iter().zip(&predicted).all(|(a, p)| a == p);
        if !exact {
            prop_assert!(mape(&actual, &predicted).unwrap() > 0.0);
            prop_assert!(smape(&actual, &predicted).unwrap() > 0.0);
        }
    }
}

fn wavy(n: usize) -> Vec<f64> {
    (0..n)
        .map(|t| 10.0 + 3.0 * (0.7 * t as f64).sin() + 0.5 * (0.23 * t as f64).cos())
        .collect()
}

fn hp() -> HyperParams {
    HyperParams::new(3, RegressorSpec::autoregressive(3))
}

#[test]
fn selection_ignores_test_observations() {
    let mut values = wavy(80);
    let grid = [0.0, 0.05, 0.1, 0.5, 1.0, 2.0];
    let setup = EvalSetup::new(&TimeSeries::new(values.clone()).unwrap(), &[], 60, 20).unwrap();
    let before = cross_validate(&setup, ModelId::Cp, &hp(), &grid).unwrap();
    for x in &mut values[60..] {
        *x = 1000.0 - *x;
    }
    let setup = EvalSetup::new(&TimeSeries::new(values).unwrap(), &[], 60, 20).unwrap();
    let after = cross_validate(&setup, ModelId::Cp, &hp(), &grid).unwrap();
    assert_eq!(before, after);
}

#[test]
fn selection_is_deterministic_and_order_free() {
    let setup = EvalSetup::new(&TimeSeries::new(wavy(70)).unwrap(), &[], 55, 15).unwrap();
    let grid = default_gamma_grid();
    let mut shuffled = grid.clone();
    shuffled.reverse();
    shuffled.swap(3, 40);
    let a = cross_validate(&setup, ModelId::Cp, &hp(), &grid).unwrap();
    let b = cross_validate(&setup, ModelId::Cp, &hp(), &grid).unwrap();
    let c = cross_validate(&setup, ModelId::Cp, &hp(), &shuffled).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn exact_linear_recursion_is_forecast_perfectly() {
    // y_t = 0.6 y_{t-1} − 0.3 y_{t-2} + 4 is reproduced exactly by the AR(2) fit.
    let mut y = vec![3.0, 5.0];
    for t in 2..60 {
        y.push(0.6 * y[t - 1] - 0.3 * y[t - 2] + 4.0);
    }
    let setup = EvalSetup::new(&TimeSeries::new(y).unwrap(), &[], 45, 15).unwrap();
    let hp = HyperParams::new(2, RegressorSpec::affine(2));
    let m = evaluate_test(&setup, ModelId::Cp, &hp, 0.0).unwrap();
    assert!(m.mape < 1e-6 && m.smape < 1e-6, "{m:?}");
}

#[test]
fn constant_series_scores_zero_and_picks_smallest_value() {
    let setup = EvalSetup::new(&TimeSeries::new(vec![4.0; 40]).unwrap(), &[], 30, 10).unwrap();
    let hp = HyperParams::new(2, RegressorSpec::constant(2));
    let grid = [0.3, 0.1, 0.2];
    for model in [ModelId::Cp, ModelId::Nw(KernelKind::Gaussian)] {
        let curve = cross_validate(&setup, model, &hp, &grid).unwrap();
        for c in Criterion::BOTH {
            assert!(curve.scores(c).iter().all(|s| s.unwrap().abs() < 1e-9));
            let sel = curve.select(c).unwrap();
            // Every score is zero up to rounding; the tie rule needs exact equality.
            let min = curve
                .scores(c)
                .iter()
                .map(|s| s.unwrap())
                .fold(f64::INFINITY, f64::min);
            let first = curve
                .grid
                .iter()
                .zip(curve.scores(c))
                .find(|(_, s)| s.unwrap() == min)
                .unwrap();
            assert_eq!(sel.param, *first.0);
        }
        let run = test_predictions(&setup, model, &hp, &[0.1]).unwrap();
        assert!(run.predicted[0].iter().all(|p| (p - 4.0).abs() < 1e-9));
    }
}

#[test]
fn single_grid_value_is_selected() {
    let setup = EvalSetup::new(&TimeSeries::new(wavy(50)).unwrap(), &[], 40, 10).unwrap();
    let sel = tune_gamma(&setup, ModelId::Cp, &hp(), &[0.37], Criterion::Mape).unwrap();
    assert_eq!(sel.param, 0.37);
    let curve = cross_validate(&setup, ModelId::Cp, &hp(), &[0.37]).unwrap();
    assert_eq!(curve.grid.len(), 1);
    assert_eq!(curve.mape[0].unwrap(), sel.cv_score);
}

#[test]
fn test_targets_follow_the_split() {
    let y: Vec<f64> = wavy(60).iter().map(|v| v * 10.0).collect();
    let setup = EvalSetup::new(
        &TimeSeries::new(y.clone()).unwrap(),
        &[TransformStep::Log10],
        45,
        15,
    )
    .unwrap();
    for h in 1..=3 {
        let run = test_predictions(&setup, ModelId::Cp, &hp().with_horizon(h), &[0.0]).unwrap();
        assert_eq!(run.t, (45..60).collect::<Vec<_>>());
        assert_eq!(run.actual, y[45..].to_vec());
    }
}
