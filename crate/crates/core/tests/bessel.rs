use hyperbolic_sd::bessel::*;
use hyperbolic_sd::samplers::ecf_report;
use hyperbolic_sd::{Error, LawId};

const PATHS: usize = 20_000;
const STEPS: usize = 1_000;

fn close(e: &FunctionalEstimate, rel: f64) {
    assert!(
        e.within(3.0, rel),
        "{} λ={} δ={} x={}: {} ± {} vs {}",
        e.target_id,
        e.lambda,
        e.delta,
        e.x0,
        e.mc_mean,
        e.mc_stderr,
        e.analytic
    );
}

#[test]
fn free_paths_have_the_right_mean() {
    let paths: Vec<PathGrid> = (0..2000)
        .map(|s| simulate_besq(&BesqSpec::free(2.0, 0.0, 100), s).unwrap())
        .collect();
    let mean_end = paths.iter().map(|p| p.values[100]).sum::<f64>() / 2000.0;
    // X₁ ~ 2·Exp(1): sd 2
    assert!((mean_end - 2.0).abs() < 4.0 * 2.0 / (2000f64).sqrt());
    assert!(paths.iter().all(|p| p.values.iter().all(|&v| v >= 0.0)));

    let mart: Vec<f64> = (0..2000)
        .map(|s| simulate_besq(&BesqSpec::free(0.0, 2.0, 100), s).unwrap().values[50])
        .collect();
    let m = mart.iter().sum::<f64>() / 2000.0;
    assert!((m - 2.0).abs() < 0.15);
}

#[test]
fn absorbed_paths_stay_at_zero() {
    let p = simulate_besq(&BesqSpec::free(0.0, 0.0, 50), 1).unwrap();
    assert!(p.values.iter().all(|&v| v == 0.0));
    let p = simulate_besq(&BesqSpec::free(0.0, 0.05, 2000), 3).unwrap();
    if let Some(hit) = p.values.iter().position(|&v| v == 0.0) {
        assert!(p.values[hit..].iter().all(|&v| v == 0.0));
    }
}

#[test]
fn bridges_end_at_zero() {
    let p = simulate_besq_bridge_to_zero(&BesqSpec::bridge(0.0, 0.0, 100), 1).unwrap();
    assert!(p.values.iter().all(|&v| v == 0.0));
    for seed in 0..50 {
        let p = simulate_besq_bridge_to_zero(&BesqSpec::bridge(3.0, 4.0, 200), seed).unwrap();
        assert!(*p.values.last().unwrap() <= BRIDGE_END_TOLERANCE);
        assert!(p.values.iter().all(|&v| v >= 0.0));
        assert_eq!(p.values[0], 4.0);
    }
}

#[test]
fn spec_validation() {
    assert!(simulate_besq(&BesqSpec::bridge(0.0, 1.0, 10), 1).is_err());
    assert!(simulate_besq_bridge_to_zero(&BesqSpec::free(0.0, 1.0, 10), 1).is_err());
    let bad = BesqSpec {
        horizon: 2.0,
        ..BesqSpec::bridge(0.0, 1.0, 10)
    };
    assert!(matches!(bad.validate(), Err(Error::Config(_))));
    assert!(BesqSpec::free(-1.0, 1.0, 10).validate().is_err());
}

#[test]
fn trapezoid_examples() {
    let times: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let zero = PathGrid {
        times: times.clone(),
        values: vec![0.0; 11],
    };
    assert_eq!(integrated_path(&zero), 0.0);
    let constant = PathGrid {
        times: times.clone(),
        values: vec![3.0; 11],
    };
    assert!((integrated_path(&constant) - 3.0).abs() < 1e-15);
    let linear = PathGrid {
        values: times.clone(),
        times,
    };
    assert!((integrated_path(&linear) - 0.5).abs() < 1e-15);
}

#[test]
fn laplace_functionals() {
    let free = estimate_laplace_functionals(TargetId::FreeFunctional, &[0.5, 1.0], 0.0, 2.0, PATHS, STEPS, 1)
        .unwrap();
    assert!((free[1].analytic - 0.466_921_487_722_442_6).abs() < 1e-15);
    free.iter().for_each(|e| close(e, 0.01));

    let b = estimate_laplace_functional(TargetId::BridgeFunctional, 1.0, 2.0, 0.0, PATHS, STEPS, 2).unwrap();
    assert!((b.analytic - 0.850_918_128_239_321_6).abs() < 1e-15);
    close(&b, 0.01);

    let z = estimate_laplace_functional(TargetId::ZeroDimBridge, 1.0, 0.0, 2.0, PATHS, STEPS, 3).unwrap();
    assert!((z.analytic - 0.731_224_110_505_803).abs() < 1e-15);
    close(&z, 0.01);

    let tiny = estimate_laplace_functional(TargetId::FreeFunctional, 1e-6, 1.0, 1.0, 100, 10, 4).unwrap();
    assert!((tiny.analytic - 1.0).abs() < 1e-11);
    assert!((tiny.mc_mean - 1.0).abs() < 1e-10);
}

#[test]
fn bridge_of_sum_is_product_of_bridges() {
    let (l, delta, x) = (1.0, 2.0, 2.0);
    let whole = estimate_laplace_functional(TargetId::BridgeFunctional, l, delta, x, PATHS, STEPS, 5).unwrap();
    let dim = estimate_laplace_functional(TargetId::BridgeFunctional, l, delta, 0.0, PATHS, STEPS, 6).unwrap();
    let start = estimate_laplace_functional(TargetId::ZeroDimBridge, l, 0.0, x, PATHS, STEPS, 7).unwrap();
    let product = dim.mc_mean * start.mc_mean;
    let product_se = ((dim.mc_stderr * start.mc_mean).powi(2) + (start.mc_stderr * dim.mc_mean).powi(2)).sqrt();
    let combined = (whole.mc_stderr.powi(2) + product_se.powi(2)).sqrt();
    assert!((whole.mc_mean - product).abs() < 3.0 * combined);
}

#[test]
fn composition_of_free_paths() {
    let e = verify_shiga_watanabe(0.0, 0.0, 0.0, 0.0, 1.0, 10, 10, 1).unwrap();
    assert_eq!(e.mc_mean, 1.0);
    assert_eq!(e.analytic, 1.0);
    // one-dimensional paths from 0 carry the largest Euler bias at this step
    let e = verify_shiga_watanabe(1.0, 0.0, 1.0, 0.0, 1.0, PATHS, STEPS, 2).unwrap();
    assert!((e.analytic - 0.648_054_273_663_885_3).abs() < 1e-15);
    close(&e, 0.02);
    let pair = verify_shiga_watanabe(0.0, 1.0, 0.0, 1.0, 1.0, PATHS, STEPS, 3).unwrap();
    close(&pair, 0.0);
    let single = estimate_laplace_functional(TargetId::FreeFunctional, 1.0, 0.0, 2.0, PATHS, STEPS, 4).unwrap();
    let combined = (pair.mc_stderr.powi(2) + single.mc_stderr.powi(2)).sqrt();
    assert!((pair.mc_mean - single.mc_mean).abs() < 3.0 * combined);
}

#[test]
fn subordinated_batches() {
    for law in [LawId::BdlpSinh, LawId::BdlpCosh] {
        let b = sample_bdlp_bessel(law, PATHS, STEPS, 8).unwrap();
        let r = ecf_report(&b, &[0.0, 0.5, 1.0, 2.0]).unwrap();
        assert_eq!(r.ecf[0], 1.0);
        assert!(r.max_abs_dev < r.band + 0.01, "{law}: {r:?}");
    }
    assert!(sample_bdlp_bessel(LawId::BdlpTanh, 10, 10, 1).is_err());
}

#[test]
fn hitting_times() {
    for (delta, target) in [(1, TargetId::HittingTimeD1), (3, TargetId::HittingTimeD3)] {
        let est = estimate_hitting_time_transform(delta, &[0.5, 1.0, 2.0], 4000, 2000, 9).unwrap();
        for e in &est {
            assert_eq!(e.target_id, target);
            // a coarse step delays detected crossings
            close(e, 0.05);
        }
    }
    let t = simulate_hitting_time(3, 1000, 1).unwrap();
    assert!(t > 0.0);
    assert!(simulate_hitting_time(2, 1000, 1).is_err());
}

#[test]
fn occupation_times() {
    let a = occupation_until_inverse_local_time(1, 0.05, 2000, 1).unwrap();
    assert!(a >= 0.0);
    for delta in [1, 3] {
        let est = estimate_occupation_transform(delta, &[1.0], 0.05, 4000, 2000, 10).unwrap();
        close(&est[0], 0.05);
    }
    assert!(occupation_until_inverse_local_time(1, 0.0, 100, 1).is_err());
}

#[test]
fn invalid_arguments() {
    assert!(matches!(
        estimate_laplace_functional(TargetId::FreeFunctional, 0.0, 1.0, 1.0, 10, 10, 1),
        Err(Error::Precondition(_))
    ));
    assert!(estimate_laplace_functional(TargetId::ZeroDimBridge, 1.0, 1.0, 1.0, 10, 10, 1).is_err());
    assert!(estimate_laplace_functional(TargetId::HittingTimeD1, 1.0, 1.0, 1.0, 10, 10, 1).is_err());
}

#[test]
fn estimates_serialize_with_report_names() {
    let e = verify_shiga_watanabe(0.0, 0.0, 0.0, 0.0, 1.0, 4, 4, 1).unwrap();
    assert!(serde_json::to_string(&e).unwrap().contains("\"Eq13\""));
}
