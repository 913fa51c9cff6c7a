use formflux_core::balance::{
    evolving_balance_residual, region_balance, spacetime_balance_residual, DEFAULT_SAMPLES,
};
use formflux_core::geometry::Quadrature;
use formflux_core::scenarios::{by_name, Growth, ScenarioParams, SCENARIO_NAMES};

#[test]
fn every_scenario_balances() {
    let q = Quadrature::default();
    for params in [
        ScenarioParams::default(),
        ScenarioParams {
            fd_partials: true,
            growth: Growth::Exponential,
            ..Default::default()
        },
    ] {
        for name in SCENARIO_NAMES {
            let s = by_name(name, &params).unwrap();
            let tol = s.pointwise_tolerance();
            let pts = s.samples(DEFAULT_SAMPLES, 1);
            let spatial = evolving_balance_residual(&s.beta, &s.flux, &s.source, &pts).unwrap();
            let st = spacetime_balance_residual(&s.jst, &s.sst, &pts).unwrap();
            assert!(spatial.max_residual < tol, "{name}: {spatial:?}");
            assert!(st.max_residual < tol, "{name}: {st:?}");
            let t = s.region_time;
            let region = region_balance(
                &s.beta.at_time(t),
                &s.flux.at_time(t),
                &s.source.at_time(t),
                &s.region,
                &q,
            )
            .unwrap();
            assert!(region.relative_residual() < 1e-4, "{name}: {region:?}");
            for f in s.evaluate_facts().unwrap() {
                assert!(f.passed, "{name}: {f:?}");
            }
        }
    }
}

#[test]
fn perturbed_source_shows_up_in_every_check() {
    let p = ScenarioParams {
        source_perturbation: 0.1,
        ..Default::default()
    };
    let s = by_name("example1", &p).unwrap();
    let pts = s.samples(50, 3);
    let spatial = evolving_balance_residual(&s.beta, &s.flux, &s.source, &pts).unwrap();
    assert!((spatial.max_residual - 0.1).abs() < 1e-12);
    let st = spacetime_balance_residual(&s.jst, &s.sst, &pts).unwrap();
    assert!((st.max_residual - 0.1).abs() < 1e-12);
}

#[test]
fn construction_is_deterministic() {
    let p = ScenarioParams::default();
    for name in SCENARIO_NAMES {
        let a = by_name(name, &p).unwrap();
        let b = by_name(name, &p).unwrap();
        for x in a.samples(20, 11) {
            assert_eq!(a.jst.eval(&x), b.jst.eval(&x), "{name}");
            assert_eq!(a.sst.eval(&x), b.sst.eval(&x), "{name}");
        }
        if let (Some(ca), Some(cb)) = (&a.currents, &b.currents) {
            assert_eq!(ca.probes(6, 2).unwrap(), cb.probes(6, 2).unwrap());
        }
    }
}

#[test]
fn cheap_current_checks_pass() {
    let q = Quadrature::default();
    for name in ["example1", "example5", "zero"] {
        let s = by_name(name, &ScenarioParams::default()).unwrap();
        let rep = s.currents().unwrap().verify(6, 21, &q).unwrap();
        assert!(rep.max_defect < 1e-4, "{name}: {rep:?}");
        assert_eq!(rep.tests.len(), 6);
    }
}

#[test]
fn worldline_seed_outside_chart_fails() {
    let s = by_name("example3", &ScenarioParams::default()).unwrap();
    assert!(s.worldline(&[0.0, 5.0, 1.0], 1e-3, 10).is_err());
    assert!(s.worldline(&[0.0, 1.0, 1.0], 0.0, 10).is_err());
}
