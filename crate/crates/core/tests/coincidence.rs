use stackne_core::coincidence::{check_cor1, check_thm1, check_thm2, t1, t2, t3, t4, thm1_holds};
use stackne_core::equilibrium::{solve_ne, solve_se};
use stackne_core::scenarios::*;
use stackne_core::{Error, GameDefinition, NeighborhoodSpec, Profile, SolverConfig, StrategyBox, Theorem};

fn apt(c_a: f64, c_d: f64) -> GameDefinition {
    build_apt(&AptParams::new(c_a, c_d, 0.5).unwrap()).unwrap()
}

#[test]
fn operator_values() {
    let cfg = SolverConfig::default();
    let g = apt(1.0, 0.5);
    // z* = sqrt(x/2)/(1-y) interior: T1 = 1 - sqrt(rho²·c_a·x/2)
    assert!((t1(&g, 0.5, 0.1, &cfg).unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(t3(&g, 0.3, &cfg).unwrap(), 1.0);
    let se = Profile::new(0.125, 0.5, 0.5);
    assert!((t4(&g, 0.7, &se, &cfg).unwrap() - 0.5).abs() < 1e-12);
    let num = g.without_closed_forms();
    assert!((t2(&num, 0.3, &cfg).unwrap() - t2(&g, 0.3, &cfg).unwrap()).abs() < 1e-5);
    assert!(t1(&g, 2.0, 0.1, &cfg).is_err());
}

#[test]
fn thm1_follows_the_cost_regime() {
    let cfg = SolverConfig::default().with_grid(101);
    let spec = NeighborhoodSpec::default();
    for (c_a, c_d, want) in [(1.25, 0.15, true), (1.0, 0.5, false), (0.44, 0.55, false)] {
        let g = apt(c_a, c_d);
        let se = solve_se(&g, &cfg).unwrap();
        let reports = check_thm1(&g, &se, &spec, &cfg).unwrap();
        assert_eq!(reports.len(), se.len());
        assert_eq!(reports[0].theorem, Theorem::Thm1);
        assert_eq!(thm1_holds(&reports), want, "c_a={c_a} c_d={c_d}: {reports:?}");
        let cor = check_cor1(&g, &se, &spec, &cfg).unwrap();
        assert_eq!(cor.overall, want);
        let ne = solve_ne(&g, &cfg).unwrap();
        let inside = se.profiles.iter().all(|s| ne.profiles.iter().any(|n| s.max_dist(n) <= 5e-3));
        assert_eq!(inside, want);
    }
}

#[test]
fn cor1_needs_a_unique_se() {
    let cfg = SolverConfig::default().with_grid(101);
    let g = GameDefinition::new(
        "twin peaks",
        StrategyBox::from_bounds([0.0, 1.0, 0.0, 1.0, 0.0, 1.0]).unwrap(),
        |x| -((x - 0.2) * (x - 0.8)).powi(2),
        |_, _| 0.0,
        |_, _| 1.0,
        |_, _| 0.0,
        |_, _, z| -(z - 0.5) * (z - 0.5),
    );
    let se = solve_se(&g, &cfg).unwrap();
    let e = check_cor1(&g, &se, &NeighborhoodSpec::default(), &cfg).unwrap_err();
    assert!(matches!(e, Error::Precondition(_)), "{e}");
    // wrong set kind
    let ne = solve_ne(&g, &cfg).unwrap();
    assert!(check_thm1(&g, &ne, &NeighborhoodSpec::default(), &cfg).is_err());
}

#[test]
fn thm2_witness_on_cheap_jamming() {
    let cfg = SolverConfig::default().with_grid(101);
    let spec = NeighborhoodSpec::default();
    let g = build_hetnet(&HetNetParams::fig7b().unwrap()).unwrap();
    let se = solve_se(&g, &cfg).unwrap();
    let o = check_thm2(&g, &se, &spec, &cfg).unwrap();
    assert!(o.exists);
    assert_eq!(o.witness, Some(se.profiles[0]));
    assert_eq!(o.reports[0].theorem.to_string(), "thm2");
    let g = build_hetnet(&HetNetParams::fig7a().unwrap()).unwrap();
    let se = solve_se(&g, &cfg).unwrap();
    let o = check_thm2(&g, &se, &spec, &cfg).unwrap();
    assert!(!o.exists && o.witness.is_none());
}

#[test]
fn eq2_derived_form_tracks_thm1() {
    let cfg = SolverConfig::default().with_grid(101);
    let spec = NeighborhoodSpec::default();
    for h in [0.15, 0.3, 0.45, 0.6, 0.75, 0.9] {
        let p = EavesdropParams::preset(h).unwrap();
        let g = build_eavesdrop(&p).unwrap();
        let se = solve_se(&g, &cfg).unwrap();
        let thm1 = thm1_holds(&check_thm1(&g, &se, &spec, &cfg).unwrap());
        let derived = se.profiles.iter().all(|q| eavesdrop_condition_derived(&p, q.x, &spec).unwrap());
        assert_eq!(thm1, derived, "h={h}");
    }
}
