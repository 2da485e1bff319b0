use proptest::prelude::*;

use stackne_core::closeness::{
    bound_co1, bound_thm3, closeness_report, estimate_lipschitz, estimate_strong_concavity, hausdorff, ConcaveIn,
};
use stackne_core::equilibrium::{solve_ne, solve_se};
use stackne_core::scenarios::*;
use stackne_core::{ClosenessConstants, Player, Profile, SolverConfig};

fn profile() -> impl Strategy<Value = Profile> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| Profile::new(x, y, z))
}

fn set() -> impl Strategy<Value = Vec<Profile>> {
    prop::collection::vec(profile(), 1..6)
}

proptest! {
    #[test]
    fn hausdorff_is_a_metric(a in set(), b in set(), c in set()) {
        let d = |u: &[Profile], v: &[Profile]| hausdorff(u, v).unwrap();
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        prop_assert!(d(&a, &b) >= 0.0);
    }

    #[test]
    fn hausdorff_ignores_translation(a in set(), b in set(), s in profile()) {
        let shift = |v: &[Profile]| v.iter().map(|p| Profile::new(p.x + s.x, p.y + s.y, p.z + s.z)).collect::<Vec<_>>();
        let (d0, d1) = (hausdorff(&a, &b).unwrap(), hausdorff(&shift(&a), &shift(&b)).unwrap());
        prop_assert!((d0 - d1).abs() <= 1e-9 * (1.0 + d0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rescaling_keeps_equilibria(a in 0.2..0.8f64, b in 0.0..1.0f64, c in 0.1..1.0f64,
                                  sx in 0.2..5.0f64, sy in 0.2..5.0f64, sz in 0.2..5.0f64, off in -3.0..3.0f64) {
        let cfg = SolverConfig::default().with_grid(41);
        let g = build_synthetic(&SyntheticParams { a, b, c, ..SyntheticParams::default() }).unwrap();
        let h = g.rescaled(Player::X, sx, off).unwrap()
            .rescaled(Player::Y, sy, -off).unwrap()
            .rescaled(Player::Z, sz, off).unwrap();
        for solve in [solve_se, solve_ne] {
            let (p, q) = (solve(&g, &cfg).unwrap(), solve(&h, &cfg).unwrap());
            prop_assert_eq!(p.len(), q.len());
            prop_assert!(hausdorff(&p.profiles, &q.profiles).unwrap() < 2.0 * cfg.cluster_radius);
        }
    }
}

#[test]
fn empty_sets_are_rejected() {
    assert!(hausdorff(&[], &[Profile::new(0.0, 0.0, 0.0)]).is_err());
    let h = hausdorff(&[Profile::new(0.0, 0.0, 0.0)], &[Profile::new(3.0, 4.0, 0.0), Profile::new(0.0, 0.0, 1.0)]).unwrap();
    assert_eq!(h, 5.0);
}

#[test]
fn bound_formulas() {
    let c = ClosenessConstants { l: 1.0, kappa1: 2.0, kappa2: 4.0, eta: 0.1, eta1: Some(0.2), eta2: Some(0.4) };
    assert!((bound_thm3(&c).unwrap() - 2.0 * 6.0 / 8.0 * 0.1).abs() < 1e-15);
    assert!((bound_co1(&c).unwrap() - 2.0 * (0.1 + 0.1)).abs() < 1e-15);
    assert!(bound_thm3(&ClosenessConstants { kappa1: 0.0, ..c }).is_err());
    assert!(bound_co1(&ClosenessConstants { eta1: None, ..c }).is_err());
}

#[test]
fn synthetic_game_sits_inside_its_bound() {
    let cfg = SolverConfig::default();
    let g = build_synthetic(&SyntheticParams::default()).unwrap();
    let (se, ne) = (solve_se(&g, &cfg).unwrap(), solve_ne(&g, &cfg).unwrap());
    let r = closeness_report(&g, &se, &ne, &cfg, 400, 5).unwrap();
    assert!(r.strongly_concave);
    let b = r.bound.unwrap();
    assert!(r.bound_satisfied && r.measured_hausdorff < b, "{r:?}");
    assert!(r.point_bound.unwrap() > r.measured_hausdorff);
    // Û_Y = (a - y)·y + b·x·y has curvature 2, Û_X = -1.125x² + 0.875x has 2.25
    assert!((r.constants.kappa1 - 0.9 * 2.0).abs() < 1e-3, "{:?}", r.constants);
    assert!((r.constants.kappa2 - 0.9 * 2.25).abs() < 1e-3, "{:?}", r.constants);
    assert_eq!(closeness_report(&g, &se, &ne, &cfg, 400, 5).unwrap(), r);
}

#[test]
fn linear_middle_player_suppresses_the_bound() {
    let cfg = SolverConfig::default().with_grid(101);
    let g = build_apt(&AptParams::new(1.0, 0.5, 0.5).unwrap()).unwrap();
    let (se, ne) = (solve_se(&g, &cfg).unwrap(), solve_ne(&g, &cfg).unwrap());
    let r = closeness_report(&g, &se, &ne, &cfg, 200, 1).unwrap();
    assert!(!r.strongly_concave && r.bound.is_none());
    assert!((r.measured_hausdorff - 0.625).abs() < 1e-3);
    assert_eq!(estimate_strong_concavity(&g, ConcaveIn::MiddleInY, &cfg, 200, 1).unwrap(), None);
    let l = estimate_lipschitz(&g, &cfg, 400, 1).unwrap();
    // sup of |∂U_X/∂y| = x/(2z) and its companions over the box is near sqrt(10)
    assert!(l > 3.0 && l < 3.6, "{l}");
    assert!(estimate_lipschitz(&g, &cfg, 10, 1).is_err());
}
