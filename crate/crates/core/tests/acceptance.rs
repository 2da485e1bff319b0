//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

mod common;

use std::cell::RefCell;
use std::collections::HashMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stackne_core::closeness::{closeness_report, hausdorff};
use stackne_core::coincidence::check_thm2;
use stackne_core::equilibrium::{solve_ne, solve_se, verify_ne, verify_se};
use stackne_core::harness::{reproduce, run_sweep, Figure, ResultRow};
use stackne_core::response::leader_value;
use stackne_core::scenarios::*;
use stackne_core::{GameDefinition, NeighborhoodSpec, Player, Profile, SolverConfig, StrategyBox};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() -> ExitCode {
    let out = tempfile::tempdir().expect("tempdir");
    let criteria: [(&str, fn(&Path) -> Outcome); 8] = [
        ("closed-form oracle suite", closed_forms),
        ("APT equilibria", apt_equilibria),
        ("SE-in-NE test matches the APT cost condition", thm1_vs_eq3),
        ("coincidence utility equality", utility_equality),
        ("dilemma inequalities", dilemma),
        ("SE-NE existence on the HetNet presets", thm2_presets),
        ("Hausdorff bound and slope ordering", thm3_bound),
        ("invariant suites", invariants),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f(out.path());
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name} ({:.1}s) {}", k + 1, t.elapsed().as_secs_f64(), o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn closed_forms(_: &Path) -> Outcome {
    let t = Instant::now();
    let cfg = SolverConfig::default().with_grid(101);
    let mut worst = (0.0, String::new());
    let (mut compared, mut skipped) = (0, 0);
    for (k, g) in common::builtin_games().iter().enumerate() {
        for (name, s) in common::closed_vs_numeric(g, 1000, 100 + k as u64, &cfg) {
            compared += s.compared;
            skipped += s.skipped;
            if s.worst > worst.0 {
                worst = (s.worst, format!("{name} on {}", g.label()));
            }
        }
    }
    let elapsed = t.elapsed();
    outcome(
        worst.0 <= 1e-5 && skipped * 100 <= compared && elapsed < Duration::from_secs(30),
        format!("{compared} comparisons, {skipped} skipped at kinks, worst {:.2e} ({})", worst.0, worst.1),
    )
}

fn apt_equilibria(_: &Path) -> Outcome {
    let t = Instant::now();
    let cfg = SolverConfig::default();
    let game = build_apt(&AptParams::new(1.0, 0.5, 0.5).unwrap()).unwrap();
    let (se, ne) = (solve_se(&game, &cfg).unwrap(), solve_ne(&game, &cfg).unwrap());
    let near = |p: &Profile, q: [f64; 3]| (p.x - q[0]).abs() <= 1e-3 && (p.y - q[1]).abs() <= 1e-3 && (p.z - q[2]).abs() <= 1e-3;
    let se_ok = se.len() == 1 && near(&se.profiles[0], [0.125, 0.5, 0.5]);
    let value = leader_value(&game, se.profiles[0].x, &cfg).unwrap().value;
    let ne_ok = ne.len() == 1 && near(&ne.profiles[0], [0.5, 0.5, 1.0]);
    let solve_time = t.elapsed();

    // brute force on the purely numeric game: dense leader scan for the SE,
    // dense unilateral deviation scans for the NE
    let num = game.without_closed_forms();
    let xs = num.strategy_box().x.grid(2001);
    let (bx, bv) = xs
        .iter()
        .map(|&x| (x, leader_value(&num, x, &cfg).unwrap().value))
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let brute_se = (bx - 0.125).abs() <= 1e-3 && (bv - 0.0625).abs() <= 1e-4;
    let p = Profile::new(0.5, 0.5, 1.0);
    let mut gain: f64 = 0.0;
    for pl in [Player::X, Player::Y, Player::Z] {
        let base = num.utility(pl, &p).unwrap();
        for v in num.strategy_box().axis(pl).grid(20001) {
            gain = gain.max(num.utility(pl, &p.with(pl, v)).unwrap() - base);
        }
    }
    let brute_ne = gain <= 1e-9;
    outcome(
        se_ok && ne_ok && (value - 0.0625).abs() <= 1e-4 && brute_se && brute_ne && solve_time < Duration::from_secs(60),
        format!(
            "SE {:?} value {value:.6}, NE {:?} in {:.1}s; brute force SE x={bx:.4} value {bv:.6}, NE max gain {gain:.1e}",
            se.profiles,
            ne.profiles,
            solve_time.as_secs_f64()
        ),
    )
}

type Rows = Vec<(&'static str, Vec<ResultRow>)>;

thread_local! {
    static FIGURES: RefCell<HashMap<String, Rows>> = RefCell::new(HashMap::new());
}

/// Rows of `reproduce fig`, computed once per run.
fn figure_rows(fig: Figure, out: &Path) -> Rows {
    let key = format!("{fig:?}");
    if let Some(r) = FIGURES.with(|m| m.borrow().get(&key).cloned()) {
        return r;
    }
    let rows = reproduce(fig, out, 0, None).expect("reproduce");
    FIGURES.with(|m| m.borrow_mut().insert(key, rows.clone()));
    rows
}

fn apt_params(row: &ResultRow) -> AptParams {
    let mut p = AptParams::new(row.params[0], row.params[1], 0.5).unwrap();
    p.strategy_box = StrategyBox::from_bounds([0.05, 1.0, 0.0, 0.5, 0.1, 3.0]).unwrap();
    p
}

fn thm1_vs_eq3(out: &Path) -> Outcome {
    let t = Instant::now();
    let rows = figure_rows(Figure::Fig6a, out).remove(0).1;
    let cfg = SolverConfig::default().with_grid(41);
    let (mut kept, mut thm1_agree, mut brute_agree, mut errors) = (0, 0, 0, 0);
    for row in &rows {
        let p = apt_params(row);
        if apt_threshold_margin(&p) < 0.02 {
            continue;
        }
        kept += 1;
        let Some(eq3) = row.eq_condition else {
            errors += 1;
            continue;
        };
        thm1_agree += usize::from(row.thm1 == Some(eq3));
        let g = build_apt(&p).unwrap().without_closed_forms();
        let (se, ne) = (solve_se(&g, &cfg).unwrap(), solve_ne(&g, &cfg).unwrap());
        let inclusion = se.profiles.iter().all(|s| ne.profiles.iter().any(|n| s.max_dist(n) <= 5e-3));
        brute_agree += usize::from(inclusion == eq3);
    }
    let share = |a: usize| a as f64 / kept.max(1) as f64;
    outcome(
        kept > 0 && share(thm1_agree) >= 0.99 && share(brute_agree) >= 0.99 && t.elapsed() < Duration::from_secs(900),
        format!(
            "{kept}/{} cells kept, check_thm1 agrees on {thm1_agree}, brute-force inclusion on {brute_agree}, {errors} errors",
            rows.len()
        ),
    )
}

fn utility_equality(out: &Path) -> Outcome {
    let mut rows = figure_rows(Figure::Fig6a, out);
    rows.extend(figure_rows(Figure::Fig6b, out));
    let (mut n, mut worst, mut missing) = (0, 0.0f64, 0);
    for row in rows.iter().flat_map(|r| &r.1).filter(|r| r.eq_condition == Some(true)) {
        n += 1;
        match (row.ux_se, row.ux_ne) {
            (Some(a), Some(b)) => worst = worst.max((a - b).abs()),
            _ => missing += 1,
        }
    }
    outcome(
        n > 0 && missing == 0 && worst <= 1e-5,
        format!("{n} cells where the condition holds, max |U_X(SE) - U_X(NE)| {worst:.1e}"),
    )
}

fn dilemma(out: &Path) -> Outcome {
    let mut cells = 0;
    let mut bad = Vec::new();
    for fig in [Figure::Fig5, Figure::Fig6a, Figure::Fig6b, Figure::Fig7, Figure::Fig8] {
        for (name, rows) in figure_rows(fig, out) {
            for r in &rows {
                let (Some(c2), Some(c3), Some(lse), Some(lne)) =
                    (r.ux_case2, r.ux_case3, r.leader_value_se, r.leader_value_ne)
                else {
                    bad.push(format!("{name} ({}, {}) unsolved", r.cell_i, r.cell_j));
                    continue;
                };
                cells += 1;
                if c2 > c3 + 1e-9 || lne > lse + 1e-9 {
                    bad.push(format!("{name} ({}, {}): {c2} vs {c3}, {lne} vs {lse}", r.cell_i, r.cell_j));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{cells} solved cells {}", bad.join("; ")))
}

fn thm2_presets(_: &Path) -> Outcome {
    let cfg = SolverConfig::default();
    let spec = NeighborhoodSpec::default();
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, params, want) in [
        ("expensive jamming", HetNetParams::fig7a().unwrap(), false),
        ("cheap jamming", HetNetParams::fig7b().unwrap(), true),
    ] {
        let g = build_hetnet(&params).unwrap();
        let se = solve_se(&g, &cfg).unwrap();
        let o = check_thm2(&g, &se, &spec, &cfg).unwrap();
        pass &= o.exists == want;
        if want {
            match o.witness {
                Some(w) => {
                    let vs = verify_se(&g, &w, cfg.eps_equilibrium, &cfg).unwrap();
                    let vn = verify_ne(&g, &w, cfg.eps_equilibrium, &cfg).unwrap();
                    pass &= se.len() == 1 && vs.holds && vn.holds;
                    notes.push(format!("{name}: exists, witness {w:?}, SE check {}, NE check {}", vs.holds, vn.holds));
                }
                None => {
                    pass = false;
                    notes.push(format!("{name}: no witness"));
                }
            }
        } else {
            pass &= o.witness.is_none();
            notes.push(format!("{name}: exists={}", o.exists));
        }
    }
    outcome(pass, notes.join("; "))
}

fn read_csv(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

fn num(r: &csv::StringRecord, k: usize) -> f64 {
    r[k].parse().unwrap()
}

fn thm3_bound(out: &Path) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let cfg = SolverConfig::default();
    let g = build_synthetic(&SyntheticParams::default()).unwrap();
    let (se, ne) = (solve_se(&g, &cfg).unwrap(), solve_ne(&g, &cfg).unwrap());
    let r = closeness_report(&g, &se, &ne, &cfg, 400, 0).unwrap();
    match r.bound {
        Some(b) => {
            pass &= r.measured_hausdorff < b;
            notes.push(format!("synthetic H {:.4} < {b:.4}", r.measured_hausdorff));
        }
        None => {
            pass = false;
            notes.push("synthetic bound missing".into());
        }
    }

    let sweeps = figure_rows(Figure::Fig8, out);
    let mut checked = 0;
    for (name, rows) in &sweeps {
        for row in rows {
            let Some(c) = &row.closeness else {
                pass = false;
                notes.push(format!("{name} cell {} has no closeness report", row.cell_i));
                continue;
            };
            if c.constants.kappa1 > 0.0 && c.constants.kappa2 > 0.0 {
                checked += 1;
                pass &= c.bound.is_some_and(|b| c.measured_hausdorff < b);
            }
        }
        let dir = out.join(name);
        let slopes = read_csv(&dir.join("slopes.csv"));
        let s: Vec<f64> = slopes.iter().map(|r| num(r, 3)).collect();
        let decreasing = s.len() == 4 && s.windows(2).all(|w| w[1] < w[0]);
        pass &= decreasing;
        notes.push(format!("{name} slopes {s:?}"));
        for line in read_csv(&dir.join("bound_lines.csv")) {
            let (i, eta, bound) = (num(&line, 0) as usize, num(&line, 3), num(&line, 4));
            let slope = s[i];
            let ok = if eta == 0.0 { bound == 0.0 } else { (bound / eta - slope).abs() <= 1e-9 * slope };
            if !ok {
                pass = false;
                notes.push(format!("{name} line {i} off at eta {eta}"));
            }
        }
    }
    pass &= checked == 8;
    notes.insert(1, format!("{checked} HetNet cells strictly inside the bound"));
    outcome(pass, notes.join("; "))
}

fn random_triple_set(rng: &mut ChaCha8Rng) -> Vec<Profile> {
    let n = rng.gen_range(1..=5);
    (0..n).map(|_| Profile::new(rng.gen(), rng.gen(), rng.gen())).collect()
}

fn random_game(rng: &mut ChaCha8Rng, k: usize) -> GameDefinition {
    match k % 4 {
        0 => build_apt(&AptParams::new(rng.gen_range(0.44..1.25), rng.gen_range(0.15..0.55), 0.5).unwrap()).unwrap(),
        1 => build_eavesdrop(&EavesdropParams::preset(rng.gen_range(0.1..1.0)).unwrap()).unwrap(),
        2 => build_hetnet(&HetNetParams::preset(rng.gen_range(0.1..3.0), rng.gen_range(15.0..60.0)).unwrap()).unwrap(),
        _ => build_synthetic(&SyntheticParams {
            a: rng.gen_range(0.2..0.8),
            b: rng.gen_range(0.0..1.0),
            c: rng.gen_range(0.1..1.0),
            d: rng.gen_range(0.5..1.5),
            ..SyntheticParams::default()
        })
        .unwrap(),
    }
}

fn same_sets(a: &[Profile], b: &[Profile], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().all(|p| b.iter().any(|q| p.max_dist(q) <= tol))
        && b.iter().all(|p| a.iter().any(|q| p.max_dist(q) <= tol))
}

fn invariants(out: &Path) -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut notes = Vec::new();

    let mut axioms = true;
    for _ in 0..100 {
        let (a, b, c) = (random_triple_set(&mut rng), random_triple_set(&mut rng), random_triple_set(&mut rng));
        let (ab, ba) = (hausdorff(&a, &b).unwrap(), hausdorff(&b, &a).unwrap());
        let (bc, ac) = (hausdorff(&b, &c).unwrap(), hausdorff(&a, &c).unwrap());
        axioms &= hausdorff(&a, &a).unwrap() == 0.0 && ab == ba && ab > 0.0 && ac <= ab + bc + 1e-12;
    }
    notes.push(format!("Hausdorff axioms {axioms}"));

    let cfg = SolverConfig::default().with_grid(61);
    let mut affine = 0;
    for k in 0..50 {
        let g = random_game(&mut rng, k);
        let mut h = g.clone();
        for pl in [Player::X, Player::Y, Player::Z] {
            h = h.rescaled(pl, rng.gen_range(0.2..5.0), rng.gen_range(-3.0..3.0)).unwrap();
        }
        let tol = 2.0 * cfg.cluster_radius;
        let se = same_sets(&solve_se(&g, &cfg).unwrap().profiles, &solve_se(&h, &cfg).unwrap().profiles, tol);
        let ne = same_sets(&solve_ne(&g, &cfg).unwrap().profiles, &solve_ne(&h, &cfg).unwrap().profiles, tol);
        affine += usize::from(se && ne);
    }
    notes.push(format!("affine rescaling keeps equilibria on {affine}/50 games"));

    let mut identical = true;
    for (fig, name) in [(Figure::Fig5, "fig5"), (Figure::Fig8, "fig8b")] {
        let (a, b) = (out.join("det_a"), out.join("det_b"));
        reproduce(fig, &a, 7, None).unwrap();
        reproduce(fig, &b, 7, Some(1)).unwrap();
        let read = |d: &Path| std::fs::read(d.join(name).join("results.csv")).unwrap();
        identical &= read(&a) == read(&b);
    }
    let mut direct = stackne_core::harness::preset(Figure::Fig8).unwrap().remove(1).1;
    direct.seed = 7;
    direct.output_dir = out.join("det_c");
    run_sweep(&direct, None).unwrap();
    identical &= std::fs::read(out.join("det_c/results.csv")).unwrap()
        == std::fs::read(out.join("det_a/fig8b/results.csv")).unwrap();
    notes.push(format!("byte-identical reruns {identical}"));

    let coarse = SolverConfig::default().with_grid(101);
    let fine = SolverConfig::default().with_grid(201);
    let mut stable = true;
    for g in common::builtin_games() {
        for solve in [solve_se, solve_ne] {
            let (a, b) = (solve(&g, &coarse).unwrap(), solve(&g, &fine).unwrap());
            let ok = same_sets(&a.profiles, &b.profiles, 2.0 * fine.cluster_radius);
            if !ok {
                notes.push(format!("{} moved: {:?} -> {:?}", g.label(), a.profiles, b.profiles));
            }
            stable &= ok;
        }
    }
    notes.push(format!("grid refinement stable {stable}"));
    let elapsed = t.elapsed();
    outcome(
        axioms && affine == 50 && identical && stable && elapsed < Duration::from_secs(300),
        notes.join("; "),
    )
}
