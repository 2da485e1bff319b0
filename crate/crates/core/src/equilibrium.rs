//! Stackelberg (backward induction) and Nash (grid prefilter + Newton polish) solvers.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::config::SolverConfig;
use crate::error::{Error, Result};
use crate::game::{GameDefinition, Interval, Player, Profile, Utilities};
use crate::optimize::{derivative4, finite_diff, maximize_1d, refine_scan};
use crate::response::{br_y_set, br_z_set, leader_value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Stackelberg,
    Nash,
}

impl fmt::Display for EquilibriumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquilibriumKind::Stackelberg => "SE",
            EquilibriumKind::Nash => "NE",
        })
    }
}

/// Clustered set of ε-equilibrium profiles of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub kind: EquilibriumKind,
    pub profiles: Vec<Profile>,
    pub values: Vec<Utilities>,
    pub cluster_radius: f64,
    pub eps: f64,
    pub solver_meta: String,
}

impl EquilibriumSet {
    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeCheck {
    pub holds: bool,
    /// Distance from `y` to the nearest middle-player best response.
    pub y_gap: f64,
    pub z_gap: f64,
    /// Leader-grid maximum minus the leader's value at `x`.
    pub shortfall: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeCheck {
    pub holds: bool,
    /// Best unilateral deviation gain of X, Y and Z.
    pub gains: [f64; 3],
}

const PLAYERS: [Player; 3] = [Player::X, Player::Y, Player::Z];

fn par_collect<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

fn leader_grid_max(game: &GameDefinition, cfg: &SolverConfig) -> Result<f64> {
    let xs = game.strategy_box().x.grid(cfg.grid_points_per_axis);
    let vals = par_collect(xs.len(), |i| Ok(leader_value(game, xs[i], cfg)?.value))?;
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Pessimistic Stackelberg equilibria by backward induction over a leader grid.
pub fn solve_se(game: &GameDefinition, cfg: &SolverConfig) -> Result<EquilibriumSet> {
    cfg.validate()?;
    let xs = game.strategy_box().x.grid(cfg.grid_points_per_axis);
    let outcomes = par_collect(xs.len(), |i| leader_value(game, xs[i], cfg))?;
    let values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let grid_max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let best = refine_scan(
        |x| Ok(leader_value(game, x, cfg)?.value),
        game.strategy_box().x,
        &xs,
        &values,
        cfg,
    )?;

    let mut points = Vec::new();
    let mut scores = Vec::new();
    let mut tied = false;
    for &x in &best.argmax {
        let o = leader_value(game, x, cfg)?;
        tied |= o.tied;
        points.push(Profile::new(x, o.y, o.z));
        scores.push(o.value);
    }
    let reps = cluster_scored(&points, &scores, cfg.cluster_radius);
    let mut profiles = Vec::new();
    let mut rejected = 0;
    for i in reps {
        let p = points[i];
        if check_se(game, &p, cfg.eps_equilibrium, cfg, grid_max)?.holds {
            profiles.push(p);
        } else {
            rejected += 1;
        }
    }
    profiles.sort_by(|a, b| a.x.total_cmp(&b.x));
    let values = profiles.iter().map(|p| game.evaluate(p)).collect::<Result<Vec<_>>>()?;
    let mut meta = format!(
        "leader_grid={} candidates={} rejected={rejected} leader_value={:.12e}",
        xs.len(),
        points.len(),
        best.value
    );
    if tied {
        meta.push_str(" follower_ties=pessimistic");
        if cfg.optimistic {
            meta = meta.replace("pessimistic", "optimistic");
        }
    }
    Ok(EquilibriumSet {
        kind: EquilibriumKind::Stackelberg,
        profiles,
        values,
        cluster_radius: cfg.cluster_radius,
        eps: cfg.eps_equilibrium,
        solver_meta: meta,
    })
}

fn check_se(
    game: &GameDefinition,
    p: &Profile,
    eps: f64,
    cfg: &SolverConfig,
    grid_max: f64,
) -> Result<SeCheck> {
    let gap = |set: Vec<f64>, v: f64| set.iter().map(|s| (s - v).abs()).fold(f64::INFINITY, f64::min);
    let y_gap = gap(br_y_set(game, p.x, cfg)?, p.y);
    let z_gap = gap(br_z_set(game, p.x, p.y, cfg)?, p.z);
    let shortfall = grid_max - leader_value(game, p.x, cfg)?.value;
    Ok(SeCheck {
        holds: y_gap <= cfg.arg_tol && z_gap <= cfg.arg_tol && shortfall <= eps,
        y_gap,
        z_gap,
        shortfall,
    })
}

/// Checks a profile against the Stackelberg definition at tolerance `eps`.
pub fn verify_se(game: &GameDefinition, p: &Profile, eps: f64, cfg: &SolverConfig) -> Result<SeCheck> {
    game.evaluate(p)?;
    let grid_max = leader_grid_max(game, cfg)?;
    check_se(game, p, eps, cfg, grid_max)
}

/// Checks a profile against the Nash definition at tolerance `eps`.
pub fn verify_ne(game: &GameDefinition, p: &Profile, eps: f64, cfg: &SolverConfig) -> Result<NeCheck> {
    let own = game.evaluate(p)?;
    let mut gains = [0.0; 3];
    for (k, &pl) in PLAYERS.iter().enumerate() {
        let axis = game.strategy_box().axis(pl);
        let m = maximize_1d(|v| game.utility(pl, &p.with(pl, v)), axis, cfg)?;
        gains[k] = (m.value - own.get(pl)).max(0.0);
    }
    Ok(NeCheck { holds: gains.iter().all(|g| *g <= eps), gains })
}

/// Greedy max-norm clustering in input order; returns the first point of each cluster.
pub fn cluster(points: &[Profile], radius: f64) -> Vec<Profile> {
    let scores = vec![0.0; points.len()];
    cluster_scored(points, &scores, radius).into_iter().map(|i| points[i]).collect()
}

/// Greedy clustering that keeps the best-scoring member of each cluster.
/// Returns indices into `points` in input order; representatives are pairwise
/// more than `radius` apart in max-norm.
pub fn cluster_scored(points: &[Profile], scores: &[f64], radius: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    loop {
        let reps = greedy_pass(points, scores, &idx, radius);
        if reps.len() == idx.len() {
            return reps;
        }
        idx = reps;
    }
}

fn greedy_pass(points: &[Profile], scores: &[f64], order: &[usize], radius: f64) -> Vec<usize> {
    let cell = |p: &Profile| {
        (
            (p.x / radius).floor() as i64,
            (p.y / radius).floor() as i64,
            (p.z / radius).floor() as i64,
        )
    };
    let mut seeds: Vec<usize> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    let mut buckets: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for &i in order {
        let p = &points[i];
        let (cx, cy, cz) = cell(p);
        let mut found = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = buckets.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &c in list {
                            if points[seeds[c]].max_dist(p) <= radius && found.map_or(true, |f| c < f) {
                                found = Some(c);
                            }
                        }
                    }
                }
            }
        }
        match found {
            Some(c) => {
                if scores[i] > scores[reps[c]] {
                    reps[c] = i;
                }
            }
            None => {
                buckets.entry((cx, cy, cz)).or_default().push(seeds.len());
                seeds.push(i);
                reps.push(i);
            }
        }
    }
    let mut out = reps;
    out.sort_unstable();
    out
}

/// Own-strategy gradient `(∂U_X/∂x, ∂U_Y/∂y, ∂U_Z/∂z)`.
fn pseudo_gradient(game: &GameDefinition, s: &Profile) -> Result<[f64; 3]> {
    let mut g = [0.0; 3];
    for (k, &pl) in PLAYERS.iter().enumerate() {
        let axis = game.strategy_box().axis(pl);
        g[k] = derivative4(|v| game.utility(pl, &s.with(pl, v)), s.get(pl), axis, 1e-3 * axis.width())?;
    }
    Ok(g)
}

/// `s − Π(s + t∘g(s))`; any positive `t` has the same zeros.
fn natural_residual(game: &GameDefinition, s: &Profile, t: &[f64; 3]) -> Result<([f64; 3], [f64; 3])> {
    let g = pseudo_gradient(game, s)?;
    let mut r = [0.0; 3];
    for (k, &pl) in PLAYERS.iter().enumerate() {
        let v = s.get(pl);
        r[k] = v - game.strategy_box().axis(pl).clamp(v + t[k] * g[k]);
    }
    Ok((r, g))
}

/// Per-player step making the natural map invariant to positive rescaling of
/// each utility: inverse own curvature, or width over slope where that is flat.
fn residual_steps(game: &GameDefinition, s: &Profile) -> Result<[f64; 3]> {
    let g = pseudo_gradient(game, s)?;
    let mut t = [1.0; 3];
    for (k, &pl) in PLAYERS.iter().enumerate() {
        let axis = game.strategy_box().axis(pl);
        let h = 1e-3 * axis.width();
        let curv = finite_diff(
            |v| derivative4(|u| game.utility(pl, &s.with(pl, u)), v, axis, h),
            s.get(pl),
            axis,
            1e-2 * axis.width() / s.get(pl).abs().max(1.0),
        )?;
        let scale = curv.abs().max(g[k].abs() / axis.width());
        if scale > 0.0 && scale.is_finite() {
            t[k] = 1.0 / scale;
        }
    }
    Ok(t)
}

fn norm_inf(v: &[f64; 3]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(c, p);
        for r in 0..3 {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..4 {
                    m[r][k] -= f * m[c][k];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Semismooth Newton on the natural map `s − Π(s + g(s))`, whose zeros are
/// exactly the Nash points of a game with concave own-utilities.
fn newton_polish(game: &GameDefinition, start: Profile, cfg: &SolverConfig) -> Result<Profile> {
    let b = *game.strategy_box();
    let mut s = start;
    let steps = residual_steps(game, &s)?;
    let (mut r, mut g) = natural_residual(game, &s, &steps)?;
    for _ in 0..cfg.refine_iterations {
        let rn = norm_inf(&r);
        if rn <= 1e-14 {
            break;
        }
        let mut jac = [[0.0; 3]; 3];
        for (a, &pa) in PLAYERS.iter().enumerate() {
            let axis = b.axis(pa);
            let v = s.get(pa);
            let free = axis.interior(v + steps[a] * g[a]);
            if !free {
                jac[a][a] = 1.0;
                continue;
            }
            for (c, &pc) in PLAYERS.iter().enumerate() {
                let ax_c = b.axis(pc);
                let step = 1e-4 * ax_c.width() / s.get(pc).abs().max(1.0);
                let d = finite_diff(
                    |w| {
                        let q = s.with(pc, w);
                        derivative4(|u| game.utility(pa, &q.with(pa, u)), q.get(pa), axis, 1e-3 * axis.width())
                    },
                    s.get(pc),
                    ax_c,
                    step,
                )?;
                jac[a][c] = -steps[a] * d;
            }
        }
        let rhs = [-r[0], -r[1], -r[2]];
        let delta = match solve3(jac, rhs) {
            Some(d) => d,
            None => {
                // Levenberg-Marquardt fallback for singular Jacobians
                let mut jtj = [[0.0; 3]; 3];
                let mut jtr = [0.0; 3];
                let mut diag: f64 = 0.0;
                for i in 0..3 {
                    for k in 0..3 {
                        jtj[i][k] = (0..3).map(|m| jac[m][i] * jac[m][k]).sum();
                    }
                    jtr[i] = (0..3).map(|m| jac[m][i] * rhs[m]).sum();
                    diag = diag.max(jtj[i][i]);
                }
                let mu = 1e-6 * diag.max(1e-12);
                for (i, row) in jtj.iter_mut().enumerate() {
                    row[i] += mu;
                }
                match solve3(jtj, jtr) {
                    Some(d) => d,
                    None => break,
                }
            }
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = b.clamp(Profile::new(s.x + t * delta[0], s.y + t * delta[1], s.z + t * delta[2]));
            let (rc, gc) = natural_residual(game, &cand, &steps)?;
            if norm_inf(&rc) <= (1.0 - 1e-4 * t) * rn {
                s = cand;
                r = rc;
                g = gc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(s)
}

/// Moves each coordinate onto the nearest exact best response when that is
/// within `1e-4` of the axis width, so polishing error does not survive at
/// interior optima that have a closed or well-conditioned maximizer.
fn snap_to_responses(game: &GameDefinition, s: Profile, cfg: &SolverConfig) -> Result<Profile> {
    let b = *game.strategy_box();
    let mut out = s;
    for pl in PLAYERS {
        let axis = b.axis(pl);
        let cur = out.get(pl);
        let set = match pl {
            Player::Z => br_z_set(game, out.x, out.y, cfg)?,
            _ => maximize_1d(|v| game.utility(pl, &out.with(pl, v)), axis, cfg)?.argmax,
        };
        let near = set.into_iter().min_by(|a, c| (a - cur).abs().total_cmp(&(c - cur).abs()));
        if let Some(v) = near {
            if (v - cur).abs() <= 1e-4 * axis.width() {
                out = out.with(pl, v);
            }
        }
    }
    Ok(out)
}

struct Slice {
    u: Vec<[f64; 3]>,
}

/// ε-Nash equilibria: 3-D grid prefilter with axis-wise deviation maxima,
/// Newton polish of each surviving region, clustering and re-verification.
pub fn solve_ne(game: &GameDefinition, cfg: &SolverConfig) -> Result<EquilibriumSet> {
    cfg.validate()?;
    let n = cfg.grid_points_per_axis;
    let bx = *game.strategy_box();
    let (gx, gy, gz) = (bx.x.grid(n), bx.y.grid(n), bx.z.grid(n));
    let eps = cfg.eps_equilibrium;

    // best deviation value of each player, indexed by the other two coordinates
    let axis_max = |pl: Player, axis: Interval| {
        par_collect(n * n, |idx| {
            let (a, c) = (idx / n, idx % n);
            let p = match pl {
                Player::X => Profile::new(0.0, gy[a], gz[c]),
                Player::Y => Profile::new(gx[a], 0.0, gz[c]),
                Player::Z => Profile::new(gx[a], gy[c], 0.0),
            };
            Ok(maximize_1d(|v| game.utility(pl, &p.with(pl, v)), axis, cfg)?.value)
        })
    };
    let mx = axis_max(Player::X, bx.x)?;
    let my = axis_max(Player::Y, bx.y)?;
    let mz = axis_max(Player::Z, bx.z)?;
    let m_at = |k: usize, i: usize, j: usize, l: usize| match k {
        0 => mx[j * n + l],
        1 => my[i * n + l],
        _ => mz[i * n + j],
    };

    let slice = |i: usize| -> Result<Slice> {
        let u = par_collect(n * n, |idx| {
            let (j, l) = (idx / n, idx % n);
            let p = Profile::new(gx[i], gy[j], gz[l]);
            Ok([game.u_x(p.x, p.y, p.z)?, game.u_y(p.x, p.y, p.z)?, game.u_z(p.x, p.y, p.z)?])
        })?;
        Ok(Slice { u })
    };

    let mut exact: Vec<(usize, f64)> = Vec::new();
    let mut near: HashMap<usize, f64> = HashMap::new();
    let mut prev: Option<Slice> = None;
    let mut cur = slice(0)?;
    for i in 0..n {
        let next = if i + 1 < n { Some(slice(i + 1)?) } else { None };
        let found = (0..n * n)
            .into_par_iter()
            .filter_map(|idx| {
                let (j, l) = (idx / n, idx % n);
                let here = cur.u[idx];
                let mut worst_exact = 0.0f64;
                let mut is_near = true;
                for k in 0..3 {
                    let gain = (m_at(k, i, j, l) - here[k]).max(0.0);
                    worst_exact = worst_exact.max(gain);
                    if gain <= eps {
                        continue;
                    }
                    // local variation of U_k over the three axes and of M_k over the two others
                    let mut lv = 0.0;
                    let mut du = 0.0f64;
                    for s in [&prev, &next].into_iter().flatten() {
                        du = du.max((s.u[idx][k] - here[k]).abs());
                    }
                    lv += du;
                    let mut du = 0.0f64;
                    if j > 0 {
                        du = du.max((cur.u[idx - n][k] - here[k]).abs());
                    }
                    if j + 1 < n {
                        du = du.max((cur.u[idx + n][k] - here[k]).abs());
                    }
                    lv += du;
                    let mut du = 0.0f64;
                    if l > 0 {
                        du = du.max((cur.u[idx - 1][k] - here[k]).abs());
                    }
                    if l + 1 < n {
                        du = du.max((cur.u[idx + 1][k] - here[k]).abs());
                    }
                    lv += du;
                    let m0 = m_at(k, i, j, l);
                    let others: [(bool, usize, usize, usize); 6] = [
                        (i > 0, i.wrapping_sub(1), j, l),
                        (i + 1 < n, i + 1, j, l),
                        (j > 0, i, j.wrapping_sub(1), l),
                        (j + 1 < n, i, j + 1, l),
                        (l > 0, i, j, l.wrapping_sub(1)),
                        (l + 1 < n, i, j, l + 1),
                    ];
                    let mut dm = [0.0f64; 3];
                    for (axis_k, (ok, a, b, c)) in others.iter().enumerate() {
                        if *ok && axis_k / 2 != k {
                            dm[axis_k / 2] = dm[axis_k / 2].max((m_at(k, *a, *b, *c) - m0).abs());
                        }
                    }
                    lv += dm.iter().sum::<f64>();
                    if gain > eps + lv {
                        is_near = false;
                        break;
                    }
                }
                if worst_exact <= eps {
                    Some((idx, worst_exact, true))
                } else if is_near {
                    Some((idx, worst_exact, false))
                } else {
                    None
                }
            })
            .collect::<Vec<_>>();
        for (idx, gain, is_exact) in found {
            let id = i * n * n + idx;
            if is_exact {
                exact.push((id, gain));
            }
            near.insert(id, gain);
        }
        prev = Some(cur);
        match next {
            Some(s) => cur = s,
            None => break,
        }
    }

    // connected regions of surviving nodes, 26-neighborhood
    let mut ids: Vec<usize> = near.keys().copied().collect();
    ids.sort_unstable();
    let mut seen: HashMap<usize, bool> = HashMap::with_capacity(ids.len());
    let mut seeds: Vec<(f64, usize)> = Vec::new();
    for &start in &ids {
        if seen.contains_key(&start) {
            continue;
        }
        seen.insert(start, true);
        let mut queue = VecDeque::from([start]);
        let mut best = (near[&start], start);
        while let Some(id) = queue.pop_front() {
            let (i, j, l) = (id / (n * n), (id / n) % n, id % n);
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    for dl in -1i64..=1 {
                        let (a, b, c) = (i as i64 + di, j as i64 + dj, l as i64 + dl);
                        if a < 0 || b < 0 || c < 0 || a >= n as i64 || b >= n as i64 || c >= n as i64 {
                            continue;
                        }
                        let nb = (a as usize) * n * n + (b as usize) * n + c as usize;
                        if let Some(&gain) = near.get(&nb) {
                            if !seen.contains_key(&nb) {
                                seen.insert(nb, true);
                                queue.push_back(nb);
                                if gain < best.0 || (gain == best.0 && nb < best.1) {
                                    best = (gain, nb);
                                }
                            }
                        }
                    }
                }
            }
        }
        seeds.push(best);
    }
    let regions = seeds.len();
    const MAX_POLISH: usize = 256;
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    seeds.truncate(MAX_POLISH);
    seeds.sort_by_key(|s| s.1);

    let node = |id: usize| Profile::new(gx[id / (n * n)], gy[(id / n) % n], gz[id % n]);
    let gain = |q: &Profile| {
        verify_ne(game, q, f64::INFINITY, cfg).map(|c| c.gains.iter().fold(0.0f64, |m, g| m.max(*g)))
    };
    // polished point unless it is worse than where it started
    let polish = |start: Profile| -> Result<Profile> {
        let p = newton_polish(game, start, cfg)?;
        let snapped = snap_to_responses(game, p, cfg)?;
        let p = if gain(&snapped)? <= gain(&p)? + cfg.value_tol { snapped } else { p };
        Ok(if gain(&p)? <= gain(&start)? + cfg.value_tol { p } else { start })
    };
    let polished = par_collect(seeds.len(), |k| polish(node(seeds[k].1)))?;
    // exact nodes near an isolated equilibrium pass only through flatness; few
    // of them means no plateau, so move them onto the equilibrium as well
    let mut points: Vec<Profile> = if exact.len() <= MAX_POLISH {
        par_collect(exact.len(), |k| polish(node(exact[k].0)))?
    } else {
        exact.iter().map(|(id, _)| node(*id)).collect()
    };
    points.extend(polished);
    let checks = par_collect(points.len(), |k| verify_ne(game, &points[k], eps, cfg))?;
    let mut good = Vec::new();
    let mut scores = Vec::new();
    for (p, c) in points.iter().zip(&checks) {
        if c.holds {
            good.push(*p);
            scores.push(-c.gains.iter().cloned().fold(0.0, f64::max));
        }
    }
    let reps = cluster_scored(&good, &scores, cfg.cluster_radius);
    let mut profiles: Vec<Profile> = reps.into_iter().map(|i| good[i]).collect();
    profiles.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)).then(a.z.total_cmp(&b.z)));
    let values = profiles.iter().map(|p| game.evaluate(p)).collect::<Result<Vec<_>>>()?;
    let meta = format!(
        "grid={n}^3 exact_nodes={} near_nodes={} regions={regions} polished={} verified={}",
        exact.len(),
        near.len(),
        seeds.len(),
        good.len()
    );
    Ok(EquilibriumSet {
        kind: EquilibriumKind::Nash,
        profiles,
        values,
        cluster_radius: cfg.cluster_radius,
        eps,
        solver_meta: meta,
    })
}

/// Precondition helper for callers that need a nonempty set of a given kind.
pub(crate) fn require(set: &EquilibriumSet, kind: EquilibriumKind) -> Result<()> {
    if set.kind != kind {
        return Err(Error::Precondition(format!("expected an {kind} set, got {}", set.kind)));
    }
    if set.is_empty() {
        return Err(Error::Precondition(format!("empty {kind} set")));
    }
    Ok(())
}
