//! The T1–T4 operators and the SE/NE coincidence conditions.

use std::fmt;

use crate::config::{NeighborhoodSpec, SolverConfig};
use crate::equilibrium::{require, EquilibriumKind, EquilibriumSet};
use crate::error::Result;
use crate::game::{GameDefinition, Interval, Player, Profile};
use crate::optimize::finite_diff;
use crate::response::{br_y, br_z, composed_u_x, composed_u_y};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    Thm1,
    Cor1,
    Thm2,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Thm1 => "thm1",
            Theorem::Cor1 => "cor1",
            Theorem::Thm2 => "thm2",
        })
    }
}

/// Outcome of one neighborhood condition. `radius` is the witnessing radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub radius: Option<f64>,
}

impl Verdict {
    fn from_radius(r: Option<f64>) -> Self {
        Verdict { holds: r.is_some(), radius: r }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoincidenceReport {
    pub theorem: Theorem,
    pub se_profile: Profile,
    pub t1_samples: Vec<(f64, f64)>,
    pub t2_samples: Vec<(f64, f64)>,
    pub t3_value: f64,
    pub t4_samples: Vec<(f64, f64)>,
    pub condition_i: Verdict,
    pub condition_ii: Verdict,
    pub overall: bool,
    /// Non-fatal diagnostics, e.g. a failed local monotonicity probe.
    pub notes: Vec<String>,
}

/// Strict products must exceed this to count as positive.
pub const STRICT_TOL: f64 = 1e-9;
/// Accuracy assumed for a closed-form operator and for a finite-difference one.
const CLOSED_ACCURACY: f64 = 1e-12;
const NUMERIC_ACCURACY: f64 = 1e-6;

/// Sign with `sgn(0) = 0`.
pub fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

pub fn t1(game: &GameDefinition, x: f64, y: f64, cfg: &SolverConfig) -> Result<f64> {
    game.check_axis(Player::X, x)?;
    game.check_axis(Player::Y, y)?;
    if let Some(f) = &game.closed_operators().t1 {
        return crate::error::finite(f(x, y), "closed T1");
    }
    finite_diff(|v| composed_u_y(game, x, v, cfg), y, game.strategy_box().y, cfg.operator_fd_step)
}

pub fn t2(game: &GameDefinition, x: f64, cfg: &SolverConfig) -> Result<f64> {
    game.check_axis(Player::X, x)?;
    if let Some(f) = &game.closed_operators().t2 {
        return crate::error::finite(f(x), "closed T2");
    }
    finite_diff(|v| composed_u_x(game, v, cfg), x, game.strategy_box().x, cfg.operator_fd_step)
}

pub fn t3(game: &GameDefinition, x: f64, cfg: &SolverConfig) -> Result<f64> {
    game.check_axis(Player::X, x)?;
    if let Some(f) = &game.closed_operators().t3 {
        return crate::error::finite(f(x), "closed T3");
    }
    let y = br_y(game, x, cfg)?;
    let z = br_z(game, x, y, cfg)?;
    game.middle_slope(x, z)
}

/// `B'(x) + f_x(y_se, z_se)`, with the coupling frozen at the SE followers.
pub fn t4(game: &GameDefinition, x: f64, se: &Profile, cfg: &SolverConfig) -> Result<f64> {
    game.check_axis(Player::X, x)?;
    if let Some(f) = &game.closed_operators().t4 {
        return crate::error::finite(f(x, se.y, se.z), "closed T4");
    }
    let db = finite_diff(|v| game.standalone(v), x, game.strategy_box().x, cfg.fd_step)?;
    Ok(db + game.coupling(se.y, se.z)?)
}

/// Sample points of `δ(center)` of radius `r`, restricted to `axis`, or to its
/// open interior shrunk by `margin` when one is given.
pub(crate) fn neighborhood_samples(center: f64, r: f64, axis: Interval, margin: Option<f64>, m: usize) -> Vec<f64> {
    let allowed = |v: f64| match margin {
        Some(e) => v > axis.lo() + e && v < axis.hi() - e,
        None => axis.contains(v),
    };
    let mut out = Vec::with_capacity(2 * m + 1);
    for k in (1..=m).rev() {
        let v = center - r * k as f64 / m as f64;
        if allowed(v) {
            out.push(v);
        }
    }
    if allowed(center) {
        out.push(center);
    }
    for k in 1..=m {
        let v = center + r * k as f64 / m as f64;
        if allowed(v) {
            out.push(v);
        }
    }
    out
}

/// Existential-δ search: the largest tested radius at which `pred` holds on
/// every sample, together with the samples of the last radius examined.
pub(crate) fn search_with_samples<E, P>(
    center: f64,
    axis: Interval,
    spec: &NeighborhoodSpec,
    margin: Option<f64>,
    mut eval: E,
    mut pred: P,
) -> Result<(Option<f64>, Vec<(f64, f64)>)>
where
    E: FnMut(f64) -> Result<f64>,
    P: FnMut(f64, f64) -> bool,
{
    let mut last = Vec::new();
    for frac in spec.radius_fractions() {
        let r = frac * axis.width();
        let mut samples = Vec::new();
        let mut all = true;
        for v in neighborhood_samples(center, r, axis, margin, spec.samples_per_side) {
            let val = eval(v)?;
            samples.push((v, val));
            if !pred(v, val) {
                all = false;
                break;
            }
        }
        last = samples;
        if all {
            return Ok((Some(r), last));
        }
    }
    Ok((None, last))
}

pub(crate) fn shrinking_search<P>(
    center: f64,
    axis: Interval,
    spec: &NeighborhoodSpec,
    margin: Option<f64>,
    mut pred: P,
) -> Result<Option<f64>>
where
    P: FnMut(f64) -> Result<bool>,
{
    let (r, _) = search_with_samples(
        center,
        axis,
        spec,
        margin,
        |v| Ok(if pred(v)? { 1.0 } else { 0.0 }),
        |_, ok| ok > 0.0,
    )?;
    Ok(r)
}

fn accuracy(closed: bool) -> f64 {
    if closed {
        CLOSED_ACCURACY
    } else {
        NUMERIC_ACCURACY
    }
}

struct ConditionI {
    verdict: Verdict,
    samples: Vec<(f64, f64)>,
    t3: f64,
    notes: Vec<String>,
}

fn condition_i(
    game: &GameDefinition,
    se: &Profile,
    spec: &NeighborhoodSpec,
    cfg: &SolverConfig,
) -> Result<ConditionI> {
    let t3v = t3(game, se.x, cfg)?;
    let weak = accuracy(game.closed_operators().t1.is_some()) * (1.0 + t3v.abs());
    let ys = game.strategy_box().y;
    let (r, samples) = search_with_samples(
        se.y,
        ys,
        spec,
        None,
        |y| t1(game, se.x, y, cfg),
        |_, v| v * t3v >= -weak,
    )?;
    let mut notes = Vec::new();
    // monotonicity of Û_Y on each side of y_se is presupposed; probe it
    let probe_r = spec.initial_radius_fraction * ys.width();
    let pts = neighborhood_samples(se.y, probe_r, ys, None, spec.samples_per_side.min(8));
    let mut left = Vec::new();
    let mut right = Vec::new();
    for y in pts {
        let v = t1(game, se.x, y, cfg)?;
        if v.abs() > weak {
            if y < se.y {
                left.push(sgn(v));
            } else if y > se.y {
                right.push(sgn(v));
            }
        }
    }
    for (side, signs) in [("left", left), ("right", right)] {
        if signs.windows(2).any(|w| w[0] != w[1]) {
            notes.push(format!("composed middle utility not monotone {side} of y_se"));
        }
    }
    Ok(ConditionI { verdict: Verdict::from_radius(r), samples, t3: t3v, notes })
}

fn t4_zero_tol(game: &GameDefinition, se: &Profile, cfg: &SolverConfig) -> Result<f64> {
    let db = finite_diff(|v| game.standalone(v), se.x, game.strategy_box().x, cfg.fd_step)?;
    Ok(1e-6 * (1.0 + db.abs() + game.coupling(se.y, se.z)?.abs()))
}

fn report_thm1(
    game: &GameDefinition,
    se: &Profile,
    spec: &NeighborhoodSpec,
    cfg: &SolverConfig,
) -> Result<CoincidenceReport> {
    let ci = condition_i(game, se, spec, cfg)?;
    let xs = game.strategy_box().x;
    let t4_center = t4(game, se.x, se, cfg)?;
    let mut notes = ci.notes;
    let (cond_ii, t2_samples, t4_samples) = if t4_center.abs() <= t4_zero_tol(game, se, cfg)? {
        notes.push("T4(x_se) vanishes".into());
        let r = spec.initial_radius_fraction * xs.width();
        (Verdict { holds: true, radius: Some(r) }, Vec::new(), vec![(se.x, t4_center)])
    } else {
        let mut t4s = Vec::new();
        let (r, t2s) = search_with_samples(
            se.x,
            xs,
            spec,
            Some(cfg.arg_tol),
            |x| t2(game, x, cfg),
            |x, v| match t4(game, x, se, cfg) {
                Ok(w) => {
                    t4s.push((x, w));
                    v * w > STRICT_TOL
                }
                Err(_) => false,
            },
        )?;
        let keep: Vec<f64> = t2s.iter().map(|s| s.0).collect();
        t4s.retain(|s| keep.contains(&s.0));
        t4s.dedup_by(|a, b| a.0 == b.0);
        (Verdict::from_radius(r), t2s, t4s)
    };
    let overall = ci.verdict.holds && cond_ii.holds;
    Ok(CoincidenceReport {
        theorem: Theorem::Thm1,
        se_profile: *se,
        t1_samples: ci.samples,
        t2_samples,
        t3_value: ci.t3,
        t4_samples,
        condition_i: ci.verdict,
        condition_ii: cond_ii,
        overall,
        notes,
    })
}

/// Every SE is an NE iff each report holds; see [`thm1_holds`].
pub fn check_thm1(
    game: &GameDefinition,
    se_set: &EquilibriumSet,
    spec: &NeighborhoodSpec,
    cfg: &SolverConfig,
) -> Result<Vec<CoincidenceReport>> {
    require(se_set, EquilibriumKind::Stackelberg)?;
    spec.validate()?;
    let mut order: Vec<&Profile> = se_set.profiles.iter().collect();
    order.sort_by(|a, b| a.x.total_cmp(&b.x));
    order.into_iter().map(|p| report_thm1(game, p, spec, cfg)).collect()
}

pub fn thm1_holds(reports: &[CoincidenceReport]) -> bool {
    !reports.is_empty() && reports.iter().all(|r| r.overall)
}

/// Unique-SE form: `T2·T4 ≥ 0` on the closed neighborhood.
pub fn check_cor1(
    game: &GameDefinition,
    se_set: &EquilibriumSet,
    spec: &NeighborhoodSpec,
    cfg: &SolverConfig,
) -> Result<CoincidenceReport> {
    require(se_set, EquilibriumKind::Stackelberg)?;
    spec.validate()?;
    if se_set.len() != 1 {
        return Err(crate::error::Error::Precondition(format!(
            "the unique-SE test needs exactly one SE cluster, got {}; use the general test",
            se_set.len()
        )));
    }
    let se = se_set.profiles[0];
    let ci = condition_i(game, &se, spec, cfg)?;
    let xs = game.strategy_box().x;
    let weak = accuracy(game.closed_operators().t2.is_some());
    let mut t4s = Vec::new();
    let (r, t2s) = search_with_samples(
        se.x,
        xs,
        spec,
        None,
        |x| t2(game, x, cfg),
        |x, v| match t4(game, x, &se, cfg) {
            Ok(w) => {
                t4s.push((x, w));
                v * w >= -weak * (1.0 + w.abs())
            }
            Err(_) => false,
        },
    )?;
    let keep: Vec<f64> = t2s.iter().map(|s| s.0).collect();
    t4s.retain(|s| keep.contains(&s.0));
    t4s.dedup_by(|a, b| a.0 == b.0);
    let cond_ii = Verdict::from_radius(r);
    Ok(CoincidenceReport {
        theorem: Theorem::Cor1,
        se_profile: se,
        t1_samples: ci.samples,
        t2_samples: t2s,
        t3_value: ci.t3,
        t4_samples: t4s,
        condition_i: ci.verdict,
        condition_ii: cond_ii,
        overall: ci.verdict.holds && cond_ii.holds,
        notes: ci.notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm2Outcome {
    pub exists: bool,
    pub witness: Option<Profile>,
    pub reports: Vec<CoincidenceReport>,
}

/// At least one SE is an NE: condition (i) plus `T4(x)·sgn(x − x_se) ≤ 0`.
pub fn check_thm2(
    game: &GameDefinition,
    se_set: &EquilibriumSet,
    spec: &NeighborhoodSpec,
    cfg: &SolverConfig,
) -> Result<Thm2Outcome> {
    require(se_set, EquilibriumKind::Stackelberg)?;
    spec.validate()?;
    let mut order: Vec<Profile> = se_set.profiles.clone();
    order.sort_by(|a, b| a.x.total_cmp(&b.x));
    let xs = game.strategy_box().x;
    let mut reports = Vec::new();
    for se in order {
        let ci = condition_i(game, &se, spec, cfg)?;
        let weak = accuracy(game.closed_operators().t4.is_some());
        let (r, t4s) = search_with_samples(
            se.x,
            xs,
            spec,
            None,
            |x| t4(game, x, &se, cfg),
            |x, v| v * sgn(x - se.x) <= weak * (1.0 + v.abs()),
        )?;
        let cond_ii = Verdict::from_radius(r);
        reports.push(CoincidenceReport {
            theorem: Theorem::Thm2,
            se_profile: se,
            t1_samples: ci.samples,
            t2_samples: Vec::new(),
            t3_value: ci.t3,
            t4_samples: t4s,
            condition_i: ci.verdict,
            condition_ii: cond_ii,
            overall: ci.verdict.holds && cond_ii.holds,
            notes: ci.notes,
        });
    }
    let witness = reports.iter().find(|r| r.overall).map(|r| r.se_profile);
    Ok(Thm2Outcome { exists: witness.is_some(), witness, reports })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sgn_semantics() {
        assert_eq!(sgn(0.0), 0.0);
        assert_eq!(sgn(-0.0), 0.0);
        assert_eq!(sgn(2.0), 1.0);
        assert_eq!(sgn(-1e-300), -1.0);
    }

    #[test]
    fn samples_respect_open_interior() {
        let ax = Interval::new(0.0, 1.0).unwrap();
        let s = neighborhood_samples(1.0, 0.01, ax, Some(1e-7), 4);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|v| *v < 1.0));
        let s = neighborhood_samples(1.0, 0.01, ax, None, 4);
        assert_eq!(s.len(), 5);
        let s = neighborhood_samples(0.5, 0.01, ax, None, 4);
        assert_eq!(s.len(), 9);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn search_finds_smaller_radius() {
        let ax = Interval::new(0.0, 1.0).unwrap();
        let spec = NeighborhoodSpec::default();
        // holds only within 0.001 of the center
        let r = shrinking_search(0.5, ax, &spec, None, |v| Ok((v - 0.5).abs() <= 0.001)).unwrap();
        assert!(r.unwrap() <= 0.001 && r.unwrap() > 0.0004);
        let r = shrinking_search(0.5, ax, &spec, None, |v| Ok(v <= 0.5)).unwrap();
        assert!(r.is_none());
    }
}
