//! Best responses and composed utilities.

use crate::config::SolverConfig;
use crate::error::Result;
use crate::game::{GameDefinition, Player};
use crate::optimize::maximize_1d;

/// Follower best-response set at `(x, y)`, ascending.
pub fn br_z_set(game: &GameDefinition, x: f64, y: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    game.check_axis(Player::X, x)?;
    game.check_axis(Player::Y, y)?;
    let zs = game.strategy_box().z;
    if let Some(f) = game.closed_br_z() {
        return Ok(vec![zs.clamp(crate::error::finite(f(x, y), "closed BR_z")?)]);
    }
    Ok(maximize_1d(|z| game.u_z(x, y, z), zs, cfg)?.argmax)
}

/// Follower best response; smallest maximizer on ties.
pub fn br_z(game: &GameDefinition, x: f64, y: f64, cfg: &SolverConfig) -> Result<f64> {
    Ok(br_z_set(game, x, y, cfg)?[0])
}

/// Middle player's value at `(x, y)` taken over the follower tie set:
/// the minimum, or the maximum in optimistic mode.
pub fn middle_value(game: &GameDefinition, x: f64, y: f64, cfg: &SolverConfig) -> Result<f64> {
    let zs = br_z_set(game, x, y, cfg)?;
    let mut out = game.u_y(x, y, zs[0])?;
    for &z in &zs[1..] {
        let v = game.u_y(x, y, z)?;
        out = if cfg.optimistic { out.max(v) } else { out.min(v) };
    }
    Ok(out)
}

pub fn br_y_set(game: &GameDefinition, x: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
    game.check_axis(Player::X, x)?;
    let ys = game.strategy_box().y;
    if let Some(f) = game.closed_br_y() {
        return Ok(vec![ys.clamp(crate::error::finite(f(x), "closed BR_y")?)]);
    }
    Ok(maximize_1d(|y| middle_value(game, x, y, cfg), ys, cfg)?.argmax)
}

/// Middle player's best response; smallest maximizer on ties.
pub fn br_y(game: &GameDefinition, x: f64, cfg: &SolverConfig) -> Result<f64> {
    Ok(br_y_set(game, x, cfg)?[0])
}

pub fn composed_u_y(game: &GameDefinition, x: f64, y: f64, cfg: &SolverConfig) -> Result<f64> {
    let z = br_z(game, x, y, cfg)?;
    game.u_y(x, y, z)
}

pub fn composed_u_x(game: &GameDefinition, x: f64, cfg: &SolverConfig) -> Result<f64> {
    let y = br_y(game, x, cfg)?;
    let z = br_z(game, x, y, cfg)?;
    game.u_x(x, y, z)
}

/// Leader's value at `x` over all tied follower responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaderOutcome {
    pub value: f64,
    pub y: f64,
    pub z: f64,
    /// A follower tie set had more than one element.
    pub tied: bool,
}

pub fn leader_value(game: &GameDefinition, x: f64, cfg: &SolverConfig) -> Result<LeaderOutcome> {
    let ys = br_y_set(game, x, cfg)?;
    let mut out: Option<LeaderOutcome> = None;
    let mut tied = ys.len() > 1;
    for &y in &ys {
        let zs = br_z_set(game, x, y, cfg)?;
        tied |= zs.len() > 1;
        for &z in &zs {
            let v = game.u_x(x, y, z)?;
            let better = match out {
                None => true,
                Some(o) if cfg.optimistic => v > o.value,
                Some(o) => v < o.value,
            };
            if better {
                out = Some(LeaderOutcome { value: v, y, z, tied: false });
            }
        }
    }
    let mut o = out.expect("best-response sets are never empty");
    o.tied = tied;
    Ok(o)
}
