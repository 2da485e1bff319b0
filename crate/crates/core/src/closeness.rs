//! Hausdorff distance between equilibrium sets and the SE–NE deviation bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coincidence::{t1, t2};
use crate::config::SolverConfig;
use crate::equilibrium::{require, EquilibriumKind, EquilibriumSet};
use crate::error::{Error, Result};
use crate::game::{GameDefinition, Interval, Profile};
use crate::response::{br_z, composed_u_x, composed_u_y};

pub const LIPSCHITZ_FACTOR: f64 = 1.1;
pub const CONCAVITY_FACTOR: f64 = 0.9;
/// Added to η so the strict inequality survives exact coincidence.
pub const ETA_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcaveIn {
    /// Û_Y along y.
    MiddleInY,
    /// Û_X along x.
    LeaderInX,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosenessConstants {
    pub l: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub eta: f64,
    pub eta1: Option<f64>,
    pub eta2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosenessReport {
    pub constants: ClosenessConstants,
    /// `None` when either κ is nonpositive.
    pub bound: Option<f64>,
    pub measured_hausdorff: f64,
    pub bound_satisfied: bool,
    pub point_bound: Option<f64>,
    pub strongly_concave: bool,
}

/// Hausdorff distance with Euclidean point distance.
pub fn hausdorff(a: &[Profile], b: &[Profile]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Precondition("Hausdorff distance needs two nonempty sets".into()));
    }
    let side = |p: &[Profile], q: &[Profile]| {
        p.iter()
            .map(|u| q.iter().map(|v| u.dist(v)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(side(a, b).max(side(b, a)))
}

fn scalar_hausdorff(a: &[f64], b: &[f64]) -> f64 {
    let side = |p: &[f64], q: &[f64]| {
        p.iter()
            .map(|u| q.iter().map(|v| (u - v).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    side(a, b).max(side(b, a))
}

fn check_samples(n: usize) -> Result<()> {
    if n < 100 {
        return Err(Error::Precondition(format!("need at least 100 samples, got {n}")));
    }
    Ok(())
}

/// Sampled Lipschitz constant of `BR_z` in `(x, y)` under the sum norm, times 1.1.
/// Base points are random plus the box corners; partners sit at offsets of
/// 1e-3 of the axis widths, both random and axis-aligned.
pub fn estimate_lipschitz(game: &GameDefinition, cfg: &SolverConfig, n_samples: usize, seed: u64) -> Result<f64> {
    check_samples(n_samples)?;
    let b = game.strategy_box();
    let (xs, ys) = (b.x, b.y);
    let (hx, hy) = (1e-3 * xs.width(), 1e-3 * ys.width());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bases: Vec<(f64, f64)> = vec![
        (xs.lo(), ys.lo()),
        (xs.lo(), ys.hi()),
        (xs.hi(), ys.lo()),
        (xs.hi(), ys.hi()),
    ];
    for _ in 0..n_samples {
        bases.push((rng.gen_range(xs.lo()..=xs.hi()), rng.gen_range(ys.lo()..=ys.hi())));
    }
    let mut best = 0.0f64;
    for (x, y) in bases {
        let z0 = br_z(game, x, y, cfg)?;
        let mut partners = vec![
            (x + hx, y),
            (x - hx, y),
            (x, y + hy),
            (x, y - hy),
        ];
        partners.push((x + rng.gen_range(-hx..=hx), y + rng.gen_range(-hy..=hy)));
        for (x2, y2) in partners {
            if !(xs.contains(x2) && ys.contains(y2)) {
                continue;
            }
            let d = (x - x2).abs() + (y - y2).abs();
            if d == 0.0 {
                continue;
            }
            let z1 = br_z(game, x2, y2, cfg)?;
            best = best.max((z1 - z0).abs() / d);
        }
    }
    Ok(best * LIPSCHITZ_FACTOR)
}

/// Sampled strong-concavity modulus times 0.9; `None` when the sampled
/// minimum of the negative second derivative is not positive.
pub fn estimate_strong_concavity(
    game: &GameDefinition,
    which: ConcaveIn,
    cfg: &SolverConfig,
    n_samples: usize,
    seed: u64,
) -> Result<Option<f64>> {
    check_samples(n_samples)?;
    let b = game.strategy_box();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axis = match which {
        ConcaveIn::MiddleInY => b.y,
        ConcaveIn::LeaderInX => b.x,
    };
    let h = 1e-3 * axis.width();
    let inner = Interval::new(axis.lo() + h, axis.hi() - h)?;
    let ops = game.closed_operators();
    let mut kappa = f64::INFINITY;
    for k in 0..n_samples {
        // spread the first samples evenly so the ends are always covered
        let v = if k < 2 {
            [inner.lo(), inner.hi()][k]
        } else {
            rng.gen_range(inner.lo()..=inner.hi())
        };
        let curv = match which {
            ConcaveIn::MiddleInY => {
                let x = rng.gen_range(b.x.lo()..=b.x.hi());
                match &ops.t1 {
                    Some(t) => (t(x, v + h) - t(x, v - h)) / (2.0 * h),
                    None => second_difference(|y| composed_u_y(game, x, y, cfg), v, h)?,
                }
            }
            ConcaveIn::LeaderInX => match &ops.t2 {
                Some(t) => (t(v + h) - t(v - h)) / (2.0 * h),
                None => second_difference(|x| composed_u_x(game, x, cfg), v, h)?,
            },
        };
        if !curv.is_finite() {
            return Err(Error::Numeric(format!("non-finite curvature at {v}")));
        }
        kappa = kappa.min(-curv);
        if kappa <= 0.0 {
            return Ok(None);
        }
    }
    Ok(Some(kappa * CONCAVITY_FACTOR))
}

fn second_difference<F: FnMut(f64) -> Result<f64>>(mut f: F, v: f64, h: f64) -> Result<f64> {
    Ok((f(v + h)? - 2.0 * f(v)? + f(v - h)?) / (h * h))
}

/// Image-set distance η and, for singleton sets, the pointwise η1 (middle
/// player) and η2 (leader).
pub fn compute_eta(
    game: &GameDefinition,
    se_set: &EquilibriumSet,
    ne_set: &EquilibriumSet,
    cfg: &SolverConfig,
) -> Result<(f64, Option<f64>, Option<f64>)> {
    require(se_set, EquilibriumKind::Stackelberg)?;
    require(ne_set, EquilibriumKind::Nash)?;
    let mut pi_x_se = Vec::new();
    let mut pi_y_se = Vec::new();
    let mut pi_y_ne = Vec::new();
    for s in &se_set.profiles {
        pi_x_se.push(t2(game, s.x, cfg)?);
        pi_y_se.push(t1(game, s.x, s.y, cfg)?);
        for q in &ne_set.profiles {
            pi_y_ne.push(t1(game, s.x, q.y, cfg)?);
        }
    }
    let pi_x_ne = ne_set
        .profiles
        .iter()
        .map(|q| t2(game, q.x, cfg))
        .collect::<Result<Vec<_>>>()?;
    let hx = scalar_hausdorff(&pi_x_se, &pi_x_ne);
    let hy = scalar_hausdorff(&pi_y_se, &pi_y_ne);
    let singletons = se_set.len() == 1 && ne_set.len() == 1;
    let (eta1, eta2) = if singletons { (Some(hy), Some(hx)) } else { (None, None) };
    Ok((hx.max(hy) + ETA_SLACK, eta1, eta2))
}

/// `(1+l)(κ1+κ2)/(κ1κ2)·η`.
pub fn bound_thm3(c: &ClosenessConstants) -> Result<f64> {
    check_kappas(c)?;
    Ok((1.0 + c.l) * (c.kappa1 + c.kappa2) / (c.kappa1 * c.kappa2) * c.eta)
}

/// `(1+l)(η1/κ1 + η2/κ2)` for unique SE and NE.
pub fn bound_co1(c: &ClosenessConstants) -> Result<f64> {
    check_kappas(c)?;
    match (c.eta1, c.eta2) {
        (Some(e1), Some(e2)) => Ok((1.0 + c.l) * (e1 / c.kappa1 + e2 / c.kappa2)),
        _ => Err(Error::Precondition("pointwise bound needs singleton SE and NE sets".into())),
    }
}

fn check_kappas(c: &ClosenessConstants) -> Result<()> {
    if !(c.kappa1 > 0.0 && c.kappa2 > 0.0) {
        return Err(Error::Domain(format!(
            "bound needs positive strong-concavity moduli, got {} and {}",
            c.kappa1, c.kappa2
        )));
    }
    Ok(())
}

pub fn closeness_report(
    game: &GameDefinition,
    se_set: &EquilibriumSet,
    ne_set: &EquilibriumSet,
    cfg: &SolverConfig,
    n_samples: usize,
    seed: u64,
) -> Result<ClosenessReport> {
    let (eta, eta1, eta2) = compute_eta(game, se_set, ne_set, cfg)?;
    let l = estimate_lipschitz(game, cfg, n_samples, seed)?;
    let k1 = estimate_strong_concavity(game, ConcaveIn::MiddleInY, cfg, n_samples, seed.wrapping_add(1))?;
    let k2 = estimate_strong_concavity(game, ConcaveIn::LeaderInX, cfg, n_samples, seed.wrapping_add(2))?;
    let constants = ClosenessConstants {
        l,
        kappa1: k1.unwrap_or(0.0),
        kappa2: k2.unwrap_or(0.0),
        eta,
        eta1,
        eta2,
    };
    let measured = hausdorff(&se_set.profiles, &ne_set.profiles)?;
    let strongly_concave = k1.is_some() && k2.is_some();
    let bound = if strongly_concave { Some(bound_thm3(&constants)?) } else { None };
    let point_bound = if strongly_concave && eta1.is_some() {
        Some(bound_co1(&constants)?)
    } else {
        None
    };
    Ok(ClosenessReport {
        constants,
        bound,
        measured_hausdorff: measured,
        bound_satisfied: bound.is_some_and(|b| measured < b),
        point_bound,
        strongly_concave,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts(l: f64, k1: f64, k2: f64, eta: f64) -> ClosenessConstants {
        ClosenessConstants { l, kappa1: k1, kappa2: k2, eta, eta1: None, eta2: None }
    }

    #[test]
    fn hausdorff_examples() {
        let a = [Profile::new(0.1, 0.2, 0.3)];
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        let o = [Profile::new(0.0, 0.0, 0.0)];
        assert_eq!(hausdorff(&o, &[Profile::new(3.0, 4.0, 0.0)]).unwrap(), 5.0);
        let two = [Profile::new(0.0, 0.0, 0.0), Profile::new(1.0, 0.0, 0.0)];
        assert_eq!(hausdorff(&two, &o).unwrap(), 1.0);
        assert!(hausdorff(&[], &o).is_err());
    }

    #[test]
    fn bound_examples() {
        assert!((bound_thm3(&consts(0.0, 1.0, 1.0, 0.1)).unwrap() - 0.2).abs() < 1e-15);
        assert!((bound_thm3(&consts(1.0, 2.0, 2.0, 0.5)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(bound_thm3(&consts(1.0, 2.0, 2.0, 0.0)).unwrap(), 0.0);
        assert!(bound_thm3(&consts(1.0, 0.0, 2.0, 0.5)).is_err());
        let mut c = consts(0.0, 1.0, 1.0, 0.0);
        c.eta1 = Some(0.1);
        c.eta2 = Some(0.1);
        assert!((bound_co1(&c).unwrap() - 0.2).abs() < 1e-15);
        let mut c = consts(1.0, 2.0, 4.0, 0.0);
        c.eta1 = Some(0.2);
        c.eta2 = Some(0.4);
        assert!((bound_co1(&c).unwrap() - 0.4).abs() < 1e-15);
        assert!(bound_co1(&consts(1.0, 2.0, 4.0, 0.0)).is_err());
    }
}
