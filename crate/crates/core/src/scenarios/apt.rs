//! Advanced persistent threat game: defender X, insider Y, attacker Z.

use crate::error::{Error, Result};
use crate::game::{GameDefinition, StrategyBox};

#[derive(Debug, Clone, PartialEq)]
pub struct AptParams {
    /// Cost per defense action.
    pub c_d: f64,
    /// Cost per attack action.
    pub c_a: f64,
    /// Insider proportion.
    pub rho: f64,
    pub strategy_box: StrategyBox,
}

impl AptParams {
    /// Desk-scale box `x∈[0.05,1], y∈[0,ρ], z∈[0.2,2]`.
    pub fn new(c_a: f64, c_d: f64, rho: f64) -> Result<Self> {
        let p = AptParams {
            c_d,
            c_a,
            rho,
            strategy_box: StrategyBox::from_bounds([0.05, 1.0, 0.0, rho, 0.2, 2.0])?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.strategy_box;
        if !(self.c_d > 0.0 && self.c_a > 0.0) {
            return Err(Error::InvalidParams("c_a and c_d must be positive".into()));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Error::InvalidParams(format!("rho must lie in (0,1), got {}", self.rho)));
        }
        if b.y.hi() > self.rho {
            return Err(Error::InvalidParams(format!(
                "y_max = {} exceeds rho = {}: the insider's capability is capped at rho",
                b.y.hi(),
                self.rho
            )));
        }
        if b.z.lo() <= 0.0 || b.x.lo() <= 0.0 {
            return Err(Error::InvalidParams("APT needs x_min > 0 and z_min > 0".into()));
        }
        Ok(())
    }

    fn z_star(&self, x: f64, y: f64) -> f64 {
        self.strategy_box.z.clamp((x / (2.0 * self.c_a)).sqrt() / (1.0 - y))
    }

    fn u_hat_y(&self, x: f64, y: f64) -> f64 {
        self.rho * x / (2.0 * self.z_star(x, y)) + y
    }

    /// Û_Y rises with y wherever the attack rate is clipped, and has constant
    /// slope in between, so its maximum is an end point or the lower clipping knee.
    fn y_star(&self, x: f64) -> f64 {
        let b = &self.strategy_box;
        let knee = 1.0 - (x / (2.0 * self.c_a)).sqrt() / b.z.lo();
        let mut best = (b.y.lo(), self.u_hat_y(x, b.y.lo()));
        for y in [knee, b.y.hi()] {
            if b.y.interior(y) || y == b.y.hi() {
                let v = self.u_hat_y(x, y);
                if v > best.1 {
                    best = (y, v);
                }
            }
        }
        best.0
    }

    fn interior_z(&self, x: f64, y: f64) -> bool {
        self.strategy_box.z.interior((x / (2.0 * self.c_a)).sqrt() / (1.0 - y))
    }
}

pub fn build_apt(p: &AptParams) -> Result<GameDefinition> {
    p.validate()?;
    let (c_a, c_d, rho) = (p.c_a, p.c_d, p.rho);
    let label = format!("apt c_a={c_a} c_d={c_d} rho={rho}");
    let (q1, q2, q3) = (p.clone(), p.clone(), p.clone());
    Ok(GameDefinition::new(
        label,
        p.strategy_box,
        move |x| -c_d * x,
        |_, z| 1.0 / (2.0 * z),
        |_, _| 1.0,
        move |x, z| rho * x / (2.0 * z),
        move |x, y, z| 1.0 - x / (2.0 * z) - c_a * (1.0 - y).powi(2) * z - y,
    )
    .with_closed_br_z(move |x, y| (x / (2.0 * c_a)).sqrt() / (1.0 - y))
    .with_closed_br_y(move |x| q1.y_star(x))
    .with_closed_t1(move |x, y| {
        if q2.interior_z(x, y) {
            1.0 - (rho * rho * c_a * x / 2.0).sqrt()
        } else {
            1.0
        }
    })
    .with_closed_t2(move |x| {
        let y = q3.y_star(x);
        let knee = 1.0 - (x / (2.0 * c_a)).sqrt() / q3.strategy_box.z.lo();
        if q3.interior_z(x, y) && y != knee {
            (1.0 - y) * (c_a / (8.0 * x)).sqrt() - c_d
        } else {
            1.0 / (2.0 * q3.z_star(x, y)) - c_d
        }
    })
    .with_closed_t3(|_| 1.0)
    .with_closed_t4(move |_, _, z_se| 1.0 / (2.0 * z_se) - c_d))
}

/// The printed coincidence condition:
/// `c_a/c_d² ≥ 8·x_max/(1−y_max)²` or `c_a/c_d² ≤ 2·x_min/(1−y_min)²`.
pub fn apt_condition_eq3(p: &AptParams) -> Result<bool> {
    p.validate()?;
    let b = &p.strategy_box;
    let ratio = p.c_a / (p.c_d * p.c_d);
    Ok(ratio >= 8.0 * b.x.hi() / (1.0 - b.y.hi()).powi(2)
        || ratio <= 2.0 * b.x.lo() / (1.0 - b.y.lo()).powi(2))
}

/// Relative distance of `c_a/c_d²` to the nearer threshold of [`apt_condition_eq3`].
pub fn apt_threshold_margin(p: &AptParams) -> f64 {
    let b = &p.strategy_box;
    let ratio = p.c_a / (p.c_d * p.c_d);
    let upper = 8.0 * b.x.hi() / (1.0 - b.y.hi()).powi(2);
    let lower = 2.0 * b.x.lo() / (1.0 - b.y.lo()).powi(2);
    ((ratio - upper).abs() / upper).min((ratio - lower).abs() / lower)
}
