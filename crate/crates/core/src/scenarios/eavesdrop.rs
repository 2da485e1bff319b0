//! Cooperative relaying under an active eavesdropper: source X, relay Y, eavesdropper Z.

use std::f64::consts::LN_2;

use crate::coincidence::shrinking_search;
use crate::config::NeighborhoodSpec;
use crate::error::{Error, Result};
use crate::game::{GameDefinition, StrategyBox};

#[derive(Debug, Clone, PartialEq)]
pub struct EavesdropParams {
    /// Relay→destination channel gain, squared.
    pub h_rd_sq: f64,
    /// Eavesdropper→destination channel gain, squared.
    pub h_ed_sq: f64,
    /// Background noise on the channel.
    pub noise: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub strategy_box: StrategyBox,
}

impl EavesdropParams {
    /// Reconstructed desk preset: `h_ed²=0.5, noise=0.05, d1=d2=1, d3=0.1, d4=0.8`
    /// on `x∈[0.05,1], y∈[0.1,1], z∈[0,2]`.
    pub fn preset(h_rd_sq: f64) -> Result<Self> {
        let p = EavesdropParams {
            h_rd_sq,
            h_ed_sq: 0.5,
            noise: 0.05,
            d1: 1.0,
            d2: 1.0,
            d3: 0.1,
            d4: 0.8,
            strategy_box: StrategyBox::from_bounds([0.05, 1.0, 0.1, 1.0, 0.0, 2.0])?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        if !(unit(self.h_rd_sq) && unit(self.h_ed_sq)) {
            return Err(Error::InvalidParams("channel gains must lie in (0,1]".into()));
        }
        let pos = [self.noise, self.d1, self.d2, self.d3, self.d4];
        if !pos.iter().all(|v| *v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParams("noise and d1..d4 must be positive".into()));
        }
        if self.noise + self.h_ed_sq * self.strategy_box.z.lo() <= 0.0 {
            return Err(Error::InvalidParams("noise + h_ed²·z must stay positive on the box".into()));
        }
        if self.strategy_box.x.lo() < 0.0 {
            return Err(Error::InvalidParams("transmit power must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn phi(&self, x: f64) -> f64 {
        let h = self.h_rd_sq;
        (h * h * x * x / 4.0 + h * self.h_ed_sq * x / (LN_2 * self.d2)).sqrt()
    }

    fn z_stationary(&self, x: f64) -> f64 {
        (self.phi(x) - self.h_rd_sq * x / 2.0 - self.noise) / self.h_ed_sq
    }

    fn y_star(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.strategy_box.y.hi()
        } else {
            self.strategy_box.y.lo()
        }
    }

    /// Leader's marginal utility along the composed path.
    fn t2(&self, x: f64) -> f64 {
        let (h, e) = (self.h_rd_sq, self.h_ed_sq);
        let y = self.y_star(x);
        let zs = self.z_stationary(x);
        if self.strategy_box.z.interior(zs) {
            let phi = self.phi(x);
            self.d1 * h * h * e
                / (phi * (LN_2 * self.d2 * h * h * x + 2.0 * h * e - 2.0 * LN_2 * self.d2 * h * phi))
                - self.d4 * y
        } else {
            let z = self.strategy_box.z.clamp(zs);
            self.d1 * h / (self.noise + e * z) - self.d4 * y
        }
    }
}

pub fn build_eavesdrop(p: &EavesdropParams) -> Result<GameDefinition> {
    p.validate()?;
    let EavesdropParams { h_rd_sq: h, h_ed_sq: e, noise, d1, d2, d3, d4, .. } = *p;
    let (q1, q2, q3) = (p.clone(), p.clone(), p.clone());
    Ok(GameDefinition::new(
        format!("eavesdrop h_rd_sq={h}"),
        p.strategy_box,
        |_| 0.0,
        move |y, z| d1 * h / (noise + e * z) - d4 * y,
        |x, _| x,
        move |x, _| -d3 * x,
        move |x, _, z| -((h * x + noise + e * z) / (noise + e * z)).log2() - d2 * z,
    )
    .with_closed_br_z(move |x, _| q1.z_stationary(x))
    .with_closed_br_y(move |x| q2.y_star(x))
    .with_closed_t1(|x, _| x)
    .with_closed_t2(move |x| q3.t2(x))
    .with_closed_t3(|x| x)
    .with_closed_t4(move |_, y_se, z_se| d1 * h / (noise + e * z_se) - d4 * y_se))
}

/// Left-hand side minus right-hand side of the printed channel condition at `x`.
pub fn eq2_margin(p: &EavesdropParams, x: f64) -> f64 {
    let (h, e, d2) = (p.h_rd_sq, p.h_ed_sq, p.d2);
    let phi = p.phi(x);
    let lhs = phi * (h * h * d2 * x + 2.0 * h * e - 2.0 * h * d2 * phi);
    let rhs = p.d1 * h * h * e / (2.0 * d2 * p.d4 * p.strategy_box.y.hi());
    lhs - rhs
}

/// The printed channel condition, tested on shrinking neighborhoods of `x_se`
/// inside the open leader interval.
pub fn eavesdrop_condition_eq2(p: &EavesdropParams, x_se: f64, spec: &NeighborhoodSpec) -> Result<bool> {
    p.validate()?;
    let xs = p.strategy_box.x;
    if !xs.contains(x_se) {
        return Err(Error::Domain(format!("x_se = {x_se} outside {xs}")));
    }
    let r = shrinking_search(x_se, xs, spec, Some(1e-7), |x| Ok(eq2_margin(p, x) < 0.0))?;
    Ok(r.is_some())
}

/// Same test with the leader marginal written out in full (`ln 2` kept, no
/// factor 2·d2 on the right): the sign of the composed-utility slope on the
/// neighborhood, which is what the coincidence theorem actually needs when
/// the relay prices at `y_max` and the leader coefficient stays positive.
pub fn eavesdrop_condition_derived(p: &EavesdropParams, x_se: f64, spec: &NeighborhoodSpec) -> Result<bool> {
    p.validate()?;
    let xs = p.strategy_box.x;
    if !xs.contains(x_se) {
        return Err(Error::Domain(format!("x_se = {x_se} outside {xs}")));
    }
    let r = shrinking_search(x_se, xs, spec, Some(1e-7), |x| Ok(p.t2(x) > 0.0))?;
    Ok(r.is_some())
}
