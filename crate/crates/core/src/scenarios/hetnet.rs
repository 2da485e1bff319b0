//! Secure downlink in a heterogeneous network: MBS X, jamming SBS Y, helping SBS Z.

use std::f64::consts::LN_2;

use crate::coincidence::{sgn, shrinking_search};
use crate::config::NeighborhoodSpec;
use crate::error::{Error, Result};
use crate::game::{GameDefinition, Profile, StrategyBox};

#[derive(Debug, Clone, PartialEq)]
pub struct HetNetParams {
    /// Unit profit of the secrecy rate.
    pub lambda_m: f64,
    /// Unit power cost.
    pub theta: f64,
    /// Economic incentive.
    pub tau: f64,
    pub lambda_j: f64,
    pub alpha: f64,
    /// Unit offloading cost.
    pub omega: f64,
    pub g_je_sq: f64,
    pub g_me_sq: f64,
    pub n0: f64,
    /// MBS transmit power in watts.
    pub p_m: f64,
    pub sigma_ke: f64,
    pub r_m: f64,
    pub strategy_box: StrategyBox,
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl HetNetParams {
    /// Reconstructed base preset at 30 dBm on `x∈[0.1,1], y∈[0.6,6], z∈[0,6]`.
    pub fn preset(lambda_j: f64, p_m_dbm: f64) -> Result<Self> {
        let p = HetNetParams {
            lambda_m: 40.0,
            theta: 0.1,
            tau: 1.0,
            lambda_j,
            alpha: 0.5,
            omega: 0.5,
            g_je_sq: 0.5,
            g_me_sq: 0.2,
            n0: 1.0,
            p_m: dbm_to_watts(p_m_dbm),
            sigma_ke: 0.0,
            r_m: 5.0,
            strategy_box: StrategyBox::from_bounds([0.1, 1.0, 0.6, 6.0, 0.0, 6.0])?,
        };
        p.validate()?;
        Ok(p)
    }

    /// Expensive jamming service: the SE prices inside the box and is never an NE.
    pub fn fig7a() -> Result<Self> {
        Self::preset(3.0, 30.0)
    }

    /// Cheap offloading: the price sits at its floor and one SE is also an NE.
    pub fn fig7b() -> Result<Self> {
        Self::preset(0.1, 30.0)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            self.lambda_m,
            self.theta,
            self.tau,
            self.lambda_j,
            self.alpha,
            self.omega,
            self.g_je_sq,
            self.g_me_sq,
            self.n0,
            self.p_m,
        ];
        if !pos.iter().all(|v| *v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParams("HetNet coefficients must be positive".into()));
        }
        if !(self.sigma_ke >= 0.0 && self.r_m.is_finite()) {
            return Err(Error::InvalidParams("sigma_ke must be nonnegative".into()));
        }
        let b = &self.strategy_box;
        if b.z.lo() < 0.0 || b.y.lo() < 0.0 {
            return Err(Error::InvalidParams("HetNet needs y_min >= 0 and z_min >= 0".into()));
        }
        let (a, c) = (self.tau - self.g_je_sq * b.x.lo(), self.tau - self.g_je_sq * b.x.hi());
        if a * c <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "tau - g_je²·x vanishes on the leader interval {}",
                b.x
            )));
        }
        Ok(())
    }

    pub fn sigma_me(&self) -> f64 {
        self.p_m * self.g_me_sq / self.n0
    }

    fn zeta(&self, x: f64) -> f64 {
        1.0 + self.g_je_sq * x / self.n0 + self.sigma_ke
    }

    pub fn secrecy_rate(&self, x: f64) -> f64 {
        self.r_m - (1.0 + self.sigma_me() / self.zeta(x)).log2()
    }

    fn secrecy_slope(&self, x: f64) -> f64 {
        let (s, z) = (self.sigma_me(), self.zeta(x));
        self.lambda_m * s * self.g_je_sq / (LN_2 * self.n0 * (z * z + s * z))
    }

    fn c(&self) -> f64 {
        (self.alpha / self.omega).sqrt()
    }

    fn z_stationary(&self, y: f64) -> f64 {
        y.abs() * self.c() - self.alpha
    }

    fn z_star(&self, y: f64) -> f64 {
        self.strategy_box.z.clamp(self.z_stationary(y))
    }

    fn u_hat_y(&self, x: f64, y: f64) -> f64 {
        (self.g_je_sq * x - self.tau) * y - self.theta * x + self.lambda_j * (1.0 + self.z_star(y)).ln()
    }

    /// Interior price where the composed slope vanishes.
    fn y_interior(&self, x: f64) -> f64 {
        self.lambda_j / (self.tau - self.g_je_sq * x) - (1.0 - self.alpha) / self.c()
    }

    /// Û_Y is concave where the offloading is interior and linear where it is
    /// clipped, so the maximum is among the box ends, the clipping knees and the
    /// interior stationary point.
    fn y_star(&self, x: f64) -> f64 {
        let b = &self.strategy_box;
        let c = self.c();
        let mut cands = vec![b.y.lo(), b.y.hi()];
        for v in [(b.z.lo() + self.alpha) / c, (b.z.hi() + self.alpha) / c] {
            if b.y.interior(v) {
                cands.push(v);
            }
        }
        let yi = self.y_interior(x);
        if b.y.interior(yi) && b.z.interior(self.z_stationary(yi)) && self.tau > self.g_je_sq * x {
            cands.push(yi);
        }
        cands.sort_by(f64::total_cmp);
        let mut best = (cands[0], self.u_hat_y(x, cands[0]));
        for &y in &cands[1..] {
            let v = self.u_hat_y(x, y);
            if v > best.1 {
                best = (y, v);
            }
        }
        best.0
    }

    fn t1(&self, x: f64, y: f64) -> f64 {
        let base = self.g_je_sq * x - self.tau;
        if self.strategy_box.z.interior(self.z_stationary(y)) {
            let c = self.c();
            base + c * self.lambda_j / (1.0 - self.alpha + c * y)
        } else {
            base
        }
    }

    fn t2(&self, x: f64) -> f64 {
        let y = self.y_star(x);
        let g = self.g_je_sq;
        if y == self.y_interior(x) {
            let d = self.tau - g * x;
            self.secrecy_slope(x) - g * self.lambda_j * self.tau / (d * d)
                + g * (1.0 - self.alpha) / self.c()
        } else {
            self.secrecy_slope(x) - g * y
        }
    }
}

pub fn build_hetnet(p: &HetNetParams) -> Result<GameDefinition> {
    p.validate()?;
    let (g, tau, theta, lambda_j, alpha, omega) =
        (p.g_je_sq, p.tau, p.theta, p.lambda_j, p.alpha, p.omega);
    let (q0, q1, q2, q3, q4, q5) = (p.clone(), p.clone(), p.clone(), p.clone(), p.clone(), p.clone());
    let lambda_m = p.lambda_m;
    Ok(GameDefinition::new(
        format!("hetnet lambda_j={lambda_j} p_m={}W", p.p_m),
        p.strategy_box,
        move |x| lambda_m * q0.secrecy_rate(x),
        move |y, _| -g * y,
        move |x, _| g * x - tau,
        move |x, z| -theta * x + lambda_j * (1.0 + z).ln(),
        move |_, y, z| y * y * z / (z + alpha) - omega * z,
    )
    .with_closed_br_z(move |_, y| q1.z_stationary(y))
    .with_closed_br_y(move |x| q2.y_star(x))
    .with_closed_t1(move |x, y| q3.t1(x, y))
    .with_closed_t2(move |x| q4.t2(x))
    .with_closed_t3(move |x| g * x - tau)
    .with_closed_t4(move |x, y_se, _| q5.secrecy_slope(x) - g * y_se))
}

/// Existence test for an SE that is also an NE: the displayed price
/// inequality on a neighborhood of `y_se`, and `T4(x)·sgn(x − x_se) ≤ 0` on a
/// neighborhood of `x_se`.
pub fn hetnet_exists_condition(p: &HetNetParams, se: &Profile, spec: &NeighborhoodSpec) -> Result<bool> {
    p.validate()?;
    let b = &p.strategy_box;
    if !b.contains(se) {
        return Err(Error::Domain("SE profile outside the strategy box".into()));
    }
    let d = p.tau - p.g_je_sq * se.x;
    if d == 0.0 {
        return Err(Error::Domain("tau - g_je²·x_se = 0, condition is singular".into()));
    }
    let floor = p.lambda_j / d - p.omega.sqrt() * (1.0 - p.alpha) / p.alpha.sqrt();
    let y_ok = shrinking_search(se.y, b.y, spec, None, |y| Ok(y >= floor))?;
    if y_ok.is_none() {
        return Ok(false);
    }
    let x_ok = shrinking_search(se.x, b.x, spec, None, |x| {
        Ok((p.secrecy_slope(x) - p.g_je_sq * se.y) * sgn(x - se.x) <= 0.0)
    })?;
    Ok(x_ok.is_some())
}
