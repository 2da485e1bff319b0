//! Quadratic test game whose composed utilities are strongly concave.
//!
//! `B = −x² + d·x`, `f_x = −c·y`, `f_y1 = a − z`, `f_y2 = b·x·z`, `f_z = −(z − y)²`.

use crate::error::{Error, Result};
use crate::game::{GameDefinition, StrategyBox};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub strategy_box: StrategyBox,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            a: 0.5,
            b: 0.5,
            c: 0.5,
            d: 1.0,
            strategy_box: StrategyBox::from_bounds([0.0, 1.0, 0.0, 1.0, 0.0, 1.0]).expect("unit box"),
        }
    }
}

impl SyntheticParams {
    pub fn validate(&self) -> Result<()> {
        if ![self.a, self.b, self.c, self.d].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("synthetic coefficients must be finite".into()));
        }
        let bx = &self.strategy_box;
        if bx.z.lo() > bx.y.lo() || bx.z.hi() < bx.y.hi() {
            return Err(Error::InvalidParams("the z interval must cover the y interval".into()));
        }
        Ok(())
    }

    fn y_star(&self, x: f64) -> f64 {
        self.strategy_box.y.clamp((self.a + self.b * x) / 2.0)
    }
}

pub fn build_synthetic(p: &SyntheticParams) -> Result<GameDefinition> {
    p.validate()?;
    let SyntheticParams { a, b, c, d, .. } = *p;
    let (q1, q2, q3) = (p.clone(), p.clone(), p.clone());
    Ok(GameDefinition::new(
        format!("synthetic a={a} b={b} c={c} d={d}"),
        p.strategy_box,
        move |x| -x * x + d * x,
        move |y, _| -c * y,
        move |_, z| a - z,
        move |x, z| b * x * z,
        |_, y, z| -(z - y) * (z - y),
    )
    .with_closed_br_z(|_, y| y)
    .with_closed_br_y(move |x| q1.y_star(x))
    .with_closed_t1(move |x, y| a - 2.0 * y + b * x)
    .with_closed_t2(move |x| {
        let raw = (a + b * x) / 2.0;
        if q2.strategy_box.y.interior(raw) {
            -2.0 * x + d - c * (a + 2.0 * b * x) / 2.0
        } else {
            -2.0 * x + d - c * q2.y_star(x)
        }
    })
    .with_closed_t3(move |x| a - q3.y_star(x))
    .with_closed_t4(move |x, y_se, _| -2.0 * x + d - c * y_se))
}
