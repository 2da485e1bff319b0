use std::fmt;
use std::sync::Arc;

use crate::error::{finite, Error, Result};

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Fn3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidParams(format!("interval [{lo}, {hi}] is not finite")));
        }
        if lo >= hi {
            return Err(Error::InvalidParams(format!("degenerate interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn interior(&self, v: f64) -> bool {
        self.lo < v && v < self.hi
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    /// `n` evenly spaced points including both ends.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        let last = (n - 1) as f64;
        (0..n)
            .map(|k| {
                if k == 0 {
                    self.lo
                } else if k == n - 1 {
                    self.hi
                } else {
                    self.lo + self.width() * (k as f64 / last)
                }
            })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyBox {
    pub x: Interval,
    pub y: Interval,
    pub z: Interval,
}

impl StrategyBox {
    pub fn new(x: Interval, y: Interval, z: Interval) -> Self {
        StrategyBox { x, y, z }
    }

    pub fn from_bounds(b: [f64; 6]) -> Result<Self> {
        Ok(StrategyBox {
            x: Interval::new(b[0], b[1])?,
            y: Interval::new(b[2], b[3])?,
            z: Interval::new(b[4], b[5])?,
        })
    }

    pub fn axis(&self, p: Player) -> Interval {
        match p {
            Player::X => self.x,
            Player::Y => self.y,
            Player::Z => self.z,
        }
    }

    pub fn contains(&self, p: &Profile) -> bool {
        self.x.contains(p.x) && self.y.contains(p.y) && self.z.contains(p.z)
    }

    pub fn clamp(&self, p: Profile) -> Profile {
        Profile::new(self.x.clamp(p.x), self.y.clamp(p.y), self.z.clamp(p.z))
    }
}

/// One strategy triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Profile {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Profile { x, y, z }
    }

    pub fn checked(x: f64, y: f64, z: f64, b: &StrategyBox) -> Result<Self> {
        let p = Profile { x, y, z };
        if b.contains(&p) {
            Ok(p)
        } else {
            Err(Error::Domain(format!("profile ({x}, {y}, {z}) outside the strategy box")))
        }
    }

    pub fn get(&self, p: Player) -> f64 {
        match p {
            Player::X => self.x,
            Player::Y => self.y,
            Player::Z => self.z,
        }
    }

    pub fn with(mut self, p: Player, v: f64) -> Self {
        match p {
            Player::X => self.x = v,
            Player::Y => self.y = v,
            Player::Z => self.z = v,
        }
        self
    }

    pub fn dist(&self, o: &Profile) -> f64 {
        let (dx, dy, dz) = (self.x - o.x, self.y - o.y, self.z - o.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn max_dist(&self, o: &Profile) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.z - o.z).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Utilities {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Utilities {
    pub fn get(&self, p: Player) -> f64 {
        match p {
            Player::X => self.x,
            Player::Y => self.y,
            Player::Z => self.z,
        }
    }
}

/// Optional closed forms of the four coincidence operators.
/// `t4` takes `(x, y_se, z_se)`.
#[derive(Clone, Default)]
pub struct ClosedOperators {
    pub t1: Option<Fn2>,
    pub t2: Option<Fn1>,
    pub t3: Option<Fn1>,
    pub t4: Option<Fn3>,
}

/// The structured game. Immutable once built; clones share the building blocks.
#[derive(Clone)]
pub struct GameDefinition {
    label: String,
    strategy_box: StrategyBox,
    b: Fn1,
    f_x: Fn2,
    f_y1: Fn2,
    f_y2: Fn2,
    f_z: Fn3,
    closed_br_z: Option<Fn2>,
    closed_br_y: Option<Fn1>,
    closed_t: ClosedOperators,
}

impl fmt::Debug for GameDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameDefinition")
            .field("label", &self.label)
            .field("box", &self.strategy_box)
            .field("closed_br_z", &self.closed_br_z.is_some())
            .field("closed_br_y", &self.closed_br_y.is_some())
            .finish()
    }
}

impl GameDefinition {
    pub fn new(
        label: impl Into<String>,
        strategy_box: StrategyBox,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f_x: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        f_y1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        f_y2: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        f_z: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        GameDefinition {
            label: label.into(),
            strategy_box,
            b: Arc::new(b),
            f_x: Arc::new(f_x),
            f_y1: Arc::new(f_y1),
            f_y2: Arc::new(f_y2),
            f_z: Arc::new(f_z),
            closed_br_z: None,
            closed_br_y: None,
            closed_t: ClosedOperators::default(),
        }
    }

    pub fn with_closed_br_z(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_br_z = Some(Arc::new(f));
        self
    }

    pub fn with_closed_br_y(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_br_y = Some(Arc::new(f));
        self
    }

    pub fn with_closed_t1(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_t.t1 = Some(Arc::new(f));
        self
    }

    pub fn with_closed_t2(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_t.t2 = Some(Arc::new(f));
        self
    }

    pub fn with_closed_t3(mut self, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.closed_t.t3 = Some(Arc::new(f));
        self
    }

    pub fn with_closed_t4(
        mut self,
        f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.closed_t.t4 = Some(Arc::new(f));
        self
    }

    /// Same game with every closed form stripped, so all queries go numeric.
    pub fn without_closed_forms(&self) -> Self {
        let mut g = self.clone();
        g.closed_br_z = None;
        g.closed_br_y = None;
        g.closed_t = ClosedOperators::default();
        g
    }

    /// Replace one player's utility `U` by `a·U + b` (`a > 0`) through its building blocks.
    pub fn rescaled(&self, player: Player, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidParams(format!("rescaling needs a > 0, got a={a}, b={b}")));
        }
        let mut g = self.clone();
        match player {
            Player::X => {
                let (bb, fx) = (self.b.clone(), self.f_x.clone());
                g.b = Arc::new(move |x| a * bb(x) + b);
                g.f_x = Arc::new(move |y, z| a * fx(y, z));
                if let Some(t2) = self.closed_t.t2.clone() {
                    g.closed_t.t2 = Some(Arc::new(move |x| a * t2(x)));
                }
                if let Some(t4) = self.closed_t.t4.clone() {
                    g.closed_t.t4 = Some(Arc::new(move |x, y, z| a * t4(x, y, z)));
                }
            }
            Player::Y => {
                let (f1, f2) = (self.f_y1.clone(), self.f_y2.clone());
                g.f_y1 = Arc::new(move |x, z| a * f1(x, z));
                g.f_y2 = Arc::new(move |x, z| a * f2(x, z) + b);
                if let Some(t1) = self.closed_t.t1.clone() {
                    g.closed_t.t1 = Some(Arc::new(move |x, y| a * t1(x, y)));
                }
                if let Some(t3) = self.closed_t.t3.clone() {
                    g.closed_t.t3 = Some(Arc::new(move |x| a * t3(x)));
                }
            }
            Player::Z => {
                let fz = self.f_z.clone();
                g.f_z = Arc::new(move |x, y, z| a * fz(x, y, z) + b);
            }
        }
        g.label = format!("{} ({player:?} rescaled)", self.label);
        Ok(g)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn strategy_box(&self) -> &StrategyBox {
        &self.strategy_box
    }

    pub fn closed_br_z(&self) -> Option<&Fn2> {
        self.closed_br_z.as_ref()
    }

    pub fn closed_br_y(&self) -> Option<&Fn1> {
        self.closed_br_y.as_ref()
    }

    pub fn closed_operators(&self) -> &ClosedOperators {
        &self.closed_t
    }

    pub fn standalone(&self, x: f64) -> Result<f64> {
        finite((self.b)(x), "B")
    }

    pub fn coupling(&self, y: f64, z: f64) -> Result<f64> {
        finite((self.f_x)(y, z), "f_x")
    }

    pub fn middle_slope(&self, x: f64, z: f64) -> Result<f64> {
        finite((self.f_y1)(x, z), "f_y1")
    }

    pub fn middle_offset(&self, x: f64, z: f64) -> Result<f64> {
        finite((self.f_y2)(x, z), "f_y2")
    }

    pub fn u_x(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        finite(self.standalone(x)? + self.coupling(y, z)? * x, "U_X")
    }

    pub fn u_y(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        finite(self.middle_slope(x, z)? * y + self.middle_offset(x, z)?, "U_Y")
    }

    pub fn u_z(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        finite((self.f_z)(x, y, z), "f_z")
    }

    /// Utility of `player` at `p`, without the box check.
    pub fn utility(&self, player: Player, p: &Profile) -> Result<f64> {
        match player {
            Player::X => self.u_x(p.x, p.y, p.z),
            Player::Y => self.u_y(p.x, p.y, p.z),
            Player::Z => self.u_z(p.x, p.y, p.z),
        }
    }

    pub fn evaluate(&self, p: &Profile) -> Result<Utilities> {
        if !self.strategy_box.contains(p) {
            return Err(Error::Domain(format!(
                "profile ({}, {}, {}) outside the strategy box",
                p.x, p.y, p.z
            )));
        }
        Ok(Utilities {
            x: self.u_x(p.x, p.y, p.z)?,
            y: self.u_y(p.x, p.y, p.z)?,
            z: self.u_z(p.x, p.y, p.z)?,
        })
    }

    pub(crate) fn check_axis(&self, player: Player, v: f64) -> Result<()> {
        let iv = self.strategy_box.axis(player);
        if iv.contains(v) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{player:?} = {v} outside {iv}")))
        }
    }
}
