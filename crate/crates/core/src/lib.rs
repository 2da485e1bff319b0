//! Stackelberg and Nash equilibria of structured three-player leader-follower games.
//!
//! The leader X, middle player Y and follower Z have utilities
//! `U_X = B(x) + f_x(y,z)·x`, `U_Y = f_y1(x,z)·y + f_y2(x,z)` and `U_Z = f_z(x,y,z)`
//! on a box of scalar strategies.

pub mod closeness;
pub mod coincidence;
pub mod config;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod harness;
pub mod optimize;
pub mod response;
pub mod scenarios;

pub use closeness::{ClosenessConstants, ClosenessReport};
pub use coincidence::{CoincidenceReport, Theorem, Verdict};
pub use config::{NeighborhoodSpec, SolverConfig};
pub use equilibrium::{EquilibriumKind, EquilibriumSet};
pub use error::{Error, Result};
pub use game::{GameDefinition, Interval, Player, Profile, StrategyBox, Utilities};
