//! Built-in application games.

pub mod apt;
pub mod eavesdrop;
pub mod hetnet;
pub mod synthetic;

pub use apt::{apt_condition_eq3, apt_threshold_margin, build_apt, AptParams};
pub use eavesdrop::{build_eavesdrop, eavesdrop_condition_derived, eavesdrop_condition_eq2, EavesdropParams};
pub use hetnet::{build_hetnet, dbm_to_watts, hetnet_exists_condition, HetNetParams};
pub use synthetic::{build_synthetic, SyntheticParams};

use crate::error::Result;
use crate::game::GameDefinition;

/// Parameters of any built-in game.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Eavesdrop(EavesdropParams),
    Apt(AptParams),
    HetNet(HetNetParams),
    Synthetic(SyntheticParams),
}

impl Scenario {
    pub fn build(&self) -> Result<GameDefinition> {
        match self {
            Scenario::Eavesdrop(p) => build_eavesdrop(p),
            Scenario::Apt(p) => build_apt(p),
            Scenario::HetNet(p) => build_hetnet(p),
            Scenario::Synthetic(p) => build_synthetic(p),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Eavesdrop(_) => "eavesdrop",
            Scenario::Apt(_) => "apt",
            Scenario::HetNet(_) => "hetnet",
            Scenario::Synthetic(_) => "synthetic_concave",
        }
    }
}
