//! Reconstructed desk-scale presets for the figure experiments.

use std::path::Path;

use super::config::{CellTask, RunConfig, ScenarioKind, ScenarioSpec, SweepAxis, SweepSpec};
use super::run::{run_sweep, ResultRow};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Source utilities under SE, mixed and NE profiles for two relay channels.
    Fig5,
    /// Coincidence map over attack and defense costs.
    Fig6a,
    /// Defender utility at SE and NE along the attack cost.
    Fig6b,
    /// SE and NE locations for expensive and cheap jamming service.
    Fig7,
    /// Hausdorff bound lines over MBS power and jamming price weight.
    Fig8,
}

impl Figure {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "fig5" => Some(Self::Fig5),
            "fig6a" => Some(Self::Fig6a),
            "fig6b" => Some(Self::Fig6b),
            "fig7" => Some(Self::Fig7),
            "fig8" => Some(Self::Fig8),
            _ => None,
        }
    }
}

use CellTask::*;

fn sweep(axis1: SweepAxis, axis2: Option<SweepAxis>, per_cell: &[CellTask]) -> Option<SweepSpec> {
    Some(SweepSpec { axis1, axis2, per_cell: per_cell.to_vec(), ratio_block: 5 })
}

fn apt_base() -> Result<ScenarioSpec, HarnessError> {
    // the wider attack-rate box keeps the follower response unclipped over the cost rectangle
    ScenarioSpec::new(ScenarioKind::Apt)
        .with("c_a", 1.0)?
        .with("c_d", 0.5)?
        .with("rho", 0.5)?
        .with("z_min", 0.1)?
        .with("z_max", 3.0)
}

/// Named run configurations making up one figure.
pub fn preset(fig: Figure) -> Result<Vec<(&'static str, RunConfig)>, HarnessError> {
    let out = match fig {
        Figure::Fig5 => {
            let mut c = RunConfig::new(ScenarioSpec::new(ScenarioKind::Eavesdrop));
            c.sweep = sweep(
                SweepAxis::list("h_rd_sq", &[0.2, 0.7]),
                None,
                &[SolveSe, SolveNe, Thm1, Eq2, UtilitiesUnderProfiles],
            );
            vec![("fig5", c)]
        }
        Figure::Fig6a => {
            let mut c = RunConfig::new(apt_base()?);
            c.solver = c.solver.with_grid(101);
            c.sweep = sweep(
                SweepAxis::range("c_a", 0.44, 1.25, 25),
                Some(SweepAxis::range("c_d", 0.15, 0.55, 25)),
                &[SolveSe, SolveNe, Thm1, Eq3, UtilitiesUnderProfiles],
            );
            vec![("fig6a", c)]
        }
        Figure::Fig6b => {
            let mut c = RunConfig::new(apt_base()?);
            c.solver = c.solver.with_grid(101);
            c.sweep = sweep(
                SweepAxis::range("c_a", 0.44, 1.25, 25),
                Some(SweepAxis::list("c_d", &[0.15, 0.35, 0.55])),
                &[SolveSe, SolveNe, Eq3, UtilitiesUnderProfiles],
            );
            vec![("fig6b", c)]
        }
        Figure::Fig7 => {
            let mut c = RunConfig::new(ScenarioSpec::new(ScenarioKind::Hetnet).with("p_m_dbm", 30.0)?);
            c.sweep = sweep(
                SweepAxis::list("lambda_j", &[3.0, 0.1]),
                None,
                &[SolveSe, SolveNe, Thm2, HetnetCond, UtilitiesUnderProfiles],
            );
            vec![("fig7", c)]
        }
        Figure::Fig8 => {
            let mut a = RunConfig::new(
                ScenarioSpec::new(ScenarioKind::Hetnet).with("lambda_j", 3.0)?.with("p_m_dbm", 30.0)?,
            );
            a.sweep = sweep(SweepAxis::list("p_m_dbm", &[15.0, 30.0, 60.0, 120.0]), None, &[SolveSe, SolveNe, Closeness, UtilitiesUnderProfiles]);
            let mut b = RunConfig::new(ScenarioSpec::new(ScenarioKind::Hetnet).with("p_m_dbm", 30.0)?);
            b.sweep = sweep(SweepAxis::list("lambda_j", &[0.1, 0.3, 1.0, 3.0]), None, &[SolveSe, SolveNe, Closeness, UtilitiesUnderProfiles]);
            vec![("fig8a", a), ("fig8b", b)]
        }
    };
    Ok(out)
}

/// Runs every configuration of `fig`, writing each into `out/<name>/`.
pub fn reproduce(
    fig: Figure,
    out: &Path,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<(&'static str, Vec<ResultRow>)>, HarnessError> {
    let mut results = Vec::new();
    for (name, mut cfg) in preset(fig)? {
        cfg.seed = seed;
        cfg.output_dir = out.join(name);
        let rows = run_sweep(&cfg, workers)?;
        results.push((name, rows));
    }
    Ok(results)
}
