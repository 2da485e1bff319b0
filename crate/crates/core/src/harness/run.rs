use rayon::prelude::*;

use super::config::{CellTask, RunConfig};
use super::HarnessError;
use crate::closeness::{closeness_report, ClosenessReport};
use crate::coincidence::{check_cor1, check_thm1, check_thm2, thm1_holds};
use crate::config::{NeighborhoodSpec, SolverConfig};
use crate::equilibrium::{solve_ne, solve_se, EquilibriumSet};
use crate::error::Result;
use crate::game::{GameDefinition, Profile};
use crate::response::leader_value;
use crate::scenarios::{
    apt_condition_eq3, eavesdrop_condition_eq2, hetnet_exists_condition, Scenario,
};

/// Grid coordinates of one sweep cell and the swept parameter values.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultRow {
    pub cell_i: usize,
    pub cell_j: usize,
    pub params: Vec<f64>,
    pub se: Vec<Profile>,
    pub ux_se: Option<f64>,
    pub ne: Vec<Profile>,
    pub ux_ne: Option<f64>,
    pub thm1: Option<bool>,
    pub cor1: Option<bool>,
    pub thm2: Option<bool>,
    pub eq_condition: Option<bool>,
    pub closeness: Option<ClosenessReport>,
    pub ux_case1: Option<f64>,
    pub ux_case2: Option<f64>,
    pub ux_case3: Option<f64>,
    /// Leader's pessimistic value at `x_se` and at `x_ne`.
    pub leader_value_se: Option<f64>,
    pub leader_value_ne: Option<f64>,
    pub error: Option<String>,
}

/// Everything a cell needs besides the game.
#[derive(Debug, Clone)]
pub struct CellContext<'a> {
    pub tasks: &'a [CellTask],
    pub solver: &'a SolverConfig,
    pub neighborhood: &'a NeighborhoodSpec,
    pub seed: u64,
    pub closeness_samples: usize,
}

pub fn cells(config: &RunConfig) -> std::result::Result<Vec<Cell>, HarnessError> {
    let Some(sw) = &config.sweep else {
        return Ok(vec![Cell { i: 0, j: 0, values: Vec::new() }]);
    };
    let a = sw.axis1.points()?;
    let b = match &sw.axis2 {
        Some(ax) => Some(ax.points()?),
        None => None,
    };
    let mut out = Vec::new();
    for (i, &va) in a.iter().enumerate() {
        match &b {
            Some(bs) => {
                for (j, &vb) in bs.iter().enumerate() {
                    out.push(Cell { i, j, values: vec![va, vb] });
                }
            }
            None => out.push(Cell { i, j: 0, values: vec![va] }),
        }
    }
    Ok(out)
}

fn tasks_of(config: &RunConfig) -> Vec<CellTask> {
    match &config.sweep {
        Some(sw) => sw.per_cell.clone(),
        None => vec![CellTask::SolveSe, CellTask::SolveNe],
    }
}

/// Instantiates the cell's game and runs the task list; failures land in
/// `error` and never abort.
pub fn run_cell(config: &RunConfig, cell: &Cell) -> ResultRow {
    let tasks = tasks_of(config);
    let mut row = ResultRow {
        cell_i: cell.i,
        cell_j: cell.j,
        params: cell.values.clone(),
        ..Default::default()
    };
    let mut spec = config.scenario.clone();
    if let Some(sw) = &config.sweep {
        let names = std::iter::once(&sw.axis1).chain(sw.axis2.as_ref());
        for (axis, v) in names.zip(&cell.values) {
            if let Err(e) = spec.set(&axis.param, *v) {
                row.error = Some(e.to_string());
                return row;
            }
        }
    }
    let scenario = match spec.instantiate() {
        Ok(s) => s,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let game = match scenario.build() {
        Ok(g) => g,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    let ctx = CellContext {
        tasks: &tasks,
        solver: &config.solver,
        neighborhood: &config.neighborhood,
        seed: config.seed.wrapping_add(cell.i as u64 * 1_000_003 + cell.j as u64),
        closeness_samples: config.closeness_samples,
    };
    let out = run_game(&game, Some(&scenario), &ctx);
    ResultRow { cell_i: cell.i, cell_j: cell.j, params: cell.values.clone(), ..out }
}

/// Runs the tasks on an arbitrary game. Scenario-specific conditions need
/// `scenario`.
pub fn run_game(game: &GameDefinition, scenario: Option<&Scenario>, ctx: &CellContext<'_>) -> ResultRow {
    let mut row = ResultRow::default();
    let mut errors = Vec::new();
    let has = |t: CellTask| ctx.tasks.contains(&t);
    let needs_se = ctx.tasks.iter().any(|t| !matches!(t, CellTask::SolveNe | CellTask::Eq3));
    let needs_ne = has(CellTask::SolveNe) || has(CellTask::Closeness) || has(CellTask::UtilitiesUnderProfiles);
    let (cfg, spec) = (ctx.solver, ctx.neighborhood);

    let se = if needs_se { record(&mut errors, solve_se(game, cfg)) } else { None };
    let ne = if needs_ne { record(&mut errors, solve_ne(game, cfg)) } else { None };
    if let Some(s) = &se {
        row.se = s.profiles.clone();
        row.ux_se = s.values.first().map(|u| u.x);
    }
    if let Some(n) = &ne {
        row.ne = n.profiles.clone();
        row.ux_ne = n.values.first().map(|u| u.x);
    }
    let se_ok = se.as_ref().filter(|s| !s.is_empty());
    let ne_ok = ne.as_ref().filter(|s| !s.is_empty());
    if needs_ne && ne.as_ref().is_some_and(|s| s.is_empty()) {
        errors.push("no Nash equilibrium found".to_string());
    }

    if let Some(s) = se_ok {
        if has(CellTask::Thm1) {
            row.thm1 = record(&mut errors, check_thm1(game, s, spec, cfg)).map(|r| thm1_holds(&r));
        }
        if has(CellTask::Cor1) {
            row.cor1 = record(&mut errors, check_cor1(game, s, spec, cfg)).map(|r| r.overall);
        }
        if has(CellTask::Thm2) {
            row.thm2 = record(&mut errors, check_thm2(game, s, spec, cfg)).map(|r| r.exists);
        }
    }
    for task in ctx.tasks {
        let verdict = match (task, scenario) {
            (CellTask::Eq3, Some(Scenario::Apt(p))) => Some(apt_condition_eq3(p)),
            (CellTask::Eq2, Some(Scenario::Eavesdrop(p))) => se_ok.map(|s| {
                let mut all = true;
                for q in &s.profiles {
                    all &= eavesdrop_condition_eq2(p, q.x, spec)?;
                }
                Ok(all)
            }),
            (CellTask::HetnetCond, Some(Scenario::HetNet(p))) => se_ok.map(|s| {
                let mut any = false;
                for q in &s.profiles {
                    any |= hetnet_exists_condition(p, q, spec)?;
                }
                Ok(any)
            }),
            (CellTask::Eq2 | CellTask::Eq3 | CellTask::HetnetCond, _) => {
                errors.push(format!("{task:?} does not apply to this scenario"));
                None
            }
            _ => None,
        };
        if let Some(v) = verdict {
            row.eq_condition = record(&mut errors, v);
        }
    }
    if let (Some(s), Some(n)) = (se_ok, ne_ok) {
        if has(CellTask::Closeness) {
            row.closeness = record(
                &mut errors,
                closeness_report(game, s, n, cfg, ctx.closeness_samples, ctx.seed),
            );
        }
        if has(CellTask::UtilitiesUnderProfiles) {
            if let Some(v) = record(&mut errors, profile_utilities(game, s, n, cfg)) {
                (row.ux_case1, row.ux_case2, row.ux_case3, row.leader_value_se, row.leader_value_ne) =
                    (Some(v[0]), Some(v[1]), Some(v[2]), Some(v[3]), Some(v[4]));
            }
        }
    }
    if !errors.is_empty() {
        row.error = Some(errors.join("; "));
    }
    row
}

fn record<T>(errors: &mut Vec<String>, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.push(e.to_string());
            None
        }
    }
}

/// Leader utility at SE, at `(x_se, y_ne, z_ne)` and at NE, followed by the
/// pessimistic leader values at `x_se` and `x_ne`.
fn profile_utilities(
    game: &GameDefinition,
    se: &EquilibriumSet,
    ne: &EquilibriumSet,
    cfg: &SolverConfig,
) -> Result<[f64; 5]> {
    let (s, n) = (se.profiles[0], ne.profiles[0]);
    Ok([
        game.u_x(s.x, s.y, s.z)?,
        game.u_x(s.x, n.y, n.z)?,
        game.u_x(n.x, n.y, n.z)?,
        leader_value(game, s.x, cfg)?.value,
        leader_value(game, n.x, cfg)?.value,
    ])
}

/// All rows in cell order; cells run in parallel.
pub fn sweep_rows(config: &RunConfig) -> std::result::Result<Vec<ResultRow>, HarnessError> {
    let cs = cells(config)?;
    let tasks = tasks_of(config);
    if tasks.is_empty() {
        return Ok(Vec::new());
    }
    Ok(cs.par_iter().map(|c| run_cell(config, c)).collect())
}

/// Runs the sweep and writes results.csv plus figure data into the output
/// directory. `workers` caps the thread count.
pub fn run_sweep(config: &RunConfig, workers: Option<usize>) -> std::result::Result<Vec<ResultRow>, HarnessError> {
    let rows = match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
            pool.install(|| sweep_rows(config))?
        }
        None => sweep_rows(config)?,
    };
    super::output::write_outputs(config, &rows, &config.output_dir)?;
    Ok(rows)
}
