use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use stackne_core::closeness::closeness_report;
use stackne_core::coincidence::{check_cor1, check_thm1, check_thm2, thm1_holds, CoincidenceReport};
use stackne_core::equilibrium::{solve_ne, solve_se, EquilibriumSet};
use stackne_core::harness::{format_sig, load_config, reproduce, run_sweep, Figure, HarnessError, RunConfig};
use stackne_core::GameDefinition;

#[derive(Parser)]
#[command(name = "stackne", version, about = "Stackelberg/Nash coincidence toolkit for three-player leader-follower games")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides [output] dir.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the sampling estimators.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    Thm1,
    Cor1,
    Thm2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigArg {
    Fig5,
    Fig6a,
    Fig6b,
    Fig7,
    Fig8,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stackelberg equilibria.
    Se,
    /// Nash equilibria.
    Ne,
    /// Decide an SE/NE coincidence condition.
    Coincide {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
    },
    /// Hausdorff distance and the deviation bounds.
    Closeness,
    /// Run the configured sweep.
    Sweep,
    /// Regenerate the data behind a figure.
    Reproduce {
        #[arg(value_enum)]
        figure: FigArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("stackne: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load(cli: &Cli) -> Result<RunConfig, HarnessError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| HarnessError::Config("this command needs --config".into()))?;
    let mut cfg = load_config(path)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    if let Some(w) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    }
    if let Cmd::Reproduce { figure } = &cli.cmd {
        let fig = match figure {
            FigArg::Fig5 => Figure::Fig5,
            FigArg::Fig6a => Figure::Fig6a,
            FigArg::Fig6b => Figure::Fig6b,
            FigArg::Fig7 => Figure::Fig7,
            FigArg::Fig8 => Figure::Fig8,
        };
        let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
        for (name, rows) in reproduce(fig, &out, cli.seed.unwrap_or(0), None)? {
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            println!("{name}: {} cells, {failed} with errors -> {}", rows.len(), out.join(name).display());
        }
        return Ok(());
    }
    let cfg = load(cli)?;
    if let Cmd::Sweep = cli.cmd {
        if cfg.sweep.is_none() {
            return Err(HarnessError::Config("no [sweep] section".into()));
        }
        let rows = run_sweep(&cfg, None)?;
        let failed = rows.iter().filter(|r| r.error.is_some()).count();
        println!("{} cells, {failed} with errors -> {}", rows.len(), cfg.output_dir.display());
        return Ok(());
    }
    let game = cfg.scenario.instantiate()?.build()?;
    let mut out = std::io::stdout().lock();
    match &cli.cmd {
        Cmd::Se => print_set(&mut out, &solve_se(&game, &cfg.solver)?)?,
        Cmd::Ne => print_set(&mut out, &solve_ne(&game, &cfg.solver)?)?,
        Cmd::Coincide { theorem } => coincide(&mut out, &game, &cfg, *theorem)?,
        Cmd::Closeness => {
            let se = solve_se(&game, &cfg.solver)?;
            let ne = solve_ne(&game, &cfg.solver)?;
            let r = closeness_report(&game, &se, &ne, &cfg.solver, cfg.closeness_samples, cfg.seed)?;
            let c = &r.constants;
            let line = |v: Option<f64>| v.map(format_sig).unwrap_or_else(|| "-".into());
            writeln!(out, "l {}\nkappa1 {}\nkappa2 {}", format_sig(c.l), format_sig(c.kappa1), format_sig(c.kappa2))?;
            writeln!(out, "eta {}\neta1 {}\neta2 {}", format_sig(c.eta), line(c.eta1), line(c.eta2))?;
            if !r.strongly_concave {
                writeln!(out, "not strongly concave: bound not applicable")?;
            }
            writeln!(out, "bound {}\npoint_bound {}", line(r.bound), line(r.point_bound))?;
            writeln!(out, "hausdorff {}\nbound_satisfied {}", format_sig(r.measured_hausdorff), r.bound_satisfied)?;
        }
        Cmd::Sweep | Cmd::Reproduce { .. } => unreachable!(),
    }
    Ok(())
}

fn print_set(out: &mut impl Write, set: &EquilibriumSet) -> Result<(), HarnessError> {
    writeln!(out, "# {} ({})", set.kind, set.solver_meta)?;
    writeln!(out, "x,y,z,ux,uy,uz")?;
    for (p, u) in set.profiles.iter().zip(&set.values) {
        let v = [p.x, p.y, p.z, u.x, u.y, u.z].map(format_sig);
        writeln!(out, "{}", v.join(","))?;
    }
    Ok(())
}

fn print_report(out: &mut impl Write, r: &CoincidenceReport) -> Result<(), HarnessError> {
    let p = &r.se_profile;
    writeln!(
        out,
        "se ({}, {}, {}): condition i {} condition ii {} => {}",
        format_sig(p.x),
        format_sig(p.y),
        format_sig(p.z),
        r.condition_i.holds,
        r.condition_ii.holds,
        r.overall
    )?;
    for n in &r.notes {
        writeln!(out, "  note: {n}")?;
    }
    Ok(())
}

fn coincide(out: &mut impl Write, game: &GameDefinition, cfg: &RunConfig, t: TheoremArg) -> Result<(), HarnessError> {
    let se = solve_se(game, &cfg.solver)?;
    let (spec, sc) = (&cfg.neighborhood, &cfg.solver);
    match t {
        TheoremArg::Thm1 => {
            let reports = check_thm1(game, &se, spec, sc)?;
            for r in &reports {
                print_report(out, r)?;
            }
            writeln!(out, "every SE is an NE: {}", thm1_holds(&reports))?;
        }
        TheoremArg::Cor1 => {
            let r = check_cor1(game, &se, spec, sc)?;
            print_report(out, &r)?;
            writeln!(out, "the SE is an NE: {}", r.overall)?;
        }
        TheoremArg::Thm2 => {
            let o = check_thm2(game, &se, spec, sc)?;
            for r in &o.reports {
                print_report(out, r)?;
            }
            writeln!(out, "some SE is an NE: {}", o.exists)?;
        }
    }
    Ok(())
}
