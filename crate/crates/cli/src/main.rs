mod config;

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use drayplan::milp::lp_format::write_lp;
use drayplan::milp::mps::write_mps;
use drayplan::milp::solution_file::{import_solution, write_solution};
use drayplan::milp::{SolveStatus, SolverParams};
use drayplan::pipeline::{
    generate_synthetic, ingest, read_sites, read_substations, read_traces, IngestOptions,
    SyntheticSpec,
};
use drayplan::scenario::{
    extract_report, read_report, solve_plan, summary_text, RunOutcome, REGIONAL_SHARE,
    STATE_MILESTONES,
};
use drayplan::{
    build_plan, emit_report, interpolate_targets, run_mode1_sweep, run_mode2, run_mode2_years,
    run_mode3, validate_instance, BuildOptions, ChargeEfficiency, ChargerCatalog, Instance,
    PlanObjective, PlanReport, ScenarioOptions, TierLinParams, TimeGrid,
};

use config::Config;

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "drayplan",
    version,
    about = "Plan electric drayage trucks, chargers and substation upgrades"
)]
struct Cli {
    /// Seed for synthetic generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Charge with efficiency 1 - sqrt(kappa) instead of sqrt(kappa).
    #[arg(long, global = true)]
    paper_literal: bool,
    /// Enforce both halves of every charging indicator.
    #[arg(long, global = true)]
    strict: bool,
    /// Charger tier catalog (JSON); enables tiered charger sizing.
    #[arg(long, global = true, value_name = "FILE")]
    tiers: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// TOML file overriding grid parameters, costs and solver limits.
    #[arg(long, global = true, value_name = "TOML")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file and list every problem found.
    Validate { instance: PathBuf },
    /// Turn GPS traces, candidate sites and substations into an instance.
    Ingest {
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        sites: PathBuf,
        #[arg(long)]
        substations: PathBuf,
        /// Steps per day.
        #[arg(long, default_value_t = 96)]
        steps: usize,
    },
    /// Write a seeded synthetic instance.
    Generate {
        /// Full generator spec as JSON; overrides the size flags.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        trucks: usize,
        #[arg(long, default_value_t = 2)]
        stations: usize,
        #[arg(long, default_value_t = 1)]
        substations: usize,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Export the model of one mode as MPS or LP text.
    Build {
        instance: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, value_enum, default_value_t = Format::Mps)]
        format: Format,
    },
    /// Solve one mode, or check an external solution for it, and write the report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Solution file from another solver, keyed by exported names.
        #[arg(long)]
        solution: Option<PathBuf>,
        /// Format the external solution's names come from.
        #[arg(long, value_enum, default_value_t = Format::Mps)]
        format: Format,
    },
    /// Most trucks electrifiable without upgrades; repeat --fraction for a sweep.
    Mode1 {
        instance: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        fraction: Vec<f64>,
    },
    /// Cheapest plan for a truck target, or for yearly targets.
    Mode2 {
        instance: PathBuf,
        #[arg(long, conflicts_with = "years", required_unless_present = "years")]
        target: Option<usize>,
        /// CSV with `year` and optional `target` columns; blank targets are
        /// interpolated from the statewide milestones.
        #[arg(long)]
        years: Option<PathBuf>,
    },
    /// Lowest-emission plan within an annual budget.
    Mode3 {
        instance: PathBuf,
        #[arg(long)]
        budget: f64,
    },
    /// Print the summary of a written plan (a directory or its plan.json).
    Report { plan: PathBuf },
}

#[derive(Args, Clone, Copy)]
struct ModeArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    mode: u8,
    #[arg(long)]
    target: Option<usize>,
    #[arg(long)]
    budget: Option<f64>,
    /// Share of substation capacity usable in mode 1.
    #[arg(long)]
    fraction: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Mps,
    Lp,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn exit_code(status: SolveStatus) -> u8 {
    match status {
        SolveStatus::Optimal => 0,
        SolveStatus::Infeasible => EXIT_INFEASIBLE,
        SolveStatus::LimitHit => EXIT_LIMIT,
        SolveStatus::Unbounded | SolveStatus::NumericalFailure => EXIT_ERROR,
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    cli.config
        .as_deref()
        .map(Config::load)
        .transpose()
        .map(Option::unwrap_or_default)
}

fn load_instance(cli: &Cli, path: &Path) -> Result<Instance> {
    let mut inst = Instance::load(path).with_context(|| format!("loading {}", path.display()))?;
    load_config(cli)?.apply(&mut inst)?;
    let report = validate_instance(&inst);
    if !report.is_empty() {
        bail!("{} is not valid after overrides:\n{report}", path.display());
    }
    Ok(inst)
}

fn scenario_options(cli: &Cli, inst: &Instance) -> Result<ScenarioOptions> {
    let tiers = match &cli.tiers {
        Some(path) => {
            let cat = ChargerCatalog::load(path)?;
            let lin = TierLinParams::for_catalog(&cat, inst.params.p_max);
            Some((cat, lin))
        }
        None => None,
    };
    let build = BuildOptions {
        efficiency: if cli.paper_literal {
            ChargeEfficiency::PaperLiteral
        } else {
            ChargeEfficiency::OneWay
        },
        strict: cli.strict,
        tiers,
        ..Default::default()
    };
    let mut solver = SolverParams::default();
    load_config(cli)?.apply_solver(&mut solver);
    Ok(ScenarioOptions { build, solver })
}

fn objective_of(m: ModeArgs) -> Result<PlanObjective> {
    Ok(PlanObjective::from_parts(m.mode, m.target, m.budget)?)
}

/// Mode 1 with a fraction runs on the scaled instance.
fn scaled(inst: &Instance, m: ModeArgs) -> Result<Instance> {
    match m.fraction {
        Some(f) if m.mode != 1 => bail!("--fraction {f} only applies to mode 1"),
        Some(f) if !(f > 0.0 && f <= 1.0) => bail!("fraction {f} is outside (0, 1]"),
        Some(f) => Ok(inst.with_capacity_fraction(f)),
        None => Ok(inst.clone()),
    }
}

fn write_plan(dir: &Path, report: &PlanReport) -> Result<()> {
    emit_report(report, dir).with_context(|| format!("writing report to {}", dir.display()))?;
    print!("{}", summary_text(report));
    println!("report written to {}", dir.display());
    Ok(())
}

fn write_outcome(dir: &Path, out: &RunOutcome) -> Result<()> {
    write_plan(dir, &out.report)?;
    std::fs::write(
        dir.join("solution.sol"),
        write_solution(&out.model.ir, &out.solution, None),
    )?;
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Validate { instance } => {
            let inst = Instance::load(instance)
                .with_context(|| format!("loading {}", instance.display()))?;
            let report = validate_instance(&inst);
            if report.is_empty() {
                println!(
                    "ok: {} trucks, {} stations, {} substations, {} steps",
                    inst.trucks.len(),
                    inst.stations.len(),
                    inst.substations.len(),
                    inst.grid.step_count
                );
                Ok(0)
            } else {
                print!("{report}");
                println!("{} issue(s)", report.len());
                Ok(EXIT_ERROR)
            }
        }
        Command::Ingest {
            traces,
            sites,
            substations,
            steps,
        } => {
            let open =
                |p: &PathBuf| File::open(p).with_context(|| format!("opening {}", p.display()));
            let traces = read_traces(open(traces)?)?;
            let sites = read_sites(open(sites)?)?;
            let subs = read_substations(open(substations)?)?;
            let grid = TimeGrid::daily(*steps)?;
            let config = load_config(cli)?;
            let mut opts = IngestOptions {
                grid,
                ..Default::default()
            };
            if let Some(book) = config.cost_book(&opts.costs)? {
                opts.costs = book;
            }
            let res = ingest(&traces, &sites, subs, &opts)?;
            let mut inst = res.instance;
            config.apply(&mut inst)?;
            for w in &res.warnings {
                eprintln!("warning: {w}");
            }
            std::fs::create_dir_all(&cli.out)?;
            let path = cli.out.join("instance.json");
            inst.save(&path)?;
            println!(
                "{} trucks, {} stations, {} substations; {:.1}% of trucks have no charging opportunity",
                inst.trucks.len(),
                inst.stations.len(),
                inst.substations.len(),
                100.0 * res.share_without_access
            );
            println!("instance written to {}", path.display());
            Ok(0)
        }
        Command::Generate {
            spec,
            trucks,
            stations,
            substations,
            steps,
        } => {
            let spec = match spec {
                Some(p) => {
                    let text = std::fs::read_to_string(p)
                        .with_context(|| format!("reading {}", p.display()))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing {}", p.display()))?
                }
                None => SyntheticSpec {
                    trucks: *trucks,
                    stations: *stations,
                    substations: *substations,
                    steps: *steps,
                    seed: cli.seed,
                    k_nearest: (*substations).clamp(1, 2),
                    ..Default::default()
                },
            };
            let mut inst = generate_synthetic(&spec)?;
            load_config(cli)?.apply(&mut inst)?;
            std::fs::create_dir_all(&cli.out)?;
            let path = cli.out.join("instance.json");
            inst.save(&path)?;
            println!("instance written to {}", path.display());
            Ok(0)
        }
        Command::Build {
            instance,
            mode,
            format,
        } => {
            let inst = scaled(&load_instance(cli, instance)?, *mode)?;
            let opts = scenario_options(cli, &inst)?;
            let pm = build_plan(&inst, opts.build, objective_of(*mode)?)?;
            let (text, map, ext) = match format {
                Format::Mps => {
                    let (t, m) = write_mps(&pm.ir);
                    (t, m, "mps")
                }
                Format::Lp => {
                    let (t, m) = write_lp(&pm.ir);
                    (t, m, "lp")
                }
            };
            std::fs::create_dir_all(&cli.out)?;
            let path = cli.out.join(format!("model.{ext}"));
            std::fs::write(&path, text)?;
            map.write(&cli.out.join("model.names.json"))?;
            println!(
                "{} columns ({} integer), {} rows written to {}",
                pm.ir.num_vars(),
                pm.ir.free_integer_vars().len(),
                pm.ir.num_constraints(),
                path.display()
            );
            Ok(0)
        }
        Command::Solve {
            instance,
            mode,
            solution,
            format,
        } => {
            let inst = scaled(&load_instance(cli, instance)?, *mode)?;
            let opts = scenario_options(cli, &inst)?;
            let obj = objective_of(*mode)?;
            let Some(sol_path) = solution else {
                let mut out = solve_plan(&inst, &opts, obj)?;
                out.report.capacity_fraction = mode.fraction;
                write_outcome(&cli.out, &out)?;
                return Ok(exit_code(out.status()));
            };
            let pm = build_plan(&inst, opts.build, obj)?;
            let map = match format {
                Format::Mps => write_mps(&pm.ir).1,
                Format::Lp => write_lp(&pm.ir).1,
            };
            let text = std::fs::read_to_string(sol_path)
                .with_context(|| format!("reading {}", sol_path.display()))?;
            let imported = import_solution(&text, &pm.ir, Some(&map), 1e-6)?;
            if !imported.report.is_feasible() {
                for v in &imported.report.violations {
                    eprintln!("violated: {} by {:.3e}", v.tag, v.residual);
                }
                bail!(
                    "{} violates {} constraint(s) or bound(s)",
                    sol_path.display(),
                    imported.report.violations.len()
                );
            }
            let mut report = extract_report(&inst, &pm, &imported.solution);
            report.capacity_fraction = mode.fraction;
            write_plan(&cli.out, &report)?;
            Ok(exit_code(imported.solution.status))
        }
        Command::Mode1 { instance, fraction } => {
            let inst = load_instance(cli, instance)?;
            let opts = scenario_options(cli, &inst)?;
            let sweep = run_mode1_sweep(&inst, fraction, &opts)?;
            let single = sweep.len() == 1;
            let mut code = 0;
            for r in &sweep {
                let dir = if single {
                    cli.out.clone()
                } else {
                    cli.out.join(format!("fraction-{}", r.fraction))
                };
                match r.max_trucks {
                    Some(n) => println!("fraction {}: {n} trucks", r.fraction),
                    None => println!("fraction {}: {}", r.fraction, r.outcome.report.status),
                }
                write_outcome(&dir, &r.outcome)?;
                code = code.max(exit_code(r.outcome.status()));
            }
            Ok(code)
        }
        Command::Mode2 {
            instance,
            target,
            years,
        } => {
            let inst = load_instance(cli, instance)?;
            let opts = scenario_options(cli, &inst)?;
            if let Some(target) = target {
                let out = run_mode2(&inst, *target, &opts)?;
                write_outcome(&cli.out, &out)?;
                return Ok(exit_code(out.status()));
            }
            let path = years.as_ref().expect("clap requires --target or --years");
            let targets = read_year_targets(path)?;
            let mut code = 0;
            for y in run_mode2_years(&inst, &targets, &opts)? {
                println!(
                    "year {} target {}: {}",
                    y.year, y.target, y.outcome.report.status
                );
                write_outcome(&cli.out.join(y.year.to_string()), &y.outcome)?;
                code = code.max(exit_code(y.outcome.status()));
            }
            Ok(code)
        }
        Command::Mode3 { instance, budget } => {
            let inst = load_instance(cli, instance)?;
            let opts = scenario_options(cli, &inst)?;
            let out = run_mode3(&inst, *budget, &opts)?;
            write_outcome(&cli.out, &out)?;
            Ok(exit_code(out.status()))
        }
        Command::Report { plan } => {
            let path = if plan.is_dir() {
                plan.join("plan.json")
            } else {
                plan.clone()
            };
            let report =
                read_report(&path).with_context(|| format!("reading {}", path.display()))?;
            print!("{}", summary_text(&report));
            Ok(0)
        }
    }
}

#[derive(serde::Deserialize)]
struct YearRow {
    year: i32,
    target: Option<usize>,
}

fn read_year_targets(path: &Path) -> Result<Vec<(i32, usize)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for row in rdr.deserialize::<YearRow>() {
        let row = row.with_context(|| format!("reading {}", path.display()))?;
        let target = match row.target {
            Some(t) => t,
            None => interpolate_targets(&STATE_MILESTONES, REGIONAL_SHARE, row.year)? as usize,
        };
        out.push((row.year, target));
    }
    if out.windows(2).any(|w| w[0].0 >= w[1].0) {
        bail!("years in {} must increase", path.display());
    }
    Ok(out)
}
