//! Command-line driver: mine rules, approximate true fronts, sweep
//! experiment grids, dump oracle fronts, and score front files.
//!
//! Exit codes: 0 on success, 2 on input errors, 3 when the instance is
//! infeasible (e.g. the rule space cannot host the requested population).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use arm_moo::dataset::{load_transactions, DatasetFormat};
use arm_moo::harness::{run_experiment, Algorithm, ExperimentConfig, RunSettings};
use arm_moo::oracle::{exact_pareto_front, naive_evaluate};
use arm_moo::quality::{
    approximate_true_front, front_indicators, hv_igd_ratio, read_front_csv, write_front_csv,
    FrontApproximation, FrontProvenance,
};
use arm_moo::rule::{RuleRecord, Variant};
use arm_moo::variation::InitChoice;
use arm_moo::{Error, Result};

#[derive(Parser)]
#[command(name = "arm-moo", version, about = "Multi-objective association rule mining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimizer configuration and write its front and rules.
    Mine(MineArgs),
    /// Approximate the true Pareto front with one large NSGA-III run.
    Truefront(TruefrontArgs),
    /// Sweep a parameter grid from a TOML config and emit reports.
    Experiment(ExperimentArgs),
    /// Enumerate the exact Pareto front of a small instance.
    Oracle(OracleArgs),
    /// Score a front file against a reference front file.
    Indicators(IndicatorsArgs),
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    format: DatasetFormat,
    #[arg(long)]
    algo: Algorithm,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    pc: f64,
    #[arg(long)]
    pm: f64,
    #[arg(long)]
    gens: u32,
    /// Population size; MOEA/D rounds up to the nearest weight lattice.
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value = "auto")]
    init: InitChoice,
    /// PBI penalty (MOEA/D only).
    #[arg(long, default_value_t = 5.0)]
    theta: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TruefrontArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    format: DatasetFormat,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    seed: u64,
    /// Output front file (CSV with header o1,o2,o3).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Concurrent runs; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Output directory; falls back to the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    dataset: PathBuf,
    #[arg(long)]
    format: DatasetFormat,
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    max_antecedent: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IndicatorsArgs {
    #[arg(long)]
    front: PathBuf,
    #[arg(long)]
    zeff: PathBuf,
}

fn mine(args: MineArgs) -> Result<()> {
    let db = load_transactions(&args.dataset, args.format)?;
    let settings = RunSettings {
        algorithm: args.algo,
        variant: args.variant,
        pc: args.pc,
        pm: args.pm,
        generations: args.gens,
        population: args.pop.unwrap_or_else(|| args.algo.default_population()),
        seed: args.seed,
        init: args.init.resolve(&db),
        theta: args.theta,
        neighborhood: 20,
        mutation_mode: Default::default(),
        moead_dedup_working_set: false,
    };
    let result = arm_moo::harness::execute_run(&db, &settings)?;

    std::fs::create_dir_all(&args.out)?;
    let front_path = args.out.join("front.csv");
    write_front_csv(&front_path, &result.front_objective_values())?;
    let records: Vec<RuleRecord> = result
        .front
        .iter()
        .map(|m| RuleRecord::new(&m.rule, &m.metrics, db.item_names()))
        .collect();
    let rules_path = args.out.join("rules.json");
    std::fs::write(
        &rules_path,
        serde_json::to_string_pretty(&records).expect("records serialize"),
    )?;
    println!(
        "mined {} non-dominated rules in {} evaluations -> {}, {}",
        result.front.len(),
        result.evaluations,
        front_path.display(),
        rules_path.display()
    );
    Ok(())
}

fn truefront(args: TruefrontArgs) -> Result<()> {
    let db = load_transactions(&args.dataset, args.format)?;
    let front = approximate_true_front(&db, args.variant, args.seed)?;
    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_front_csv(&args.out, front.points())?;
    println!(
        "{} reference points -> {}",
        front.points().len(),
        args.out.display()
    );
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let config = ExperimentConfig::load(&args.config)?;
    let out_dir = args
        .out
        .or_else(|| config.output.clone())
        .ok_or_else(|| Error::Config("no output directory (--out or config `output`)".into()))?;
    let report = run_experiment(&config, &out_dir, args.workers)?;
    println!(
        "{} cells x {} runs done; best cell pc={} pm={} ({}); reports in {}",
        report.cells.len(),
        report.runs_per_cell,
        report.best_pc,
        report.best_pm,
        report
            .cells
            .iter()
            .find(|c| c.best)
            .map(|c| c.hv_igd.clone())
            .unwrap_or_default(),
        out_dir.display()
    );
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let db = load_transactions(&args.dataset, args.format)?;
    let front = exact_pareto_front(&db, args.variant, args.max_antecedent)?;
    std::fs::create_dir_all(&args.out)?;
    write_front_csv(&args.out.join("front.csv"), &front.objective_values())?;
    let records: Vec<RuleRecord> = front
        .rules
        .iter()
        .map(|rule| {
            let metrics = naive_evaluate(rule, &db)?;
            Ok(RuleRecord::new(rule, &metrics, db.item_names()))
        })
        .collect::<Result<_>>()?;
    std::fs::write(
        args.out.join("rules.json"),
        serde_json::to_string_pretty(&records).expect("records serialize"),
    )?;
    println!(
        "exact front: {} rules -> {}",
        front.rules.len(),
        args.out.display()
    );
    Ok(())
}

fn indicators(args: IndicatorsArgs) -> Result<()> {
    let front = read_front_csv(&args.front)?;
    let zeff =
        FrontApproximation::new(read_front_csv(&args.zeff)?, FrontProvenance::BigRunApprox)?;
    let scores = front_indicators(&front, &zeff)?;
    let ratio = hv_igd_ratio(&[(scores.hypervolume, scores.igd)]);
    println!("hv {}", scores.hypervolume);
    println!("igd {}", scores.igd);
    println!(
        "hv_igd {}",
        if ratio.is_infinite() {
            "inf".to_owned()
        } else {
            ratio.to_string()
        }
    );
    println!("clamped {}", scores.clamped_points);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Mine(args) => mine(args),
        Command::Truefront(args) => truefront(args),
        Command::Experiment(args) => experiment(args),
        Command::Oracle(args) => oracle(args),
        Command::Indicators(args) => indicators(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
