//! Experiment driver: parameter-grid sweeps, per-cell aggregation over
//! repeated runs, rule-frequency tables, and report emission.
//!
//! Reports (summary CSV, rules CSV, JSON) are byte-reproducible for a fixed
//! config and base seed; wall-clock numbers go to a separate timings file
//! that is excluded from that guarantee.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{load_transactions, DatasetFormat, TransactionDatabase};
use crate::error::{Error, Result};
use crate::moead::{run_moead, MoeadParams};
use crate::nsga3::{divisions_for_at_least, run_nsga3, Nsga3Params};
use crate::quality::{
    approximate_true_front, front_indicators, hv_igd_ratio, read_front_csv, write_front_csv,
    FrontApproximation, FrontProvenance,
};
use crate::run::RunResult;
use crate::rule::{RuleRecord, Variant};
use crate::variation::{
    InitChoice, InitStrategy, MutationMode, ScoredRule, VariationParams, DEFAULT_REPAIR_RETRIES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "nsga3")]
    Nsga3,
    #[serde(rename = "moead")]
    Moead,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nsga3 => "nsga3",
            Algorithm::Moead => "moead",
        }
    }

    /// Paper-default population: 50 for NSGA-III, 45 (the weight count) for
    /// MOEA/D.
    pub fn default_population(self) -> usize {
        match self {
            Algorithm::Nsga3 => 50,
            Algorithm::Moead => 45,
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nsga3" => Ok(Algorithm::Nsga3),
            "moead" => Ok(Algorithm::Moead),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?} (expected nsga3 or moead)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How the per-cell comparison score folds HV and IGD over runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioMode {
    #[default]
    #[serde(rename = "ratio-of-means")]
    RatioOfMeans,
    #[serde(rename = "mean-of-ratios")]
    MeanOfRatios,
}

fn default_pc_grid() -> Vec<f64> {
    vec![0.8, 0.85, 0.9]
}

fn default_pm_grid() -> Vec<f64> {
    vec![0.1, 0.15, 0.2]
}

fn default_runs() -> u32 {
    30
}

fn default_generations() -> u32 {
    200
}

fn default_theta() -> f64 {
    5.0
}

fn default_neighborhood() -> usize {
    20
}

fn default_truefront_seed() -> u64 {
    1
}

fn default_compute_truefront() -> bool {
    true
}

/// One experiment: a (pc, pm) grid swept for one algorithm and variant.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: PathBuf,
    pub format: DatasetFormat,
    pub algorithm: Algorithm,
    pub variant: Variant,
    #[serde(default = "default_pc_grid")]
    pub pc: Vec<f64>,
    #[serde(default = "default_pm_grid")]
    pub pm: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default = "default_generations")]
    pub generations: u32,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub population: Option<usize>,
    #[serde(default)]
    pub init: InitChoice,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_neighborhood")]
    pub neighborhood: usize,
    #[serde(default)]
    pub mutation_mode: MutationMode,
    #[serde(default)]
    pub moead_dedup_working_set: bool,
    #[serde(default)]
    pub ratio_mode: RatioMode,
    #[serde(default = "default_truefront_seed")]
    pub truefront_seed: u64,
    #[serde(default = "default_compute_truefront")]
    pub compute_truefront: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pc.is_empty() || self.pm.is_empty() {
            return Err(Error::Config("pc and pm grids must be non-empty".into()));
        }
        for &p in self.pc.iter().chain(&self.pm) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("probability {p} outside [0, 1]")));
            }
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        Ok(())
    }

    pub fn population(&self) -> usize {
        self.population
            .unwrap_or_else(|| self.algorithm.default_population())
    }
}

/// NSGA-III keeps the paper's 91-point lattice at its default population;
/// other sizes get the smallest lattice that is at least as large.
pub fn nsga3_reference_divisions(population: usize) -> usize {
    if population == 50 {
        12
    } else {
        divisions_for_at_least(population)
    }
}

/// Everything needed to execute one optimizer run.
#[derive(Clone, Debug)]
pub struct RunSettings {
    pub algorithm: Algorithm,
    pub variant: Variant,
    pub pc: f64,
    pub pm: f64,
    pub generations: u32,
    pub population: usize,
    pub seed: u64,
    pub init: InitStrategy,
    pub theta: f64,
    pub neighborhood: usize,
    pub mutation_mode: MutationMode,
    pub moead_dedup_working_set: bool,
}

/// Dispatches one run. For MOEA/D the effective population is the weight
/// lattice size (the smallest lattice holding the requested population).
pub fn execute_run(db: &TransactionDatabase, settings: &RunSettings) -> Result<RunResult> {
    let variation = VariationParams {
        crossover_prob: settings.pc,
        mutation_prob: settings.pm,
        init: settings.init,
        mutation_mode: settings.mutation_mode,
        repair_retries: DEFAULT_REPAIR_RETRIES,
    };
    match settings.algorithm {
        Algorithm::Nsga3 => run_nsga3(
            db,
            settings.variant,
            &Nsga3Params {
                population_size: settings.population,
                generations: settings.generations,
                reference_divisions: nsga3_reference_divisions(settings.population),
                seed: settings.seed,
                variation,
                record_populations: false,
                record_archive_snapshots: false,
            },
        ),
        Algorithm::Moead => run_moead(
            db,
            settings.variant,
            &MoeadParams {
                generations: settings.generations,
                weight_divisions: divisions_for_at_least(settings.population),
                neighborhood_size: settings.neighborhood,
                theta: settings.theta,
                seed: settings.seed,
                variation,
                dedup_working_set: settings.moead_dedup_working_set,
                record_populations: false,
                record_archive_snapshots: false,
                record_trace: false,
            },
        ),
    }
}

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in bytes {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Stable per-run seed. Derived only from the run's own coordinates, so
/// extending a grid never perturbs existing runs.
pub fn run_seed(
    base_seed: u64,
    algorithm: Algorithm,
    variant: Variant,
    pc: f64,
    pm: f64,
    run_index: u32,
) -> u64 {
    let mut bytes = Vec::with_capacity(40);
    bytes.extend_from_slice(&base_seed.to_le_bytes());
    bytes.extend_from_slice(algorithm.as_str().as_bytes());
    bytes.extend_from_slice(variant.as_str().as_bytes());
    bytes.extend_from_slice(&pc.to_bits().to_le_bytes());
    bytes.extend_from_slice(&pm.to_bits().to_le_bytes());
    bytes.extend_from_slice(&run_index.to_le_bytes());
    fnv1a(bytes)
}

/// One row of the rule-frequency table.
#[derive(Clone, Debug, Serialize)]
pub struct FrequencyRow {
    pub frequency: u32,
    #[serde(flatten)]
    pub record: RuleRecord,
}

/// Counts distinct rules (gene-vector identity) across fronts and orders
/// rows by frequency desc, support desc, then rule JSON.
pub fn rule_frequency_table(
    fronts: &[Vec<ScoredRule>],
    item_names: &[String],
) -> Vec<FrequencyRow> {
    let mut counts: HashMap<crate::rule::Rule, (u32, ScoredRule)> = HashMap::new();
    for front in fronts {
        for member in front {
            counts
                .entry(member.rule.clone())
                .and_modify(|(count, _)| *count += 1)
                .or_insert((1, member.clone()));
        }
    }
    let mut rows: Vec<(u32, String, FrequencyRow)> = counts
        .into_values()
        .map(|(frequency, member)| {
            let record = RuleRecord::new(&member.rule, &member.metrics, item_names);
            let json = record.to_json();
            (
                frequency,
                json,
                FrequencyRow { frequency, record },
            )
        })
        .collect();
    rows.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then(b.2.record.support.total_cmp(&a.2.record.support))
            .then(a.1.cmp(&b.1))
    });
    rows.into_iter().map(|(_, _, row)| row).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub run: u32,
    pub seed: u64,
    pub hv: f64,
    pub igd: f64,
    pub front_size: usize,
    pub clamped_points: usize,
    pub evaluations: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellReport {
    pub pc: f64,
    pub pm: f64,
    pub mean_hv: f64,
    pub mean_igd: f64,
    /// Rendered comparison score; "inf" when the mean IGD is zero.
    pub hv_igd: String,
    pub best: bool,
    pub evaluations: u64,
    pub runs: Vec<RunReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregateReport {
    pub problem: String,
    pub algorithm: Algorithm,
    pub variant: Variant,
    pub generations: u32,
    pub runs_per_cell: u32,
    pub population: usize,
    pub base_seed: u64,
    pub ratio_mode: RatioMode,
    /// File name of the persisted reference front inside the output
    /// directory (a bare name keeps reports byte-identical across
    /// differently-located output directories).
    pub reference_front_file: String,
    pub reference_front_provenance: FrontProvenance,
    pub reference_front_size: usize,
    pub cells: Vec<CellReport>,
    pub best_pc: f64,
    pub best_pm: f64,
    pub frequency_table: Vec<FrequencyRow>,
}

fn render_ratio(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_owned()
    } else {
        format!("{value:.4}")
    }
}

fn cell_ratio(mode: RatioMode, pairs: &[(f64, f64)]) -> f64 {
    match mode {
        RatioMode::RatioOfMeans => hv_igd_ratio(pairs),
        RatioMode::MeanOfRatios => {
            let total: f64 = pairs
                .iter()
                .map(|&(hv, igd)| if igd == 0.0 { f64::INFINITY } else { hv / igd })
                .sum();
            total / pairs.len() as f64
        }
    }
}

struct RunOutcome {
    cell: usize,
    run: u32,
    seed: u64,
    front: Vec<ScoredRule>,
    hv: f64,
    igd: f64,
    clamped_points: usize,
    evaluations: u64,
    wall_ms: u128,
}

/// Loads or computes the persisted reference front for (dataset, variant).
fn ensure_reference_front(
    db: &TransactionDatabase,
    config: &ExperimentConfig,
    path: &Path,
) -> Result<FrontApproximation> {
    if !path.exists() {
        if !config.compute_truefront {
            return Err(Error::MissingReferenceFront {
                path: path.to_path_buf(),
            });
        }
        let front = approximate_true_front(db, config.variant, config.truefront_seed)?;
        write_front_csv(path, front.points())?;
    }
    // Always rebuild from the file so first and later invocations see
    // byte-identical inputs.
    FrontApproximation::new(read_front_csv(path)?, FrontProvenance::BigRunApprox)
}

fn dataset_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_owned())
}

/// Path of the persisted reference front for a config inside `out_dir`.
pub fn reference_front_path(config: &ExperimentConfig, out_dir: &Path) -> PathBuf {
    out_dir.join(format!(
        "zeff-{}-{}.csv",
        dataset_stem(&config.dataset),
        config.variant
    ))
}

/// Runs the full grid for one (algorithm, variant), writes the report
/// files into `out_dir`, and returns the aggregate. `workers == 0` uses all
/// available cores.
pub fn run_experiment(
    config: &ExperimentConfig,
    out_dir: &Path,
    workers: usize,
) -> Result<AggregateReport> {
    config.validate()?;
    let db = load_transactions(&config.dataset, config.format)?;
    std::fs::create_dir_all(out_dir)?;

    let zeff_path = reference_front_path(config, out_dir);
    let zeff = ensure_reference_front(&db, config, &zeff_path)?;

    let mut pc_grid = config.pc.clone();
    let mut pm_grid = config.pm.clone();
    pc_grid.sort_by(f64::total_cmp);
    pc_grid.dedup();
    pm_grid.sort_by(f64::total_cmp);
    pm_grid.dedup();

    let cells: Vec<(f64, f64)> = pc_grid
        .iter()
        .flat_map(|&pc| pm_grid.iter().map(move |&pm| (pc, pm)))
        .collect();
    let init = config.init.resolve(&db);
    let population = config.population();

    let jobs: Vec<(usize, u32)> = (0..cells.len())
        .flat_map(|cell| (0..config.runs).map(move |run| (cell, run)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let outcomes: Result<Vec<RunOutcome>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(cell, run)| {
                let (pc, pm) = cells[cell];
                let seed = run_seed(
                    config.base_seed,
                    config.algorithm,
                    config.variant,
                    pc,
                    pm,
                    run,
                );
                let settings = RunSettings {
                    algorithm: config.algorithm,
                    variant: config.variant,
                    pc,
                    pm,
                    generations: config.generations,
                    population,
                    seed,
                    init,
                    theta: config.theta,
                    neighborhood: config.neighborhood,
                    mutation_mode: config.mutation_mode,
                    moead_dedup_working_set: config.moead_dedup_working_set,
                };
                let started = Instant::now();
                let result = execute_run(&db, &settings)?;
                let wall_ms = started.elapsed().as_millis();
                let indicators = front_indicators(&result.front_objective_values(), &zeff)?;
                Ok(RunOutcome {
                    cell,
                    run,
                    seed,
                    front: result.front,
                    hv: indicators.hypervolume,
                    igd: indicators.igd,
                    clamped_points: indicators.clamped_points,
                    evaluations: result.evaluations,
                    wall_ms,
                })
            })
            .collect()
    });
    let mut outcomes = outcomes?;
    outcomes.sort_by_key(|o| (o.cell, o.run));

    let mut cell_reports = Vec::with_capacity(cells.len());
    let mut cell_ratios = Vec::with_capacity(cells.len());
    let mut cell_wall_ms = vec![0u128; cells.len()];
    let mut fronts_by_cell: Vec<Vec<Vec<ScoredRule>>> = vec![Vec::new(); cells.len()];
    for (cell, &(pc, pm)) in cells.iter().enumerate() {
        let cell_outcomes: Vec<&RunOutcome> =
            outcomes.iter().filter(|o| o.cell == cell).collect();
        let pairs: Vec<(f64, f64)> = cell_outcomes.iter().map(|o| (o.hv, o.igd)).collect();
        let mean_hv = pairs.iter().map(|p| p.0).sum::<f64>() / pairs.len() as f64;
        let mean_igd = pairs.iter().map(|p| p.1).sum::<f64>() / pairs.len() as f64;
        let ratio = cell_ratio(config.ratio_mode, &pairs);
        let evaluations = cell_outcomes.iter().map(|o| o.evaluations).sum();
        cell_wall_ms[cell] = cell_outcomes.iter().map(|o| o.wall_ms).sum();
        cell_ratios.push(ratio);
        cell_reports.push(CellReport {
            pc,
            pm,
            mean_hv,
            mean_igd,
            hv_igd: render_ratio(ratio),
            best: false,
            evaluations,
            runs: cell_outcomes
                .iter()
                .map(|o| RunReport {
                    run: o.run,
                    seed: o.seed,
                    hv: o.hv,
                    igd: o.igd,
                    front_size: o.front.len(),
                    clamped_points: o.clamped_points,
                    evaluations: o.evaluations,
                })
                .collect(),
        });
    }

    // Cells are in ascending (pc, pm) order, so the first maximum realizes
    // the lexicographically-smallest tie-break.
    let mut best_cell = 0usize;
    for (cell, &ratio) in cell_ratios.iter().enumerate() {
        if ratio > cell_ratios[best_cell] {
            best_cell = cell;
        }
    }
    cell_reports[best_cell].best = true;

    for outcome in outcomes {
        if outcome.cell == best_cell {
            fronts_by_cell[best_cell].push(outcome.front);
        }
    }
    let mut frequency_table =
        rule_frequency_table(&fronts_by_cell[best_cell], db.item_names());
    frequency_table.truncate(10);

    let report = AggregateReport {
        problem: dataset_stem(&config.dataset),
        algorithm: config.algorithm,
        variant: config.variant,
        generations: config.generations,
        runs_per_cell: config.runs,
        population,
        base_seed: config.base_seed,
        ratio_mode: config.ratio_mode,
        reference_front_file: zeff_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        reference_front_provenance: zeff.provenance(),
        reference_front_size: zeff.points().len(),
        cells: cell_reports,
        best_pc: cells[best_cell].0,
        best_pm: cells[best_cell].1,
        frequency_table,
    };

    write_reports(&report, out_dir)?;
    write_timings(&report, &cell_wall_ms, out_dir)?;
    Ok(report)
}

fn report_basename(report: &AggregateReport) -> String {
    format!("{}-{}", report.algorithm, report.variant)
}

fn write_reports(report: &AggregateReport, out_dir: &Path) -> Result<()> {
    let base = report_basename(report);

    let mut summary = csv::Writer::from_path(out_dir.join(format!("summary-{base}.csv")))?;
    summary.write_record([
        "problem",
        "framework",
        "prob_cross",
        "prob_mut",
        "mean_hv",
        "mean_igd",
        "hv_igd",
        "evaluations",
        "best",
    ])?;
    for cell in &report.cells {
        summary.write_record([
            report.problem.clone(),
            base.clone(),
            format!("{}", cell.pc),
            format!("{}", cell.pm),
            format!("{:.6}", cell.mean_hv),
            format!("{:.6}", cell.mean_igd),
            cell.hv_igd.clone(),
            format!("{}", cell.evaluations),
            if cell.best { "1".into() } else { "0".into() },
        ])?;
    }
    summary.flush()?;

    let mut rules = csv::Writer::from_path(out_dir.join(format!("rules-{base}.csv")))?;
    match report.variant {
        Variant::V1 => rules.write_record([
            "frequency",
            "antecedent",
            "consequent",
            "support",
            "confidence",
            "lift",
        ])?,
        Variant::V2 => rules.write_record([
            "frequency",
            "antecedent",
            "consequent",
            "confidence",
            "lift",
            "interestingness",
        ])?,
    }
    for row in &report.frequency_table {
        let antecedent = row.record.antecedent.join(",");
        let consequent = row.record.consequent.join(",");
        match report.variant {
            Variant::V1 => rules.write_record([
                format!("{}", row.frequency),
                antecedent,
                consequent,
                format!("{:.4}", row.record.support),
                format!("{:.4}", row.record.confidence),
                format!("{:.4}", row.record.lift),
            ])?,
            Variant::V2 => rules.write_record([
                format!("{}", row.frequency),
                antecedent,
                consequent,
                format!("{:.4}", row.record.confidence),
                format!("{:.4}", row.record.lift),
                format!("{:.4}", row.record.interestingness),
            ])?,
        }
    }
    rules.flush()?;

    let json = serde_json::to_string_pretty(report)
        .map_err(|e| Error::Config(format!("report serialization: {e}")))?;
    std::fs::write(out_dir.join(format!("report-{base}.json")), json)?;
    Ok(())
}

fn write_timings(report: &AggregateReport, wall_ms: &[u128], out_dir: &Path) -> Result<()> {
    let base = report_basename(report);
    let mut out = String::from("prob_cross,prob_mut,wall_ms\n");
    for (cell, ms) in report.cells.iter().zip(wall_ms) {
        out.push_str(&format!("{},{},{}\n", cell.pc, cell.pm, ms));
    }
    std::fs::write(out_dir.join(format!("timings-{base}.csv")), out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::generate_synthetic;
    use crate::rule::Rule;
    use crate::variation::score_rule;

    fn scored(db: &TransactionDatabase, symbols: &[u8]) -> ScoredRule {
        let mut evals = 0;
        score_rule(
            Rule::from_ternary(symbols).unwrap(),
            db,
            Variant::V1,
            &mut evals,
        )
        .unwrap()
    }

    #[test]
    fn frequency_table_counts_and_orders() {
        let db = generate_synthetic(60, 4, 0.6, 3).unwrap();
        let r1 = scored(&db, &[0, 1, 2, 2]);
        let r2 = scored(&db, &[2, 0, 1, 2]);
        let r3 = scored(&db, &[2, 2, 0, 1]);

        let identical = vec![vec![r1.clone()], vec![r1.clone()], vec![r1.clone()]];
        let table = rule_frequency_table(&identical, db.item_names());
        assert_eq!(table.len(), 1);
        assert_eq!(table[0].frequency, 3);

        let disjoint = vec![vec![r1.clone()], vec![r2.clone()], vec![r3.clone()]];
        let table = rule_frequency_table(&disjoint, db.item_names());
        assert_eq!(table.len(), 3);
        assert!(table.iter().all(|row| row.frequency == 1));

        let mixed = vec![
            vec![r1.clone(), r2.clone()],
            vec![r1.clone()],
            vec![r1, r3],
        ];
        let table = rule_frequency_table(&mixed, db.item_names());
        assert_eq!(table[0].frequency, 3);
        assert_eq!(table[1].frequency, 1);
        assert_eq!(table[2].frequency, 1);
    }

    #[test]
    fn run_seed_ignores_grid_shape() {
        let a = run_seed(7, Algorithm::Nsga3, Variant::V1, 0.8, 0.1, 3);
        let b = run_seed(7, Algorithm::Nsga3, Variant::V1, 0.8, 0.1, 3);
        assert_eq!(a, b);
        assert_ne!(a, run_seed(7, Algorithm::Nsga3, Variant::V1, 0.8, 0.1, 4));
        assert_ne!(a, run_seed(7, Algorithm::Moead, Variant::V1, 0.8, 0.1, 3));
        assert_ne!(a, run_seed(7, Algorithm::Nsga3, Variant::V2, 0.8, 0.1, 3));
        assert_ne!(a, run_seed(8, Algorithm::Nsga3, Variant::V1, 0.8, 0.1, 3));
    }

    #[test]
    fn config_defaults_follow_experiment_settings() {
        let config = ExperimentConfig::from_toml_str(
            "dataset = \"d.csv\"\nformat = \"matrix-csv\"\nalgorithm = \"nsga3\"\nvariant = \"v1\"\n",
        )
        .unwrap();
        assert_eq!(config.pc, vec![0.8, 0.85, 0.9]);
        assert_eq!(config.pm, vec![0.1, 0.15, 0.2]);
        assert_eq!(config.runs, 30);
        assert_eq!(config.generations, 200);
        assert_eq!(config.population(), 50);
        assert_eq!(config.theta, 5.0);
        assert_eq!(config.neighborhood, 20);
        assert!(config.compute_truefront);
    }

    #[test]
    fn config_rejects_bad_grids_and_unknown_keys() {
        let err = ExperimentConfig::from_toml_str(
            "dataset = \"d.csv\"\nformat = \"matrix-csv\"\nalgorithm = \"nsga3\"\nvariant = \"v1\"\npc = []\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let err = ExperimentConfig::from_toml_str(
            "dataset = \"d.csv\"\nformat = \"matrix-csv\"\nalgorithm = \"nsga3\"\nvariant = \"v1\"\nbogus = 1\n",
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn reference_divisions_pairings() {
        assert_eq!(nsga3_reference_divisions(50), 12);
        assert_eq!(nsga3_reference_divisions(500), 31);
        assert_eq!(divisions_for_at_least(45), 8);
    }

    #[test]
    fn ratio_modes_differ_on_skewed_runs() {
        let pairs = [(1.0, 1.0), (1.0, 0.1)];
        let of_means = cell_ratio(RatioMode::RatioOfMeans, &pairs);
        let of_ratios = cell_ratio(RatioMode::MeanOfRatios, &pairs);
        assert!((of_means - (1.0 / 0.55)).abs() < 1e-12);
        assert!((of_ratios - 5.5).abs() < 1e-12);
    }

    #[test]
    fn render_ratio_inf() {
        assert_eq!(render_ratio(f64::INFINITY), "inf");
        assert_eq!(render_ratio(2.5), "2.5000");
    }
}
