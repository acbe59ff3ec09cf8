//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // -- dataset --
    #[error("dataset contains no transactions")]
    EmptyDataset,
    #[error("matrix cell at row {row}, column {col} is not 0 or 1")]
    MalformedCell { row: usize, col: usize },
    #[error("transaction on line {line} contains no items")]
    EmptyTransaction { line: usize },
    #[error("duplicate item {name:?} in header")]
    DuplicateItem { name: String },
    #[error("empty item name in header column {col}")]
    EmptyItemName { col: usize },
    #[error("row {row} has {found} cells, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("item index {index} out of range for {n_items} items")]
    ItemOutOfRange { index: usize, n_items: usize },
    #[error("itemset is empty")]
    EmptyItemSet,
    #[error("density {0} is outside (0, 1)")]
    InvalidDensity(f64),

    // -- rule model --
    #[error("bit encoding is malformed: {0}")]
    MalformedEncoding(String),
    #[error("antecedent never occurs; confidence is undefined")]
    UndefinedConfidence,
    #[error("rule is invalid (violates shape constraints or has zero support)")]
    InvalidRule,

    // -- variation --
    #[error("{0} items cannot host an antecedent and a consequent")]
    TooFewItems(usize),
    #[error("no transaction has at least two items; seeded initialization impossible")]
    SeedingImpossible,
    #[error("gene vectors have different lengths ({left} vs {right})")]
    GeneLengthMismatch { left: usize, right: usize },
    #[error("repair gave up after {budget} attempts without a positive-support rule")]
    RepairExhausted { budget: u32 },
    #[error("population of {requested} exceeds the distinct-rule capacity of this instance")]
    PopulationTooLargeForRuleSpace { requested: usize },

    // -- optimizers --
    #[error("objective vector contains NaN; dominance is undefined")]
    NaNObjective,
    #[error("reference-point divisions must be at least 1")]
    InvalidDivisions,
    #[error("cannot select {requested} solutions from a pool of {available}")]
    SelectionOverdraw { requested: usize, available: usize },
    #[error("neighborhood size {t} exceeds the {n} weight vectors")]
    NeighborhoodOverdraw { t: usize, n: usize },
    #[error("weight vector has zero norm")]
    DegenerateWeight,

    // -- quality --
    #[error("solution set is empty")]
    EmptySolutionSet,
    #[error("reference front is empty")]
    EmptyReferenceFront,
    #[error("point lies below the hypervolume reference point on axis {axis}")]
    PointBelowReference { axis: usize },
    #[error("front file {path} is malformed at line {line}")]
    MalformedFrontFile { path: PathBuf, line: usize },

    // -- oracle --
    #[error("{n_items} items is too large for uncapped enumeration (limit 20)")]
    InstanceTooLarge { n_items: usize },

    // -- harness --
    #[error("reference front {path} is missing and computing it was disabled")]
    MissingReferenceFront { path: PathBuf },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 3 for infeasible instances, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RepairExhausted { .. }
            | Error::PopulationTooLargeForRuleSpace { .. }
            | Error::SeedingImpossible
            | Error::InstanceTooLarge { .. } => 3,
            _ => 2,
        }
    }
}
