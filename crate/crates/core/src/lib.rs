//! Multi-objective evolutionary mining of association rules from binary
//! transactional datasets.
//!
//! Two optimizers (NSGA-III with reference-point niching, MOEA/D with PBI
//! decomposition) search the space of single-consequent rules under two
//! three-objective variants: (support, confidence, lift) and (confidence,
//! lift, interestingness). Result quality is scored with an exact 3-D
//! hypervolume and IGD against an approximated true front, and a brute-force
//! oracle provides ground truth on small instances.
//!
//! Module map:
//! * [`dataset`] — bitset transaction databases, loading, synthesis
//! * [`rule`] — rule chromosomes, encodings, metrics, objectives
//! * [`variation`] — initialization, crossover, mutation, repair, dedup
//! * [`nsga3`] / [`moead`] — the two optimizers
//! * [`quality`] — hypervolume, IGD, true-front approximation
//! * [`oracle`] — exhaustive enumeration and exact fronts
//! * [`harness`] — experiment grids, aggregation, report files

pub mod dataset;
pub mod error;
pub mod harness;
pub mod moead;
pub mod nsga3;
pub mod oracle;
pub mod quality;
pub mod rule;
mod run;
pub mod variation;

pub use error::{Error, Result};
pub use run::{MoeadTrace, RunResult};
