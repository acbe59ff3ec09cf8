//! Output shared by both optimizers: the emitted front, the cumulative
//! non-dominated archive, and optional per-generation diagnostics.

use crate::rule::Rule;
use crate::variation::ScoredRule;

/// Dominance in minimization orientation: no worse everywhere, better somewhere.
pub(crate) fn dominates_min(a: &[f64; 3], b: &[f64; 3]) -> bool {
    let mut strict = false;
    for i in 0..3 {
        if a[i] > b[i] {
            return false;
        }
        if a[i] < b[i] {
            strict = true;
        }
    }
    strict
}

/// Dominance in maximization orientation.
pub(crate) fn dominates_max(a: &[f64; 3], b: &[f64; 3]) -> bool {
    let mut strict = false;
    for i in 0..3 {
        if a[i] < b[i] {
            return false;
        }
        if a[i] > b[i] {
            strict = true;
        }
    }
    strict
}

/// `a` is at least as good as `b` on every axis (maximization).
pub(crate) fn weakly_dominates_max(a: &[f64; 3], b: &[f64; 3]) -> bool {
    (0..3).all(|i| a[i] >= b[i])
}

/// Cumulative non-dominated set over every individual a run evaluates.
/// One representative rule is kept per distinct objective point.
#[derive(Clone, Debug, Default)]
pub(crate) struct Archive {
    pub members: Vec<ScoredRule>,
}

impl Archive {
    pub fn insert(&mut self, candidate: &ScoredRule) {
        let values = candidate.objectives.values();
        if self
            .members
            .iter()
            .any(|m| weakly_dominates_max(&m.objectives.values(), &values))
        {
            return;
        }
        self.members
            .retain(|m| !dominates_max(&values, &m.objectives.values()));
        self.members.push(candidate.clone());
    }

    pub fn objective_values(&self) -> Vec<[f64; 3]> {
        self.members.iter().map(|m| m.objectives.values()).collect()
    }
}

/// Ideal-point and replacement trail of a MOEA/D run, recorded on request.
#[derive(Clone, Debug, Default)]
pub struct MoeadTrace {
    /// Ideal point (maximization orientation) after each child evaluation.
    pub ideal_trajectory: Vec<[f64; 3]>,
    /// (new scalar, old scalar) for every accepted replacement, evaluated
    /// under the ideal point current at replacement time.
    pub replacements: Vec<(f64, f64)>,
}

/// Result of one optimizer run.
#[derive(Clone, Debug)]
pub struct RunResult {
    /// Non-dominated subset of the final population, gene-deduplicated.
    pub front: Vec<ScoredRule>,
    /// Cumulative non-dominated archive over all evaluated individuals.
    pub archive: Vec<ScoredRule>,
    /// Population objective vectors: entry 0 is the initial population,
    /// then one entry per generation.
    pub per_generation_objectives: Vec<Vec<[f64; 3]>>,
    /// Number of full rule evaluations performed.
    pub evaluations: u64,
    /// Populations per generation, when requested.
    pub recorded_populations: Option<Vec<Vec<Rule>>>,
    /// Archive objective snapshots per generation, when requested.
    pub archive_snapshots: Option<Vec<Vec<[f64; 3]>>>,
    /// MOEA/D-specific trace, when requested.
    pub moead_trace: Option<MoeadTrace>,
}

impl RunResult {
    pub fn front_objective_values(&self) -> Vec<[f64; 3]> {
        self.front.iter().map(|m| m.objectives.values()).collect()
    }

    pub fn archive_objective_values(&self) -> Vec<[f64; 3]> {
        self.archive.iter().map(|m| m.objectives.values()).collect()
    }
}
