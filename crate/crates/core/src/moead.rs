//! MOEA/D with penalty-based boundary intersection decomposition.
//!
//! One subproblem per weight vector; reproduction mates random neighbors,
//! and a child replaces every neighbor it beats on that neighbor's scalar
//! subproblem. The scalarization runs on negated objectives, so the ideal
//! point passed to [`pbi_scalar`] is a componentwise minimum there.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};
use crate::nsga3::{das_dennis, nondominated_members, ReferencePointSet};
use crate::run::{Archive, MoeadTrace, RunResult};
use crate::rule::Variant;
use crate::variation::{
    crossover, dedup, initial_population, mutate, repair, score_rule, VariationParams,
};

/// Weight vectors with their T-nearest neighborhoods in weight space.
#[derive(Clone, Debug)]
pub struct WeightVectorSystem {
    weights: Vec<[f64; 3]>,
    neighborhoods: Vec<Vec<usize>>,
    neighborhood_size: usize,
}

impl WeightVectorSystem {
    /// Builds neighborhoods of the `t` nearest weights (Euclidean distance,
    /// ties by index); every weight is its own nearest neighbor.
    pub fn new(refs: &ReferencePointSet, t: usize) -> Result<Self> {
        let n = refs.len();
        if t > n {
            return Err(Error::NeighborhoodOverdraw { t, n });
        }
        if t < 2 {
            return Err(Error::InvalidParameter(
                "neighborhood size must be at least 2 to pick distinct parents".into(),
            ));
        }
        let weights: Vec<[f64; 3]> = refs.points().to_vec();
        let neighborhoods = weights
            .iter()
            .map(|w| {
                let mut by_distance: Vec<(usize, f64)> = weights
                    .iter()
                    .enumerate()
                    .map(|(j, other)| {
                        let d = (0..3).map(|k| (w[k] - other[k]).powi(2)).sum::<f64>();
                        (j, d)
                    })
                    .collect();
                by_distance.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
                by_distance.into_iter().take(t).map(|(j, _)| j).collect()
            })
            .collect();
        Ok(WeightVectorSystem {
            weights,
            neighborhoods,
            neighborhood_size: t,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[[f64; 3]] {
        &self.weights
    }

    pub fn neighborhood(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }

    pub fn neighborhood_size(&self) -> usize {
        self.neighborhood_size
    }
}

/// Componentwise best objective values observed so far (maximization).
#[derive(Clone, Copy, Debug)]
pub struct IdealPoint {
    best: [f64; 3],
}

impl IdealPoint {
    pub fn from_values(values: &[[f64; 3]]) -> Self {
        let mut best = [f64::NEG_INFINITY; 3];
        for v in values {
            for axis in 0..3 {
                best[axis] = best[axis].max(v[axis]);
            }
        }
        IdealPoint { best }
    }

    pub fn update(&mut self, value: [f64; 3]) {
        for (best, observed) in self.best.iter_mut().zip(value) {
            *best = best.max(observed);
        }
    }

    pub fn values(&self) -> [f64; 3] {
        self.best
    }

    /// Negated view for the minimization-space scalarizer.
    pub fn min_values(&self) -> [f64; 3] {
        [-self.best[0], -self.best[1], -self.best[2]]
    }
}

/// Decomposition scalarizer; PBI is the one the harness ships and tests.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scalarizer {
    Pbi { theta: f64 },
}

impl Scalarizer {
    pub fn evaluate(&self, objective: [f64; 3], weight: [f64; 3], ideal: [f64; 3]) -> Result<f64> {
        match *self {
            Scalarizer::Pbi { theta } => pbi_scalar(objective, weight, ideal, theta),
        }
    }
}

/// Penalty-based boundary intersection, minimization orientation:
/// d1 = |(F − z)·λ|/‖λ‖, d2 = ‖F − (z + d1·λ/‖λ‖)‖, result d1 + θ·d2.
pub fn pbi_scalar(objective: [f64; 3], weight: [f64; 3], ideal: [f64; 3], theta: f64) -> Result<f64> {
    let norm = (weight[0] * weight[0] + weight[1] * weight[1] + weight[2] * weight[2]).sqrt();
    if norm == 0.0 || norm.is_nan() {
        return Err(Error::DegenerateWeight);
    }
    if theta < 0.0 || theta.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "PBI penalty {theta} must be nonnegative"
        )));
    }
    let diff = [
        objective[0] - ideal[0],
        objective[1] - ideal[1],
        objective[2] - ideal[2],
    ];
    let d1 = (diff[0] * weight[0] + diff[1] * weight[1] + diff[2] * weight[2]).abs() / norm;
    let mut d2_sq = 0.0;
    for axis in 0..3 {
        let residual = diff[axis] - d1 * weight[axis] / norm;
        d2_sq += residual * residual;
    }
    Ok(d1 + theta * d2_sq.sqrt())
}

/// Parameters of a full MOEA/D run.
#[derive(Clone, Debug)]
pub struct MoeadParams {
    pub generations: u32,
    /// Das-Dennis divisions for the weight lattice; the population size is
    /// the lattice size.
    pub weight_divisions: usize,
    pub neighborhood_size: usize,
    pub theta: f64,
    pub seed: u64,
    pub variation: VariationParams,
    /// Replace duplicate gene vectors in the working population after each
    /// generation (off by default; the emitted front is always deduplicated).
    pub dedup_working_set: bool,
    pub record_populations: bool,
    pub record_archive_snapshots: bool,
    pub record_trace: bool,
}

impl Default for MoeadParams {
    fn default() -> Self {
        MoeadParams {
            generations: 200,
            weight_divisions: 8,
            neighborhood_size: 20,
            theta: 5.0,
            seed: 0,
            variation: VariationParams::default(),
            dedup_working_set: false,
            record_populations: false,
            record_archive_snapshots: false,
            record_trace: false,
        }
    }
}

/// Runs MOEA/D and returns the non-dominated, deduplicated subset of the
/// final population plus diagnostics. Deterministic per seed.
pub fn run_moead(
    db: &TransactionDatabase,
    variant: Variant,
    params: &MoeadParams,
) -> Result<RunResult> {
    params.variation.validate()?;
    if db.n_items() < 2 {
        return Err(Error::TooFewItems(db.n_items()));
    }
    let refs = das_dennis(params.weight_divisions)?;
    let system = WeightVectorSystem::new(&refs, params.neighborhood_size)?;
    let scalarizer = Scalarizer::Pbi {
        theta: params.theta,
    };
    let n = system.len();
    let t = system.neighborhood_size();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut evaluations = 0u64;

    let mut population =
        initial_population(db, n, variant, &params.variation, &mut rng, &mut evaluations)?;
    let mut ideal = IdealPoint::from_values(&population.objective_values());
    let mut archive = Archive::default();
    for member in &population.members {
        archive.insert(member);
    }

    let mut per_generation = vec![population.objective_values()];
    let mut recorded_populations = params
        .record_populations
        .then(|| vec![population.rules()]);
    let mut archive_snapshots = params
        .record_archive_snapshots
        .then(|| vec![archive.objective_values()]);
    let mut trace = params.record_trace.then(|| MoeadTrace {
        ideal_trajectory: vec![ideal.values()],
        replacements: Vec::new(),
    });

    for _ in 0..params.generations {
        for i in 0..n {
            let neighborhood = system.neighborhood(i);
            let first = neighborhood[rng.gen_range(0..t)];
            let second = loop {
                let candidate = neighborhood[rng.gen_range(0..t)];
                if candidate != first {
                    break candidate;
                }
            };

            let (child, _) = crossover(
                &population.members[first].rule,
                &population.members[second].rule,
                params.variation.crossover_prob,
                &mut rng,
            )?;
            let mutated = mutate(
                &child,
                params.variation.mutation_prob,
                params.variation.mutation_mode,
                &mut rng,
            )?;
            let repaired = repair(
                mutated,
                db,
                params.variation.init,
                params.variation.repair_retries,
                &mut rng,
            )?;
            let scored = score_rule(repaired, db, variant, &mut evaluations)?;
            archive.insert(&scored);
            ideal.update(scored.objectives.values());
            if let Some(trace) = trace.as_mut() {
                trace.ideal_trajectory.push(ideal.values());
            }

            let ideal_min = ideal.min_values();
            let child_min = scored.objectives.min_values();
            for &j in neighborhood {
                let weight = system.weights()[j];
                let g_new = scalarizer.evaluate(child_min, weight, ideal_min)?;
                let g_old = scalarizer.evaluate(
                    population.members[j].objectives.min_values(),
                    weight,
                    ideal_min,
                )?;
                if g_new <= g_old {
                    population.members[j] = scored.clone();
                    if let Some(trace) = trace.as_mut() {
                        trace.replacements.push((g_new, g_old));
                    }
                }
            }
        }

        if params.dedup_working_set {
            dedup(
                &mut population,
                db,
                variant,
                params.variation.init,
                params.variation.repair_retries,
                &mut rng,
                &mut evaluations,
            )?;
        }

        per_generation.push(population.objective_values());
        if let Some(recorded) = recorded_populations.as_mut() {
            recorded.push(population.rules());
        }
        if let Some(snapshots) = archive_snapshots.as_mut() {
            snapshots.push(archive.objective_values());
        }
    }

    let front = nondominated_members(&population)?;
    Ok(RunResult {
        front,
        archive: archive.members,
        per_generation_objectives: per_generation,
        evaluations,
        recorded_populations,
        archive_snapshots,
        moead_trace: trace,
    })
}
