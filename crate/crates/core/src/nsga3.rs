//! NSGA-III: fast non-dominated sorting, simplex-lattice reference points,
//! adaptive normalization, reference-line association, and niche-count
//! selection.
//!
//! All internal sorting and normalization runs on negated objectives
//! (minimization) so one dominance routine serves both optimizers; the
//! public surface stays in maximization orientation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};
use crate::run::{dominates_min, Archive, RunResult};
use crate::rule::{ObjectiveVector, Variant};
use crate::variation::{
    crossover, dedup, initial_population, mutate, repair, score_rule, Population, ScoredRule,
    VariationParams,
};

/// Weight tolerance used by the achievement-scalarizing extreme-point search.
const ASF_EPSILON: f64 = 1e-6;
/// Below this, an intercept is considered degenerate.
const INTERCEPT_EPSILON: f64 = 1e-12;

/// Das-Dennis simplex lattice: reference points for NSGA-III, weight vectors
/// for MOEA/D.
#[derive(Clone, Debug)]
pub struct ReferencePointSet {
    points: Vec<[f64; 3]>,
    divisions: usize,
}

impl ReferencePointSet {
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn divisions(&self) -> usize {
        self.divisions
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All lattice points (i/p, j/p, k/p) with i+j+k = p, ascending lexicographic.
pub fn das_dennis(divisions: usize) -> Result<ReferencePointSet> {
    if divisions == 0 {
        return Err(Error::InvalidDivisions);
    }
    let p = divisions as f64;
    let mut points = Vec::with_capacity((divisions + 1) * (divisions + 2) / 2);
    for i in 0..=divisions {
        for j in 0..=(divisions - i) {
            let k = divisions - i - j;
            points.push([i as f64 / p, j as f64 / p, k as f64 / p]);
        }
    }
    Ok(ReferencePointSet { points, divisions })
}

/// Smallest division count whose lattice has at least `n` points.
pub fn divisions_for_at_least(n: usize) -> usize {
    let mut p = 1usize;
    while (p + 1) * (p + 2) / 2 < n {
        p += 1;
    }
    p
}

/// Population indices partitioned into Pareto fronts, best first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    /// Front rank per population index.
    pub fn ranks(&self, n: usize) -> Vec<usize> {
        let mut ranks = vec![usize::MAX; n];
        for (rank, front) in self.fronts.iter().enumerate() {
            for &i in front {
                ranks[i] = rank;
            }
        }
        ranks
    }
}

/// Deb-style fast non-dominated sort over minimization vectors.
pub(crate) fn sort_min_values(values: &[[f64; 3]]) -> Result<FrontPartition> {
    if values.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::NaNObjective);
    }
    let n = values.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates_min(&values[i], &values[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates_min(&values[j], &values[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    Ok(FrontPartition { fronts })
}

/// Partitions maximization objective vectors into Pareto fronts.
pub fn fast_nondominated_sort(objectives: &[ObjectiveVector]) -> Result<FrontPartition> {
    let values: Vec<[f64; 3]> = objectives.iter().map(|o| o.min_values()).collect();
    sort_min_values(&values)
}

fn perpendicular_distance(point: &[f64; 3], unit_direction: &[f64; 3]) -> f64 {
    let projection: f64 = (0..3).map(|i| point[i] * unit_direction[i]).sum();
    let mut sq = 0.0;
    for i in 0..3 {
        let residual = point[i] - projection * unit_direction[i];
        sq += residual * residual;
    }
    sq.sqrt()
}

/// Solves the 3x3 system E·b = 1 by Gaussian elimination with partial
/// pivoting; `None` when singular.
fn solve_unit_plane(extremes: &[[f64; 3]; 3]) -> Option<[f64; 3]> {
    let mut a = [[0.0f64; 4]; 3];
    for (row, extreme) in a.iter_mut().zip(extremes) {
        row[..3].copy_from_slice(extreme);
        row[3] = 1.0;
    }
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < INTERCEPT_EPSILON {
            return None;
        }
        a.swap(col, pivot_row);
        let pivot = a[col];
        for (row, values) in a.iter_mut().enumerate() {
            if row != col {
                let factor = values[col] / pivot[col];
                for (value, &p) in values[col..].iter_mut().zip(&pivot[col..]) {
                    *value -= factor * p;
                }
            }
        }
    }
    Some([a[0][3] / a[0][0], a[1][3] / a[1][1], a[2][3] / a[2][2]])
}

/// Ideal-point shift, ASF extreme points, and intercept division over the
/// given member indices (minimization orientation). Falls back to per-axis
/// maxima when the extreme-point plane is singular or produces non-positive
/// intercepts.
pub(crate) fn normalize_members(values: &[[f64; 3]], members: &[usize]) -> Vec<[f64; 3]> {
    debug_assert!(!members.is_empty());
    let mut ideal = [f64::INFINITY; 3];
    for &i in members {
        for axis in 0..3 {
            ideal[axis] = ideal[axis].min(values[i][axis]);
        }
    }
    let translated: Vec<[f64; 3]> = members
        .iter()
        .map(|&i| {
            let mut t = [0.0; 3];
            for axis in 0..3 {
                t[axis] = values[i][axis] - ideal[axis];
            }
            t
        })
        .collect();

    let mut extremes = [[0.0f64; 3]; 3];
    for (axis, extreme) in extremes.iter_mut().enumerate() {
        let mut best = f64::INFINITY;
        let mut best_idx = 0;
        for (idx, t) in translated.iter().enumerate() {
            let asf = (0..3)
                .map(|k| {
                    let weight = if k == axis { 1.0 } else { ASF_EPSILON };
                    t[k] / weight
                })
                .fold(f64::NEG_INFINITY, f64::max);
            if asf < best {
                best = asf;
                best_idx = idx;
            }
        }
        *extreme = translated[best_idx];
    }

    let mut intercepts = match solve_unit_plane(&extremes) {
        Some(plane) => {
            let candidate = [1.0 / plane[0], 1.0 / plane[1], 1.0 / plane[2]];
            if candidate
                .iter()
                .all(|&a| a.is_finite() && a > INTERCEPT_EPSILON)
            {
                Some(candidate)
            } else {
                None
            }
        }
        None => None,
    }
    .unwrap_or_else(|| {
        let mut maxima = [0.0f64; 3];
        for t in &translated {
            for axis in 0..3 {
                maxima[axis] = maxima[axis].max(t[axis]);
            }
        }
        maxima
    });
    for intercept in &mut intercepts {
        if *intercept < INTERCEPT_EPSILON {
            *intercept = INTERCEPT_EPSILON;
        }
    }

    translated
        .into_iter()
        .map(|t| {
            [
                t[0] / intercepts[0],
                t[1] / intercepts[1],
                t[2] / intercepts[2],
            ]
        })
        .collect()
}

/// Reference-point niching selection over raw maximization objective vectors;
/// returns the selected indices in ascending order.
pub fn nsga3_select_indices(
    objectives: &[[f64; 3]],
    refs: &ReferencePointSet,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    if n > objectives.len() {
        return Err(Error::SelectionOverdraw {
            requested: n,
            available: objectives.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let values: Vec<[f64; 3]> = objectives
        .iter()
        .map(|&[a, b, c]| [-a, -b, -c])
        .collect();
    let partition = sort_min_values(&values)?;

    let mut accepted: Vec<usize> = Vec::with_capacity(n);
    let mut level = 0;
    while accepted.len() + partition.fronts[level].len() < n {
        accepted.extend_from_slice(&partition.fronts[level]);
        level += 1;
    }
    let last_front = &partition.fronts[level];
    if accepted.len() + last_front.len() == n {
        accepted.extend_from_slice(last_front);
        accepted.sort_unstable();
        return Ok(accepted);
    }
    let slots = n - accepted.len();

    // Normalize accepted fronts plus the split front together.
    let mut members: Vec<usize> = accepted.clone();
    members.extend_from_slice(last_front);
    let normalized = normalize_members(&values, &members);

    let unit_refs: Vec<[f64; 3]> = refs
        .points()
        .iter()
        .map(|r| {
            let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            [r[0] / norm, r[1] / norm, r[2] / norm]
        })
        .collect();

    // Nearest reference line per member (ties to the lower ref index).
    let associations: Vec<(usize, f64)> = normalized
        .iter()
        .map(|point| {
            let mut best = (0usize, f64::INFINITY);
            for (ref_idx, unit) in unit_refs.iter().enumerate() {
                let d = perpendicular_distance(point, unit);
                if d < best.1 {
                    best = (ref_idx, d);
                }
            }
            best
        })
        .collect();

    let mut niche_counts = vec![0usize; refs.len()];
    for member_pos in 0..accepted.len() {
        niche_counts[associations[member_pos].0] += 1;
    }
    let mut candidates: Vec<Vec<(usize, f64)>> = vec![Vec::new(); refs.len()];
    for (offset, &member) in last_front.iter().enumerate() {
        let (ref_idx, distance) = associations[accepted.len() + offset];
        candidates[ref_idx].push((member, distance));
    }

    let mut active: Vec<usize> = (0..refs.len())
        .filter(|&r| !candidates[r].is_empty())
        .collect();
    let mut picked = 0usize;
    while picked < slots {
        let min_count = active.iter().map(|&r| niche_counts[r]).min().unwrap();
        let tied: Vec<usize> = active
            .iter()
            .copied()
            .filter(|&r| niche_counts[r] == min_count)
            .collect();
        let chosen_ref = tied[rng.gen_range(0..tied.len())];

        let pool = &mut candidates[chosen_ref];
        let best_distance = pool
            .iter()
            .map(|&(_, d)| d)
            .fold(f64::INFINITY, f64::min);
        let closest: Vec<usize> = pool
            .iter()
            .enumerate()
            .filter(|(_, &(_, d))| d == best_distance)
            .map(|(pos, _)| pos)
            .collect();
        let pool_pos = closest[rng.gen_range(0..closest.len())];
        let (member, _) = pool.swap_remove(pool_pos);
        accepted.push(member);
        niche_counts[chosen_ref] += 1;
        picked += 1;
        if pool.is_empty() {
            active.retain(|&r| r != chosen_ref);
        }
    }

    accepted.sort_unstable();
    Ok(accepted)
}

/// Environmental selection of `n` survivors from a parent∪child union.
pub fn nsga3_select(
    union: &Population,
    refs: &ReferencePointSet,
    n: usize,
    rng: &mut impl Rng,
) -> Result<Population> {
    let indices = nsga3_select_indices(&union.objective_values(), refs, n, rng)?;
    Ok(Population {
        members: indices
            .into_iter()
            .map(|i| union.members[i].clone())
            .collect(),
    })
}

/// Parameters of a full NSGA-III run.
#[derive(Clone, Debug)]
pub struct Nsga3Params {
    pub population_size: usize,
    pub generations: u32,
    pub reference_divisions: usize,
    pub seed: u64,
    pub variation: VariationParams,
    pub record_populations: bool,
    pub record_archive_snapshots: bool,
}

impl Default for Nsga3Params {
    fn default() -> Self {
        Nsga3Params {
            population_size: 50,
            generations: 200,
            reference_divisions: 12,
            seed: 0,
            variation: VariationParams::default(),
            record_populations: false,
            record_archive_snapshots: false,
        }
    }
}

fn binary_tournament(ranks: &[usize], rng: &mut impl Rng) -> usize {
    let a = rng.gen_range(0..ranks.len());
    let b = rng.gen_range(0..ranks.len());
    if ranks[a] < ranks[b] {
        a
    } else if ranks[b] < ranks[a] {
        b
    } else if rng.gen_bool(0.5) {
        a
    } else {
        b
    }
}

/// Gene-level deduplication preserving first occurrences.
fn dedup_rules(members: Vec<ScoredRule>) -> Vec<ScoredRule> {
    let mut seen = std::collections::HashSet::new();
    members
        .into_iter()
        .filter(|m| seen.insert(m.rule.clone()))
        .collect()
}

/// First non-dominated front of a population, gene-deduplicated.
pub(crate) fn nondominated_members(population: &Population) -> Result<Vec<ScoredRule>> {
    if population.is_empty() {
        return Ok(Vec::new());
    }
    let values: Vec<[f64; 3]> = population
        .members
        .iter()
        .map(|m| m.objectives.min_values())
        .collect();
    let partition = sort_min_values(&values)?;
    let front = dedup_rules(
        partition.fronts[0]
            .iter()
            .map(|&i| population.members[i].clone())
            .collect(),
    );
    Ok(front)
}

/// Runs NSGA-III for the configured number of generations and returns the
/// final first front plus diagnostics. Deterministic per seed.
pub fn run_nsga3(
    db: &TransactionDatabase,
    variant: Variant,
    params: &Nsga3Params,
) -> Result<RunResult> {
    params.variation.validate()?;
    if db.n_items() < 2 {
        return Err(Error::TooFewItems(db.n_items()));
    }
    if params.population_size < 2 {
        return Err(Error::InvalidParameter(
            "population size must be at least 2".into(),
        ));
    }
    let refs = das_dennis(params.reference_divisions)?;
    let n = params.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut evaluations = 0u64;

    let mut population =
        initial_population(db, n, variant, &params.variation, &mut rng, &mut evaluations)?;
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

    for _ in 0..params.generations {
        let min_values: Vec<[f64; 3]> = population
            .members
            .iter()
            .map(|m| m.objectives.min_values())
            .collect();
        let ranks = sort_min_values(&min_values)?.ranks(n);

        let mut children: Vec<ScoredRule> = Vec::with_capacity(n);
        while children.len() < n {
            let first = binary_tournament(&ranks, &mut rng);
            let second = binary_tournament(&ranks, &mut rng);
            let (child_a, child_b) = crossover(
                &population.members[first].rule,
                &population.members[second].rule,
                params.variation.crossover_prob,
                &mut rng,
            )?;
            for child in [child_a, child_b] {
                if children.len() == n {
                    break;
                }
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
                children.push(score_rule(repaired, db, variant, &mut evaluations)?);
            }
        }

        let mut union = Population {
            members: population
                .members
                .iter()
                .cloned()
                .chain(children)
                .collect(),
        };
        dedup(
            &mut union,
            db,
            variant,
            params.variation.init,
            params.variation.repair_retries,
            &mut rng,
            &mut evaluations,
        )?;
        for member in &union.members {
            archive.insert(member);
        }

        let selected = nsga3_select_indices(&union.objective_values(), &refs, n, &mut rng)?;
        population = Population {
            members: selected
                .into_iter()
                .map(|i| union.members[i].clone())
                .collect(),
        };

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
        moead_trace: None,
    })
}
