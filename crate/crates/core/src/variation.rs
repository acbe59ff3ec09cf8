//! Population initialization, crossover, mutation, repair, and duplicate
//! elimination.
//!
//! Every operator is a pure function of its inputs and the RNG stream, so a
//! fixed seed reproduces a run exactly.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};
use crate::rule::{evaluate_rule, objective_vector, Gene, ObjectiveVector, Rule, RuleMetrics, Variant};

/// How initial rules (and zero-support replacements) are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitStrategy {
    /// Uniform ternary genes, structurally repaired.
    #[serde(rename = "random")]
    Random,
    /// Rules built from sampled transactions; support is positive by
    /// construction, which keeps sparse datasets feasible.
    #[serde(rename = "seeded")]
    TransactionSeeded,
}

/// CLI/config-facing choice; `Auto` picks seeding for sparse datasets.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitChoice {
    #[serde(rename = "random")]
    Random,
    #[serde(rename = "seeded")]
    Seeded,
    #[default]
    #[serde(rename = "auto")]
    Auto,
}

/// Mean transaction density below which `Auto` switches to seeding.
pub const AUTO_SEEDING_DENSITY: f64 = 0.1;

impl std::str::FromStr for InitChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(InitChoice::Random),
            "seeded" => Ok(InitChoice::Seeded),
            "auto" => Ok(InitChoice::Auto),
            other => Err(Error::InvalidParameter(format!(
                "unknown init strategy {other:?} (expected random, seeded, or auto)"
            ))),
        }
    }
}

impl InitChoice {
    pub fn resolve(self, db: &TransactionDatabase) -> InitStrategy {
        match self {
            InitChoice::Random => InitStrategy::Random,
            InitChoice::Seeded => InitStrategy::TransactionSeeded,
            InitChoice::Auto => {
                if db.mean_transaction_density() < AUTO_SEEDING_DENSITY {
                    InitStrategy::TransactionSeeded
                } else {
                    InitStrategy::Random
                }
            }
        }
    }
}

/// Whether `pm` applies per gene or once per individual.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MutationMode {
    #[default]
    #[serde(rename = "per-gene")]
    PerGene,
    #[serde(rename = "per-individual")]
    PerIndividual,
}

/// Default bound on resampling attempts before giving up on a
/// positive-support rule.
pub const DEFAULT_REPAIR_RETRIES: u32 = 1000;

/// Knobs shared by both optimizers' variation pipelines.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct VariationParams {
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub init: InitStrategy,
    pub mutation_mode: MutationMode,
    pub repair_retries: u32,
}

impl Default for VariationParams {
    fn default() -> Self {
        VariationParams {
            crossover_prob: 0.9,
            mutation_prob: 0.1,
            init: InitStrategy::Random,
            mutation_mode: MutationMode::PerGene,
            repair_retries: DEFAULT_REPAIR_RETRIES,
        }
    }
}

impl VariationParams {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.crossover_prob, "crossover probability")?;
        check_probability(self.mutation_prob, "mutation probability")?;
        if self.repair_retries == 0 {
            return Err(Error::InvalidParameter(
                "repair retry budget must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "{what} {p} is outside [0, 1]"
        )));
    }
    Ok(())
}

/// A rule with its cached metrics and objective vector.
#[derive(Clone, Debug)]
pub struct ScoredRule {
    pub rule: Rule,
    pub metrics: RuleMetrics,
    pub objectives: ObjectiveVector,
}

/// Evaluates a rule and bumps the evaluation counter.
pub fn score_rule(
    rule: Rule,
    db: &TransactionDatabase,
    variant: Variant,
    evaluations: &mut u64,
) -> Result<ScoredRule> {
    let metrics = evaluate_rule(&rule, db)?;
    *evaluations += 1;
    Ok(ScoredRule {
        objectives: objective_vector(&metrics, variant),
        metrics,
        rule,
    })
}

/// A population of scored rules.
#[derive(Clone, Debug, Default)]
pub struct Population {
    pub members: Vec<ScoredRule>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objective_values(&self) -> Vec<[f64; 3]> {
        self.members.iter().map(|m| m.objectives.values()).collect()
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.members.iter().map(|m| m.rule.clone()).collect()
    }
}

/// Uniform ternary genes followed by structural repair only.
pub fn random_rule(n_items: usize, rng: &mut impl Rng) -> Result<Rule> {
    if n_items < 2 {
        return Err(Error::TooFewItems(n_items));
    }
    let mut genes: Vec<Gene> = (0..n_items)
        .map(|_| match rng.gen_range(0..3u8) {
            0 => Gene::Antecedent,
            1 => Gene::Consequent,
            _ => Gene::Absent,
        })
        .collect();
    structural_repair(&mut genes, rng);
    Ok(Rule::new(genes))
}

/// Builds a rule from a sampled multi-item transaction: one of its items
/// becomes the consequent, the rest the antecedent. The source transaction
/// matches the rule, so support is at least 1/N.
pub fn transaction_seeded_rule(db: &TransactionDatabase, rng: &mut impl Rng) -> Result<Rule> {
    let eligible = db.multi_item_transactions();
    if eligible.is_empty() {
        return Err(Error::SeedingImpossible);
    }
    let t = eligible[rng.gen_range(0..eligible.len())] as usize;
    let items = db.transaction_items(t);
    let consequent = items[rng.gen_range(0..items.len())];
    let mut genes = vec![Gene::Absent; db.n_items()];
    for &i in &items {
        genes[i] = Gene::Antecedent;
    }
    genes[consequent] = Gene::Consequent;
    Ok(Rule::new(genes))
}

/// Mechanical single-point splice: left of `cut` from `a`, rest from `b`.
pub(crate) fn splice(a: &Rule, b: &Rule, cut: usize) -> Rule {
    let genes = a.genes()[..cut]
        .iter()
        .chain(&b.genes()[cut..])
        .copied()
        .collect();
    Rule::new(genes)
}

/// Single-point crossover applied with probability `pc`; otherwise the
/// children are clones. Children are not yet repaired.
pub fn crossover(a: &Rule, b: &Rule, pc: f64, rng: &mut impl Rng) -> Result<(Rule, Rule)> {
    if a.len() != b.len() {
        return Err(Error::GeneLengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    check_probability(pc, "crossover probability")?;
    let m = a.len();
    if m >= 2 && rng.gen_bool(pc) {
        let cut = rng.gen_range(1..m);
        Ok((splice(a, b, cut), splice(b, a, cut)))
    } else {
        Ok((a.clone(), b.clone()))
    }
}

fn resample_gene(gene: Gene, rng: &mut impl Rng) -> Gene {
    let alternatives = match gene {
        Gene::Antecedent => [Gene::Consequent, Gene::Absent],
        Gene::Consequent => [Gene::Antecedent, Gene::Absent],
        Gene::Absent => [Gene::Antecedent, Gene::Consequent],
    };
    alternatives[rng.gen_range(0..2)]
}

/// Resamples genes to a different symbol: each gene independently with
/// probability `pm` (per-gene mode), or one random gene with probability
/// `pm` (per-individual mode). The result is not yet repaired.
pub fn mutate(rule: &Rule, pm: f64, mode: MutationMode, rng: &mut impl Rng) -> Result<Rule> {
    check_probability(pm, "mutation probability")?;
    let mut out = rule.clone();
    match mode {
        MutationMode::PerGene => {
            for gene in out.genes_mut() {
                if rng.gen_bool(pm) {
                    *gene = resample_gene(*gene, rng);
                }
            }
        }
        MutationMode::PerIndividual => {
            if !out.is_empty() && rng.gen_bool(pm) {
                let pos = rng.gen_range(0..out.len());
                let gene = &mut out.genes_mut()[pos];
                *gene = resample_gene(*gene, rng);
            }
        }
    }
    Ok(out)
}

/// Restores the one-consequent / some-antecedent shape in place.
fn structural_repair(genes: &mut [Gene], rng: &mut impl Rng) {
    debug_assert!(genes.len() >= 2);
    let mut consequents: Vec<usize> = (0..genes.len())
        .filter(|&i| genes[i] == Gene::Consequent)
        .collect();
    while consequents.len() > 1 {
        let pick = rng.gen_range(0..consequents.len());
        genes[consequents[pick]] = Gene::Antecedent;
        consequents.swap_remove(pick);
    }
    if consequents.is_empty() {
        let antecedents: Vec<usize> = (0..genes.len())
            .filter(|&i| genes[i] == Gene::Antecedent)
            .collect();
        if antecedents.is_empty() {
            // Nothing present at all: conjure both sides.
            let first = rng.gen_range(0..genes.len());
            let second = loop {
                let c = rng.gen_range(0..genes.len());
                if c != first {
                    break c;
                }
            };
            genes[first] = Gene::Antecedent;
            genes[second] = Gene::Consequent;
        } else {
            genes[antecedents[rng.gen_range(0..antecedents.len())]] = Gene::Consequent;
        }
    }
    if !genes.contains(&Gene::Antecedent) {
        // Lone consequent; promote a random absent gene.
        let absents: Vec<usize> = (0..genes.len())
            .filter(|&i| genes[i] == Gene::Absent)
            .collect();
        genes[absents[rng.gen_range(0..absents.len())]] = Gene::Antecedent;
    }
}

/// Draws a structurally valid, positive-support rule by the given strategy.
fn fresh_valid_rule(
    db: &TransactionDatabase,
    strategy: InitStrategy,
    retries: u32,
    rng: &mut impl Rng,
) -> Result<Rule> {
    match strategy {
        InitStrategy::TransactionSeeded => transaction_seeded_rule(db, rng),
        InitStrategy::Random => {
            for _ in 0..retries {
                let candidate = random_rule(db.n_items(), rng)?;
                if db.intersection_count(&candidate.union_items()) > 0 {
                    return Ok(candidate);
                }
            }
            Err(Error::RepairExhausted { budget: retries })
        }
    }
}

/// Structural repair, then replacement of zero-support rules by a fresh rule
/// from the initialization strategy.
pub fn repair(
    rule: Rule,
    db: &TransactionDatabase,
    strategy: InitStrategy,
    retries: u32,
    rng: &mut impl Rng,
) -> Result<Rule> {
    let mut rule = rule;
    structural_repair(rule.genes_mut(), rng);
    if db.intersection_count(&rule.union_items()) > 0 {
        return Ok(rule);
    }
    fresh_valid_rule(db, strategy, retries, rng)
}

/// Distinct structurally valid rules an instance can host:
/// M * (2^(M-1) - 1), saturating.
fn structural_capacity(n_items: usize) -> u128 {
    if n_items < 2 {
        return 0;
    }
    if n_items > 127 {
        return u128::MAX;
    }
    let subsets = (1u128 << (n_items - 1)) - 1;
    subsets.saturating_mul(n_items as u128)
}

/// Replaces duplicate gene vectors (beyond the first occurrence) with fresh
/// rules not already present. Population size is unchanged.
pub fn dedup(
    population: &mut Population,
    db: &TransactionDatabase,
    variant: Variant,
    strategy: InitStrategy,
    retries: u32,
    rng: &mut impl Rng,
    evaluations: &mut u64,
) -> Result<()> {
    if population.len() as u128 > structural_capacity(db.n_items()) {
        return Err(Error::PopulationTooLargeForRuleSpace {
            requested: population.len(),
        });
    }
    let mut seen: HashSet<Rule> = HashSet::with_capacity(population.len());
    for idx in 0..population.members.len() {
        if seen.insert(population.members[idx].rule.clone()) {
            continue;
        }
        let mut replaced = false;
        for _ in 0..retries {
            let fresh = fresh_valid_rule(db, strategy, retries, rng)?;
            if !seen.contains(&fresh) {
                population.members[idx] = score_rule(fresh.clone(), db, variant, evaluations)?;
                seen.insert(fresh);
                replaced = true;
                break;
            }
        }
        if !replaced {
            return Err(Error::PopulationTooLargeForRuleSpace {
                requested: population.len(),
            });
        }
    }
    Ok(())
}

/// Draws, scores, and dedups an initial population of `n` rules.
pub fn initial_population(
    db: &TransactionDatabase,
    n: usize,
    variant: Variant,
    params: &VariationParams,
    rng: &mut impl Rng,
    evaluations: &mut u64,
) -> Result<Population> {
    let mut members = Vec::with_capacity(n);
    for _ in 0..n {
        let rule = fresh_valid_rule(db, params.init, params.repair_retries, rng)?;
        members.push(score_rule(rule, db, variant, evaluations)?);
    }
    let mut population = Population { members };
    dedup(
        &mut population,
        db,
        variant,
        params.init,
        params.repair_retries,
        rng,
        evaluations,
    )?;
    Ok(population)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, parse_matrix_csv};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d5() -> TransactionDatabase {
        parse_matrix_csv("A,B,C\n1,1,1\n1,1,0\n1,0,1\n0,1,1\n1,1,1\n").unwrap()
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn random_rule_on_two_items_is_one_of_two_shapes() {
        for seed in 0..50 {
            let rule = random_rule(2, &mut rng(seed)).unwrap();
            let t = rule.ternary();
            assert!(t == vec![0, 1] || t == vec![1, 0], "unexpected {t:?}");
        }
    }

    #[test]
    fn random_rule_rejects_single_item() {
        assert!(matches!(
            random_rule(1, &mut rng(0)),
            Err(Error::TooFewItems(1))
        ));
    }

    #[test]
    fn random_rule_is_deterministic() {
        assert_eq!(
            random_rule(12, &mut rng(9)).unwrap(),
            random_rule(12, &mut rng(9)).unwrap()
        );
    }

    #[test]
    fn random_rules_always_have_one_consequent() {
        let mut r = rng(3);
        for _ in 0..10_000 {
            let rule = random_rule(10, &mut r).unwrap();
            assert_eq!(rule.consequent_items().len(), 1);
            assert!(!rule.antecedent_items().is_empty());
        }
    }

    #[test]
    fn seeded_rules_come_from_transactions() {
        let db = d5();
        let mut r = rng(11);
        for _ in 0..200 {
            let rule = transaction_seeded_rule(&db, &mut r).unwrap();
            assert!(rule.is_valid());
            assert!(db.intersection_count(&rule.union_items()) >= 1);
        }
    }

    #[test]
    fn seeded_rule_can_produce_a_to_b() {
        let db = d5();
        let mut saw = false;
        for seed in 0..200 {
            let rule = transaction_seeded_rule(&db, &mut rng(seed)).unwrap();
            if rule.ternary() == vec![0, 1, 2] {
                assert_eq!(db.intersection_count(&rule.union_items()), 3);
                saw = true;
            }
        }
        assert!(saw, "never sampled {{A}} -> {{B}}");
    }

    #[test]
    fn seeded_on_single_transaction_db() {
        let db = parse_matrix_csv("A,B\n1,1\n").unwrap();
        let mut shapes = HashSet::new();
        for seed in 0..50 {
            let rule = transaction_seeded_rule(&db, &mut rng(seed)).unwrap();
            let m = evaluate_rule(&rule, &db).unwrap();
            assert_eq!(m.support, 1.0);
            assert_eq!(m.confidence, 1.0);
            shapes.insert(rule.ternary());
        }
        assert_eq!(shapes.len(), 2);
    }

    #[test]
    fn seeding_impossible_without_multi_item_transactions() {
        let db = parse_matrix_csv("A,B\n1,0\n0,1\n").unwrap();
        assert!(matches!(
            transaction_seeded_rule(&db, &mut rng(0)),
            Err(Error::SeedingImpossible)
        ));
    }

    #[test]
    fn splice_matches_worked_example() {
        let a = Rule::from_ternary(&[0, 0, 2, 1]).unwrap();
        let b = Rule::from_ternary(&[2, 1, 0, 0]).unwrap();
        assert_eq!(splice(&a, &b, 2).ternary(), vec![0, 0, 0, 0]);
        assert_eq!(splice(&b, &a, 2).ternary(), vec![2, 1, 2, 1]);
    }

    #[test]
    fn crossover_with_zero_probability_clones() {
        let a = Rule::from_ternary(&[0, 1, 2, 2]).unwrap();
        let b = Rule::from_ternary(&[2, 2, 0, 1]).unwrap();
        let (c1, c2) = crossover(&a, &b, 0.0, &mut rng(4)).unwrap();
        assert_eq!(c1, a);
        assert_eq!(c2, b);
    }

    #[test]
    fn crossover_rejects_length_mismatch() {
        let a = Rule::from_ternary(&[0, 1]).unwrap();
        let b = Rule::from_ternary(&[0, 1, 2]).unwrap();
        assert!(matches!(
            crossover(&a, &b, 0.5, &mut rng(0)),
            Err(Error::GeneLengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn mutate_identity_and_total() {
        let rule = Rule::from_ternary(&[0, 1, 2, 0, 2]).unwrap();
        let same = mutate(&rule, 0.0, MutationMode::PerGene, &mut rng(5)).unwrap();
        assert_eq!(same, rule);
        let flipped = mutate(&rule, 1.0, MutationMode::PerGene, &mut rng(5)).unwrap();
        for (old, new) in rule.genes().iter().zip(flipped.genes()) {
            assert_ne!(old, new);
        }
    }

    #[test]
    fn per_gene_mutation_rate_is_binomial() {
        let rule = Rule::from_ternary(&vec![2u8; 1000]).unwrap();
        let mut r = rng(6);
        let mut total_changed = 0usize;
        for _ in 0..100 {
            let mutated = mutate(&rule, 0.1, MutationMode::PerGene, &mut r).unwrap();
            total_changed += mutated
                .genes()
                .iter()
                .zip(rule.genes())
                .filter(|(a, b)| a != b)
                .count();
        }
        let mean = total_changed as f64 / 100.0;
        assert!((80.0..=120.0).contains(&mean), "mean changed {mean}");
    }

    #[test]
    fn per_individual_mutation_changes_at_most_one_gene() {
        let rule = Rule::from_ternary(&[0, 1, 2, 2, 0]).unwrap();
        let mut r = rng(7);
        for _ in 0..200 {
            let mutated = mutate(&rule, 1.0, MutationMode::PerIndividual, &mut r).unwrap();
            let changed = mutated
                .genes()
                .iter()
                .zip(rule.genes())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(changed, 1);
        }
    }

    #[test]
    fn repair_demotes_one_of_two_consequents() {
        let db = d5();
        let mut outcomes = HashSet::new();
        for seed in 0..100 {
            let rule = Rule::from_ternary(&[1, 1, 2]).unwrap();
            let fixed = repair(rule, &db, InitStrategy::Random, 100, &mut rng(seed)).unwrap();
            outcomes.insert(fixed.ternary());
        }
        let expected: HashSet<_> = [vec![0, 1, 2], vec![1, 0, 2]].into_iter().collect();
        assert_eq!(outcomes, expected);
    }

    #[test]
    fn repair_promotes_an_antecedent_when_no_consequent() {
        let db = d5();
        let mut outcomes = HashSet::new();
        for seed in 0..100 {
            let rule = Rule::from_ternary(&[0, 0, 2]).unwrap();
            let fixed = repair(rule, &db, InitStrategy::Random, 100, &mut rng(seed)).unwrap();
            outcomes.insert(fixed.ternary());
        }
        let expected: HashSet<_> = [vec![1, 0, 2], vec![0, 1, 2]].into_iter().collect();
        assert_eq!(outcomes, expected);
    }

    #[test]
    fn repair_handles_all_absent_input() {
        let db = d5();
        for seed in 0..50 {
            let rule = Rule::from_ternary(&[2, 2, 2]).unwrap();
            let fixed = repair(rule, &db, InitStrategy::Random, 100, &mut rng(seed)).unwrap();
            assert!(fixed.is_valid());
            assert!(db.intersection_count(&fixed.union_items()) > 0);
        }
    }

    #[test]
    fn repair_replaces_zero_support_rules() {
        // A and B never co-occur, so {A} -> {B} has zero support.
        let db = parse_matrix_csv("A,B,C\n1,0,1\n0,1,1\n1,0,0\n").unwrap();
        for strategy in [InitStrategy::Random, InitStrategy::TransactionSeeded] {
            let rule = Rule::from_ternary(&[0, 1, 2]).unwrap();
            let fixed = repair(rule, &db, strategy, 1000, &mut rng(8)).unwrap();
            assert!(db.intersection_count(&fixed.union_items()) > 0);
        }
    }

    #[test]
    fn dedup_replaces_duplicates() {
        let db = d5();
        let mut evals = 0u64;
        let rule = Rule::from_ternary(&[0, 1, 2]).unwrap();
        let member = score_rule(rule, &db, Variant::V1, &mut evals).unwrap();
        let mut population = Population {
            members: vec![member.clone(), member.clone(), member],
        };
        dedup(
            &mut population,
            &db,
            Variant::V1,
            InitStrategy::Random,
            1000,
            &mut rng(9),
            &mut evals,
        )
        .unwrap();
        assert_eq!(population.len(), 3);
        let distinct: HashSet<_> = population.members.iter().map(|m| m.rule.clone()).collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn dedup_keeps_distinct_population_unchanged() {
        let db = d5();
        let mut evals = 0u64;
        let rules = [
            Rule::from_ternary(&[0, 1, 2]).unwrap(),
            Rule::from_ternary(&[1, 0, 2]).unwrap(),
        ];
        let mut population = Population {
            members: rules
                .iter()
                .map(|r| score_rule(r.clone(), &db, Variant::V1, &mut evals).unwrap())
                .collect(),
        };
        dedup(
            &mut population,
            &db,
            Variant::V1,
            InitStrategy::Random,
            1000,
            &mut rng(10),
            &mut evals,
        )
        .unwrap();
        assert_eq!(population.rules(), rules.to_vec());
    }

    #[test]
    fn dedup_detects_exhausted_rule_space() {
        // Two items host exactly two distinct rules; a population of three
        // cannot be deduplicated.
        let db = parse_matrix_csv("A,B\n1,1\n1,1\n").unwrap();
        let mut evals = 0u64;
        let rule = Rule::from_ternary(&[0, 1]).unwrap();
        let member = score_rule(rule, &db, Variant::V1, &mut evals).unwrap();
        let mut population = Population {
            members: vec![member.clone(), member.clone(), member],
        };
        let err = dedup(
            &mut population,
            &db,
            Variant::V1,
            InitStrategy::Random,
            1000,
            &mut rng(11),
            &mut evals,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::PopulationTooLargeForRuleSpace { requested: 3 }
        ));
    }

    #[test]
    fn initial_population_is_valid_and_distinct() {
        let db = generate_synthetic(100, 8, 0.3, 21).unwrap();
        let params = VariationParams::default();
        let mut evals = 0u64;
        let population =
            initial_population(&db, 30, Variant::V1, &params, &mut rng(12), &mut evals).unwrap();
        assert_eq!(population.len(), 30);
        let distinct: HashSet<_> = population.members.iter().map(|m| m.rule.clone()).collect();
        assert_eq!(distinct.len(), 30);
        for member in &population.members {
            assert!(member.rule.is_valid());
            assert!(member.metrics.support > 0.0);
        }
        assert!(evals >= 30);
    }

    proptest! {
        #[test]
        fn crossover_children_take_genes_from_parents(seed in 0u64..300) {
            let mut r = rng(seed);
            let a = random_rule(9, &mut r).unwrap();
            let b = random_rule(9, &mut r).unwrap();
            let (c1, c2) = crossover(&a, &b, 1.0, &mut r).unwrap();
            prop_assert_eq!(c1.len(), 9);
            prop_assert_eq!(c2.len(), 9);
            for i in 0..9 {
                prop_assert!(c1.genes()[i] == a.genes()[i] || c1.genes()[i] == b.genes()[i]);
                prop_assert!(c2.genes()[i] == a.genes()[i] || c2.genes()[i] == b.genes()[i]);
            }
        }

        #[test]
        fn operators_are_deterministic(seed in 0u64..100) {
            let a = random_rule(7, &mut rng(seed)).unwrap();
            let b = random_rule(7, &mut rng(seed ^ 1)).unwrap();
            let first = crossover(&a, &b, 0.8, &mut rng(seed ^ 2)).unwrap();
            let second = crossover(&a, &b, 0.8, &mut rng(seed ^ 2)).unwrap();
            prop_assert_eq!(first, second);
            let m1 = mutate(&a, 0.3, MutationMode::PerGene, &mut rng(seed ^ 3)).unwrap();
            let m2 = mutate(&a, 0.3, MutationMode::PerGene, &mut rng(seed ^ 3)).unwrap();
            prop_assert_eq!(m1, m2);
        }
    }
}
