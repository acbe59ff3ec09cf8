//! Brute-force ground truth for small instances.
//!
//! Everything here recomputes from scratch over materialized transaction
//! rows: no bitset intersection, no shared dominance helper. Agreement with
//! the main evaluation path is therefore evidence rather than tautology.

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};
use crate::rule::{objective_vector, Gene, ObjectiveVector, Rule, RuleMetrics, Variant};

/// Largest item count enumerable without an antecedent cap.
const UNCAPPED_ITEM_LIMIT: usize = 20;

/// Transaction rows as sorted item-index vectors.
struct RowScanner {
    rows: Vec<Vec<usize>>,
}

impl RowScanner {
    fn new(db: &TransactionDatabase) -> Self {
        let rows = (0..db.n_transactions())
            .map(|t| db.transaction_items(t))
            .collect();
        RowScanner { rows }
    }

    fn count_containing(&self, items: &[usize]) -> usize {
        self.rows
            .iter()
            .filter(|row| items.iter().all(|i| row.binary_search(i).is_ok()))
            .count()
    }
}

fn evaluate_with_scanner(rule: &Rule, scanner: &RowScanner) -> Result<RuleMetrics> {
    if !rule.is_valid() {
        return Err(Error::InvalidRule);
    }
    let antecedent = rule.antecedent_items();
    let consequent = rule.consequent_item().expect("valid rule has a consequent");
    let union = rule.union_items();

    let n_a = scanner.count_containing(&antecedent);
    if n_a == 0 {
        return Err(Error::UndefinedConfidence);
    }
    let n_ab = scanner.count_containing(&union);
    if n_ab == 0 {
        return Err(Error::InvalidRule);
    }
    let n_b = scanner.count_containing(&[consequent]);
    let n = scanner.rows.len();

    let support = n_ab as f64 / n as f64;
    let confidence = n_ab as f64 / n_a as f64;
    let support_b = n_b as f64 / n as f64;
    let lift = confidence / support_b;
    let interestingness = confidence * (n_ab as f64 / n_b as f64) * (1.0 - support);

    Ok(RuleMetrics {
        support,
        confidence,
        lift,
        interestingness,
    })
}

/// Row-scan twin of `rule::evaluate_rule`, same contract.
pub fn naive_evaluate(rule: &Rule, db: &TransactionDatabase) -> Result<RuleMetrics> {
    if let Some(&bad) = rule.union_items().iter().find(|&&i| i >= db.n_items()) {
        return Err(Error::ItemOutOfRange {
            index: bad,
            n_items: db.n_items(),
        });
    }
    evaluate_with_scanner(rule, &RowScanner::new(db))
}

/// Lexicographic k-combinations of `0..n`.
struct Combinations {
    indices: Vec<usize>,
    n: usize,
    started: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            indices: (0..k).collect(),
            n,
            started: false,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.indices.len();
        if k > self.n {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.indices.clone());
        }
        // Advance the rightmost index that still has room.
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if self.indices[i] < self.n - (k - i) {
                self.indices[i] += 1;
                for j in i + 1..k {
                    self.indices[j] = self.indices[j - 1] + 1;
                }
                return Some(self.indices.clone());
            }
        }
    }
}

/// All structurally valid rules: every consequent choice crossed with every
/// non-empty antecedent subset of the remaining items (up to `cap`).
pub(crate) fn structural_rules(
    m: usize,
    cap: Option<usize>,
) -> impl Iterator<Item = Rule> {
    let max_antecedent = cap.unwrap_or(m.saturating_sub(1)).min(m.saturating_sub(1));
    (0..m).flat_map(move |consequent| {
        let others: Vec<usize> = (0..m).filter(|&i| i != consequent).collect();
        (1..=max_antecedent).flat_map(move |size| {
            let others = others.clone();
            Combinations::new(others.len(), size).map(move |combo| {
                let mut genes = vec![Gene::Absent; m];
                genes[consequent] = Gene::Consequent;
                for &pos in &combo {
                    genes[others[pos]] = Gene::Antecedent;
                }
                Rule::new(genes)
            })
        })
    })
}

/// Streams every valid rule of the instance with positive support.
pub fn enumerate_rules<'a>(
    db: &'a TransactionDatabase,
    max_antecedent: Option<usize>,
) -> Result<impl Iterator<Item = Rule> + 'a> {
    let m = db.n_items();
    if max_antecedent.is_none() && m > UNCAPPED_ITEM_LIMIT {
        return Err(Error::InstanceTooLarge { n_items: m });
    }
    let scanner = RowScanner::new(db);
    Ok(structural_rules(m, max_antecedent)
        .filter(move |rule| scanner.count_containing(&rule.union_items()) > 0))
}

/// Exact Pareto front of an enumerable instance.
#[derive(Clone, Debug)]
pub struct ExactFront {
    pub rules: Vec<Rule>,
    pub objectives: Vec<ObjectiveVector>,
    pub variant: Variant,
}

impl ExactFront {
    pub fn objective_values(&self) -> Vec<[f64; 3]> {
        self.objectives.iter().map(|o| o.values()).collect()
    }
}

// Oracle-local dominance, maximization orientation.
fn dominates_max(a: &[f64; 3], b: &[f64; 3]) -> bool {
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

/// Enumerates all rules and keeps the non-dominated ones. Rules whose
/// objective vectors tie are all kept.
pub fn exact_pareto_front(
    db: &TransactionDatabase,
    variant: Variant,
    max_antecedent: Option<usize>,
) -> Result<ExactFront> {
    let m = db.n_items();
    if max_antecedent.is_none() && m > UNCAPPED_ITEM_LIMIT {
        return Err(Error::InstanceTooLarge { n_items: m });
    }
    let scanner = RowScanner::new(db);
    let mut evaluated: Vec<(Rule, [f64; 3])> = Vec::new();
    for rule in structural_rules(m, max_antecedent) {
        match evaluate_with_scanner(&rule, &scanner) {
            Ok(metrics) => {
                let obj = objective_vector(&metrics, variant).values();
                evaluated.push((rule, obj));
            }
            // Zero-support rules are simply not part of the instance.
            Err(Error::InvalidRule) | Err(Error::UndefinedConfidence) => {}
            Err(other) => return Err(other),
        }
    }

    let mut rules = Vec::new();
    let mut objectives = Vec::new();
    for (i, (rule, obj)) in evaluated.iter().enumerate() {
        let dominated = evaluated
            .iter()
            .enumerate()
            .any(|(j, (_, other))| j != i && dominates_max(other, obj));
        if !dominated {
            rules.push(rule.clone());
            objectives.push(ObjectiveVector::new(*obj, variant));
        }
    }
    Ok(ExactFront {
        rules,
        objectives,
        variant,
    })
}
