//! Rule chromosomes, their two encodings, and the four rule-strength metrics.
//!
//! A rule is one gene per item: the item sits in the antecedent, is the
//! consequent, or is absent. The equivalent packed form uses two bits per
//! item (`11` antecedent, `10` consequent, `00`/`01` absent).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::TransactionDatabase;
use crate::error::{Error, Result};

/// Per-item role in a rule. Ternary symbols are 0 = antecedent,
/// 1 = consequent, 2 = absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gene {
    Antecedent,
    Consequent,
    Absent,
}

impl Gene {
    pub fn from_symbol(symbol: u8) -> Result<Gene> {
        match symbol {
            0 => Ok(Gene::Antecedent),
            1 => Ok(Gene::Consequent),
            2 => Ok(Gene::Absent),
            other => Err(Error::InvalidParameter(format!(
                "ternary symbol {other} is not 0, 1, or 2"
            ))),
        }
    }

    pub fn symbol(self) -> u8 {
        match self {
            Gene::Antecedent => 0,
            Gene::Consequent => 1,
            Gene::Absent => 2,
        }
    }
}

/// One chromosome = one candidate rule over all items.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    genes: Vec<Gene>,
}

impl Rule {
    pub fn new(genes: Vec<Gene>) -> Self {
        Rule { genes }
    }

    pub fn from_ternary(symbols: &[u8]) -> Result<Self> {
        let genes = symbols
            .iter()
            .map(|&s| Gene::from_symbol(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Rule::new(genes))
    }

    pub fn ternary(&self) -> Vec<u8> {
        self.genes.iter().map(|g| g.symbol()).collect()
    }

    pub fn genes(&self) -> &[Gene] {
        &self.genes
    }

    pub(crate) fn genes_mut(&mut self) -> &mut [Gene] {
        &mut self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn antecedent_items(&self) -> Vec<usize> {
        self.positions(Gene::Antecedent)
    }

    pub fn consequent_items(&self) -> Vec<usize> {
        self.positions(Gene::Consequent)
    }

    /// The consequent item of a valid rule.
    pub fn consequent_item(&self) -> Option<usize> {
        self.genes.iter().position(|&g| g == Gene::Consequent)
    }

    /// Sorted indices of all items mentioned by the rule.
    pub fn union_items(&self) -> Vec<usize> {
        self.genes
            .iter()
            .enumerate()
            .filter(|(_, &g)| g != Gene::Absent)
            .map(|(i, _)| i)
            .collect()
    }

    fn positions(&self, wanted: Gene) -> Vec<usize> {
        self.genes
            .iter()
            .enumerate()
            .filter(|(_, &g)| g == wanted)
            .map(|(i, _)| i)
            .collect()
    }

    /// Shape validity: exactly one consequent and at least one antecedent.
    pub fn is_valid(&self) -> bool {
        let mut consequents = 0;
        let mut antecedents = 0;
        for &g in &self.genes {
            match g {
                Gene::Consequent => consequents += 1,
                Gene::Antecedent => antecedents += 1,
                Gene::Absent => {}
            }
        }
        consequents == 1 && antecedents >= 1
    }
}

/// Packs a rule into its two-bits-per-item string form.
pub fn encode_bits(rule: &Rule) -> String {
    let mut out = String::with_capacity(rule.len() * 2);
    for &g in rule.genes() {
        out.push_str(match g {
            Gene::Antecedent => "11",
            Gene::Consequent => "10",
            Gene::Absent => "00",
        });
    }
    out
}

/// Unpacks a two-bits-per-item string; `01` also decodes to absent.
pub fn decode_bits(bits: &str) -> Result<Rule> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::MalformedEncoding(format!(
            "odd length {}",
            bits.len()
        )));
    }
    let chars: Vec<char> = bits.chars().collect();
    if let Some(&bad) = chars.iter().find(|&&c| c != '0' && c != '1') {
        return Err(Error::MalformedEncoding(format!("unexpected char {bad:?}")));
    }
    let genes = chars
        .chunks(2)
        .map(|pair| match (pair[0], pair[1]) {
            ('1', '1') => Gene::Antecedent,
            ('1', '0') => Gene::Consequent,
            _ => Gene::Absent,
        })
        .collect();
    Ok(Rule::new(genes))
}

/// The four rule-strength measures, all as fractions of transaction counts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleMetrics {
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    pub interestingness: f64,
}

/// Which three measures a run optimizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// support, confidence, lift
    #[serde(rename = "v1")]
    V1,
    /// confidence, lift, interestingness
    #[serde(rename = "v2")]
    V2,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::V1 => "v1",
            Variant::V2 => "v2",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v1" => Ok(Variant::V1),
            "v2" => Ok(Variant::V2),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant {other:?} (expected v1 or v2)"
            ))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Three objective values under maximization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObjectiveVector {
    values: [f64; 3],
    variant: Variant,
}

impl ObjectiveVector {
    pub fn new(values: [f64; 3], variant: Variant) -> Self {
        ObjectiveVector { values, variant }
    }

    pub fn values(&self) -> [f64; 3] {
        self.values
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Negated values for the internal minimization routines.
    pub(crate) fn min_values(&self) -> [f64; 3] {
        [-self.values[0], -self.values[1], -self.values[2]]
    }
}

/// Computes the four metrics of a valid rule against a database.
///
/// Counts are taken exactly as integers and divided once, so the same rule
/// always yields bit-identical doubles.
pub fn evaluate_rule(rule: &Rule, db: &TransactionDatabase) -> Result<RuleMetrics> {
    if !rule.is_valid() {
        return Err(Error::InvalidRule);
    }
    let antecedent = rule.antecedent_items();
    let consequent = rule.consequent_item().expect("valid rule has a consequent");
    if let Some(&bad) = antecedent.iter().find(|&&i| i >= db.n_items()) {
        return Err(Error::ItemOutOfRange {
            index: bad,
            n_items: db.n_items(),
        });
    }
    if consequent >= db.n_items() {
        return Err(Error::ItemOutOfRange {
            index: consequent,
            n_items: db.n_items(),
        });
    }

    let (n_a, n_ab) = db.intersection_count_with(&antecedent, consequent);
    if n_a == 0 {
        return Err(Error::UndefinedConfidence);
    }
    if n_ab == 0 {
        return Err(Error::InvalidRule);
    }
    let n_b = db.item_count(consequent)?;
    let n = db.n_transactions();

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

/// Projects metrics onto the three objectives of a variant.
pub fn objective_vector(metrics: &RuleMetrics, variant: Variant) -> ObjectiveVector {
    let values = match variant {
        Variant::V1 => [metrics.support, metrics.confidence, metrics.lift],
        Variant::V2 => [metrics.confidence, metrics.lift, metrics.interestingness],
    };
    debug_assert!(values.iter().all(|v| v.is_finite()));
    ObjectiveVector::new(values, variant)
}

/// JSON-facing view of a rule and its metrics, labels sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleRecord {
    pub antecedent: Vec<String>,
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    pub interestingness: f64,
}

impl RuleRecord {
    pub fn new(rule: &Rule, metrics: &RuleMetrics, item_names: &[String]) -> Self {
        let mut antecedent: Vec<String> = rule
            .antecedent_items()
            .iter()
            .map(|&i| item_names[i].clone())
            .collect();
        antecedent.sort();
        let consequent = rule
            .consequent_items()
            .iter()
            .map(|&i| item_names[i].clone())
            .collect();
        RuleRecord {
            antecedent,
            consequent,
            support: metrics.support,
            confidence: metrics.confidence,
            lift: metrics.lift,
            interestingness: metrics.interestingness,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rule record serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_synthetic, parse_matrix_csv};
    use proptest::prelude::*;

    fn d5() -> TransactionDatabase {
        parse_matrix_csv("A,B,C\n1,1,1\n1,1,0\n1,0,1\n0,1,1\n1,1,1\n").unwrap()
    }

    #[test]
    fn encode_matches_worked_example() {
        let rule = Rule::from_ternary(&[0, 2, 0, 0, 1]).unwrap();
        assert_eq!(encode_bits(&rule), "1100111110");
    }

    #[test]
    fn decode_01_is_absent() {
        let rule = decode_bits("01").unwrap();
        assert_eq!(rule.genes(), &[Gene::Absent]);
    }

    #[test]
    fn decode_rejects_odd_and_nonbinary() {
        assert!(matches!(
            decode_bits("110"),
            Err(Error::MalformedEncoding(_))
        ));
        assert!(matches!(
            decode_bits("1x"),
            Err(Error::MalformedEncoding(_))
        ));
    }

    #[test]
    fn d5_rule_a_implies_b() {
        let db = d5();
        let rule = Rule::from_ternary(&[0, 1, 2]).unwrap();
        let m = evaluate_rule(&rule, &db).unwrap();
        assert_eq!(m.support, 0.6);
        assert_eq!(m.confidence, 0.75);
        assert_eq!(m.lift, 0.75 / 0.8);
        assert!((m.interestingness - 0.225).abs() < 1e-15);
    }

    #[test]
    fn consequent_in_every_transaction_makes_lift_equal_confidence() {
        // Item B present in all transactions.
        let db = parse_matrix_csv("A,B\n1,1\n0,1\n1,1\n").unwrap();
        let rule = Rule::from_ternary(&[0, 1]).unwrap();
        let m = evaluate_rule(&rule, &db).unwrap();
        assert_eq!(m.lift, m.confidence);
    }

    #[test]
    fn full_support_rule_has_zero_interestingness() {
        let db = parse_matrix_csv("A,B\n1,1\n1,1\n").unwrap();
        let rule = Rule::from_ternary(&[0, 1]).unwrap();
        let m = evaluate_rule(&rule, &db).unwrap();
        assert_eq!(m.support, 1.0);
        assert_eq!(m.interestingness, 0.0);
    }

    #[test]
    fn zero_support_antecedent_is_undefined_confidence() {
        // Item A never occurs.
        let db = parse_matrix_csv("A,B,C\n0,1,1\n0,1,0\n").unwrap();
        let rule = Rule::from_ternary(&[0, 1, 2]).unwrap();
        assert!(matches!(
            evaluate_rule(&rule, &db),
            Err(Error::UndefinedConfidence)
        ));
    }

    #[test]
    fn zero_joint_support_is_invalid() {
        let db = parse_matrix_csv("A,B\n1,0\n0,1\n").unwrap();
        let rule = Rule::from_ternary(&[0, 1]).unwrap();
        assert!(matches!(evaluate_rule(&rule, &db), Err(Error::InvalidRule)));
    }

    #[test]
    fn invalid_shapes_rejected() {
        let db = d5();
        for symbols in [&[0, 0, 2][..], &[1, 1, 0][..], &[2, 2, 1][..]] {
            let rule = Rule::from_ternary(symbols).unwrap();
            assert!(matches!(evaluate_rule(&rule, &db), Err(Error::InvalidRule)));
        }
    }

    #[test]
    fn objective_projection_per_variant() {
        let db = d5();
        let rule = Rule::from_ternary(&[0, 1, 2]).unwrap();
        let m = evaluate_rule(&rule, &db).unwrap();
        let v1 = objective_vector(&m, Variant::V1).values();
        assert_eq!(v1, [0.6, 0.75, 0.9375]);
        let v2 = objective_vector(&m, Variant::V2).values();
        assert_eq!(v2[0], 0.75);
        assert_eq!(v2[1], 0.9375);
        assert!((v2[2] - 0.225).abs() < 1e-15);
    }

    #[test]
    fn zero_metrics_project_to_zero() {
        let m = RuleMetrics {
            support: 0.0,
            confidence: 0.0,
            lift: 0.0,
            interestingness: 0.0,
        };
        assert_eq!(objective_vector(&m, Variant::V1).values(), [0.0; 3]);
        assert_eq!(objective_vector(&m, Variant::V2).values(), [0.0; 3]);
    }

    #[test]
    fn rule_record_sorts_labels() {
        let names = vec!["zeta".into(), "alpha".into(), "mid".into()];
        let rule = Rule::from_ternary(&[0, 0, 1]).unwrap();
        let m = RuleMetrics {
            support: 0.5,
            confidence: 0.5,
            lift: 1.0,
            interestingness: 0.1,
        };
        let record = RuleRecord::new(&rule, &m, &names);
        assert_eq!(record.antecedent, ["alpha", "zeta"]);
        assert_eq!(record.consequent, ["mid"]);
        let json = record.to_json();
        assert!(json.starts_with("{\"antecedent\":[\"alpha\",\"zeta\"],\"consequent\":[\"mid\"]"));
    }

    fn arb_rule(m: usize) -> impl Strategy<Value = Rule> {
        proptest::collection::vec(0u8..3, m)
            .prop_map(|symbols| Rule::from_ternary(&symbols).unwrap())
    }

    fn arb_valid_rule(m: usize) -> impl Strategy<Value = Rule> {
        (proptest::collection::vec(proptest::bool::ANY, m), 0..m).prop_map(
            move |(antecedent_mask, consequent)| {
                let mut symbols: Vec<u8> = antecedent_mask
                    .iter()
                    .map(|&a| if a { 0 } else { 2 })
                    .collect();
                symbols[consequent] = 1;
                if !symbols.contains(&0) {
                    symbols[(consequent + 1) % m] = 0;
                }
                Rule::from_ternary(&symbols).unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn bit_roundtrip(rule in arb_rule(8)) {
            prop_assert_eq!(decode_bits(&encode_bits(&rule)).unwrap(), rule);
        }

        #[test]
        fn metric_identities(seed in 0u64..300, rule in arb_valid_rule(6)) {
            let db = generate_synthetic(50, 6, 0.5, seed).unwrap();
            if let Ok(m) = evaluate_rule(&rule, &db) {
                let consequent = rule.consequent_item().unwrap();
                let support_b = db.item_count(consequent).unwrap() as f64
                    / db.n_transactions() as f64;
                prop_assert!((m.lift * support_b - m.confidence).abs() <= 1e-12);
                let identity = m.confidence * (m.support / support_b) * (1.0 - m.support);
                prop_assert!((m.interestingness - identity).abs() <= 1e-12);
                prop_assert!(m.confidence >= m.support);
                prop_assert!((0.0..=1.0).contains(&m.interestingness));
            }
        }
    }
}
