//! Binary transaction databases stored as per-item bitset columns.
//!
//! Every metric in this crate reduces to "how many transactions contain all
//! items of some set", so the database keeps one bitset per item and answers
//! those queries with an AND-popcount sweep over 64-bit blocks.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// On-disk shapes accepted by [`load_transactions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DatasetFormat {
    /// Header row of item names, then rows of literal `0`/`1` cells.
    #[serde(rename = "matrix-csv")]
    MatrixCsv,
    /// One transaction per line: comma-separated item labels.
    #[serde(rename = "basket")]
    Basket,
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix-csv" => Ok(DatasetFormat::MatrixCsv),
            "basket" => Ok(DatasetFormat::Basket),
            other => Err(Error::InvalidParameter(format!(
                "unknown dataset format {other:?} (expected matrix-csv or basket)"
            ))),
        }
    }
}

impl fmt::Display for DatasetFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetFormat::MatrixCsv => f.write_str("matrix-csv"),
            DatasetFormat::Basket => f.write_str("basket"),
        }
    }
}

/// Fixed-length bitset; bits beyond `len` are kept zero.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitColumn {
    blocks: Vec<u64>,
    len: usize,
}

impl BitColumn {
    fn new(len: usize) -> Self {
        BitColumn {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    fn set(&mut self, bit: usize) {
        debug_assert!(bit < self.len);
        self.blocks[bit / 64] |= 1 << (bit % 64);
    }

    fn get(&self, bit: usize) -> bool {
        debug_assert!(bit < self.len);
        self.blocks[bit / 64] & (1 << (bit % 64)) != 0
    }

    fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }
}

/// Sorted set of item indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemSet {
    members: Vec<usize>,
}

impl ItemSet {
    /// Builds a set from arbitrary indices; duplicates collapse.
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        ItemSet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }
}

/// Immutable column-indexed binary transaction database.
#[derive(Clone, Debug)]
pub struct TransactionDatabase {
    item_names: Vec<String>,
    columns: Vec<BitColumn>,
    column_counts: Vec<usize>,
    transaction_sizes: Vec<u32>,
    /// Indices of transactions with at least two items, for seeded initialization.
    multi_item_transactions: Vec<u32>,
    n_transactions: usize,
}

impl TransactionDatabase {
    fn from_columns(item_names: Vec<String>, columns: Vec<BitColumn>, n: usize) -> Self {
        let column_counts = columns.iter().map(BitColumn::count_ones).collect();
        let mut transaction_sizes = vec![0u32; n];
        for col in &columns {
            for (t, size) in transaction_sizes.iter_mut().enumerate() {
                if col.get(t) {
                    *size += 1;
                }
            }
        }
        let multi_item_transactions = (0..n)
            .filter(|&t| transaction_sizes[t] >= 2)
            .map(|t| t as u32)
            .collect();
        TransactionDatabase {
            item_names,
            columns,
            column_counts,
            transaction_sizes,
            multi_item_transactions,
            n_transactions: n,
        }
    }

    pub fn n_transactions(&self) -> usize {
        self.n_transactions
    }

    pub fn n_items(&self) -> usize {
        self.item_names.len()
    }

    pub fn item_names(&self) -> &[String] {
        &self.item_names
    }

    /// Transactions containing item `index` (column popcount).
    pub fn item_count(&self, index: usize) -> Result<usize> {
        self.check_index(index)?;
        Ok(self.column_counts[index])
    }

    /// Number of items in transaction `t`.
    pub fn transaction_len(&self, t: usize) -> usize {
        self.transaction_sizes[t] as usize
    }

    /// Item indices present in transaction `t`, ascending.
    pub fn transaction_items(&self, t: usize) -> Vec<usize> {
        (0..self.n_items())
            .filter(|&i| self.columns[i].get(t))
            .collect()
    }

    pub(crate) fn multi_item_transactions(&self) -> &[u32] {
        &self.multi_item_transactions
    }

    /// Mean of (transaction size / number of items); the sparsity signal that
    /// switches initialization to transaction seeding.
    pub fn mean_transaction_density(&self) -> f64 {
        let total: u64 = self.transaction_sizes.iter().map(|&s| s as u64).sum();
        total as f64 / (self.n_transactions as f64 * self.n_items() as f64)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n_items() {
            return Err(Error::ItemOutOfRange {
                index,
                n_items: self.n_items(),
            });
        }
        Ok(())
    }

    /// Transactions containing every item of `s`, by AND-popcount over columns.
    pub fn support_count(&self, s: &ItemSet) -> Result<usize> {
        if s.is_empty() {
            return Err(Error::EmptyItemSet);
        }
        for &i in s.members() {
            self.check_index(i)?;
        }
        Ok(self.intersection_count(s.members()))
    }

    /// AND-popcount over the given columns. Caller guarantees indices valid
    /// and non-empty.
    pub(crate) fn intersection_count(&self, items: &[usize]) -> usize {
        debug_assert!(!items.is_empty());
        let first = &self.columns[items[0]];
        let mut count = 0usize;
        for (block_idx, &block) in first.blocks.iter().enumerate() {
            let mut acc = block;
            for &item in &items[1..] {
                acc &= self.columns[item].blocks[block_idx];
            }
            count += acc.count_ones() as usize;
        }
        count
    }

    /// One-pass (count(base), count(base ∪ {extra})) over the columns.
    pub(crate) fn intersection_count_with(&self, base: &[usize], extra: usize) -> (usize, usize) {
        debug_assert!(!base.is_empty());
        let first = &self.columns[base[0]];
        let mut count_base = 0usize;
        let mut count_all = 0usize;
        for (block_idx, &block) in first.blocks.iter().enumerate() {
            let mut acc = block;
            for &item in &base[1..] {
                acc &= self.columns[item].blocks[block_idx];
            }
            count_base += acc.count_ones() as usize;
            count_all += (acc & self.columns[extra].blocks[block_idx]).count_ones() as usize;
        }
        (count_base, count_all)
    }

    /// Renders the database back into the matrix-csv shape it loads from.
    pub fn to_matrix_csv(&self) -> String {
        let mut out = self.item_names.join(",");
        out.push('\n');
        for t in 0..self.n_transactions {
            let mut first = true;
            for col in &self.columns {
                if !first {
                    out.push(',');
                }
                out.push(if col.get(t) { '1' } else { '0' });
                first = false;
            }
            out.push('\n');
        }
        out
    }
}

/// Loads a database from disk in the given format.
pub fn load_transactions(path: &Path, format: DatasetFormat) -> Result<TransactionDatabase> {
    let text = std::fs::read_to_string(path)?;
    match format {
        DatasetFormat::MatrixCsv => parse_matrix_csv(&text),
        DatasetFormat::Basket => parse_basket(&text),
    }
}

/// Parses the matrix-csv shape: header of item names, rows of `0`/`1` cells.
pub fn parse_matrix_csv(text: &str) -> Result<TransactionDatabase> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines.next().ok_or(Error::EmptyDataset)?;
    let item_names: Vec<String> = header.split(',').map(str::to_owned).collect();
    for (col, name) in item_names.iter().enumerate() {
        if name.is_empty() {
            return Err(Error::EmptyItemName { col: col + 1 });
        }
        if item_names[..col].contains(name) {
            return Err(Error::DuplicateItem { name: name.clone() });
        }
    }
    let m = item_names.len();

    let rows: Vec<&str> = lines.collect();
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }

    let mut columns = vec![BitColumn::new(n); m];
    for (t, row) in rows.iter().enumerate() {
        let line_no = t + 2; // 1-based file line; header is line 1
        let mut cells = 0usize;
        let mut row_has_item = false;
        for (col, cell) in row.split(',').enumerate() {
            cells += 1;
            if col >= m {
                continue; // counted; reported as RaggedRow below
            }
            match cell {
                "0" => {}
                "1" => {
                    columns[col].set(t);
                    row_has_item = true;
                }
                _ => {
                    return Err(Error::MalformedCell {
                        row: line_no,
                        col: col + 1,
                    })
                }
            }
        }
        if cells != m {
            return Err(Error::RaggedRow {
                row: line_no,
                expected: m,
                found: cells,
            });
        }
        if !row_has_item {
            return Err(Error::EmptyTransaction { line: line_no });
        }
    }

    Ok(TransactionDatabase::from_columns(item_names, columns, n))
}

/// Parses the basket shape: one transaction per line, comma-separated labels,
/// surrounding whitespace trimmed. Item indices follow first appearance.
pub fn parse_basket(text: &str) -> Result<TransactionDatabase> {
    let mut item_names: Vec<String> = Vec::new();
    let mut transactions: Vec<Vec<usize>> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut items: Vec<usize> = Vec::new();
        for token in raw_line.split(',') {
            let label = token.trim();
            if label.is_empty() {
                continue;
            }
            let index = match item_names.iter().position(|n| n == label) {
                Some(i) => i,
                None => {
                    item_names.push(label.to_owned());
                    item_names.len() - 1
                }
            };
            if !items.contains(&index) {
                items.push(index);
            }
        }
        if items.is_empty() {
            return Err(Error::EmptyTransaction { line: line_no });
        }
        transactions.push(items);
    }

    let n = transactions.len();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut columns = vec![BitColumn::new(n); item_names.len()];
    for (t, items) in transactions.iter().enumerate() {
        for &i in items {
            columns[i].set(t);
        }
    }
    Ok(TransactionDatabase::from_columns(item_names, columns, n))
}

/// Generates a random database: each cell is 1 with probability `density`,
/// and any all-zero row gets one uniformly random item. Deterministic per seed.
pub fn generate_synthetic(
    n_transactions: usize,
    n_items: usize,
    density: f64,
    seed: u64,
) -> Result<TransactionDatabase> {
    if n_transactions == 0 || n_items == 0 {
        return Err(Error::EmptyDataset);
    }
    if !(density > 0.0 && density < 1.0) {
        return Err(Error::InvalidDensity(density));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let item_names = (0..n_items).map(|i| format!("item{i}")).collect();
    let mut columns = vec![BitColumn::new(n_transactions); n_items];
    for t in 0..n_transactions {
        let mut row_has_item = false;
        for col in columns.iter_mut() {
            if rng.gen_bool(density) {
                col.set(t);
                row_has_item = true;
            }
        }
        if !row_has_item {
            columns[rng.gen_range(0..n_items)].set(t);
        }
    }
    Ok(TransactionDatabase::from_columns(
        item_names,
        columns,
        n_transactions,
    ))
}
