//! The trie/matrix correspondence used to count tries with a fixed symbol
//! distribution.
//!
//! A trie with `n` nodes over `sigma` symbols maps to the `sigma x n` binary
//! matrix whose `j`-th column is the out-label set of the `j`-th node in
//! pre-order. A matrix is in the image of that map exactly when the prefix
//! sums of its column degrees minus one form a Łukasiewicz path, and every
//! matrix has exactly one cyclic column rotation with that property. Hence
//! the number of tries is the number of matrices divided by `n`.

mod count;
mod enumerate;

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::trie::Trie;

pub use count::{binomial, count_all_tries, count_tries_formula, feasible_distributions, matrix_space_size};
pub use enumerate::{enumerate_matrices, enumerate_tries, MatrixEnumerator, TrieEnumerator, DEFAULT_CAP};

const WORD: usize = 64;

/// A `sigma x n` binary matrix with row labels, stored row-major in packed
/// 64-bit words (bit `j` of a row is bit `j % 64` of word `j / 64`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeMatrix {
    n: usize,
    symbols: Vec<u8>,
    rows: Vec<Vec<u64>>,
    row_counts: Vec<u64>,
}

impl DegreeMatrix {
    /// An all-zero matrix.
    pub fn zeros(symbols: Vec<u8>, n: usize) -> Self {
        let words = n.div_ceil(WORD);
        let sigma = symbols.len();
        DegreeMatrix {
            n,
            symbols,
            rows: vec![vec![0; words]; sigma],
            row_counts: vec![0; sigma],
        }
    }

    /// Builds a matrix from rows of booleans.
    pub fn from_rows(symbols: Vec<u8>, rows: &[Vec<bool>]) -> Result<Self> {
        if symbols.len() != rows.len() {
            return Err(Error::InvalidMatrix("one row per symbol required".into()));
        }
        if symbols.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMatrix("row symbols not strictly increasing".into()));
        }
        let n = rows.first().map_or(1, Vec::len);
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix("rows must have equal positive length".into()));
        }
        let mut m = DegreeMatrix::zeros(symbols, n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                if bit {
                    m.set(i, j);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from per-column sets of row indices.
    pub fn from_column_sets(symbols: Vec<u8>, columns: &[Vec<usize>]) -> Result<Self> {
        let mut m = DegreeMatrix::zeros(symbols, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for &i in col {
                if i >= m.sigma() {
                    return Err(Error::InvalidMatrix(format!("row {i} out of range")));
                }
                if !m.get(i, j) {
                    m.set(i, j);
                }
            }
        }
        Ok(m)
    }

    fn set(&mut self, i: usize, j: usize) {
        self.rows[i][j / WORD] |= 1 << (j % WORD);
        self.row_counts[i] += 1;
    }

    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row labels in increasing order.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Ones per row.
    pub fn row_counts(&self) -> &[u64] {
        &self.row_counts
    }

    pub fn ones(&self) -> u64 {
        self.row_counts.iter().sum()
    }

    /// Entry at row `i`, column `j` (both 0-based).
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i][j / WORD] >> (j % WORD)) & 1 == 1
    }

    /// Row indices set in column `j`.
    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.sigma()).filter(|&i| self.get(i, j)).collect()
    }

    /// Symbols set in column `j`, increasing.
    pub fn column_labels(&self, j: usize) -> Vec<u8> {
        (0..self.sigma()).filter(|&i| self.get(i, j)).map(|i| self.symbols[i]).collect()
    }

    pub fn column_ones(&self, j: usize) -> usize {
        (0..self.sigma()).filter(|&i| self.get(i, j)).count()
    }

    /// `D[j] = ones(column j) - 1`.
    pub fn d_sequence(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.column_ones(j) as i64 - 1).collect()
    }

    /// Prefix sums of [`d_sequence`](Self::d_sequence).
    pub fn l_sequence(&self) -> Vec<i64> {
        self.d_sequence()
            .into_iter()
            .scan(0i64, |acc, d| {
                *acc += d;
                Some(*acc)
            })
            .collect()
    }

    /// Cyclic rotation moving the last `r` columns to the front.
    pub fn rotate(&self, r: usize) -> DegreeMatrix {
        let shift = r % self.n;
        if shift == 0 {
            return self.clone();
        }
        let mut out = DegreeMatrix::zeros(self.symbols.clone(), self.n);
        for i in 0..self.sigma() {
            for j in 0..self.n {
                if self.get(i, (j + self.n - shift) % self.n) {
                    out.set(i, j);
                }
            }
        }
        out
    }

    /// The unique rotation index whose L sequence is a Łukasiewicz path.
    ///
    /// The matrix must have exactly `n - 1` ones.
    pub fn canonical_rotation(&self) -> Result<usize> {
        if self.ones() + 1 != self.n as u64 {
            return Err(Error::InvalidMatrix("matrix must have exactly n - 1 ones".into()));
        }
        // Rotating right by r starts the sequence at old column n - r. The
        // valid start is just after the first position where L attains its
        // minimum.
        let l = self.l_sequence();
        let min = *l.iter().min().expect("n >= 1");
        let first_min = l.iter().position(|&v| v == min).expect("minimum exists");
        let start = (first_min + 1) % self.n;
        Ok((self.n - start) % self.n)
    }

    /// Text dump: one line of `0`/`1` per row, then `D:` and `L:` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.sigma() {
            for j in 0..self.n {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        let join = |v: Vec<i64>| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        let _ = writeln!(s, "D: {}", join(self.d_sequence()));
        let _ = writeln!(s, "L: {}", join(self.l_sequence()));
        s
    }

    /// Parses the text dump, labelling rows with the given symbols. `D:` and
    /// `L:` lines, if present, must agree with the matrix.
    pub fn from_text(text: &str, symbols: Vec<u8>) -> Result<Self> {
        let mut rows = Vec::new();
        let mut d_line = None;
        let mut l_line = None;
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("D:") {
                d_line = Some(parse_ints(rest)?);
            } else if let Some(rest) = line.strip_prefix("L:") {
                l_line = Some(parse_ints(rest)?);
            } else if !line.is_empty() {
                let row = line
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::InvalidMatrix(format!("unexpected character {ch:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()?;
                rows.push(row);
            }
        }
        let m = if rows.is_empty() {
            let n = d_line.as_ref().map_or(1, Vec::len);
            DegreeMatrix::zeros(symbols, n)
        } else {
            DegreeMatrix::from_rows(symbols, &rows)?
        };
        if d_line.is_some_and(|d| d != m.d_sequence()) || l_line.is_some_and(|l| l != m.l_sequence()) {
            return Err(Error::InvalidMatrix("D/L lines disagree with the matrix".into()));
        }
        Ok(m)
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::InvalidMatrix(format!("bad integer {t:?}"))))
        .collect()
}

/// A sequence `L` of length `n` with `L[n] = -1`, `L[i] >= 0` and
/// `L[i+1] - L[i] >= -1` for `i < n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LukasiewiczPath(Vec<i64>);

impl LukasiewiczPath {
    pub fn values(&self) -> &[i64] {
        &self.0
    }
}

impl TryFrom<Vec<i64>> for LukasiewiczPath {
    type Error = Error;

    fn try_from(values: Vec<i64>) -> Result<Self> {
        if is_lukasiewicz(&values) {
            Ok(LukasiewiczPath(values))
        } else {
            Err(Error::NotInImage)
        }
    }
}

pub fn is_lukasiewicz(l: &[i64]) -> bool {
    let Some((&last, interior)) = l.split_last() else {
        return false;
    };
    last == -1 && interior.iter().all(|&v| v >= 0) && l.windows(2).all(|w| w[1] - w[0] >= -1)
}

/// The matrix whose column `j` is the out-label set of the `j`-th node in
/// pre-order; rows are the trie's non-sentinel symbols.
pub fn trie_to_matrix(trie: &Trie) -> DegreeMatrix {
    trie_to_matrix_over(trie, trie.alphabet().symbols().to_vec()).expect("trie alphabet covers its labels")
}

/// Like [`trie_to_matrix`] but with caller-chosen row symbols, which must
/// include every edge label of the trie.
pub fn trie_to_matrix_over(trie: &Trie, symbols: Vec<u8>) -> Result<DegreeMatrix> {
    let mut m = DegreeMatrix::zeros(symbols, trie.len());
    if m.symbols.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidMatrix("row symbols not strictly increasing".into()));
    }
    for (j, u) in trie.preorder().into_iter().enumerate() {
        for (c, _) in trie.children(u) {
            let i = m
                .symbols
                .binary_search(&c)
                .map_err(|_| Error::InvalidMatrix(format!("edge label {c:#04x} has no row")))?;
            m.set(i, j);
        }
    }
    Ok(m)
}

/// Inverts [`trie_to_matrix`]; fails unless the matrix's L sequence is a
/// Łukasiewicz path.
pub fn matrix_to_trie(m: &DegreeMatrix) -> Result<Trie> {
    if !is_lukasiewicz(&m.l_sequence()) {
        return Err(Error::NotInImage);
    }
    let columns: Vec<Vec<u8>> = (0..m.n()).map(|j| m.column_labels(j)).collect();
    Trie::from_out_sets(&columns)
}
