//! Exhaustive generators for small symbol distributions.
//!
//! `enumerate_matrices` walks the full matrix set row by row;
//! `enumerate_tries` builds tries directly, choosing the out-set of each
//! pre-order node. The two share no code beyond the trie type, so they can
//! cross-check the counting formula.

use num_bigint::BigUint;

use super::count::matrix_space_size;
use super::DegreeMatrix;
use crate::error::{Error, Result};
use crate::trie::{SymbolDistribution, Trie};

/// Default ceiling on `prod_i C(n, n_i)` for the enumerators.
pub const DEFAULT_CAP: u64 = 100_000_000;

fn check_cap(dist: &SymbolDistribution, cap: u64) -> Result<()> {
    if matrix_space_size(dist) > BigUint::from(cap) {
        return Err(Error::EnumerationTooLarge);
    }
    Ok(())
}

/// Streams every matrix with the distribution's row counts exactly once.
///
/// Each row runs through its `n_i`-subsets of columns in lexicographic
/// order; the first row varies slowest.
pub fn enumerate_matrices(dist: &SymbolDistribution, cap: u64) -> Result<MatrixEnumerator> {
    check_cap(dist, cap)?;
    let n = dist.n() as usize;
    let combos = dist.counts().iter().map(|&k| (0..k as usize).collect()).collect();
    Ok(MatrixEnumerator {
        n,
        symbols: dist.symbols().to_vec(),
        combos,
        done: false,
    })
}

pub struct MatrixEnumerator {
    n: usize,
    symbols: Vec<u8>,
    combos: Vec<Vec<usize>>,
    done: bool,
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let Some(i) = (0..k).rev().find(|&i| combo[i] < n - k + i) else {
        return false;
    };
    combo[i] += 1;
    for j in i + 1..k {
        combo[j] = combo[j - 1] + 1;
    }
    true
}

impl Iterator for MatrixEnumerator {
    type Item = DegreeMatrix;

    fn next(&mut self) -> Option<DegreeMatrix> {
        if self.done {
            return None;
        }
        let mut m = DegreeMatrix::zeros(self.symbols.clone(), self.n);
        for (i, combo) in self.combos.iter().enumerate() {
            for &j in combo {
                m.set(i, j);
            }
        }
        // Odometer step, last row fastest.
        self.done = true;
        for i in (0..self.combos.len()).rev() {
            if next_combination(&mut self.combos[i], self.n) {
                self.done = false;
                break;
            }
            let k = self.combos[i].len();
            self.combos[i] = (0..k).collect();
        }
        Some(m)
    }
}

/// Streams every trie with the given distribution exactly once.
///
/// Nodes are filled in pre-order; each node tries the subsets of symbols
/// with remaining budget in increasing bitmask order. A branch is cut as
/// soon as the running pending-edge count drops to zero before the last
/// node.
pub fn enumerate_tries(dist: &SymbolDistribution, cap: u64) -> Result<TrieEnumerator> {
    check_cap(dist, cap)?;
    if dist.sigma() > 64 {
        return Err(Error::EnumerationTooLarge);
    }
    let n = dist.n() as usize;
    Ok(TrieEnumerator {
        n,
        symbols: dist.symbols().to_vec(),
        remaining: dist.counts().to_vec(),
        chosen: Vec::with_capacity(n),
        level: vec![0],
        cursor: vec![0; n + 1],
        emitted: false,
        done: false,
    })
}

pub struct TrieEnumerator {
    n: usize,
    symbols: Vec<u8>,
    remaining: Vec<u64>,
    /// Out-set bitmask per filled node.
    chosen: Vec<u64>,
    /// L value before each filled node (and after the last).
    level: Vec<i64>,
    /// Next candidate subset to try at each depth; `u64::MAX` once exhausted.
    cursor: Vec<u64>,
    emitted: bool,
    done: bool,
}

impl TrieEnumerator {
    fn available(&self) -> u64 {
        self.remaining
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r > 0)
            .fold(0u64, |acc, (i, _)| acc | (1 << i))
    }

    fn pop(&mut self) {
        let mask = self.chosen.pop().expect("nonempty");
        self.level.pop();
        for i in 0..self.symbols.len() {
            if mask >> i & 1 == 1 {
                self.remaining[i] += 1;
            }
        }
    }

    /// Finds the next admissible out-set for the node at `depth`, starting
    /// at its cursor.
    fn advance(&mut self, depth: usize) -> Option<u64> {
        let avail = self.available();
        let last = depth + 1 == self.n;
        let l = *self.level.last().expect("level stack");
        let mut s = self.cursor[depth];
        while s != u64::MAX {
            let candidate = s;
            // Next subset of `avail` after `candidate`, or exhaustion.
            s = if candidate == avail {
                u64::MAX
            } else {
                ((candidate | !avail).wrapping_add(1)) & avail
            };
            if candidate & !avail != 0 {
                continue;
            }
            let next_l = l + candidate.count_ones() as i64 - 1;
            let ok = if last {
                next_l == -1 && (avail & !candidate) == 0 && {
                    let mut all_one = true;
                    for i in 0..self.symbols.len() {
                        if candidate >> i & 1 == 1 && self.remaining[i] != 1 {
                            all_one = false;
                        }
                    }
                    all_one
                }
            } else {
                next_l >= 0
            };
            if ok {
                self.cursor[depth] = s;
                return Some(candidate);
            }
        }
        self.cursor[depth] = u64::MAX;
        None
    }
}

impl Iterator for TrieEnumerator {
    type Item = Trie;

    fn next(&mut self) -> Option<Trie> {
        if self.done {
            return None;
        }
        if self.emitted {
            self.emitted = false;
            self.pop();
        }
        loop {
            let depth = self.chosen.len();
            if depth == self.n {
                let sets: Vec<Vec<u8>> = self
                    .chosen
                    .iter()
                    .map(|&mask| {
                        (0..self.symbols.len())
                            .filter(|&i| mask >> i & 1 == 1)
                            .map(|i| self.symbols[i])
                            .collect()
                    })
                    .collect();
                self.emitted = true;
                return Some(Trie::from_out_sets(&sets).expect("enumerated out-sets form a trie"));
            }
            match self.advance(depth) {
                Some(mask) => {
                    for i in 0..self.symbols.len() {
                        if mask >> i & 1 == 1 {
                            self.remaining[i] -= 1;
                        }
                    }
                    let l = *self.level.last().expect("level stack") + mask.count_ones() as i64 - 1;
                    self.chosen.push(mask);
                    self.level.push(l);
                    self.cursor[depth + 1] = 0;
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}
