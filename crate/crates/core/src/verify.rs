//! Exhaustive sweep over small symbol distributions: counting formula
//! against both enumerators, rotation classes, and the trie/matrix round
//! trip.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use num_bigint::BigUint;

use crate::combinatorics::{
    count_tries_formula, enumerate_matrices, enumerate_tries, feasible_distributions, is_lukasiewicz,
    matrix_space_size, matrix_to_trie, trie_to_matrix_over, DegreeMatrix,
};
use crate::error::{Error, Result};
use crate::trie::SymbolDistribution;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "XBWTRIE_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_n: u64,
    pub max_sigma: usize,
    /// Per-distribution ceiling on the matrix count.
    pub cap: u64,
    pub threads: usize,
}

impl VerifyConfig {
    pub fn new(max_n: u64, max_sigma: usize, cap: u64) -> Self {
        VerifyConfig {
            max_n,
            max_sigma,
            cap,
            threads: default_threads(),
        }
    }
}

/// Available parallelism, capped by `XBWTRIE_THREADS` when set.
pub fn default_threads() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(cap) if cap > 0 => available.min(cap),
        _ => available,
    }
}

/// Outcome for one distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionResult {
    pub n: u64,
    pub counts: Vec<u64>,
    pub formula: BigUint,
    pub matrices: u64,
    /// Matrices whose L sequence is a Łukasiewicz path.
    pub lukasiewicz: u64,
    pub tries: u64,
    /// Matrices whose rotations repeat, or with other than one Łukasiewicz
    /// rotation, or whose canonical rotation is not Łukasiewicz.
    pub rotation_failures: u64,
    /// Tries or Łukasiewicz matrices that do not survive the round trip.
    pub roundtrip_failures: u64,
}

impl DistributionResult {
    pub fn counting_ok(&self) -> bool {
        let n = BigUint::from(self.n);
        BigUint::from(self.tries) == self.formula
            && BigUint::from(self.matrices) == &self.formula * &n
            && BigUint::from(self.lukasiewicz) == self.formula
    }

    pub fn passed(&self) -> bool {
        self.counting_ok() && self.rotation_failures == 0 && self.roundtrip_failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifySummary {
    /// Sorted by `(n, σ, counts)`.
    pub results: Vec<DistributionResult>,
    /// Distributions that were scheduled.
    pub planned: usize,
    pub interrupted: bool,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        !self.interrupted && self.results.iter().all(DistributionResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &DistributionResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    /// One row per `(n, σ)`: distributions checked, tries, matrices and
    /// failures.
    pub fn table(&self) -> String {
        let mut out = String::from("n\tsigma\tdists\ttries\tmatrices\tfailed\n");
        let mut i = 0;
        while i < self.results.len() {
            let key = (self.results[i].n, self.results[i].counts.len());
            let group: Vec<&DistributionResult> = self.results[i..]
                .iter()
                .take_while(|r| (r.n, r.counts.len()) == key)
                .collect();
            let tries: u64 = group.iter().map(|r| r.tries).sum();
            let matrices: u64 = group.iter().map(|r| r.matrices).sum();
            let failed = group.iter().filter(|r| !r.passed()).count();
            let _ = writeln!(out, "{}\t{}\t{}\t{tries}\t{matrices}\t{failed}", key.0, key.1, group.len());
            i += group.len();
        }
        let checked = self.results.len();
        let failed = self.failures().count();
        let status = if self.interrupted { "interrupted" } else if failed == 0 { "pass" } else { "fail" };
        let _ = writeln!(out, "checked {checked}/{} distributions, {failed} failed: {status}", self.planned);
        out
    }
}

/// Checks every rotation of `m`: pairwise distinct, exactly one
/// Łukasiewicz, and that one is the canonical rotation.
pub fn rotation_class_ok(m: &DegreeMatrix) -> bool {
    let n = m.n();
    let rotations: Vec<DegreeMatrix> = (0..n).map(|r| m.rotate(r)).collect();
    let distinct = rotations.iter().collect::<HashSet<_>>().len() == n;
    let valid: Vec<usize> = (0..n).filter(|&r| is_lukasiewicz(&rotations[r].l_sequence())).collect();
    distinct && valid.len() == 1 && m.canonical_rotation().ok() == Some(valid[0])
}

/// Runs every check for one distribution.
pub fn check_distribution(dist: &SymbolDistribution, cap: u64, stop: &AtomicBool) -> Result<Option<DistributionResult>> {
    let mut result = DistributionResult {
        n: dist.n(),
        counts: dist.counts().to_vec(),
        formula: count_tries_formula(dist),
        matrices: 0,
        lukasiewicz: 0,
        tries: 0,
        rotation_failures: 0,
        roundtrip_failures: 0,
    };
    let symbols = dist.symbols().to_vec();
    for (i, m) in enumerate_matrices(dist, cap)?.enumerate() {
        if i % 4096 == 0 && stop.load(Ordering::Relaxed) {
            return Ok(None);
        }
        result.matrices += 1;
        if !rotation_class_ok(&m) {
            result.rotation_failures += 1;
        }
        if is_lukasiewicz(&m.l_sequence()) {
            result.lukasiewicz += 1;
            let back = matrix_to_trie(&m).and_then(|t| trie_to_matrix_over(&t, symbols.clone()));
            if back.as_ref() != Ok(&m) {
                result.roundtrip_failures += 1;
            }
        }
    }
    for (i, t) in enumerate_tries(dist, cap)?.enumerate() {
        if i % 4096 == 0 && stop.load(Ordering::Relaxed) {
            return Ok(None);
        }
        result.tries += 1;
        let back = trie_to_matrix_over(&t, symbols.clone()).and_then(|m| matrix_to_trie(&m));
        if back.as_ref() != Ok(&t) {
            result.roundtrip_failures += 1;
        }
    }
    Ok(Some(result))
}

/// Sweeps all distributions with `1 <= n <= max_n` and `1 <= σ <= max_sigma`
/// across worker threads. Setting `stop` ends the sweep early with a
/// partial, interrupted summary.
pub fn run_sweep(config: &VerifyConfig, stop: &AtomicBool) -> Result<VerifySummary> {
    let dists: Vec<SymbolDistribution> = (1..=config.max_n)
        .flat_map(|n| (1..=config.max_sigma).flat_map(move |s| feasible_distributions(n, s)))
        .collect();
    let cap = BigUint::from(config.cap);
    if dists.iter().any(|d| matrix_space_size(d) > cap) {
        return Err(Error::EnumerationTooLarge);
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<DistributionResult>>> = Mutex::new(vec![None; dists.len()]);
    let error: Mutex<Option<Error>> = Mutex::new(None);
    let interrupted = AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..config.threads.max(1) {
            scope.spawn(|| loop {
                if stop.load(Ordering::Relaxed) {
                    interrupted.store(true, Ordering::Relaxed);
                    return;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(d) = dists.get(i) else { return };
                match check_distribution(d, config.cap, stop) {
                    Ok(Some(r)) => slots.lock().expect("no poisoned lock")[i] = Some(r),
                    Ok(None) => interrupted.store(true, Ordering::Relaxed),
                    Err(e) => {
                        *error.lock().expect("no poisoned lock") = Some(e);
                        stop.store(true, Ordering::Relaxed);
                    }
                }
            });
        }
    });
    if let Some(e) = error.into_inner().expect("no poisoned lock") {
        return Err(e);
    }
    let mut results: Vec<DistributionResult> = slots.into_inner().expect("no poisoned lock").into_iter().flatten().collect();
    results.sort_by(|a, b| (a.n, a.counts.len(), &a.counts).cmp(&(b.n, b.counts.len(), &b.counts)));
    Ok(VerifySummary {
        planned: dists.len(),
        interrupted: interrupted.load(Ordering::Relaxed) && results.len() < dists.len(),
        results,
    })
}
