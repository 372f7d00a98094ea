use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::trie::SymbolDistribution;

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after each step.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `prod_i C(n, n_i)`: the number of `sigma x n` binary matrices with the
/// given row counts.
pub fn matrix_space_size(dist: &SymbolDistribution) -> BigUint {
    dist.counts().iter().map(|&c| binomial(dist.n(), c)).product()
}

/// Number of tries with the given symbol distribution:
/// `(1/n) prod_i C(n, n_i)`.
pub fn count_tries_formula(dist: &SymbolDistribution) -> BigUint {
    let (q, r) = matrix_space_size(dist).div_rem(&BigUint::from(dist.n()));
    debug_assert!(r.is_zero(), "matrix count is always divisible by n");
    q
}

/// Number of tries with `n` nodes over `sigma` symbols:
/// `(1/n) C(n sigma, n - 1)`.
pub fn count_all_tries(n: u64, sigma: u64) -> BigUint {
    assert!(n >= 1 && sigma >= 1, "n and sigma must be positive");
    let (q, r) = binomial(n * sigma, n - 1).div_rem(&BigUint::from(n));
    debug_assert!(r.is_zero());
    q
}

/// All count vectors `(n_1, ..., n_sigma)` with `n_i <= n` summing to
/// `n - 1`, in lexicographic order.
pub fn feasible_distributions(n: u64, sigma: usize) -> Vec<SymbolDistribution> {
    fn rec(n: u64, left: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for c in 0..=left.min(n) {
            cur.push(c);
            rec(n, left - c, slots - 1, cur, out);
            cur.pop();
        }
    }
    if n == 0 || sigma == 0 {
        return Vec::new();
    }
    let mut raw = Vec::new();
    rec(n, n - 1, sigma, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|counts| SymbolDistribution::new(n, counts).expect("sums to n - 1"))
        .collect()
}
