//! Fixed and seeded random tries used by tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::trie::{build_from_strings, Trie};

/// The 7-node trie spelling `b`, `bb`, `bc`, `bcb`, `bcba`, `bcbc`.
pub fn figure_one() -> Trie {
    build_from_strings(&["b", "bb", "bcba", "bcbc"]).expect("static input")
}

/// Complete binary trie over `{a, b}` of the given height (`2^(h+1) - 1` nodes).
pub fn complete_binary(height: usize) -> Trie {
    let mut strings: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..height {
        strings = strings
            .into_iter()
            .flat_map(|s| {
                let mut a = s.clone();
                a.push(b'a');
                let mut b = s;
                b.push(b'b');
                [a, b]
            })
            .collect();
    }
    build_from_strings(&strings).expect("binary alphabet")
}

/// The path `a -> a -> ... -> a` with `n` nodes.
pub fn unary_path(n: usize) -> Trie {
    assert!(n >= 1);
    build_from_strings(&[vec![b'a'; n - 1]]).expect("unary alphabet")
}

/// A random trie with exactly `n` nodes whose edges use labels from the
/// first `sigma` lowercase letters. Each new node hangs off a uniformly
/// chosen node that still has a free label.
pub fn random_trie<R: Rng>(rng: &mut R, n: usize, sigma: usize) -> Trie {
    assert!(n >= 1 && (1..=26).contains(&sigma));
    let mut parent = vec![0usize];
    let mut labels = vec![0u8];
    let mut free: Vec<Vec<u8>> = vec![(0..sigma as u8).map(|i| b'a' + i).collect()];
    let mut open: Vec<usize> = vec![0];
    while parent.len() < n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        let k = rng.gen_range(0..free[p].len());
        let c = free[p].swap_remove(k);
        if free[p].is_empty() {
            open.swap_remove(slot);
        }
        let id = parent.len();
        parent.push(p);
        labels.push(c);
        free.push((0..sigma as u8).map(|i| b'a' + i).collect());
        open.push(id);
    }
    Trie::from_parent_labels(&parent, &labels).expect("generated tree is a trie")
}

/// The trie of `count` random strings drawn from a skewed letter
/// distribution, which produces repetitive contexts.
pub fn random_string_trie<R: Rng>(rng: &mut R, count: usize, max_len: usize, sigma: usize) -> Trie {
    assert!((1..=26).contains(&sigma));
    let weights: Vec<u32> = (0..sigma as u32).map(|i| 1 << (sigma as u32 - 1 - i).min(6)).collect();
    let total: u32 = weights.iter().sum();
    let mut strings = Vec::with_capacity(count);
    for _ in 0..count.max(1) {
        let len = rng.gen_range(0..=max_len);
        let s: Vec<u8> = (0..len)
            .map(|_| {
                let mut x = rng.gen_range(0..total);
                let mut i = 0;
                while x >= weights[i] {
                    x -= weights[i];
                    i += 1;
                }
                b'a' + i as u8
            })
            .collect();
        strings.push(s);
    }
    build_from_strings(&strings).expect("lowercase alphabet")
}

/// A reproducible family of `count` tries with at most `max_n` nodes over
/// at most `max_sigma` symbols, mixing both random shapes.
pub fn trie_family(seed: u64, count: usize, max_n: usize, max_sigma: usize) -> Vec<Trie> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let sigma = rng.gen_range(1..=max_sigma);
        let t = if i % 2 == 0 {
            let n = rng.gen_range(1..=max_n);
            random_trie(&mut rng, n, sigma)
        } else {
            // Shrink until within the node budget.
            let mut strings = rng.gen_range(1..=max_n / 4 + 1);
            let max_len = rng.gen_range(1..=12);
            loop {
                let mut attempt = rng.clone();
                let t = random_string_trie(&mut attempt, strings, max_len, sigma);
                if t.len() <= max_n || strings == 1 {
                    rng = attempt;
                    break t;
                }
                strings /= 2;
            }
        };
        debug_assert!(t.len() <= max_n.max(13));
        out.push(t);
    }
    out.shuffle(&mut rng);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_binary_sizes() {
        for h in 0..6 {
            let t = complete_binary(h);
            assert_eq!(t.len(), (1 << (h + 1)) - 1);
            assert_eq!(t.height(), h);
        }
    }

    #[test]
    fn random_trie_size_and_alphabet() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 10, 200] {
            let t = random_trie(&mut rng, n, 3);
            assert_eq!(t.len(), n);
            assert!(t.alphabet().symbols().iter().all(|c| b"abc".contains(c)));
        }
    }

    #[test]
    fn family_is_reproducible_and_bounded() {
        let a = trie_family(3, 50, 200, 8);
        let b = trie_family(3, 50, 200, 8);
        assert_eq!(a, b);
        assert!(a.iter().all(|t| t.len() <= 200 && t.alphabet().len() <= 8));
    }
}
