//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any fails. Extra arguments select criteria by
//! substring of their names.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xbwtrie::combinatorics::{
    count_tries_formula, enumerate_matrices, enumerate_tries, feasible_distributions, matrix_to_trie,
    trie_to_matrix, DegreeMatrix,
};
use xbwtrie::entropy::{h0, hk, space_verdict, worst_case_entropy, ContextTable, OrderStats};
use xbwtrie::generate::{complete_binary, figure_one, trie_family, unary_path};
use xbwtrie::succinct::{Backend, BlockCodec, EncodedBitvector, RankSelect, RawBits};
use xbwtrie::trie::{SymbolDistribution, Trie};
use xbwtrie::xbwt::{build_index, Mode, XbwtIndex};
use xbwtrie::Error;

const SEED: u64 = 0x5eed_0001;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_tries() -> Vec<Trie> {
    trie_family(SEED, 1000, 200, 8)
}

/// The random family plus a few fixed shapes.
fn generated_tries() -> Vec<Trie> {
    let mut out = random_tries();
    out.push(figure_one());
    out.push(Trie::single());
    out.extend((1..=8).map(complete_binary));
    out.extend([2, 3, 10, 50].map(unary_path));
    out
}

fn modes() -> [Mode; 4] {
    [
        Mode::Plain,
        Mode::Fid,
        Mode::Id,
        Mode::FixedBlock { block_size: None, codec: BlockCodec::Rrr },
    ]
}

// ---------------------------------------------------------------------------
// Oracles, written against the definitions without the library's helpers.

/// Prefix sums of (column ones - 1).
fn l_of(m: &DegreeMatrix) -> Vec<i64> {
    let mut acc = 0i64;
    (0..m.n())
        .map(|j| {
            acc += (0..m.sigma()).filter(|&i| m.get(i, j)).count() as i64 - 1;
            acc
        })
        .collect()
}

fn lukasiewicz(l: &[i64]) -> bool {
    let n = l.len();
    l[n - 1] == -1
        && l[..n - 1].iter().all(|&v| v >= 0)
        && (1..n).all(|j| l[j] - l[j - 1] >= -1)
}

fn path_strings(t: &Trie) -> Vec<Vec<u8>> {
    (0..t.len()).map(|u| t.path(u)).collect()
}

fn oracle_count(paths: &[Vec<u8>], p: &[u8]) -> u64 {
    paths.iter().filter(|s| s.ends_with(p)).count() as u64
}

/// Node ids sorted by reversed path string.
fn oracle_colex(t: &Trie) -> Vec<usize> {
    let mut keyed: Vec<(Vec<u8>, usize)> = path_strings(t)
        .into_iter()
        .enumerate()
        .map(|(u, mut s)| {
            s.reverse();
            (s, u)
        })
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, u)| u).collect()
}

fn oracle_runs(t: &Trie) -> u64 {
    let order = oracle_colex(t);
    let sets: Vec<HashSet<u8>> = order.iter().map(|&u| t.children(u).map(|(c, _)| c).collect()).collect();
    let mut r = 0;
    for i in 0..sets.len() {
        for c in &sets[i] {
            if i + 1 == sets.len() || !sets[i + 1].contains(c) {
                r += 1;
            }
        }
    }
    r
}

fn xlogx_terms(m: f64, k: f64) -> f64 {
    let mut s = 0.0;
    if k > 0.0 {
        s += k * (m / k).log2();
    }
    if m - k > 0.0 {
        s += (m - k) * (m / (m - k)).log2();
    }
    s
}

/// `n·H_k` straight from the definition.
fn oracle_nhk(t: &Trie, k: usize) -> (f64, usize) {
    let sentinel = t.alphabet().sentinel();
    let mut contexts: HashMap<Vec<u8>, (u64, HashMap<u8, u64>)> = HashMap::new();
    for (u, p) in path_strings(t).into_iter().enumerate() {
        let mut w = vec![sentinel; k.saturating_sub(p.len())];
        w.extend_from_slice(&p[p.len().saturating_sub(k)..]);
        let e = contexts.entry(w).or_default();
        e.0 += 1;
        for (c, _) in t.children(u) {
            *e.1.entry(c).or_default() += 1;
        }
    }
    let mut total = 0.0;
    for (nw, per) in contexts.values() {
        for &nwc in per.values() {
            total += xlogx_terms(*nw as f64, nwc as f64);
        }
    }
    (total, contexts.len())
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

fn binom_f64(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Σ over RRR blocks of ⌈log2 C(u, class)⌉ for a raw row cut into blocks of `u`.
fn oracle_rrr_payload(row: &RawBits, u: u64) -> u64 {
    let mut total = 0;
    let mut start = 0;
    while start < row.len() {
        let len = u.min(row.len() - start);
        let class = (start..start + len).filter(|&i| row.get(i)).count() as u64;
        total += binom_f64(len, class).log2().ceil() as u64;
        start += len;
    }
    total
}

// ---------------------------------------------------------------------------
// Criteria.

fn counting_formula() -> Check {
    let mut checked = 0;
    for n in 1..=8u64 {
        for sigma in 1..=3 {
            for d in feasible_distributions(n, sigma) {
                let formula = count_tries_formula(&d);
                let product: BigUint = d.counts().iter().map(|&k| exact_binomial(n, k)).product();
                let tries = enumerate_tries(&d, u64::MAX).unwrap().count();
                let matrices = enumerate_matrices(&d, u64::MAX).unwrap().count();
                ensure(
                    BigUint::from(tries) == formula
                        && BigUint::from(matrices) == product
                        && (matrices as u64).is_multiple_of(n)
                        && BigUint::from(matrices as u64 / n) == formula
                        && &product / n == formula,
                    || format!("n={n} {:?}: tries={tries} matrices={matrices} formula={formula}", d.counts()),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} distributions"))
}

fn exact_binomial(n: u64, k: u64) -> BigUint {
    let num: BigUint = (n - k + 1..=n).map(BigUint::from).product();
    let den: BigUint = (1..=k).map(BigUint::from).product();
    num / den
}

fn rotation_bijection() -> Check {
    let mut matrices = 0u64;
    for n in 1..=7u64 {
        for sigma in 1..=3 {
            for d in feasible_distributions(n, sigma) {
                for m in enumerate_matrices(&d, u64::MAX).unwrap() {
                    let rots: Vec<DegreeMatrix> = (0..n as usize).map(|r| m.rotate(r)).collect();
                    let distinct = rots.iter().collect::<HashSet<_>>().len() == n as usize;
                    let valid: Vec<usize> = (0..n as usize).filter(|&r| lukasiewicz(&l_of(&rots[r]))).collect();
                    ensure(distinct && valid.len() == 1, || {
                        format!("n={n} {:?}: distinct={distinct} valid={valid:?}\n{}", d.counts(), m.to_text())
                    })?;
                    ensure(m.canonical_rotation() == Ok(valid[0]), || {
                        format!("canonical rotation {:?} != {}", m.canonical_rotation(), valid[0])
                    })?;
                    matrices += 1;
                }
            }
        }
    }
    Ok(format!("{matrices} matrices"))
}

fn figure_golden() -> Check {
    let symbols = b"abc".to_vec();
    let top = DegreeMatrix::from_text("0100000\n1000110\n0100010\n", symbols.clone()).unwrap();
    let bottom = DegreeMatrix::from_text("0000100\n1101000\n0100100\n", symbols).unwrap();
    let t = figure_one();
    let m = trie_to_matrix(&t);
    ensure(m == bottom, || format!("f(T) =\n{}", m.to_text()))?;
    ensure(m.d_sequence() == vec![0, 1, -1, 0, 1, -1, -1], || format!("D = {:?}", m.d_sequence()))?;
    ensure(m.l_sequence() == vec![0, 1, 0, 0, 1, 0, -1], || format!("L = {:?}", m.l_sequence()))?;
    ensure(top.d_sequence() == vec![0, 1, -1, -1, 0, 1, -1], || format!("top D = {:?}", top.d_sequence()))?;
    ensure(top.l_sequence() == vec![0, 1, 0, -1, -1, 0, -1], || format!("top L = {:?}", top.l_sequence()))?;
    ensure(!lukasiewicz(&top.l_sequence()), || "top L accepted".into())?;
    ensure(matrix_to_trie(&top) == Err(Error::NotInImage), || "top matrix inverted".into())?;
    ensure(top.canonical_rotation() == Ok(3), || format!("canonical rotation {:?}", top.canonical_rotation()))?;
    ensure(top.rotate(3) == bottom, || format!("M^3 =\n{}", top.rotate(3).to_text()))?;
    ensure(matrix_to_trie(&bottom).as_ref() == Ok(&t), || "round trip differs".into())?;
    Ok("matrix, D, L, rotation 3, round trip".into())
}

fn patterns_for(t: &Trie, rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
    let symbols = t.alphabet().symbols().to_vec();
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..4 {
        frontier = frontier
            .iter()
            .flat_map(|p| {
                symbols.iter().map(move |&c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    let paths = path_strings(t);
    for i in 0..1000 {
        let len = rng.gen_range(5..=14);
        let p = if i % 2 == 0 && !symbols.is_empty() {
            (0..len).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect()
        } else {
            // A suffix of a real path, so some longer patterns match.
            let s = &paths[rng.gen_range(0..paths.len())];
            let mut p = s[s.len().saturating_sub(len)..].to_vec();
            if i % 10 == 1 {
                p.push(b'z' + 1);
            }
            p
        };
        out.push(p);
    }
    out
}

fn count_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut queries = 0u64;
    let mut nonzero = 0u64;
    for (ti, t) in random_tries().iter().enumerate() {
        let paths = path_strings(t);
        let patterns = patterns_for(t, &mut rng);
        let expected: Vec<u64> = patterns.iter().map(|p| oracle_count(&paths, p)).collect();
        nonzero += expected.iter().filter(|&&c| c > 0).count() as u64;
        for mode in modes() {
            let index = build_index(t, mode);
            for (p, &e) in patterns.iter().zip(&expected) {
                let got = index.count(p);
                ensure(got == Ok(e), || format!("trie {ti} mode {mode:?} pattern {p:?}: {got:?} != {e}"))?;
                queries += 1;
            }
        }
    }
    Ok(format!("{queries} queries, {nonzero} nonzero oracle answers per back-end set"))
}

fn invertibility() -> Check {
    let tries = random_tries();
    for (i, t) in tries.iter().enumerate() {
        for mode in modes() {
            let index = build_index(t, mode);
            let back = index.invert();
            ensure(back.as_ref() == Ok(t), || format!("trie {i} mode {mode:?}: {back:?}"))?;
            let bytes = index.serialize();
            ensure(XbwtIndex::deserialize(&bytes).as_ref() == Ok(&index), || format!("trie {i} serialization"))?;
        }
    }
    Ok(format!("{} tries x 4 back-ends", tries.len()))
}

fn entropy_sandwich() -> Check {
    let mut min_lower = f64::INFINITY;
    let mut min_upper = f64::INFINITY;
    let tries = generated_tries();
    for (i, t) in tries.iter().enumerate() {
        let n = t.len() as f64;
        let dist = t.symbol_distribution();
        let sigma = dist.sigma() as f64;
        let hwc = worst_case_entropy(&dist);
        let (nh0, _) = oracle_nhk(t, 0);
        ensure((nh0 - n * h0(t)).abs() < 1e-9 * nh0.max(1.0), || format!("trie {i}: h0 disagrees with oracle"))?;
        let exact = log2_big(&count_tries_formula(&dist));
        ensure((hwc - exact).abs() < 1e-6, || format!("trie {i}: H_wc {hwc} vs log2 |U| {exact}"))?;
        let lower = hwc - (nh0 - sigma * (n + 1.0).log2() - n.log2());
        let upper = (nh0 - n.log2()) - hwc;
        min_lower = min_lower.min(lower);
        min_upper = min_upper.min(upper);
        ensure(lower >= -1e-6 && upper >= -1e-6, || format!("trie {i}: slacks {lower} {upper}"))?;
    }
    let mut dists: Vec<SymbolDistribution> = (1..=40u64).flat_map(|n| (1..=3).flat_map(move |s| feasible_distributions(n, s))).collect();
    dists.extend(tries.iter().filter(|t| t.len() <= 40).map(Trie::symbol_distribution));
    let mut worst_rel = 0f64;
    for d in &dists {
        let exact = count_tries_formula(d).to_f64().unwrap();
        let rel = (worst_case_entropy(d).exp2() - exact).abs() / exact;
        worst_rel = worst_rel.max(rel);
        ensure(rel <= 1e-9, || format!("{:?} n={}: relative error {rel}", d.counts(), d.n()))?;
    }
    Ok(format!(
        "{} tries, min slack {min_lower:.3e}/{min_upper:.3e}; {} distributions, max rel err {worst_rel:.2e}",
        tries.len(),
        dists.len()
    ))
}

fn monotonicity() -> Check {
    let tries = generated_tries();
    for (i, t) in tries.iter().enumerate() {
        let values: Vec<f64> = (0..=7).map(|k| hk(t, k)).collect();
        for (k, value) in values.iter().enumerate() {
            let (oracle, _) = oracle_nhk(t, k);
            let got = value * t.len() as f64;
            ensure((oracle - got).abs() <= 1e-9 * oracle.max(1.0), || format!("trie {i} k={k}: {got} vs oracle {oracle}"))?;
        }
        for k in 0..=6 {
            ensure(values[k + 1] <= values[k] + 1e-9, || format!("trie {i}: H_{} = {} > H_{k} = {}", k + 1, values[k + 1], values[k]))?;
        }
    }
    Ok(format!("{} tries, k = 0..6", tries.len()))
}

fn run_bound() -> Check {
    let tries = generated_tries();
    let mut min_slack = f64::INFINITY;
    for (i, t) in tries.iter().enumerate() {
        let r = build_index(t, Mode::Plain).run_count().total;
        let oracle = oracle_runs(t);
        ensure(r == oracle, || format!("trie {i}: r = {r}, oracle {oracle}"))?;
        // The alphabet here includes the sentinel.
        let sigma = (t.alphabet().len() + 1) as f64;
        for k in 0..=2 {
            let (nhk, _) = oracle_nhk(t, k);
            let slack = nhk + sigma.powi(k as i32 + 1) - r as f64;
            min_slack = min_slack.min(slack);
            ensure(slack >= -1e-6, || format!("trie {i} k={k}: r = {r} > nH_k + σ^(k+1) = {}", nhk + sigma.powi(k as i32 + 1)))?;
        }
    }
    Ok(format!("{} tries, min slack {min_slack:.3}", tries.len()))
}

fn run_witness() -> Check {
    let mut ratios = Vec::new();
    for h in 2..=12 {
        let t = complete_binary(h);
        let n = t.len() as u64;
        let index = build_index(&t, Mode::Fid);
        let r = index.run_count().total;
        let leaf_runs = index.leaf_run_count();
        ensure(r == n.div_ceil(2), || format!("h={h}: r = {r}, expected {}", n.div_ceil(2)))?;
        ensure(leaf_runs == (n + 1) / 4, || format!("h={h}: leaf runs {leaf_runs}, expected {}", (n + 1) / 4))?;
        let ratio = r as f64 / (n as f64 * h0(&t));
        if h >= 6 {
            ensure((0.2..=0.3).contains(&ratio), || format!("h={h}: r/(nH0) = {ratio}"))?;
            ratios.push(format!("{ratio:.4}"));
        }
    }
    Ok(format!("r/(nH0) for h=6..12: {}", ratios.join(" ")))
}

fn space_accounting() -> Check {
    let tries = generated_tries();
    let mut min_slack = f64::INFINITY;
    let (mut payload, mut overhead) = (0u64, 0u64);
    for (i, t) in tries.iter().enumerate() {
        let index = build_index(t, Mode::Fid);
        let rows: Vec<RawBits> = index.bitvectors().iter().map(|b| b.to_raw()).collect();
        let u = match index.bitvectors().first() {
            Some(EncodedBitvector::Rrr(v)) => v.block_size() as u64,
            Some(_) => return Err("fid index is not RRR-coded".into()),
            None => 1,
        };
        let measured = index.payload_bits().entropy;
        let expected: u64 = rows.iter().map(|r| oracle_rrr_payload(r, u)).sum();
        ensure(measured == expected, || format!("trie {i}: payload {measured}, oracle {expected}"))?;
        payload += measured;
        overhead += index.payload_bits().overhead;
        let blocks: u64 = rows.iter().map(|r| r.len().div_ceil(u)).sum();
        for k in 0..=2 {
            let (nhk, contexts) = oracle_nhk(t, k);
            let bound = nhk + rows.len() as f64 * (contexts as f64 - 1.0) * u as f64 + blocks as f64;
            let slack = bound - measured as f64;
            min_slack = min_slack.min(slack);
            ensure(slack >= -1e-6, || format!("trie {i} k={k}: payload {measured} > bound {bound}"))?;
            let order = OrderStats {
                k,
                n_hk: nhk,
                hk: nhk / t.len() as f64,
                contexts: ContextTable::new(t, k).len(),
            };
            ensure(contexts == order.contexts, || format!("trie {i} k={k}: context count"))?;
            let verdict = space_verdict(&index, &order).expect("RRR index");
            ensure(verdict.pass, || format!("trie {i} k={k}: library verdict {verdict:?}"))?;
        }
    }
    Ok(format!(
        "{} tries, min slack {min_slack:.3}; payload {payload} bits, directory overhead {overhead} bits",
        tries.len()
    ))
}

fn backend_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    let backends = [
        Backend::Plain,
        Backend::Rrr { block: None },
        Backend::Id { complement: false },
        Backend::Id { complement: true },
        Backend::FixedBlock { block_size: 100, codec: BlockCodec::Rrr },
        Backend::FixedBlock { block_size: 64, codec: BlockCodec::Id },
    ];
    let mut ops = 0u64;
    for i in 0..10_000u64 {
        let density = (i % 99 + 1) as f64 / 100.0;
        let m = rng.gen_range(1..=1200u64);
        let bits = RawBits::from_bools((0..m).map(|_| rng.gen_bool(density)));
        let mut rank = vec![0u64; m as usize + 1];
        let mut select = Vec::new();
        for j in 0..m {
            rank[j as usize + 1] = rank[j as usize] + bits.get(j) as u64;
            if bits.get(j) {
                select.push(j + 1);
            }
        }
        for backend in backends {
            let v = EncodedBitvector::build(&bits, backend);
            ensure(v.len() == m && v.ones() == select.len() as u64, || format!("vector {i} {backend:?}: sizes"))?;
            for j in 0..=m {
                ensure(v.rank(j) == Ok(rank[j as usize]), || format!("vector {i} {backend:?}: rank({j})"))?;
            }
            for (k, &pos) in select.iter().enumerate() {
                ensure(v.select(k as u64 + 1) == Ok(pos), || format!("vector {i} {backend:?}: select({})", k + 1))?;
            }
            for j in 1..=m {
                let expected = bits.get(j - 1).then_some(rank[j as usize]);
                ensure(v.prank(j) == Ok(expected), || format!("vector {i} {backend:?}: prank({j})"))?;
            }
            ensure(v.select(select.len() as u64 + 1).is_err(), || format!("vector {i} {backend:?}: select past end"))?;
            ops += 2 * m + 1 + select.len() as u64;
        }
    }
    Ok(format!("10000 vectors x {} back-ends, {ops} queries", backends.len()))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("counting_formula", counting_formula),
        ("rotation_bijection", rotation_bijection),
        ("figure_golden", figure_golden),
        ("count_oracle", count_oracle),
        ("xbwt_invertibility", invertibility),
        ("entropy_sandwich", entropy_sandwich),
        ("entropy_monotonicity", monotonicity),
        ("run_bound", run_bound),
        ("run_witness", run_witness),
        ("space_accounting", space_accounting),
        ("backend_equivalence", backend_equivalence),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if std::env::args().any(|a| a == "--list") {
        for (name, _) in criteria {
            println!("{name}: test");
        }
        return;
    }
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
