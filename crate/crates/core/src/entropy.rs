//! Worst-case and empirical entropies of tries, and the bound checks that
//! relate them to the run count and to the compressed index size.
//!
//! All logarithms are base 2 and `0 log(x/0) = 0`.

use std::collections::BTreeMap;

use crate::succinct::{BlockCodec, EncodedBitvector};
use crate::trie::{SymbolDistribution, Trie};
use crate::xbwt::{build_index, IndexMode, Mode, RunCount, XbwtIndex};

/// Absolute tolerance for inequalities, in bits.
pub const TOLERANCE: f64 = 1e-6;
/// Tolerance for the monotonicity of `H_k` in `k`.
pub const MONOTONE_TOLERANCE: f64 = 1e-9;

/// Neumaier compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `log2 C(n, k)` as the compensated sum of `log2((n - k + j) / j)`.
pub fn log2_binomial(n: u64, k: u64) -> f64 {
    assert!(k <= n);
    let k = k.min(n - k);
    (1..=k)
        .map(|j| ((n - k + j) as f64 / j as f64).log2())
        .collect::<CompensatedSum>()
        .value()
}

/// `k log(m/k) + (m-k) log(m/(m-k))`: the bits of a length-`m` binary
/// sequence with `k` ones at its empirical zero-order entropy.
pub fn binary_entropy_bits(m: u64, k: u64) -> f64 {
    let term = |x: u64| if x == 0 { 0.0 } else { x as f64 * (m as f64 / x as f64).log2() };
    term(k) + term(m - k)
}

/// `H^wc = Σ log C(n, n_i) - log n`: log of the number of tries with the
/// given symbol distribution.
pub fn worst_case_entropy(dist: &SymbolDistribution) -> f64 {
    let n = dist.n();
    let mut s: CompensatedSum = dist.counts().iter().map(|&k| log2_binomial(n, k)).collect();
    s.add(-(n as f64).log2());
    s.value()
}

/// Zero-order empirical entropy of a trie, in bits per node.
pub fn h0(trie: &Trie) -> f64 {
    let n = trie.len() as u64;
    let total: CompensatedSum = trie
        .symbol_distribution()
        .counts()
        .iter()
        .map(|&k| binary_entropy_bits(n, k))
        .collect();
    total.value() / n as f64
}

/// Node count and per-symbol out-edge counts of one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextEntry {
    pub nodes: u64,
    /// Indexed like the trie alphabet's non-sentinel symbols.
    pub out_counts: Vec<u64>,
}

/// `n_w` and `n_{w,c}` for every realized context `w` of length `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextTable {
    k: usize,
    symbols: Vec<u8>,
    contexts: BTreeMap<Vec<u8>, ContextEntry>,
}

impl ContextTable {
    pub fn new(trie: &Trie, k: usize) -> Self {
        let sigma = trie.alphabet().len();
        let mut contexts: BTreeMap<Vec<u8>, ContextEntry> = BTreeMap::new();
        for u in 0..trie.len() {
            let entry = contexts.entry(trie.context(u, k)).or_insert_with(|| ContextEntry {
                nodes: 0,
                out_counts: vec![0; sigma],
            });
            entry.nodes += 1;
            for (c, _) in trie.children(u) {
                entry.out_counts[trie.alphabet().index_of(c).expect("edge label in alphabet")] += 1;
            }
        }
        ContextTable {
            k,
            symbols: trie.alphabet().symbols().to_vec(),
            contexts,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Number of realized contexts `ℓ`.
    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn get(&self, w: &[u8]) -> Option<&ContextEntry> {
        self.contexts.get(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[u8], &ContextEntry)> {
        self.contexts.iter().map(|(w, e)| (w.as_slice(), e))
    }

    /// `n·H_k`: total bits over all contexts and symbols.
    pub fn total_bits(&self) -> f64 {
        self.contexts
            .values()
            .flat_map(|e| e.out_counts.iter().map(move |&k| binary_entropy_bits(e.nodes, k)))
            .collect::<CompensatedSum>()
            .value()
    }
}

/// k-th order empirical entropy of a trie, in bits per node.
pub fn hk(trie: &Trie, k: usize) -> f64 {
    ContextTable::new(trie, k).total_bits() / trie.len() as f64
}

/// One inequality check; `slack` is right side minus left side, so a
/// negative slack beyond the tolerance is a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub slack: f64,
}

impl Verdict {
    fn new(name: String, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        Verdict {
            name,
            pass: slack.is_finite() && slack >= -tolerance,
            slack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackendPayload {
    pub mode: IndexMode,
    pub entropy_bits: u64,
    pub overhead_bits: u64,
}

/// Per-order quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderStats {
    pub k: usize,
    /// `n·H_k` in bits.
    pub n_hk: f64,
    pub hk: f64,
    /// Realized contexts `ℓ`.
    pub contexts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub n: u64,
    /// Effective alphabet size without the sentinel.
    pub sigma: usize,
    pub worst_case: f64,
    pub orders: Vec<OrderStats>,
    pub runs: RunCount,
    pub leaf_runs: u64,
    pub payloads: Vec<BackendPayload>,
    pub verdicts: Vec<Verdict>,
}

/// A report line: a metric or a check.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportRow {
    Metric { name: String, k: Option<usize>, value: f64 },
    Check { name: String, pass: bool, slack: f64 },
}

/// Sum of the RRR block sizes and block counts behind an RRR-coded
/// bitvector, or `None` for other codecs.
fn rrr_blocks(b: &EncodedBitvector) -> Option<(u64, u64)> {
    match b {
        EncodedBitvector::Rrr(v) => Some((v.block_size() as u64, v.num_blocks() as u64)),
        EncodedBitvector::FixedBlock(f) if f.codec() == BlockCodec::Rrr => {
            let mut u = 0;
            let mut blocks = 0;
            for local in f.blocks() {
                let (lu, lb) = rrr_blocks(local)?;
                u = u.max(lu);
                blocks += lb;
            }
            Some((u, blocks))
        }
        _ => None,
    }
}

/// The four back-ends measured by [`check_bounds`].
pub fn report_modes() -> [Mode; 4] {
    [
        Mode::Plain,
        Mode::Fid,
        Mode::Id,
        Mode::FixedBlock { block_size: None, codec: BlockCodec::Rrr },
    ]
}

/// Space bound for one RRR-coded index at order `k`:
/// payload `<= n·H_k + σ·(ℓ-1)·u + (number of blocks)`, with `σ` the
/// number of bitvectors. `None` when the index is not RRR-coded.
pub fn space_verdict(index: &XbwtIndex, order: &OrderStats) -> Option<Verdict> {
    let mut u = 0;
    let mut blocks = 0;
    for b in index.bitvectors() {
        let (bu, bb) = rrr_blocks(b)?;
        u = u.max(bu);
        blocks += bb;
    }
    let sigma = index.bitvectors().len() as f64;
    let rhs = order.n_hk + sigma * (order.contexts as f64 - 1.0) * u as f64 + blocks as f64;
    let lhs = index.payload_bits().entropy as f64;
    Some(Verdict::new(
        format!("space_{}_k{}", index.mode().name(), order.k),
        lhs,
        rhs,
        TOLERANCE,
    ))
}

/// Computes every entropy quantity up to order `max_k` and checks the
/// sandwich on `H^wc`, monotonicity of `H_k`, the run bound and the
/// compressed space bound.
pub fn check_bounds(trie: &Trie, max_k: usize) -> EntropyReport {
    let n = trie.len() as u64;
    let dist = trie.symbol_distribution();
    let sigma = dist.sigma();
    let worst_case = worst_case_entropy(&dist);
    let orders: Vec<OrderStats> = (0..=max_k)
        .map(|k| {
            let table = ContextTable::new(trie, k);
            let n_hk = table.total_bits();
            OrderStats {
                k,
                n_hk,
                hk: n_hk / n as f64,
                contexts: table.len(),
            }
        })
        .collect();

    let mut verdicts = Vec::new();
    let nh0 = orders[0].n_hk;
    let log_n = (n as f64).log2();
    verdicts.push(Verdict::new(
        "sandwich_lower".into(),
        nh0 - sigma as f64 * ((n + 1) as f64).log2() - log_n,
        worst_case,
        TOLERANCE,
    ));
    verdicts.push(Verdict::new("sandwich_upper".into(), worst_case, nh0 - log_n, TOLERANCE));
    for w in orders.windows(2) {
        verdicts.push(Verdict::new(
            format!("monotone_k{}", w[0].k),
            w[1].hk,
            w[0].hk,
            MONOTONE_TOLERANCE,
        ));
    }

    let indexes: Vec<XbwtIndex> = report_modes().iter().map(|&m| build_index(trie, m)).collect();
    let runs = indexes[0].run_count();
    let leaf_runs = indexes[0].leaf_run_count();
    // The run bound counts the sentinel in the alphabet.
    let sigma_hat = (sigma + 1) as f64;
    for o in &orders {
        verdicts.push(Verdict::new(
            format!("run_bound_k{}", o.k),
            runs.total as f64,
            o.n_hk + sigma_hat.powi(o.k as i32 + 1),
            TOLERANCE,
        ));
    }
    for index in &indexes {
        for o in &orders {
            verdicts.extend(space_verdict(index, o));
        }
    }
    let payloads = indexes
        .iter()
        .map(|index| {
            let p = index.payload_bits();
            BackendPayload {
                mode: index.mode(),
                entropy_bits: p.entropy,
                overhead_bits: p.overhead,
            }
        })
        .collect();

    EntropyReport {
        n,
        sigma,
        worst_case,
        orders,
        runs,
        leaf_runs,
        payloads,
        verdicts,
    }
}

impl EntropyReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    /// Metrics first, then checks, in a fixed order.
    pub fn rows(&self) -> Vec<ReportRow> {
        let metric = |name: &str, k: Option<usize>, value: f64| ReportRow::Metric {
            name: name.to_string(),
            k,
            value,
        };
        let mut rows = vec![
            metric("n", None, self.n as f64),
            metric("sigma", None, self.sigma as f64),
            metric("H_wc", None, self.worst_case),
        ];
        for o in &self.orders {
            rows.push(metric("nH_k", Some(o.k), o.n_hk));
            rows.push(metric("H_k", Some(o.k), o.hk));
            rows.push(metric("contexts", Some(o.k), o.contexts as f64));
        }
        rows.push(metric("r", None, self.runs.total as f64));
        for &(c, r) in &self.runs.per_symbol {
            rows.push(metric(&format!("r_{}", symbol_name(c)), None, r as f64));
        }
        rows.push(metric("leaf_runs", None, self.leaf_runs as f64));
        for p in &self.payloads {
            rows.push(metric(&format!("payload_entropy_{}", p.mode.name()), None, p.entropy_bits as f64));
            rows.push(metric(&format!("payload_overhead_{}", p.mode.name()), None, p.overhead_bits as f64));
        }
        rows.extend(self.verdicts.iter().map(|v| ReportRow::Check {
            name: v.name.clone(),
            pass: v.pass,
            slack: v.slack,
        }));
        rows
    }

    /// `metric\tk\tvalue` and `check\tname\tpass|fail\tslack` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            match row {
                ReportRow::Metric { name, k, value } => {
                    let k = k.map_or_else(|| "-".to_string(), |k| k.to_string());
                    out.push_str(&format!("{name}\t{k}\t{}\n", format_value(value)));
                }
                ReportRow::Check { name, pass, slack } => {
                    let status = if pass { "pass" } else { "fail" };
                    out.push_str(&format!("check\t{name}\t{status}\t{}\n", format_value(slack)));
                }
            }
        }
        out
    }
}

/// Printable form of a symbol: the character itself, or `\xNN`.
pub fn symbol_name(c: u8) -> String {
    if c.is_ascii_graphic() && c != b'\\' {
        (c as char).to_string()
    } else {
        format!("\\x{c:02x}")
    }
}

/// Integers print without a fraction; other values with six decimals.
pub fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.6}")
    }
}
