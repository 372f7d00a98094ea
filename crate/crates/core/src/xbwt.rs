//! XBWT of a trie and the FM-index style count index built on it.
//!
//! Nodes are identified by their 1-based co-lex rank. For each non-sentinel
//! symbol `c`, `B_c[j] = 1` iff the node of rank `j` has an outgoing edge
//! labeled `c`. The children reached through `c` occupy ranks
//! `C[c] + 1 ..= C[c] + n_c`, in the order of their parents.

use crate::error::{Error, Result};
use crate::succinct::{Backend, BlockCodec, EncodedBitvector, PayloadBits, RankSelect, RawBits, Reader, Writer};
use crate::trie::{Alphabet, Trie};

pub const MAGIC: &[u8; 4] = b"XBWT";
pub const FORMAT_VERSION: u16 = 1;

/// Back-end requested at build time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Plain,
    /// Fully indexable dictionary: RRR with constant-time rank.
    Fid,
    /// Indexable dictionary: Elias-Fano, rank by binary search over select.
    Id,
    /// Fixed-size blocks, each compressed with `codec`. `None` picks
    /// `σ·⌈log n⌉²`.
    FixedBlock { block_size: Option<u64>, codec: BlockCodec },
    /// `Fid` when `σ <= (log n)^epsilon`, otherwise `Id`.
    Auto { epsilon: f64 },
}

impl Mode {
    pub const AUTO: Mode = Mode::Auto { epsilon: 0.5 };
}

/// The back-end an index was actually built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexMode {
    Plain,
    Fid,
    Id,
    FixedBlock,
}

impl IndexMode {
    pub fn flag(self) -> u16 {
        match self {
            IndexMode::Plain => 0,
            IndexMode::Fid => 1,
            IndexMode::Id => 2,
            IndexMode::FixedBlock => 3,
        }
    }

    pub fn from_flag(flag: u16) -> Result<Self> {
        Ok(match flag {
            0 => IndexMode::Plain,
            1 => IndexMode::Fid,
            2 => IndexMode::Id,
            3 => IndexMode::FixedBlock,
            x => return Err(Error::Malformed(format!("unknown mode flag {x}"))),
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexMode::Plain => "plain",
            IndexMode::Fid => "fid",
            IndexMode::Id => "id",
            IndexMode::FixedBlock => "fixed-block",
        }
    }
}

/// `⌈log2 x⌉` for `x >= 1`.
fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros() as u64
    }
}

/// Default fixed-block size `σ·⌈log n⌉²`, at least 1.
pub fn default_fixed_block(n: u64, sigma: usize) -> u64 {
    let l = ceil_log2(n);
    (sigma as u64 * l * l).max(1)
}

/// Co-lex rank interval, 1-based and inclusive; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeInterval {
    pub lo: u64,
    pub hi: u64,
}

impl NodeInterval {
    pub const EMPTY: NodeInterval = NodeInterval { lo: 1, hi: 0 };

    pub fn new(lo: u64, hi: u64) -> Self {
        NodeInterval { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }
}

/// Run breaks per symbol and their total `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunCount {
    pub total: u64,
    pub per_symbol: Vec<(u8, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XbwtIndex {
    n: u64,
    alphabet: Alphabet,
    /// `c_array[0]` is the sentinel's entry; `c_array[i]` belongs to
    /// `alphabet.symbols()[i - 1]`.
    c_array: Vec<u64>,
    bitvectors: Vec<EncodedBitvector>,
    mode: IndexMode,
}

/// The `B_c` rows of a trie over its co-lex order, one per non-sentinel symbol.
pub fn xbwt_rows(trie: &Trie) -> Vec<RawBits> {
    let n = trie.len() as u64;
    let sigma = trie.alphabet().len();
    let mut rows = vec![RawBits::zeros(n); sigma];
    for (rank, u) in trie.colex_order().into_iter().enumerate() {
        for (c, _) in trie.children(u) {
            let i = trie.alphabet().index_of(c).expect("edge label in alphabet");
            rows[i].set(rank as u64, true);
        }
    }
    rows
}

/// Resolves `Auto` to a concrete mode.
fn resolve(mode: Mode, n: u64, sigma: usize) -> Mode {
    match mode {
        Mode::Auto { epsilon } => {
            let threshold = if n <= 1 { 0.0 } else { (n as f64).log2().powf(epsilon) };
            if sigma as f64 <= threshold {
                Mode::Fid
            } else {
                Mode::Id
            }
        }
        other => other,
    }
}

fn backend_for(mode: Mode, n: u64, sigma: usize, bits: &RawBits) -> (IndexMode, Backend) {
    match resolve(mode, n, sigma) {
        Mode::Plain => (IndexMode::Plain, Backend::Plain),
        Mode::Fid => (IndexMode::Fid, Backend::Rrr { block: None }),
        Mode::Id => (
            IndexMode::Id,
            Backend::Id {
                complement: bits.count_ones() * 2 > bits.len(),
            },
        ),
        Mode::FixedBlock { block_size, codec } => {
            let block_size = block_size.unwrap_or_else(|| default_fixed_block(n, sigma)).max(1);
            (IndexMode::FixedBlock, Backend::FixedBlock { block_size, codec })
        }
        Mode::Auto { .. } => unreachable!("resolved above"),
    }
}

/// Builds the index of `trie` with the requested back-end.
pub fn build_index(trie: &Trie, mode: Mode) -> XbwtIndex {
    let n = trie.len() as u64;
    let alphabet = trie.alphabet().clone();
    let rows = xbwt_rows(trie);
    let sigma = alphabet.len();
    let index_mode = backend_for(mode, n, sigma, &RawBits::new()).0;
    let bitvectors = rows
        .iter()
        .map(|b| EncodedBitvector::build(b, backend_for(mode, n, sigma, b).1))
        .collect();
    let counts: Vec<u64> = rows.iter().map(RawBits::count_ones).collect();
    XbwtIndex {
        n,
        c_array: c_array_of(&counts),
        alphabet,
        bitvectors,
        mode: index_mode,
    }
}

fn c_array_of(counts: &[u64]) -> Vec<u64> {
    let mut c = Vec::with_capacity(counts.len() + 1);
    c.push(0);
    let mut acc = 1;
    for &k in counts {
        c.push(acc);
        acc += k;
    }
    c
}

impl XbwtIndex {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    /// C array over the effective alphabet, sentinel first.
    pub fn c_array(&self) -> &[u64] {
        &self.c_array
    }

    pub fn bitvectors(&self) -> &[EncodedBitvector] {
        &self.bitvectors
    }

    pub fn bitvector(&self, c: u8) -> Option<&EncodedBitvector> {
        self.alphabet.index_of(c).map(|i| &self.bitvectors[i])
    }

    /// Interval of the empty pattern.
    pub fn full_interval(&self) -> NodeInterval {
        NodeInterval::new(1, self.n)
    }

    /// Extends the pattern whose interval is `iv` by `c`.
    pub fn forward_step(&self, iv: NodeInterval, c: u8) -> Result<NodeInterval> {
        if c == self.alphabet.sentinel() {
            return Err(Error::PatternContainsSentinel);
        }
        if iv.is_empty() {
            return Ok(NodeInterval::EMPTY);
        }
        if iv.lo < 1 || iv.hi > self.n {
            return Err(Error::PositionOutOfRange { pos: iv.hi, len: self.n });
        }
        let Some(i) = self.alphabet.index_of(c) else {
            return Ok(NodeInterval::EMPTY);
        };
        let b = &self.bitvectors[i];
        let base = self.c_array[i + 1];
        Ok(NodeInterval::new(
            base + b.rank_unchecked(iv.lo - 1) + 1,
            base + b.rank_unchecked(iv.hi),
        ))
    }

    /// Interval of the nodes whose incoming path ends with `pattern`.
    pub fn interval(&self, pattern: &[u8]) -> Result<NodeInterval> {
        if pattern.contains(&self.alphabet.sentinel()) {
            return Err(Error::PatternContainsSentinel);
        }
        let mut iv = self.full_interval();
        for &c in pattern {
            iv = self.forward_step(iv, c)?;
            if iv.is_empty() {
                break;
            }
        }
        Ok(iv)
    }

    /// Number of nodes whose `|pattern|`-th order context is `pattern`.
    pub fn count(&self, pattern: &[u8]) -> Result<u64> {
        Ok(self.interval(pattern)?.len())
    }

    /// Out-labels of the node of co-lex rank `j`.
    pub fn out_set(&self, j: u64) -> Vec<u8> {
        self.alphabet
            .symbols()
            .iter()
            .zip(&self.bitvectors)
            .filter(|(_, b)| b.bit(j - 1))
            .map(|(&c, _)| c)
            .collect()
    }

    /// The XBWT: out-sets in co-lex order.
    pub fn xbwt(&self) -> Vec<Vec<u8>> {
        (1..=self.n).map(|j| self.out_set(j)).collect()
    }

    /// The `i`-th child (0-based, by label) of the node of rank `j`, as its
    /// label and rank.
    pub fn child(&self, j: u64, i: usize) -> Option<(u8, u64)> {
        let c = self
            .alphabet
            .symbols()
            .iter()
            .zip(&self.bitvectors)
            .filter(|(_, b)| b.bit(j - 1))
            .nth(i)
            .map(|(&c, _)| c)?;
        let iv = self.forward_step(NodeInterval::new(j, j), c).ok()?;
        Some((c, iv.lo))
    }

    pub fn run_count(&self) -> RunCount {
        let per_symbol: Vec<(u8, u64)> = self
            .alphabet
            .symbols()
            .iter()
            .zip(&self.bitvectors)
            .map(|(&c, b)| {
                let breaks = (1..=b.ones())
                    .filter(|&k| {
                        let pos = b.select_unchecked(k);
                        pos == self.n || !b.bit(pos)
                    })
                    .count() as u64;
                (c, breaks)
            })
            .collect();
        RunCount {
            total: per_symbol.iter().map(|&(_, r)| r).sum(),
            per_symbol,
        }
    }

    /// Maximal runs of consecutive leaves in co-lex order.
    pub fn leaf_run_count(&self) -> u64 {
        let mut runs = 0;
        let mut prev_leaf = false;
        for j in 0..self.n {
            let leaf = self.bitvectors.iter().all(|b| !b.bit(j));
            if leaf && !prev_leaf {
                runs += 1;
            }
            prev_leaf = leaf;
        }
        runs
    }

    pub fn payload_bits(&self) -> PayloadBits {
        self.bitvectors.iter().map(RankSelect::payload_bits).sum()
    }

    /// Rebuilds the trie. Children with label `c` of co-lex sorted parents
    /// get ranks `C[c] + 1, C[c] + 2, ...` in parent order.
    pub fn invert(&self) -> Result<Trie> {
        let invalid = |m: &str| Error::NotValidXbwt(m.to_string());
        let n = self.n as usize;
        if n == 0 {
            return Err(invalid("no nodes"));
        }
        let counts: Vec<u64> = self.bitvectors.iter().map(|b| b.ones()).collect();
        if self.c_array != c_array_of(&counts) {
            return Err(invalid("C array disagrees with bitvectors"));
        }
        if counts.iter().sum::<u64>() != self.n - 1 {
            return Err(invalid("edge count is not n - 1"));
        }
        let mut parent = vec![usize::MAX; n];
        let mut label = vec![self.alphabet.sentinel(); n];
        parent[0] = 0;
        for (i, (&c, b)) in self.alphabet.symbols().iter().zip(&self.bitvectors).enumerate() {
            if b.len() != self.n {
                return Err(invalid("bitvector length differs from n"));
            }
            let base = self.c_array[i + 1] as usize;
            for k in 1..=b.ones() {
                let child = base + k as usize - 1;
                parent[child] = b.select_unchecked(k) as usize - 1;
                label[child] = c;
            }
        }
        let trie = Trie::from_parent_labels(&parent, &label).map_err(|e| Error::NotValidXbwt(e.to_string()))?;
        if xbwt_rows(&trie).iter().zip(&self.bitvectors).any(|(row, b)| *row != b.to_raw()) {
            return Err(invalid("rebuilt trie has a different XBWT"));
        }
        Ok(trie)
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut w = Writer::new();
        w.put_bytes(MAGIC);
        w.put_u16(FORMAT_VERSION);
        w.put_u16(self.mode.flag());
        w.put_u64(self.n);
        w.put_u16(self.alphabet.len() as u16 + 1);
        w.put_u8(self.alphabet.sentinel());
        w.put_bytes(self.alphabet.symbols());
        for &c in &self.c_array {
            w.put_u64(c);
        }
        for b in &self.bitvectors {
            b.write_to(&mut w);
        }
        let crc = crc32c::crc32c(w.as_bytes());
        w.put_u32(crc);
        w.into_bytes()
    }

    pub fn deserialize(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != MAGIC {
            return Err(Error::BadMagic);
        }
        let version = r.get_u16()?;
        if version != FORMAT_VERSION {
            return Err(Error::VersionMismatch { found: version, expected: FORMAT_VERSION });
        }
        let body_len = bytes.len().checked_sub(4).filter(|&l| l >= 6).ok_or(Error::Truncated)?;
        let (body, tail) = bytes.split_at(body_len);
        let stored = u32::from_le_bytes(tail.try_into().expect("4 bytes"));
        let parsed = Self::parse_body(&body[6..]);
        if crc32c::crc32c(body) != stored {
            return Err(match parsed {
                Err(Error::Truncated) => Error::Truncated,
                _ => Error::ChecksumFailure,
            });
        }
        parsed
    }

    fn parse_body(body: &[u8]) -> Result<Self> {
        let mut r = Reader::new(body);
        let mode = IndexMode::from_flag(r.get_u16()?)?;
        let n = r.get_u64()?;
        let sigma = r.get_u16()? as usize;
        if sigma == 0 || n == 0 {
            return Err(Error::Malformed("empty alphabet or node set".into()));
        }
        let sentinel = r.get_u8()?;
        let symbols = r.take(sigma - 1)?.to_vec();
        let alphabet = Alphabet::from_parts(sentinel, symbols)?;
        let c_array = (0..sigma).map(|_| r.get_u64()).collect::<Result<Vec<_>>>()?;
        let bitvectors = (1..sigma)
            .map(|_| EncodedBitvector::read_from(&mut r))
            .collect::<Result<Vec<_>>>()?;
        r.expect_end()?;
        if bitvectors.iter().any(|b| b.len() != n) {
            return Err(Error::Malformed("bitvector length differs from n".into()));
        }
        let counts: Vec<u64> = bitvectors.iter().map(|b| b.ones()).collect();
        if c_array != c_array_of(&counts) || counts.iter().sum::<u64>() != n - 1 {
            return Err(Error::Malformed("C array inconsistent with bitvectors".into()));
        }
        Ok(XbwtIndex {
            n,
            alphabet,
            c_array,
            bitvectors,
            mode,
        })
    }
}
