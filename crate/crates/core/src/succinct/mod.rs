//! Rank/select bitvectors with exact space accounting.
//!
//! Four back-ends share the [`RankSelect`] interface:
//!
//! - [`PlainBitvector`]: uncompressed bits with a two-level rank directory.
//! - [`RrrVector`]: class/offset block coding (FID). Each block of `u` bits
//!   stores its popcount and the index of its pattern among all words with
//!   that popcount, in `ceil(log C(u, class))` bits.
//! - [`IdVector`]: Elias-Fano coded positions of the ones (ID). Select and
//!   partial rank are direct; full rank is a binary search over select.
//! - [`FixedBlockVector`]: fixed-size blocks, each an independent ID or RRR
//!   vector, plus a table of prefix ranks.
//!
//! Positions are 1-based as in `rank(i)` = ones in `B[1..=i]`, `rank(0) = 0`,
//! and `select(k)` = position of the `k`-th one.

mod bits;
mod fixed;
mod id;
mod io;
mod plain;
mod rrr;

pub use bits::RawBits;
pub use fixed::FixedBlockVector;
pub use id::IdVector;
pub use plain::PlainBitvector;
pub use rrr::RrrVector;

pub(crate) use io::{Reader, Writer};

use crate::error::{Error, Result};

/// Space used by a bitvector, in bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PayloadBits {
    /// Bits of the encoded content itself.
    pub entropy: u64,
    /// Bits of rank/select directories, samples and per-block metadata.
    pub overhead: u64,
}

impl PayloadBits {
    pub fn total(&self) -> u64 {
        self.entropy + self.overhead
    }
}

impl std::ops::Add for PayloadBits {
    type Output = PayloadBits;

    fn add(self, rhs: PayloadBits) -> PayloadBits {
        PayloadBits {
            entropy: self.entropy + rhs.entropy,
            overhead: self.overhead + rhs.overhead,
        }
    }
}

impl std::iter::Sum for PayloadBits {
    fn sum<I: Iterator<Item = PayloadBits>>(iter: I) -> PayloadBits {
        iter.fold(PayloadBits::default(), |a, b| a + b)
    }
}

/// Rank, select and partial rank over a static bitvector.
pub trait RankSelect {
    /// Length `m` in bits.
    fn len(&self) -> u64;

    /// Number of ones.
    fn ones(&self) -> u64;

    /// Bit at 0-based index `idx < len`.
    fn bit(&self, idx: u64) -> bool;

    /// Ones among the first `i` bits; `i <= len`.
    fn rank_unchecked(&self, i: u64) -> u64;

    /// 1-based position of the `k`-th one; `1 <= k <= ones`.
    fn select_unchecked(&self, k: u64) -> u64;

    /// `rank(pos)` if bit `pos` (1-based) is set, else `None`.
    fn prank_unchecked(&self, pos: u64) -> Option<u64> {
        self.bit(pos - 1).then(|| self.rank_unchecked(pos))
    }

    fn payload_bits(&self) -> PayloadBits;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn rank(&self, i: u64) -> Result<u64> {
        if i > self.len() {
            return Err(Error::PositionOutOfRange { pos: i, len: self.len() });
        }
        Ok(self.rank_unchecked(i))
    }

    fn select(&self, k: u64) -> Result<u64> {
        if k == 0 || k > self.ones() {
            return Err(Error::RankOutOfRange { rank: k, ones: self.ones() });
        }
        Ok(self.select_unchecked(k))
    }

    /// Partial rank: `None` (the `-1` answer) when bit `pos` is zero.
    fn prank(&self, pos: u64) -> Result<Option<u64>> {
        if pos == 0 || pos > self.len() {
            return Err(Error::PositionOutOfRange { pos, len: self.len() });
        }
        Ok(self.prank_unchecked(pos))
    }

    /// Bit at 1-based position `pos`.
    fn get(&self, pos: u64) -> Result<bool> {
        if pos == 0 || pos > self.len() {
            return Err(Error::PositionOutOfRange { pos, len: self.len() });
        }
        Ok(self.bit(pos - 1))
    }

    /// Decodes all bits.
    fn to_raw(&self) -> RawBits {
        RawBits::from_bools((0..self.len()).map(|i| self.bit(i)))
    }
}

/// Default RRR block size for a vector of length `m`: `floor(log2(m) / 2)`
/// clamped to `1..=24`.
pub fn default_rrr_block(m: u64) -> u32 {
    if m < 2 {
        return 1;
    }
    let log = 63 - m.leading_zeros();
    (log / 2).clamp(1, rrr::MAX_BLOCK)
}

/// Local codec used inside fixed-size blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockCodec {
    Id,
    Rrr,
}

/// Which back-end to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Plain,
    /// RRR with the given block size, or the default for the length.
    Rrr { block: Option<u32> },
    /// Elias-Fano; `complement` stores the zeros instead of the ones.
    Id { complement: bool },
    FixedBlock { block_size: u64, codec: BlockCodec },
}

/// A bitvector in any of the four back-ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodedBitvector {
    Plain(PlainBitvector),
    Rrr(RrrVector),
    Id(IdVector),
    FixedBlock(FixedBlockVector),
}

const TAG_PLAIN: u8 = 0;
const TAG_RRR: u8 = 1;
const TAG_ID: u8 = 2;
const TAG_FIXED: u8 = 3;

impl EncodedBitvector {
    pub fn build(bits: &RawBits, backend: Backend) -> Self {
        match backend {
            Backend::Plain => EncodedBitvector::Plain(PlainBitvector::new(bits)),
            Backend::Rrr { block } => EncodedBitvector::Rrr(match block {
                Some(u) => RrrVector::with_block_size(bits, u),
                None => RrrVector::new(bits),
            }),
            Backend::Id { complement } => EncodedBitvector::Id(IdVector::with_complement(bits, complement)),
            Backend::FixedBlock { block_size, codec } => {
                EncodedBitvector::FixedBlock(FixedBlockVector::new(bits, block_size, codec))
            }
        }
    }

    fn inner(&self) -> &dyn RankSelect {
        match self {
            EncodedBitvector::Plain(v) => v,
            EncodedBitvector::Rrr(v) => v,
            EncodedBitvector::Id(v) => v,
            EncodedBitvector::FixedBlock(v) => v,
        }
    }

    /// Serialized form: tag byte, length as `u64` LE, then length-prefixed
    /// back-end sections.
    pub fn write_to(&self, w: &mut Writer) {
        let (tag, len) = match self {
            EncodedBitvector::Plain(v) => (TAG_PLAIN, v.len()),
            EncodedBitvector::Rrr(v) => (TAG_RRR, v.len()),
            EncodedBitvector::Id(v) => (TAG_ID, v.len()),
            EncodedBitvector::FixedBlock(v) => (TAG_FIXED, v.len()),
        };
        w.put_u8(tag);
        w.put_u64(len);
        match self {
            EncodedBitvector::Plain(v) => v.write_sections(w),
            EncodedBitvector::Rrr(v) => v.write_sections(w),
            EncodedBitvector::Id(v) => v.write_sections(w),
            EncodedBitvector::FixedBlock(v) => v.write_sections(w),
        }
    }

    pub fn read_from(r: &mut Reader<'_>) -> Result<Self> {
        let tag = r.get_u8()?;
        let len = r.get_u64()?;
        Ok(match tag {
            TAG_PLAIN => EncodedBitvector::Plain(PlainBitvector::read_sections(r, len)?),
            TAG_RRR => EncodedBitvector::Rrr(RrrVector::read_sections(r, len)?),
            TAG_ID => EncodedBitvector::Id(IdVector::read_sections(r, len)?),
            TAG_FIXED => EncodedBitvector::FixedBlock(FixedBlockVector::read_sections(r, len)?),
            other => return Err(Error::Malformed(format!("unknown bitvector tag {other}"))),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new();
        self.write_to(&mut w);
        w.into_bytes()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let v = Self::read_from(&mut r)?;
        r.expect_end()?;
        Ok(v)
    }
}

impl RankSelect for EncodedBitvector {
    fn len(&self) -> u64 {
        self.inner().len()
    }

    fn ones(&self) -> u64 {
        self.inner().ones()
    }

    fn bit(&self, idx: u64) -> bool {
        self.inner().bit(idx)
    }

    fn rank_unchecked(&self, i: u64) -> u64 {
        self.inner().rank_unchecked(i)
    }

    fn select_unchecked(&self, k: u64) -> u64 {
        self.inner().select_unchecked(k)
    }

    fn prank_unchecked(&self, pos: u64) -> Option<u64> {
        self.inner().prank_unchecked(pos)
    }

    fn payload_bits(&self) -> PayloadBits {
        self.inner().payload_bits()
    }
}

/// Lowest `i` with `select(i) > pos`, minus one: the rank of `pos` computed
/// by binary search over select.
pub(crate) fn rank_by_select_search<F: Fn(u64) -> u64>(ones: u64, pos: u64, select: F) -> u64 {
    let (mut lo, mut hi) = (0u64, ones);
    // Invariant: select(lo) <= pos (select(0) = 0), select(hi + 1) > pos.
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if select(mid) <= pos {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}
