//! Indexable dictionary over the positions of the ones, Elias-Fano coded.
//!
//! Position `p` (0-based) of the `i`-th stored one is split into `low_width`
//! low bits, kept verbatim, and a high part `p >> low_width`, kept in unary
//! as a one at index `high + i` of the upper bitvector. Select is a select
//! on the upper bits; membership scans the bucket of `p`'s high part. Full
//! rank is answered by binary search over select.
//!
//! With `complement` set the structure stores the zeros instead, which keeps
//! the payload small when more than half the bits are ones.

use super::bits::RawBits;
use super::io::{Reader, Writer};
use super::plain::PlainBitvector;
use super::{rank_by_select_search, PayloadBits, RankSelect};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdVector {
    len: u64,
    complement: bool,
    /// Number of stored positions (ones, or zeros when complemented).
    stored: u64,
    low_width: u32,
    low: RawBits,
    upper: PlainBitvector,
}

fn low_width_for(len: u64, stored: u64) -> u32 {
    let stored = stored.max(1);
    if len <= stored {
        0
    } else {
        63 - (len / stored).leading_zeros()
    }
}

impl IdVector {
    pub fn new(bits: &RawBits) -> Self {
        Self::with_complement(bits, false)
    }

    /// Complements automatically when more than half the bits are ones.
    pub fn auto(bits: &RawBits) -> Self {
        Self::with_complement(bits, bits.count_ones() * 2 > bits.len())
    }

    pub fn with_complement(bits: &RawBits, complement: bool) -> Self {
        let source = if complement { bits.complement() } else { bits.clone() };
        let positions: Vec<u64> = (0..source.len()).filter(|&i| source.get(i)).collect();
        Self::from_positions(bits.len(), complement, &positions)
    }

    fn from_positions(len: u64, complement: bool, positions: &[u64]) -> Self {
        let stored = positions.len() as u64;
        let low_width = low_width_for(len, stored);
        let mut low = RawBits::new();
        let upper_len = stored + (len >> low_width) + 1;
        let mut upper = RawBits::zeros(upper_len);
        for (i, &p) in positions.iter().enumerate() {
            low.push_bits(p & ((1u64 << low_width) - 1), low_width);
            upper.set((p >> low_width) + i as u64, true);
        }
        IdVector {
            len,
            complement,
            stored,
            low_width,
            low,
            upper: PlainBitvector::new(&upper),
        }
    }

    pub fn is_complemented(&self) -> bool {
        self.complement
    }

    /// 0-based position of the `k`-th stored element (1-based `k`).
    fn stored_position(&self, k: u64) -> u64 {
        let high = self.upper.select_unchecked(k) - 1 - (k - 1);
        (high << self.low_width) | self.low.get_bits((k - 1) * self.low_width as u64, self.low_width)
    }

    /// Stored-element rank of 0-based position `p` if `p` is stored.
    fn stored_member(&self, p: u64) -> Option<u64> {
        if self.stored == 0 {
            return None;
        }
        let high = p >> self.low_width;
        let low = p & ((1u64 << self.low_width) - 1);
        // Elements with this high part occupy stored indices [from, to).
        let from = if high == 0 { 0 } else { self.upper.select0_unchecked(high) - high };
        let to = self.upper.select0_unchecked(high + 1) - (high + 1);
        let (mut lo, mut hi) = (from, to);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let v = self.low.get_bits(mid * self.low_width as u64, self.low_width);
            match v.cmp(&low) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid + 1),
            }
        }
        None
    }

    /// Rank over the stored elements (ones, or zeros if complemented) by
    /// binary search over select.
    fn stored_rank(&self, i: u64) -> u64 {
        rank_by_select_search(self.stored, i, |k| if k == 0 { 0 } else { self.stored_position(k) + 1 })
    }

    /// Rank answered by binary search over select queries.
    pub fn rank_via_select(&self, i: u64) -> Result<u64> {
        self.rank(i)
    }

    pub(crate) fn write_sections(&self, w: &mut Writer) {
        w.section(|s| {
            s.put_u8(self.complement as u8);
            s.put_u8(self.low_width as u8);
            s.put_u64(self.stored);
        });
        w.words_section(self.low.words());
        w.words_section(self.upper.raw().words());
    }

    pub(crate) fn read_sections(r: &mut Reader<'_>, len: u64) -> Result<Self> {
        let mut params = r.section()?;
        let complement = match params.get_u8()? {
            0 => false,
            1 => true,
            x => return Err(Error::Malformed(format!("id complement flag {x}"))),
        };
        let low_width = params.get_u8()? as u32;
        let stored = params.get_u64()?;
        params.expect_end()?;
        if stored > len || low_width != low_width_for(len, stored) {
            return Err(Error::Malformed("id parameters inconsistent with length".into()));
        }
        let low = RawBits::from_words(r.words_section()?, stored * low_width as u64)
            .ok_or_else(|| Error::Malformed("id low bits".into()))?;
        let upper_len = stored + (len >> low_width) + 1;
        let upper = RawBits::from_words(r.words_section()?, upper_len)
            .ok_or_else(|| Error::Malformed("id upper bits".into()))?;
        if upper.count_ones() != stored {
            return Err(Error::Malformed("id upper bits disagree with count".into()));
        }
        let v = IdVector {
            len,
            complement,
            stored,
            low_width,
            low,
            upper: PlainBitvector::new(&upper),
        };
        let mut prev = None;
        for k in 1..=stored {
            let p = v.stored_position(k);
            if p >= len || prev.is_some_and(|q| q >= p) {
                return Err(Error::Malformed("id positions not strictly increasing within length".into()));
            }
            prev = Some(p);
        }
        Ok(v)
    }
}

impl RankSelect for IdVector {
    fn len(&self) -> u64 {
        self.len
    }

    fn ones(&self) -> u64 {
        if self.complement {
            self.len - self.stored
        } else {
            self.stored
        }
    }

    fn bit(&self, idx: u64) -> bool {
        self.stored_member(idx).is_some() != self.complement
    }

    fn rank_unchecked(&self, i: u64) -> u64 {
        let r = self.stored_rank(i);
        if self.complement {
            i - r
        } else {
            r
        }
    }

    fn select_unchecked(&self, k: u64) -> u64 {
        if !self.complement {
            return self.stored_position(k) + 1;
        }
        // Smallest position p with rank(p) = k.
        let (mut lo, mut hi) = (k, self.len);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.rank_unchecked(mid) < k {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn prank_unchecked(&self, pos: u64) -> Option<u64> {
        match (self.stored_member(pos - 1), self.complement) {
            (Some(r), false) => Some(r),
            (None, false) => None,
            (Some(_), true) => None,
            (None, true) => Some(self.rank_unchecked(pos)),
        }
    }

    /// Low bits and unary upper bits are payload; the upper bits' rank and
    /// select directories are overhead.
    fn payload_bits(&self) -> PayloadBits {
        let upper = self.upper.payload_bits();
        PayloadBits {
            entropy: self.low.len() + upper.entropy,
            overhead: upper.overhead + 72,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_via_select_examples() {
        let v = IdVector::new(&RawBits::from_str01("1010010"));
        assert_eq!(v.rank_via_select(5), Ok(2));
        assert_eq!(v.rank_via_select(0), Ok(0));
        let v = IdVector::new(&RawBits::from_str01("0000100"));
        assert_eq!(v.rank_via_select(4), Ok(0));
    }

    #[test]
    fn prank_distinguishes_zero_bits() {
        let bits = RawBits::from_str01("1101110010111");
        for complement in [false, true] {
            let v = IdVector::with_complement(&bits, complement);
            let mut rank = 0;
            for i in 0..bits.len() {
                if bits.get(i) {
                    rank += 1;
                    assert_eq!(v.prank(i + 1), Ok(Some(rank)));
                } else {
                    assert_eq!(v.prank(i + 1), Ok(None));
                }
            }
        }
    }

    #[test]
    fn complement_chosen_for_dense_vectors() {
        let dense = RawBits::from_bools((0..100).map(|i| i % 10 != 0));
        let v = IdVector::auto(&dense);
        assert!(v.is_complemented());
        assert_eq!(v.ones(), 90);
        assert!(v.payload_bits().entropy < IdVector::new(&dense).payload_bits().entropy);
        assert!(!IdVector::auto(&RawBits::from_str01("1000")).is_complemented());
    }

    #[test]
    fn payload_near_binomial_bound() {
        // 64 ones in 4096 bits: low width 6, upper 64 + 64 + 1 bits.
        let bits = RawBits::from_bools((0..4096).map(|i| i % 64 == 3));
        let v = IdVector::new(&bits);
        assert_eq!(v.payload_bits().entropy, 64 * 6 + 129);
    }
}
