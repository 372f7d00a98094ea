//! Class/offset block coding.
//!
//! A block of `len` bits with `class` ones is stored as its class and its
//! offset: the index of its bit string among all length-`len` strings with
//! `class` ones, in lexicographic order reading bit 0 first. The offset takes
//! `ceil(log2 C(len, class))` bits.

use super::bits::{select_in_word, RawBits};
use super::io::{Reader, Writer};
use super::{default_rrr_block, PayloadBits, RankSelect};
use crate::error::{Error, Result};

pub(crate) const MAX_BLOCK: u32 = 24;
const BLOCKS_PER_SUPER: usize = 32;

const fn binomial_table() -> [[u64; MAX_BLOCK as usize + 1]; MAX_BLOCK as usize + 1] {
    let mut t = [[0u64; MAX_BLOCK as usize + 1]; MAX_BLOCK as usize + 1];
    let mut n = 0;
    while n <= MAX_BLOCK as usize {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIAL: [[u64; MAX_BLOCK as usize + 1]; MAX_BLOCK as usize + 1] = binomial_table();

fn choose(n: u32, k: u32) -> u64 {
    if k > n {
        0
    } else {
        BINOMIAL[n as usize][k as usize]
    }
}

/// `ceil(log2 C(len, class))`, the offset width of a block.
pub fn offset_width(len: u32, class: u32) -> u32 {
    let c = choose(len, class);
    debug_assert!(c > 0);
    if c <= 1 {
        0
    } else {
        64 - (c - 1).leading_zeros()
    }
}

/// Lexicographic rank of the low `len` bits of `block` among words with the
/// same popcount (bit 0 is the first character).
pub fn encode_block(block: u64, len: u32) -> (u32, u64) {
    let class = block.count_ones();
    let mut k = class;
    let mut offset = 0;
    for i in 0..len {
        if k == 0 {
            break;
        }
        if block >> i & 1 == 1 {
            offset += choose(len - i - 1, k);
            k -= 1;
        }
    }
    (class, offset)
}

pub fn decode_block(class: u32, mut offset: u64, len: u32) -> u64 {
    let mut k = class;
    let mut block = 0;
    for i in 0..len {
        if k == 0 {
            break;
        }
        let c = choose(len - i - 1, k);
        if offset >= c {
            block |= 1 << i;
            offset -= c;
            k -= 1;
        }
    }
    block
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Superblock {
    rank: u64,
    offset_pos: u64,
}

/// Block-compressed bitvector supporting rank and select.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrrVector {
    len: u64,
    block: u32,
    ones: u64,
    classes: Vec<u8>,
    offsets: RawBits,
    supers: Vec<Superblock>,
}

impl RrrVector {
    pub fn new(bits: &RawBits) -> Self {
        Self::with_block_size(bits, default_rrr_block(bits.len()))
    }

    /// # Panics
    /// If `block` is not in `1..=24`.
    pub fn with_block_size(bits: &RawBits, block: u32) -> Self {
        assert!((1..=MAX_BLOCK).contains(&block), "block size must be in 1..=24");
        let len = bits.len();
        let nblocks = len.div_ceil(block as u64) as usize;
        let mut classes = Vec::with_capacity(nblocks);
        let mut offsets = RawBits::new();
        let mut ones = 0u64;
        for b in 0..nblocks {
            let start = b as u64 * block as u64;
            let blen = (len - start).min(block as u64) as u32;
            let word = bits.get_bits(start, blen);
            let (class, offset) = encode_block(word, blen);
            classes.push(class as u8);
            offsets.push_bits(offset, offset_width(blen, class));
            ones += class as u64;
        }
        let mut v = RrrVector {
            len,
            block,
            ones,
            classes,
            offsets,
            supers: Vec::new(),
        };
        v.build_supers();
        v
    }

    fn build_supers(&mut self) {
        self.supers.clear();
        let mut rank = 0;
        let mut pos = 0;
        for (b, &class) in self.classes.iter().enumerate() {
            if b % BLOCKS_PER_SUPER == 0 {
                self.supers.push(Superblock { rank, offset_pos: pos });
            }
            rank += class as u64;
            pos += offset_width(self.block_len(b), class as u32) as u64;
        }
    }

    pub fn block_size(&self) -> u32 {
        self.block
    }

    pub fn num_blocks(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[u8] {
        &self.classes
    }

    fn block_len(&self, b: usize) -> u32 {
        let start = b as u64 * self.block as u64;
        (self.len - start).min(self.block as u64) as u32
    }

    /// Walks from the superblock containing block `b` to `b`, returning the
    /// rank before `b` and the bit position of `b`'s offset.
    fn locate(&self, b: usize) -> (u64, u64) {
        let s = b / BLOCKS_PER_SUPER;
        let mut rank = self.supers[s].rank;
        let mut pos = self.supers[s].offset_pos;
        for j in s * BLOCKS_PER_SUPER..b {
            let class = self.classes[j] as u32;
            rank += class as u64;
            pos += offset_width(self.block_len(j), class) as u64;
        }
        (rank, pos)
    }

    fn decode_at(&self, b: usize, pos: u64) -> u64 {
        let blen = self.block_len(b);
        let class = self.classes[b] as u32;
        let w = offset_width(blen, class);
        decode_block(class, self.offsets.get_bits(pos, w), blen)
    }

    /// Decoded bits of block `b`.
    pub fn block_bits(&self, b: usize) -> u64 {
        let (_, pos) = self.locate(b);
        self.decode_at(b, pos)
    }

    pub(crate) fn write_sections(&self, w: &mut Writer) {
        w.section(|s| s.put_u8(self.block as u8));
        w.section(|s| s.put_bytes(&self.classes));
        w.words_section(self.offsets.words());
    }

    pub(crate) fn read_sections(r: &mut Reader<'_>, len: u64) -> Result<Self> {
        let mut params = r.section()?;
        let block = params.get_u8()? as u32;
        params.expect_end()?;
        if !(1..=MAX_BLOCK).contains(&block) {
            return Err(Error::Malformed(format!("rrr block size {block}")));
        }
        let mut cs = r.section()?;
        let nblocks = len.div_ceil(block as u64) as usize;
        let classes = cs.take(nblocks)?.to_vec();
        cs.expect_end()?;
        let words = r.words_section()?;
        let mut v = RrrVector {
            len,
            block,
            ones: 0,
            classes,
            offsets: RawBits::new(),
            supers: Vec::new(),
        };
        let mut total_width = 0u64;
        for b in 0..nblocks {
            let blen = v.block_len(b);
            let class = v.classes[b] as u32;
            if class > blen {
                return Err(Error::Malformed(format!("rrr block {b} class {class} exceeds length {blen}")));
            }
            v.ones += class as u64;
            total_width += offset_width(blen, class) as u64;
        }
        v.offsets = RawBits::from_words(words, total_width)
            .ok_or_else(|| Error::Malformed("rrr offset stream length".into()))?;
        v.build_supers();
        let mut pos = 0;
        for b in 0..nblocks {
            let blen = v.block_len(b);
            let class = v.classes[b] as u32;
            let w = offset_width(blen, class);
            if v.offsets.get_bits(pos, w) >= choose(blen, class) {
                return Err(Error::Malformed(format!("rrr block {b} offset out of range")));
            }
            pos += w as u64;
        }
        Ok(v)
    }
}

impl RankSelect for RrrVector {
    fn len(&self) -> u64 {
        self.len
    }

    fn ones(&self) -> u64 {
        self.ones
    }

    fn bit(&self, idx: u64) -> bool {
        let b = (idx / self.block as u64) as usize;
        self.block_bits(b) >> (idx % self.block as u64) & 1 == 1
    }

    fn rank_unchecked(&self, i: u64) -> u64 {
        debug_assert!(i <= self.len);
        if i == self.len {
            return self.ones;
        }
        let b = (i / self.block as u64) as usize;
        let r = (i % self.block as u64) as u32;
        let (rank, pos) = self.locate(b);
        if r == 0 {
            return rank;
        }
        let bits = self.decode_at(b, pos);
        rank + (bits & ((1u64 << r) - 1)).count_ones() as u64
    }

    fn select_unchecked(&self, k: u64) -> u64 {
        debug_assert!(k >= 1 && k <= self.ones);
        // Last superblock whose starting rank is below k.
        let s = self.supers.partition_point(|sb| sb.rank < k) - 1;
        let mut rank = self.supers[s].rank;
        let mut pos = self.supers[s].offset_pos;
        let mut b = s * BLOCKS_PER_SUPER;
        loop {
            let class = self.classes[b] as u64;
            if rank + class >= k {
                let bits = self.decode_at(b, pos);
                let within = select_in_word(bits, (k - rank - 1) as u32) as u64;
                return b as u64 * self.block as u64 + within + 1;
            }
            rank += class;
            pos += offset_width(self.block_len(b), class as u32) as u64;
            b += 1;
        }
    }

    /// Entropy payload is the sum of offset widths; classes and superblock
    /// samples count as overhead.
    fn payload_bits(&self) -> PayloadBits {
        let class_bits = 32 - self.block.leading_zeros();
        PayloadBits {
            entropy: self.offsets.len(),
            overhead: class_bits as u64 * self.classes.len() as u64 + 128 * self.supers.len() as u64,
        }
    }
}
