use super::bits::{select_in_word, RawBits};
use super::io::{Reader, Writer};
use super::{PayloadBits, RankSelect};
use crate::error::{Error, Result};

const WORDS_PER_SUPER: usize = 8;
const SUPER_BITS: u64 = 64 * WORDS_PER_SUPER as u64;
const SELECT_SAMPLE: u64 = 256;

/// Uncompressed bitvector with a superblock/block rank directory and
/// sampled select hints for both bit values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainBitvector {
    bits: RawBits,
    ones: u64,
    /// Ones before each superblock, plus a final total.
    supers: Vec<u64>,
    /// Ones before each word, relative to its superblock.
    blocks: Vec<u16>,
    /// Superblock holding every `SELECT_SAMPLE`-th one (1-based ranks 1, 257, ...).
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl PlainBitvector {
    pub fn new(bits: &RawBits) -> Self {
        let words = bits.words();
        let mut supers = Vec::with_capacity(words.len() / WORDS_PER_SUPER + 2);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0u64;
        let mut rel = 0u64;
        for (i, w) in words.iter().enumerate() {
            if i % WORDS_PER_SUPER == 0 {
                supers.push(total);
                rel = 0;
            }
            blocks.push(rel as u16);
            let c = w.count_ones() as u64;
            rel += c;
            total += c;
        }
        supers.push(total);

        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();
        let nsup = supers.len() - 1;
        let mut next1 = 1u64;
        let mut next0 = 1u64;
        for s in 0..nsup {
            let ones_end = supers[s + 1];
            let bits_end = ((s as u64 + 1) * SUPER_BITS).min(bits.len());
            let zeros_end = bits_end - ones_end;
            while next1 <= ones_end {
                select1_hints.push(s as u32);
                next1 += SELECT_SAMPLE;
            }
            while next0 <= zeros_end {
                select0_hints.push(s as u32);
                next0 += SELECT_SAMPLE;
            }
        }
        PlainBitvector {
            bits: bits.clone(),
            ones: total,
            supers,
            blocks,
            select1_hints,
            select0_hints,
        }
    }

    pub fn raw(&self) -> &RawBits {
        &self.bits
    }

    fn zeros_before_super(&self, s: usize) -> u64 {
        (s as u64 * SUPER_BITS).min(self.bits.len()) - self.supers[s]
    }

    /// 1-based position of the `k`-th zero; `1 <= k <= len - ones`.
    pub fn select0_unchecked(&self, k: u64) -> u64 {
        debug_assert!(k >= 1 && k <= self.bits.len() - self.ones);
        let hint = self.select0_hints[((k - 1) / SELECT_SAMPLE) as usize] as usize;
        let mut s = hint;
        while s + 1 < self.supers.len() - 1 && self.zeros_before_super(s + 1) < k {
            s += 1;
        }
        let mut remaining = k - self.zeros_before_super(s);
        let words = self.bits.words();
        let mut w = s * WORDS_PER_SUPER;
        loop {
            let valid = (self.bits.len() - w as u64 * 64).min(64) as u32;
            let mask = if valid == 64 { u64::MAX } else { (1u64 << valid) - 1 };
            let inv = !words[w] & mask;
            let c = inv.count_ones() as u64;
            if remaining <= c {
                return w as u64 * 64 + select_in_word(inv, (remaining - 1) as u32) as u64 + 1;
            }
            remaining -= c;
            w += 1;
        }
    }

    pub(crate) fn write_sections(&self, w: &mut Writer) {
        w.words_section(self.bits.words());
    }

    pub(crate) fn read_sections(r: &mut Reader<'_>, len: u64) -> Result<Self> {
        let words = r.words_section()?;
        let bits = RawBits::from_words(words, len).ok_or_else(|| Error::Malformed("plain bitvector words".into()))?;
        Ok(PlainBitvector::new(&bits))
    }
}

impl RankSelect for PlainBitvector {
    fn len(&self) -> u64 {
        self.bits.len()
    }

    fn ones(&self) -> u64 {
        self.ones
    }

    fn bit(&self, idx: u64) -> bool {
        self.bits.get(idx)
    }

    fn rank_unchecked(&self, i: u64) -> u64 {
        debug_assert!(i <= self.bits.len());
        if i == self.bits.len() {
            return self.ones;
        }
        let w = (i / 64) as usize;
        let off = i % 64;
        let partial = if off == 0 {
            0
        } else {
            (self.bits.words()[w] & ((1u64 << off) - 1)).count_ones() as u64
        };
        self.supers[w / WORDS_PER_SUPER] + self.blocks[w] as u64 + partial
    }

    fn select_unchecked(&self, k: u64) -> u64 {
        debug_assert!(k >= 1 && k <= self.ones);
        let mut s = self.select1_hints[((k - 1) / SELECT_SAMPLE) as usize] as usize;
        while self.supers[s + 1] < k {
            s += 1;
        }
        let mut remaining = k - self.supers[s];
        let words = self.bits.words();
        let mut w = s * WORDS_PER_SUPER;
        loop {
            let c = words[w].count_ones() as u64;
            if remaining <= c {
                return w as u64 * 64 + select_in_word(words[w], (remaining - 1) as u32) as u64 + 1;
            }
            remaining -= c;
            w += 1;
        }
    }

    fn payload_bits(&self) -> PayloadBits {
        PayloadBits {
            entropy: self.bits.len(),
            overhead: 64 * self.supers.len() as u64
                + 16 * self.blocks.len() as u64
                + 32 * (self.select1_hints.len() + self.select0_hints.len()) as u64,
        }
    }
}
