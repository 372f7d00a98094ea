/// A growable packed bit array. Bit `i` is bit `i % 64` of word `i / 64`;
/// bits past `len` are always zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RawBits {
    words: Vec<u64>,
    len: u64,
}

impl RawBits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: u64) -> Self {
        RawBits {
            words: vec![0; len.div_ceil(64) as usize],
            len,
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = RawBits::new();
        for b in bits {
            out.push(b);
        }
        out
    }

    /// Parses a string of `0`/`1` characters; other characters are skipped.
    pub fn from_str01(s: &str) -> Self {
        RawBits::from_bools(s.chars().filter(|c| matches!(c, '0' | '1')).map(|c| c == '1'))
    }

    /// Wraps words, masking off anything past `len`.
    pub fn from_words(mut words: Vec<u64>, len: u64) -> Option<Self> {
        if words.len() as u64 != len.div_ceil(64) {
            return None;
        }
        if !len.is_multiple_of(64) {
            let last = words.last_mut().expect("nonempty when len % 64 != 0");
            if *last >> (len % 64) != 0 {
                return None;
            }
        }
        if len.is_multiple_of(64) && words.is_empty() && len != 0 {
            return None;
        }
        words.truncate(len.div_ceil(64) as usize);
        Some(RawBits { words, len })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        (self.words[(i / 64) as usize] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: u64, value: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[(i / 64) as usize];
        if value {
            *w |= 1 << (i % 64);
        } else {
            *w &= !(1 << (i % 64));
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[(self.len / 64) as usize] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    /// Appends the low `width` bits of `value`, least significant first.
    pub fn push_bits(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0);
        if width == 0 {
            return;
        }
        let off = (self.len % 64) as u32;
        if off == 0 {
            self.words.push(value);
        } else {
            *self.words.last_mut().expect("partial word") |= value << off;
            if off + width > 64 {
                self.words.push(value >> (64 - off));
            }
        }
        self.len += width as u64;
    }

    /// Reads `width` bits starting at `pos`, least significant first.
    pub fn get_bits(&self, pos: u64, width: u32) -> u64 {
        debug_assert!(width <= 64 && pos + width as u64 <= self.len);
        if width == 0 {
            return 0;
        }
        let w = (pos / 64) as usize;
        let off = (pos % 64) as u32;
        let mut v = self.words[w] >> off;
        if off + width > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        if width < 64 {
            v &= (1u64 << width) - 1;
        }
        v
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Copies bits `[start, start + len)` into a new array.
    pub fn slice(&self, start: u64, len: u64) -> RawBits {
        let mut out = RawBits::new();
        let mut pos = start;
        let end = start + len;
        while pos < end {
            let width = (end - pos).min(64) as u32;
            out.push_bits(self.get_bits(pos, width), width);
            pos += width as u64;
        }
        out
    }

    /// Bitwise complement over the first `len` bits.
    pub fn complement(&self) -> RawBits {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if !self.len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (self.len % 64)) - 1;
            }
        }
        RawBits { words, len: self.len }
    }
}

impl std::fmt::Display for RawBits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Position (0-based) of the `k`-th set bit of `w`, `k` 0-based.
pub(crate) fn select_in_word(mut w: u64, k: u32) -> u32 {
    debug_assert!(k < w.count_ones());
    for _ in 0..k {
        w &= w - 1;
    }
    w.trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_and_read_bits() {
        let mut b = RawBits::new();
        b.push_bits(0b101, 3);
        b.push_bits(u64::MAX >> 3, 61);
        b.push_bits(0x3ff, 10);
        assert_eq!(b.len(), 74);
        assert_eq!(b.get_bits(0, 3), 0b101);
        assert_eq!(b.get_bits(3, 61), u64::MAX >> 3);
        assert_eq!(b.get_bits(64, 10), 0x3ff);
        assert_eq!(b.get_bits(60, 8), 0xff);
    }

    #[test]
    fn string_round_trip_and_complement() {
        let b = RawBits::from_str01("1010010");
        assert_eq!(b.to_string(), "1010010");
        assert_eq!(b.complement().to_string(), "0101101");
        assert_eq!(b.slice(2, 4).to_string(), "1001");
        assert_eq!(b.count_ones(), 3);
    }

    #[test]
    fn from_words_rejects_stray_bits() {
        assert!(RawBits::from_words(vec![0b1000], 3).is_none());
        assert!(RawBits::from_words(vec![0b100], 3).is_some());
        assert!(RawBits::from_words(vec![], 0).is_some());
        assert!(RawBits::from_words(vec![1, 1], 64).is_none());
    }

    #[test]
    fn select_in_word_positions() {
        assert_eq!(select_in_word(0b1010_0100, 0), 2);
        assert_eq!(select_in_word(0b1010_0100, 2), 7);
        assert_eq!(select_in_word(1 << 63, 0), 63);
    }
}
