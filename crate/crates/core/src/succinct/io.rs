//! Little-endian byte writer/reader with length-prefixed sections.

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_bytes(&mut self, bytes: &[u8]) {
        self.buf.extend_from_slice(bytes);
    }

    /// Writes a section: its byte count as `u64` LE, then the bytes.
    pub fn section<F: FnOnce(&mut Writer)>(&mut self, f: F) {
        let mut inner = Writer::new();
        f(&mut inner);
        self.put_u64(inner.buf.len() as u64);
        self.buf.extend_from_slice(&inner.buf);
    }

    pub fn words_section(&mut self, words: &[u64]) {
        self.section(|w| {
            for &x in words {
                w.put_u64(x);
            }
        });
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }
}

#[derive(Debug)]
pub struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Reader { data, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(Error::Truncated)?;
        let out = self.data.get(self.pos..end).ok_or(Error::Truncated)?;
        self.pos = end;
        Ok(out)
    }

    pub fn get_u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub fn get_u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    pub fn get_u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    pub fn get_u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    /// Reads a length-prefixed section and returns a reader over it.
    pub fn section(&mut self) -> Result<Reader<'a>> {
        let len = usize::try_from(self.get_u64()?).map_err(|_| Error::Truncated)?;
        Ok(Reader::new(self.take(len)?))
    }

    pub fn words_section(&mut self) -> Result<Vec<u64>> {
        let mut s = self.section()?;
        if s.data.len() % 8 != 0 {
            return Err(Error::Malformed("word section length not a multiple of 8".into()));
        }
        let mut out = Vec::with_capacity(s.data.len() / 8);
        while !s.is_at_end() {
            out.push(s.get_u64()?);
        }
        Ok(out)
    }

    pub fn is_at_end(&self) -> bool {
        self.pos == self.data.len()
    }

    pub fn expect_end(&self) -> Result<()> {
        if self.is_at_end() {
            Ok(())
        } else {
            Err(Error::Malformed(format!("{} trailing bytes", self.data.len() - self.pos)))
        }
    }
}
