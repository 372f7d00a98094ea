use super::bits::RawBits;
use super::io::{Reader, Writer};
use super::{BlockCodec, EncodedBitvector, IdVector, PayloadBits, RankSelect, RrrVector};
use crate::error::{Error, Result};

/// Fixed-block compression: the vector is cut into blocks of `block_size`
/// bits, each encoded on its own, and `prefix[i]` holds the ones before
/// block `i`. `rank(j) = prefix[i] + rank_local(j - i * block_size)` for the
/// block `i` containing position `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedBlockVector {
    len: u64,
    block_size: u64,
    codec: BlockCodec,
    blocks: Vec<EncodedBitvector>,
    /// Ones before each block, plus the total.
    prefix: Vec<u64>,
}

impl FixedBlockVector {
    /// # Panics
    /// If `block_size` is zero.
    pub fn new(bits: &RawBits, block_size: u64, codec: BlockCodec) -> Self {
        assert!(block_size > 0, "block size must be positive");
        let len = bits.len();
        let nblocks = len.div_ceil(block_size);
        let blocks = (0..nblocks)
            .map(|i| {
                let start = i * block_size;
                let local = bits.slice(start, (len - start).min(block_size));
                Self::encode_local(&local, codec)
            })
            .collect();
        Self::from_blocks(len, block_size, codec, blocks)
    }

    fn encode_local(bits: &RawBits, codec: BlockCodec) -> EncodedBitvector {
        match codec {
            BlockCodec::Id => EncodedBitvector::Id(IdVector::auto(bits)),
            BlockCodec::Rrr => EncodedBitvector::Rrr(RrrVector::new(bits)),
        }
    }

    fn from_blocks(len: u64, block_size: u64, codec: BlockCodec, blocks: Vec<EncodedBitvector>) -> Self {
        let mut prefix = Vec::with_capacity(blocks.len() + 1);
        let mut total = 0;
        prefix.push(0);
        for b in &blocks {
            total += b.ones();
            prefix.push(total);
        }
        FixedBlockVector {
            len,
            block_size,
            codec,
            blocks,
            prefix,
        }
    }

    pub fn block_size(&self) -> u64 {
        self.block_size
    }

    pub fn codec(&self) -> BlockCodec {
        self.codec
    }

    pub fn blocks(&self) -> &[EncodedBitvector] {
        &self.blocks
    }

    /// The directory entry for block `i`: ones before it.
    pub fn prefix_rank(&self, i: usize) -> u64 {
        self.prefix[i]
    }

    pub(crate) fn write_sections(&self, w: &mut Writer) {
        w.section(|s| {
            s.put_u64(self.block_size);
            s.put_u8(match self.codec {
                BlockCodec::Id => 0,
                BlockCodec::Rrr => 1,
            });
        });
        w.section(|s| {
            for b in &self.blocks {
                b.write_to(s);
            }
        });
    }

    pub(crate) fn read_sections(r: &mut Reader<'_>, len: u64) -> Result<Self> {
        let mut params = r.section()?;
        let block_size = params.get_u64()?;
        let codec = match params.get_u8()? {
            0 => BlockCodec::Id,
            1 => BlockCodec::Rrr,
            x => return Err(Error::Malformed(format!("fixed-block codec {x}"))),
        };
        params.expect_end()?;
        if block_size == 0 {
            return Err(Error::Malformed("fixed-block size 0".into()));
        }
        let mut body = r.section()?;
        let nblocks = len.div_ceil(block_size);
        let mut blocks = Vec::with_capacity(nblocks.min(1 << 20) as usize);
        for i in 0..nblocks {
            let b = EncodedBitvector::read_from(&mut body)?;
            let expected = (len - i * block_size).min(block_size);
            let codec_ok = matches!(
                (&b, codec),
                (EncodedBitvector::Id(_), BlockCodec::Id) | (EncodedBitvector::Rrr(_), BlockCodec::Rrr)
            );
            if b.len() != expected || !codec_ok {
                return Err(Error::Malformed(format!("fixed-block {i} has wrong length or codec")));
            }
            blocks.push(b);
        }
        body.expect_end()?;
        Ok(Self::from_blocks(len, block_size, codec, blocks))
    }
}

impl RankSelect for FixedBlockVector {
    fn len(&self) -> u64 {
        self.len
    }

    fn ones(&self) -> u64 {
        *self.prefix.last().expect("prefix has a total")
    }

    fn bit(&self, idx: u64) -> bool {
        let i = idx / self.block_size;
        self.blocks[i as usize].bit(idx - i * self.block_size)
    }

    fn rank_unchecked(&self, j: u64) -> u64 {
        if j == 0 {
            return 0;
        }
        let i = (j - 1) / self.block_size;
        self.prefix[i as usize] + self.blocks[i as usize].rank_unchecked(j - i * self.block_size)
    }

    fn select_unchecked(&self, k: u64) -> u64 {
        // Last block whose prefix is below k.
        let i = self.prefix.partition_point(|&p| p < k) - 1;
        i as u64 * self.block_size + self.blocks[i].select_unchecked(k - self.prefix[i])
    }

    fn prank_unchecked(&self, pos: u64) -> Option<u64> {
        let i = (pos - 1) / self.block_size;
        self.blocks[i as usize]
            .prank_unchecked(pos - i * self.block_size)
            .map(|r| r + self.prefix[i as usize])
    }

    /// Local payloads summed; the prefix-rank table and one block pointer per
    /// block are overhead.
    fn payload_bits(&self) -> PayloadBits {
        let local: PayloadBits = self.blocks.iter().map(RankSelect::payload_bits).sum();
        PayloadBits {
            entropy: local.entropy,
            overhead: local.overhead + 64 * self.prefix.len() as u64 + 64 * self.blocks.len() as u64,
        }
    }
}
