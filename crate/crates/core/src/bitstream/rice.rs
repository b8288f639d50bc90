//! Adaptive Golomb-Rice coding.
//!
//! The parameter `k` tracks the running mean of coded magnitudes: it is the
//! smallest `k` with `count * 2^k >= sum`. Quotients of 24 or more escape to
//! 24 one-bits followed by the raw 32-bit value. Bits are packed MSB first.

use crate::error::{Error, Result};

const ESCAPE_QUOTIENT: u64 = 24;
const ESCAPE_BITS: u32 = 32;
const RESCALE_AT: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RiceContext {
    sum: u64,
    count: u64,
}

impl Default for RiceContext {
    fn default() -> Self {
        Self { sum: 4, count: 1 }
    }
}

impl RiceContext {
    pub fn k(&self) -> u32 {
        let mut k = 0;
        while self.count << k < self.sum {
            k += 1;
        }
        k
    }

    pub fn update(&mut self, v: u64) {
        self.sum += v;
        self.count += 1;
        if self.count == RESCALE_AT {
            self.sum = (self.sum + 1) >> 1;
            self.count = RESCALE_AT / 2;
        }
    }
}

/// A packed bit sequence; the final byte is zero padded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitString {
    pub bytes: Vec<u8>,
    pub bit_len: u64,
}

impl BitString {
    pub fn new(bytes: Vec<u8>, bit_len: u64) -> Result<Self> {
        if bit_len.div_ceil(8) != bytes.len() as u64 {
            return Err(Error::Bitstream(format!("{bit_len} bits do not fill {} bytes", bytes.len())));
        }
        Ok(Self { bytes, bit_len })
    }
}

#[derive(Debug, Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: u64,
}

impl BitWriter {
    pub fn push_bit(&mut self, bit: bool) {
        if self.bit_len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.bit_len % 8);
        }
        self.bit_len += 1;
    }

    /// Writes the low `n` bits of `value`, most significant first.
    pub fn push_bits(&mut self, value: u64, n: u32) {
        for i in (0..n).rev() {
            self.push_bit(value >> i & 1 == 1);
        }
    }

    pub fn finish(self) -> BitString {
        BitString { bytes: self.bytes, bit_len: self.bit_len }
    }
}

#[derive(Debug)]
pub struct BitReader<'a> {
    bits: &'a BitString,
    pos: u64,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self { bits, pos: 0 }
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        if self.pos >= self.bits.bit_len {
            return Err(Error::Bitstream(format!("read past end of {}-bit payload", self.bits.bit_len)));
        }
        let byte = self.bits.bytes[(self.pos / 8) as usize];
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read_bits(&mut self, n: u32) -> Result<u64> {
        let mut v = 0;
        for _ in 0..n {
            v = v << 1 | u64::from(self.read_bit()?);
        }
        Ok(v)
    }

    pub fn remaining(&self) -> u64 {
        self.bits.bit_len - self.pos
    }
}

#[derive(Debug, Default)]
pub struct RiceEncoder {
    writer: BitWriter,
    ctx: RiceContext,
}

impl RiceEncoder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts a fresh adaptation context (at each stage boundary).
    pub fn reset_context(&mut self) {
        self.ctx = RiceContext::default();
    }

    pub fn encode(&mut self, v: u64) -> Result<()> {
        let k = self.ctx.k();
        let q = if k >= 64 { 0 } else { v >> k };
        if q < ESCAPE_QUOTIENT {
            for _ in 0..q {
                self.writer.push_bit(true);
            }
            self.writer.push_bit(false);
            self.writer.push_bits(v, k);
        } else {
            if v >> ESCAPE_BITS != 0 {
                return Err(Error::EscapeOverflow(v));
            }
            for _ in 0..ESCAPE_QUOTIENT {
                self.writer.push_bit(true);
            }
            self.writer.push_bits(v, ESCAPE_BITS);
        }
        self.ctx.update(v);
        Ok(())
    }

    pub fn finish(self) -> BitString {
        self.writer.finish()
    }
}

#[derive(Debug)]
pub struct RiceDecoder<'a> {
    reader: BitReader<'a>,
    ctx: RiceContext,
}

impl<'a> RiceDecoder<'a> {
    pub fn new(bits: &'a BitString) -> Self {
        Self { reader: BitReader::new(bits), ctx: RiceContext::default() }
    }

    pub fn reset_context(&mut self) {
        self.ctx = RiceContext::default();
    }

    pub fn decode(&mut self) -> Result<u64> {
        let k = self.ctx.k();
        let mut q = 0;
        while q < ESCAPE_QUOTIENT && self.reader.read_bit()? {
            q += 1;
        }
        let v = if q == ESCAPE_QUOTIENT {
            self.reader.read_bits(ESCAPE_BITS)?
        } else {
            let r = self.reader.read_bits(k)?;
            q << k | r
        };
        self.ctx.update(v);
        Ok(v)
    }

    pub fn remaining_bits(&self) -> u64 {
        self.reader.remaining()
    }
}

/// Codes a list with one fresh context.
pub fn rice_encode(values: &[u64]) -> Result<BitString> {
    let mut enc = RiceEncoder::new();
    for &v in values {
        enc.encode(v)?;
    }
    Ok(enc.finish())
}

pub fn rice_decode(bits: &BitString, count: usize) -> Result<Vec<u64>> {
    let mut dec = RiceDecoder::new(bits);
    (0..count).map(|_| dec.decode()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_context_uses_k2() {
        assert_eq!(RiceContext::default().k(), 2);
        let bits = rice_encode(&[0]).unwrap();
        assert_eq!(bits.bit_len, 3);
        assert_eq!(bits.bytes, vec![0b0000_0000]);
    }

    #[test]
    fn empty_list() {
        let bits = rice_encode(&[]).unwrap();
        assert_eq!(bits, BitString::default());
        assert_eq!(rice_decode(&bits, 0).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn hand_traced_sequence() {
        // k=2: 5 -> q=1 "10", r="01"; ctx (9,2) -> k=3: 3 -> "0" "011"
        let bits = rice_encode(&[5, 3]).unwrap();
        assert_eq!(bits.bit_len, 8);
        assert_eq!(bits.bytes, vec![0b1001_0011]);
    }

    #[test]
    fn escape_path() {
        // k=2, q = 100 >> 2 = 25 >= 24
        let bits = rice_encode(&[100]).unwrap();
        assert_eq!(bits.bit_len, 24 + 32);
        assert_eq!(rice_decode(&bits, 1).unwrap(), vec![100]);
        assert!(matches!(rice_encode(&[1 << 32]), Err(Error::EscapeOverflow(_))));
    }

    #[test]
    fn context_rescales() {
        let mut ctx = RiceContext::default();
        for _ in 0..63 {
            ctx.update(2);
        }
        assert_eq!(ctx, RiceContext { sum: (4 + 126 + 1) >> 1, count: 32 });
    }

    #[test]
    fn truncated_stream() {
        let bits = rice_encode(&[7, 8, 9]).unwrap();
        assert!(rice_decode(&bits, 4).is_err());
        let cut = BitString { bytes: bits.bytes.clone(), bit_len: bits.bit_len - 1 };
        assert!(rice_decode(&cut, 3).is_err());
    }
}
