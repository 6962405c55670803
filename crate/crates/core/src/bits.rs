//! Canonical bit encoding.
//!
//! Every label length reported by this crate is the number of bits its
//! canonical encoding occupies, never its in-memory footprint. Fields are
//! written most-significant bit first with widths fixed by the instance
//! (vertex count, palette size), so two labels of the same shape always
//! encode to the same length.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Number of bits needed to store any value in `0..count` (at least one).
pub fn bits_for(count: usize) -> u32 {
    if count <= 2 {
        1
    } else {
        usize::BITS - (count - 1).leading_zeros()
    }
}

/// `⌈log₂ x⌉` with the convention that the result is at least one.
pub fn ceil_log2(x: usize) -> u32 {
    bits_for(x)
}

/// Field widths shared by the vertex/color labeling schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Widths {
    /// Vertex ids and component ids.
    pub id: u32,
    /// Color ids.
    pub color: u32,
    /// Length prefixes of maps and lists.
    pub count: u32,
}

impl Widths {
    pub fn new(n: usize, palette: usize) -> Self {
        Widths {
            id: bits_for(n),
            color: bits_for(palette),
            count: bits_for(n + 1),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of bits written so far.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn write_bool(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    /// Writes the low `width` bits of `value`.
    pub fn write(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(
            width == 64 || value >> width == 0,
            "value {value} does not fit in {width} bits"
        );
        for i in (0..width).rev() {
            self.write_bool((value >> i) & 1 == 1);
        }
    }

    pub fn write_u128(&mut self, value: u128, width: u32) {
        debug_assert!(width <= 128);
        for i in (0..width).rev() {
            self.write_bool((value >> i) & 1 == 1);
        }
    }

    /// Writes `Some(v)` as `v` and `None` as the reserved value `none`.
    pub fn write_opt(&mut self, value: Option<usize>, none: usize, width: u32) {
        self.write(value.unwrap_or(none) as u64, width);
    }

    /// Elias gamma code of `value + 1`.
    pub fn write_gamma(&mut self, value: u64) {
        let x = value + 1;
        let len = 64 - x.leading_zeros();
        for _ in 1..len {
            self.write_bool(false);
        }
        self.write(x, len);
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn read_bool(&mut self) -> Result<bool> {
        let byte = *self
            .bytes
            .get(self.pos / 8)
            .ok_or(Error::Decode("unexpected end of input"))?;
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }

    pub fn read(&mut self, width: u32) -> Result<u64> {
        let mut value = 0u64;
        for _ in 0..width {
            value = (value << 1) | self.read_bool()? as u64;
        }
        Ok(value)
    }

    pub fn read_u128(&mut self, width: u32) -> Result<u128> {
        let mut value = 0u128;
        for _ in 0..width {
            value = (value << 1) | self.read_bool()? as u128;
        }
        Ok(value)
    }

    pub fn read_usize(&mut self, width: u32) -> Result<usize> {
        Ok(self.read(width)? as usize)
    }

    pub fn read_gamma(&mut self) -> Result<u64> {
        let mut zeros = 0;
        while !self.read_bool()? {
            zeros += 1;
            if zeros > 63 {
                return Err(Error::Decode("gamma code too long"));
            }
        }
        let rest = self.read(zeros)?;
        Ok(((1u64 << zeros) | rest) - 1)
    }

    pub fn read_opt(&mut self, none: usize, width: u32) -> Result<Option<usize>> {
        let v = self.read_usize(width)?;
        Ok(if v == none { None } else { Some(v) })
    }
}

/// Canonical encoding of a label given the instance-wide field widths.
pub trait Encode {
    type Widths;

    fn encode(&self, out: &mut BitWriter, widths: &Self::Widths);

    /// Length of the canonical encoding in bits.
    fn bit_len(&self, widths: &Self::Widths) -> usize {
        let mut w = BitWriter::new();
        self.encode(&mut w, widths);
        w.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(bits_for(0), 1);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(2), 1);
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(4), 2);
        assert_eq!(bits_for(5), 3);
        assert_eq!(bits_for(64), 6);
        assert_eq!(bits_for(65), 7);
    }

    #[test]
    fn gamma_roundtrip() {
        let mut w = BitWriter::new();
        for v in [0u64, 1, 2, 7, 1000, u32::MAX as u64] {
            w.write_gamma(v);
        }
        assert_eq!(BitWriter::new().len(), 0);
        let bytes = w.into_bytes();
        let mut r = BitReader::new(&bytes);
        for v in [0u64, 1, 2, 7, 1000, u32::MAX as u64] {
            assert_eq!(r.read_gamma().unwrap(), v);
        }
    }

    #[test]
    fn roundtrip_fields() {
        let mut w = BitWriter::new();
        w.write(5, 3);
        w.write_bool(true);
        w.write(0, 7);
        w.write_u128(u128::MAX >> 3, 125);
        w.write(1 << 40, 41);
        let bytes = w.clone().into_bytes();
        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read(3).unwrap(), 5);
        assert!(r.read_bool().unwrap());
        assert_eq!(r.read(7).unwrap(), 0);
        assert_eq!(r.read_u128(125).unwrap(), u128::MAX >> 3);
        assert_eq!(r.read(41).unwrap(), 1 << 40);
        assert_eq!(r.position(), w.len());
    }
}
