//! File layout: `header | geometry | Y payload | Cb payload | Cr payload`.
//!
//! All multi-byte fields are little-endian; floats are stored as their IEEE
//! 754 bit patterns. Payloads are byte aligned and their exact bit lengths
//! live in the header.

use crate::bitstream::rice::BitString;
use crate::codec::Transform;
use crate::error::{Error, Result};

pub const MAGIC: [u8; 4] = *b"SSGT";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 112;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Header {
    pub transform: Transform,
    pub depth: u8,
    pub step: u8,
    pub alpha: f64,
    pub q: [f64; 3],
    pub point_count: u64,
    pub geometry_bytes: u64,
    pub payload_bits: [u64; 3],
    pub origin: [f64; 3],
    pub edge: f64,
}

impl Header {
    /// Attribute payload size in bits (geometry and header excluded).
    pub fn attribute_bits(&self) -> u64 {
        self.payload_bits.iter().sum()
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = Vec::with_capacity(HEADER_LEN);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&[VERSION, self.transform.id(), self.depth, self.step]);
        out.extend_from_slice(&self.alpha.to_le_bytes());
        for q in self.q {
            out.extend_from_slice(&q.to_le_bytes());
        }
        out.extend_from_slice(&self.point_count.to_le_bytes());
        out.extend_from_slice(&self.geometry_bytes.to_le_bytes());
        for bits in self.payload_bits {
            out.extend_from_slice(&bits.to_le_bytes());
        }
        for o in self.origin {
            out.extend_from_slice(&o.to_le_bytes());
        }
        out.extend_from_slice(&self.edge.to_le_bytes());
        out.try_into().expect("header layout is fixed")
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Bitstream(format!("file too short for header: {} bytes", bytes.len())));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Bitstream("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::Bitstream(format!("unsupported version {}", bytes[4])));
        }
        let transform = Transform::from_id(bytes[5])
            .ok_or_else(|| Error::Bitstream(format!("unknown transform id {}", bytes[5])))?;
        let word = |i: usize| -> [u8; 8] { bytes[8 + 8 * i..16 + 8 * i].try_into().unwrap() };
        let f = |i| f64::from_le_bytes(word(i));
        let u = |i| u64::from_le_bytes(word(i));
        let header = Header {
            transform,
            depth: bytes[6],
            step: bytes[7],
            alpha: f(0),
            q: [f(1), f(2), f(3)],
            point_count: u(4),
            geometry_bytes: u(5),
            payload_bits: [u(6), u(7), u(8)],
            origin: [f(9), f(10), f(11)],
            edge: f(12),
        };
        if header.point_count == 0 {
            return Err(Error::Bitstream("point count is zero".into()));
        }
        if let Some(q) = header.q.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
            return Err(Error::Bitstream(format!("invalid quantization step {q}")));
        }
        Ok(header)
    }
}

/// Concatenates header, geometry and the three channel payloads.
pub fn assemble(header: &Header, geometry: &[u8], payloads: &[BitString; 3]) -> Result<Vec<u8>> {
    if header.geometry_bytes != geometry.len() as u64 {
        return Err(Error::Bitstream(format!(
            "header declares {} geometry bytes, got {}",
            header.geometry_bytes,
            geometry.len()
        )));
    }
    for (declared, payload) in header.payload_bits.iter().zip(payloads) {
        if *declared != payload.bit_len || payload.bit_len.div_ceil(8) != payload.bytes.len() as u64 {
            return Err(Error::Bitstream(format!("payload length mismatch: header {declared} bits")));
        }
    }
    let mut out = header.to_bytes().to_vec();
    out.extend_from_slice(geometry);
    for p in payloads {
        out.extend_from_slice(&p.bytes);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<'a> {
    pub header: Header,
    pub geometry: &'a [u8],
    pub payloads: [BitString; 3],
}

pub fn parse(bytes: &[u8]) -> Result<Parsed<'_>> {
    let header = Header::from_bytes(bytes)?;
    let geometry_len =
        usize::try_from(header.geometry_bytes).map_err(|_| Error::Bitstream("geometry length overflows".into()))?;
    let payload_lens = header.payload_bits.map(|b| b.div_ceil(8));
    let expected = payload_lens
        .iter()
        .try_fold(HEADER_LEN as u64 + geometry_len as u64, |acc, &n| acc.checked_add(n))
        .ok_or_else(|| Error::Bitstream("declared lengths overflow".into()))?;
    if expected != bytes.len() as u64 {
        return Err(Error::Bitstream(format!(
            "length mismatch: header implies {expected} bytes, file has {}",
            bytes.len()
        )));
    }
    let geometry = &bytes[HEADER_LEN..HEADER_LEN + geometry_len];
    let mut pos = HEADER_LEN + geometry_len;
    let payloads = std::array::from_fn(|c| {
        let n = payload_lens[c] as usize;
        let p = BitString { bytes: bytes[pos..pos + n].to_vec(), bit_len: header.payload_bits[c] };
        pos += n;
        p
    });
    Ok(Parsed { header, geometry, payloads })
}
