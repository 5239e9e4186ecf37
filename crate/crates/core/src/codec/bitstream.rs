//! The `GWAC` container.
//!
//! ```text
//! "GWAC" | version u8 | flags u8 | n u32 | m u32 | step f64 | rho f64 | K u8
//! topology: u32 length + payload
//! weights:  u32 length + payload
//! ```
//!
//! All integers and floats are little-endian. Flag bit 0 selects the edge
//! operator (0 line graph, 1 edge Laplacian); bits 1–2 hold `m_max`.

use crate::error::DecodeError;
use crate::line_graph::OperatorMode;

pub const MAGIC: &[u8; 4] = b"GWAC";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_BYTES: usize = 4 + 1 + 1 + 4 + 4 + 8 + 8 + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Header {
    pub version: u8,
    pub mode: OperatorMode,
    pub m_max: u8,
    pub n: u32,
    pub m: u32,
    pub quant_step: f64,
    pub keep_fraction: f64,
    pub filter_order: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bitstream {
    pub header: Header,
    pub topology: Vec<u8>,
    pub weights: Vec<u8>,
}

impl Bitstream {
    pub fn header_bytes(&self) -> usize {
        HEADER_BYTES
    }

    /// Topology payload plus its length prefix.
    pub fn topology_bytes(&self) -> usize {
        4 + self.topology.len()
    }

    /// Weights payload plus its length prefix.
    pub fn weights_bytes(&self) -> usize {
        4 + self.weights.len()
    }

    pub fn total_bytes(&self) -> usize {
        self.header_bytes() + self.topology_bytes() + self.weights_bytes()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let h = &self.header;
        let mut out = Vec::with_capacity(self.total_bytes());
        out.extend(MAGIC);
        out.push(h.version);
        let mode_bit = match h.mode {
            OperatorMode::Line => 0,
            OperatorMode::Edge => 1,
        };
        out.push(mode_bit | (h.m_max & 0b11) << 1);
        out.extend(h.n.to_le_bytes());
        out.extend(h.m.to_le_bytes());
        out.extend(h.quant_step.to_le_bytes());
        out.extend(h.keep_fraction.to_le_bytes());
        out.push(h.filter_order);
        for section in [&self.topology, &self.weights] {
            out.extend((section.len() as u32).to_le_bytes());
            out.extend(section.iter());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DecodeError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4, "header")? != MAGIC {
            return Err(DecodeError::BadMagic);
        }
        let version = r.take(1, "header")?[0];
        if version != FORMAT_VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        let flags = r.take(1, "header")?[0];
        if flags & !0b111 != 0 {
            return Err(DecodeError::Malformed {
                section: "header",
                reason: format!("reserved flag bits set ({flags:#04x})"),
            });
        }
        let mode = if flags & 1 == 0 {
            OperatorMode::Line
        } else {
            OperatorMode::Edge
        };
        let header = Header {
            version,
            mode,
            m_max: (flags >> 1) & 0b11,
            n: u32::from_le_bytes(r.array("header")?),
            m: u32::from_le_bytes(r.array("header")?),
            quant_step: f64::from_le_bytes(r.array("header")?),
            keep_fraction: f64::from_le_bytes(r.array("header")?),
            filter_order: r.take(1, "header")?[0],
        };
        let topology = r.section("topology")?.to_vec();
        let weights = r.section("weights")?.to_vec();
        if r.pos != bytes.len() {
            return Err(DecodeError::Malformed {
                section: "weights",
                reason: format!("{} trailing bytes after the last section", bytes.len() - r.pos),
            });
        }
        Ok(Self {
            header,
            topology,
            weights,
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize, section: &'static str) -> Result<&'a [u8], DecodeError> {
        let s = self
            .bytes
            .get(self.pos..self.pos + k)
            .ok_or(DecodeError::Truncated { section })?;
        self.pos += k;
        Ok(s)
    }

    fn array<const N: usize>(&mut self, section: &'static str) -> Result<[u8; N], DecodeError> {
        Ok(self.take(N, section)?.try_into().expect("length checked"))
    }

    fn section(&mut self, section: &'static str) -> Result<&'a [u8], DecodeError> {
        let len = u32::from_le_bytes(self.array(section)?) as usize;
        self.take(len, section)
    }
}
