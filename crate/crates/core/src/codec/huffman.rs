//! Canonical, length-limited Huffman coding over byte alphabets.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::DecodeError;

pub const MAX_CODE_LEN: u8 = 15;

/// Code lengths for each byte value; 0 marks an unused symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeLengths(pub [u8; 256]);

impl CodeLengths {
    /// Huffman lengths for the symbol histogram of `data`, limited to
    /// [`MAX_CODE_LEN`] bits. A lone symbol gets a 1-bit code.
    pub fn for_data(data: &[u8]) -> Self {
        let mut freq = [0u64; 256];
        for &b in data {
            freq[b as usize] += 1;
        }
        Self::from_frequencies(&freq)
    }

    pub fn from_frequencies(freq: &[u64; 256]) -> Self {
        let used: Vec<usize> = (0..256).filter(|&s| freq[s] > 0).collect();
        let mut lengths = [0u8; 256];
        match used.len() {
            0 => return Self(lengths),
            1 => {
                lengths[used[0]] = 1;
                return Self(lengths);
            }
            _ => {}
        }
        let mut weights: Vec<u64> = used.iter().map(|&s| freq[s]).collect();
        loop {
            let depths = huffman_depths(&weights);
            if depths.iter().all(|&d| d <= MAX_CODE_LEN as usize) {
                for (&s, &d) in used.iter().zip(&depths) {
                    lengths[s] = d as u8;
                }
                return Self(lengths);
            }
            // Flatten the histogram until the tree fits the length limit.
            weights.iter_mut().for_each(|w| *w = (*w).div_ceil(2));
        }
    }

    /// Kraft sum check: a decodable prefix code has `Σ 2^-len ≤ 1`.
    pub fn is_valid(&self) -> bool {
        let kraft: u64 = self
            .0
            .iter()
            .filter(|&&l| l > 0)
            .map(|&l| 1u64 << (MAX_CODE_LEN - l))
            .sum();
        self.0.iter().all(|&l| l <= MAX_CODE_LEN) && kraft <= 1 << MAX_CODE_LEN
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }

    /// 256 lengths as packed nibbles, high nibble first (128 bytes).
    pub fn to_packed(&self) -> Vec<u8> {
        self.0.chunks(2).map(|p| (p[0] << 4) | p[1]).collect()
    }

    pub fn from_packed(bytes: &[u8]) -> Self {
        let mut lengths = [0u8; 256];
        for (k, &b) in bytes.iter().take(128).enumerate() {
            lengths[2 * k] = b >> 4;
            lengths[2 * k + 1] = b & 0x0f;
        }
        Self(lengths)
    }

    /// Lengths for symbols `0..=max_used` only, prefixed by a count byte.
    pub fn to_compact(&self) -> Vec<u8> {
        let count = self.0.iter().rposition(|&l| l > 0).map_or(1, |p| p + 1);
        let mut out = vec![(count - 1) as u8];
        out.extend(self.0[..count].chunks(2).map(|p| (p[0] << 4) | p.get(1).copied().unwrap_or(0)));
        out
    }

    /// Inverse of [`to_compact`](Self::to_compact); returns the table and the
    /// number of bytes consumed.
    pub fn from_compact(bytes: &[u8]) -> Option<(Self, usize)> {
        let count = *bytes.first()? as usize + 1;
        let packed = count.div_ceil(2);
        let body = bytes.get(1..1 + packed)?;
        let mut lengths = [0u8; 256];
        for (k, &b) in body.iter().enumerate() {
            lengths[2 * k] = b >> 4;
            if 2 * k + 1 < count {
                lengths[2 * k + 1] = b & 0x0f;
            } else if b & 0x0f != 0 {
                return None;
            }
        }
        Some((Self(lengths), 1 + packed))
    }
}

/// Depth of each leaf in a Huffman tree over `weights` (≥ 2 entries).
/// Ties break on node creation order, so the result is deterministic.
fn huffman_depths(weights: &[u64]) -> Vec<usize> {
    let n = weights.len();
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
        weights.iter().enumerate().map(|(i, &w)| Reverse((w, i))).collect();
    let mut next = n;
    while heap.len() > 1 {
        let Reverse((wa, a)) = heap.pop().expect("two nodes");
        let Reverse((wb, b)) = heap.pop().expect("two nodes");
        parent[a] = next;
        parent[b] = next;
        heap.push(Reverse((wa + wb, next)));
        next += 1;
    }
    (0..n)
        .map(|mut v| {
            let mut d = 0;
            while parent[v] != usize::MAX {
                v = parent[v];
                d += 1;
            }
            d
        })
        .collect()
}

/// Canonical codewords: symbols sorted by `(length, value)` get consecutive
/// codes, shifting left whenever the length grows.
fn canonical_codes(lengths: &CodeLengths) -> [(u16, u8); 256] {
    let mut order: Vec<usize> = (0..256).filter(|&s| lengths.0[s] > 0).collect();
    order.sort_by_key(|&s| (lengths.0[s], s));
    let mut codes = [(0u16, 0u8); 256];
    let mut code: u32 = 0;
    let mut prev_len = 0u8;
    for s in order {
        let len = lengths.0[s];
        code <<= len - prev_len;
        codes[s] = (code as u16, len);
        code += 1;
        prev_len = len;
    }
    codes
}

#[derive(Debug, Default)]
pub struct BitWriter {
    out: Vec<u8>,
    acc: u32,
    nbits: u32,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append the low `len` bits of `code`, most significant first.
    pub fn write(&mut self, code: u16, len: u8) {
        self.acc = (self.acc << len) | code as u32;
        self.nbits += len as u32;
        while self.nbits >= 8 {
            self.nbits -= 8;
            self.out.push((self.acc >> self.nbits) as u8);
        }
        self.acc &= (1 << self.nbits) - 1;
    }

    /// Flush, zero-padding the final byte.
    pub fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            self.out.push((self.acc << (8 - self.nbits)) as u8);
        }
        self.out
    }
}

pub fn encode_symbols(lengths: &CodeLengths, data: &[u8]) -> Vec<u8> {
    let codes = canonical_codes(lengths);
    let mut w = BitWriter::new();
    for &b in data {
        let (code, len) = codes[b as usize];
        debug_assert!(len > 0, "symbol {b} missing from code table");
        w.write(code, len);
    }
    w.finish()
}

/// Bit-serial canonical decoder.
pub struct HuffmanDecoder<'a> {
    data: &'a [u8],
    bitpos: usize,
    count: [u16; MAX_CODE_LEN as usize + 1],
    sorted: Vec<u8>,
    section: &'static str,
}

impl<'a> HuffmanDecoder<'a> {
    pub fn new(lengths: &CodeLengths, data: &'a [u8], section: &'static str) -> Result<Self, DecodeError> {
        if !lengths.is_valid() || lengths.is_empty() {
            return Err(DecodeError::BadTable { section });
        }
        let mut count = [0u16; MAX_CODE_LEN as usize + 1];
        for &l in lengths.0.iter() {
            count[l as usize] += 1;
        }
        count[0] = 0;
        let mut order: Vec<usize> = (0..256).filter(|&s| lengths.0[s] > 0).collect();
        order.sort_by_key(|&s| (lengths.0[s], s));
        Ok(Self {
            data,
            bitpos: 0,
            count,
            sorted: order.into_iter().map(|s| s as u8).collect(),
            section,
        })
    }

    fn bit(&mut self) -> Result<u32, DecodeError> {
        let byte = self
            .data
            .get(self.bitpos / 8)
            .ok_or(DecodeError::CodewordOverrun { section: self.section })?;
        let b = (byte >> (7 - self.bitpos % 8)) & 1;
        self.bitpos += 1;
        Ok(b as u32)
    }

    pub fn next_symbol(&mut self) -> Result<u8, DecodeError> {
        let mut code: i32 = 0;
        let mut first: i32 = 0;
        let mut index: i32 = 0;
        for len in 1..=MAX_CODE_LEN as usize {
            code |= self.bit()? as i32;
            let count = self.count[len] as i32;
            if code - first < count {
                return Ok(self.sorted[(index + code - first) as usize]);
            }
            index += count;
            first = (first + count) << 1;
            code <<= 1;
        }
        Err(DecodeError::Malformed {
            section: self.section,
            reason: "bit pattern matches no codeword".into(),
        })
    }

    /// Bytes touched so far, including a partially read final byte.
    pub fn bytes_consumed(&self) -> usize {
        self.bitpos.div_ceil(8)
    }
}
