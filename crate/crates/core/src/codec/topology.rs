//! Lossless coding of the binary topology.
//!
//! Each edge `(i, j)`, `i < j`, maps to its row-major upper-triangular slot
//! `t = i·n − i(i+1)/2 + (j − i − 1)`. The ascending slot sequence is
//! delta coded as LEB128 varints and the varint bytes are Huffman coded.
//! The payload is a compact code-length table followed by the codeword bits.

use super::huffman::{encode_symbols, CodeLengths, HuffmanDecoder};
use super::varint::{push_varint, read_varint};
use crate::error::DecodeError;

const SECTION: &str = "topology";

pub fn slot_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

pub fn slot_index(n: usize, i: usize, j: usize) -> u64 {
    let (n, i, j) = (n as u64, i as u64, j as u64);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Encodes a canonical (lexicographically sorted, `i < j`) edge list of an
/// `n`-node graph. An empty edge list codes to an empty payload.
pub fn encode_topology(n: usize, edges: &[(usize, usize)]) -> Vec<u8> {
    if edges.is_empty() {
        return Vec::new();
    }
    let mut stream = Vec::with_capacity(edges.len() * 2);
    let mut prev = 0u64;
    for (k, &(i, j)) in edges.iter().enumerate() {
        debug_assert!(i < j && j < n);
        let t = slot_index(n, i, j);
        push_varint(&mut stream, if k == 0 { t } else { t - prev });
        prev = t;
    }
    let lengths = CodeLengths::for_data(&stream);
    let mut out = lengths.to_compact();
    out.extend(encode_symbols(&lengths, &stream));
    out
}

/// Decodes `m` edges of an `n`-node graph.
pub fn decode_topology(bytes: &[u8], n: usize, m: usize) -> Result<Vec<(usize, usize)>, DecodeError> {
    if m == 0 {
        return if bytes.is_empty() {
            Ok(Vec::new())
        } else {
            Err(malformed("payload present for an empty edge set"))
        };
    }
    if bytes.is_empty() {
        return Err(DecodeError::Truncated { section: SECTION });
    }
    let limit = slot_count(n);
    if m as u64 > limit {
        return Err(malformed("more edges than upper-triangular slots"));
    }
    let (lengths, used) = CodeLengths::from_compact(bytes).ok_or(DecodeError::Truncated { section: SECTION })?;
    let mut dec = HuffmanDecoder::new(&lengths, &bytes[used..], SECTION)?;

    let mut edges = Vec::with_capacity(m);
    let mut row = 0usize;
    let mut row_start = 0u64;
    let mut t = 0u64;
    for k in 0..m {
        let gap = read_varint(
            || {
                dec.next_symbol().map_err(|e| match e {
                    DecodeError::CodewordOverrun { .. } => DecodeError::Truncated { section: SECTION },
                    other => other,
                })
            },
            SECTION,
        )?;
        if k > 0 && gap == 0 {
            return Err(malformed("repeated edge (zero gap)"));
        }
        t = if k == 0 { gap } else { t.saturating_add(gap) };
        if t >= limit {
            return Err(DecodeError::GapOverflow { index: t, limit });
        }
        while t >= row_start + (n - 1 - row) as u64 {
            row_start += (n - 1 - row) as u64;
            row += 1;
        }
        edges.push((row, row + 1 + (t - row_start) as usize));
    }
    if dec.bytes_consumed() != bytes.len() - used {
        return Err(malformed("trailing bytes after the last edge"));
    }
    Ok(edges)
}

fn malformed(reason: &str) -> DecodeError {
    DecodeError::Malformed {
        section: SECTION,
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slot_layout() {
        let n = 4;
        let mut expect = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(slot_index(n, i, j), expect);
                expect += 1;
            }
        }
        assert_eq!(slot_count(n), expect);
    }

    #[test]
    fn triangle_round_trip() {
        let edges = vec![(0, 1), (0, 2), (1, 2)];
        let bytes = encode_topology(3, &edges);
        assert_eq!(decode_topology(&bytes, 3, 3).unwrap(), edges);
    }

    #[test]
    fn single_edge_is_tiny() {
        let bytes = encode_topology(2, &[(0, 1)]);
        assert!(bytes.len() <= 4, "{} bytes", bytes.len());
        assert_eq!(decode_topology(&bytes, 2, 1).unwrap(), vec![(0, 1)]);
    }

    #[test]
    fn distinct_errors() {
        let edges = vec![(0, 1), (0, 2), (1, 2), (2, 3)];
        let bytes = encode_topology(4, &edges);
        // Fewer codeword bits than edges requested.
        assert!(matches!(
            decode_topology(&bytes, 4, 40),
            Err(DecodeError::Truncated { .. }) | Err(DecodeError::Malformed { .. })
        ));
        assert!(matches!(
            decode_topology(&bytes[..1], 4, 4),
            Err(DecodeError::Truncated { .. })
        ));
        // The last slot of n = 4 is 5; on n = 3 there are only three slots.
        assert!(matches!(decode_topology(&bytes, 3, 3), Err(DecodeError::GapOverflow { .. })));
        let mut extra = bytes.clone();
        extra.push(0);
        assert!(matches!(decode_topology(&extra, 4, 4), Err(DecodeError::Malformed { .. })));
    }

    #[test]
    fn truncated_bits() {
        let edges: Vec<_> = (0..30).map(|i| (i, i + 1)).collect();
        let bytes = encode_topology(31, &edges);
        let cut = &bytes[..bytes.len() - 2];
        assert!(matches!(decode_topology(cut, 31, 30), Err(DecodeError::Truncated { .. })));
    }
}
