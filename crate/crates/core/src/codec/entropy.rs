//! Entropy coding of sparse quantized coefficient vectors.
//!
//! Payload layout:
//!
//! ```text
//! u32 LE nonzero count
//! runs table (128 B) | u32 LE runs byte length | runs codewords
//! values table (128 B) | values codewords          (omitted when all zero)
//! ```
//!
//! The significance map is coded as zero-run lengths: one run precedes each
//! nonzero and a final run covers the trailing zeros. A run of 255 or more is
//! split into escape symbols 255, each standing for 255 zeros with the run
//! continuing. Nonzero values are zigzag mapped and written as varint bytes.

use super::huffman::{encode_symbols, CodeLengths, HuffmanDecoder};
use super::varint::{push_varint, read_varint, unzigzag, zigzag};
use crate::error::DecodeError;

const RUNS: &str = "weights/runs";
const VALUES: &str = "weights/values";
const ESCAPE: u8 = 255;
const TABLE_BYTES: usize = 128;

fn push_run(out: &mut Vec<u8>, mut zeros: usize) {
    while zeros >= ESCAPE as usize {
        out.push(ESCAPE);
        zeros -= ESCAPE as usize;
    }
    out.push(zeros as u8);
}

/// Codes `q`; the significance map is implied by the nonzero entries.
pub fn entropy_encode(q: &[i64]) -> Vec<u8> {
    let mut runs = Vec::new();
    let mut values = Vec::new();
    let mut zeros = 0usize;
    let mut nnz = 0u32;
    for &v in q {
        if v == 0 {
            zeros += 1;
        } else {
            push_run(&mut runs, zeros);
            push_varint(&mut values, zigzag(v));
            zeros = 0;
            nnz += 1;
        }
    }
    push_run(&mut runs, zeros);

    let mut out = nnz.to_le_bytes().to_vec();
    let run_table = CodeLengths::for_data(&runs);
    let run_bits = encode_symbols(&run_table, &runs);
    out.extend(run_table.to_packed());
    out.extend((run_bits.len() as u32).to_le_bytes());
    out.extend(run_bits);
    if nnz > 0 {
        let value_table = CodeLengths::for_data(&values);
        out.extend(value_table.to_packed());
        out.extend(encode_symbols(&value_table, &values));
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, k: usize, section: &'static str) -> Result<&'a [u8], DecodeError> {
        let s = self
            .bytes
            .get(self.pos..self.pos + k)
            .ok_or(DecodeError::Truncated { section })?;
        self.pos += k;
        Ok(s)
    }

    fn u32(&mut self, section: &'static str) -> Result<u32, DecodeError> {
        Ok(u32::from_le_bytes(self.take(4, section)?.try_into().expect("4 bytes")))
    }
}

fn malformed(section: &'static str, reason: &str) -> DecodeError {
    DecodeError::Malformed {
        section,
        reason: reason.into(),
    }
}

/// Inverse of [`entropy_encode`] for a vector of known length.
pub fn entropy_decode(bytes: &[u8], len: usize) -> Result<Vec<i64>, DecodeError> {
    let mut cur = Cursor { bytes, pos: 0 };
    let nnz = cur.u32(RUNS)? as usize;
    if nnz > len {
        return Err(malformed(RUNS, "more nonzeros than coefficients"));
    }
    let run_table = CodeLengths::from_packed(cur.take(TABLE_BYTES, RUNS)?);
    let run_len = cur.u32(RUNS)? as usize;
    let run_bits = cur.take(run_len, RUNS)?;

    let mut positions = Vec::with_capacity(nnz);
    let mut runs = HuffmanDecoder::new(&run_table, run_bits, RUNS)?;
    let mut pos = 0usize;
    for k in 0..=nnz {
        loop {
            let s = runs.next_symbol()?;
            pos += s as usize;
            if pos > len {
                return Err(malformed(RUNS, "runs exceed coefficient count"));
            }
            if s != ESCAPE {
                break;
            }
        }
        if k < nnz {
            if pos == len {
                return Err(malformed(RUNS, "runs exceed coefficient count"));
            }
            positions.push(pos);
            pos += 1;
        }
    }
    if pos != len {
        return Err(malformed(RUNS, "runs do not cover the coefficient vector"));
    }
    if runs.bytes_consumed() != run_bits.len() {
        return Err(malformed(RUNS, "trailing bytes after the last run"));
    }

    let mut q = vec![0i64; len];
    if nnz == 0 {
        return if cur.pos == bytes.len() {
            Ok(q)
        } else {
            Err(malformed(VALUES, "values present for an all-zero vector"))
        };
    }
    let value_table = CodeLengths::from_packed(cur.take(TABLE_BYTES, VALUES)?);
    let value_bits = &bytes[cur.pos..];
    let mut values = HuffmanDecoder::new(&value_table, value_bits, VALUES)?;
    for &p in &positions {
        let u = read_varint(|| values.next_symbol(), VALUES)?;
        let v = unzigzag(u);
        if v == 0 {
            return Err(malformed(VALUES, "zero value at a significant position"));
        }
        if v.unsigned_abs() > super::quant::MAX_BIN as u64 {
            return Err(malformed(VALUES, "value beyond the quantizer range"));
        }
        q[p] = v;
    }
    if values.bytes_consumed() != value_bits.len() {
        return Err(malformed(VALUES, "trailing bytes after the last value"));
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_is_runs_only() {
        let q = vec![0i64; 1000];
        let bytes = entropy_encode(&q);
        assert_eq!(bytes.len(), 4 + TABLE_BYTES + 4 + 1);
        assert_eq!(entropy_decode(&bytes, 1000).unwrap(), q);
    }

    #[test]
    fn small_example() {
        let q = vec![0, 0, 7, 0];
        assert_eq!(entropy_decode(&entropy_encode(&q), 4).unwrap(), q);
    }

    #[test]
    fn long_runs_and_extremes() {
        let mut q = vec![0i64; 2000];
        q[0] = -3;
        q[255] = 1;
        q[511] = (1 << 31) - 1;
        q[1999] = -((1 << 31) - 1);
        assert_eq!(entropy_decode(&entropy_encode(&q), 2000).unwrap(), q);
    }

    #[test]
    fn corruption_is_reported() {
        let q = vec![0, 5, 0, -2, 0, 0, 9];
        let bytes = entropy_encode(&q);
        assert!(entropy_decode(&bytes, 5).is_err());
        assert!(matches!(
            entropy_decode(&bytes[..10], 7),
            Err(DecodeError::Truncated { .. })
        ));
        let mut bad = bytes.clone();
        bad[4..4 + TABLE_BYTES].fill(0x11);
        assert!(matches!(entropy_decode(&bad, 7), Err(DecodeError::BadTable { .. })));
        let cut = &bytes[..bytes.len() - 1];
        assert!(matches!(
            entropy_decode(cut, 7),
            Err(DecodeError::CodewordOverrun { .. })
        ));
    }
}
