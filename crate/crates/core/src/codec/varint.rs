//! Unsigned LEB128 varints and zigzag mapping.

use crate::error::DecodeError;

pub fn push_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

/// Reads one varint from a byte source. At most ten bytes are accepted.
pub fn read_varint<F>(mut next_byte: F, section: &'static str) -> Result<u64, DecodeError>
where
    F: FnMut() -> Result<u8, DecodeError>,
{
    let mut v: u64 = 0;
    for shift in (0..70).step_by(7) {
        let b = next_byte()?;
        let payload = (b & 0x7f) as u64;
        if shift == 63 && payload > 1 {
            break;
        }
        v |= payload << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
    }
    Err(DecodeError::Malformed {
        section,
        reason: "varint exceeds 64 bits".into(),
    })
}

/// 0 → 0, −1 → 1, 1 → 2, −2 → 3, …
pub fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

pub fn unzigzag(u: u64) -> i64 {
    ((u >> 1) as i64) ^ -((u & 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zigzag_order() {
        let got: Vec<u64> = [0, -1, 1, -2, 2].iter().map(|&v| zigzag(v)).collect();
        assert_eq!(got, vec![0, 1, 2, 3, 4]);
        for v in [i64::MIN, -12345, 0, 77, i64::MAX] {
            assert_eq!(unzigzag(zigzag(v)), v);
        }
    }

    #[test]
    fn varint_round_trip() {
        for v in [0u64, 1, 127, 128, 300, u32::MAX as u64, u64::MAX] {
            let mut buf = Vec::new();
            push_varint(&mut buf, v);
            let mut it = buf.iter();
            let back = read_varint(|| it.next().copied().ok_or(DecodeError::Truncated { section: "t" }), "t");
            assert_eq!(back.unwrap(), v);
        }
        let too_long = [0xffu8; 11];
        let mut it = too_long.iter();
        let r = read_varint(|| it.next().copied().ok_or(DecodeError::Truncated { section: "t" }), "t");
        assert!(matches!(r, Err(DecodeError::Malformed { .. })));
    }
}
