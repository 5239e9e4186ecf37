//! Nonlinear approximation and uniform scalar quantization.

use crate::error::{Error, Result};

/// Largest admissible quantization index magnitude.
pub const MAX_BIN: i64 = (1 << 31) - 1;

/// Number of coefficients kept out of `len` at keep fraction `rho`.
pub fn keep_count(len: usize, rho: f64) -> usize {
    ((rho * len as f64).ceil() as usize).min(len)
}

pub fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("keep fraction must lie in (0, 1], got {rho}")))
    }
}

/// Keeps the `⌈ρ·len⌉` largest-magnitude entries of `c` and zeroes the rest.
/// Equal magnitudes are resolved in favour of the lower index.
pub fn nla_threshold(c: &[f64], rho: f64) -> Result<(Vec<f64>, Vec<bool>)> {
    check_rho(rho)?;
    let keep = keep_count(c.len(), rho);
    let mut bitmap = vec![false; c.len()];
    if keep == c.len() {
        bitmap.fill(true);
        return Ok((c.to_vec(), bitmap));
    }
    let mut order: Vec<usize> = (0..c.len()).collect();
    let by_magnitude = |&a: &usize, &b: &usize| c[b].abs().total_cmp(&c[a].abs()).then(a.cmp(&b));
    if keep > 0 {
        order.select_nth_unstable_by(keep - 1, by_magnitude);
    }
    let mut sparse = vec![0.0; c.len()];
    for &i in &order[..keep] {
        sparse[i] = c[i];
        bitmap[i] = true;
    }
    Ok((sparse, bitmap))
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("quantization step must be positive, got {step}")))
    }
}

/// `q = round(v / step)`, ties away from zero.
pub fn quantize(v: &[f64], step: f64) -> Result<Vec<i64>> {
    check_step(step)?;
    v.iter()
        .map(|&x| {
            let q = (x / step).round();
            if q.is_finite() && q.abs() <= MAX_BIN as f64 {
                Ok(q as i64)
            } else {
                Err(Error::QuantOverflow(x))
            }
        })
        .collect()
}

pub fn dequantize(q: &[i64], step: f64) -> Vec<f64> {
    q.iter().map(|&k| k as f64 * step).collect()
}
