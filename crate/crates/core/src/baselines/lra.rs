use nalgebra::{DMatrix, SVD};

use super::{check_square, symmetrize, BaselineMethod, BaselineResult, Payload};
use crate::error::{Error, Result};

/// Rank whose factor count `r(2N + 1)` is closest to `ρ·N²` coefficients,
/// clamped to `1..=N`.
pub fn rank_for_budget(n: usize, rho: f64) -> usize {
    let r = (rho * (n * n) as f64 / (2 * n + 1) as f64).round() as usize;
    r.clamp(1, n.max(1))
}

/// SVD of W, computed once per matrix.
#[derive(Debug, Clone)]
pub struct LraBaseline {
    u: DMatrix<f64>,
    sigma: Vec<f64>,
    v_t: DMatrix<f64>,
}

impl LraBaseline {
    pub fn new(w: &DMatrix<f64>) -> Result<Self> {
        check_square(w)?;
        let svd = SVD::try_new(w.clone(), true, true, f64::EPSILON, 0).ok_or(Error::SvdFailure)?;
        Ok(Self {
            u: svd.u.ok_or(Error::SvdFailure)?,
            sigma: svd.singular_values.iter().copied().collect(),
            v_t: svd.v_t.ok_or(Error::SvdFailure)?,
        })
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    /// Unquantized rank-`r` truncation `U_r Σ_r V_rᵀ`.
    pub fn truncation(&self, r: usize) -> DMatrix<f64> {
        let n = self.u.nrows();
        let mut acc = DMatrix::zeros(n, n);
        for k in 0..r.min(self.sigma.len()) {
            acc += self.u.column(k) * self.v_t.row(k) * self.sigma[k];
        }
        acc
    }

    pub fn encode(&self, r: usize, step: f64) -> Result<BaselineResult> {
        let n = self.u.nrows();
        if r == 0 || r > n {
            return Err(Error::InvalidConfig(format!("rank must lie in 1..={n}, got {r}")));
        }
        let u_r: Vec<f64> = self.u.columns(0, r).iter().copied().collect();
        let v_r: Vec<f64> = self.v_t.rows(0, r).transpose().iter().copied().collect();
        let mut payload = Payload::new(BaselineMethod::DirectLra, n, step, r as f64);
        let u_q = DMatrix::from_column_slice(n, r, &payload.push_quantized(&u_r, step)?);
        let s_q = payload.push_quantized(&self.sigma[..r], step)?;
        let v_q = DMatrix::from_column_slice(n, r, &payload.push_quantized(&v_r, step)?);
        let scaled = DMatrix::from_fn(n, r, |i, k| u_q[(i, k)] * s_q[k]);
        Ok(BaselineResult {
            method: BaselineMethod::DirectLra,
            reconstructed: symmetrize(scaled * v_q.transpose()),
            bytes: payload.bytes.len(),
            operating_point: r as f64,
        })
    }
}

pub fn direct_lra(w: &DMatrix<f64>, r: usize, step: f64) -> Result<BaselineResult> {
    LraBaseline::new(w)?.encode(r, step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { ((i * 7 + j * 7) % 11) as f64 / 10.0 })
    }

    #[test]
    fn rank_mapping() {
        assert_eq!(rank_for_budget(500, 1.0), 250);
        assert_eq!(rank_for_budget(500, 0.0001), 1);
        assert_eq!(rank_for_budget(3, 1.0), 1);
    }

    #[test]
    fn rank_one_error_is_quantization_only() {
        let u = nalgebra::DVector::from_fn(6, |i, _| 0.2 + 0.1 * i as f64);
        let w = &u * u.transpose();
        let b = LraBaseline::new(&w).unwrap();
        assert!((&b.truncation(1) - &w).norm() < 1e-12);
        let r = b.encode(1, 1e-9).unwrap();
        assert!((&r.reconstructed - &w).norm() < 1e-7);
    }

    #[test]
    fn full_rank_fine_step_is_exact() {
        let w = sample(7);
        let r = direct_lra(&w, 7, 1e-8).unwrap();
        assert!((&r.reconstructed - &w).norm() / w.norm() < 1e-6);
    }
}
