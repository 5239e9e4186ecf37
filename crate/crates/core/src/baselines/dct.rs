use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{check_square, symmetrize, BaselineMethod, BaselineResult, Payload};
use crate::codec::nla_threshold;
use crate::error::Result;

/// Orthonormal DCT-II matrix: `C[k, n] = s_k cos(π (2n+1) k / 2N)`.
pub fn dct_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |k, i| {
        let s = if k == 0 { (1.0 / n as f64).sqrt() } else { (2.0 / n as f64).sqrt() };
        s * (PI * (2 * i + 1) as f64 * k as f64 / (2 * n) as f64).cos()
    })
}

/// Column-wise DCT of W, computed once per matrix.
#[derive(Debug, Clone)]
pub struct DctBaseline {
    basis: DMatrix<f64>,
    /// Coefficients in column-major order, column `j` of W contiguous.
    coefficients: Vec<f64>,
}

impl DctBaseline {
    pub fn new(w: &DMatrix<f64>) -> Result<Self> {
        let n = check_square(w)?;
        let basis = dct_matrix(n);
        let coefficients = (&basis * w).as_slice().to_vec();
        Ok(Self { basis, coefficients })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn encode(&self, rho: f64, step: f64) -> Result<BaselineResult> {
        let n = self.basis.nrows();
        let (sparse, _) = nla_threshold(&self.coefficients, rho)?;
        let mut payload = Payload::new(BaselineMethod::DirectDct, n, step, rho);
        let decoded = payload.push_quantized(&sparse, step)?;
        let x = DMatrix::from_column_slice(n, n, &decoded);
        Ok(BaselineResult {
            method: BaselineMethod::DirectDct,
            reconstructed: symmetrize(self.basis.transpose() * x),
            bytes: payload.bytes.len(),
            operating_point: rho,
        })
    }
}

pub fn direct_dct(w: &DMatrix<f64>, rho: f64, step: f64) -> Result<BaselineResult> {
    DctBaseline::new(w)?.encode(rho, step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal() {
        let c = dct_matrix(7);
        let err = (&c * c.transpose() - DMatrix::identity(7, 7)).abs().max();
        assert!(err < 1e-13);
    }

    #[test]
    fn constant_columns_concentrate_in_dc() {
        let mut w = DMatrix::from_element(6, 6, 0.7);
        w.fill_diagonal(0.7);
        let b = DctBaseline::new(&w).unwrap();
        for j in 0..6 {
            for k in 0..6 {
                let c = b.coefficients()[j * 6 + k];
                if k == 0 {
                    assert!((c - 0.7 * 6f64.sqrt()).abs() < 1e-12);
                } else {
                    assert!(c.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fine_step_is_near_exact() {
        let w = DMatrix::from_fn(5, 5, |i, j| if i == j { 0.0 } else { 1.0 / (1 + i + j) as f64 });
        let r = direct_dct(&w, 1.0, 1e-9).unwrap();
        assert!((&r.reconstructed - &w).norm() / w.norm() < 1e-6);
    }
}
