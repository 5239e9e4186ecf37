use std::ops::Mul;

use crate::linalg::SymMatrix;

/// Real polynomial in the spectral variable λ, coefficients in ascending
/// powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    /// `(λ − root)`.
    pub fn linear_root(root: f64) -> Self {
        Poly(vec![-root, 1.0])
    }

    /// `(λ − r)(λ − r̄)` for a complex root `re + i·im`.
    pub fn conjugate_pair(re: f64, im: f64) -> Self {
        Poly(vec![re * re + im * im, -2.0 * re, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn powi(&self, k: usize) -> Self {
        (0..k).fold(Poly::constant(1.0), |acc, _| &acc * self)
    }

    /// `p(2 − λ)` as a polynomial in λ.
    pub fn reflect(&self) -> Self {
        let mirror = Poly(vec![2.0, -1.0]);
        let mut coeffs = self.0.iter().rev();
        let mut out = Poly::constant(coeffs.next().copied().unwrap_or(0.0));
        for &c in coeffs {
            out = &out * &mirror;
            out.0[0] += c;
        }
        out
    }

    pub fn add(&self, other: &Poly) -> Self {
        let n = self.0.len().max(other.0.len());
        Poly(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&0.0) + other.0.get(k).unwrap_or(&0.0))
                .collect(),
        )
    }

    /// `p(M) x` by Horner's rule, `deg p` sparse products.
    pub fn apply(&self, m: &SymMatrix, x: &[f64]) -> Vec<f64> {
        let mut coeffs = self.0.iter().rev();
        let lead = coeffs.next().copied().unwrap_or(0.0);
        let mut y: Vec<f64> = x.iter().map(|v| lead * v).collect();
        let mut tmp = vec![0.0; x.len()];
        for &c in coeffs {
            m.mul_vec_into(&y, &mut tmp);
            for ((yi, ti), xi) in y.iter_mut().zip(&tmp).zip(x) {
                *yi = ti + c * xi;
            }
        }
        y
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![0.0; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_and_eval() {
        // 1 + 3λ + λ² at 2 − λ is 11 − 7λ + λ².
        let p = Poly(vec![1.0, 3.0, 1.0]);
        assert_eq!(p.reflect(), Poly(vec![11.0, -7.0, 1.0]));
        for x in [0.0, 0.3, 1.7, 2.0] {
            assert!((p.reflect().eval(x) - p.eval(2.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_matches_eval_on_diagonal() {
        let m = SymMatrix::from_upper_triplets(3, [(0, 0, 0.5), (1, 1, 1.0), (2, 2, 1.5)]).unwrap();
        let p = Poly(vec![0.2, -1.0, 0.5, 0.25]);
        let y = p.apply(&m, &[1.0, 2.0, -1.0]);
        assert!((y[0] - p.eval(0.5)).abs() < 1e-14);
        assert!((y[1] - 2.0 * p.eval(1.0)).abs() < 1e-14);
        assert!((y[2] + p.eval(1.5)).abs() < 1e-14);
    }
}
