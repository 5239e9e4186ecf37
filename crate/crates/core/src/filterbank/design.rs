//! Biorthogonal two-channel polynomial kernels on the spectral interval
//! `[0, 2]`, obtained by factoring a maximally flat half-band polynomial.

use nalgebra::{Complex, DMatrix};

use super::poly::Poly;
use crate::error::{Error, Result};

/// Largest supported design order; higher orders lose the `[0, 2]`
/// conditioning of the monomial basis.
pub const MAX_ORDER: usize = 20;

const GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, PartialEq)]
pub struct BiorFilterBank {
    pub h0: Poly,
    pub h1: Poly,
    pub g0: Poly,
    pub g1: Poly,
    /// Zero multiplicities at λ = 2 given to the analysis and synthesis
    /// lowpass kernels.
    pub design_orders: (usize, usize),
    /// `max |h0 g0 (λ) + h0 g0 (2−λ) − 2|` over a uniform grid on `[0, 2]`.
    pub pr_residual: f64,
}

impl BiorFilterBank {
    pub fn order(&self) -> usize {
        self.design_orders.0 + self.design_orders.1
    }
}

/// Maximally flat half-band polynomial of order `k`:
/// `p(λ) = 2 (1 − λ/2)^k Σ_{j<k} C(k−1+j, j) (λ/2)^j`.
///
/// It has a zero of multiplicity `k` at λ = 2, `p(0) = 2`, and satisfies
/// `p(λ) + p(2 − λ) = 2`.
pub fn half_band(k: usize) -> Poly {
    let zero_factor = Poly(vec![1.0, -0.5]).powi(k).scaled(2.0);
    &zero_factor * &flat_factor(k)
}

/// `Σ_{j<k} C(k−1+j, j) (λ/2)^j`, the part of the half-band polynomial that
/// carries no zeros at λ = 2.
fn flat_factor(k: usize) -> Poly {
    let mut coeffs = Vec::with_capacity(k);
    let mut binom = 1.0_f64;
    for j in 0..k {
        if j > 0 {
            binom = binom * (k - 1 + j) as f64 / j as f64;
        }
        coeffs.push(binom / 2f64.powi(j as i32));
    }
    Poly(coeffs)
}

/// Design a biorthogonal kernel set of even order `k`.
///
/// The `k` zeros at λ = 2 are split evenly between `h0` and `g0`. The
/// remaining roots are grouped into units (single real roots, ascending, then
/// complex-conjugate pairs ordered by real part and imaginary magnitude), and
/// each unit goes to whichever kernel currently has the lower degree, ties to
/// `g0`. Both kernels are scaled to `√2` at λ = 0.
pub fn design_biorthogonal(k: usize) -> Result<BiorFilterBank> {
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::Design(format!("order must be even and at least 2, got {k}")));
    }
    if k > MAX_ORDER {
        return Err(Error::Design(format!("order {k} exceeds the supported maximum {MAX_ORDER}")));
    }
    let flat = flat_factor(k);
    let roots = polish_roots(&flat, companion_roots(&flat));

    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in roots {
        if z.im.abs() <= 1e-9 * z.re.abs().max(1.0) {
            real.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::Design("unpaired complex root".into()));
    }
    for z in &upper {
        let matched = lower.iter().any(|w| (w - z.conj()).norm() <= 1e-7 * z.norm().max(1.0));
        if !matched {
            return Err(Error::Design("complex root without conjugate partner".into()));
        }
    }
    real.sort_by(f64::total_cmp);
    upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let half = k / 2;
    let mirror_zero = Poly(vec![2.0, -1.0]).powi(half);
    let mut h0 = mirror_zero.clone();
    let mut g0 = mirror_zero;
    let units = real
        .iter()
        .map(|&r| Poly::linear_root(r))
        .chain(upper.iter().map(|z| Poly::conjugate_pair(z.re, z.im)));
    for unit in units {
        if h0.degree() < g0.degree() {
            h0 = &h0 * &unit;
        } else {
            g0 = &g0 * &unit;
        }
    }

    let p0 = half_band(k).eval(0.0);
    let h0 = h0.scaled(2f64.sqrt() / h0.eval(0.0));
    let g0 = g0.scaled(2f64.sqrt() / (p0 / 2.0) / g0.eval(0.0));
    let h1 = g0.reflect();
    let g1 = h0.reflect();
    let pr_residual = pr_residual(&h0, &g0);
    Ok(BiorFilterBank {
        h0,
        h1,
        g0,
        g1,
        design_orders: (half, half),
        pr_residual,
    })
}

/// Residual of the half-band identity for the product `h0·g0` on a 1,001
/// point grid over `[0, 2]`.
pub fn pr_residual(h0: &Poly, g0: &Poly) -> f64 {
    (0..GRID_POINTS)
        .map(|i| {
            let x = 2.0 * i as f64 / (GRID_POINTS - 1) as f64;
            (h0.eval(x) * g0.eval(x) + h0.eval(2.0 - x) * g0.eval(2.0 - x) - 2.0).abs()
        })
        .fold(0.0, f64::max)
}

fn companion_roots(p: &Poly) -> Vec<Complex<f64>> {
    let c = p.coeffs();
    let d = c.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let mut m = DMatrix::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    m.complex_eigenvalues().iter().copied().collect()
}

fn polish_roots(p: &Poly, roots: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    let deriv = Poly(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect(),
    );
    let eval = |q: &Poly, z: Complex<f64>| {
        q.coeffs()
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    };
    roots
        .into_iter()
        .map(|mut z| {
            for _ in 0..8 {
                let dz = eval(&deriv, z);
                if dz.norm() == 0.0 {
                    break;
                }
                let step = eval(p, z) / dz;
                z -= step;
                if step.norm() <= 1e-16 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}
