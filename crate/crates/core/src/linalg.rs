//! Sparse symmetric matrices and the dense spectral routines built on them.
//!
//! Everything in the codec that acts as a graph operator (adjacency,
//! Laplacians, the edge-domain operators) is a [`SymMatrix`] stored in
//! compressed-row form. Dense eigendecompositions go through nalgebra and are
//! only used at node scale (a few hundred rows) or in tests.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Symmetric real matrix in compressed sparse row layout.
///
/// Column indices within each row are strictly increasing and explicit zeros
/// are dropped, so two matrices with the same entries have identical storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SymMatrix {
    /// Build from `(row, col, value)` triplets. Duplicates are summed. The
    /// resulting matrix must be exactly symmetric.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let m = Self::assemble(dim, triplets)?;
        for i in 0..dim {
            let (cols, vals) = m.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if m.get(j, i) != v {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(m)
    }

    /// Build from triplets on or above the diagonal, mirroring each
    /// off-diagonal entry.
    pub fn from_upper_triplets<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut full = Vec::new();
        for (i, j, v) in triplets {
            if i > j {
                return Err(Error::InvalidGraph(format!(
                    "lower-triangular entry ({i}, {j}) passed as upper"
                )));
            }
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        Self::assemble(dim, full)
    }

    /// Dense input; rejected unless exactly symmetric.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let n = m.nrows();
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if v != m[(j, i)] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
                if v != 0.0 {
                    trip.push((i, j, v));
                }
            }
        }
        Self::assemble(n, trip)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: (0..=dim).collect(),
            col_idx: (0..dim).collect(),
            values: vec![1.0; dim],
        }
    }

    fn assemble<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for (i, j, v) in triplets {
            if i >= dim || j >= dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: i.max(j) + 1,
                });
            }
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            let mut k = 0;
            while k < row.len() {
                let j = row[k].0;
                let mut acc = 0.0;
                while k < row.len() && row[k].0 == j {
                    acc += row[k].1;
                    k += 1;
                }
                if acc != 0.0 {
                    col_idx.push(j);
                    values.push(acc);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            dim,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.row(i).1.iter().sum()).collect()
    }

    /// Iterate stored entries as `(row, col, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// `y = self * x`; summation order is fixed by the row layout.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            *yi = acc;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v;
        }
        m
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (column `k` of `vectors` pairs with `values[k]`).
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenPair {
    pub fn lambda_max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `U diag(h(λ)) Uᵀ x`.
    pub fn apply_spectral<F: Fn(f64) -> f64>(&self, h: F, x: &[f64]) -> Vec<f64> {
        let u = &self.vectors;
        let n = u.nrows();
        let mut coeffs = vec![0.0; u.ncols()];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let col = u.column(k);
            let dot: f64 = (0..n).map(|i| col[i] * x[i]).sum();
            *c = h(self.values[k]) * dot;
        }
        let mut y = vec![0.0; n];
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let col = u.column(k);
            for i in 0..n {
                y[i] += c * col[i];
            }
        }
        y
    }
}

pub fn eigendecomposition(m: &SymMatrix) -> EigenPair {
    eigh_unchecked(m.to_dense())
}

/// Dense symmetric eigendecomposition; rejects matrices that are not
/// symmetric to within 1e-12 relative to the largest entry.
pub fn eigh(m: &DMatrix<f64>) -> Result<EigenPair> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(eigh_unchecked(m.clone()))
}

fn eigh_unchecked(m: DMatrix<f64>) -> EigenPair {
    let n = m.nrows();
    let fm = faer::Mat::<f64>::from_fn(n, n, |i, j| m[(i, j)]);
    // faer returns eigenvalues in ascending order.
    match fm.self_adjoint_eigen(faer::Side::Lower) {
        Ok(eig) => {
            let (s, u) = (eig.S(), eig.U());
            EigenPair {
                values: (0..n).map(|k| s[k]).collect(),
                vectors: DMatrix::from_fn(n, n, |i, j| u[(i, j)]),
            }
        }
        Err(_) => eigh_fallback(m),
    }
}

fn eigh_fallback(m: DMatrix<f64>) -> EigenPair {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    EigenPair { values, vectors }
}

const POWER_ITERATION_CAP: usize = 20_000;

/// Upper estimate of the largest eigenvalue of a PSD matrix by power
/// iteration, inflated by 1%.
///
/// Iterates until the eigen-residual `‖Av − θv‖` drops below `tol·θ`. Returns
/// [`Error::NoConvergence`] after the iteration cap so callers can fall back
/// to [`eigendecomposition`].
pub fn lambda_max_estimate(m: &SymMatrix, tol: f64) -> Result<f64> {
    let n = m.dim();
    if n == 0 {
        return Ok(0.0);
    }
    // Fixed start vector keeps the estimate reproducible on both codec ends.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + ((i * 7919) % 101) as f64 / 101.0)
        .collect();
    normalize(&mut v);
    let mut w = vec![0.0; n];
    for _ in 0..POWER_ITERATION_CAP {
        m.mul_vec_into(&v, &mut w);
        let theta: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let residual = v
            .iter()
            .zip(&w)
            .map(|(a, b)| (b - theta * a).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        if residual <= tol * theta.abs() {
            return Ok(1.01 * theta);
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    Err(Error::NoConvergence {
        iterations: POWER_ITERATION_CAP,
    })
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

/// `I − D^{-1/2} A D^{-1/2}` for a nonnegative adjacency `A`. Rows of
/// isolated nodes become identity rows.
pub fn sym_normalized_laplacian(adj: &SymMatrix) -> Result<SymMatrix> {
    for (i, j, v) in adj.entries() {
        if v < 0.0 {
            return Err(Error::NegativeEntry { row: i, col: j });
        }
    }
    let inv_sqrt: Vec<f64> = adj
        .row_sums()
        .into_iter()
        .map(|d| if d > 0.0 { 1.0 / d.sqrt() } else { 0.0 })
        .collect();
    let mut trip = Vec::with_capacity(adj.nnz() + adj.dim());
    for i in 0..adj.dim() {
        trip.push((i, i, 1.0));
    }
    for (i, j, v) in adj.entries() {
        trip.push((i, j, -v * (inv_sqrt[i] * inv_sqrt[j])));
    }
    SymMatrix::assemble(adj.dim(), trip)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> SymMatrix {
        SymMatrix::from_upper_triplets(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_asymmetric_triplets() {
        let err = SymMatrix::from_triplets(2, [(0, 1, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { .. }));
        let dense = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(eigh(&dense).is_err());
    }

    #[test]
    fn identity_spectrum() {
        let e = eigendecomposition(&SymMatrix::identity(3));
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn normalized_laplacian_single_edge_and_k3() {
        let edge = SymMatrix::from_upper_triplets(2, [(0, 1, 1.0)]).unwrap();
        let l = sym_normalized_laplacian(&edge).unwrap();
        assert_eq!(l.get(0, 1), -1.0);
        let e = eigendecomposition(&l);
        assert!((e.values[0]).abs() < 1e-12 && (e.values[1] - 2.0).abs() < 1e-12);

        // K_n normalized Laplacian: 0 once, n/(n-1) with multiplicity n-1.
        let e = eigendecomposition(&sym_normalized_laplacian(&k3()).unwrap());
        let expect = [0.0, 1.5, 1.5];
        for (a, b) in e.values.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{:?}", e.values);
        }
    }

    #[test]
    fn normalized_laplacian_isolated_node_is_identity_row() {
        let adj = SymMatrix::from_upper_triplets(3, [(0, 1, 2.0)]).unwrap();
        let l = sym_normalized_laplacian(&adj).unwrap();
        assert_eq!(l.get(2, 2), 1.0);
        assert_eq!(l.row(2).0, &[2]);
    }

    #[test]
    fn normalized_laplacian_rejects_negative() {
        let adj = SymMatrix::from_upper_triplets(2, [(0, 1, -1.0)]).unwrap();
        assert!(matches!(
            sym_normalized_laplacian(&adj),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn lambda_max_diagonal_and_bipartite() {
        let d = SymMatrix::from_upper_triplets(3, [(0, 0, 1.0), (1, 1, 5.0), (2, 2, 2.0)]).unwrap();
        let est = lambda_max_estimate(&d, 1e-10).unwrap();
        assert!((est - 5.05).abs() < 1e-8, "{est}");

        let edge = SymMatrix::from_upper_triplets(2, [(0, 1, 1.0)]).unwrap();
        let l = sym_normalized_laplacian(&edge).unwrap();
        let est = lambda_max_estimate(&l, 1e-10).unwrap();
        assert!((est - 2.02).abs() < 1e-8, "{est}");
    }

    #[test]
    fn eigendecomposition_round_trip() {
        let mut trip = Vec::new();
        for i in 0..12usize {
            for j in i..12 {
                let v = (((i * 31 + j * 17) % 13) as f64 - 6.0) / 7.0;
                trip.push((i, j, v));
            }
        }
        let m = SymMatrix::from_upper_triplets(12, trip).unwrap();
        let e = eigendecomposition(&m);
        let recon = &e.vectors * DMatrix::from_diagonal(&e.values.clone().into()) * e.vectors.transpose();
        let dense = m.to_dense();
        assert!((&recon - &dense).norm() / dense.norm() < 1e-7);
        let gram = e.vectors.transpose() * &e.vectors;
        assert!((gram - DMatrix::identity(12, 12)).amax() < 1e-8);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}
