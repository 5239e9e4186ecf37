//! Undirected weighted graphs in canonical edge order.
//!
//! The position of an edge in the sorted `(i, j)` list is its edge index α.
//! Line-graph nodes, incidence-matrix columns and the weight signal are all
//! indexed by α, so the decoder can rebuild every edge-domain object from the
//! topology alone.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct UGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
}

impl UGraph {
    /// Canonicalizes `(i, j, w)` triples: each pair is stored as `(min, max)`
    /// and the list is sorted lexicographically. Self loops, duplicate pairs,
    /// out-of-range nodes and non-positive or non-finite weights are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("node count must be at least 1".into()));
        }
        let mut list: Vec<(usize, usize, f64)> = edges
            .into_iter()
            .map(|(i, j, w)| if i <= j { (i, j, w) } else { (j, i, w) })
            .collect();
        for &(i, j, w) in &list {
            if i == j {
                return Err(Error::InvalidGraph(format!("self loop at node {i}")));
            }
            if j >= n {
                return Err(Error::InvalidGraph(format!("node {j} out of range for n = {n}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidGraph(format!("weight {w} on edge ({i}, {j}) is not positive")));
            }
        }
        list.sort_by_key(|a| (a.0, a.1));
        if let Some(w) = list.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        Ok(Self {
            n,
            edges: list.iter().map(|&(i, j, _)| (i, j)).collect(),
            weights: list.iter().map(|&(_, _, w)| w).collect(),
        })
    }

    /// Unit-weight graph on a canonical (sorted, i < j) edge list.
    pub fn from_topology(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, edges.iter().map(|&(i, j)| (i, j, 1.0)))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Same topology with replacement weights (aligned with canonical order).
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::DimensionMismatch {
                expected: self.edges.len(),
                got: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidGraph(format!("weight {w} is not positive")));
        }
        Ok(Self {
            n: self.n,
            edges: self.edges.clone(),
            weights,
        })
    }

    /// The graph with every weight set to 1.
    pub fn binary(&self) -> Self {
        Self {
            n: self.n,
            edges: self.edges.clone(),
            weights: vec![1.0; self.edges.len()],
        }
    }

    /// Binary degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    pub fn weighted_adjacency(&self) -> SymMatrix {
        SymMatrix::from_upper_triplets(
            self.n,
            self.edges.iter().zip(&self.weights).map(|(&(i, j), &w)| (i, j, w)),
        )
        .expect("canonical edges are in range")
    }

    pub fn binary_adjacency(&self) -> SymMatrix {
        SymMatrix::from_upper_triplets(self.n, self.edges.iter().map(|&(i, j)| (i, j, 1.0)))
            .expect("canonical edges are in range")
    }

    /// `L = D − W`.
    pub fn laplacian(&self) -> SymMatrix {
        let mut deg = vec![0.0; self.n];
        let mut trip = Vec::with_capacity(self.edges.len() + self.n);
        for (&(i, j), &w) in self.edges.iter().zip(&self.weights) {
            deg[i] += w;
            deg[j] += w;
            trip.push((i, j, -w));
        }
        trip.extend(deg.iter().enumerate().map(|(i, &d)| (i, i, d)));
        SymMatrix::from_upper_triplets(self.n, trip).expect("canonical edges are in range")
    }

    /// Directed (pseudo-oriented i → j for i < j) and undirected incidence.
    pub fn incidence(&self) -> (Incidence, Incidence) {
        (
            Incidence::new(self.n, &self.edges, -1.0),
            Incidence::new(self.n, &self.edges, 1.0),
        )
    }
}

/// `n × |E|` incidence matrix stored column by column. Column α holds `+1` at
/// row `i` and `tail_sign` at row `j` for edge α = (i, j).
#[derive(Debug, Clone, PartialEq)]
pub struct Incidence {
    rows: usize,
    columns: Vec<[(usize, f64); 2]>,
}

impl Incidence {
    fn new(rows: usize, edges: &[(usize, usize)], tail_sign: f64) -> Self {
        Self {
            rows,
            columns: edges.iter().map(|&(i, j)| [(i, 1.0), (j, tail_sign)]).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, alpha: usize) -> [(usize, f64); 2] {
        self.columns[alpha]
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.rows, self.columns.len());
        for (a, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[(r, a)] = v;
            }
        }
        m
    }

    /// `BᵀB` (edge × edge), accumulated node by node over incident edge pairs.
    pub fn gram_columns(&self) -> SymMatrix {
        let mut incident: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.rows];
        for (a, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                incident[r].push((a, v));
            }
        }
        let mut trip = Vec::new();
        for list in &incident {
            for &(a, va) in list {
                for &(b, vb) in list {
                    trip.push((a, b, va * vb));
                }
            }
        }
        SymMatrix::from_triplets(self.columns.len(), trip).expect("gram matrix is symmetric")
    }

    /// `BBᵀ` (node × node).
    pub fn gram_rows(&self) -> SymMatrix {
        let mut trip = Vec::with_capacity(4 * self.columns.len());
        for col in &self.columns {
            for &(r, vr) in col {
                for &(c, vc) in col {
                    trip.push((r, c, vr * vc));
                }
            }
        }
        SymMatrix::from_triplets(self.rows, trip).expect("gram matrix is symmetric")
    }
}

/// Parse the `n m` / `i j w` edge-list text format.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<UGraph> {
    let mut lines = reader
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        reason: "missing `n m` header".into(),
    })?;
    let header = header?;
    let mut it = header.split_whitespace();
    let n: usize = parse_field(it.next(), line_no, "n")?;
    let m: usize = parse_field(it.next(), line_no, "m")?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: line_no,
            reason: "trailing fields in header".into(),
        });
    }

    let mut edges = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let line = line?;
        let mut it = line.split_whitespace();
        let i: usize = parse_field(it.next(), line_no, "i")?;
        let j: usize = parse_field(it.next(), line_no, "j")?;
        let w: f64 = parse_field(it.next(), line_no, "w")?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                reason: "trailing fields".into(),
            });
        }
        if i >= j {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected i < j, got {i} {j}"),
            });
        }
        edges.push((i, j, w));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            reason: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    UGraph::new(n, edges)
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, line: usize, name: &str) -> Result<T> {
    let s = field.ok_or_else(|| Error::Parse {
        line,
        reason: format!("missing field `{name}`"),
    })?;
    s.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("bad value `{s}` for `{name}`"),
    })
}

pub fn write_edge_list<W: Write>(g: &UGraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.node_count(), g.edge_count())?;
    for (&(i, j), &w) in g.edges().iter().zip(g.weights()) {
        writeln!(out, "{i} {j} {w}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> UGraph {
        UGraph::new(3, [(1, 2, 0.9), (0, 1, 0.2), (0, 2, 1.7)]).unwrap()
    }

    #[test]
    fn canonical_order_and_rejections() {
        let g = triangle();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.weights(), &[0.2, 1.7, 0.9]);
        assert!(UGraph::new(3, [(1, 1, 1.0)]).is_err());
        assert!(UGraph::new(3, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        assert!(UGraph::new(3, [(0, 1, 0.0)]).is_err());
        assert!(UGraph::new(3, [(0, 3, 1.0)]).is_err());
        assert!(UGraph::new(0, []).is_err());
    }

    #[test]
    fn adjacency_forms() {
        let k3 = UGraph::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let w = k3.weighted_adjacency().to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(w[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
        let single = UGraph::new(2, [(0, 1, 0.5)]).unwrap();
        let w = single.weighted_adjacency();
        assert_eq!((w.get(0, 1), w.get(1, 0), w.get(0, 0)), (0.5, 0.5, 0.0));

        let b = triangle().binary_adjacency();
        assert_eq!(b.to_dense(), k3.weighted_adjacency().to_dense());

        let empty = UGraph::new(4, []).unwrap();
        assert_eq!(empty.binary_adjacency().nnz(), 0);
        assert_eq!(empty.binary_adjacency().to_dense(), nalgebra::DMatrix::zeros(4, 4));
    }

    #[test]
    fn laplacian_small_cases() {
        let l = UGraph::new(2, [(0, 1, 0.7)]).unwrap().laplacian();
        assert_eq!(l.to_dense(), nalgebra::DMatrix::from_row_slice(2, 2, &[0.7, -0.7, -0.7, 0.7]));
        let k3 = UGraph::new(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let l = k3.laplacian();
        assert_eq!(l.diagonal(), vec![2.0; 3]);
        assert_eq!(l.get(0, 2), -1.0);
        assert!(l.row_sums().iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn incidence_columns() {
        let (b, bt) = UGraph::new(2, [(0, 1, 3.0)]).unwrap().incidence();
        assert_eq!(b.column(0), [(0, 1.0), (1, -1.0)]);
        assert_eq!(bt.column(0), [(0, 1.0), (1, 1.0)]);

        let path = UGraph::new(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let (b, _) = path.incidence();
        assert_eq!(b.gram_rows(), path.laplacian());
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = triangle();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let back = read_edge_list(buf.as_slice()).unwrap();
        assert_eq!(back, g);

        let bad = ["", "2 1\n1 0 1.0\n", "3 2\n0 1 1\n", "2 1\n0 1 -1\n", "2 1\n0 1 x\n", "2 1\n0 1 1 4\n"];
        for text in bad {
            assert!(read_edge_list(text.as_bytes()).is_err(), "{text:?}");
        }
    }
}
