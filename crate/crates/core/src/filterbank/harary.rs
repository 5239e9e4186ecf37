//! Harary decomposition: cover a graph's edges with bipartite subgraphs read
//! off the bits of a proper coloring.

use crate::linalg::SymMatrix;

/// Bipartite levels of a graph. Level 0 is the most significant color bit.
///
/// Every edge of level `t` joins nodes whose color bits agree on levels
/// `0..t` and differ on level `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteDecomposition {
    colors: Vec<u32>,
    color_count: usize,
    levels: usize,
    used_levels: usize,
    level_edges: Vec<Vec<(usize, usize)>>,
    discarded: Vec<(usize, usize)>,
}

impl BipartiteDecomposition {
    pub fn node_count(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Number of colors F in the greedy coloring.
    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// `m = max(1, ⌈log2 F⌉)`.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Levels that take part in filtering, `min(m, m_max)`.
    pub fn used_levels(&self) -> usize {
        self.used_levels
    }

    /// Edges `(i, j)`, `i < j`, assigned to a used level.
    pub fn level_edges(&self, level: usize) -> &[(usize, usize)] {
        &self.level_edges[level]
    }

    /// Edges whose level was capped away; they stay in the graph but take no
    /// part in filtering.
    pub fn discarded_edges(&self) -> &[(usize, usize)] {
        &self.discarded
    }

    /// Color bit of `node` on `level` (0 = low side S_L, 1 = high side S_H).
    pub fn bit(&self, node: usize, level: usize) -> u8 {
        ((self.colors[node] >> (self.levels - 1 - level)) & 1) as u8
    }

    /// `(S_L, S_H)` for one level.
    pub fn side_sets(&self, level: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.node_count()).partition(|&v| self.bit(v, level) == 0)
    }

    /// Channel a node is sampled into: its used-level bits, level 0 most
    /// significant.
    pub fn channel_of(&self, node: usize) -> usize {
        (0..self.used_levels).fold(0, |acc, t| (acc << 1) | self.bit(node, t) as usize)
    }

    pub fn channel_count(&self) -> usize {
        1 << self.used_levels
    }
}

/// Greedy coloring (descending degree, ties by index, smallest free color),
/// with color `c` written as the bit reversal of `c` so that the large,
/// low-numbered color classes alternate sides on every level. Each edge goes to the level of the most significant bit where its
/// endpoint colors differ. Levels at or beyond `max_levels` are discarded.
pub fn harary_decompose(adjacency: &SymMatrix, max_levels: usize) -> BipartiteDecomposition {
    let n = adjacency.dim();
    let degree: Vec<usize> = (0..n)
        .map(|v| adjacency.row(v).0.iter().filter(|&&u| u != v).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));

    const UNSET: u32 = u32::MAX;
    let mut colors = vec![UNSET; n];
    let mut taken: Vec<bool> = Vec::new();
    for &v in &order {
        taken.clear();
        taken.resize(degree[v] + 1, false);
        for &u in adjacency.row(v).0 {
            let c = colors[u];
            if u != v && c != UNSET && (c as usize) < taken.len() {
                taken[c as usize] = true;
            }
        }
        colors[v] = taken.iter().position(|t| !t).unwrap_or(taken.len()) as u32;
    }

    let color_count = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(1);
    let levels = (usize::BITS - (color_count - 1).leading_zeros()).max(1) as usize;
    let used_levels = levels.min(max_levels);
    for c in &mut colors {
        *c = c.reverse_bits() >> (u32::BITS as usize - levels);
    }

    let mut level_edges = vec![Vec::new(); used_levels];
    let mut discarded = Vec::new();
    for (i, j, _) in adjacency.entries() {
        if i >= j {
            continue;
        }
        let diff = colors[i] ^ colors[j];
        debug_assert!(diff != 0, "coloring is proper");
        let msb = (u32::BITS - 1 - diff.leading_zeros()) as usize;
        let level = levels - 1 - msb;
        if level < used_levels {
            level_edges[level].push((i, j));
        } else {
            discarded.push((i, j));
        }
    }

    BipartiteDecomposition {
        colors,
        color_count,
        levels,
        used_levels,
        level_edges,
        discarded,
    }
}
