//! Simple undirected graphs stored as bit matrices.
//!
//! Every row is a run of `u64` words, so neighborhood intersections cost
//! `O(n / 64)`. Graphs are immutable once built.

pub(crate) mod balls;

pub use balls::{
    ball_families, for_each_ball_family, quotient, radius_center, validate_ball_family, BallFamily,
    DEFAULT_BALL_LIMIT,
};

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// A subset of `0..n` stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices(n: usize, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(n);
        for v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Builds a set from the low `n` bits of `mask` (`n <= 64`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= 64);
        let mut s = Self::empty(n);
        if n > 0 {
            s.words[0] = if n == 64 {
                mask
            } else {
                mask & ((1u64 << n) - 1)
            };
        }
        s
    }

    /// Low word of the set; only meaningful when the universe fits in 64 bits.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1u64 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> BitIter<'_> {
        BitIter::new(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Iterator over the set bits of a word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Iterates the set bits of a single word.
pub(crate) fn mask_iter(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// A finite simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n);
        Graph {
            n,
            stride,
            adj: vec![0; stride * n],
            labels: None,
        }
    }

    /// Builds a graph from an edge list; duplicate edges collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.stride + v / 64] |= 1u64 << (v % 64);
        self.adj[v * self.stride + u / 64] |= 1u64 << (u % 64);
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Precondition(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.stride + v / 64] >> (v % 64) & 1 == 1
    }

    /// Raw adjacency words of row `v`.
    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.stride..(v + 1) * self.stride]
    }

    pub fn neighbors(&self, v: usize) -> BitIter<'_> {
        BitIter::new(self.row(v))
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        VertexSet {
            n: self.n,
            words: self.row(v).to_vec(),
        }
    }

    /// Neighborhood of `v` as a single word. Requires `n <= 64`.
    #[inline]
    pub fn nbr_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[v * self.stride]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check_owned(&self, s: &VertexSet) -> Result<()> {
        if s.universe() != self.n {
            return Err(Error::ForeignVertexSet(self.n));
        }
        Ok(())
    }

    /// `G[S]`; vertex `i` of the result is the `i`-th smallest element of `S`,
    /// and that mapping is returned alongside.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        self.check_owned(s)?;
        let map = s.to_vec();
        Ok((self.induced_by(&map), map))
    }

    /// Induced subgraph on an ordered list of distinct vertices.
    pub(crate) fn induced_by(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.set_edge(i, j);
                }
            }
        }
        if let Some(l) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| l[v].clone()).collect());
        }
        g
    }

    /// Induced subgraph on the vertices of a 64-bit mask.
    pub(crate) fn induced_mask(&self, mask: u64) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = mask_iter(mask).collect();
        (self.induced_by(&map), map)
    }

    /// Connected components, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::empty(self.n);
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen.contains(s) {
                continue;
            }
            let mut comp = VertexSet::empty(self.n);
            let mut stack = vec![s];
            seen.insert(s);
            while let Some(x) = stack.pop() {
                comp.insert(x);
                for y in self.neighbors(x) {
                    if !seen.contains(y) {
                        seen.insert(y);
                        stack.push(y);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().len() == 1
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for y in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g
    }

    /// Applies a vertex permutation: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v]);
        }
        g
    }

    pub fn contains_triangle(&self) -> bool {
        for (u, v) in self.edges() {
            if self.row(u).iter().zip(self.row(v)).any(|(a, b)| a & b != 0) {
                return true;
            }
        }
        false
    }

    /// Number of triangles through `v`.
    pub(crate) fn triangles_at(&self, v: usize) -> usize {
        let mut t = 0;
        for u in self.neighbors(v) {
            t += self
                .row(u)
                .iter()
                .zip(self.row(v))
                .map(|(a, b)| (a & b).count_ones() as usize)
                .sum::<usize>();
        }
        t / 2
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Disjoint union; the second value holds the vertex offset of each part.
pub fn disjoint_union(graphs: &[Graph]) -> (Graph, Vec<usize>) {
    let total: usize = graphs.iter().map(Graph::n).sum();
    let mut g = Graph::empty(total);
    let mut offsets = Vec::with_capacity(graphs.len());
    let mut off = 0;
    for h in graphs {
        offsets.push(off);
        for (u, v) in h.edges() {
            g.set_edge(off + u, off + v);
        }
        off += h.n();
    }
    (g, offsets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, path};

    #[test]
    fn build_rejects_loops_and_out_of_range() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(Error::LoopEdge(1)));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(Error::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn build_examples() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3, complete(3));
        let k1 = Graph::from_edges(1, &[]).unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 5);
    }

    #[test]
    fn induced_subgraph_examples() {
        let k4 = complete(4);
        let s = VertexSet::from_vertices(4, [0, 1, 2]).unwrap();
        assert_eq!(k4.induced_subgraph(&s).unwrap().0, complete(3));

        let c5 = cycle(5);
        let s = VertexSet::from_vertices(5, [0, 2]).unwrap();
        let (h, map) = c5.induced_subgraph(&s).unwrap();
        assert_eq!((h.n(), h.edge_count()), (2, 0));
        assert_eq!(map, vec![0, 2]);

        let (h, _) = c5.induced_subgraph(&c5.vertex_set()).unwrap();
        assert_eq!(h, c5);

        assert!(c5.induced_subgraph(&VertexSet::empty(4)).is_err());
    }

    #[test]
    fn components() {
        let (g, _) = disjoint_union(&[complete(3), complete(2)]);
        let sizes: Vec<usize> = g.connected_components().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![3, 2]);
        assert_eq!(Graph::empty(4).connected_components().len(), 4);
        assert_eq!(cycle(6).connected_components().len(), 1);
    }

    #[test]
    fn union_examples() {
        let (g, off) = disjoint_union(&[complete(1)]);
        assert_eq!(g, complete(1));
        assert_eq!(off, vec![0]);
        let (g, off) = disjoint_union(&[complete(2), complete(3)]);
        assert_eq!((g.n(), g.edge_count()), (5, 4));
        assert_eq!(off, vec![0, 2]);
        assert_eq!(g.connected_components().len(), 2);
        let (g, _) = disjoint_union(&[]);
        assert_eq!(g.n(), 0);
    }

    #[test]
    fn wide_rows() {
        let p = path(130);
        assert!(p.has_edge(63, 64));
        assert!(p.has_edge(128, 129));
        assert_eq!(p.edge_count(), 129);
        assert!(p.is_connected());
    }
}
