//! Named graph families and exhaustive small-graph generation.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{disjoint_union, Graph};
use crate::hom::iso::canonical_graph;
use crate::powers::{odd_girth, OddGirth};

/// Default cap for [`generate_all_graphs`].
pub const GENERATE_LIMIT: usize = 7;

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.set_edge(u, v);
        }
    }
    g
}

/// Path on `n` vertices (`n - 1` edges).
pub fn path(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        g.set_edge(v - 1, v);
    }
    g
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    let mut g = path(n);
    g.set_edge(n - 1, 0);
    g
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let mut g = Graph::empty(leaves + 1);
    for v in 1..=leaves {
        g.set_edge(0, v);
    }
    g
}

pub fn petersen() -> Graph {
    let mut g = Graph::empty(10);
    for i in 0..5 {
        g.set_edge(i, (i + 1) % 5);
        g.set_edge(i, i + 5);
        g.set_edge(5 + i, 5 + (i + 2) % 5);
    }
    g
}

/// Replaces every edge by a path of length 2. Original vertices keep their
/// indices; subdivision vertices follow in edge order.
pub fn subdivide(g: &Graph) -> Graph {
    let edges = g.edges();
    let mut out = Graph::empty(g.n() + edges.len());
    for (i, (u, v)) in edges.into_iter().enumerate() {
        let m = g.n() + i;
        out.set_edge(u, m);
        out.set_edge(m, v);
    }
    out
}

pub fn disjoint(graphs: &[Graph]) -> Graph {
    disjoint_union(graphs).0
}

/// Corpus filters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFilter {
    pub min_n: Option<usize>,
    pub max_n: Option<usize>,
    pub max_degree: Option<usize>,
    pub connected: bool,
    pub triangle_free: bool,
    /// Keep graphs whose odd girth is strictly greater than this.
    pub odd_girth_above: Option<usize>,
}

impl GraphFilter {
    pub fn accepts(&self, g: &Graph) -> bool {
        self.min_n.is_none_or(|m| g.n() >= m)
            && self.max_n.is_none_or(|m| g.n() <= m)
            && self.max_degree.is_none_or(|d| g.max_degree() <= d)
            && (!self.connected || g.is_connected())
            && (!self.triangle_free || !g.contains_triangle())
            && self.odd_girth_above.is_none_or(|p| match odd_girth(g) {
                OddGirth::Infinite => true,
                OddGirth::Finite(k) => k > p,
            })
    }
}

/// All graphs on `0..=n_max` vertices up to isomorphism, filtered, ordered
/// by vertex count and then canonical form.
pub fn generate_all_graphs(n_max: usize, filter: &GraphFilter) -> Result<Vec<Graph>> {
    generate_all_graphs_with_limit(n_max, filter, GENERATE_LIMIT)
}

pub fn generate_all_graphs_with_limit(
    n_max: usize,
    filter: &GraphFilter,
    limit: usize,
) -> Result<Vec<Graph>> {
    if n_max > limit {
        return Err(Error::SizeLimit {
            what: "graph generation",
            n: n_max,
            limit,
        });
    }
    let mut out = Vec::new();
    let mut layer = vec![Graph::empty(0)];
    for n in 0..=n_max {
        if n > 0 {
            layer = extend_layer(&layer, n);
        }
        out.extend(layer.iter().filter(|g| filter.accepts(g)).cloned());
    }
    Ok(out)
}

/// Graphs on `n` vertices from graphs on `n - 1`, by attaching a new vertex
/// to every neighbor subset.
fn extend_layer(prev: &[Graph], n: usize) -> Vec<Graph> {
    use rayon::prelude::*;
    let candidates: Vec<_> = prev
        .par_iter()
        .flat_map_iter(|g| {
            (0u64..1 << (n - 1)).map(move |nbrs| {
                let mut h = Graph::empty(n);
                for (u, v) in g.edges() {
                    h.set_edge(u, v);
                }
                for u in crate::graph::mask_iter(nbrs) {
                    h.set_edge(u, n - 1);
                }
                canonical_graph(&h)
            })
        })
        .collect();
    let mut seen = HashSet::new();
    let mut layer: Vec<_> = candidates
        .into_iter()
        .filter(|(form, _)| seen.insert(form.clone()))
        .collect();
    layer.sort_by(|a, b| a.0.cmp(&b.0));
    layer.into_iter().map(|(_, g)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unlabeled_graph_counts() {
        let all = generate_all_graphs(6, &GraphFilter::default()).unwrap();
        let mut counts = [0usize; 7];
        for g in &all {
            counts[g.n()] += 1;
        }
        assert_eq!(counts, [1, 1, 2, 4, 11, 34, 156]);
        assert_eq!(
            generate_all_graphs(3, &GraphFilter::default())
                .unwrap()
                .len(),
            8
        );
    }

    #[test]
    fn filters() {
        let tf = GraphFilter {
            triangle_free: true,
            ..Default::default()
        };
        let all = generate_all_graphs(4, &GraphFilter::default()).unwrap();
        let some = generate_all_graphs(4, &tf).unwrap();
        assert!(some.len() < all.len());
        assert!(some.iter().all(|g| !g.contains_triangle()));

        let only_empty = generate_all_graphs(0, &GraphFilter::default()).unwrap();
        assert_eq!(only_empty, vec![Graph::empty(0)]);

        let connected = GraphFilter {
            connected: true,
            ..Default::default()
        };
        // connected graphs on 1..=5 vertices: 1 + 1 + 2 + 6 + 21
        assert_eq!(generate_all_graphs(5, &connected).unwrap().len(), 31);
        assert!(generate_all_graphs(8, &connected).is_err());
    }

    #[test]
    fn families() {
        assert_eq!(petersen().edge_count(), 15);
        assert!((0..10).all(|v| petersen().degree(v) == 3));
        let s = subdivide(&complete(4));
        assert_eq!((s.n(), s.edge_count()), (10, 12));
        assert_eq!(star(3).max_degree(), 3);
    }
}
