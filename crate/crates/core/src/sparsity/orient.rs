//! Low-indegree orientations and degeneracy orderings.

use serde::Serialize;

use super::grad_0_flow;
use crate::flow::FlowNetwork;
use crate::graph::Graph;

/// Every edge directed exactly once, as `(tail, head)` in edge order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    pub arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn indegrees(&self, n: usize) -> Vec<usize> {
        let mut d = vec![0; n];
        for &(_, h) in &self.arcs {
            d[h] += 1;
        }
        d
    }

    pub fn max_indegree(&self, n: usize) -> usize {
        self.indegrees(n).into_iter().max().unwrap_or(0)
    }

    /// True iff each edge of `g` appears exactly once, in either direction.
    pub fn orients(&self, g: &Graph) -> bool {
        let edges = g.edges();
        edges.len() == self.arcs.len()
            && edges
                .iter()
                .zip(&self.arcs)
                .all(|(&(u, v), &(t, h))| (t, h) == (u, v) || (t, h) == (v, u))
    }
}

/// Orientation with maximum indegree `⌈∇_0(G)⌉`, found by assigning each
/// edge to one endpoint through a bipartite flow.
pub fn min_indegree_orientation(g: &Graph) -> (Orientation, usize) {
    let d = grad_0_flow(g);
    let k = d.ceil().to_integer();
    let edges = g.edges();
    let m = edges.len();
    let n = g.n();
    let (source, sink) = (m + n, m + n + 1);
    let mut net = FlowNetwork::new(m + n + 2);
    let mut choice = Vec::with_capacity(m);
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(source, i, 1);
        let to_u = net.add_arc(i, m + u, 1);
        let to_v = net.add_arc(i, m + v, 1);
        choice.push((to_u, to_v));
    }
    for v in 0..n {
        net.add_arc(m + v, sink, k);
    }
    let flow = net.max_flow(source, sink);
    assert_eq!(flow as usize, m, "indegree bound ⌈∇_0⌉ must be feasible");
    let arcs = edges
        .iter()
        .zip(&choice)
        .map(|(&(u, v), &(to_u, _))| {
            if net.flow_on(to_u) == 1 {
                (v, u)
            } else {
                (u, v)
            }
        })
        .collect();
    let o = Orientation { arcs };
    let achieved = o.max_indegree(n);
    debug_assert_eq!(achieved as i64, if m == 0 { 0 } else { k });
    (o, achieved)
}

/// Degeneracy with its min-degree elimination order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degeneracy {
    pub value: usize,
    pub order: Vec<usize>,
}

/// Classic peeling: repeatedly delete a vertex of minimum remaining degree
/// (smallest index on ties).
pub fn degeneracy(g: &Graph) -> Degeneracy {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut value = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        value = value.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
            }
        }
    }
    Degeneracy { value, order }
}
