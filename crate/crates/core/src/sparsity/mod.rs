//! Tree-depth with certificates, grads, orientations and degeneracy.

mod grad;
mod orient;

pub use grad::{
    densest_subgraph, expansion_profile, grad_0_flow, grad_lower_bound, grad_r, grad_r_with_limit,
    ExpansionProfile, GradResult,
};
pub use orient::{degeneracy, min_indegree_orientation, Degeneracy, Orientation};

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{mask_iter, Graph, VertexSet};

/// Default cap on component size for the exact tree-depth recursion.
pub const TD_LIMIT: usize = 16;

/// Parent pointers of a rooted forest on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
}

impl RootedForest {
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::InvalidForest(format!(
                        "parent {p} of {v} out of range"
                    )));
                }
            }
        }
        let f = RootedForest { parent };
        // walking up from any vertex must reach a root within n steps
        for v in 0..n {
            let mut x = v;
            let mut steps = 0;
            while let Some(p) = f.parent[x] {
                x = p;
                steps += 1;
                if steps > n {
                    return Err(Error::InvalidForest(format!("cycle through vertex {v}")));
                }
            }
        }
        Ok(f)
    }

    /// Forest of `n` isolated roots.
    pub fn roots(n: usize) -> Self {
        RootedForest {
            parent: vec![None; n],
        }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// `height(v)`: number of vertices on the root-to-`v` path.
    pub fn depth_of(&self, v: usize) -> usize {
        let mut h = 1;
        let mut x = v;
        while let Some(p) = self.parent[x] {
            h += 1;
            x = p;
        }
        h
    }

    pub fn height(&self) -> usize {
        (0..self.n()).map(|v| self.depth_of(v)).max().unwrap_or(0)
    }

    /// True iff `a` is a strict ancestor of `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let mut x = b;
        while let Some(p) = self.parent[x] {
            if p == a {
                return true;
            }
            x = p;
        }
        false
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.is_ancestor(a, b) || self.is_ancestor(b, a)
    }
}

/// `clos(F)`: every vertex adjacent to all of its strict ancestors.
pub fn closure(f: &RootedForest) -> Graph {
    let mut g = Graph::empty(f.n());
    for v in 0..f.n() {
        let mut x = v;
        while let Some(p) = f.parent[x] {
            g.set_edge(p, v);
            x = p;
        }
    }
    g
}

/// Tree-depth together with a witnessing forest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TdCertificate {
    pub value: usize,
    pub forest: RootedForest,
    /// False when some component exceeded the exact limit and a heuristic
    /// upper bound was used.
    pub optimal: bool,
}

/// True iff `G ⊆ clos(F)` and the forest height equals the claimed value.
pub fn verify_td(g: &Graph, cert: &TdCertificate) -> bool {
    cert.forest.n() == g.n()
        && cert.forest.height() == cert.value
        && g.edges()
            .into_iter()
            .all(|(u, v)| cert.forest.comparable(u, v))
}

pub fn tree_depth(g: &Graph) -> TdCertificate {
    tree_depth_with_limit(g, TD_LIMIT)
}

/// Exact tree-depth per component when the component has at most `limit`
/// vertices; larger components fall back to a max-degree elimination
/// heuristic and the certificate is flagged non-optimal.
pub fn tree_depth_with_limit(g: &Graph, limit: usize) -> TdCertificate {
    let limit = limit.min(63);
    let mut parent = vec![None; g.n()];
    let mut value = 0;
    let mut optimal = true;
    for comp in g.connected_components() {
        let verts = comp.to_vec();
        let sub = g.induced_by(&verts);
        let (td, local_parent) = if verts.len() <= limit {
            exact_component(&sub)
        } else {
            optimal = false;
            heuristic_component(&sub)
        };
        value = value.max(td);
        for (i, p) in local_parent.into_iter().enumerate() {
            parent[verts[i]] = p.map(|q| verts[q]);
        }
    }
    TdCertificate {
        value,
        forest: RootedForest { parent },
        optimal,
    }
}

/// Memoized `td(S) = 1 + min_v max_C td(C)` over connected masks.
struct TdMemo<'a> {
    g: &'a Graph,
    memo: HashMap<u64, (u8, u8)>,
}

impl TdMemo<'_> {
    fn components(&self, s: u64) -> Vec<u64> {
        let mut rest = s;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for x in mask_iter(frontier) {
                    next |= self.g.nbr_mask(x);
                }
                next &= s & !comp;
                comp |= next;
                frontier = next;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Tree-depth of the connected set `s`.
    fn td(&mut self, s: u64) -> usize {
        let size = s.count_ones() as usize;
        if size == 1 {
            return 1;
        }
        if let Some(&(t, _)) = self.memo.get(&s) {
            return t as usize;
        }
        let mut best = size;
        let mut best_v = s.trailing_zeros() as usize;
        for v in mask_iter(s) {
            let rest = s & !(1u64 << v);
            let mut worst = 0;
            for c in self.components(rest) {
                worst = worst.max(self.td(c));
                if 1 + worst >= best {
                    break;
                }
            }
            if 1 + worst < best {
                best = 1 + worst;
                best_v = v;
            }
            if best == 2 {
                break;
            }
        }
        self.memo.insert(s, (best as u8, best_v as u8));
        best
    }

    fn best_root(&mut self, s: u64) -> usize {
        if s.count_ones() == 1 {
            return s.trailing_zeros() as usize;
        }
        self.td(s);
        self.memo[&s].1 as usize
    }

    fn build(&mut self, s: u64, parent: Option<usize>, out: &mut [Option<usize>]) {
        let v = self.best_root(s);
        out[v] = parent;
        for c in self.components(s & !(1u64 << v)) {
            self.build(c, Some(v), out);
        }
    }
}

fn exact_component(g: &Graph) -> (usize, Vec<Option<usize>>) {
    let n = g.n();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = TdMemo {
        g,
        memo: HashMap::new(),
    };
    let td = memo.td(full);
    let mut parent = vec![None; n];
    memo.build(full, None, &mut parent);
    (td, parent)
}

/// Repeatedly removes a maximum-degree vertex of each component.
fn heuristic_component(g: &Graph) -> (usize, Vec<Option<usize>>) {
    let n = g.n();
    let mut parent = vec![None; n];
    let mut height = 0;
    let mut stack: Vec<(VertexSet, Option<usize>, usize)> = vec![(g.vertex_set(), None, 1)];
    while let Some((set, par, level)) = stack.pop() {
        let v = set
            .iter()
            .max_by_key(|&v| {
                let mut nb = g.neighbor_set(v);
                nb.intersect_with(&set);
                (nb.len(), std::cmp::Reverse(v))
            })
            .unwrap();
        parent[v] = par;
        height = height.max(level);
        let mut rest = set.clone();
        rest.remove(v);
        let (sub, map) = g.induced_subgraph(&rest).unwrap();
        for comp in sub.connected_components() {
            let lifted = VertexSet::from_vertices(n, comp.iter().map(|i| map[i])).unwrap();
            stack.push((lifted, Some(v), level + 1));
        }
    }
    (height, parent)
}
