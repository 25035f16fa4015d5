//! Greatest reduced average densities.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Result;
use crate::flow::FlowNetwork;
use crate::graph::{balls::valid_balls, BallFamily, Graph, VertexSet, DEFAULT_BALL_LIMIT};
use crate::Rational;

/// Value of `∇_r(G)` with an attaining family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradResult {
    #[serde(serialize_with = "crate::rational_serde::serialize")]
    pub value: Rational,
    #[serde(skip)]
    pub witness: BallFamily,
    /// False for the greedy lower bound used beyond the exhaustive limit.
    pub exact: bool,
}

fn ratio(e: usize, k: usize) -> Rational {
    if k == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(e as i64, k as i64)
    }
}

/// `∇_r(G)`; exhaustive when `n <= 12`, otherwise a flagged lower bound.
pub fn grad_r(g: &Graph, r: usize) -> GradResult {
    grad_r_with_limit(g, r, DEFAULT_BALL_LIMIT)
}

pub fn grad_r_with_limit(g: &Graph, r: usize, limit: usize) -> GradResult {
    if g.n() > limit.min(64) {
        return grad_lower_bound(g, r);
    }
    let n = g.n();
    let balls = valid_balls(g, r);
    let mut by_min: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n];
    for b in balls {
        let mut reach = 0u64;
        for v in crate::graph::mask_iter(b) {
            reach |= g.nbr_mask(v);
        }
        by_min[b.trailing_zeros() as usize].push((b, reach));
    }

    struct Search<'a> {
        n: usize,
        by_min: &'a [Vec<(u64, u64)>],
        stack: Vec<(u64, u64)>,
        best: (usize, usize),
        best_family: Vec<u64>,
    }

    impl Search<'_> {
        fn rec(&mut self, v: usize, used: u64, edges: usize) {
            let mut v = v;
            while v < self.n && used >> v & 1 == 1 {
                v += 1;
            }
            if v >= self.n {
                let k = self.stack.len();
                let (be, bk) = self.best;
                // e/k > be/bk
                if k > 0 && (bk == 0 || edges * bk > be * k) {
                    self.best = (edges, k);
                    self.best_family = self.stack.iter().map(|&(b, _)| b).collect();
                }
                return;
            }
            self.rec(v + 1, used, edges);
            for i in 0..self.by_min[v].len() {
                let (b, reach) = self.by_min[v][i];
                if b & used != 0 {
                    continue;
                }
                let added = self.stack.iter().filter(|&&(o, _)| reach & o != 0).count();
                self.stack.push((b, reach));
                self.rec(v + 1, used | b, edges + added);
                self.stack.pop();
            }
        }
    }

    let mut s = Search {
        n,
        by_min: &by_min,
        stack: Vec::new(),
        best: (0, 0),
        best_family: Vec::new(),
    };
    s.rec(0, 0, 0);
    let witness = BallFamily::new(
        s.best_family
            .iter()
            .map(|&b| VertexSet::from_mask(n, b))
            .collect(),
        r,
    );
    GradResult {
        value: ratio(s.best.0, s.best.1),
        witness,
        exact: true,
    }
}

/// Greedy lower bound on `∇_r(G)`: BFS balls packed around high-degree
/// centers, compared with the densest subgraph (`∇_0 <= ∇_r`).
pub fn grad_lower_bound(g: &Graph, r: usize) -> GradResult {
    let n = g.n();
    let (dense_value, dense_set) = densest_subgraph(g);
    let mut best = GradResult {
        value: dense_value,
        witness: BallFamily::singletons(&dense_set),
        exact: false,
    };
    let mut centers: Vec<usize> = (0..n).collect();
    centers.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut used = VertexSet::empty(n);
    let mut balls: Vec<VertexSet> = Vec::new();
    for c in centers {
        if used.contains(c) {
            continue;
        }
        let mut ball = VertexSet::empty(n);
        ball.insert(c);
        let mut frontier = vec![c];
        for _ in 0..r {
            let mut next = Vec::new();
            for &x in &frontier {
                for y in g.neighbors(x) {
                    if !used.contains(y) && !ball.contains(y) {
                        ball.insert(y);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        used.union_with(&ball);
        balls.push(ball);
    }
    let family = BallFamily::new(balls, r);
    if let Ok(q) = crate::graph::quotient(g, &family) {
        let v = ratio(q.edge_count(), q.n());
        if v > best.value {
            best.value = v;
            best.witness = family;
        }
    }
    best
}

/// Does some nonempty `S` satisfy `b·|E(S)| - a·|S| > 0`, i.e. density
/// strictly above `a/b`? Returns the source side of a minimum cut.
fn denser_than(g: &Graph, edges: &[(usize, usize)], a: i64, b: i64) -> Option<VertexSet> {
    let n = g.n();
    let m = edges.len();
    let source = m + n;
    let sink = source + 1;
    let mut net = FlowNetwork::new(m + n + 2);
    const INF: i64 = i64::MAX / 4;
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(source, i, b);
        net.add_arc(i, m + u, INF);
        net.add_arc(i, m + v, INF);
    }
    for v in 0..n {
        net.add_arc(m + v, sink, a);
    }
    let flow = net.max_flow(source, sink);
    if b * m as i64 - flow > 0 {
        let side = net.source_side(source);
        let set = VertexSet::from_vertices(n, (0..n).filter(|&v| side[m + v])).unwrap();
        Some(set)
    } else {
        None
    }
}

/// Exact `max |E(H)| / |V(H)|` over subgraphs, with an attaining vertex set.
pub fn densest_subgraph(g: &Graph) -> (Rational, VertexSet) {
    let n = g.n();
    let edges = g.edges();
    if n == 0 {
        return (Rational::from_integer(0), VertexSet::empty(0));
    }
    if edges.is_empty() {
        return (
            Rational::from_integer(0),
            VertexSet::from_vertices(n, [0]).unwrap(),
        );
    }
    // the optimum is e/k with e <= m, k <= n
    let mut cands: Vec<Rational> = (1..=n)
        .flat_map(|k| (0..=edges.len()).map(move |e| ratio(e, k)))
        .collect();
    cands.sort();
    cands.dedup();
    // smallest candidate d with no subgraph strictly denser than d
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    let mut witness = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let d = cands[mid];
        match denser_than(g, &edges, *d.numer(), *d.denom()) {
            Some(s) => {
                witness = Some(s);
                lo = mid + 1;
            }
            None => hi = mid,
        }
    }
    let value = cands[lo];
    // witness from the largest refuted threshold below the optimum
    let witness = if lo > 0 {
        let d = cands[lo - 1];
        denser_than(g, &edges, *d.numer(), *d.denom()).or(witness)
    } else {
        witness
    };
    let set = witness.unwrap_or_else(|| VertexSet::from_vertices(n, [0]).unwrap());
    (value, set)
}

/// `∇_0(G)` by parametric max-flow.
pub fn grad_0_flow(g: &Graph) -> Rational {
    densest_subgraph(g).0
}

/// `∇_r(G)` for `r = 0..=r_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionProfile {
    #[serde(serialize_with = "crate::rational_serde::serialize_vec")]
    pub values: Vec<Rational>,
    pub exact: bool,
}

impl ExpansionProfile {
    pub fn is_monotone(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| w[0].cmp(&w[1]) != Ordering::Greater)
    }
}

pub fn expansion_profile(g: &Graph, r_max: usize) -> Result<ExpansionProfile> {
    let results: Vec<GradResult> = (0..=r_max).map(|r| grad_r(g, r)).collect();
    let exact = results.iter().all(|r| r.exact);
    let profile = ExpansionProfile {
        values: results.into_iter().map(|r| r.value).collect(),
        exact,
    };
    if exact && !profile.is_monotone() {
        return Err(crate::Error::Precondition(format!(
            "expansion profile not monotone: {:?}",
            profile.values
        )));
    }
    Ok(profile)
}
