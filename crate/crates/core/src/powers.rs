//! Exact powers, exact-distance graphs, odd girth and chromatic number.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Longest path length accepted by [`exact_power`].
pub const EXACT_POWER_LIMIT: usize = 7;
/// Vertex cap for the exact chromatic number.
pub const CHROMATIC_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerKind {
    /// Endpoints of a simple path of length exactly `p`.
    ExactPath,
    /// Vertices at distance exactly `p`.
    ExactDistance,
}

/// `G^{♮p}`: `{x, y}` is an edge iff some simple path of length `p` joins
/// them.
pub fn exact_power(g: &Graph, p: usize) -> Result<Graph> {
    if p == 0 || p > EXACT_POWER_LIMIT {
        return Err(Error::Precondition(format!(
            "exact power length must be in 1..={EXACT_POWER_LIMIT}, got {p}"
        )));
    }
    let n = g.n();
    let mut out = Graph::empty(n);
    let mut on_path = vec![false; n];
    fn walk(g: &Graph, x: usize, left: usize, start: usize, on_path: &mut [bool], out: &mut Graph) {
        if left == 0 {
            if x != start {
                out.set_edge(start, x);
            }
            return;
        }
        for y in g.neighbors(x) {
            if !on_path[y] {
                on_path[y] = true;
                walk(g, y, left - 1, start, on_path, out);
                on_path[y] = false;
            }
        }
    }
    for s in 0..n {
        on_path[s] = true;
        walk(g, s, p, s, &mut on_path, &mut out);
        on_path[s] = false;
    }
    Ok(out)
}

/// `G^{[♮p]}`: `{x, y}` is an edge iff `d(x, y) = p`.
pub fn exact_distance_graph(g: &Graph, p: usize) -> Result<Graph> {
    if p == 0 {
        return Err(Error::Precondition("distance must be at least 1".into()));
    }
    let n = g.n();
    let mut out = Graph::empty(n);
    for x in 0..n {
        for (y, d) in g.bfs_distances(x).into_iter().enumerate() {
            if y > x && d == Some(p) {
                out.set_edge(x, y);
            }
        }
    }
    Ok(out)
}

pub fn power(g: &Graph, kind: PowerKind, p: usize) -> Result<Graph> {
    match kind {
        PowerKind::ExactPath => exact_power(g, p),
        PowerKind::ExactDistance => exact_distance_graph(g, p),
    }
}

/// Length of a shortest odd cycle, or `Infinite` for bipartite graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OddGirth {
    Finite(usize),
    Infinite,
}

impl OddGirth {
    /// `odd-girth > p`.
    pub fn exceeds(self, p: usize) -> bool {
        match self {
            OddGirth::Finite(k) => k > p,
            OddGirth::Infinite => true,
        }
    }
}

impl Serialize for OddGirth {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OddGirth::Finite(k) => s.serialize_u64(*k as u64),
            OddGirth::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// A BFS from every root: an edge between two vertices on the same level
/// closes an odd walk of length `2d + 1`; the minimum over roots is the odd
/// girth.
pub fn odd_girth(g: &Graph) -> OddGirth {
    let mut best: Option<usize> = None;
    for s in 0..g.n() {
        let dist = g.bfs_distances(s);
        for (u, v) in g.edges() {
            if let (Some(a), Some(b)) = (dist[u], dist[v]) {
                if a == b {
                    let len = 2 * a + 1;
                    best = Some(best.map_or(len, |x| x.min(len)));
                }
            }
        }
    }
    match best {
        Some(k) => OddGirth::Finite(k),
        None => OddGirth::Infinite,
    }
}

/// Chromatic number, exact when `exact` is set, otherwise a bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Chromatic {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
}

impl Chromatic {
    pub fn value(&self) -> Option<usize> {
        self.exact.then_some(self.lower)
    }
}

/// Greedy clique: repeatedly add the candidate with most candidate
/// neighbors. A lower bound on `χ`.
fn greedy_clique(g: &Graph) -> usize {
    let n = g.n();
    let mut best = usize::from(n > 0);
    for start in 0..n {
        let mut cand: Vec<usize> = g.neighbors(start).collect();
        let mut size = 1;
        while !cand.is_empty() {
            let &next = cand
                .iter()
                .max_by_key(|&&v| cand.iter().filter(|&&u| g.has_edge(u, v)).count())
                .unwrap();
            size += 1;
            cand.retain(|&u| u != next && g.has_edge(u, next));
        }
        best = best.max(size);
    }
    best
}

/// DSATUR greedy coloring; returns the number of colors used.
fn dsatur_greedy(g: &Graph) -> usize {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| {
                let mut sat: Vec<usize> = g
                    .neighbors(v)
                    .filter(|&u| color[u] != usize::MAX)
                    .map(|u| color[u])
                    .collect();
                sat.sort_unstable();
                sat.dedup();
                (sat.len(), g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        let c = (0..)
            .find(|&c| g.neighbors(v).all(|u| color[u] != c))
            .unwrap();
        color[v] = c;
        used = used.max(c + 1);
    }
    used
}

/// Is `g` colorable with `k` colors? DSATUR-ordered backtracking.
fn colorable(g: &Graph, k: usize) -> bool {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    fn rec(g: &Graph, k: usize, color: &mut [usize], colored: usize, max_used: usize) -> bool {
        let n = g.n();
        if colored == n {
            return true;
        }
        // most saturated uncolored vertex
        let mut pick = None;
        let mut pick_key = (0usize, 0usize);
        for v in 0..n {
            if color[v] != usize::MAX {
                continue;
            }
            let mut seen = 0u64;
            for u in g.neighbors(v) {
                if color[u] != usize::MAX {
                    seen |= 1 << color[u];
                }
            }
            let key = (seen.count_ones() as usize, g.degree(v));
            if pick.is_none() || key > pick_key {
                pick = Some((v, seen));
                pick_key = key;
            }
        }
        let (v, seen) = pick.unwrap();
        // symmetry: at most one fresh color
        for c in 0..k.min(max_used + 1) {
            if seen >> c & 1 == 1 {
                continue;
            }
            color[v] = c;
            if rec(g, k, color, colored + 1, max_used.max(c + 1)) {
                return true;
            }
            color[v] = usize::MAX;
        }
        false
    }
    rec(g, k, &mut color, 0, 0)
}

/// Exact `χ(G)` up to [`CHROMATIC_LIMIT`] vertices; beyond it, the
/// clique / DSATUR bracket.
pub fn chromatic_number(g: &Graph) -> Chromatic {
    let lower = greedy_clique(g);
    let upper = dsatur_greedy(g);
    if g.n() > CHROMATIC_LIMIT {
        return Chromatic {
            lower,
            upper,
            exact: lower == upper,
        };
    }
    let mut k = lower;
    while k < upper && !colorable(g, k) {
        k += 1;
    }
    Chromatic {
        lower: k,
        upper: k,
        exact: true,
    }
}

/// Per-graph record of the odd-power experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddPowerItem {
    pub index: usize,
    pub odd_girth: OddGirth,
    pub skipped: bool,
    pub chi_exact_power: Option<usize>,
    pub chi_exact_distance: Option<usize>,
    /// `Δ^p + 1`.
    pub ceiling: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddPowerReport {
    pub p: usize,
    pub items: Vec<OddPowerItem>,
    pub max_chi_exact_power: Option<usize>,
    pub max_chi_exact_distance: Option<usize>,
    pub claim: Option<u128>,
    pub within_ceiling: bool,
    pub within_claim: Option<bool>,
    pub pass: bool,
}

/// For each corpus graph with odd girth above `p`, computes `χ(G^{♮p})` and
/// `χ(G^{[♮p]})` and compares the maxima with `claim` and `Δ^p + 1`.
pub fn odd_power_experiment(
    corpus: &[Graph],
    p: usize,
    claim: Option<u128>,
) -> Result<OddPowerReport> {
    use rayon::prelude::*;
    if p % 2 == 0 {
        return Err(Error::Precondition(format!("p must be odd, got {p}")));
    }
    let items: Vec<OddPowerItem> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, g)| -> Result<OddPowerItem> {
            let og = odd_girth(g);
            let ceiling = (g.max_degree() as u128).pow(p as u32) + 1;
            if !og.exceeds(p) {
                return Ok(OddPowerItem {
                    index,
                    odd_girth: og,
                    skipped: true,
                    chi_exact_power: None,
                    chi_exact_distance: None,
                    ceiling,
                });
            }
            let a = chromatic_number(&exact_power(g, p)?);
            let b = chromatic_number(&exact_distance_graph(g, p)?);
            Ok(OddPowerItem {
                index,
                odd_girth: og,
                skipped: false,
                chi_exact_power: a.value(),
                chi_exact_distance: b.value(),
                ceiling,
            })
        })
        .collect::<Result<_>>()?;
    let considered: Vec<&OddPowerItem> = items.iter().filter(|i| !i.skipped).collect();
    let all_exact = considered
        .iter()
        .all(|i| i.chi_exact_power.is_some() && i.chi_exact_distance.is_some());
    let max_a = considered.iter().filter_map(|i| i.chi_exact_power).max();
    let max_b = considered.iter().filter_map(|i| i.chi_exact_distance).max();
    let within_ceiling = considered.iter().all(|i| {
        i.chi_exact_power.is_some_and(|c| c as u128 <= i.ceiling)
            && i.chi_exact_distance.is_some_and(|c| c as u128 <= i.ceiling)
    });
    let within_claim =
        claim.map(|n| max_a.is_none_or(|a| a as u128 <= n) && max_b.is_none_or(|b| b as u128 <= n));
    Ok(OddPowerReport {
        p,
        pass: all_exact && within_ceiling && within_claim != Some(false),
        items,
        max_chi_exact_power: max_a,
        max_chi_exact_distance: max_b,
        claim,
        within_ceiling,
        within_claim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, disjoint, path, petersen};
    use crate::hom::is_isomorphic;

    #[test]
    fn exact_power_examples() {
        let g = petersen();
        assert_eq!(exact_power(&g, 1).unwrap(), g);
        let c5sq = exact_power(&cycle(5), 2).unwrap();
        assert!(is_isomorphic(&c5sq, &cycle(5)).unwrap());
        let p3sq = exact_power(&path(3), 2).unwrap();
        assert_eq!(p3sq.edges(), vec![(0, 2)]);
        assert!(exact_power(&g, 8).is_err());
    }

    #[test]
    fn exact_distance_examples() {
        let g = cycle(7);
        assert_eq!(exact_distance_graph(&g, 1).unwrap(), g);
        let m = exact_distance_graph(&cycle(6), 3).unwrap();
        assert_eq!(m.edges(), vec![(0, 3), (1, 4), (2, 5)]);
        let two = disjoint(&[complete(2), complete(2)]);
        assert_eq!(exact_distance_graph(&two, 2).unwrap().edge_count(), 0);
    }

    #[test]
    fn odd_girth_examples() {
        assert_eq!(odd_girth(&cycle(5)), OddGirth::Finite(5));
        assert_eq!(odd_girth(&path(6)), OddGirth::Infinite);
        assert_eq!(odd_girth(&petersen()), OddGirth::Finite(5));
        assert_eq!(odd_girth(&complete(4)), OddGirth::Finite(3));
        assert_eq!(odd_girth(&cycle(8)), OddGirth::Infinite);
        assert_eq!(
            serde_json::to_string(&OddGirth::Infinite).unwrap(),
            "\"infinity\""
        );
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&complete(4)).value(), Some(4));
        assert_eq!(chromatic_number(&cycle(5)).value(), Some(3));
        assert_eq!(chromatic_number(&petersen()).value(), Some(3));
        assert_eq!(chromatic_number(&Graph::empty(0)).value(), Some(0));
        assert_eq!(chromatic_number(&Graph::empty(3)).value(), Some(1));
        // Petersen is not 2-colorable: exhaustive check
        assert!(!colorable(&petersen(), 2));
        let big = chromatic_number(&cycle(25));
        assert!(!big.exact || big.lower == 3);
        assert!(big.lower <= 3 && big.upper >= 3);
    }

    #[test]
    fn experiment_examples() {
        let r = odd_power_experiment(&[cycle(7)], 3, Some(10)).unwrap();
        assert!(r.pass);
        assert!(!r.items[0].skipped);
        assert!(r.max_chi_exact_power.is_some());

        let r = odd_power_experiment(&[complete(4)], 3, None).unwrap();
        assert!(r.items[0].skipped);
        assert!(r.pass);

        let r = odd_power_experiment(&[cycle(6), path(5)], 3, None).unwrap();
        assert!(r
            .items
            .iter()
            .all(|i| !i.skipped && i.chi_exact_distance.is_some()));

        assert!(odd_power_experiment(&[], 2, None).is_err());
    }
}
