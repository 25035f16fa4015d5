//! Homomorphism search, cores and hom-equivalence.
//!
//! The search is a backtracking CSP: source vertices are ordered so that
//! dense, triangle-rich regions come first, and every assignment prunes the
//! candidate sets of the still-unassigned neighbors (forward checking).

pub(crate) mod iso;

pub use iso::{canonical_form, is_isomorphic, CanonicalForm, ISO_LIMIT};

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{words_for, Graph, VertexSet};

/// Default cap on `n` for the exhaustive core computation.
pub const CORE_LIMIT: usize = 10;

/// A total map `V(G) -> V(H)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VertexMap {
    pub source_order: usize,
    pub target_order: usize,
    pub image: Vec<usize>,
    /// Set once every edge has been verified to land on an edge.
    pub checked: bool,
}

impl VertexMap {
    pub fn new(target_order: usize, image: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = image.iter().find(|&&x| x >= target_order) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                n: target_order,
            });
        }
        Ok(VertexMap {
            source_order: image.len(),
            target_order,
            image,
            checked: false,
        })
    }

    pub fn identity(n: usize) -> Self {
        VertexMap {
            source_order: n,
            target_order: n,
            image: (0..n).collect(),
            checked: false,
        }
    }

    /// `other` after `self`.
    pub fn then(&self, other: &VertexMap) -> Result<VertexMap> {
        if self.target_order != other.source_order {
            return Err(Error::Precondition("maps do not compose".into()));
        }
        VertexMap::new(
            other.target_order,
            self.image.iter().map(|&x| other.image[x]).collect(),
        )
    }

    /// Distinct image values, sorted.
    pub fn range(&self) -> Vec<usize> {
        let mut r = self.image.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// True iff `f` sends every edge of `g` to an edge of `h`.
pub fn check_homomorphism(g: &Graph, h: &Graph, f: &VertexMap) -> bool {
    f.image.len() == g.n()
        && f.target_order == h.n()
        && g.edges()
            .into_iter()
            .all(|(x, y)| h.has_edge(f.image[x], f.image[y]))
}

/// Outcome of a bounded search: found, refuted, or out of budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomOutcome {
    Found(VertexMap),
    NotFound,
    Budget,
}

impl HomOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, HomOutcome::Found(_))
    }

    /// `Some(true)` / `Some(false)` when decided, `None` on budget.
    pub fn decided(&self) -> Option<bool> {
        match self {
            HomOutcome::Found(_) => Some(true),
            HomOutcome::NotFound => Some(false),
            HomOutcome::Budget => None,
        }
    }

    pub fn map(self) -> Option<VertexMap> {
        match self {
            HomOutcome::Found(f) => Some(f),
            _ => None,
        }
    }
}

/// Search configuration; `node_limit = None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchLimits {
    pub node_limit: Option<u64>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_limit: Some(50_000_000),
        }
    }
}

impl SearchLimits {
    pub fn unbounded() -> Self {
        SearchLimits { node_limit: None }
    }

    pub fn nodes(limit: u64) -> Self {
        SearchLimits {
            node_limit: Some(limit),
        }
    }
}

/// Static variable order: start where triangles and degree are largest, then
/// always take the vertex with the most already-ordered neighbors.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let tri: Vec<usize> = (0..n).map(|v| g.triangles_at(v)).collect();
    let deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (links[a], tri[a], deg[a])
                    .cmp(&(links[b], tri[b], deg[b]))
                    .then(b.cmp(&a))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
        for y in g.neighbors(next) {
            links[y] += 1;
        }
    }
    order
}

/// Backtracking engine; calls `on_solution` for each homomorphism found
/// (in search order) until it breaks.
fn search(
    g: &Graph,
    h: &Graph,
    limits: SearchLimits,
    mut on_solution: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> std::result::Result<(), ()> {
    let n = g.n();
    if n == 0 {
        let _ = on_solution(&[]);
        return Ok(());
    }
    let hw = words_for(h.n());
    if h.n() == 0 {
        return Ok(());
    }
    let order = search_order(g);
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let forward: Vec<Vec<usize>> = order
        .iter()
        .map(|&x| {
            let mut f: Vec<usize> = g.neighbors(x).filter(|&y| pos[y] > pos[x]).collect();
            f.sort_by_key(|&y| pos[y]);
            f
        })
        .collect();

    let non_isolated: Vec<u64> = {
        let mut s = VertexSet::empty(h.n());
        for v in 0..h.n() {
            if h.degree(v) > 0 {
                s.insert(v);
            }
        }
        s.words().to_vec()
    };
    let all = VertexSet::full(h.n()).words().to_vec();
    let mut domains: Vec<u64> = Vec::with_capacity(n * hw);
    for &x in &order {
        if g.degree(x) > 0 {
            domains.extend_from_slice(&non_isolated);
        } else {
            domains.extend_from_slice(&all);
        }
    }
    // domains are indexed by search position
    let mut trail_pos: Vec<usize> = Vec::new();
    let mut trail_words: Vec<u64> = Vec::new();
    let mut marks = vec![0usize; n];
    let mut next_cand = vec![0usize; n];
    let mut assign = vec![usize::MAX; n];
    let mut image = vec![0usize; n];
    let mut nodes: u64 = 0;

    let undo = |mark: usize,
                trail_pos: &mut Vec<usize>,
                trail_words: &mut Vec<u64>,
                domains: &mut Vec<u64>| {
        while trail_pos.len() > mark {
            let p = trail_pos.pop().unwrap();
            let start = trail_words.len() - hw;
            domains[p * hw..(p + 1) * hw].copy_from_slice(&trail_words[start..]);
            trail_words.truncate(start);
        }
    };

    let mut d: usize = 0;
    loop {
        if d == n {
            for (i, &x) in order.iter().enumerate() {
                image[x] = assign[i];
            }
            if on_solution(&image).is_break() {
                return Ok(());
            }
            // resume: retry last level
            d -= 1;
            undo(marks[d], &mut trail_pos, &mut trail_words, &mut domains);
            next_cand[d] = assign[d] + 1;
            continue;
        }
        let dom = &domains[d * hw..(d + 1) * hw];
        let cand = next_set_bit(dom, next_cand[d]);
        let Some(c) = cand else {
            if d == 0 {
                return Ok(());
            }
            d -= 1;
            undo(marks[d], &mut trail_pos, &mut trail_words, &mut domains);
            next_cand[d] = assign[d] + 1;
            continue;
        };
        nodes += 1;
        if let Some(limit) = limits.node_limit {
            if nodes > limit {
                return Err(());
            }
        }
        assign[d] = c;
        marks[d] = trail_pos.len();
        let row = h.row(c);
        let mut ok = true;
        for &y in &forward[d] {
            let p = pos[y];
            trail_pos.push(p);
            trail_words.extend_from_slice(&domains[p * hw..(p + 1) * hw]);
            let mut any = 0u64;
            for (w, r) in domains[p * hw..(p + 1) * hw].iter_mut().zip(row) {
                *w &= r;
                any |= *w;
            }
            if any == 0 {
                ok = false;
                break;
            }
        }
        if ok {
            d += 1;
            if d < n {
                next_cand[d] = 0;
            }
        } else {
            undo(marks[d], &mut trail_pos, &mut trail_words, &mut domains);
            next_cand[d] = c + 1;
        }
    }
}

fn next_set_bit(words: &[u64], from: usize) -> Option<usize> {
    let mut wi = from / 64;
    if wi >= words.len() {
        return None;
    }
    let mut w = words[wi] & (u64::MAX << (from % 64));
    loop {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi >= words.len() {
            return None;
        }
        w = words[wi];
    }
}

/// Finds a homomorphism `g -> h` under the default node budget.
pub fn find_homomorphism(g: &Graph, h: &Graph) -> HomOutcome {
    find_homomorphism_with(g, h, SearchLimits::default())
}

pub fn find_homomorphism_with(g: &Graph, h: &Graph, limits: SearchLimits) -> HomOutcome {
    let mut found = None;
    let res = search(g, h, limits, |img| {
        found = Some(img.to_vec());
        ControlFlow::Break(())
    });
    match (found, res) {
        (Some(img), _) => {
            let mut f = VertexMap::new(h.n(), img).expect("search stays in range");
            f.checked = check_homomorphism(g, h, &f);
            assert!(f.checked, "search produced a non-homomorphism");
            HomOutcome::Found(f)
        }
        (None, Ok(())) => HomOutcome::NotFound,
        (None, Err(())) => HomOutcome::Budget,
    }
}

/// Visits every homomorphism `g -> h`. Returns `Err(Budget)` if the node
/// limit ran out before the enumeration completed.
pub fn for_each_homomorphism(
    g: &Graph,
    h: &Graph,
    limits: SearchLimits,
    f: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    search(g, h, limits, f).map_err(|_| Error::Budget(limits.node_limit.unwrap_or(0)))
}

/// Membership of a graph in `Forb(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ForbOutcome {
    Member,
    /// `forbidden[index] -> G` via `witness`.
    NotMember {
        index: usize,
        witness: Vec<usize>,
    },
    Unknown,
}

impl ForbOutcome {
    pub fn decided(&self) -> Option<bool> {
        match self {
            ForbOutcome::Member => Some(true),
            ForbOutcome::NotMember { .. } => Some(false),
            ForbOutcome::Unknown => None,
        }
    }
}

/// Is `G` in `Forb(F)`, i.e. no member of `forbidden` maps to `G`?
pub fn forb_member(g: &Graph, forbidden: &[Graph], limits: SearchLimits) -> ForbOutcome {
    let mut unknown = false;
    for (i, f) in forbidden.iter().enumerate() {
        match find_homomorphism_with(f, g, limits) {
            HomOutcome::Found(w) => {
                return ForbOutcome::NotMember {
                    index: i,
                    witness: w.image,
                }
            }
            HomOutcome::NotFound => {}
            HomOutcome::Budget => unknown = true,
        }
    }
    if unknown {
        ForbOutcome::Unknown
    } else {
        ForbOutcome::Member
    }
}

/// `Some(true)` iff `G -> H` and `H -> G`; `None` on budget.
pub fn hom_equivalent(g: &Graph, h: &Graph, limits: SearchLimits) -> Option<bool> {
    match find_homomorphism_with(g, h, limits).decided()? {
        false => Some(false),
        true => find_homomorphism_with(h, g, limits).decided(),
    }
}

/// The core of a graph together with the vertices of `G` it occupies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Core {
    pub graph: Graph,
    pub vertices: Vec<usize>,
}

/// Core of `G`: the lexicographically first vertex set among the smallest
/// induced subgraphs that `G` retracts onto.
pub fn core(g: &Graph) -> Result<Core> {
    core_with_limit(g, CORE_LIMIT)
}

pub fn core_with_limit(g: &Graph, limit: usize) -> Result<Core> {
    if g.n() > limit {
        return Err(Error::SizeLimit {
            what: "core",
            n: g.n(),
            limit,
        });
    }
    let limits = SearchLimits::unbounded();
    // shrink by non-surjective endomorphisms to find the core order
    let mut current: Vec<usize> = (0..g.n()).collect();
    'shrink: loop {
        for i in 0..current.len() {
            let mut smaller = current.clone();
            smaller.remove(i);
            let target = g.induced_by(&smaller);
            if let HomOutcome::Found(f) = find_homomorphism_with(g, &target, limits) {
                let mut img: Vec<usize> = f.image.iter().map(|&x| smaller[x]).collect();
                img.sort_unstable();
                img.dedup();
                current = img;
                continue 'shrink;
            }
        }
        break;
    }
    let size = current.len();
    // canonical choice among retracts of that order
    let mut combo: Vec<usize> = (0..size).collect();
    loop {
        let target = g.induced_by(&combo);
        if find_homomorphism_with(g, &target, limits).is_found() {
            return Ok(Core {
                graph: target,
                vertices: combo,
            });
        }
        if !next_combination(&mut combo, g.n()) {
            break;
        }
    }
    Ok(Core {
        graph: g.induced_by(&current),
        vertices: current,
    })
}

/// Advances a sorted k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut c: Vec<usize> = (0..k).collect();
    let mut out = vec![c.clone()];
    while k > 0 && next_combination(&mut c, n) {
        out.push(c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, disjoint, path};

    /// Exhaustive oracle over all |V(H)|^|V(G)| maps.
    fn brute_hom_exists(g: &Graph, h: &Graph) -> bool {
        let n = g.n();
        if n == 0 {
            return true;
        }
        let m = h.n();
        if m == 0 {
            return false;
        }
        let mut img = vec![0usize; n];
        loop {
            if g.edges().iter().all(|&(x, y)| h.has_edge(img[x], img[y])) {
                return true;
            }
            let mut i = 0;
            while i < n {
                img[i] += 1;
                if img[i] < m {
                    break;
                }
                img[i] = 0;
                i += 1;
            }
            if i == n {
                return false;
            }
        }
    }

    #[test]
    fn find_examples() {
        assert!(find_homomorphism(&cycle(5), &complete(3)).is_found());
        assert_eq!(
            find_homomorphism(&complete(3), &cycle(5)),
            HomOutcome::NotFound
        );
        assert!(find_homomorphism(&Graph::empty(4), &complete(1)).is_found());
        assert_eq!(
            find_homomorphism(&path(2), &complete(1)),
            HomOutcome::NotFound
        );
        assert!(find_homomorphism(&Graph::empty(0), &Graph::empty(0)).is_found());
        assert_eq!(
            find_homomorphism(&complete(1), &Graph::empty(0)),
            HomOutcome::NotFound
        );
    }

    #[test]
    fn budget_is_distinct_from_refutation() {
        let out = find_homomorphism_with(&complete(5), &complete(4), SearchLimits::nodes(3));
        assert_eq!(out, HomOutcome::Budget);
        assert_eq!(out.decided(), None);
    }

    #[test]
    fn check_examples() {
        let k3 = complete(3);
        assert!(check_homomorphism(&k3, &k3, &VertexMap::identity(3)));
        let k2 = complete(2);
        assert!(!check_homomorphism(
            &k2,
            &k2,
            &VertexMap::new(2, vec![0, 0]).unwrap()
        ));
        let parity = VertexMap::new(2, (0..6).map(|v| v % 2).collect()).unwrap();
        assert!(check_homomorphism(&cycle(6), &k2, &parity));
    }

    #[test]
    fn forb_examples() {
        let l = SearchLimits::default();
        assert_eq!(
            forb_member(&cycle(5), &[complete(3)], l),
            ForbOutcome::Member
        );
        assert!(matches!(
            forb_member(&complete(4), &[complete(3)], l),
            ForbOutcome::NotMember { index: 0, .. }
        ));
        assert_eq!(forb_member(&complete(4), &[], l), ForbOutcome::Member);
    }

    #[test]
    fn core_examples() {
        assert_eq!(core(&cycle(6)).unwrap().graph, complete(2));
        for n in 1..6 {
            assert_eq!(core(&complete(n)).unwrap().graph, complete(n));
        }
        let g = disjoint(&[complete(2), complete(3)]);
        let c = core(&g).unwrap();
        assert_eq!(c.graph, complete(3));
        assert_eq!(c.vertices, vec![2, 3, 4]);
        assert_eq!(core(&cycle(5)).unwrap().graph, cycle(5));
        assert!(core(&path(11)).is_err());
    }

    #[test]
    fn hom_equivalence_examples() {
        let l = SearchLimits::default();
        assert_eq!(hom_equivalent(&cycle(6), &complete(2), l), Some(true));
        assert_eq!(hom_equivalent(&cycle(5), &complete(3), l), Some(false));
        assert_eq!(hom_equivalent(&cycle(7), &cycle(7), l), Some(true));
    }

    #[test]
    fn odd_cycle_order() {
        for k in 1..=4 {
            for l in 1..=4 {
                let found = find_homomorphism(&cycle(2 * k + 1), &cycle(2 * l + 1)).is_found();
                assert_eq!(found, l <= k, "C{} -> C{}", 2 * k + 1, 2 * l + 1);
            }
        }
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        let small = crate::catalog::generate_all_graphs(4, &Default::default()).unwrap();
        for g in &small {
            for h in &small {
                let got = find_homomorphism(g, h);
                assert_eq!(got.is_found(), brute_hom_exists(g, h), "{g:?} -> {h:?}");
            }
        }
    }

    #[test]
    fn enumerates_all_colorings() {
        // proper 3-colorings of C_5: (k-1)^n + (-1)^n (k-1) = 32 - 2 = 30
        let mut count = 0;
        for_each_homomorphism(&cycle(5), &complete(3), SearchLimits::unbounded(), |_| {
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(count, 30);
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }
}
