//! Centered colorings and low tree-depth colorings.

use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{balls::for_each_connected_subset, mask_iter, Graph, VertexSet};
use crate::hom::combinations;
use crate::sparsity::{
    degeneracy, tree_depth, tree_depth_with_limit, verify_td, TdCertificate, TD_LIMIT,
};

/// Vertex cap for centered-coloring verification.
pub const CENTERED_LIMIT: usize = 16;
/// Largest graph for which the low tree-depth search is exhaustive.
pub const EXHAUSTIVE_COLORING_LIMIT: usize = 10;

/// Vertex coloring with colors `0..k`, every class nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    colors: Vec<usize>,
    k: usize,
}

impl Coloring {
    /// Compresses arbitrary color values to `0..k`, preserving their order.
    pub fn new(raw: Vec<usize>) -> Self {
        let mut vals = raw.clone();
        vals.sort_unstable();
        vals.dedup();
        let colors = raw.iter().map(|c| vals.binary_search(c).unwrap()).collect();
        Coloring {
            colors,
            k: vals.len(),
        }
    }

    /// Every vertex its own color.
    pub fn rainbow(n: usize) -> Self {
        Coloring {
            colors: (0..n).collect(),
            k: n,
        }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Color classes as vertex lists.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges()
            .into_iter()
            .all(|(u, v)| self.colors[u] != self.colors[v])
    }

    pub(crate) fn check_owner(&self, g: &Graph) -> Result<()> {
        if self.colors.len() != g.n() {
            return Err(Error::InvalidColoring(format!(
                "{} colors for {} vertices",
                self.colors.len(),
                g.n()
            )));
        }
        Ok(())
    }

    pub(crate) fn class_masks(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.k];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c] |= 1 << v;
        }
        out
    }
}

fn require_small(g: &Graph, what: &'static str, limit: usize) -> Result<()> {
    if g.n() > limit {
        return Err(Error::SizeLimit {
            what,
            n: g.n(),
            limit,
        });
    }
    Ok(())
}

/// Result of a centered-coloring check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenteredCheck {
    pub ok: bool,
    pub counterexample: Option<VertexSet>,
}

/// Number of distinct colors on `s`, and whether some color occurs once.
fn color_profile(c: &Coloring, s: u64) -> (usize, bool) {
    let mut counts = [0u8; 64];
    for v in mask_iter(s) {
        counts[c.colors[v]] += 1;
    }
    let distinct = counts.iter().filter(|&&x| x > 0).count();
    let unique = counts.contains(&1);
    (distinct, unique)
}

/// Checks that every connected subgraph has a color occurring exactly once
/// or at least `p` colors. The condition only depends on vertex sets, so
/// connected vertex subsets are enumerated.
pub fn verify_p_centered(g: &Graph, c: &Coloring, p: usize) -> Result<CenteredCheck> {
    require_small(g, "centered-coloring verification", CENTERED_LIMIT)?;
    c.check_owner(g)?;
    let full = (1u64 << g.n()) - 1;
    let mut bad = None;
    let _ = for_each_connected_subset(g, full, &mut |s| {
        let (distinct, unique) = color_profile(c, s);
        if !unique && distinct < p {
            bad = Some(s);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(CenteredCheck {
        ok: bad.is_none(),
        counterexample: bad.map(|s| VertexSet::from_mask(g.n(), s)),
    })
}

/// Largest `p` for which `c` is `p`-centered; `None` when it is
/// `p`-centered for every `p`.
pub fn centered_level(g: &Graph, c: &Coloring) -> Result<Option<usize>> {
    require_small(g, "centered-coloring verification", CENTERED_LIMIT)?;
    c.check_owner(g)?;
    let full = (1u64 << g.n()) - 1;
    let mut level: Option<usize> = None;
    let _ = for_each_connected_subset(g, full, &mut |s| {
        let (distinct, unique) = color_profile(c, s);
        if !unique {
            level = Some(level.map_or(distinct, |l| l.min(distinct)));
        }
        ControlFlow::Continue(())
    });
    Ok(level)
}

/// Colors each vertex by its level in the certificate forest (roots get 0).
/// The result is `p`-centered for every `p`.
pub fn centered_from_td(g: &Graph, cert: &TdCertificate) -> Result<Coloring> {
    if !verify_td(g, cert) {
        return Err(Error::InvalidCertificate(
            "graph is not contained in the closure of the forest".into(),
        ));
    }
    Ok(Coloring::new(
        (0..g.n()).map(|v| cert.forest.depth_of(v) - 1).collect(),
    ))
}

/// A component of the subgraph induced by a set of color classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassComponent {
    pub classes: Vec<usize>,
    pub component: Vec<usize>,
    pub td: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowTdReport {
    pub ok: bool,
    /// Component maximizing `td - |classes|` (first found on ties).
    pub worst: Option<ClassComponent>,
    pub subsets_checked: usize,
}

/// Tree-depth of connected masks, memoized across class subsets.
#[derive(Default)]
struct TdCache {
    memo: HashMap<u64, usize>,
}

impl TdCache {
    fn td(&mut self, g: &Graph, comp: u64) -> Result<usize> {
        if let Some(&t) = self.memo.get(&comp) {
            return Ok(t);
        }
        let (sub, _) = g.induced_mask(comp);
        let cert = tree_depth_with_limit(&sub, TD_LIMIT);
        if !cert.optimal {
            return Err(Error::SizeLimit {
                what: "tree-depth inside a low tree-depth check",
                n: sub.n(),
                limit: TD_LIMIT,
            });
        }
        self.memo.insert(comp, cert.value);
        Ok(cert.value)
    }
}

fn mask_components(g: &Graph, s: u64) -> Vec<u64> {
    let mut rest = s;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            for x in mask_iter(frontier) {
                next |= g.nbr_mask(x);
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

/// Checks that for every `i <= p`, every component of the subgraph induced
/// by any `i` color classes has tree-depth at most `i`.
pub fn verify_low_td(g: &Graph, c: &Coloring, p: usize) -> Result<LowTdReport> {
    require_small(g, "low tree-depth verification", 64)?;
    c.check_owner(g)?;
    let masks = c.class_masks();
    let mut cache = TdCache::default();
    let mut worst: Option<(i64, ClassComponent)> = None;
    let mut checked = 0;
    for i in 1..=p.min(c.k) {
        for j in combinations(c.k, i) {
            checked += 1;
            let union = j.iter().fold(0u64, |acc, &x| acc | masks[x]);
            for comp in mask_components(g, union) {
                let td = cache.td(g, comp)?;
                let slack = td as i64 - i as i64;
                if worst.as_ref().is_none_or(|(s, _)| slack > *s) {
                    worst = Some((
                        slack,
                        ClassComponent {
                            classes: j.clone(),
                            component: mask_iter(comp).collect(),
                            td,
                        },
                    ));
                }
            }
        }
    }
    let ok = worst.as_ref().is_none_or(|(s, _)| *s <= 0);
    Ok(LowTdReport {
        ok,
        worst: worst.map(|(_, w)| w),
        subsets_checked: checked,
    })
}

/// Outcome of [`find_low_td_coloring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowTdSearch {
    pub coloring: Option<Coloring>,
    /// True when the search was exhaustive, so the color count is minimum
    /// (or, when `coloring` is absent, no coloring within `k_max` exists).
    pub exhaustive: bool,
}

/// Finds a low tree-depth coloring for threshold `p` with at most `k_max`
/// colors. Exhaustive (and minimum) up to [`EXHAUSTIVE_COLORING_LIMIT`]
/// vertices; beyond that a greedy seed is repaired until it verifies.
pub fn find_low_td_coloring(g: &Graph, p: usize, k_max: usize) -> Result<LowTdSearch> {
    require_small(g, "low tree-depth coloring", 64)?;
    if g.n() <= EXHAUSTIVE_COLORING_LIMIT {
        let mut search = ExactLowTd::new(g, p);
        for k in 1..=k_max.min(g.n()) {
            if let Some(colors) = search.run(k)? {
                return Ok(LowTdSearch {
                    coloring: Some(Coloring::new(colors)),
                    exhaustive: true,
                });
            }
        }
        // the empty graph needs no colors at all
        let coloring = (g.n() == 0).then(|| Coloring::new(Vec::new()));
        return Ok(LowTdSearch {
            coloring,
            exhaustive: true,
        });
    }
    let mut best: Option<Coloring> = None;
    for radius in [1, p.max(1)] {
        let c = repair(g, p, greedy_distance_coloring(g, radius))?;
        if best.as_ref().is_none_or(|b| c.k() < b.k()) {
            best = Some(c);
        }
    }
    Ok(LowTdSearch {
        coloring: best.filter(|c| c.k() <= k_max),
        exhaustive: false,
    })
}

/// Restricted-growth search over colorings with at most `k` classes,
/// pruned by checking every class subset through the newest vertex.
struct ExactLowTd<'a> {
    g: &'a Graph,
    p: usize,
    cache: TdCache,
}

impl<'a> ExactLowTd<'a> {
    fn new(g: &'a Graph, p: usize) -> Self {
        ExactLowTd {
            g,
            p,
            cache: TdCache::default(),
        }
    }

    fn run(&mut self, k: usize) -> Result<Option<Vec<usize>>> {
        let n = self.g.n();
        let mut colors = vec![usize::MAX; n];
        let mut masks = vec![0u64; k];
        if self.rec(0, 0, k, &mut colors, &mut masks)? {
            Ok(Some(colors))
        } else {
            Ok(None)
        }
    }

    fn rec(
        &mut self,
        v: usize,
        used: usize,
        k: usize,
        colors: &mut Vec<usize>,
        masks: &mut Vec<u64>,
    ) -> Result<bool> {
        if v == self.g.n() {
            return Ok(true);
        }
        for c in 0..(used + 1).min(k) {
            if self.g.nbr_mask(v) & masks[c] != 0 {
                continue;
            }
            colors[v] = c;
            masks[c] |= 1 << v;
            let used_now = used.max(c + 1);
            if self.consistent(v, c, used_now, masks)?
                && self.rec(v + 1, used_now, k, colors, masks)?
            {
                return Ok(true);
            }
            masks[c] &= !(1 << v);
            colors[v] = usize::MAX;
        }
        Ok(false)
    }

    /// Every class subset containing `c` keeps the component of `v` within
    /// its tree-depth budget. Subgraph monotonicity makes this sound on the
    /// partial coloring.
    fn consistent(&mut self, v: usize, c: usize, used: usize, masks: &[u64]) -> Result<bool> {
        let others: Vec<usize> = (0..used).filter(|&x| x != c).collect();
        for extra in 1..self.p.min(used) {
            for pick in combinations(others.len(), extra) {
                let union = pick.iter().fold(masks[c], |acc, &i| acc | masks[others[i]]);
                let comp = mask_components(self.g, union)
                    .into_iter()
                    .find(|m| m >> v & 1 == 1)
                    .unwrap();
                if comp.count_ones() as usize > extra + 1
                    && self.cache.td(self.g, comp)? > extra + 1
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Greedy coloring along the reversed degeneracy order where vertices at
/// distance at most `radius` receive distinct colors.
fn greedy_distance_coloring(g: &Graph, radius: usize) -> Vec<usize> {
    let n = g.n();
    let mut order = degeneracy(g).order;
    order.reverse();
    let mut colors = vec![usize::MAX; n];
    for &v in &order {
        let dist = g.bfs_distances(v);
        let mut taken: Vec<usize> = (0..n)
            .filter(|&u| dist[u].is_some_and(|d| d > 0 && d <= radius) && colors[u] != usize::MAX)
            .map(|u| colors[u])
            .collect();
        taken.sort_unstable();
        taken.dedup();
        colors[v] = (0..).find(|c| taken.binary_search(c).is_err()).unwrap();
    }
    colors
}

/// Gives a fresh color to the highest-degree vertex of the worst violating
/// component until the coloring verifies.
fn repair(g: &Graph, p: usize, mut colors: Vec<usize>) -> Result<Coloring> {
    loop {
        let c = Coloring::new(colors.clone());
        let report = verify_low_td(g, &c, p)?;
        if report.ok {
            return Ok(c);
        }
        let bad = report.worst.expect("failing report names a component");
        let comp_mask = bad.component.iter().fold(0u64, |m, &v| m | 1 << v);
        let v = *bad
            .component
            .iter()
            .max_by_key(|&&v| {
                (
                    (g.nbr_mask(v) & comp_mask).count_ones(),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        colors[v] = colors.iter().max().unwrap() + 1;
    }
}

/// The product coloring together with its size parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductColoring {
    pub coloring: Coloring,
    /// Number of class subsets `P` used.
    pub subsets: usize,
    /// Largest number of levels of any `c_P`.
    pub max_levels: usize,
}

/// Builds a `p`-centered coloring from a low tree-depth coloring: each
/// vertex gets `(c̄(v), c_P(v) for each p-subset P of classes)`, where `c_P`
/// is the level coloring of a tree-depth witness of `G_P`.
pub fn product_centered(g: &Graph, cbar: &Coloring, p: usize) -> Result<ProductColoring> {
    let report = verify_low_td(g, cbar, p)?;
    if !report.ok {
        return Err(Error::Precondition(format!(
            "coloring is not a low tree-depth coloring for p = {p}: {:?}",
            report.worst
        )));
    }
    let masks = cbar.class_masks();
    let subsets = combinations(cbar.k(), p.min(cbar.k()));
    let mut tuples: Vec<Vec<usize>> = cbar.colors.iter().map(|&c| vec![c]).collect();
    let mut max_levels = 0;
    for pick in &subsets {
        let union = pick.iter().fold(0u64, |acc, &i| acc | masks[i]);
        let (sub, map) = g.induced_mask(union);
        let cert = tree_depth(&sub);
        max_levels = max_levels.max(cert.value);
        let mut level = vec![0usize; g.n()];
        for (i, &v) in map.iter().enumerate() {
            level[v] = cert.forest.depth_of(i);
        }
        for (v, t) in tuples.iter_mut().enumerate() {
            t.push(level[v]);
        }
    }
    let index: BTreeMap<&Vec<usize>, usize> = {
        let mut distinct: Vec<&Vec<usize>> = tuples.iter().collect();
        distinct.sort();
        distinct.dedup();
        distinct
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect()
    };
    let colors = tuples.iter().map(|t| index[t]).collect();
    Ok(ProductColoring {
        coloring: Coloring::new(colors),
        subsets: subsets.len(),
        max_levels,
    })
}
