//! Balls, ball families and quotients.

use std::ops::ControlFlow;

use super::{mask_iter, Graph, VertexSet};
use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive ball-family enumeration.
pub const DEFAULT_BALL_LIMIT: usize = 12;

/// Pairwise disjoint balls of radius at most `radius`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallFamily {
    pub balls: Vec<VertexSet>,
    pub radius: usize,
}

impl BallFamily {
    pub fn new(balls: Vec<VertexSet>, radius: usize) -> Self {
        BallFamily { balls, radius }
    }

    /// All singletons of `s`, a family of radius 0.
    pub fn singletons(s: &VertexSet) -> Self {
        let n = s.universe();
        let balls = s
            .iter()
            .map(|v| VertexSet::from_vertices(n, [v]).unwrap())
            .collect();
        BallFamily { balls, radius: 0 }
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

/// Radius of `G[S]` and the smallest vertex attaining it.
pub fn radius_center(g: &Graph, s: &VertexSet) -> Result<(usize, usize)> {
    if s.universe() != g.n() {
        return Err(Error::ForeignVertexSet(g.n()));
    }
    let mut best: Option<(usize, usize)> = None;
    for c in s.iter() {
        let ecc = eccentricity_within(g, s, c).ok_or(Error::NotABall)?;
        if best.is_none_or(|(r, _)| ecc < r) {
            best = Some((ecc, c));
        }
    }
    best.ok_or(Error::NotABall)
}

/// Eccentricity of `c` inside `G[S]`, or `None` if `G[S]` is disconnected.
fn eccentricity_within(g: &Graph, s: &VertexSet, c: usize) -> Option<usize> {
    let target = s.len();
    let mut seen = VertexSet::empty(g.n());
    seen.insert(c);
    let mut frontier = vec![c];
    let mut reached = 1;
    let mut depth = 0;
    while reached < target {
        let mut next = Vec::new();
        for &x in &frontier {
            for y in g.neighbors(x) {
                if s.contains(y) && !seen.contains(y) {
                    seen.insert(y);
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        reached += next.len();
        depth += 1;
        frontier = next;
    }
    Some(depth)
}

/// Radius and center of the ball given by a mask (`n <= 64`).
pub(crate) fn mask_radius_center(g: &Graph, s: u64) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for c in mask_iter(s) {
        let mut seen = 1u64 << c;
        let mut frontier = seen;
        let mut depth = 0;
        while seen != s {
            let mut next = 0;
            for x in mask_iter(frontier) {
                next |= g.nbr_mask(x);
            }
            next &= s & !seen;
            if next == 0 {
                return None;
            }
            seen |= next;
            frontier = next;
            depth += 1;
            if best.is_some_and(|(r, _)| depth >= r) {
                break;
            }
        }
        if best.is_none_or(|(r, _)| depth < r) {
            best = Some((depth, c));
        }
    }
    best
}

/// Checks disjointness, connectivity and the radius bound of every ball.
pub fn validate_ball_family(g: &Graph, family: &BallFamily) -> Result<()> {
    let mut covered = VertexSet::empty(g.n());
    for (i, b) in family.balls.iter().enumerate() {
        if b.universe() != g.n() {
            return Err(Error::ForeignVertexSet(g.n()));
        }
        if !b.is_disjoint(&covered) {
            return Err(Error::InvalidBallFamily(format!(
                "ball {i} overlaps an earlier ball"
            )));
        }
        let (r, _) = radius_center(g, b)
            .map_err(|_| Error::InvalidBallFamily(format!("ball {i} is not connected")))?;
        if r > family.radius {
            return Err(Error::InvalidBallFamily(format!(
                "ball {i} has radius {r} > {}",
                family.radius
            )));
        }
        covered.union_with(b);
    }
    Ok(())
}

/// The quotient `G / P`: one vertex per ball, adjacent when some edge of `G`
/// crosses between the two balls. Uncovered vertices are dropped.
pub fn quotient(g: &Graph, family: &BallFamily) -> Result<Graph> {
    validate_ball_family(g, family)?;
    let k = family.balls.len();
    let mut q = Graph::empty(k);
    let reach: Vec<VertexSet> = family
        .balls
        .iter()
        .map(|b| {
            let mut r = VertexSet::empty(g.n());
            for v in b.iter() {
                r.union_with(&g.neighbor_set(v));
            }
            r
        })
        .collect();
    for i in 0..k {
        for j in i + 1..k {
            if !reach[i].is_disjoint(&family.balls[j]) {
                q.set_edge(i, j);
            }
        }
    }
    Ok(q)
}

/// Calls `f` on each connected vertex subset of `G` inside `allowed`,
/// exactly once. Requires `n <= 64`.
pub(crate) fn for_each_connected_subset(
    g: &Graph,
    allowed: u64,
    f: &mut impl FnMut(u64) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn grow(
        g: &Graph,
        allowed: u64,
        set: u64,
        mut cand: u64,
        mut forbid: u64,
        f: &mut impl FnMut(u64) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        f(set)?;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            let bit = 1u64 << w;
            cand &= !bit;
            let grown = set | bit;
            let next = (cand | (g.nbr_mask(w) & allowed)) & !grown & !forbid;
            grow(g, allowed, grown, next, forbid, f)?;
            forbid |= bit;
        }
        ControlFlow::Continue(())
    }
    for v in mask_iter(allowed) {
        let below = (1u64 << v) - 1;
        let bit = 1u64 << v;
        let forbid = below | bit;
        grow(
            g,
            allowed,
            bit,
            g.nbr_mask(v) & allowed & !forbid,
            forbid,
            f,
        )?;
    }
    ControlFlow::Continue(())
}

/// Every ball (connected subset of radius at most `r`) together with its
/// closed neighborhood mask.
pub(crate) fn valid_balls(g: &Graph, r: usize) -> Vec<u64> {
    let full = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let mut out = Vec::new();
    let _ = for_each_connected_subset(g, full, &mut |s| {
        if s.count_ones() as usize <= r + 1 || r >= g.n() {
            out.push(s);
        } else if mask_radius_center(g, s).is_some_and(|(rad, _)| rad <= r) {
            out.push(s);
        }
        ControlFlow::Continue(())
    });
    out.sort_unstable();
    out
}

/// Enumerates every family of pairwise disjoint balls of radius at most `r`
/// exactly once (balls ordered by their smallest vertex). The empty family
/// is included.
pub fn for_each_ball_family(
    g: &Graph,
    r: usize,
    limit: usize,
    mut f: impl FnMut(&[u64]) -> ControlFlow<()>,
) -> Result<()> {
    if g.n() > limit || g.n() > 64 {
        return Err(Error::SizeLimit {
            what: "ball-family enumeration",
            n: g.n(),
            limit: limit.min(64),
        });
    }
    let balls = valid_balls(g, r);
    // balls grouped by their minimum vertex
    let mut by_min: Vec<Vec<u64>> = vec![Vec::new(); g.n()];
    for b in balls {
        by_min[b.trailing_zeros() as usize].push(b);
    }

    fn rec(
        v: usize,
        n: usize,
        used: u64,
        by_min: &[Vec<u64>],
        stack: &mut Vec<u64>,
        f: &mut impl FnMut(&[u64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut v = v;
        while v < n && used >> v & 1 == 1 {
            v += 1;
        }
        if v >= n {
            return f(stack);
        }
        // v left uncovered
        rec(v + 1, n, used, by_min, stack, f)?;
        for &b in &by_min[v] {
            if b & used == 0 {
                stack.push(b);
                rec(v + 1, n, used | b, by_min, stack, f)?;
                stack.pop();
            }
        }
        ControlFlow::Continue(())
    }

    let mut stack = Vec::new();
    let _ = rec(0, g.n(), 0, &by_min, &mut stack, &mut f);
    Ok(())
}

/// Collects all ball families of radius at most `r` (default size cap).
pub fn ball_families(g: &Graph, r: usize) -> Result<Vec<BallFamily>> {
    let mut out = Vec::new();
    for_each_ball_family(g, r, DEFAULT_BALL_LIMIT, |balls| {
        out.push(BallFamily::new(
            balls
                .iter()
                .map(|&b| VertexSet::from_mask(g.n(), b))
                .collect(),
            r,
        ));
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete, cycle, path};
    use crate::hom::is_isomorphic;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied()).unwrap()
    }

    #[test]
    fn radius_examples() {
        let k1 = complete(1);
        assert_eq!(radius_center(&k1, &set(1, &[0])).unwrap(), (0, 0));
        let p3 = path(3);
        assert_eq!(radius_center(&p3, &p3.vertex_set()).unwrap(), (1, 1));
        let c5 = cycle(5);
        assert_eq!(radius_center(&c5, &c5.vertex_set()).unwrap(), (2, 0));
        assert_eq!(radius_center(&c5, &set(5, &[0, 2])), Err(Error::NotABall));
        assert_eq!(
            radius_center(&c5, &VertexSet::empty(5)),
            Err(Error::NotABall)
        );
    }

    #[test]
    fn mask_radius_agrees() {
        let c5 = cycle(5);
        assert_eq!(mask_radius_center(&c5, 0b11111), Some((2, 0)));
        assert_eq!(mask_radius_center(&c5, 0b00101), None);
        assert_eq!(mask_radius_center(&path(3), 0b111), Some((1, 1)));
    }

    #[test]
    fn quotient_examples() {
        let p3 = path(3);
        let fam = BallFamily::new(vec![set(3, &[0, 1]), set(3, &[2])], 1);
        assert_eq!(quotient(&p3, &fam).unwrap(), complete(2));

        let c5 = cycle(5);
        let q = quotient(&c5, &BallFamily::singletons(&c5.vertex_set())).unwrap();
        assert_eq!(q, c5);

        let c6 = cycle(6);
        let fam = BallFamily::new(vec![set(6, &[0, 1]), set(6, &[2, 3]), set(6, &[4, 5])], 1);
        assert_eq!(quotient(&c6, &fam).unwrap(), complete(3));
    }

    #[test]
    fn quotient_rejects_bad_families() {
        let c6 = cycle(6);
        let overlap = BallFamily::new(vec![set(6, &[0, 1]), set(6, &[1, 2])], 1);
        assert!(matches!(
            quotient(&c6, &overlap),
            Err(Error::InvalidBallFamily(_))
        ));
        let split = BallFamily::new(vec![set(6, &[0, 3])], 3);
        assert!(matches!(
            quotient(&c6, &split),
            Err(Error::InvalidBallFamily(_))
        ));
        let wide = BallFamily::new(vec![set(6, &[0, 1, 2])], 0);
        assert!(matches!(
            quotient(&c6, &wide),
            Err(Error::InvalidBallFamily(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(ball_families(&complete(2), 0).unwrap().len(), 4);
        assert_eq!(ball_families(&complete(1), 5).unwrap().len(), 2);
        let fams = ball_families(&path(3), 1).unwrap();
        assert!(fams.iter().any(|f| f.len() == 1 && f.balls[0].len() == 3));
        for f in &fams {
            validate_ball_family(&path(3), f).unwrap();
        }
    }

    #[test]
    fn enumeration_size_limit() {
        let err = ball_families(&path(13), 1).unwrap_err();
        assert!(matches!(
            err,
            Error::SizeLimit {
                n: 13,
                limit: 12,
                ..
            }
        ));
    }

    #[test]
    fn enumeration_matches_brute_force_count() {
        // brute force: assign every vertex a ball label or "uncovered",
        // count distinct families of valid balls
        let g = cycle(5);
        for r in 0..3 {
            let fams = ball_families(&g, r).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            let n = g.n();
            let mut labels = vec![0usize; n];
            loop {
                let mut parts: std::collections::BTreeMap<usize, u64> = Default::default();
                for (v, &l) in labels.iter().enumerate() {
                    if l > 0 {
                        *parts.entry(l).or_default() |= 1 << v;
                    }
                }
                let mut ok = true;
                let mut fam: Vec<u64> = parts.values().copied().collect();
                for &b in &fam {
                    match mask_radius_center(&g, b) {
                        Some((rad, _)) if rad <= r => {}
                        _ => ok = false,
                    }
                }
                if ok {
                    fam.sort();
                    seen.insert(fam);
                }
                let mut i = 0;
                while i < n {
                    labels[i] += 1;
                    if labels[i] <= n {
                        break;
                    }
                    labels[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
            assert_eq!(fams.len(), seen.len(), "radius {r}");
        }
    }

    #[test]
    fn connected_subsets_of_path_are_intervals() {
        let p = path(6);
        let mut count = 0;
        let _ = for_each_connected_subset(&p, 0b111111, &mut |s| {
            let lo = s.trailing_zeros();
            let run = (s >> lo).trailing_ones();
            assert_eq!(run, s.count_ones());
            count += 1;
            ControlFlow::Continue(())
        });
        assert_eq!(count, 21);
    }

    #[test]
    fn singleton_quotient_is_induced_subgraph() {
        let g = cycle(7);
        for mask in 0u64..(1 << 7) {
            let s = VertexSet::from_mask(7, mask);
            let q = quotient(&g, &BallFamily::singletons(&s)).unwrap();
            let (h, _) = g.induced_subgraph(&s).unwrap();
            assert!(is_isomorphic(&q, &h).unwrap());
        }
    }
}
