//! Isomorphism testing and canonical forms for small graphs.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Vertex cap for [`is_isomorphic`].
pub const ISO_LIMIT: usize = 10;

/// True iff an edge-preserving bijection exists. Both graphs must have at
/// most [`ISO_LIMIT`] vertices.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    for x in [g, h] {
        if x.n() > ISO_LIMIT {
            return Err(Error::SizeLimit {
                what: "isomorphism test",
                n: x.n(),
                limit: ISO_LIMIT,
            });
        }
    }
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let n = g.n();
    let dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let mut sg = dg.clone();
    let mut sh = dh.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return Ok(false);
    }
    // high-degree vertices first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(dg[v]));

    fn extend(
        i: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        dg: &[usize],
        dh: &[usize],
        map: &mut Vec<usize>,
        used: &mut u64,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let x = order[i];
        for y in 0..h.n() {
            if *used >> y & 1 == 1 || dh[y] != dg[x] {
                continue;
            }
            let consistent = order[..i]
                .iter()
                .all(|&px| g.has_edge(x, px) == h.has_edge(y, map[px]));
            if !consistent {
                continue;
            }
            map[x] = y;
            *used |= 1 << y;
            if extend(i + 1, order, g, h, dg, dh, map, used) {
                return true;
            }
            *used &= !(1 << y);
        }
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    Ok(extend(0, &order, g, h, &dg, &dh, &mut map, &mut used))
}

/// An isomorphism-invariant encoding: vertex count plus the
/// lexicographically smallest upper-triangle bit string over all
/// refinement-compatible relabelings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: Vec<u64>,
}

/// Iterated degree refinement; returns an invariant color per vertex.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = vec![0; n];
    let mut classes = 1;
    loop {
        let mut sigs: Vec<(usize, Vec<usize>, usize)> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = g.neighbors(v).map(|u| color[u]).collect();
                s.sort_unstable();
                (color[v], s, v)
            })
            .collect();
        sigs.sort();
        let mut next = vec![0usize; n];
        let mut c = 0;
        for i in 0..n {
            if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                c += 1;
            }
            next[sigs[i].2] = c;
        }
        let count = if n == 0 { 0 } else { c + 1 };
        color = next;
        if count == classes {
            return color;
        }
        classes = count;
    }
}

fn encode(g: &Graph, at: &[usize]) -> Vec<u64> {
    // at[position] = vertex
    let n = at.len();
    let mut bits = vec![0u64; (n * n.saturating_sub(1) / 2).div_ceil(64).max(1)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            // most significant first so that Vec ordering is lexicographic
            if g.has_edge(at[i], at[j]) {
                bits[k / 64] |= 1u64 << (63 - k % 64);
            }
            k += 1;
        }
    }
    bits
}

/// Canonical form of `g`. Exponential in the sizes of the refinement cells;
/// intended for graphs of at most a dozen vertices.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let n = g.n();
    let color = refine(g);
    let ncol = color.iter().max().map_or(0, |&c| c + 1);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncol];
    for v in 0..n {
        cells[color[v]].push(v);
    }
    let mut at: Vec<usize> = cells.iter().flatten().copied().collect();
    let mut best: Option<Vec<u64>> = None;

    // permute each cell independently, odometer style
    let bounds: Vec<(usize, usize)> = {
        let mut off = 0;
        cells
            .iter()
            .map(|c| {
                let b = (off, off + c.len());
                off += c.len();
                b
            })
            .collect()
    };
    loop {
        let e = encode(g, &at);
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        // advance: next permutation in the first cell that has one,
        // resetting earlier cells
        let mut advanced = false;
        for &(lo, hi) in &bounds {
            if next_permutation(&mut at[lo..hi]) {
                advanced = true;
                break;
            }
            // wrapped around to sorted order
        }
        if !advanced {
            break;
        }
    }
    CanonicalForm {
        n,
        bits: best.unwrap_or_default(),
    }
}

/// Relabels `g` into its canonical vertex order.
pub(crate) fn canonical_graph(g: &Graph) -> (CanonicalForm, Graph) {
    let form = canonical_form(g);
    let n = form.n;
    let mut out = Graph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if form.bits[k / 64] >> (63 - k % 64) & 1 == 1 {
                out.set_edge(i, j);
            }
            k += 1;
        }
    }
    (form, out)
}

/// Lexicographic next permutation; on the last one, resets to sorted order
/// and returns false.
fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
