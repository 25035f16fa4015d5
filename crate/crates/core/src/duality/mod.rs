//! Local homomorphisms, truncated powers, lifting, and the restricted-duality
//! pipeline.

mod pipeline;

pub use pipeline::{
    build_dual, regular_partition_report, representatives, verify_duality, DualBuild, DualOptions,
    DualProvenance, DualityItem, DualityReport, ForbiddenCheck, PartitionEntry,
    RegularPartitionReport,
};

use std::ops::ControlFlow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{
    check_homomorphism, combinations, find_homomorphism_with, for_each_homomorphism, HomOutcome,
    SearchLimits, VertexMap,
};

/// Default cap on the order of a constructed power.
pub const DEFAULT_POWER_CAP: usize = 100_000;

/// Powers up to this order are also checked for local homomorphy by search.
const SEARCH_CHECK_LIMIT: usize = 64;

/// Result of a `(φ, p)`-local homomorphism check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalHomCheck {
    pub ok: bool,
    /// First color set `I` whose preimage does not map to `U`.
    pub failing: Option<Vec<usize>>,
    /// Color sets whose search ran out of budget.
    pub undecided: Vec<Vec<usize>>,
    /// `(I, g_I)` per checked set, with `g_I` defined on `φ^{-1}(I)` and
    /// `usize::MAX` elsewhere.
    #[serde(skip)]
    pub witnesses: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Maximal color sets of `range` of size at most `p`.
fn maximal_sets(range: &[usize], p: usize) -> Vec<Vec<usize>> {
    if range.len() <= p {
        return vec![range.to_vec()];
    }
    combinations(range.len(), p)
        .into_iter()
        .map(|c| c.into_iter().map(|i| range[i]).collect())
        .collect()
}

/// Is `G` `(φ, p)`-locally homomorphic to `U`? Every set `A` with
/// `|φ(A)| <= p` lies inside `φ^{-1}(I)` for a `p`-subset `I` of the range,
/// so only those preimages are searched.
pub fn local_hom_check(
    g: &Graph,
    phi: &VertexMap,
    p: usize,
    u: &Graph,
    limits: SearchLimits,
) -> Result<LocalHomCheck> {
    if phi.image.len() != g.n() {
        return Err(Error::Precondition("map is not total on G".into()));
    }
    let mut out = LocalHomCheck {
        ok: true,
        failing: None,
        undecided: Vec::new(),
        witnesses: Vec::new(),
    };
    for set in maximal_sets(&phi.range(), p) {
        let pre: Vec<usize> = (0..g.n())
            .filter(|&x| set.contains(&phi.image[x]))
            .collect();
        match find_homomorphism_with(&g.induced_by(&pre), u, limits) {
            HomOutcome::Found(f) => {
                let mut full = vec![usize::MAX; g.n()];
                for (i, &x) in pre.iter().enumerate() {
                    full[x] = f.image[i];
                }
                out.witnesses.push((set, full));
            }
            HomOutcome::NotFound => {
                out.ok = false;
                out.failing = Some(set);
                return Ok(out);
            }
            HomOutcome::Budget => {
                out.ok = false;
                out.undecided.push(set);
            }
        }
    }
    Ok(out)
}

/// Mixed-radix codec for the vertices `(v, z)` of a truncated power: `v` is
/// the most significant digit, followed by `z_{(I, v)}` for the `p`-subsets
/// `I ∋ v` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCodec {
    pub template_order: usize,
    pub base_order: usize,
    pub p: usize,
    /// All `p`-subsets of `V(H)` in lexicographic order.
    pub subsets: Vec<Vec<usize>>,
    /// For each `v`, the ids of subsets containing it.
    subsets_at: Vec<Vec<usize>>,
    /// `digit_of[v][s]`: position of subset `s` among those containing `v`.
    digit_of: Vec<Vec<Option<usize>>>,
    block: usize,
}

impl PowerCodec {
    fn new(h: usize, u: usize, p: usize, block: usize) -> Self {
        let subsets = combinations(h, p);
        let mut subsets_at = vec![Vec::new(); h];
        let mut digit_of = vec![vec![None; subsets.len()]; h];
        for (s, set) in subsets.iter().enumerate() {
            for &v in set {
                digit_of[v][s] = Some(subsets_at[v].len());
                subsets_at[v].push(s);
            }
        }
        PowerCodec {
            template_order: h,
            base_order: u,
            p,
            subsets,
            subsets_at,
            digit_of,
            block,
        }
    }

    /// Number of assignment digits, `C(|V(H)| - 1, p - 1)`.
    pub fn digits(&self) -> usize {
        self.subsets_at.first().map_or(0, Vec::len)
    }

    pub fn encode(&self, v: usize, assignment: &[usize]) -> usize {
        debug_assert_eq!(assignment.len(), self.digits());
        let mut z = 0;
        for &a in assignment {
            z = z * self.base_order + a;
        }
        v * self.block + z
    }

    pub fn decode(&self, z: usize) -> (usize, Vec<usize>) {
        let v = z / self.block;
        let mut rest = z % self.block;
        let mut digits = vec![0; self.digits()];
        for d in digits.iter_mut().rev() {
            *d = rest % self.base_order;
            rest /= self.base_order;
        }
        (v, digits)
    }

    /// The coordinate `z_{(I, α(z))}` for `I = subsets[s]`, if `α(z) ∈ I`.
    pub fn coordinate(&self, z: usize, s: usize) -> Option<usize> {
        let v = z / self.block;
        let pos = self.digit_of[v][s]?;
        let shift = self.digits() - 1 - pos;
        Some(z % self.block / self.base_order.pow(shift as u32) % self.base_order)
    }

    /// Ids of the `p`-subsets containing `v`, in digit order.
    pub fn subsets_at(&self, v: usize) -> &[usize] {
        &self.subsets_at[v]
    }
}

/// `U^{⇑_p^H}` with its color projection `α` and vertex codec.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPower {
    pub base: Graph,
    pub template: Graph,
    pub p: usize,
    pub graph: Graph,
    pub alpha: VertexMap,
    pub codec: PowerCodec,
}

/// `|V(H)| · |V(U)|^C(|V(H)| - 1, p - 1)`, or `None` on overflow.
pub fn power_order(u: usize, h: usize, p: usize) -> Option<u128> {
    if h == 0 {
        return Some(0);
    }
    let digits = binomial(h - 1, p - 1)?;
    let mut order = h as u128;
    for _ in 0..digits {
        order = order.checked_mul(u as u128)?;
    }
    Some(order)
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn truncated_power(u: &Graph, h: &Graph, p: usize) -> Result<TruncatedPower> {
    truncated_power_with_cap(u, h, p, DEFAULT_POWER_CAP)
}

/// Builds `U^{⇑_p^H}`: vertices are `(v, z)` with `z` assigning a vertex of
/// `U` to each `p`-subset through `v`; `(v, z) ~ (v', z')` iff `{v, v'}` is
/// an edge of `H` and `{z_I, z'_I}` is an edge of `U` for every `I`
/// containing both.
pub fn truncated_power_with_cap(
    u: &Graph,
    h: &Graph,
    p: usize,
    cap: usize,
) -> Result<TruncatedPower> {
    if p == 0 || p > h.n() {
        return Err(Error::Precondition(format!(
            "truncation must satisfy 1 <= p <= |V(H)| = {}, got {p}",
            h.n()
        )));
    }
    if u.n() == 0 {
        return Err(Error::Precondition("base graph U must be nonempty".into()));
    }
    let order = power_order(u.n(), h.n(), p).unwrap_or(u128::MAX);
    if order > cap as u128 {
        return Err(Error::PowerTooLarge { order, cap });
    }
    let order = order as usize;
    let block = order / h.n();
    let codec = PowerCodec::new(h.n(), u.n(), p, block);
    let digits = codec.digits();
    let mut d = Graph::empty(order);
    let all_u: Vec<usize> = (0..u.n()).collect();
    let u_nbrs: Vec<Vec<usize>> = (0..u.n()).map(|x| u.neighbors(x).collect()).collect();

    let mut choices: Vec<&[usize]> = Vec::with_capacity(digits);
    let mut idx = vec![0usize; digits];
    for z in 0..order {
        let (v, a) = codec.decode(z);
        for w in h.neighbors(v).filter(|&w| w > v) {
            choices.clear();
            for &s in codec.subsets_at(w) {
                match codec.digit_of[v][s] {
                    Some(pos) => choices.push(&u_nbrs[a[pos]]),
                    None => choices.push(&all_u),
                }
            }
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            // odometer over the candidate product
            idx.iter_mut().for_each(|i| *i = 0);
            'odometer: loop {
                let mut zz = 0;
                for (c, &i) in choices.iter().zip(&idx) {
                    zz = zz * u.n() + c[i];
                }
                d.set_edge(z, w * block + zz);
                let mut k = digits;
                loop {
                    if k == 0 {
                        break 'odometer;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        continue 'odometer;
                    }
                    idx[k] = 0;
                }
            }
        }
    }
    let mut alpha = VertexMap::new(h.n(), (0..order).map(|z| z / block).collect())?;
    alpha.checked = check_homomorphism(&d, h, &alpha);
    debug_assert!(alpha.checked);
    Ok(TruncatedPower {
        base: u.clone(),
        template: h.clone(),
        p,
        graph: d,
        alpha,
        codec,
    })
}

impl TruncatedPower {
    pub fn order(&self) -> usize {
        self.graph.n()
    }

    /// The map `z ↦ z_{(I, α(z))}` on `α^{-1}(I)` is a homomorphism to `U`
    /// for every `p`-subset `I`.
    pub fn constructive_witness_holds(&self) -> bool {
        let codec = &self.codec;
        self.graph.edges().into_iter().all(|(a, b)| {
            let (va, vb) = (self.alpha.image[a], self.alpha.image[b]);
            codec.subsets_at(va).iter().all(|&s| {
                codec.digit_of[vb][s].is_none() || {
                    let x = codec.coordinate(a, s).unwrap();
                    let y = codec.coordinate(b, s).unwrap();
                    self.base.has_edge(x, y)
                }
            })
        })
    }
}

/// The power is `(α, p)`-locally homomorphic to `U`: the constructive
/// witness is validated directly, and small powers are re-checked by search.
pub fn power_local_property(tp: &TruncatedPower) -> bool {
    if !tp.constructive_witness_holds() {
        return false;
    }
    if tp.order() > SEARCH_CHECK_LIMIT {
        return true;
    }
    local_hom_check(
        &tp.graph,
        &tp.alpha,
        tp.p,
        &tp.base,
        SearchLimits::unbounded(),
    )
    .map(|c| c.ok)
    .unwrap_or(false)
}

/// Lifts `γ: G -> H` to `f: G -> U^{⇑_p^H}` with `α ∘ f = γ`, using a map
/// `g_I: G[γ^{-1}(I)] -> U` for every `p`-subset `I` met by `γ`.
pub fn lift_homomorphism(
    g: &Graph,
    gamma: &VertexMap,
    tp: &TruncatedPower,
    limits: SearchLimits,
) -> Result<VertexMap> {
    if !check_homomorphism(g, &tp.template, gamma) {
        return Err(Error::Precondition(
            "gamma is not a homomorphism G -> H".into(),
        ));
    }
    let codec = &tp.codec;
    let mut coord: Vec<Vec<usize>> = vec![Vec::new(); codec.subsets.len()];
    for (s, set) in codec.subsets.iter().enumerate() {
        let pre: Vec<usize> = (0..g.n())
            .filter(|&x| set.contains(&gamma.image[x]))
            .collect();
        if pre.is_empty() {
            continue;
        }
        match find_homomorphism_with(&g.induced_by(&pre), &tp.base, limits) {
            HomOutcome::Found(f) => {
                let mut full = vec![usize::MAX; g.n()];
                for (i, &x) in pre.iter().enumerate() {
                    full[x] = f.image[i];
                }
                coord[s] = full;
            }
            _ => return Err(Error::MissingWitness(format!("{set:?}"))),
        }
    }
    let image = (0..g.n())
        .map(|x| {
            let v = gamma.image[x];
            let a: Vec<usize> = codec.subsets_at(v).iter().map(|&s| coord[s][x]).collect();
            codec.encode(v, &a)
        })
        .collect();
    let mut f = VertexMap::new(tp.order(), image)?;
    f.checked = check_homomorphism(g, &tp.graph, &f);
    if !f.checked {
        return Err(Error::InvalidCertificate(
            "lifted map is not a homomorphism".into(),
        ));
    }
    Ok(f)
}

/// Both sides of the equivalence `G -> U^{⇑_p^H}` iff some `γ: G -> H`
/// makes `G` `(γ, p)`-locally homomorphic to `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocboundEquivalence {
    pub lhs: bool,
    pub rhs: bool,
}

pub fn locbound_equivalence(
    g: &Graph,
    u: &Graph,
    h: &Graph,
    p: usize,
    limits: SearchLimits,
) -> Result<LocboundEquivalence> {
    let tp = truncated_power(u, h, p)?;
    let lhs = find_homomorphism_with(g, &tp.graph, limits)
        .decided()
        .ok_or(Error::Budget(limits.node_limit.unwrap_or(0)))?;
    let mut rhs = false;
    let mut failure = None;
    for_each_homomorphism(g, h, limits, |img| {
        let gamma = VertexMap::new(h.n(), img.to_vec()).expect("search stays in range");
        match local_hom_check(g, &gamma, p, u, limits) {
            Ok(c) if c.ok => {
                rhs = true;
                ControlFlow::Break(())
            }
            Ok(c) if !c.undecided.is_empty() => {
                failure = Some(Error::Budget(limits.node_limit.unwrap_or(0)));
                ControlFlow::Break(())
            }
            Ok(_) => ControlFlow::Continue(()),
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LocboundEquivalence { lhs, rhs })
}
