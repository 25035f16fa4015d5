use rayon::prelude::*;
use serde::Serialize;

use super::{lift_homomorphism, power_local_property, truncated_power_with_cap, TruncatedPower};
use crate::catalog::{complete, generate_all_graphs, GraphFilter};
use crate::colorings::{find_low_td_coloring, verify_low_td, Coloring};
use crate::error::{Error, Result};
use crate::graph::{disjoint_union, Graph};
use crate::hom::{
    canonical_form, combinations, core, core_with_limit, find_homomorphism_with, forb_member,
    hom_equivalent, ForbOutcome, SearchLimits, VertexMap, CORE_LIMIT,
};
use crate::sparsity::tree_depth;

/// Cores of all graphs on `1..=n_max` vertices with tree-depth at most `p`,
/// one per isomorphism class, ordered by order, size and canonical form.
pub fn representatives(p: usize, n_max: usize) -> Result<Vec<Graph>> {
    let filter = GraphFilter {
        min_n: Some(1),
        ..GraphFilter::default()
    };
    let graphs = generate_all_graphs(n_max, &filter)?;
    let cores: Vec<Graph> = graphs
        .par_iter()
        .filter(|g| tree_depth(g).value <= p)
        .map(|g| core(g).map(|c| c.graph))
        .collect::<Result<_>>()?;
    let mut keyed: Vec<_> = cores
        .into_iter()
        .map(|c| ((c.n(), c.edge_count(), canonical_form(&c)), c))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    Ok(keyed.into_iter().map(|(_, c)| c).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DualOptions {
    /// Truncation; defaults to the largest order in the forbidden family.
    pub p_override: Option<usize>,
    /// Order bound for the representative graphs.
    pub n_rep: usize,
    /// Color budget for the low tree-depth colorings.
    pub k_max: usize,
    pub cap: usize,
    pub limits: SearchLimits,
}

impl Default for DualOptions {
    fn default() -> Self {
        DualOptions {
            p_override: None,
            n_rep: 6,
            k_max: 12,
            cap: super::DEFAULT_POWER_CAP,
            limits: SearchLimits::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualProvenance {
    pub p: usize,
    pub p_overridden: bool,
    /// Largest color count needed by a corpus graph.
    pub n_colors: usize,
    pub template_order: usize,
    pub representatives: usize,
    pub forb_representatives: usize,
    pub u_order: usize,
    pub u_edges: usize,
    pub u_is_core: bool,
    pub d_order: usize,
    pub d_edges: usize,
    /// Every corpus coloring came from an exhaustive search.
    pub colorings_exhaustive: bool,
}

/// Non-existence of `F -> D`, checked twice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ForbiddenCheck {
    pub index: usize,
    pub order: usize,
    /// `|V(F)| <= p`, `D` is `(α, p)`-locally homomorphic to `U`, and
    /// `U ∈ Forb(F)`.
    pub by_construction: Option<bool>,
    /// `Some(false)` when search proves `F ↛ D`.
    pub maps_to_d: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBuild {
    pub provenance: DualProvenance,
    pub power: TruncatedPower,
    pub base_components: Vec<Graph>,
    pub colorings: Vec<Coloring>,
    /// Lifts `G -> D` of each coloring, for corpus members of `Forb(F)`.
    pub lifts: Vec<Option<VertexMap>>,
    pub forbidden_checks: Vec<ForbiddenCheck>,
}

fn check_family(forbidden: &[Graph]) -> Result<()> {
    if forbidden.is_empty() {
        return Err(Error::Precondition("forbidden family is empty".into()));
    }
    if let Some(i) = forbidden.iter().position(|f| !f.is_connected()) {
        return Err(Error::Precondition(format!(
            "forbidden graph {i} is disconnected; restricted dualities need connected F"
        )));
    }
    Ok(())
}

/// Keeps the representatives no other kept one absorbs, so that their
/// disjoint union stays small, then takes the core when it is computable.
fn base_graph(reps: &[Graph], limits: SearchLimits) -> Result<(Graph, Vec<Graph>, bool)> {
    let mut kept: Vec<Graph> = Vec::new();
    // larger cores first: a smaller one mapping into them is redundant
    for r in reps.iter().rev() {
        let mut absorbed = true;
        for comp in r.connected_components() {
            let part = r.induced_by(&comp.to_vec());
            let mut hit = false;
            for k in &kept {
                match find_homomorphism_with(&part, k, limits).decided() {
                    Some(true) => {
                        hit = true;
                        break;
                    }
                    Some(false) => {}
                    None => return Err(Error::Budget(limits.node_limit.unwrap_or(0))),
                }
            }
            if !hit {
                absorbed = false;
                break;
            }
        }
        if !absorbed {
            kept.push(r.clone());
        }
    }
    kept.reverse();
    let (union, _) = disjoint_union(&kept);
    if union.n() <= CORE_LIMIT {
        let c = core_with_limit(&union, CORE_LIMIT)?;
        Ok((c.graph, kept, true))
    } else {
        Ok((union, kept, false))
    }
}

/// Builds a dual `D = U^{⇑_p^{K_N}}` for `Forb(F)` restricted to the corpus:
/// `N` colors suffice for low tree-depth colorings of every corpus graph at
/// threshold `p`, and `U` collects the representatives in `Forb(F)`.
pub fn build_dual(corpus: &[Graph], forbidden: &[Graph], opts: &DualOptions) -> Result<DualBuild> {
    check_family(forbidden)?;
    let max_f = forbidden.iter().map(Graph::n).max().unwrap_or(0);
    let p = opts.p_override.unwrap_or(max_f).max(1);

    let searches: Vec<_> = corpus
        .par_iter()
        .map(|g| find_low_td_coloring(g, p, opts.k_max))
        .collect::<Result<_>>()?;
    let mut colorings = Vec::with_capacity(corpus.len());
    let mut exhaustive = true;
    for (i, s) in searches.into_iter().enumerate() {
        exhaustive &= s.exhaustive;
        match s.coloring {
            Some(c) => colorings.push(c),
            None => {
                return Err(Error::Precondition(format!(
                    "no low tree-depth coloring of corpus graph {i} with at most {} colors",
                    opts.k_max
                )))
            }
        }
    }
    let n_colors = colorings.iter().map(Coloring::k).max().unwrap_or(0).max(1);

    let reps = representatives(p, opts.n_rep)?;
    let mut forb_reps = Vec::new();
    for r in &reps {
        match forb_member(r, forbidden, opts.limits) {
            ForbOutcome::Member => forb_reps.push(r.clone()),
            ForbOutcome::NotMember { .. } => {}
            ForbOutcome::Unknown => return Err(Error::Budget(opts.limits.node_limit.unwrap_or(0))),
        }
    }
    if forb_reps.is_empty() {
        return Err(Error::Precondition(
            "no representative lies in Forb(F); the dual would be empty".into(),
        ));
    }
    let (u, base_components, u_is_core) = base_graph(&forb_reps, opts.limits)?;

    let template = complete(n_colors.max(p));
    let power = truncated_power_with_cap(&u, &template, p, opts.cap)?;
    let local = power_local_property(&power);
    let u_in_forb = forb_member(&u, forbidden, opts.limits) == ForbOutcome::Member;

    let forbidden_checks = forbidden
        .par_iter()
        .enumerate()
        .map(|(index, f)| ForbiddenCheck {
            index,
            order: f.n(),
            by_construction: Some(f.n() <= p && local && u_in_forb),
            maps_to_d: find_homomorphism_with(f, &power.graph, opts.limits).decided(),
        })
        .collect();

    let lifts = corpus
        .par_iter()
        .zip(&colorings)
        .map(|(g, c)| {
            if forb_member(g, forbidden, opts.limits) != ForbOutcome::Member {
                return None;
            }
            let gamma = VertexMap::new(template.n(), c.colors().to_vec()).ok()?;
            lift_homomorphism(g, &gamma, &power, opts.limits).ok()
        })
        .collect();

    let provenance = DualProvenance {
        p,
        p_overridden: opts.p_override.is_some(),
        n_colors,
        template_order: template.n(),
        representatives: reps.len(),
        forb_representatives: forb_reps.len(),
        u_order: u.n(),
        u_edges: u.edge_count(),
        u_is_core,
        d_order: power.order(),
        d_edges: power.graph.edge_count(),
        colorings_exhaustive: exhaustive,
    };
    Ok(DualBuild {
        provenance,
        power,
        base_components,
        colorings,
        lifts,
        forbidden_checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityItem {
    pub index: usize,
    pub forb: ForbOutcome,
    pub maps_to_d: Option<bool>,
    pub witness: Option<Vec<usize>>,
    /// `G ∈ Forb(F)` iff `G -> D`; `None` when either side is undecided.
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub forbidden: Vec<ForbiddenCheck>,
    pub items: Vec<DualityItem>,
    pub members: usize,
    pub pass: bool,
}

/// Checks `F ↛ D` for every `F`, and `G ∈ Forb(F) ⟺ G -> D` for every
/// corpus graph.
pub fn verify_duality(
    corpus: &[Graph],
    forbidden: &[Graph],
    d: &Graph,
    limits: SearchLimits,
) -> Result<DualityReport> {
    check_family(forbidden)?;
    let fchecks: Vec<ForbiddenCheck> = forbidden
        .par_iter()
        .enumerate()
        .map(|(index, f)| ForbiddenCheck {
            index,
            order: f.n(),
            by_construction: None,
            maps_to_d: find_homomorphism_with(f, d, limits).decided(),
        })
        .collect();
    let items: Vec<DualityItem> = corpus
        .par_iter()
        .enumerate()
        .map(|(index, g)| {
            let forb = forb_member(g, forbidden, limits);
            let outcome = find_homomorphism_with(g, d, limits);
            let maps_to_d = outcome.decided();
            let agrees = match (forb.decided(), maps_to_d) {
                (Some(a), Some(b)) => Some(a == b),
                _ => None,
            };
            DualityItem {
                index,
                forb,
                maps_to_d,
                witness: outcome.map().map(|f| f.image),
                agrees,
            }
        })
        .collect();
    let pass = fchecks.iter().all(|c| c.maps_to_d == Some(false))
        && items.iter().all(|i| i.agrees == Some(true));
    Ok(DualityReport {
        forbidden: fchecks,
        members: items
            .iter()
            .filter(|i| i.forb == ForbOutcome::Member)
            .count(),
        items,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionEntry {
    pub classes: Vec<usize>,
    pub component: Vec<usize>,
    /// Index into the representative list.
    pub representative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularPartitionReport {
    pub p: usize,
    pub entries: Vec<PartitionEntry>,
}

/// For every set `J` of at most `p` color classes and every component of
/// `G_J`, the first representative hom-equivalent to it.
pub fn regular_partition_report(
    g: &Graph,
    c: &Coloring,
    p: usize,
    reps: &[Graph],
    limits: SearchLimits,
) -> Result<RegularPartitionReport> {
    let check = verify_low_td(g, c, p)?;
    if !check.ok {
        return Err(Error::Precondition(format!(
            "not a low tree-depth coloring for p = {p}: {:?}",
            check.worst
        )));
    }
    let masks = c.class_masks();
    let mut entries = Vec::new();
    for i in 1..=p.min(c.k()) {
        for j in combinations(c.k(), i) {
            let union = j.iter().fold(0u64, |m, &x| m | masks[x]);
            let (sub, map) = g.induced_mask(union);
            for comp in sub.connected_components() {
                let part = sub.induced_by(&comp.to_vec());
                let component: Vec<usize> = comp.iter().map(|x| map[x]).collect();
                let mut found = None;
                for (ri, r) in reps.iter().enumerate() {
                    match hom_equivalent(&part, r, limits) {
                        Some(true) => {
                            found = Some(ri);
                            break;
                        }
                        Some(false) => {}
                        None => return Err(Error::Budget(limits.node_limit.unwrap_or(0))),
                    }
                }
                let representative = found.ok_or(Error::NoRepresentative(component.clone()))?;
                entries.push(PartitionEntry {
                    classes: j.clone(),
                    component,
                    representative,
                });
            }
        }
    }
    Ok(RegularPartitionReport { p, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cycle, path};
    use crate::hom::is_isomorphic;

    fn same_set(got: &[Graph], want: &[Graph]) -> bool {
        got.len() == want.len()
            && want
                .iter()
                .all(|w| got.iter().any(|g| is_isomorphic(g, w).unwrap()))
    }

    #[test]
    fn representative_examples() {
        assert!(same_set(&representatives(1, 5).unwrap(), &[complete(1)]));
        assert!(same_set(
            &representatives(2, 5).unwrap(),
            &[complete(1), complete(2)]
        ));
        assert!(same_set(
            &representatives(3, 6).unwrap(),
            &[complete(1), complete(2), complete(3)]
        ));
    }

    #[test]
    fn rejects_disconnected_family() {
        let f = disjoint_union(&[complete(2), complete(2)]).0;
        assert!(build_dual(&[complete(1)], &[f.clone()], &DualOptions::default()).is_err());
        assert!(
            verify_duality(&[complete(1)], &[f], &complete(1), SearchLimits::default()).is_err()
        );
    }

    #[test]
    fn degenerate_pipeline() {
        let corpus = [complete(1)];
        let forbidden = [complete(2)];
        let b = build_dual(&corpus, &forbidden, &DualOptions::default()).unwrap();
        assert_eq!(b.provenance.u_order, 1);
        assert_eq!(b.power.graph.edge_count(), 0);
        let r =
            verify_duality(&corpus, &forbidden, &b.power.graph, SearchLimits::default()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn small_triangle_pipeline() {
        let filter = GraphFilter {
            min_n: Some(1),
            max_degree: Some(3),
            connected: true,
            ..GraphFilter::default()
        };
        let corpus = generate_all_graphs(5, &filter).unwrap();
        let forbidden = [complete(3)];
        let b = build_dual(&corpus, &forbidden, &DualOptions::default()).unwrap();
        assert!(b
            .forbidden_checks
            .iter()
            .all(|c| c.maps_to_d == Some(false)));
        assert!(b
            .forbidden_checks
            .iter()
            .all(|c| c.by_construction == Some(true)));
        for (g, lift) in corpus.iter().zip(&b.lifts) {
            assert_eq!(lift.is_some(), !g.contains_triangle());
        }
        let r =
            verify_duality(&corpus, &forbidden, &b.power.graph, SearchLimits::default()).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn forests_against_pentagon() {
        let filter = GraphFilter {
            min_n: Some(1),
            ..GraphFilter::default()
        };
        let forests: Vec<Graph> = generate_all_graphs(6, &filter)
            .unwrap()
            .into_iter()
            .filter(|g| g.edge_count() + g.connected_components().len() == g.n())
            .collect();
        let forbidden = [cycle(5)];
        let b = build_dual(&forests, &forbidden, &DualOptions::default()).unwrap();
        let r = verify_duality(
            &forests,
            &forbidden,
            &b.power.graph,
            SearchLimits::default(),
        )
        .unwrap();
        assert!(r.pass);
        assert_eq!(r.members, forests.len());
    }

    #[test]
    fn self_bound_fixture() {
        let corpus = [complete(4), cycle(5), path(3)];
        let forbidden = [complete(3)];
        let members: Vec<Graph> = corpus
            .iter()
            .filter(|g| !g.contains_triangle())
            .cloned()
            .collect();
        let d = disjoint_union(&members).0;
        let r = verify_duality(&corpus, &forbidden, &d, SearchLimits::default()).unwrap();
        assert!(r.pass);
        assert_eq!(r.items[0].maps_to_d, Some(false));
    }

    #[test]
    fn partition_examples() {
        let reps = [complete(1), complete(2)];
        let c = Coloring::new(vec![1, 2, 3, 1]);
        let r = regular_partition_report(&path(4), &c, 2, &reps, SearchLimits::default()).unwrap();
        assert!(!r.entries.is_empty());

        let e = Graph::empty(4);
        let r =
            regular_partition_report(&e, &Coloring::rainbow(4), 2, &reps, SearchLimits::default())
                .unwrap();
        assert!(r.entries.iter().all(|x| x.representative == 0));

        let c6 = cycle(6);
        let c = Coloring::new(vec![0, 1, 2, 0, 1, 2]);
        let r = regular_partition_report(&c6, &c, 2, &reps, SearchLimits::default()).unwrap();
        assert!(r.entries.iter().all(|x| x.representative <= 1));

        let missing = regular_partition_report(&c6, &c, 2, &reps[..1], SearchLimits::default());
        assert!(matches!(missing, Err(Error::NoRepresentative(_))));
    }
}
