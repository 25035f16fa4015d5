//! Command-line front end: corpus loading, command dispatch and JSON reports.

pub mod formats;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{cycle, generate_all_graphs_with_limit, GraphFilter, GENERATE_LIMIT};
use crate::colorings::{centered_from_td, find_low_td_coloring, verify_p_centered, Coloring};
use crate::duality::{
    build_dual, power_local_property, power_order, regular_partition_report, representatives,
    truncated_power_with_cap, verify_duality, DualOptions, DEFAULT_POWER_CAP,
};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hom::{canonical_form, SearchLimits, ISO_LIMIT};
use crate::powers::{chromatic_number, odd_power_experiment, power, PowerKind};
use crate::sparsity::{
    degeneracy, grad_0_flow, grad_r, min_indegree_orientation, tree_depth, verify_td,
};
use formats::{parse_edge_list, parse_graph6_lines, to_graph6};

pub const SCHEMA: &str = "sd-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    G6,
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KindArg {
    Path,
    Distance,
}

#[derive(Debug, Parser)]
#[command(
    name = "sdual",
    version,
    about = "Sparsity invariants and restricted dualities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input graphs (graph6 lines or one edge list).
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Generate all graphs up to this order instead of reading --in.
    #[arg(long, global = true)]
    pub generate: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub rank: usize,
    /// Forbidden graphs (same formats as --in).
    #[arg(long, global = true)]
    pub forbid: Option<PathBuf>,
    #[arg(long, global = true)]
    pub limit_nodes: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub p_override: Option<usize>,
    /// Fail unless every result is exact.
    #[arg(long, global = true)]
    pub exhaustive: bool,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    #[arg(long, global = true)]
    pub min_n: Option<usize>,
    #[arg(long, global = true)]
    pub connected: bool,
    #[arg(long, global = true)]
    pub triangle_free: bool,
    #[arg(long, global = true)]
    pub odd_girth_above: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Tree-depth with a witness forest.
    Td,
    /// Grad of the given rank.
    Grad,
    /// Orientation of minimum maximum indegree, and degeneracy.
    Orient,
    /// Checks p-centered colorings (level colorings when none is given).
    CenteredVerify {
        /// One line of colors per input graph.
        #[arg(long)]
        coloring: Option<PathBuf>,
    },
    /// Finds low tree-depth colorings.
    LowtdFind {
        #[arg(long, default_value_t = 12)]
        k_max: usize,
    },
    /// Builds a truncated power of --base over --template.
    Power {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        template: PathBuf,
        #[arg(long, default_value_t = DEFAULT_POWER_CAP)]
        cap: usize,
        /// Include the power in the report as graph6.
        #[arg(long)]
        emit_graph: bool,
    },
    /// Builds a dual for Forb(--forbid) over the corpus.
    DualBuild {
        #[command(flatten)]
        dual: DualArgs,
        /// Write the dual as graph6 to this file.
        #[arg(long)]
        emit_dual: Option<PathBuf>,
    },
    /// Verifies a restricted duality; builds the dual unless --dual-graph is given.
    DualVerify {
        #[command(flatten)]
        dual: DualArgs,
        #[arg(long)]
        dual_graph: Option<PathBuf>,
    },
    /// Exact p-powers or exact-distance graphs with their chromatic numbers.
    ExactPower {
        #[arg(long, value_enum, default_value_t = KindArg::Path)]
        kind: KindArg,
    },
    /// Chromatic numbers of exact odd powers over the corpus.
    ExperimentOddPower {
        #[arg(long)]
        claim: Option<u128>,
        /// Use the order of the dual for Forb(C_p) as the claim.
        #[arg(long)]
        claim_from_dual: bool,
        #[command(flatten)]
        dual: DualArgs,
    },
    /// Matches class components against representatives.
    RegularPartition {
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        n_rep: usize,
        #[arg(long, default_value_t = 12)]
        k_max: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DualArgs {
    #[arg(long, default_value_t = 6)]
    pub n_rep: usize,
    #[arg(long, default_value_t = 12)]
    pub k_max: usize,
    #[arg(long, default_value_t = DEFAULT_POWER_CAP)]
    pub cap: usize,
}

/// A finite corpus: a file or the generator, with filters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSpec {
    pub source: CorpusSource,
    pub filter: GraphFilter,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorpusSource {
    File { path: PathBuf, format: Format },
    Generator { n_max: usize },
}

impl CorpusSpec {
    /// Loads, filters and deduplicates (by isomorphism up to the canonical
    /// form limit, by equality beyond it), keeping first occurrences.
    pub fn resolve(&self) -> Result<Vec<Graph>> {
        let graphs = match &self.source {
            CorpusSource::File { path, format } => read_graphs(path, *format)?,
            CorpusSource::Generator { n_max } => {
                generate_all_graphs_with_limit(*n_max, &GraphFilter::default(), GENERATE_LIMIT)?
            }
        };
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for g in graphs.into_iter().filter(|g| self.filter.accepts(g)) {
            let key = if g.n() <= ISO_LIMIT {
                format!("c:{:?}", canonical_form(&g))
            } else {
                format!("g:{}", to_graph6(&g))
            };
            if seen.insert(key) {
                out.push(g);
            }
        }
        Ok(out)
    }
}

fn infer_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("g6") | Some("graph6") => Format::G6,
        Some("txt") | Some("edges") | Some("el") => Format::Edges,
        _ => Format::G6,
    }
}

pub fn read_graphs(path: &Path, format: Format) -> Result<Vec<Graph>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    match format {
        Format::G6 => parse_graph6_lines(&text),
        Format::Edges => Ok(vec![parse_edge_list(&text)?]),
    }
}

fn read_single(path: &Path, format: Option<Format>) -> Result<Graph> {
    let mut gs = read_graphs(path, format.unwrap_or_else(|| infer_format(path)))?;
    if gs.len() != 1 {
        return Err(Error::Usage(format!(
            "{} must contain exactly one graph, found {}",
            path.display(),
            gs.len()
        )));
    }
    Ok(gs.remove(0))
}

fn read_colorings(path: &Path) -> Result<Vec<Coloring>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut offset = 0;
    let mut out = Vec::new();
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        if line.trim().is_empty() {
            continue;
        }
        let colors = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    offset: start,
                    msg: format!("bad color {t:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(Coloring::new(colors));
    }
    Ok(out)
}

/// The JSON report every command emits. Keys serialize sorted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub parameters: Value,
    pub items: Vec<Value>,
    pub summary: Value,
    pub provenance: Value,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u128>,
}

impl RunReport {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

impl Common {
    fn limits(&self) -> SearchLimits {
        match self.limit_nodes {
            Some(n) => SearchLimits::nodes(n),
            None => SearchLimits::default(),
        }
    }

    fn filter(&self) -> GraphFilter {
        GraphFilter {
            min_n: self.min_n,
            max_n: None,
            max_degree: self.max_degree,
            connected: self.connected,
            triangle_free: self.triangle_free,
            odd_girth_above: self.odd_girth_above,
        }
    }

    pub fn corpus_spec(&self) -> Result<CorpusSpec> {
        let source = match (&self.input, self.generate) {
            (Some(path), None) => CorpusSource::File {
                path: path.clone(),
                format: self.format.unwrap_or_else(|| infer_format(path)),
            },
            (None, Some(n_max)) => CorpusSource::Generator { n_max },
            (Some(_), Some(_)) => {
                return Err(Error::Usage("--in and --generate are exclusive".into()))
            }
            (None, None) => {
                return Err(Error::Usage(
                    "an input (--in or --generate) is required".into(),
                ))
            }
        };
        Ok(CorpusSpec {
            source,
            filter: self.filter(),
        })
    }

    fn require_p(&self) -> Result<usize> {
        self.p.ok_or_else(|| Error::Usage("--p is required".into()))
    }

    fn forbidden(&self) -> Result<Vec<Graph>> {
        let path = self
            .forbid
            .as_ref()
            .ok_or_else(|| Error::Usage("--forbid is required".into()))?;
        read_graphs(path, self.format.unwrap_or_else(|| infer_format(path)))
    }

    fn dual_options(&self, d: &DualArgs) -> DualOptions {
        DualOptions {
            p_override: self.p_override,
            n_rep: d.n_rep,
            k_max: d.k_max,
            cap: d.cap,
            limits: self.limits(),
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Td => "td",
        Command::Grad => "grad",
        Command::Orient => "orient",
        Command::CenteredVerify { .. } => "centered-verify",
        Command::LowtdFind { .. } => "lowtd-find",
        Command::Power { .. } => "power",
        Command::DualBuild { .. } => "dual-build",
        Command::DualVerify { .. } => "dual-verify",
        Command::ExactPower { .. } => "exact-power",
        Command::ExperimentOddPower { .. } => "experiment-odd-power",
        Command::RegularPartition { .. } => "regular-partition",
    }
}

struct Outcome {
    parameters: Value,
    items: Vec<Value>,
    summary: Value,
    pass: bool,
}

/// Runs one command and assembles its report.
pub fn dispatch(cli: &Cli) -> Result<RunReport> {
    let start = Instant::now();
    let c = &cli.common;
    let out = run(&cli.command, c)?;
    Ok(RunReport {
        schema: SCHEMA,
        command: command_name(&cli.command).to_string(),
        parameters: out.parameters,
        items: out.items,
        summary: out.summary,
        provenance: json!({
            "version": env!("CARGO_PKG_VERSION"),
            "seed": c.seed,
            "limits": to_value(&c.limits()),
        }),
        pass: out.pass,
        wall_time_ms: c.timing.then(|| start.elapsed().as_millis()),
    })
}

fn mismatch(what: &str, a: usize, b: usize) -> Error {
    Error::Usage(format!("{what}: {a} graphs but {b} colorings"))
}

fn run(cmd: &Command, c: &Common) -> Result<Outcome> {
    use rayon::prelude::*;
    match cmd {
        Command::Td => {
            let corpus = c.corpus_spec()?.resolve()?;
            let items: Vec<Value> = corpus
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let cert = tree_depth(g);
                    json!({
                        "index": i,
                        "n": g.n(),
                        "value": cert.value,
                        "forest": cert.forest.parents(),
                        "optimal": cert.optimal,
                        "verified": verify_td(g, &cert),
                    })
                })
                .collect();
            let pass = items
                .iter()
                .all(|v| v["verified"] == true && (!c.exhaustive || v["optimal"] == true));
            let max = items.iter().filter_map(|v| v["value"].as_u64()).max();
            Ok(Outcome {
                parameters: json!({ "corpus": to_value(&c.corpus_spec()?) }),
                summary: json!({ "graphs": items.len(), "max_value": max }),
                items,
                pass,
            })
        }
        Command::Grad => {
            let corpus = c.corpus_spec()?.resolve()?;
            let r = c.rank;
            let items: Vec<Value> = corpus
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let res = grad_r(g, r);
                    let balls: Vec<Vec<usize>> =
                        res.witness.balls.iter().map(|b| b.to_vec()).collect();
                    json!({
                        "index": i,
                        "n": g.n(),
                        "value": res.value.to_string(),
                        "exact": res.exact,
                        "witness": balls,
                    })
                })
                .collect();
            let pass = !c.exhaustive || items.iter().all(|v| v["exact"] == true);
            Ok(Outcome {
                parameters: json!({ "corpus": to_value(&c.corpus_spec()?), "rank": r }),
                summary: json!({ "graphs": items.len() }),
                items,
                pass,
            })
        }
        Command::Orient => {
            let corpus = c.corpus_spec()?.resolve()?;
            let items: Vec<Value> = corpus
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let d0 = grad_0_flow(g);
                    let (o, k) = min_indegree_orientation(g);
                    let deg = degeneracy(g);
                    let tight = k as i64 == d0.ceil().to_integer();
                    let within = deg.value as i64 <= (d0 * 2).floor().to_integer();
                    json!({
                        "index": i,
                        "grad_0": d0.to_string(),
                        "max_indegree": k,
                        "arcs": o.arcs,
                        "degeneracy": deg.value,
                        "elimination_order": deg.order,
                        "indegree_tight": tight,
                        "degeneracy_bound": within,
                    })
                })
                .collect();
            let pass = items
                .iter()
                .all(|v| v["indegree_tight"] == true && v["degeneracy_bound"] == true);
            Ok(Outcome {
                parameters: json!({ "corpus": to_value(&c.corpus_spec()?) }),
                summary: json!({ "graphs": items.len() }),
                items,
                pass,
            })
        }
        Command::CenteredVerify { coloring } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let p = c.require_p()?;
            let colorings = match coloring {
                Some(path) => {
                    let cs = read_colorings(path)?;
                    if cs.len() != corpus.len() {
                        return Err(mismatch("centered-verify", corpus.len(), cs.len()));
                    }
                    cs
                }
                None => corpus
                    .iter()
                    .map(|g| centered_from_td(g, &tree_depth(g)))
                    .collect::<Result<_>>()?,
            };
            let items = corpus
                .par_iter()
                .zip(&colorings)
                .enumerate()
                .map(|(i, (g, col))| {
                    let chk = verify_p_centered(g, col, p)?;
                    Ok(json!({
                        "index": i,
                        "colors": col.colors(),
                        "k": col.k(),
                        "ok": chk.ok,
                        "counterexample": chk.counterexample.map(|s| s.to_vec()),
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            let pass = items.iter().all(|v| v["ok"] == true);
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "p": p,
                    "coloring": if coloring.is_some() { "file" } else { "tree_depth_levels" },
                }),
                summary: json!({ "graphs": items.len() }),
                items,
                pass,
            })
        }
        Command::LowtdFind { k_max } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let p = c.require_p()?;
            let items = corpus
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let s = find_low_td_coloring(g, p, *k_max)?;
                    Ok(json!({
                        "index": i,
                        "colors": s.coloring.as_ref().map(|c| c.colors().to_vec()),
                        "k": s.coloring.as_ref().map(Coloring::k),
                        "exhaustive": s.exhaustive,
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            let pass = items
                .iter()
                .all(|v| !v["k"].is_null() && (!c.exhaustive || v["exhaustive"] == true));
            let max = items.iter().filter_map(|v| v["k"].as_u64()).max();
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "p": p,
                    "k_max": k_max,
                }),
                summary: json!({ "graphs": items.len(), "max_colors": max }),
                items,
                pass,
            })
        }
        Command::Power {
            base,
            template,
            cap,
            emit_graph,
        } => {
            let p = c.require_p()?;
            let u = read_single(base, c.format)?;
            let h = read_single(template, c.format)?;
            let tp = truncated_power_with_cap(&u, &h, p, *cap)?;
            let formula = power_order(u.n(), h.n(), p);
            let local = power_local_property(&tp);
            let order_ok = formula == Some(tp.order() as u128);
            let mut summary = json!({
                "order": tp.order(),
                "order_formula": formula.map(|x| x.to_string()),
                "edges": tp.graph.edge_count(),
                "alpha_checked": tp.alpha.checked,
                "local_property": local,
                "digits": tp.codec.digits(),
            });
            if *emit_graph {
                summary["graph6"] = Value::String(to_graph6(&tp.graph));
            }
            Ok(Outcome {
                parameters: json!({
                    "base": to_graph6(&u),
                    "template": to_graph6(&h),
                    "p": p,
                    "cap": cap,
                }),
                items: Vec::new(),
                summary,
                pass: order_ok && tp.alpha.checked && local,
            })
        }
        Command::DualBuild { dual, emit_dual } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let forbidden = c.forbidden()?;
            let b = build_dual(&corpus, &forbidden, &c.dual_options(dual))?;
            if let Some(path) = emit_dual {
                fs::write(path, format!("{}\n", to_graph6(&b.power.graph)))
                    .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            let items = b
                .colorings
                .iter()
                .zip(&b.lifts)
                .enumerate()
                .map(|(i, (col, lift))| {
                    json!({
                        "index": i,
                        "colors": col.colors(),
                        "lift": lift.as_ref().map(|f| f.image.clone()),
                    })
                })
                .collect();
            let pass = b
                .forbidden_checks
                .iter()
                .all(|f| f.maps_to_d == Some(false));
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "forbidden": forbidden.iter().map(to_graph6).collect::<Vec<_>>(),
                    "options": to_value(&c.dual_options(dual)),
                }),
                items,
                summary: json!({
                    "provenance": to_value(&b.provenance),
                    "forbidden_checks": to_value(&b.forbidden_checks),
                    "base": b.base_components.iter().map(to_graph6).collect::<Vec<_>>(),
                }),
                pass,
            })
        }
        Command::DualVerify { dual, dual_graph } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let forbidden = c.forbidden()?;
            let (d, provenance) = match dual_graph {
                Some(path) => (read_single(path, c.format)?, Value::Null),
                None => {
                    let b = build_dual(&corpus, &forbidden, &c.dual_options(dual))?;
                    (b.power.graph, to_value(&b.provenance))
                }
            };
            let report = verify_duality(&corpus, &forbidden, &d, c.limits())?;
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "forbidden": forbidden.iter().map(to_graph6).collect::<Vec<_>>(),
                    "dual_source": if dual_graph.is_some() { "file" } else { "built" },
                }),
                items: report.items.iter().map(to_value).collect(),
                summary: json!({
                    "dual_order": d.n(),
                    "dual_edges": d.edge_count(),
                    "provenance": provenance,
                    "forbidden": to_value(&report.forbidden),
                    "members": report.members,
                }),
                pass: report.pass,
            })
        }
        Command::ExactPower { kind } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let p = c.require_p()?;
            let kind = match kind {
                KindArg::Path => PowerKind::ExactPath,
                KindArg::Distance => PowerKind::ExactDistance,
            };
            let items = corpus
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let pw = power(g, kind, p)?;
                    let chi = chromatic_number(&pw);
                    Ok(json!({
                        "index": i,
                        "edges": pw.edges(),
                        "chromatic": to_value(&chi),
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            let pass = !c.exhaustive || items.iter().all(|v| v["chromatic"]["exact"] == true);
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "p": p,
                    "kind": to_value(&kind),
                }),
                summary: json!({ "graphs": items.len() }),
                items,
                pass,
            })
        }
        Command::ExperimentOddPower {
            claim,
            claim_from_dual,
            dual,
        } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let p = c.require_p()?;
            let mut dual_order = None;
            let claim = if *claim_from_dual {
                let forbidden = [if p >= 3 {
                    cycle(p)
                } else {
                    crate::catalog::complete(p + 1)
                }];
                let b = build_dual(&corpus, &forbidden, &c.dual_options(dual))?;
                dual_order = Some(b.provenance.d_order);
                Some(b.provenance.d_order as u128)
            } else {
                *claim
            };
            let report = odd_power_experiment(&corpus, p, claim)?;
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "p": p,
                    "claim": claim.map(|x| x.to_string()),
                    "claim_from_dual": claim_from_dual,
                }),
                items: report.items.iter().map(to_value).collect(),
                summary: json!({
                    "max_chi_exact_power": report.max_chi_exact_power,
                    "max_chi_exact_distance": report.max_chi_exact_distance,
                    "within_ceiling": report.within_ceiling,
                    "within_claim": report.within_claim,
                    "dual_order": dual_order,
                    "considered": report.items.iter().filter(|i| !i.skipped).count(),
                }),
                pass: report.pass,
            })
        }
        Command::RegularPartition {
            coloring,
            n_rep,
            k_max,
        } => {
            let corpus = c.corpus_spec()?.resolve()?;
            let p = c.require_p()?;
            let colorings = match coloring {
                Some(path) => {
                    let cs = read_colorings(path)?;
                    if cs.len() != corpus.len() {
                        return Err(mismatch("regular-partition", corpus.len(), cs.len()));
                    }
                    cs
                }
                None => corpus
                    .iter()
                    .map(|g| {
                        find_low_td_coloring(g, p, *k_max)?.coloring.ok_or_else(|| {
                            Error::Precondition("no low tree-depth coloring found".into())
                        })
                    })
                    .collect::<Result<_>>()?,
            };
            let reps = representatives(p, *n_rep)?;
            let items = corpus
                .iter()
                .zip(&colorings)
                .enumerate()
                .map(|(i, (g, col))| {
                    let r = regular_partition_report(g, col, p, &reps, c.limits())?;
                    Ok(json!({
                        "index": i,
                        "colors": col.colors(),
                        "entries": to_value(&r.entries),
                    }))
                })
                .collect::<Result<Vec<Value>>>()?;
            Ok(Outcome {
                parameters: json!({
                    "corpus": to_value(&c.corpus_spec()?),
                    "p": p,
                    "n_rep": n_rep,
                }),
                summary: json!({
                    "graphs": items.len(),
                    "representatives": reps.iter().map(to_graph6).collect::<Vec<_>>(),
                }),
                items,
                pass: true,
            })
        }
    }
}

/// Parses arguments, runs the command and writes the report. Returns the
/// process exit code: 0 on pass, 1 on a failed verdict, 2 on error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let text = report.to_json();
            let written = match &cli.common.out {
                Some(path) => fs::write(path, &text).map_err(|e| e.to_string()),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
                Ok(()) if report.pass => 0,
                Ok(()) => 1,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
