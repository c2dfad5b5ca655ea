//! Booth's reduction to chordal graphs and the round-based elimination of
//! forbidden subgraphs with marking.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::chordal::check_chordal;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::forbidden::{find_occurrences_with, is_extended_class, ForbiddenOccurrence, Membership};
use crate::graph::{Edge, EdgeList, Graph, VertexId, VertexSet};
use crate::marker::{attach_gadgets_with_input, EdgeCategory, GadgetCode, MarkedGraph, RoundCounts, CATEGORIES};

/// Subdivides every edge of `g` and turns the original vertices into a
/// clique. Vertices `0..n` are the originals; the subdivision vertex of the
/// `k`-th edge in lexicographic order is `n + k`.
pub fn booth_reduce(g: &Graph) -> MarkedGraph {
    let n = g.n();
    let mut edges: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    for (k, (u, v)) in g.edges().enumerate() {
        edges.push((u, n + k));
        edges.push((v, n + k));
    }
    let b = Graph::from_edges_unchecked(n + g.m(), edges);
    let mut mg = MarkedGraph::plain(b);
    mg.input_n = n;
    mg
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Attach marking trees to the result. Without them only the edge
    /// additions are performed.
    pub attach_gadgets: bool,
    pub execution: Execution,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            attach_gadgets: true,
            execution: Execution::default(),
        }
    }
}

impl ReduceOptions {
    pub fn unmarked() -> Self {
        ReduceOptions {
            attach_gadgets: false,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    #[serde(skip)]
    pub round_index: usize,
    #[serde(rename = "added")]
    pub added_edges: EdgeList,
    pub occurrences: Vec<ForbiddenOccurrence>,
    #[serde(rename = "increments")]
    pub codes_delta: BTreeMap<VertexId, RoundCounts>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    #[serde(rename = "booth")]
    pub booth_applied: bool,
    pub rounds: Vec<RoundRecord>,
    #[serde(rename = "member")]
    pub final_member: bool,
    pub unresolved: Vec<ForbiddenOccurrence>,
    /// Chordless cycle of the final core when it is not chordal.
    pub hole: Option<Vec<VertexId>>,
}

impl ReductionTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }

    pub fn added_edge_count(&self) -> usize {
        self.rounds.iter().map(|r| r.added_edges.len()).sum()
    }

    /// Rebuilds the reduction output from `input` and this trace alone.
    pub fn replay(&self, input: &Graph, opts: ReduceOptions) -> Result<MarkedGraph> {
        let start = if self.booth_applied {
            booth_reduce(input)
        } else {
            MarkedGraph::plain(input.clone())
        };
        let added: Vec<Edge> = self.rounds.iter().flat_map(|r| r.added_edges.iter().copied()).collect();
        let core = start.graph.with_edges(&added)?;
        let mut codes: BTreeMap<VertexId, GadgetCode> = BTreeMap::new();
        let rounds = self.rounds.len();
        for (i, r) in self.rounds.iter().enumerate() {
            for (&v, counts) in &r.codes_delta {
                let code = codes
                    .entry(v)
                    .or_insert_with(|| GadgetCode::new(vec![[0; CATEGORIES]; rounds]));
                code.rounds[i] = *counts;
            }
        }
        Ok(finish(&core, start.input_n, codes, start.original_edges, opts))
    }
}

fn finish(
    core: &Graph,
    input_n: usize,
    codes: BTreeMap<VertexId, GadgetCode>,
    original: EdgeList,
    opts: ReduceOptions,
) -> MarkedGraph {
    if opts.attach_gadgets {
        attach_gadgets_with_input(core, input_n, &codes, original)
    } else {
        let mut mg = MarkedGraph::plain(core.clone());
        mg.input_n = input_n;
        mg.original_edges = original;
        mg.codes = codes;
        mg
    }
}

/// Repeats rounds of find / fix / mark on the core of `mg` until no
/// forbidden subgraph remains. Gadget vertices never take part in the
/// search, so fix edges never touch them; any gadgets already present are
/// dropped and the result is re-marked from the accumulated codes.
pub fn eliminate_forbidden(mg: MarkedGraph, opts: ReduceOptions) -> Result<(MarkedGraph, ReductionTrace)> {
    let mut core = mg.core_graph();
    let n = core.n();
    let limit = n * n.saturating_sub(1) / 2;
    let prior = mg.codes.values().map(|c| c.rounds.len()).max().unwrap_or(0);
    let mut per_round: BTreeMap<VertexId, Vec<RoundCounts>> = mg
        .codes
        .iter()
        .map(|(&v, c)| (v, c.padded(prior).rounds))
        .collect();
    let none = VertexSet::new(n);
    let mut rounds: Vec<RoundRecord> = Vec::new();
    loop {
        let occurrences = find_occurrences_with(&core, &none, opts.execution);
        if occurrences.is_empty() {
            break;
        }
        if rounds.len() >= limit {
            return Err(Error::RoundLimitExceeded(limit));
        }
        let mut added = EdgeList::new();
        let mut delta: BTreeMap<VertexId, RoundCounts> = BTreeMap::new();
        for occ in &occurrences {
            for ((u, v), ru, rv) in occ.mapped_fixes() {
                debug_assert!(!core.has_edge(u, v));
                added.push(u, v);
                delta.entry(u).or_insert([0; CATEGORIES])[EdgeCategory::for_endpoint(occ.kind, ru, rv).index()] += 1;
                delta.entry(v).or_insert([0; CATEGORIES])[EdgeCategory::for_endpoint(occ.kind, rv, ru).index()] += 1;
            }
        }
        core = core.with_edges(added.as_slice())?;
        let index = prior + rounds.len();
        for (&v, counts) in &delta {
            let r = per_round.entry(v).or_default();
            r.resize(index, [0; CATEGORIES]);
            r.push(*counts);
        }
        rounds.push(RoundRecord {
            round_index: index,
            added_edges: added,
            occurrences,
            codes_delta: delta,
        });
    }
    let total = prior + rounds.len();
    let codes: BTreeMap<VertexId, GadgetCode> = per_round
        .into_iter()
        .map(|(v, r)| (v, GadgetCode::new(r).padded(total)))
        .collect();
    let (final_member, unresolved, hole) = match is_extended_class(&core) {
        Membership::Member => (true, Vec::new(), None),
        Membership::NotChordal(h) => (false, Vec::new(), Some(h)),
        Membership::HasForbidden(o) => (false, vec![o], None),
    };
    let out = finish(&core, mg.input_n, codes, mg.original_edges, opts);
    let trace = ReductionTrace {
        booth_applied: false,
        rounds,
        final_member,
        unresolved,
        hole,
    };
    Ok((out, trace))
}

/// Booth's reduction when `g` is not chordal, then elimination.
pub fn to_extended(g: &Graph, opts: ReduceOptions) -> Result<(MarkedGraph, ReductionTrace)> {
    let booth = !check_chordal(g).is_chordal();
    let start = if booth { booth_reduce(g) } else { MarkedGraph::plain(g.clone()) };
    let (mg, mut trace) = eliminate_forbidden(start, opts)?;
    trace.booth_applied = booth;
    Ok((mg, trace))
}
