//! Marking gadgets: rooted trees recording how many fix edges a vertex
//! received, per elimination round and per (kind, role) category.
//!
//! Encoding of a code with `R` rounds:
//!
//! * a spine path `s_0 … s_L` with `L = 14·R`, rooted at `s_0`;
//! * one marker leaf on every spine vertex;
//! * for round `r` (0-based) and category `k`, a pendant path of
//!   `count + 1` vertices hanging from spine vertex `s_{2(7r+k)+1}`.
//!
//! Pendants are bare paths while every proper spine suffix except the last
//! vertex branches, which makes the spine recoverable from shape alone.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forbidden::{ForbiddenKind, NodeRole};
use crate::graph::{Edge, EdgeList, Graph, VertexId, VertexSet};

pub const CATEGORIES: usize = 7;

/// Counters per round, in the bottom-to-top order of the marking legend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeCategory {
    H1Type1,
    H1BetweenType1,
    H1Type2,
    H2Type1,
    H2Type2,
    H3Type1,
    H3Type2,
}

impl EdgeCategory {
    pub const ALL: [EdgeCategory; CATEGORIES] = [
        EdgeCategory::H1Type1,
        EdgeCategory::H1BetweenType1,
        EdgeCategory::H1Type2,
        EdgeCategory::H2Type1,
        EdgeCategory::H2Type2,
        EdgeCategory::H3Type1,
        EdgeCategory::H3Type2,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Category credited to an endpoint with role `own` of a fix edge whose
    /// other endpoint has role `other`.
    pub fn for_endpoint(kind: ForbiddenKind, own: NodeRole, other: NodeRole) -> Self {
        use NodeRole::*;
        match (kind, own) {
            (k, Type1) if k.is_h1() && other == Type1 => EdgeCategory::H1BetweenType1,
            (k, Type1) if k.is_h1() => EdgeCategory::H1Type1,
            (k, Type2) if k.is_h1() => EdgeCategory::H1Type2,
            (ForbiddenKind::H2, Type1) => EdgeCategory::H2Type1,
            (ForbiddenKind::H2, Type2) => EdgeCategory::H2Type2,
            (_, Type1) => EdgeCategory::H3Type1,
            (_, Type2) => EdgeCategory::H3Type2,
        }
    }
}

pub type RoundCounts = [u32; CATEGORIES];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct GadgetCode {
    pub rounds: Vec<RoundCounts>,
}

impl GadgetCode {
    pub fn new(rounds: Vec<RoundCounts>) -> Self {
        GadgetCode { rounds }
    }

    pub fn is_zero(&self) -> bool {
        self.rounds.iter().all(|r| r.iter().all(|&c| c == 0))
    }

    /// Pads with zero rounds up to `rounds`.
    pub fn padded(&self, rounds: usize) -> Self {
        let mut r = self.rounds.clone();
        r.resize(rounds.max(r.len()), [0; CATEGORIES]);
        GadgetCode { rounds: r }
    }

    /// Number of vertices of the encoded tree.
    pub fn tree_size(&self) -> usize {
        let spine = 2 * CATEGORIES * self.rounds.len() + 1;
        let pendants: usize = self
            .rounds
            .iter()
            .flatten()
            .map(|&c| c as usize + 1)
            .sum();
        2 * spine + pendants
    }
}

/// Builds the gadget tree for `code`; vertex 0 is the root.
pub fn encode_gadget(code: &GadgetCode) -> Graph {
    assert!(!code.rounds.is_empty(), "a gadget encodes at least one round");
    let len = 2 * CATEGORIES * code.rounds.len();
    let spine = len + 1;
    let mut edges: Vec<Edge> = (1..spine).map(|i| (i - 1, i)).collect();
    edges.extend((0..spine).map(|i| (i, spine + i)));
    let mut next = 2 * spine;
    for (r, counts) in code.rounds.iter().enumerate() {
        for (k, &c) in counts.iter().enumerate() {
            let mut at = 2 * (CATEGORIES * r + k) + 1;
            for _ in 0..=c {
                edges.push((at, next));
                at = next;
                next += 1;
            }
        }
    }
    debug_assert_eq!(next, code.tree_size());
    Graph::from_edges_unchecked(next, edges)
}

/// Inverse of [`encode_gadget`], using only the rooted shape of `tree`.
pub fn decode_gadget(tree: &Graph, root: VertexId) -> Result<GadgetCode> {
    let bad = |msg: &str| Error::MalformedGadget(msg.to_string());
    let n = tree.n();
    if root >= n {
        return Err(bad("root out of range"));
    }
    if tree.m() + 1 != n {
        return Err(bad("not a tree"));
    }
    // BFS from the root for parents and a top-down order.
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    parent[root] = root;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in tree.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
    }
    if order.len() != n {
        return Err(bad("not connected"));
    }
    let parent = &parent;
    let children = |v: VertexId| {
        tree.neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| parent[w] == v && w != root)
    };
    // Some(len) when the subtree at v is a bare downward path of len vertices.
    let mut path_len: Vec<Option<usize>> = vec![None; n];
    for &v in order.iter().rev() {
        let kids: Vec<VertexId> = children(v).collect();
        path_len[v] = match kids.as_slice() {
            [] => Some(1),
            [c] => path_len[*c].map(|l| l + 1),
            _ => None,
        };
    }

    let mut slots: Vec<u32> = Vec::new();
    let mut cur = root;
    let mut pos = 0usize;
    loop {
        let kids: Vec<VertexId> = children(cur).collect();
        let mut paths: Vec<usize> = kids.iter().filter_map(|&c| path_len[c]).collect();
        let branching: Vec<VertexId> = kids.iter().copied().filter(|&c| path_len[c].is_none()).collect();
        paths.sort_unstable();
        let odd = pos % 2 == 1;
        match branching.as_slice() {
            [next] => {
                // Interior spine vertex: a marker, plus a pendant on odd positions.
                let expect = if odd { 2 } else { 1 };
                if paths.len() != expect || paths[0] != 1 {
                    return Err(bad(&format!("unexpected branches at spine position {pos}")));
                }
                if odd {
                    slots.push((paths[1] - 1) as u32);
                }
                cur = *next;
                pos += 1;
            }
            [] => {
                // Second-to-last spine vertex: marker, final spine vertex, pendant.
                if !odd || paths.len() != 3 {
                    return Err(bad(&format!("spine ends unexpectedly at position {pos}")));
                }
                let i1 = paths.iter().position(|&l| l == 1).ok_or_else(|| bad("missing marker leaf"))?;
                paths.remove(i1);
                let i2 = paths.iter().position(|&l| l == 2).ok_or_else(|| bad("missing spine end"))?;
                paths.remove(i2);
                slots.push((paths[0] - 1) as u32);
                pos += 1;
                break;
            }
            _ => return Err(bad(&format!("spine forks at position {pos}"))),
        }
    }
    let len = pos;
    if !len.is_multiple_of(2 * CATEGORIES) || slots.len() != len / 2 {
        return Err(bad("spine length does not match a whole number of rounds"));
    }
    let rounds = slots
        .chunks(CATEGORIES)
        .map(|c| {
            let mut r = [0u32; CATEGORIES];
            r.copy_from_slice(c);
            r
        })
        .collect();
    Ok(GadgetCode { rounds })
}

/// Class of a vertex in a [`MarkedGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexClass {
    /// A vertex of the graph the reduction started from.
    Input,
    /// A core vertex introduced by subdivision.
    Subdivision,
    /// A vertex of some marking tree.
    Gadget,
}

/// A core graph with marking trees attached.
///
/// Core vertices are `0..core_n`; within the core, `0..input_n` are the
/// vertices of the input graph. Gadget vertices follow, grouped by host in
/// ascending host order, each tree laid out as produced by [`encode_gadget`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph {
    pub graph: Graph,
    pub core_n: usize,
    pub input_n: usize,
    /// `host_of[i]` is the core vertex owning gadget vertex `core_n + i`.
    pub host_of: Vec<VertexId>,
    /// Gadget root of each coded host.
    pub roots: BTreeMap<VertexId, VertexId>,
    pub codes: BTreeMap<VertexId, GadgetCode>,
    /// Core edges present before any fix edge was added.
    pub original_edges: EdgeList,
}

impl MarkedGraph {
    /// Wraps a plain graph: everything is core, nothing is coded.
    pub fn plain(g: Graph) -> Self {
        let n = g.n();
        MarkedGraph {
            original_edges: g.edge_list(),
            graph: g,
            core_n: n,
            input_n: n,
            host_of: Vec::new(),
            roots: BTreeMap::new(),
            codes: BTreeMap::new(),
        }
    }

    pub fn core(&self) -> VertexSet {
        VertexSet::from_vertices(self.graph.n(), 0..self.core_n).expect("core is in range")
    }

    pub fn gadget_vertices(&self) -> VertexSet {
        VertexSet::from_vertices(self.graph.n(), self.core_n..self.graph.n()).expect("in range")
    }

    pub fn core_graph(&self) -> Graph {
        let core: Vec<VertexId> = (0..self.core_n).collect();
        self.graph
            .induced_subgraph(&core)
            .expect("core is in range")
            .graph
    }

    pub fn class_of(&self, v: VertexId) -> VertexClass {
        if v < self.input_n {
            VertexClass::Input
        } else if v < self.core_n {
            VertexClass::Subdivision
        } else {
            VertexClass::Gadget
        }
    }

    /// Graph on the full vertex set holding only the original core edges.
    pub fn original_graph(&self) -> Graph {
        Graph::from_edges_unchecked(self.graph.n(), self.original_edges.iter().copied().collect::<Vec<_>>())
    }

    pub fn has_gadgets(&self) -> bool {
        self.graph.n() > self.core_n
    }

    /// Checks the structural invariants: gadget vertices form a forest with
    /// one tree per coded host, each tree touching the core only through
    /// its root edge, and the original edges survive.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let g = &self.graph;
        if self.host_of.len() != g.n() - self.core_n {
            return Err("host table does not cover the gadget vertices".into());
        }
        let gadget_edges = g.edges().filter(|&(u, v)| u >= self.core_n && v >= self.core_n).count();
        let gadget_n = g.n() - self.core_n;
        if gadget_edges + self.roots.len() != gadget_n {
            return Err("gadget vertices do not induce a forest with one tree per host".into());
        }
        for (u, v) in g.edges() {
            match (u < self.core_n, v < self.core_n) {
                (true, false) if self.roots.get(&u) != Some(&v) => {
                    return Err(format!("core vertex {u} touches gadget vertex {v} off its root"));
                }
                (false, false) if self.host_of[u - self.core_n] != self.host_of[v - self.core_n] => {
                    return Err(format!("gadget edge {u}-{v} joins two trees"));
                }
                _ => {}
            }
        }
        if self.original_edges.iter().any(|&(u, v)| !g.has_edge(u, v)) {
            return Err("an original edge is missing".into());
        }
        for (&h, &r) in &self.roots {
            if !self.codes.contains_key(&h) || self.host_of[r - self.core_n] != h {
                return Err(format!("root bookkeeping for host {h} is inconsistent"));
            }
        }
        Ok(())
    }

    /// The gadget tree of `host` as a standalone graph and its root.
    pub fn gadget_of(&self, host: VertexId) -> Option<(Graph, VertexId)> {
        let &root = self.roots.get(&host)?;
        let verts: Vec<VertexId> = (self.core_n..self.graph.n())
            .filter(|&v| self.host_of[v - self.core_n] == host)
            .collect();
        let sub = self.graph.induced_subgraph(&verts).ok()?;
        Some((sub.graph, sub.old_to_new[root]?))
    }
}

impl Serialize for MarkedGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MarkedGraph", 5)?;
        st.serialize_field("graph", &self.graph)?;
        st.serialize_field("core_n", &self.core_n)?;
        st.serialize_field("input_n", &self.input_n)?;
        st.serialize_field("codes", &self.codes)?;
        st.serialize_field("original_edges", &self.original_edges)?;
        st.end()
    }
}

/// Attaches one gadget per coded vertex of `core` (via an edge from the
/// vertex to the gadget root). Empty codes attach nothing.
pub fn attach_gadgets(
    core: &Graph,
    codes: &BTreeMap<VertexId, GadgetCode>,
    original: EdgeList,
) -> MarkedGraph {
    attach_gadgets_with_input(core, core.n(), codes, original)
}

pub fn attach_gadgets_with_input(
    core: &Graph,
    input_n: usize,
    codes: &BTreeMap<VertexId, GadgetCode>,
    original: EdgeList,
) -> MarkedGraph {
    let core_n = core.n();
    let mut edges: Vec<Edge> = core.edges().collect();
    let mut host_of = Vec::new();
    let mut roots = BTreeMap::new();
    let mut kept = BTreeMap::new();
    let mut next = core_n;
    for (&host, code) in codes {
        assert!(host < core_n, "gadget host {host} is not a core vertex");
        if code.rounds.is_empty() {
            continue;
        }
        let tree = encode_gadget(code);
        edges.push((host, next));
        edges.extend(tree.edges().map(|(a, b)| (a + next, b + next)));
        host_of.extend(std::iter::repeat_n(host, tree.n()));
        roots.insert(host, next);
        kept.insert(host, code.clone());
        next += tree.n();
    }
    let mg = MarkedGraph {
        graph: Graph::from_edges_unchecked(next, edges),
        core_n,
        input_n,
        host_of,
        roots,
        codes: kept,
        original_edges: original,
    };
    debug_assert_eq!(mg.check_invariants(), Ok(()));
    mg
}
