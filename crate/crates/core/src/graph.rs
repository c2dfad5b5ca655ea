//! Simple undirected graphs over dense vertex indices.
//!
//! A [`Graph`] is an immutable value: every transformation returns a new
//! graph. Adjacency lists are kept sorted so that iteration order is fully
//! deterministic, which the reducer relies on for reproducible traces.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Dense vertex index in `[0, n)`.
pub type VertexId = usize;

/// An unordered pair, always stored with the smaller endpoint first.
pub type Edge = (VertexId, VertexId);

#[inline]
pub(crate) fn normalize(u: VertexId, v: VertexId) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge iterator, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::Range { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
            m += 1;
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = normalize(u, w[0]);
                return Err(Error::DuplicateEdge(a, b));
            }
        }
        let g = Graph { adj, m };
        g.debug_check();
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but for edges already known to be valid
    /// and duplicate-free. Panics on violation.
    pub(crate) fn from_edges_unchecked<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = Edge>,
    {
        Self::from_edges(n, edges).expect("internal edge set must be simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.n()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| v <= u);
            list[start..].iter().map(move |&v| (u, v))
        })
    }

    pub fn edge_list(&self) -> EdgeList {
        EdgeList(self.edges().collect())
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    /// Returns a copy with `extra` edges added. Every extra edge must be a
    /// non-edge of `self`.
    pub fn with_edges(&self, extra: &[Edge]) -> Result<Graph> {
        Graph::from_edges(self.n(), self.edges().chain(extra.iter().copied()))
    }

    /// Returns a copy with `k` fresh isolated vertices appended.
    pub fn with_vertices(&self, k: usize) -> Graph {
        let mut adj = self.adj.clone();
        adj.extend(std::iter::repeat_with(Vec::new).take(k));
        Graph { adj, m: self.m }
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v));
        Graph::from_edges_unchecked(n, edges.collect::<Vec<_>>())
    }

    /// Places `other` after `self`; returns the union and the offset applied
    /// to `other`'s vertices.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, usize) {
        let offset = self.n();
        let edges = self
            .edges()
            .chain(other.edges().map(|(u, v)| (u + offset, v + offset)));
        (
            Graph::from_edges_unchecked(offset + other.n(), edges.collect::<Vec<_>>()),
            offset,
        )
    }

    /// Subgraph induced by `vertices`. New indices follow ascending order of
    /// the selected old indices.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Result<InducedSubgraph> {
        let n = self.n();
        let mut keep: Vec<VertexId> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&v| v >= n) {
            return Err(Error::Range { vertex: bad, n });
        }
        let mut old_to_new = vec![None; n];
        for (i, &v) in keep.iter().enumerate() {
            old_to_new[v] = Some(i);
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in &self.adj[v] {
                if let Some(j) = old_to_new[w] {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        Ok(InducedSubgraph {
            graph: Graph::from_edges_unchecked(keep.len(), edges),
            old_to_new,
            new_to_old: keep,
        })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[VertexId]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length must equal n");
        let edges: Vec<Edge> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges_unchecked(self.n(), edges)
    }

    /// Canonical edge-list text: `n m` header then one `u v` line per edge.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the canonical edge-list format. Endpoints may appear in either
    /// order; blank trailing lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::Syntax {
            line: 1,
            message: "missing header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines.by_ref() {
            if edges.len() == m {
                return Err(Error::Syntax {
                    line,
                    message: format!("more than the {m} declared edges"),
                });
            }
            let [u, v] = parse_pair(line, body)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Syntax {
                line: hline,
                message: format!("header declares {m} edges but {} were given", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    pub(crate) fn debug_check(&self) {
        if cfg!(debug_assertions) {
            let mut total = 0;
            for (u, list) in self.adj.iter().enumerate() {
                total += list.len();
                debug_assert!(list.windows(2).all(|w| w[0] < w[1]), "unsorted adjacency");
                for &v in list {
                    debug_assert_ne!(u, v, "self-loop");
                    debug_assert!(self.adj[v].binary_search(&u).is_ok(), "asymmetric");
                }
            }
            debug_assert_eq!(total, 2 * self.m);
        }
    }
}

fn parse_pair(line: usize, body: &str) -> Result<[usize; 2]> {
    let mut it = body.split_whitespace();
    let mut out = [0usize; 2];
    for slot in out.iter_mut() {
        let tok = it.next().ok_or_else(|| Error::Syntax {
            line,
            message: "expected two integers".into(),
        })?;
        *slot = tok.parse().map_err(|_| Error::Syntax {
            line,
            message: format!("bad token {tok:?}"),
        })?;
    }
    if let Some(tok) = it.next() {
        return Err(Error::Syntax {
            line,
            message: format!("unexpected token {tok:?}"),
        });
    }
    Ok(out)
}

impl FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Graph::parse_edge_list(s)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges().collect::<Vec<_>>())
    }
}

impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Graph", 3)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("m", &self.m())?;
        st.serialize_field("edges", &self.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>())?;
        st.end()
    }
}

pub struct InducedSubgraph {
    pub graph: Graph,
    /// `old_to_new[v]` is `Some(i)` iff `v` was selected.
    pub old_to_new: Vec<Option<VertexId>>,
    pub new_to_old: Vec<VertexId>,
}

/// Membership bitmap over `[0, n)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            mask: vec![false; n],
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            mask: vec![true; n],
            len: n,
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(n: usize, it: I) -> Result<Self> {
        let mut s = VertexSet::new(n);
        for v in it {
            if v >= n {
                return Err(Error::Range { vertex: v, n });
            }
            s.insert(v);
        }
        Ok(s)
    }

    /// Size of the universe this set lives in.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        let fresh = !self.mask[v];
        if fresh {
            self.mask[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        let had = self.mask[v];
        if had {
            self.mask[v] = false;
            self.len -= 1;
        }
        had
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

/// Unordered vertex pairs without duplicates, in insertion order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct EdgeList(Vec<Edge>);

impl EdgeList {
    pub fn new() -> Self {
        EdgeList(Vec::new())
    }

    /// Inserts `(u, v)` normalized; returns false if it was already present.
    pub fn push(&mut self, u: VertexId, v: VertexId) -> bool {
        assert_ne!(u, v, "edge list entries must join distinct vertices");
        let e = normalize(u, v);
        if self.0.contains(&e) {
            false
        } else {
            self.0.push(e);
            true
        }
    }

    pub fn as_slice(&self) -> &[Edge] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.0.iter()
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        self.0.contains(&normalize(u, v))
    }

    pub fn sorted(&self) -> Vec<Edge> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }
}

impl FromIterator<Edge> for EdgeList {
    fn from_iter<T: IntoIterator<Item = Edge>>(iter: T) -> Self {
        let mut out = EdgeList::new();
        for (u, v) in iter {
            out.push(u, v);
        }
        out
    }
}

impl Serialize for EdgeList {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|&(u, v)| [u, v]))
    }
}
