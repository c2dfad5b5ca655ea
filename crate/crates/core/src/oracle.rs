//! Exhaustive ground truth: isomorphism search, automorphism orbits and
//! labeled-graph enumeration.
//!
//! The search is plain backtracking in vertex order `0..n` with candidates
//! tried in ascending order, so the first mapping returned is the
//! lexicographically smallest isomorphism. Colour refinement (starting from
//! degrees) is used only to discard branches that cannot extend; it never
//! prunes a feasible branch, so the search stays exact.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

/// Default guard on the number of (core) vertices for orbit computation.
pub const DEFAULT_ORBIT_BUDGET: usize = 10;

/// Environment variable that overrides [`DEFAULT_ORBIT_BUDGET`].
pub const BUDGET_ENV: &str = "EXT63_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_orbit_vertices: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_orbit_vertices: DEFAULT_ORBIT_BUDGET,
        }
    }
}

impl OracleConfig {
    /// Default configuration, with the orbit guard taken from
    /// `EXT63_BUDGET` when it is set to an integer.
    pub fn from_env() -> Self {
        let mut cfg = OracleConfig::default();
        if let Some(b) = std::env::var(BUDGET_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            cfg.max_orbit_vertices = b;
        }
        cfg
    }
}

/// Bijection from the vertices of one graph to another; `image(v)` is the
/// vertex that `v` maps to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct VertexMapping(Vec<VertexId>);

impl VertexMapping {
    pub fn new(images: Vec<VertexId>) -> Self {
        VertexMapping(images)
    }

    pub fn identity(n: usize) -> Self {
        VertexMapping((0..n).collect())
    }

    pub fn image(&self, v: VertexId) -> VertexId {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_bijection(&self, n: usize) -> bool {
        if self.0.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        self.0
            .iter()
            .all(|&w| w < n && !std::mem::replace(&mut seen[w], true))
    }

    /// Independent certificate check: `uv ∈ E1 ⇔ f(u)f(v) ∈ E2`.
    pub fn is_isomorphism(&self, g1: &Graph, g2: &Graph) -> bool {
        if g1.n() != g2.n() || g1.m() != g2.m() || !self.is_bijection(g1.n()) {
            return false;
        }
        // Equal edge counts plus an injective edge image gives both directions.
        g1.edges().all(|(u, v)| g2.has_edge(self.0[u], self.0[v]))
    }
}

/// Automorphism orbits as sorted cells, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OrbitPartition(Vec<Vec<VertexId>>);

impl OrbitPartition {
    pub fn from_cells(mut cells: Vec<Vec<VertexId>>) -> Self {
        for c in cells.iter_mut() {
            c.sort_unstable();
        }
        cells.retain(|c| !c.is_empty());
        cells.sort();
        OrbitPartition(cells)
    }

    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Colour refinement over a pair of graphs sharing one colour namespace.
struct Refiner<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
}

impl Refiner<'_> {
    /// Refines `c1`/`c2` to the coarsest stable colouring below them.
    /// Returns false when the colour class sizes of the two sides diverge.
    fn refine(&self, c1: &mut [u32], c2: &mut [u32]) -> bool {
        let mut classes = count_classes(c1, c2);
        loop {
            let mut ids: HashMap<(u32, Vec<u32>), u32> = HashMap::new();
            let next1 = relabel(self.g1, c1, &mut ids);
            let next2 = relabel(self.g2, c2, &mut ids);
            c1.copy_from_slice(&next1);
            c2.copy_from_slice(&next2);
            if !histograms_match(c1, c2) {
                return false;
            }
            let now = ids.len();
            if now == classes {
                return true;
            }
            classes = now;
        }
    }
}

fn relabel(g: &Graph, c: &[u32], ids: &mut HashMap<(u32, Vec<u32>), u32>) -> Vec<u32> {
    (0..g.n())
        .map(|v| {
            let mut nb: Vec<u32> = g.neighbors(v).iter().map(|&w| c[w]).collect();
            nb.sort_unstable();
            let fresh = ids.len() as u32;
            *ids.entry((c[v], nb)).or_insert(fresh)
        })
        .collect()
}

fn count_classes(c1: &[u32], c2: &[u32]) -> usize {
    let mut all: Vec<u32> = c1.iter().chain(c2).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn histograms_match(c1: &[u32], c2: &[u32]) -> bool {
    let mut h: HashMap<u32, i64> = HashMap::new();
    for &c in c1 {
        *h.entry(c).or_default() += 1;
    }
    for &c in c2 {
        *h.entry(c).or_default() -= 1;
    }
    h.values().all(|&x| x == 0)
}

struct Search<'a> {
    refiner: Refiner<'a>,
    n: usize,
}

impl Search<'_> {
    fn run(&self, mut c1: Vec<u32>, mut c2: Vec<u32>) -> Option<Vec<VertexId>> {
        if !self.refiner.refine(&mut c1, &mut c2) {
            return None;
        }
        self.descend(c1, c2)
    }

    fn descend(&self, c1: Vec<u32>, c2: Vec<u32>) -> Option<Vec<VertexId>> {
        let mut size: HashMap<u32, usize> = HashMap::new();
        for &c in &c1 {
            *size.entry(c).or_default() += 1;
        }
        let Some(v) = (0..self.n).find(|&v| size[&c1[v]] > 1) else {
            return self.discrete_mapping(&c1, &c2);
        };
        let fresh = c1.iter().chain(&c2).copied().max().unwrap_or(0) + 1;
        for w in (0..self.n).filter(|&w| c2[w] == c1[v]) {
            let mut n1 = c1.clone();
            let mut n2 = c2.clone();
            n1[v] = fresh;
            n2[w] = fresh;
            if self.refiner.refine(&mut n1, &mut n2) {
                if let Some(m) = self.descend(n1, n2) {
                    return Some(m);
                }
            }
        }
        None
    }

    fn discrete_mapping(&self, c1: &[u32], c2: &[u32]) -> Option<Vec<VertexId>> {
        let pos: HashMap<u32, VertexId> = c2.iter().enumerate().map(|(w, &c)| (c, w)).collect();
        let map: Vec<VertexId> = c1.iter().map(|c| pos[c]).collect();
        let ok = self
            .refiner
            .g1
            .edges()
            .all(|(u, v)| self.refiner.g2.has_edge(map[u], map[v]));
        ok.then_some(map)
    }
}

fn degree_colours(g: &Graph) -> Vec<u32> {
    (0..g.n()).map(|v| g.degree(v) as u32).collect()
}

/// Exact isomorphism test; returns the first isomorphism in search order.
pub fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<VertexMapping> {
    find_isomorphism_coloured(g1, &vec![0; g1.n()], g2, &vec![0; g2.n()])
}

/// Isomorphism search restricted to colour-preserving mappings.
pub fn find_isomorphism_coloured(
    g1: &Graph,
    colours1: &[u32],
    g2: &Graph,
    colours2: &[u32],
) -> Option<VertexMapping> {
    if g1.n() != g2.n() || g1.m() != g2.m() || g1.degree_sequence() != g2.degree_sequence() {
        return None;
    }
    let (c1, c2) = seed_colours(g1, colours1, g2, colours2);
    let search = Search {
        refiner: Refiner { g1, g2 },
        n: g1.n(),
    };
    let found = search.run(c1, c2).map(VertexMapping);
    debug_assert!(found.as_ref().is_none_or(|m| m.is_isomorphism(g1, g2)));
    found
}

fn seed_colours(g1: &Graph, col1: &[u32], g2: &Graph, col2: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut go = |g: &Graph, col: &[u32]| -> Vec<u32> {
        degree_colours(g)
            .into_iter()
            .zip(col)
            .map(|(d, &c)| {
                let fresh = ids.len() as u32;
                *ids.entry((c, d)).or_insert(fresh)
            })
            .collect()
    };
    let a = go(g1, col1);
    let b = go(g2, col2);
    (a, b)
}

/// Searches for an automorphism of `g` sending `from` to `to`.
fn automorphism_moving(g: &Graph, base: &[u32], from: VertexId, to: VertexId) -> Option<Vec<VertexId>> {
    let fresh = base.iter().copied().max().unwrap_or(0) + 1;
    let mut c1 = base.to_vec();
    let mut c2 = base.to_vec();
    c1[from] = fresh;
    c2[to] = fresh;
    let search = Search {
        refiner: Refiner { g1: g, g2: g },
        n: g.n(),
    };
    search.run(c1, c2)
}

/// Exact orbit partition of `Aut(g)`, guarded by the orbit budget.
pub fn automorphism_orbits(g: &Graph) -> Result<OrbitPartition> {
    automorphism_orbits_with(g, &OracleConfig::from_env())
}

pub fn automorphism_orbits_with(g: &Graph, cfg: &OracleConfig) -> Result<OrbitPartition> {
    let all: Vec<VertexId> = g.vertices().collect();
    orbits_on(g, &all, cfg)
}

/// Orbits of `Aut(g)` restricted to `interest` (e.g. the core vertices of a
/// gadget-bearing graph). The budget applies to `interest.len()`.
pub fn orbits_on(g: &Graph, interest: &[VertexId], cfg: &OracleConfig) -> Result<OrbitPartition> {
    if interest.len() > cfg.max_orbit_vertices {
        return Err(Error::BudgetExceeded(format!(
            "orbit computation on {} vertices exceeds the guard of {}",
            interest.len(),
            cfg.max_orbit_vertices
        )));
    }
    let n = g.n();
    let mut uf = UnionFind::new(n);
    let mut base = degree_colours(g);
    let mut base2 = base.clone();
    Refiner { g1: g, g2: g }.refine(&mut base, &mut base2);

    for (i, &v) in interest.iter().enumerate() {
        for &w in &interest[i + 1..] {
            if base[v] != base[w] || uf.find(v) == uf.find(w) {
                continue;
            }
            if let Some(sigma) = automorphism_moving(g, &base, v, w) {
                for (x, &y) in sigma.iter().enumerate() {
                    uf.union(x, y);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for &v in interest {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    Ok(OrbitPartition::from_cells(groups.into_values().collect()))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Largest `n` accepted by [`enumerate_graphs`].
pub const MAX_ENUMERATION_N: usize = 7;

/// All `2^(n(n-1)/2)` labeled graphs on `n` vertices. Bit `k` of the mask
/// selects the `k`-th pair in lexicographic order `(0,1), (0,2), …`.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::BudgetExceeded(format!(
            "exhaustive enumeration is limited to n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    let pairs: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let total: u64 = 1 << pairs.len();
    Ok((0..total).map(move |mask| graph_from_mask(n, &pairs, mask)))
}

fn graph_from_mask(n: usize, pairs: &[Edge], mask: u64) -> Graph {
    let edges: Vec<Edge> = pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &e)| e)
        .collect();
    Graph::from_edges_unchecked(n, edges)
}

/// Groups `graphs` into isomorphism classes; returns the class index of
/// each graph (classes numbered by first appearance).
pub fn isomorphism_classes(graphs: &[Graph]) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    let mut class = Vec::with_capacity(graphs.len());
    for (i, g) in graphs.iter().enumerate() {
        let found = reps
            .iter()
            .position(|&r| find_isomorphism(&graphs[r], g).is_some());
        match found {
            Some(c) => class.push(c),
            None => {
                class.push(reps.len());
                reps.push(i);
            }
        }
    }
    class
}
