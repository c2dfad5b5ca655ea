//! Chordality recognition via lexicographic BFS, with self-certifying
//! verdicts: a perfect elimination ordering or a chordless cycle.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{Graph, VertexId, VertexSet};

/// A permutation of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EliminationOrder(Vec<VertexId>);

impl EliminationOrder {
    pub fn new(order: Vec<VertexId>) -> Self {
        EliminationOrder(order)
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }

    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn reversed(&self) -> Self {
        EliminationOrder(self.0.iter().rev().copied().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChordalityVerdict {
    /// Carries a verified perfect elimination ordering.
    Chordal(EliminationOrder),
    /// Carries a chordless cycle of length at least four, in cyclic order.
    NotChordal(Vec<VertexId>),
}

impl ChordalityVerdict {
    pub fn is_chordal(&self) -> bool {
        matches!(self, ChordalityVerdict::Chordal(_))
    }
}

/// Lexicographic BFS visiting order. Ties (including the start and every
/// restart on a new component) go to the smallest vertex index.
pub fn lex_bfs_order(g: &Graph) -> EliminationOrder {
    let n = g.n();
    // Ordered classes of unvisited vertices, each sorted ascending; the first
    // class holds the lexicographically largest labels.
    let mut classes: Vec<Vec<VertexId>> = if n == 0 { vec![] } else { vec![(0..n).collect()] };
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut mark = vec![false; n];
    while let Some(first) = classes.first_mut() {
        let v = first.remove(0);
        if first.is_empty() {
            classes.remove(0);
        }
        visited[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            mark[w] = true;
        }
        let mut next = Vec::with_capacity(classes.len() * 2);
        for class in classes.drain(..) {
            let (hit, miss): (Vec<_>, Vec<_>) = class.into_iter().partition(|&w| mark[w]);
            if !hit.is_empty() {
                next.push(hit);
            }
            if !miss.is_empty() {
                next.push(miss);
            }
        }
        for &w in g.neighbors(v) {
            mark[w] = false;
        }
        classes = next;
    }
    debug_assert!(visited.iter().all(|&b| b));
    EliminationOrder(order)
}

/// First violation of the perfect-elimination property: a vertex together
/// with two of its later neighbours that are not adjacent.
pub fn peo_violation(g: &Graph, order: &EliminationOrder) -> Option<(VertexId, VertexId, VertexId)> {
    let pos = order.positions();
    for &v in order.as_slice() {
        let later: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| pos[w] > pos[v])
            .collect();
        let Some(&parent) = later.iter().min_by_key(|&&w| pos[w]) else {
            continue;
        };
        if let Some(&x) = later.iter().find(|&&x| x != parent && !g.has_edge(parent, x)) {
            return Some((v, parent, x));
        }
    }
    None
}

/// Direct check: every vertex's later neighbours are pairwise adjacent.
pub fn is_perfect_elimination_order(g: &Graph, order: &EliminationOrder) -> bool {
    if order.as_slice().len() != g.n() {
        return false;
    }
    let pos = order.positions();
    if pos.contains(&usize::MAX) {
        return false;
    }
    g.vertices().all(|v| {
        let later: Vec<VertexId> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| pos[w] > pos[v])
            .collect();
        later
            .iter()
            .enumerate()
            .all(|(i, &a)| later[i + 1..].iter().all(|&b| g.has_edge(a, b)))
    })
}

pub fn check_chordal(g: &Graph) -> ChordalityVerdict {
    let peo = lex_bfs_order(g).reversed();
    match peo_violation(g, &peo) {
        None => {
            debug_assert!(is_perfect_elimination_order(g, &peo));
            ChordalityVerdict::Chordal(peo)
        }
        Some((v, a, b)) => {
            let hole = hole_through(g, v, a, b)
                .or_else(|| find_any_hole(g))
                .expect("a graph without a perfect elimination ordering has a hole");
            debug_assert!(is_chordless_cycle(g, &hole));
            ChordalityVerdict::NotChordal(hole)
        }
    }
}

/// Shortest `a`–`b` path avoiding the closed neighbourhood of `v` (except
/// `a`, `b`), closed up through `v`. Such a cycle is chordless.
fn hole_through(g: &Graph, v: VertexId, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
    let n = g.n();
    let mut blocked = vec![false; n];
    blocked[v] = true;
    for &w in g.neighbors(v) {
        blocked[w] = true;
    }
    blocked[a] = false;
    blocked[b] = false;
    let mut prev = vec![usize::MAX; n];
    prev[a] = a;
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            break;
        }
        for &y in g.neighbors(x) {
            if !blocked[y] && prev[y] == usize::MAX {
                // The direct edge a-b does not exist, so a path to b has length >= 2.
                if x == a && y == b {
                    continue;
                }
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    if prev[b] == usize::MAX {
        return None;
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    let mut cycle = vec![v];
    cycle.extend(path);
    Some(cycle)
}

fn find_any_hole(g: &Graph) -> Option<Vec<VertexId>> {
    for v in g.vertices() {
        let nb = g.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !g.has_edge(a, b) {
                    if let Some(h) = hole_through(g, v, a, b) {
                        return Some(h);
                    }
                }
            }
        }
    }
    None
}

/// True iff `cycle` lists at least four distinct vertices forming an induced cycle.
pub fn is_chordless_cycle(g: &Graph, cycle: &[VertexId]) -> bool {
    let k = cycle.len();
    if k < 4 {
        return false;
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return false;
    }
    (0..k).all(|i| {
        (i + 1..k).all(|j| {
            let consecutive = j == i + 1 || (i == 0 && j == k - 1);
            g.has_edge(cycle[i], cycle[j]) == consecutive
        })
    })
}

/// True iff the neighbours of `v` inside `alive` are pairwise adjacent.
pub fn is_simplicial_in(g: &Graph, v: VertexId, alive: &VertexSet) -> bool {
    let nb: Vec<VertexId> = g.neighbors(v).iter().copied().filter(|&w| alive.contains(w)).collect();
    nb.iter()
        .enumerate()
        .all(|(i, &a)| nb[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Vertices whose neighbourhood is a clique.
pub fn simplicial_vertices(g: &Graph) -> VertexSet {
    let all = VertexSet::full(g.n());
    VertexSet::from_vertices(g.n(), g.vertices().filter(|&v| is_simplicial_in(g, v, &all)))
        .expect("vertices are in range")
}
