//! Small graph families and seeded random generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Graph, VertexId};

/// The RNG used everywhere a seed is accepted.
pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges_unchecked(n, (1..n).map(|v| (v - 1, v)).collect::<Vec<_>>())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    let mut edges: Vec<Edge> = (1..n).map(|v| (v - 1, v)).collect();
    edges.push((0, n - 1));
    Graph::from_edges_unchecked(n, edges)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges_unchecked(n, edges)
}

/// `K_{1,leaves}` with the center at vertex 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges_unchecked(leaves + 1, (1..=leaves).map(|v| (0, v)).collect::<Vec<_>>())
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_gnp(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges_unchecked(n, edges)
}

/// Uniform random graph on `n` vertices with exactly `m` edges.
pub fn random_gnm(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    let mut pairs: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    assert!(m <= pairs.len(), "too many edges requested");
    pairs.shuffle(rng);
    pairs.truncate(m);
    Graph::from_edges_unchecked(n, pairs)
}

/// Random chordal graph: each new vertex is joined to a random clique of the
/// graph built so far, so the reverse insertion order is a perfect
/// elimination ordering.
pub fn random_chordal(n: usize, rng: &mut impl Rng) -> Graph {
    let mut adj: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut edges = Vec::new();
    for v in 0..n {
        let mut clique: Vec<VertexId> = Vec::new();
        if v > 0 && rng.gen_bool(0.85) {
            let seed = rng.gen_range(0..v);
            clique.push(seed);
            let mut cand = adj[seed].clone();
            cand.shuffle(rng);
            for w in cand {
                if rng.gen_bool(0.6) && clique.iter().all(|&c| adj[c].contains(&w)) {
                    clique.push(w);
                }
            }
        }
        adj.push(Vec::new());
        for &c in &clique {
            adj[c].push(v);
            adj[v].push(c);
            edges.push((c, v));
        }
    }
    Graph::from_edges_unchecked(n, edges)
}

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Vec<VertexId> {
    let mut p: Vec<VertexId> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Spider on `2t` vertices: center clique `t..2t`, legs `0..t`, leg `l`
/// matched to center `t + l`. Thin legs see only their match; thick legs see
/// every center vertex except their match.
pub fn spider(t: usize, thin: bool) -> Graph {
    let mut edges = Vec::new();
    for a in t..2 * t {
        for b in a + 1..2 * t {
            edges.push((a, b));
        }
    }
    for l in 0..t {
        for k in 0..t {
            if (l == k) == thin {
                edges.push((l, t + k));
            }
        }
    }
    Graph::from_edges_unchecked(2 * t, edges)
}
