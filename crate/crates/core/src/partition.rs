//! Simplicial and regular simplicial partitions of chordal graphs, the
//! star/spider structure between cells, and checks of the three structural
//! lemmas on such partitions.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::chordal::is_simplicial_in;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, VertexSet};

/// Ordered partition `S_1, …, S_q`. Cells are non-empty, disjoint, sorted,
/// and cover every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OrderedPartition {
    cells: Vec<Vec<VertexId>>,
}

impl OrderedPartition {
    /// Validates that `cells` partition `0..n`; sorts each cell.
    pub fn new(n: usize, mut cells: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for c in &mut cells {
            if c.is_empty() {
                return Err(Error::PreconditionFailed("empty cell".into()));
            }
            c.sort_unstable();
            for &v in c.iter() {
                if v >= n {
                    return Err(Error::Range { vertex: v, n });
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::PreconditionFailed(format!("vertex {v} appears twice")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::PreconditionFailed(format!("vertex {v} is not covered")));
        }
        Ok(OrderedPartition { cells })
    }

    pub fn cells(&self) -> &[Vec<VertexId>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn n(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// `cell_of[v]` is the index of the cell holding `v`.
    pub fn cell_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n()];
        for (i, c) in self.cells.iter().enumerate() {
            for &v in c {
                out[v] = i;
            }
        }
        out
    }

    /// Vertices of `S_i ∪ … ∪ S_q`.
    pub fn suffix(&self, i: usize) -> VertexSet {
        VertexSet::from_vertices(self.n(), self.cells[i..].iter().flatten().copied()).expect("in range")
    }

    /// Cells as an unordered family, for comparison with orbit partitions.
    pub fn unordered(&self) -> Vec<Vec<VertexId>> {
        let mut c = self.cells.clone();
        c.sort();
        c
    }

    /// Image of the partition under the relabeling `v -> perm[v]`.
    pub fn permuted(&self, perm: &[VertexId]) -> Self {
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let mut d: Vec<VertexId> = c.iter().map(|&v| perm[v]).collect();
                d.sort_unstable();
                d
            })
            .collect();
        OrderedPartition { cells }
    }
}

/// Peels all simplicial vertices repeatedly. A vertex can only turn
/// simplicial once a neighbour is peeled, so each layer after the first is
/// sought among the neighbours of the previous one.
pub fn coarsest_simplicial_partition(g: &Graph) -> Result<OrderedPartition> {
    let n = g.n();
    let mut alive = VertexSet::full(n);
    let mut cells = Vec::new();
    let mut candidates: Vec<VertexId> = (0..n).collect();
    while !alive.is_empty() {
        let layer: Vec<VertexId> = candidates
            .iter()
            .copied()
            .filter(|&v| is_simplicial_in(g, v, &alive))
            .collect();
        if layer.is_empty() {
            return Err(Error::NotChordal { remaining: alive.len() });
        }
        for &v in &layer {
            alive.remove(v);
        }
        candidates = layer
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&w| alive.contains(w))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        cells.push(layer);
    }
    Ok(OrderedPartition { cells })
}

/// Sparse row of neighbour counts per cell: `(cell, count)` with count > 0,
/// ascending by cell.
type CountRow = Vec<(usize, u32)>;

fn count_row(g: &Graph, v: VertexId, cell_of: &[usize]) -> CountRow {
    count_row_by(g, v, |w| cell_of[w])
}

fn count_row_by(g: &Graph, v: VertexId, cell: impl Fn(VertexId) -> usize) -> CountRow {
    let mut ids: Vec<usize> = g.neighbors(v).iter().map(|&w| cell(w)).collect();
    ids.sort_unstable();
    let mut row: CountRow = Vec::new();
    for id in ids {
        match row.last_mut() {
            Some((c, k)) if *c == id => *k += 1,
            _ => row.push((id, 1)),
        }
    }
    row
}

/// Lexicographic order of the dense vectors the sparse rows stand for.
fn dense_cmp(a: &CountRow, b: &CountRow) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return match x.0.cmp(&y.0) {
                // `a` is non-zero at a position where `b` is zero.
                Ordering::Less => Ordering::Greater,
                Ordering::Greater => Ordering::Less,
                Ordering::Equal => x.1.cmp(&y.1),
            };
        }
    }
    a.len().cmp(&b.len())
}

/// One simultaneous regularity split of every cell. Returns `None` when
/// already regular.
#[cfg(test)]
fn split_once(g: &Graph, cells: &[Vec<VertexId>]) -> Option<Vec<Vec<VertexId>>> {
    let all = vec![true; cells.len()];
    split_marked(g, cells, &all).map(|(c, _)| c)
}

/// Splits the cells flagged in `check` by their count rows; other cells are
/// kept whole. Returns the new cells and, per new cell, whether it is a
/// piece of a cell that split.
#[cfg(test)]
fn split_marked(g: &Graph, cells: &[Vec<VertexId>], check: &[bool]) -> Option<(Vec<Vec<VertexId>>, Vec<bool>)> {
    let mut cell_of = vec![0; g.n()];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            cell_of[v] = i;
        }
    }
    let mut out = Vec::with_capacity(cells.len());
    let mut split = Vec::with_capacity(cells.len());
    let mut changed = false;
    for (c, &chk) in cells.iter().zip(check) {
        if !chk || c.len() == 1 {
            out.push(c.clone());
            split.push(false);
            continue;
        }
        let mut groups: HashMap<CountRow, Vec<VertexId>> = HashMap::new();
        for &v in c {
            groups.entry(count_row(g, v, &cell_of)).or_default().push(v);
        }
        let pieces = groups.len() > 1;
        changed |= pieces;
        let mut groups: Vec<(CountRow, Vec<VertexId>)> = groups.into_iter().collect();
        groups.sort_by(|a, b| dense_cmp(&a.0, &b.0));
        for (_, mut vs) in groups {
            vs.sort_unstable();
            out.push(vs);
            split.push(pieces);
        }
    }
    changed.then_some((out, split))
}

/// Repeated simultaneous splits until regular. After the first pass only
/// cells with a neighbour in a freshly split cell can split again: members
/// of any other cell agreed on every count before the pass and still do.
///
/// Cells carry stable ids so a pass costs time proportional to the cells it
/// inspects plus the number of cells, not the number of vertices.
fn regularize(g: &Graph, cells: Vec<Vec<VertexId>>) -> Vec<Vec<VertexId>> {
    let mut id_of = vec![0usize; g.n()];
    for (i, c) in cells.iter().enumerate() {
        for &v in c {
            id_of[v] = i;
        }
    }
    let mut members: Vec<Vec<VertexId>> = cells;
    let mut order: Vec<usize> = (0..members.len()).collect();
    let mut pos = order.clone();
    let mut check: Vec<usize> = order.clone();
    loop {
        // Groupings are computed against the partition at the start of the pass.
        let mut splits: Vec<(usize, Vec<Vec<VertexId>>)> = Vec::new();
        check.sort_unstable_by_key(|&id| pos[id]);
        for &id in &check {
            if members[id].len() == 1 {
                continue;
            }
            let mut rows: Vec<(CountRow, VertexId)> = members[id]
                .iter()
                .map(|&v| (count_row_by(g, v, |w| pos[id_of[w]]), v))
                .collect();
            if rows.iter().all(|r| r.0 == rows[0].0) {
                continue;
            }
            rows.sort_by(|a, b| dense_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
            let mut pieces: Vec<Vec<VertexId>> = Vec::new();
            for (k, (row, v)) in rows.iter().enumerate() {
                if k == 0 || *row != rows[k - 1].0 {
                    pieces.push(Vec::new());
                }
                pieces.last_mut().expect("piece").push(*v);
            }
            splits.push((id, pieces));
        }
        if splits.is_empty() {
            break;
        }
        let mut replaced: Vec<Option<Vec<usize>>> = vec![None; members.len()];
        let mut fresh = Vec::new();
        for (id, pieces) in splits {
            let mut ids = Vec::with_capacity(pieces.len());
            for (k, piece) in pieces.into_iter().enumerate() {
                let nid = if k == 0 {
                    id
                } else {
                    members.push(Vec::new());
                    members.len() - 1
                };
                for &v in &piece {
                    id_of[v] = nid;
                }
                members[nid] = piece;
                ids.push(nid);
                fresh.push(nid);
            }
            replaced[id] = Some(ids);
        }
        let mut next_order = Vec::with_capacity(members.len());
        for id in order {
            match replaced[id].take() {
                Some(ids) => next_order.extend(ids),
                None => next_order.push(id),
            }
        }
        order = next_order;
        pos.resize(members.len(), 0);
        for (i, &id) in order.iter().enumerate() {
            pos[id] = i;
        }
        let mut next = vec![false; members.len()];
        for &id in &fresh {
            for &v in &members[id] {
                for &w in g.neighbors(v) {
                    next[id_of[w]] = true;
                }
            }
        }
        check = (0..members.len()).filter(|&id| next[id]).collect();
    }
    order.into_iter().map(|id| std::mem::take(&mut members[id])).collect()
}

/// Splits every cell not wholly simplicial in its suffix into its simplicial
/// part followed by the rest. Returns `None` when nothing moves.
fn simplicial_reorder(g: &Graph, cells: &[Vec<VertexId>]) -> Result<Option<Vec<Vec<VertexId>>>> {
    let mut alive = VertexSet::full(g.n());
    let mut out = Vec::with_capacity(cells.len());
    let mut changed = false;
    let mut pending: Vec<Vec<VertexId>> = cells.iter().rev().cloned().collect();
    while let Some(c) = pending.pop() {
        let (simp, rest): (Vec<_>, Vec<_>) = c.iter().partition(|&&v| is_simplicial_in(g, v, &alive));
        if simp.is_empty() {
            return Err(Error::NotChordal { remaining: alive.len() });
        }
        for &v in &simp {
            alive.remove(v);
        }
        out.push(simp);
        if !rest.is_empty() {
            changed = true;
            pending.push(rest);
        }
    }
    Ok(changed.then_some(out))
}

/// Fixpoint of regularity splits and simplicial reorders, starting from the
/// coarsest simplicial partition. Split parts are ordered by ascending
/// neighbour-count vector.
pub fn coarsest_regular_simplicial_partition(g: &Graph) -> Result<OrderedPartition> {
    let mut cells = coarsest_simplicial_partition(g)?.cells;
    loop {
        cells = regularize(g, cells);
        match simplicial_reorder(g, &cells)? {
            Some(next) => cells = next,
            None => break,
        }
    }
    let p = OrderedPartition { cells };
    debug_assert!(is_regular_simplicial(g, &p));
    Ok(p)
}

pub fn is_simplicial_partition(g: &Graph, p: &OrderedPartition) -> bool {
    if p.n() != g.n() || OrderedPartition::new(g.n(), p.cells.clone()).is_err() {
        return false;
    }
    let mut alive = VertexSet::full(g.n());
    for c in &p.cells {
        if !c.iter().all(|&v| is_simplicial_in(g, v, &alive)) {
            return false;
        }
        for &v in c {
            alive.remove(v);
        }
    }
    true
}

pub fn is_regular(g: &Graph, p: &OrderedPartition) -> bool {
    let cell_of = p.cell_of();
    p.cells.iter().all(|c| {
        let first = count_row(g, c[0], &cell_of);
        c[1..].iter().all(|&v| count_row(g, v, &cell_of) == first)
    })
}

pub fn is_regular_simplicial(g: &Graph, p: &OrderedPartition) -> bool {
    is_simplicial_partition(g, p) && is_regular(g, p)
}

/// Shape of `G(S_i ∪ S_j)` for adjacent cells `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CellPairStructure {
    /// Disjoint isomorphic stars with centers in `S_j`.
    Stars {
        center_size: usize,
        r: usize,
        leaf_block_size: usize,
    },
    SpiderThin { t: usize },
    SpiderThick { t: usize },
    Other,
}

impl CellPairStructure {
    pub fn is_spider(self) -> bool {
        matches!(self, CellPairStructure::SpiderThin { .. } | CellPairStructure::SpiderThick { .. })
    }
}

/// Component shape with `leaves` from `S_i` and `centers` from `S_j`.
fn component_shape(g: &Graph, leaves: &[VertexId], centers: &[VertexId]) -> CellPairStructure {
    let clique = |vs: &[VertexId]| vs.iter().enumerate().all(|(a, &x)| vs[a + 1..].iter().all(|&y| g.has_edge(x, y)));
    if leaves.is_empty() || centers.is_empty() || !clique(centers) {
        return CellPairStructure::Other;
    }
    // Star: every leaf sees the whole center; leaves form equal disjoint cliques.
    if leaves.iter().all(|&l| centers.iter().all(|&c| g.has_edge(l, c))) {
        let mut block = vec![usize::MAX; leaves.len()];
        let mut sizes = Vec::new();
        for s in 0..leaves.len() {
            if block[s] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            let members: Vec<usize> = (0..leaves.len())
                .filter(|&t| t == s || g.has_edge(leaves[s], leaves[t]))
                .collect();
            for &t in &members {
                block[t] = id;
            }
            sizes.push(members.len());
        }
        let ok = (0..leaves.len()).all(|a| {
            (a + 1..leaves.len()).all(|b| g.has_edge(leaves[a], leaves[b]) == (block[a] == block[b]))
        });
        if ok && sizes.iter().all(|&s| s == sizes[0]) {
            return CellPairStructure::Stars {
                center_size: centers.len(),
                r: sizes.len(),
                leaf_block_size: sizes[0],
            };
        }
        return CellPairStructure::Other;
    }
    let t = leaves.len();
    if t != centers.len() || t < 2 {
        return CellPairStructure::Other;
    }
    if leaves.iter().enumerate().any(|(a, &x)| leaves[a + 1..].iter().any(|&y| g.has_edge(x, y))) {
        return CellPairStructure::Other;
    }
    let seen = |l: VertexId| centers.iter().filter(|&&c| g.has_edge(l, c)).count();
    let matched = |pick: &dyn Fn(VertexId, VertexId) -> bool| {
        let mut used = vec![false; t];
        leaves.iter().all(|&l| {
            let hits: Vec<usize> = (0..t).filter(|&k| pick(l, centers[k])).collect();
            hits.len() == 1 && !std::mem::replace(&mut used[hits[0]], true)
        })
    };
    if leaves.iter().all(|&l| seen(l) == 1) && matched(&|l, c| g.has_edge(l, c)) {
        return CellPairStructure::SpiderThin { t };
    }
    if leaves.iter().all(|&l| seen(l) == t - 1) && matched(&|l, c| !g.has_edge(l, c)) {
        return CellPairStructure::SpiderThick { t };
    }
    CellPairStructure::Other
}

/// Connected components of `G(S_i ∪ S_j)`, each split into its `S_i` and
/// `S_j` parts.
fn pair_components(
    g: &Graph,
    p: &OrderedPartition,
    cell_of: &[usize],
    i: usize,
    j: usize,
) -> Vec<(Vec<VertexId>, Vec<VertexId>)> {
    let inside = |v: VertexId| cell_of[v] == i || cell_of[v] == j;
    let mut comp: HashMap<VertexId, usize> = HashMap::new();
    let mut out: Vec<(Vec<VertexId>, Vec<VertexId>)> = Vec::new();
    for &s in p.cells[i].iter().chain(&p.cells[j]) {
        if comp.contains_key(&s) {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp.insert(s, id);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        while let Some(v) = stack.pop() {
            if cell_of[v] == i {
                a.push(v);
            } else {
                b.push(v);
            }
            for &w in g.neighbors(v) {
                if inside(w) && !comp.contains_key(&w) {
                    comp.insert(w, id);
                    stack.push(w);
                }
            }
        }
        a.sort_unstable();
        b.sort_unstable();
        out.push((a, b));
    }
    out
}

pub fn cells_adjacent(g: &Graph, p: &OrderedPartition, i: usize, j: usize) -> bool {
    let cell_of = p.cell_of();
    p.cells[i].iter().any(|&v| g.neighbors(v).iter().any(|&w| cell_of[w] == j))
}

/// All adjacent cell pairs `(i, j)`, `i < j`, ascending.
fn adjacent_pairs(g: &Graph, cell_of: &[usize]) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = g
        .edges()
        .filter_map(|(u, v)| {
            let (a, b) = (cell_of[u], cell_of[v]);
            (a != b).then_some((a.min(b), a.max(b)))
        })
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

fn classify_with(g: &Graph, p: &OrderedPartition, cell_of: &[usize], i: usize, j: usize) -> CellPairStructure {
    let mut shape = None;
    for (leaves, centers) in pair_components(g, p, cell_of, i, j) {
        let s = component_shape(g, &leaves, &centers);
        if s == CellPairStructure::Other || shape.is_some_and(|t| t != s) {
            return CellPairStructure::Other;
        }
        shape = Some(s);
    }
    shape.unwrap_or(CellPairStructure::Other)
}

/// Classifies `G(S_i ∪ S_j)` with the `S_j` vertices as centers. A P4 is a
/// thin spider.
pub fn classify_cell_pair(g: &Graph, p: &OrderedPartition, i: usize, j: usize) -> Result<CellPairStructure> {
    if i >= j || j >= p.len() {
        return Err(Error::PreconditionFailed(format!("need cell indices i < j < {}, got {i}, {j}", p.len())));
    }
    if !cells_adjacent(g, p, i, j) {
        return Err(Error::NotAdjacent(i, j));
    }
    Ok(classify_with(g, p, &p.cell_of(), i, j))
}

/// Every adjacent pair `i < j` with its structure.
pub fn classify_all_pairs(g: &Graph, p: &OrderedPartition) -> Vec<((usize, usize), CellPairStructure)> {
    let cell_of = p.cell_of();
    adjacent_pairs(g, &cell_of)
        .into_iter()
        .map(|(i, j)| ((i, j), classify_with(g, p, &cell_of, i, j)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
    pub u: Option<VertexId>,
    pub w: Option<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub checked: usize,
    pub failures: Vec<LemmaWitness>,
}

impl LemmaOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, w: impl FnOnce() -> LemmaWitness) {
        self.checked += 1;
        if !ok {
            self.failures.push(w());
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma1: LemmaOutcome,
    pub lemma2: LemmaOutcome,
    pub lemma3: LemmaOutcome,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.lemma1.passed() && self.lemma2.passed() && self.lemma3.passed()
    }
}

fn neighbours_in(g: &Graph, v: VertexId, cell: &[VertexId]) -> Vec<VertexId> {
    cell.iter().copied().filter(|&x| g.has_edge(v, x)).collect()
}

/// Checks the three lemmas on a regular simplicial partition.
///
/// Lemma 1: adjacent `S_i, S_j` (`i < j`) induce isomorphic stars or
/// spiders centred in `S_j`. Lemma 2: for a spider pair and any other cell
/// `S_k`, `k > i`, adjacent to `S_i`, matched `u_l, w_l` have equal
/// neighbourhoods in `S_k`. Lemma 3: when every later cell adjacent to `S_i`
/// forms stars with it and `S_j` is the first of them, adjacent `u ∈ S_i`,
/// `w ∈ S_j` have equal neighbourhoods in every other such `S_k`.
pub fn verify_babel_lemmas(g: &Graph, p: &OrderedPartition) -> Result<LemmaReport> {
    if !is_regular_simplicial(g, p) {
        return Err(Error::PreconditionFailed("partition is not regular simplicial".into()));
    }
    let q = p.len();
    let cell_of = p.cell_of();
    let mut report = LemmaReport::default();
    let pairs = classify_all_pairs(g, p);
    let shape: HashMap<(usize, usize), CellPairStructure> = pairs.iter().copied().collect();
    let mut later_of: Vec<Vec<usize>> = vec![Vec::new(); q];
    for &((i, j), _) in &pairs {
        later_of[i].push(j);
    }
    for &((i, j), s) in &pairs {
        report.lemma1.record(s != CellPairStructure::Other, || LemmaWitness { i, j, k: None, u: None, w: None });
    }
    for i in 0..q {
        let later = &later_of[i];
        for &j in later {
            let s = shape[&(i, j)];
            if !s.is_spider() {
                continue;
            }
            let thin = matches!(s, CellPairStructure::SpiderThin { .. });
            for (leaves, centers) in pair_components(g, p, &cell_of, i, j) {
                for &u in &leaves {
                    let w = centers
                        .iter()
                        .copied()
                        .find(|&c| g.has_edge(u, c) == thin && centers.iter().filter(|&&d| g.has_edge(u, d) == thin).count() == 1)
                        .expect("spider pairing");
                    for &k in later.iter().filter(|&&k| k != j) {
                        let ok = neighbours_in(g, u, &p.cells[k]) == neighbours_in(g, w, &p.cells[k]);
                        report.lemma2.record(ok, || LemmaWitness { i, j, k: Some(k), u: Some(u), w: Some(w) });
                    }
                }
            }
        }
        if later.is_empty() || !later.iter().all(|&k| matches!(shape[&(i, k)], CellPairStructure::Stars { .. })) {
            continue;
        }
        let j = later[0];
        for &u in &p.cells[i] {
            for w in neighbours_in(g, u, &p.cells[j]) {
                for &k in &later[1..] {
                    let ok = neighbours_in(g, u, &p.cells[k]) == neighbours_in(g, w, &p.cells[k]);
                    report.lemma3.record(ok, || LemmaWitness { i, j, k: Some(k), u: Some(u), w: Some(w) });
                }
            }
        }
    }
    Ok(report)
}

/// Label-invariant summary of a regular simplicial partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PartitionSignature {
    pub q: usize,
    pub sizes: Vec<usize>,
    /// Row `i`: `(j, |N_j(x)|)` for `x ∈ S_i`, non-zero entries only.
    pub counts: Vec<Vec<(usize, u32)>>,
    pub pairs: Vec<((usize, usize), CellPairStructure)>,
}

impl PartitionSignature {
    pub fn count_matrix(&self) -> Vec<Vec<u32>> {
        self.counts
            .iter()
            .map(|row| {
                let mut d = vec![0; self.q];
                for &(j, c) in row {
                    d[j] = c;
                }
                d
            })
            .collect()
    }
}

pub fn partition_signature(g: &Graph, p: &OrderedPartition) -> Result<PartitionSignature> {
    if !is_regular_simplicial(g, p) {
        return Err(Error::PreconditionFailed("partition is not regular simplicial".into()));
    }
    let cell_of = p.cell_of();
    Ok(PartitionSignature {
        q: p.len(),
        sizes: p.cells.iter().map(Vec::len).collect(),
        counts: p.cells.iter().map(|c| count_row(g, c[0], &cell_of)).collect(),
        pairs: classify_all_pairs(g, p),
    })
}
