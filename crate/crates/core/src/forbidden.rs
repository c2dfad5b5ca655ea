//! The five forbidden 6-vertex graphs, their fix sets, induced-occurrence
//! search and membership in the extended chordal (6,3) class.
//!
//! Template vertices are numbered `0..6`; in the drawings they are `1..6`.
//!
//! * `H1`: outer pair `{0,1}` on center `2`, center edge `2–3`, outer pair
//!   `{4,5}` on center `3`. The optional edges are `0–1` and `4–5`; the
//!   variant with exactly one of them uses `0–1`.
//! * `H2`: tips `0` and `5`, middles `{1,2,3,4}` forming a `K4`; tip `0`
//!   sees `1,2` and tip `5` sees `3,4`.
//! * `H3`: `H2` without edge `1–3`.
//!
//! Every 6-subset of a host graph induces one of 2^15 labeled graphs, so the
//! search is a table lookup per subset. The table maps each labeled 6-vertex
//! graph to the first template (in kind order) it is isomorphic to, together
//! with the lexicographically smallest embedding.

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::chordal::{check_chordal, ChordalityVerdict};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{Edge, EdgeList, Graph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ForbiddenKind {
    H1NoDashed,
    H1OneDashed,
    H1BothDashed,
    H2,
    H3,
}

impl ForbiddenKind {
    pub const ALL: [ForbiddenKind; 5] = [
        ForbiddenKind::H1NoDashed,
        ForbiddenKind::H1OneDashed,
        ForbiddenKind::H1BothDashed,
        ForbiddenKind::H2,
        ForbiddenKind::H3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ForbiddenKind::H1NoDashed => "H1_no_dashed",
            ForbiddenKind::H1OneDashed => "H1_one_dashed",
            ForbiddenKind::H1BothDashed => "H1_both_dashed",
            ForbiddenKind::H2 => "H2",
            ForbiddenKind::H3 => "H3",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        ForbiddenKind::ALL.into_iter().find(|k| k.name().to_ascii_lowercase() == key)
    }

    pub fn is_h1(self) -> bool {
        matches!(
            self,
            ForbiddenKind::H1NoDashed | ForbiddenKind::H1OneDashed | ForbiddenKind::H1BothDashed
        )
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ForbiddenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ForbiddenKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeRole {
    Type1,
    Type2,
}

#[derive(Clone, Debug)]
pub struct ForbiddenTemplate {
    pub kind: ForbiddenKind,
    pub pattern: Graph,
    pub roles: [NodeRole; 6],
    pub fixes: [Edge; 4],
}

impl ForbiddenTemplate {
    /// The pattern with its fix set added.
    pub fn fixed(&self) -> Graph {
        self.pattern
            .with_edges(&self.fixes)
            .expect("fix pairs are non-edges of the pattern")
    }
}

const H1_BASE: [Edge; 5] = [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)];
const H1_FIXES: [Edge; 4] = [(0, 3), (1, 3), (2, 4), (2, 5)];
const H2_EDGES: [Edge; 10] = [
    (0, 1),
    (0, 2),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
    (3, 5),
    (4, 5),
];
const H2_FIXES: [Edge; 4] = [(0, 3), (0, 4), (1, 5), (2, 5)];

fn build_catalog() -> Vec<ForbiddenTemplate> {
    use NodeRole::{Type1 as T1, Type2 as T2};
    let h1_roles = [T1, T1, T2, T2, T1, T1];
    let h2_roles = [T1, T2, T2, T2, T2, T1];
    let h1 = |extra: &[Edge]| {
        Graph::from_edges_unchecked(6, H1_BASE.iter().chain(extra).copied().collect::<Vec<_>>())
    };
    let h3_edges: Vec<Edge> = H2_EDGES.iter().copied().filter(|&e| e != (1, 3)).collect();
    vec![
        ForbiddenTemplate {
            kind: ForbiddenKind::H1NoDashed,
            pattern: h1(&[]),
            roles: h1_roles,
            fixes: H1_FIXES,
        },
        ForbiddenTemplate {
            kind: ForbiddenKind::H1OneDashed,
            pattern: h1(&[(0, 1)]),
            roles: h1_roles,
            fixes: H1_FIXES,
        },
        ForbiddenTemplate {
            kind: ForbiddenKind::H1BothDashed,
            pattern: h1(&[(0, 1), (4, 5)]),
            roles: h1_roles,
            fixes: H1_FIXES,
        },
        ForbiddenTemplate {
            kind: ForbiddenKind::H2,
            pattern: Graph::from_edges_unchecked(6, H2_EDGES),
            roles: h2_roles,
            fixes: H2_FIXES,
        },
        ForbiddenTemplate {
            kind: ForbiddenKind::H3,
            pattern: Graph::from_edges_unchecked(6, h3_edges),
            roles: h2_roles,
            fixes: H2_FIXES,
        },
    ]
}

/// The five templates. The first call checks that every pattern is found as
/// its own kind and that every fix pair is a non-edge of the pattern.
pub fn catalog() -> &'static [ForbiddenTemplate] {
    static CATALOG: OnceLock<Vec<ForbiddenTemplate>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let cat = build_catalog();
        for t in &cat {
            let m = lookup(&t.pattern, &[0, 1, 2, 3, 4, 5]);
            assert_eq!(m.map(|m| m.kind), Some(t.kind), "{} does not match itself", t.kind);
            for (a, b) in t.fixes {
                assert!(!t.pattern.has_edge(a, b), "{} fix {a}-{b} is a pattern edge", t.kind);
            }
        }
        cat
    })
}

pub fn template(kind: ForbiddenKind) -> &'static ForbiddenTemplate {
    &catalog()[kind.index()]
}

/// Bit index of pair `(i, j)`, `i < j < 6`, in lexicographic pair order.
const fn pair_bit(i: usize, j: usize) -> usize {
    // Offsets of rows 0..5 in the 15-pair enumeration.
    const ROW: [usize; 6] = [0, 5, 9, 12, 14, 15];
    ROW[i] + (j - i - 1)
}

fn mask_of(edges: impl IntoIterator<Item = Edge>) -> u16 {
    edges.into_iter().fold(0u16, |m, (a, b)| {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        m | 1 << pair_bit(i, j)
    })
}

#[derive(Clone, Copy)]
struct Match {
    kind: ForbiddenKind,
    /// `embed[t]` is the subset position that template vertex `t` lands on.
    embed: [u8; 6],
}

fn table() -> &'static [Option<Match>] {
    static TABLE: OnceLock<Vec<Option<Match>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Option<Match>> = vec![None; 1 << 15];
        for tpl in build_catalog() {
            for perm in (0..6u8).permutations(6) {
                let mask = mask_of(tpl.pattern.edges().map(|(a, b)| (perm[a] as usize, perm[b] as usize)));
                if t[mask as usize].is_none() {
                    let mut embed = [0u8; 6];
                    embed.copy_from_slice(&perm);
                    t[mask as usize] = Some(Match { kind: tpl.kind, embed });
                }
            }
        }
        t
    })
}

fn lookup(g: &Graph, verts: &[VertexId; 6]) -> Option<Match> {
    let mut mask = 0u16;
    for i in 0..6 {
        for j in i + 1..6 {
            if g.has_edge(verts[i], verts[j]) {
                mask |= 1 << pair_bit(i, j);
            }
        }
    }
    table()[mask as usize]
}

/// A located induced copy of a forbidden graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ForbiddenOccurrence {
    pub kind: ForbiddenKind,
    /// `embed[t]` is the host vertex playing template vertex `t`.
    pub embed: [VertexId; 6],
}

impl ForbiddenOccurrence {
    /// Host vertices in ascending order.
    pub fn verts(&self) -> [VertexId; 6] {
        let mut v = self.embed;
        v.sort_unstable();
        v
    }

    pub fn template(&self) -> &'static ForbiddenTemplate {
        template(self.kind)
    }

    pub fn role_of(&self, host: VertexId) -> Option<NodeRole> {
        let t = self.embed.iter().position(|&v| v == host)?;
        Some(self.template().roles[t])
    }

    /// Fix pairs mapped into the host, with the template roles of both ends.
    pub fn mapped_fixes(&self) -> impl Iterator<Item = (Edge, NodeRole, NodeRole)> + '_ {
        let tpl = self.template();
        tpl.fixes
            .iter()
            .map(move |&(a, b)| ((self.embed[a], self.embed[b]), tpl.roles[a], tpl.roles[b]))
    }

    /// True iff `embed` is an induced-subgraph isomorphism into `host`.
    pub fn is_valid_in(&self, host: &Graph) -> bool {
        let pat = &self.template().pattern;
        let mut uniq = self.verts().to_vec();
        uniq.dedup();
        uniq.len() == 6
            && uniq.iter().all(|&v| v < host.n())
            && (0..6).all(|a| {
                (a + 1..6).all(|b| pat.has_edge(a, b) == host.has_edge(self.embed[a], self.embed[b]))
            })
    }
}

impl Serialize for ForbiddenOccurrence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ForbiddenOccurrence", 2)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("verts", &self.verts())?;
        st.end()
    }
}

/// Every induced occurrence avoiding `excluded`, ordered by sorted host
/// tuple. Each 6-set matches at most one kind since the templates are
/// pairwise non-isomorphic.
pub fn find_occurrences(g: &Graph, excluded: &VertexSet) -> Vec<ForbiddenOccurrence> {
    find_occurrences_with(g, excluded, Execution::default())
}

pub fn find_occurrences_with(
    g: &Graph,
    excluded: &VertexSet,
    exec: Execution,
) -> Vec<ForbiddenOccurrence> {
    let cand: Vec<VertexId> = g.vertices().filter(|&v| !excluded.contains(v)).collect();
    let k = cand.len();
    if k < 6 {
        return Vec::new();
    }
    let rows = AdjBits::new(g, &cand);
    let table = table();
    let per_first = exec.map_range(0..k - 5, |i0| {
        let mut out = Vec::new();
        let mut idx = [i0, 0, 0, 0, 0, 0];
        scan(&rows, table, &cand, &mut idx, 1, 0, &mut out);
        out
    });
    per_first.into_iter().flatten().collect()
}

/// Adjacency among the candidate vertices as bit rows.
struct AdjBits {
    words: usize,
    bits: Vec<u64>,
}

impl AdjBits {
    fn new(g: &Graph, cand: &[VertexId]) -> Self {
        let k = cand.len();
        let words = k.div_ceil(64);
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in cand.iter().enumerate() {
            local[v] = i;
        }
        let mut bits = vec![0u64; k * words];
        for (i, &v) in cand.iter().enumerate() {
            for &w in g.neighbors(v) {
                let j = local[w];
                if j != usize::MAX {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        AdjBits { words, bits }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }
}

fn scan(
    rows: &AdjBits,
    table: &[Option<Match>],
    cand: &[VertexId],
    idx: &mut [usize; 6],
    depth: usize,
    mask: u16,
    out: &mut Vec<ForbiddenOccurrence>,
) {
    let k = cand.len();
    if depth == 6 {
        if let Some(m) = table[mask as usize] {
            let mut embed = [0; 6];
            for t in 0..6 {
                embed[t] = cand[idx[m.embed[t] as usize]];
            }
            out.push(ForbiddenOccurrence { kind: m.kind, embed });
        }
        return;
    }
    for i in idx[depth - 1] + 1..=k - (6 - depth) {
        let mut mk = mask;
        for (p, &prev) in idx[..depth].iter().enumerate() {
            if rows.get(prev, i) {
                mk |= 1 << pair_bit(p, depth);
            }
        }
        idx[depth] = i;
        scan(rows, table, cand, idx, depth + 1, mk, out);
    }
}

/// The occurrence's fix pairs mapped into `host`. Fails if any is already
/// an edge, which cannot happen for a valid induced occurrence.
pub fn fix_edges(host: &Graph, occ: &ForbiddenOccurrence) -> Result<EdgeList> {
    let mut out = EdgeList::new();
    for ((u, v), _, _) in occ.mapped_fixes() {
        if host.has_edge(u, v) {
            return Err(Error::AlreadyPresent(u.min(v), u.max(v)));
        }
        out.push(u, v);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NotChordal(Vec<VertexId>),
    HasForbidden(ForbiddenOccurrence),
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// Chordal and free of all five forbidden induced subgraphs.
pub fn is_extended_class(g: &Graph) -> Membership {
    if let ChordalityVerdict::NotChordal(hole) = check_chordal(g) {
        return Membership::NotChordal(hole);
    }
    match find_occurrences(g, &VertexSet::new(g.n())).into_iter().next() {
        Some(occ) => Membership::HasForbidden(occ),
        None => Membership::Member,
    }
}

/// Number of 4-subsets of `s` inducing a chordless path.
pub fn count_induced_p4s(g: &Graph, s: &VertexSet) -> usize {
    s.iter()
        .combinations(4)
        .filter(|q| {
            let mut deg = [0usize; 4];
            let mut m = 0;
            for a in 0..4 {
                for b in a + 1..4 {
                    if g.has_edge(q[a], q[b]) {
                        deg[a] += 1;
                        deg[b] += 1;
                        m += 1;
                    }
                }
            }
            deg.sort_unstable();
            m == 3 && deg == [1, 1, 2, 2]
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, path};
    use crate::oracle::find_isomorphism;

    fn k6_minus(missing: &[Edge]) -> Graph {
        let edges: Vec<Edge> = complete(6).edges().filter(|e| !missing.contains(e)).collect();
        Graph::from_edges_unchecked(6, edges)
    }

    #[test]
    fn pair_bits_are_a_bijection() {
        let mut seen = [false; 15];
        for i in 0..6 {
            for j in i + 1..6 {
                assert!(!std::mem::replace(&mut seen[pair_bit(i, j)], true));
            }
        }
    }

    #[test]
    fn h2_and_h3_shapes() {
        let h2 = template(ForbiddenKind::H2);
        assert_eq!(h2.pattern.m(), 10);
        assert_eq!(h2.fixed(), k6_minus(&[(0, 5)]));
        let h3 = template(ForbiddenKind::H3);
        assert_eq!(h3.pattern.m(), 9);
        assert!(h3.pattern.edges().all(|(u, v)| h2.pattern.has_edge(u, v)));
        assert_eq!(h3.fixed(), k6_minus(&[(0, 5), (1, 3)]));
    }

    #[test]
    fn templates_pairwise_distinct() {
        let cat = catalog();
        for (i, a) in cat.iter().enumerate() {
            for b in &cat[i + 1..] {
                assert!(find_isomorphism(&a.pattern, &b.pattern).is_none());
            }
        }
    }

    #[test]
    fn fixed_templates_are_members_except_h3() {
        for t in catalog() {
            let m = is_extended_class(&t.fixed());
            if t.kind == ForbiddenKind::H3 {
                // K6 minus two disjoint edges contains an induced C4.
                let Membership::NotChordal(hole) = m else { panic!("{m:?}") };
                assert_eq!(hole.len(), 4);
            } else {
                assert_eq!(m, Membership::Member, "{}", t.kind);
            }
        }
    }

    #[test]
    fn occurrence_in_pattern_itself() {
        for t in catalog() {
            let occ = find_occurrences(&t.pattern, &VertexSet::new(6));
            assert_eq!(occ.len(), 1);
            assert_eq!(occ[0].kind, t.kind);
            assert!(occ[0].is_valid_in(&t.pattern));
        }
    }

    #[test]
    fn complete_graph_has_none() {
        assert!(find_occurrences(&complete(6), &VertexSet::new(6)).is_empty());
        assert!(find_occurrences(&complete(8), &VertexSet::new(8)).is_empty());
    }

    #[test]
    fn h1_plus_isolated_vertex() {
        let h1 = &template(ForbiddenKind::H1NoDashed).pattern;
        let (g, _) = h1.disjoint_union(&Graph::empty(1));
        let occ = find_occurrences(&g, &VertexSet::new(7));
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].verts(), [0, 1, 2, 3, 4, 5]);
        // Shifted so the isolated vertex comes first.
        let (g2, _) = Graph::empty(1).disjoint_union(h1);
        assert_eq!(find_occurrences(&g2, &VertexSet::new(7))[0].verts(), [1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn exclusion_is_respected() {
        let h2 = &template(ForbiddenKind::H2).pattern;
        let mut ex = VertexSet::new(6);
        ex.insert(3);
        assert!(find_occurrences(h2, &ex).is_empty());
    }

    #[test]
    fn fixes_for_identity_embeddings() {
        let h1 = template(ForbiddenKind::H1NoDashed);
        let occ = ForbiddenOccurrence { kind: h1.kind, embed: [0, 1, 2, 3, 4, 5] };
        let f = fix_edges(&h1.pattern, &occ).unwrap();
        assert_eq!(f.sorted(), vec![(0, 3), (1, 3), (2, 4), (2, 5)]);
        let h2 = template(ForbiddenKind::H2);
        let occ = ForbiddenOccurrence { kind: h2.kind, embed: [0, 1, 2, 3, 4, 5] };
        assert_eq!(fix_edges(&h2.pattern, &occ).unwrap().sorted(), vec![(0, 3), (0, 4), (1, 5), (2, 5)]);
        for t in catalog() {
            assert_eq!(t.fixes.len(), 4);
        }
    }

    #[test]
    fn fix_on_wrong_host_is_rejected() {
        let occ = ForbiddenOccurrence { kind: ForbiddenKind::H2, embed: [0, 1, 2, 3, 4, 5] };
        assert_eq!(fix_edges(&complete(6), &occ), Err(Error::AlreadyPresent(0, 3)));
    }

    #[test]
    fn membership_examples() {
        assert!(is_extended_class(&k6_minus(&[(0, 1)])).is_member());
        assert!(matches!(is_extended_class(&cycle(4)), Membership::NotChordal(_)));
        match is_extended_class(&template(ForbiddenKind::H3).pattern) {
            Membership::HasForbidden(o) => assert_eq!(o.kind, ForbiddenKind::H3),
            m => panic!("unexpected {m:?}"),
        }
    }

    #[test]
    fn p4_counts() {
        assert_eq!(count_induced_p4s(&path(4), &VertexSet::full(4)), 1);
        assert_eq!(count_induced_p4s(&complete(4), &VertexSet::full(4)), 0);
        assert_eq!(count_induced_p4s(&cycle(5), &VertexSet::full(5)), 5);
    }

    #[test]
    fn names_round_trip() {
        for k in ForbiddenKind::ALL {
            assert_eq!(ForbiddenKind::from_name(k.name()), Some(k));
        }
        assert_eq!(ForbiddenKind::from_name("h1-both-dashed"), Some(ForbiddenKind::H1BothDashed));
    }
}
