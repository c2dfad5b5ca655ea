#![allow(dead_code)]

use ext63_core::forbidden::{ForbiddenKind, ForbiddenOccurrence, template};
use ext63_core::oracle::find_isomorphism;
use ext63_core::Graph;
use itertools::Itertools;

/// Every 6-subset, tested against each template with the exact oracle.
/// Returns (sorted host vertices, kind) pairs in subset order.
pub fn brute_force_occurrences(g: &Graph) -> Vec<([usize; 6], ForbiddenKind)> {
    let mut out = Vec::new();
    for s in (0..g.n()).combinations(6) {
        let sub = g.induced_subgraph(&s).unwrap().graph;
        for kind in ForbiddenKind::ALL {
            if find_isomorphism(&template(kind).pattern, &sub).is_some() {
                out.push((s.clone().try_into().unwrap(), kind));
            }
        }
    }
    out
}

pub fn summarize(found: &[ForbiddenOccurrence]) -> Vec<([usize; 6], ForbiddenKind)> {
    found.iter().map(|o| (o.verts(), o.kind)).collect()
}

/// Detector output equals brute force, and every embedding is a valid
/// induced isomorphism.
pub fn detector_agrees(g: &Graph) -> bool {
    let found = ext63_core::forbidden::find_occurrences(g, &ext63_core::VertexSet::new(g.n()));
    found.iter().all(|o| o.is_valid_in(g)) && summarize(&found) == brute_force_occurrences(g)
}
