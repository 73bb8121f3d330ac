//! Subgraph monomorphism search between a pattern slice and a target slice.

use std::collections::BTreeMap;

use crate::dataflow::{DfgNode, SlicedGraph};
use crate::source::{qualify, types_equal, ParseResult};

/// Injective maps from pattern node ids to target node ids.
pub type Embedding = BTreeMap<usize, usize>;

/// Enumerates every injective map of `pattern_nodes` into `target_nodes`
/// such that `compatible` holds per node and every pattern edge lands on a
/// target edge. Results come in lexicographic order of the target ids
/// assigned to `pattern_nodes` in the given order. Stops after `limit`
/// results.
pub fn enumerate_embeddings(
    pattern_nodes: &[usize],
    pattern_edges: &[(usize, usize)],
    target_nodes: &[usize],
    target_edge: &dyn Fn(usize, usize) -> bool,
    compatible: &dyn Fn(usize, usize) -> bool,
    limit: usize,
) -> Vec<Embedding> {
    let mut out = Vec::new();
    let mut current = Embedding::new();
    search(
        pattern_nodes,
        pattern_edges,
        target_nodes,
        target_edge,
        compatible,
        limit,
        &mut current,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    pattern_nodes: &[usize],
    pattern_edges: &[(usize, usize)],
    target_nodes: &[usize],
    target_edge: &dyn Fn(usize, usize) -> bool,
    compatible: &dyn Fn(usize, usize) -> bool,
    limit: usize,
    current: &mut Embedding,
    out: &mut Vec<Embedding>,
) {
    if out.len() >= limit {
        return;
    }
    let Some(&p) = pattern_nodes.get(current.len()) else {
        out.push(current.clone());
        return;
    };
    for &t in target_nodes {
        if current.values().any(|&v| v == t) || !compatible(p, t) {
            continue;
        }
        let consistent = pattern_edges.iter().all(|&(u, v)| {
            let mu = if u == p { Some(t) } else { current.get(&u).copied() };
            let mv = if v == p { Some(t) } else { current.get(&v).copied() };
            match (mu, mv) {
                (Some(a), Some(b)) => target_edge(a, b),
                _ => true,
            }
        });
        if consistent {
            current.insert(p, t);
            search(pattern_nodes, pattern_edges, target_nodes, target_edge, compatible, limit, current, out);
            current.remove(&p);
        }
    }
}

/// Label compatibility of a non-focal pattern node with a target node:
/// same statement kind and header, and equal declared types when both
/// sides declare one.
pub fn labels_compatible(p: &DfgNode, pfile: &ParseResult, t: &DfgNode, tfile: &ParseResult) -> bool {
    if p.label.kind != t.label.kind || p.header != t.header {
        return false;
    }
    match (&p.label.def_type, &t.label.def_type) {
        (Some(a), Some(b)) => types_equal(&qualify(pfile, a), &qualify(tfile, b)),
        _ => true,
    }
}

/// All embeddings of the kept part of `pattern` into the kept part of
/// `target`, focal onto focal.
pub fn slice_embeddings(
    pattern: &SlicedGraph,
    pfile: &ParseResult,
    target: &SlicedGraph,
    tfile: &ParseResult,
    limit: usize,
) -> Vec<Embedding> {
    let mut pnodes = vec![pattern.focal];
    pnodes.extend(pattern.kept.iter().copied().filter(|&n| n != pattern.focal));
    let pedges: Vec<(usize, usize)> = pattern.kept_edges().map(|e| (e.0, e.1)).collect();
    let tnodes: Vec<usize> = target.kept.iter().copied().collect();
    let target_edge = |a: usize, b: usize| target.base.has_edge(a, b);
    let compatible = |p: usize, t: usize| {
        if p == pattern.focal || t == target.focal {
            return p == pattern.focal && t == target.focal;
        }
        labels_compatible(&pattern.base.nodes[p], pfile, &target.base.nodes[t], tfile)
    };
    enumerate_embeddings(&pnodes, &pedges, &tnodes, &target_edge, &compatible, limit)
}

/// Checks the monomorphism invariant of a finished embedding.
pub fn verify_embedding(pattern: &SlicedGraph, target: &SlicedGraph, e: &Embedding) -> bool {
    let injective = {
        let mut seen: Vec<usize> = e.values().copied().collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    };
    injective
        && e.get(&pattern.focal) == Some(&target.focal)
        && pattern.kept.iter().all(|p| e.get(p).is_some_and(|t| target.kept.contains(t)))
        && pattern
            .kept_edges()
            .all(|&(u, v, _)| target.base.has_edge(e[&u], e[&v]))
}
