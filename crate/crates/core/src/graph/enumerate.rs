//! Exhaustive enumeration of enhanced level graphs for a stratum.
//!
//! The search runs over vertex counts, level assignments, genus
//! distributions, labeled-leg placements, edge multisets and enhancement
//! solutions of the vertex equations, then deduplicates by canonical form.
//! Emission order is deterministic.

use super::{Edge, EdgeEnd, EnhancedLevelGraph, GraphError, Leg, Vertex};
use crate::signature::Signature;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Two levels, no horizontal edges: the vertical boundary divisors.
    TwoLevel,
    /// One level, exactly one horizontal edge.
    OneHorizontal,
    /// Everything with at most the given number of levels and edges.
    AllUpTo { levels: usize, edges: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Abort with BoundsTooLarge after this many candidate graphs.
    pub max_candidates: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            max_vertices: 8,
            max_edges: 8,
            max_candidates: 20_000_000,
        }
    }
}

pub fn enumerate_boundary_graphs(
    sig: &Signature,
    mode: BoundaryMode,
    limits: &EnumLimits,
) -> Result<Vec<EnhancedLevelGraph>, GraphError> {
    if !sig.finite_area {
        return Err(GraphError::Malformed(
            "boundary enumeration expects a finite-area signature".into(),
        ));
    }
    let (num_levels, max_edges, allow_horizontal, exact_horizontal) = match mode {
        BoundaryMode::TwoLevel => (2, derived_edge_bound(sig, limits), false, None),
        BoundaryMode::OneHorizontal => (1, 1, true, Some(1)),
        BoundaryMode::AllUpTo { levels, edges } => {
            (levels, edges.min(limits.max_edges), true, None)
        }
    };
    let mut out: Vec<EnhancedLevelGraph> = Vec::new();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut budget = Budget {
        remaining: limits.max_candidates,
    };
    for levels in 1..=num_levels {
        if matches!(mode, BoundaryMode::TwoLevel) && levels != 2 {
            continue;
        }
        if matches!(mode, BoundaryMode::OneHorizontal) && levels != 1 {
            continue;
        }
        enumerate_with_levels(
            sig,
            levels,
            max_edges,
            allow_horizontal,
            exact_horizontal,
            limits,
            &mut budget,
            &mut |g| {
                let key = g.canonical_form();
                if seen.insert(key) {
                    out.push(g);
                }
            },
        )?;
    }
    Ok(out)
}

/// Edge bound for two-level graphs: every bottom vertex satisfies
/// sum(kappa) = sum(leg orders) - k(2g_w - 2) - k e_w >= e_w, and bottom
/// vertices without positive-order legs are genus-carrying, so
/// (k+1) E <= sum of positive orders + 2k (n + g).
fn derived_edge_bound(sig: &Signature, limits: &EnumLimits) -> usize {
    let pos: i64 = sig.mu.iter().filter(|&&m| m > 0).sum();
    let bound = (pos + 2 * sig.k * (sig.mu.len() as i64 + sig.g)) / (sig.k + 1);
    (bound.max(0) as usize).min(limits.max_edges)
}

struct Budget {
    remaining: u64,
}

impl Budget {
    fn spend(&mut self) -> Result<(), GraphError> {
        if self.remaining == 0 {
            return Err(GraphError::BoundsTooLarge);
        }
        self.remaining -= 1;
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn enumerate_with_levels(
    sig: &Signature,
    levels: usize,
    max_edges: usize,
    allow_horizontal: bool,
    exact_horizontal: Option<usize>,
    limits: &EnumLimits,
    budget: &mut Budget,
    emit: &mut impl FnMut(EnhancedLevelGraph),
) -> Result<(), GraphError> {
    let n = sig.mu.len();
    // Stability and the genus budget bound the vertex count: at most
    // g - b1 vertices carry genus, every genus-0 vertex needs 3 of the
    // n + 2E half-edges, which collapses to V <= n + 2g - 2.
    let vmax = limits
        .max_vertices
        .min(((n as i64 + 2 * sig.g - 2).max(1)) as usize);
    for num_v in levels..=vmax {
        for level_assign in level_assignments(num_v, levels) {
            let min_edges = num_v.saturating_sub(1);
            for num_e in min_edges..=max_edges {
                let b1 = num_e as i64 - num_v as i64 + 1;
                let genus_budget = sig.g - b1;
                if genus_budget < 0 {
                    continue;
                }
                for genera in compositions(genus_budget, num_v) {
                    for legs in leg_assignments(n, num_v) {
                        // Quick stability screen: genus-0 vertices need
                        // at least 3 half-edges; legs alone may already
                        // satisfy it, edges are added below.
                        for pairs in edge_multisets(
                            &level_assign,
                            num_e,
                            allow_horizontal,
                            exact_horizontal,
                        ) {
                            budget.spend()?;
                            if !connected(num_v, &pairs) {
                                continue;
                            }
                            solve_kappa(sig, &level_assign, &genera, &legs, &pairs, &mut |g| {
                                debug_assert!(g.validate(sig).is_ok(), "enumerator emitted invalid graph");
                                emit(g)
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Surjective level assignments onto {0,..,-(levels-1)}, vertex by vertex.
fn level_assignments(num_v: usize, levels: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; num_v];
    fn rec(num_v: usize, levels: usize, i: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == num_v {
            let used: BTreeSet<i64> = cur.iter().copied().collect();
            if used.len() == levels {
                out.push(cur.clone());
            }
            return;
        }
        for lv in 0..levels {
            cur[i] = -(lv as i64);
            rec(num_v, levels, i + 1, cur, out);
        }
    }
    rec(num_v, levels, 0, &mut cur, &mut out);
    out
}

/// All ways to write `total` as an ordered sum of `parts` nonnegative ints.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; parts];
    fn rec(total: i64, parts: usize, i: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == parts - 1 {
            cur[i] = total;
            out.push(cur.clone());
            return;
        }
        for v in 0..=total {
            cur[i] = v;
            rec(total - v, parts, i + 1, cur, out);
        }
    }
    if parts == 0 {
        return out;
    }
    rec(total, parts, 0, &mut cur, &mut out);
    out
}

/// Labeled legs onto vertices: num_v^n assignments.
fn leg_assignments(n: usize, num_v: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    fn rec(n: usize, num_v: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..num_v {
            cur[i] = v;
            rec(n, num_v, i + 1, cur, out);
        }
    }
    rec(n, num_v, 0, &mut cur, &mut out);
    out
}

/// Sorted multisets of edge endpoint pairs. Vertical pairs are (upper,
/// lower); horizontal pairs (a, b) with a <= b, self-loops allowed.
fn edge_multisets(
    levels: &[i64],
    num_e: usize,
    allow_horizontal: bool,
    exact_horizontal: Option<usize>,
) -> Vec<Vec<(usize, usize)>> {
    let num_v = levels.len();
    let mut allowed: Vec<(usize, usize)> = Vec::new();
    for a in 0..num_v {
        for b in 0..num_v {
            if levels[a] > levels[b] {
                allowed.push((a, b));
            } else if allow_horizontal && levels[a] == levels[b] && a <= b {
                allowed.push((a, b));
            }
        }
    }
    let mut out = Vec::new();
    let mut cur: Vec<(usize, usize)> = Vec::new();
    fn rec(
        allowed: &[(usize, usize)],
        levels: &[i64],
        start: usize,
        left: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
        exact_horizontal: Option<usize>,
    ) {
        if left == 0 {
            if let Some(h) = exact_horizontal {
                let count = cur
                    .iter()
                    .filter(|&&(a, b)| levels[a] == levels[b])
                    .count();
                if count != h {
                    return;
                }
            }
            out.push(cur.clone());
            return;
        }
        for i in start..allowed.len() {
            cur.push(allowed[i]);
            rec(allowed, levels, i, left - 1, cur, out, exact_horizontal);
            cur.pop();
        }
    }
    rec(
        &allowed,
        levels,
        0,
        num_e,
        &mut cur,
        &mut out,
        exact_horizontal,
    );
    out
}

fn connected(num_v: usize, pairs: &[(usize, usize)]) -> bool {
    if num_v == 0 {
        return false;
    }
    if num_v == 1 {
        return true;
    }
    let mut seen = vec![false; num_v];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in pairs {
            if a == v && !seen[b] {
                seen[b] = true;
                stack.push(b);
            }
            if b == v && !seen[a] {
                seen[a] = true;
                stack.push(a);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Solve the vertex enhancement equations for the vertical edges, level by
/// level from the top; horizontal edges are fixed at kappa 0.
fn solve_kappa(
    sig: &Signature,
    levels: &[i64],
    genera: &[i64],
    legs: &[usize],
    pairs: &[(usize, usize)],
    emit: &mut impl FnMut(EnhancedLevelGraph),
) {
    let k = sig.k;
    let num_v = levels.len();
    let mut edge_ends = vec![0i64; num_v];
    for &(a, b) in pairs {
        edge_ends[a] += 1;
        edge_ends[b] += 1;
    }
    let mut leg_count = vec![0i64; num_v];
    let mut leg_orders = vec![0i64; num_v];
    for (i, &v) in legs.iter().enumerate() {
        leg_count[v] += 1;
        leg_orders[v] += sig.mu[i];
    }
    for v in 0..num_v {
        if genera[v] == 0 && edge_ends[v] + leg_count[v] < 3 {
            return;
        }
    }
    // Vertex equation, vertical part:
    // sum(kappa at v as upper) - sum(kappa at v as lower) = need_v
    // with need_v = k(2g_v - 2) - leg orders + k * (edge ends at v).
    let need: Vec<i64> = (0..num_v)
        .map(|v| k * (2 * genera[v] - 2) - leg_orders[v] + k * edge_ends[v])
        .collect();
    let vertical: Vec<usize> = (0..pairs.len())
        .filter(|&e| levels[pairs[e].0] != levels[pairs[e].1])
        .collect();
    // Vertices sorted by level, descending (top first). For a vertex at
    // level l, all edges with lower end at l have upper ends at higher
    // levels, already assigned when l is processed.
    let mut vertex_order: Vec<usize> = (0..num_v).collect();
    vertex_order.sort_by_key(|&v| (-levels[v], v));
    let mut kappa: Vec<i64> = vec![0; pairs.len()];
    rec_vertex(
        sig,
        levels,
        genera,
        legs,
        pairs,
        &vertical,
        &vertex_order,
        0,
        &need,
        &mut kappa,
        emit,
    );
}

#[allow(clippy::too_many_arguments)]
fn rec_vertex(
    sig: &Signature,
    levels: &[i64],
    genera: &[i64],
    legs: &[usize],
    pairs: &[(usize, usize)],
    vertical: &[usize],
    vertex_order: &[usize],
    vi: usize,
    need: &[i64],
    kappa: &mut Vec<i64>,
    emit: &mut impl FnMut(EnhancedLevelGraph),
) {
    if vi == vertex_order.len() {
        let g = build_graph(sig, levels, genera, legs, pairs, kappa);
        if let Some(g) = g {
            emit(g);
        }
        return;
    }
    let v = vertex_order[vi];
    // Edges with upper end at v, not yet assigned; edges with lower end at v
    // are assigned (their upper vertices precede v in the order).
    let uppers: Vec<usize> = vertical
        .iter()
        .copied()
        .filter(|&e| pairs[e].0 == v)
        .collect();
    let lower_sum: i64 = vertical
        .iter()
        .copied()
        .filter(|&e| pairs[e].1 == v)
        .map(|e| kappa[e])
        .sum();
    let target = need[v] + lower_sum;
    // Assign kappa >= 1 to each upper edge at v summing to target.
    if uppers.is_empty() {
        if target != 0 {
            return;
        }
        rec_vertex(
            sig, levels, genera, legs, pairs, vertical, vertex_order, vi + 1, need, kappa, emit,
        );
        return;
    }
    if target < uppers.len() as i64 {
        return;
    }
    distribute(target, &uppers, 0, kappa, &mut |kappa| {
        rec_vertex(
            sig, levels, genera, legs, pairs, vertical, vertex_order, vi + 1, need, kappa, emit,
        )
    });
}

/// All assignments of positive integers summing to `total` over `edges`.
fn distribute(
    total: i64,
    edges: &[usize],
    i: usize,
    kappa: &mut Vec<i64>,
    f: &mut impl FnMut(&mut Vec<i64>),
) {
    if i == edges.len() - 1 {
        kappa[edges[i]] = total;
        f(kappa);
        kappa[edges[i]] = 0;
        return;
    }
    let remaining = edges.len() as i64 - 1 - i as i64;
    for v in 1..=(total - remaining) {
        kappa[edges[i]] = v;
        distribute(total - v, edges, i + 1, kappa, f);
        kappa[edges[i]] = 0;
    }
}

fn build_graph(
    sig: &Signature,
    levels: &[i64],
    genera: &[i64],
    legs: &[usize],
    pairs: &[(usize, usize)],
    kappa: &[i64],
) -> Option<EnhancedLevelGraph> {
    let vertices: Vec<Vertex> = levels
        .iter()
        .zip(genera)
        .map(|(&level, &genus)| Vertex { genus, level })
        .collect();
    let edges: Vec<Edge> = pairs
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| Edge {
            ends: [
                EdgeEnd {
                    vertex: a,
                    kappa: kappa[e],
                },
                EdgeEnd {
                    vertex: b,
                    kappa: -kappa[e],
                },
            ],
        })
        .collect();
    let leg_list: Vec<Leg> = legs
        .iter()
        .enumerate()
        .map(|(label, &vertex)| Leg {
            vertex,
            label,
            order: sig.mu[label],
            kappa: sig.mu[label] + sig.k,
        })
        .collect();
    let g = EnhancedLevelGraph {
        k: sig.k,
        vertices,
        edges,
        legs: leg_list,
    };
    g.validate(sig).ok()?;
    Some(g)
}
