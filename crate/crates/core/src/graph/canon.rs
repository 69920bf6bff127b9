//! Canonical labeling by iterative refinement plus minimal-serialization
//! search within the refined color classes. Graphs here are small (boundary
//! graphs of desk-scale strata), so the residual search is a product of tiny
//! factorials.

use super::{EnhancedLevelGraph, GraphError};
use std::collections::BTreeMap;

/// Decoration-preserving automorphism: a vertex permutation together with a
/// compatible edge bijection and per-edge end flips (only horizontal edges
/// can flip).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAut {
    pub vertex_perm: Vec<usize>,
    /// edge_map[e] = (image edge, flipped ends)
    pub edge_map: Vec<(usize, bool)>,
}

fn initial_colors(g: &EnhancedLevelGraph) -> Vec<Vec<i64>> {
    let mut colors = Vec::with_capacity(g.vertices.len());
    for v in 0..g.vertices.len() {
        let mut key = vec![g.vertices[v].level, g.vertices[v].genus];
        let mut legs: Vec<(usize, i64)> = g
            .legs
            .iter()
            .filter(|l| l.vertex == v)
            .map(|l| (l.label, l.order))
            .collect();
        legs.sort_unstable();
        key.push(legs.len() as i64);
        for (label, order) in legs {
            key.push(label as i64);
            key.push(order);
        }
        colors.push(key);
    }
    colors
}

fn refine(g: &EnhancedLevelGraph, colors: &mut Vec<usize>) {
    loop {
        let mut keys: Vec<Vec<i64>> = Vec::with_capacity(g.vertices.len());
        for v in 0..g.vertices.len() {
            let mut neigh: Vec<(i64, i64, i64)> = Vec::new();
            for e in &g.edges {
                for (side, end) in e.ends.iter().enumerate() {
                    if end.vertex == v {
                        let other = e.ends[1 - side];
                        neigh.push((end.kappa, other.kappa, colors[other.vertex] as i64));
                    }
                }
            }
            neigh.sort_unstable();
            let mut key = vec![colors[v] as i64];
            for (a, b, c) in neigh {
                key.extend_from_slice(&[a, b, c]);
            }
            keys.push(key);
        }
        let mut sorted: Vec<&Vec<i64>> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let index: BTreeMap<&Vec<i64>, usize> =
            sorted.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let new: Vec<usize> = keys.iter().map(|k| index[k]).collect();
        if new == *colors {
            return;
        }
        *colors = new;
    }
}

fn stable_coloring(g: &EnhancedLevelGraph) -> Vec<usize> {
    let init = initial_colors(g);
    let mut sorted: Vec<&Vec<i64>> = init.iter().collect();
    sorted.sort();
    sorted.dedup();
    let index: BTreeMap<&Vec<i64>, usize> =
        sorted.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut colors: Vec<usize> = init.iter().map(|k| index[k]).collect();
    refine(g, &mut colors);
    colors
}

/// Serialization of the relabeled graph; `perm[old] = new`.
fn serialize_under(g: &EnhancedLevelGraph, perm: &[usize]) -> Vec<u8> {
    let n = g.vertices.len();
    let mut vdata: Vec<(i64, i64)> = vec![(0, 0); n];
    for v in 0..n {
        vdata[perm[v]] = (g.vertices[v].level, g.vertices[v].genus);
    }
    let mut edges: Vec<(i64, i64, i64)> = g
        .edges
        .iter()
        .map(|e| {
            let a = (perm[e.ends[0].vertex] as i64, e.ends[0].kappa);
            let b = (perm[e.ends[1].vertex] as i64, e.ends[1].kappa);
            // Horizontal edges are unordered; store sorted.
            if e.ends[0].kappa == 0 && a > b {
                (b.0, a.0, a.1)
            } else {
                (a.0, b.0, a.1)
            }
        })
        .collect();
    edges.sort_unstable();
    let mut legs: Vec<(usize, i64, i64)> = g
        .legs
        .iter()
        .map(|l| (l.label, perm[l.vertex] as i64, l.order))
        .collect();
    legs.sort_unstable();
    let mut out = format!("k{};", g.k).into_bytes();
    for (lv, gen) in vdata {
        out.extend_from_slice(format!("v{lv},{gen};").as_bytes());
    }
    for (a, b, kp) in edges {
        out.extend_from_slice(format!("e{a},{b},{kp};").as_bytes());
    }
    for (label, v, m) in legs {
        out.extend_from_slice(format!("l{label},{v},{m};").as_bytes());
    }
    out
}

/// All permutations respecting the color classes, visited in lexicographic
/// order of the resulting relabeling. Class sizes are tiny; still, guard the
/// product of factorials.
fn class_permutations(colors: &[usize]) -> Result<Vec<Vec<usize>>, GraphError> {
    let nclasses = colors.iter().max().map_or(0, |m| m + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); nclasses];
    for (v, &c) in colors.iter().enumerate() {
        classes[c].push(v);
    }
    let mut total: u64 = 1;
    for c in &classes {
        let mut f: u64 = 1;
        for i in 2..=c.len() as u64 {
            f = f.saturating_mul(i);
        }
        total = total.saturating_mul(f);
        if total > 1_000_000 {
            return Err(GraphError::BoundsTooLarge);
        }
    }
    // Base positions: vertices sorted by (color, id); a permutation assigns
    // within each class.
    let mut result = Vec::new();
    let mut current: Vec<Vec<usize>> = classes.clone();
    fn rec(
        classes: &[Vec<usize>],
        idx: usize,
        current: &mut Vec<Vec<usize>>,
        result: &mut Vec<Vec<usize>>,
        colors: &[usize],
    ) {
        if idx == classes.len() {
            // Assemble perm[old] = new position.
            let mut offsets = vec![0usize; classes.len()];
            let mut acc = 0;
            for (c, class) in classes.iter().enumerate() {
                offsets[c] = acc;
                acc += class.len();
            }
            let mut perm = vec![0usize; colors.len()];
            for (c, arrangement) in current.iter().enumerate() {
                for (slot, &old) in arrangement.iter().enumerate() {
                    perm[old] = offsets[c] + slot;
                }
            }
            result.push(perm);
            return;
        }
        let mut arrangement = classes[idx].clone();
        permute_all(&mut arrangement, 0, &mut |arr| {
            current[idx] = arr.to_vec();
            rec(classes, idx + 1, current, result, colors);
        });
        current[idx] = classes[idx].clone();
    }
    rec(&classes, 0, &mut current, &mut result, colors);
    Ok(result)
}

fn permute_all(arr: &mut [usize], start: usize, f: &mut impl FnMut(&[usize])) {
    if start == arr.len() {
        f(arr);
        return;
    }
    for i in start..arr.len() {
        arr.swap(start, i);
        permute_all(arr, start + 1, f);
        arr.swap(start, i);
    }
}

pub fn canonical_form(g: &EnhancedLevelGraph) -> Vec<u8> {
    let colors = stable_coloring(g);
    let perms = class_permutations(&colors).expect("canonical form search exceeded safety cap");
    perms
        .iter()
        .map(|p| serialize_under(g, p))
        .min()
        .unwrap_or_else(|| serialize_under(g, &(0..g.vertices.len()).collect::<Vec<_>>()))
}

/// The permutation achieving the canonical form (first minimal one).
pub fn canonical_permutation(g: &EnhancedLevelGraph) -> Vec<usize> {
    let colors = stable_coloring(g);
    let perms = class_permutations(&colors).expect("canonical form search exceeded safety cap");
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    for p in perms {
        let s = serialize_under(g, &p);
        if best.as_ref().is_none_or(|(bs, _)| s < *bs) {
            best = Some((s, p));
        }
    }
    best.map(|(_, p)| p)
        .unwrap_or_else(|| (0..g.vertices.len()).collect())
}

/// All decoration-preserving automorphisms, for cover canonicalization.
pub fn automorphisms(g: &EnhancedLevelGraph) -> Vec<GraphAut> {
    let colors = stable_coloring(g);
    let mut auts = Vec::new();
    for sigma in class_self_maps(&colors) {
        // Labeled legs pin their host vertices.
        if g.legs.iter().any(|l| sigma[l.vertex] != l.vertex) {
            continue;
        }
        if let Some(maps) = edge_bijections(g, &sigma) {
            for edge_map in maps {
                auts.push(GraphAut {
                    vertex_perm: sigma.clone(),
                    edge_map,
                });
            }
        }
    }
    auts
}

/// Vertex self-maps permuting each color class within itself.
fn class_self_maps(colors: &[usize]) -> Vec<Vec<usize>> {
    let nclasses = colors.iter().max().map_or(0, |m| m + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); nclasses];
    for (v, &c) in colors.iter().enumerate() {
        classes[c].push(v);
    }
    let mut maps: Vec<Vec<usize>> = vec![(0..colors.len()).collect()];
    for class in &classes {
        if class.len() < 2 {
            continue;
        }
        let mut next = Vec::new();
        let mut arrangement = class.clone();
        permute_all(&mut arrangement, 0, &mut |arr| {
            for m in &maps {
                let mut m2 = m.clone();
                for (i, &v) in class.iter().enumerate() {
                    m2[v] = arr[i];
                }
                next.push(m2);
            }
        });
        maps = next;
    }
    maps
}

/// All ways to biject edges compatibly with a vertex permutation; `None` if
/// the permutation does not preserve the decorated edge multiset or legs.
fn edge_bijections(g: &EnhancedLevelGraph, perm: &[usize]) -> Option<Vec<Vec<(usize, bool)>>> {
    // Legs are already pinned by the serialization equality check: a vertex
    // hosting a labeled leg must be fixed by `perm`.
    // Edge key: unordered decorated endpoints after mapping.
    let key = |v1: usize, k1: i64, v2: usize, k2: i64| -> (usize, i64, usize, i64) {
        if (v1, k1) <= (v2, k2) {
            (v1, k1, v2, k2)
        } else {
            (v2, k2, v1, k1)
        }
    };
    let mut target_classes: BTreeMap<(usize, i64, usize, i64), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        target_classes
            .entry(key(
                e.ends[0].vertex,
                e.ends[0].kappa,
                e.ends[1].vertex,
                e.ends[1].kappa,
            ))
            .or_default()
            .push(i);
    }
    let mut source_classes: BTreeMap<(usize, i64, usize, i64), Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        source_classes
            .entry(key(
                perm[e.ends[0].vertex],
                e.ends[0].kappa,
                perm[e.ends[1].vertex],
                e.ends[1].kappa,
            ))
            .or_default()
            .push(i);
    }
    if source_classes.keys().ne(target_classes.keys()) {
        return None;
    }
    for (k, v) in &source_classes {
        if target_classes[k].len() != v.len() {
            return None;
        }
    }
    // Enumerate bijections class by class, with flips for horizontal edges.
    let classes: Vec<(Vec<usize>, Vec<usize>)> = source_classes
        .iter()
        .map(|(k, src)| (src.clone(), target_classes[k].clone()))
        .collect();
    let mut all: Vec<Vec<(usize, bool)>> = vec![vec![(usize::MAX, false); g.edges.len()]];
    for (src, tgt) in &classes {
        let mut next: Vec<Vec<(usize, bool)>> = Vec::new();
        let mut arrangement = tgt.clone();
        permute_all(&mut arrangement, 0, &mut |arr| {
            // Determine flips: for each pairing check which end orders match.
            let mut options: Vec<Vec<(usize, bool)>> = vec![Vec::new()];
            for (si, &s) in src.iter().enumerate() {
                let t = arr[si];
                let es = &g.edges[s];
                let et = &g.edges[t];
                let direct = perm[es.ends[0].vertex] == et.ends[0].vertex
                    && es.ends[0].kappa == et.ends[0].kappa
                    && perm[es.ends[1].vertex] == et.ends[1].vertex
                    && es.ends[1].kappa == et.ends[1].kappa;
                let flipped = perm[es.ends[0].vertex] == et.ends[1].vertex
                    && es.ends[0].kappa == et.ends[1].kappa
                    && perm[es.ends[1].vertex] == et.ends[0].vertex
                    && es.ends[1].kappa == et.ends[0].kappa;
                let mut choices = Vec::new();
                if direct {
                    choices.push((t, false));
                }
                // Only horizontal edges have interchangeable ends.
                if flipped && es.ends[0].kappa == 0 {
                    choices.push((t, true));
                }
                if choices.is_empty() {
                    options.clear();
                    break;
                }
                let mut grown = Vec::new();
                for partial in &options {
                    for &c in &choices {
                        let mut p = partial.clone();
                        p.push(c);
                        grown.push(p);
                    }
                }
                options = grown;
            }
            for opt in options {
                for partial in &all {
                    let mut full = partial.clone();
                    for (si, &s) in src.iter().enumerate() {
                        full[s] = opt[si];
                    }
                    next.push(full);
                }
            }
        });
        if next.is_empty() {
            return None;
        }
        all = next;
    }
    Some(all)
}

#[cfg(test)]
mod tests {
    use super::super::tests::gamma_a;
    use super::*;

    #[test]
    fn relabeling_invariance() {
        let (g, _) = gamma_a();
        // Swap vertex ids.
        let swapped = EnhancedLevelGraph::assemble(
            2,
            &[(1, -1), (1, 0)],
            &[(1, 0, 2)],
            &[(0, 0, 2), (0, 1, 2)],
        );
        assert_eq!(g.canonical_form(), swapped.canonical_form());
    }

    #[test]
    fn enhancement_changes_canonical_form() {
        let (g, _) = gamma_a();
        let mut g2 = g.clone();
        g2.edges[0].ends[0].kappa = 4;
        g2.edges[0].ends[1].kappa = -4;
        assert_ne!(g.canonical_form(), g2.canonical_form());
        assert_eq!(g.canonical_form(), g.canonical_form());
    }

    #[test]
    fn automorphisms_of_symmetric_banana() {
        // Two vertices joined by two kappa-2 edges (Q(2,2) banana): the two
        // parallel edges can be exchanged.
        let g = EnhancedLevelGraph::assemble(
            2,
            &[(1, 0), (0, -1)],
            &[(0, 1, 2), (0, 1, 2)],
            &[(1, 0, 2), (1, 1, 2)],
        );
        let auts = automorphisms(&g);
        assert_eq!(auts.len(), 2);
        // Horizontal self-loop: end flip is an automorphism.
        let loop_g = EnhancedLevelGraph::assemble(1, &[(0, 0)], &[(0, 0, 0)], &[(0, 0, 0)]);
        let auts = automorphisms(&loop_g);
        assert_eq!(auts.len(), 2);
        assert!(auts.iter().any(|a| a.edge_map[0].1));
    }
}
