//! Enhanced level graphs: stable dual graphs with a level function and prong
//! enhancements on half-edges.
//!
//! Conventions. Levels are normalized to {0, -1, ..., -L} with every level
//! occupied. A vertical edge stores its upper end first (kappa > 0 there,
//! -kappa at the lower end); horizontal edges carry kappa = 0 on both halves.
//! Level passages are labeled by the paper-style level values -1..-L; passage
//! -p separates level -(p-1) from level -p.

mod canon;
mod enumerate;

pub use canon::{canonical_permutation as canon_permutation, GraphAut};
pub use enumerate::{enumerate_boundary_graphs, BoundaryMode, EnumLimits};

use crate::signature::{validate_signature, Signature};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0} enhancement does not balance: {1} + {2} != 0")]
    EdgeBalance(usize, i64, i64),
    #[error("leg {label} kappa {kappa} != order + k = {expected}")]
    LegOrder { label: usize, kappa: i64, expected: i64 },
    #[error("legs do not match the signature orders")]
    LegMismatch,
    #[error("vertex {0} fails the enhancement sum axiom")]
    VertexSum(usize),
    #[error("edge {0} violates level orientation")]
    LevelOrientation(usize),
    #[error("genus-0 vertex {0} has fewer than 3 half-edges")]
    Stability(usize),
    #[error("graph genus {got} != ambient genus {expected}")]
    GenusMismatch { got: i64, expected: i64 },
    #[error("graph is not connected")]
    Disconnected,
    #[error("levels are not normalized to 0..-L with all levels occupied")]
    LevelNormalization,
    #[error("invalid level passage {0}")]
    InvalidPassage(i64),
    #[error("edge {0} is not horizontal")]
    NotHorizontal(usize),
    #[error("enumeration bounds exceed the configured safety cap")]
    BoundsTooLarge,
    #[error("bad index or malformed input: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub genus: i64,
    pub level: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeEnd {
    pub vertex: usize,
    pub kappa: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub ends: [EdgeEnd; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Leg {
    pub vertex: usize,
    pub label: usize,
    pub order: i64,
    pub kappa: i64,
}

/// Stable graph with level structure and enhancements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EnhancedLevelGraph {
    pub k: i64,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

impl Edge {
    pub fn is_horizontal_in(&self, g: &EnhancedLevelGraph) -> bool {
        g.vertices[self.ends[0].vertex].level == g.vertices[self.ends[1].vertex].level
    }
}

impl EnhancedLevelGraph {
    /// Builder used by the enumerators and tests: vertices (genus, level),
    /// edges (upper vertex, lower vertex, kappa) with kappa = 0 meaning
    /// horizontal, legs (vertex, label, order).
    pub fn assemble(
        k: i64,
        vertices: &[(i64, i64)],
        edges: &[(usize, usize, i64)],
        legs: &[(usize, usize, i64)],
    ) -> Self {
        EnhancedLevelGraph {
            k,
            vertices: vertices
                .iter()
                .map(|&(genus, level)| Vertex { genus, level })
                .collect(),
            edges: edges
                .iter()
                .map(|&(up, down, kappa)| Edge {
                    ends: [
                        EdgeEnd { vertex: up, kappa },
                        EdgeEnd {
                            vertex: down,
                            kappa: -kappa,
                        },
                    ],
                })
                .collect(),
            legs: legs
                .iter()
                .map(|&(vertex, label, order)| Leg {
                    vertex,
                    label,
                    order,
                    kappa: order + k,
                })
                .collect(),
        }
    }

    pub fn num_levels(&self) -> usize {
        let min = self.vertices.iter().map(|v| v.level).min().unwrap_or(0);
        (-min) as usize + 1
    }

    /// Number of level passages L.
    pub fn num_passages(&self) -> usize {
        self.num_levels() - 1
    }

    pub fn horizontal_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].is_horizontal_in(self))
            .collect()
    }

    pub fn vertical_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.edges[e].is_horizontal_in(self))
            .collect()
    }

    /// Levels of the upper and lower end of an edge.
    pub fn edge_levels(&self, e: usize) -> (i64, i64) {
        let edge = &self.edges[e];
        (
            self.vertices[edge.ends[0].vertex].level,
            self.vertices[edge.ends[1].vertex].level,
        )
    }

    /// Passages crossed by an edge, as 1-based indices p with passage p
    /// between level -(p-1) and -p. Horizontal edges cross nothing.
    pub fn crossed_passages(&self, e: usize) -> Vec<usize> {
        let (top, bot) = self.edge_levels(e);
        ((1 - top) as usize..=(-bot) as usize).collect()
    }

    pub fn positive_kappa(&self, e: usize) -> i64 {
        self.edges[e].ends[0].kappa
    }

    fn half_edge_count(&self, v: usize) -> usize {
        let ends = self
            .edges
            .iter()
            .flat_map(|e| e.ends.iter())
            .filter(|end| end.vertex == v)
            .count();
        let legs = self.legs.iter().filter(|l| l.vertex == v).count();
        ends + legs
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let [a, b] = [e.ends[0].vertex, e.ends[1].vertex];
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

    pub fn first_betti(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Full validation against an ambient signature.
    pub fn validate(&self, sig: &Signature) -> Result<(), GraphError> {
        if self.k != sig.k {
            return Err(GraphError::Malformed(format!(
                "graph k {} != signature k {}",
                self.k, sig.k
            )));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends[0].vertex >= self.vertices.len() || e.ends[1].vertex >= self.vertices.len() {
                return Err(GraphError::Malformed(format!("edge {i} vertex out of range")));
            }
            if e.ends[0].kappa + e.ends[1].kappa != 0 {
                return Err(GraphError::EdgeBalance(i, e.ends[0].kappa, e.ends[1].kappa));
            }
        }
        // Legs in bijection with mu, orders matching, kappa = m + k.
        let mut seen_labels = vec![false; sig.mu.len()];
        for l in &self.legs {
            if l.vertex >= self.vertices.len() {
                return Err(GraphError::Malformed(format!("leg {} vertex out of range", l.label)));
            }
            if l.label >= sig.mu.len() || seen_labels[l.label] || sig.mu[l.label] != l.order {
                return Err(GraphError::LegMismatch);
            }
            seen_labels[l.label] = true;
            if l.kappa != l.order + self.k {
                return Err(GraphError::LegOrder {
                    label: l.label,
                    kappa: l.kappa,
                    expected: l.order + self.k,
                });
            }
        }
        if !seen_labels.iter().all(|&s| s) {
            return Err(GraphError::LegMismatch);
        }
        // Level normalization: 0 attained, no gaps.
        let levels: BTreeSet<i64> = self.vertices.iter().map(|v| v.level).collect();
        let min = *levels.iter().next().ok_or(GraphError::LevelNormalization)?;
        if *levels.iter().last().unwrap() != 0 || levels.len() as i64 != 1 - min {
            return Err(GraphError::LevelNormalization);
        }
        // Orientation: vertical edges descend with positive kappa on top;
        // horizontal edges carry kappa 0.
        for (i, e) in self.edges.iter().enumerate() {
            let (top, bot) = self.edge_levels(i);
            if top == bot {
                if e.ends[0].kappa != 0 {
                    return Err(GraphError::LevelOrientation(i));
                }
            } else if top < bot || e.ends[0].kappa < 1 {
                return Err(GraphError::LevelOrientation(i));
            }
        }
        // Vertex enhancement sums.
        for v in 0..self.vertices.len() {
            let mut sum = 0i64;
            for e in &self.edges {
                for end in &e.ends {
                    if end.vertex == v {
                        sum += end.kappa - self.k;
                    }
                }
            }
            for l in &self.legs {
                if l.vertex == v {
                    sum += l.kappa - self.k;
                }
            }
            if sum != self.k * (2 * self.vertices[v].genus - 2) {
                return Err(GraphError::VertexSum(v));
            }
        }
        // Stability.
        for v in 0..self.vertices.len() {
            if self.vertices[v].genus == 0 && self.half_edge_count(v) < 3 {
                return Err(GraphError::Stability(v));
            }
            if self.vertices[v].genus < 0 {
                return Err(GraphError::Malformed(format!("vertex {v} has negative genus")));
            }
        }
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let got = self.vertices.iter().map(|v| v.genus).sum::<i64>() + self.first_betti();
        if got != sig.g {
            return Err(GraphError::GenusMismatch {
                got,
                expected: sig.g,
            });
        }
        Ok(())
    }

    /// Signature of the k-differential on a single vertex: leg orders plus
    /// kappa - k at each incident edge end.
    pub fn vertex_signature(&self, v: usize) -> Signature {
        let mut mu = Vec::new();
        for l in &self.legs {
            if l.vertex == v {
                mu.push(l.order);
            }
        }
        for e in &self.edges {
            for end in &e.ends {
                if end.vertex == v {
                    mu.push(end.kappa - self.k);
                }
            }
        }
        validate_signature(self.k, self.vertices[v].genus, &mu)
            .expect("vertex sum axiom guarantees a valid signature")
    }

    /// Vertical/horizontal undegeneration.
    ///
    /// `keep_passages` is the set of level passages that remain, in the
    /// paper's level labels {-1, ..., -L}; a vertical edge is contracted iff
    /// none of its crossed passages is kept. `contract_horizontal` lists
    /// horizontal edges to contract. Surviving enhancements are unchanged.
    pub fn undegenerate(
        &self,
        keep_passages: &BTreeSet<i64>,
        contract_horizontal: &BTreeSet<usize>,
    ) -> Result<EnhancedLevelGraph, GraphError> {
        let num_l = self.num_passages() as i64;
        for &p in keep_passages {
            if !(-num_l..=-1).contains(&p) {
                return Err(GraphError::InvalidPassage(p));
            }
        }
        for &e in contract_horizontal {
            if e >= self.edges.len() {
                return Err(GraphError::Malformed(format!("edge {e} out of range")));
            }
            if !self.edges[e].is_horizontal_in(self) {
                return Err(GraphError::NotHorizontal(e));
            }
        }
        let mut contracted = vec![false; self.edges.len()];
        for (i, _) in self.edges.iter().enumerate() {
            if self.edges[i].is_horizontal_in(self) {
                contracted[i] = contract_horizontal.contains(&i);
            } else {
                // Crossed passages as paper labels: passage p <-> level -p.
                contracted[i] = self
                    .crossed_passages(i)
                    .iter()
                    .all(|&p| !keep_passages.contains(&-(p as i64)));
            }
        }
        // Union-find over contracted edges.
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for (i, e) in self.edges.iter().enumerate() {
            if contracted[i] {
                let a = find(&mut parent, e.ends[0].vertex);
                let b = find(&mut parent, e.ends[1].vertex);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        // New vertex per class: genus = sum of genera + cycles contracted.
        let mut class_of = vec![usize::MAX; self.vertices.len()];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.vertices.len() {
            let root = find(&mut parent, v);
            let idx = classes
                .iter()
                .position(|c| find(&mut parent, c[0]) == root)
                .unwrap_or_else(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
            classes[idx].push(v);
            class_of[v] = idx;
        }
        let mut genus: Vec<i64> = classes
            .iter()
            .map(|c| c.iter().map(|&v| self.vertices[v].genus).sum())
            .collect();
        // Extra contracted edges within a class add loops, hence genus.
        let mut tree_count = vec![0i64; classes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if contracted[i] {
                tree_count[class_of[e.ends[0].vertex]] += 1;
            }
        }
        for (idx, c) in classes.iter().enumerate() {
            genus[idx] += tree_count[idx] - (c.len() as i64 - 1);
        }
        // New level: count of kept passages weakly above the old level.
        let new_level = |old: i64| -> i64 {
            -(keep_passages.iter().filter(|&&p| p >= old).count() as i64)
        };
        let mut vertices: Vec<Vertex> = Vec::with_capacity(classes.len());
        for (idx, c) in classes.iter().enumerate() {
            let lv: BTreeSet<i64> = c.iter().map(|&v| new_level(self.vertices[v].level)).collect();
            if lv.len() != 1 {
                return Err(GraphError::Malformed(format!(
                    "contracted class {idx} spans kept passages"
                )));
            }
            vertices.push(Vertex {
                genus: genus[idx],
                level: *lv.iter().next().unwrap(),
            });
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !contracted[*i])
            .map(|(_, e)| Edge {
                ends: [
                    EdgeEnd {
                        vertex: class_of[e.ends[0].vertex],
                        kappa: e.ends[0].kappa,
                    },
                    EdgeEnd {
                        vertex: class_of[e.ends[1].vertex],
                        kappa: e.ends[1].kappa,
                    },
                ],
            })
            .collect();
        let legs: Vec<Leg> = self
            .legs
            .iter()
            .map(|l| Leg {
                vertex: class_of[l.vertex],
                ..l.clone()
            })
            .collect();
        Ok(EnhancedLevelGraph {
            k: self.k,
            vertices,
            edges,
            legs,
        })
    }

    /// Canonical byte string: equal iff the graphs are isomorphic respecting
    /// levels, enhancements and leg labels.
    pub fn canonical_form(&self) -> Vec<u8> {
        canon::canonical_form(self)
    }

    /// Decoration-preserving automorphisms, used to canonicalize covers.
    pub fn automorphisms(&self) -> Vec<GraphAut> {
        canon::automorphisms(self)
    }

    /// Ambient signature recovered from legs and graph data.
    pub fn ambient_signature(&self) -> Result<Signature, GraphError> {
        let mut mu = vec![0i64; self.legs.len()];
        let mut seen = vec![false; self.legs.len()];
        for l in &self.legs {
            if l.label >= mu.len() || seen[l.label] {
                return Err(GraphError::LegMismatch);
            }
            mu[l.label] = l.order;
            seen[l.label] = true;
        }
        let g = self.vertices.iter().map(|v| v.genus).sum::<i64>() + self.first_betti();
        validate_signature(self.k, g, &mu).map_err(|e| GraphError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson::from(self)).unwrap()
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, GraphError> {
        let gj: GraphJson = serde_json::from_value(v.clone())
            .map_err(|e| GraphError::Malformed(e.to_string()))?;
        gj.into_graph()
    }

    /// DOT export with one rank block per level and kappa edge labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph level_graph {\n");
        for lv in 0..self.num_levels() {
            let level = -(lv as i64);
            s.push_str("  { rank=same;");
            for (i, v) in self.vertices.iter().enumerate() {
                if v.level == level {
                    s.push_str(&format!(" v{i} [label=\"v{i} g={}\"];", v.genus));
                }
            }
            s.push_str(" }\n");
        }
        for (i, e) in self.edges.iter().enumerate() {
            s.push_str(&format!(
                "  v{} -- v{} [label=\"e{} k={}\"];\n",
                e.ends[0].vertex, e.ends[1].vertex, i, e.ends[0].kappa
            ));
        }
        for l in &self.legs {
            s.push_str(&format!(
                "  p{} [shape=plaintext label=\"p{} m={}\"];\n  v{} -- p{};\n",
                l.label, l.label, l.order, l.vertex, l.label
            ));
        }
        s.push_str("}\n");
        s
    }
}

/// Wire format, kept bit-stable: ids are explicit and round-trip.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    k: i64,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    legs: Vec<LegJson>,
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: usize,
    genus: i64,
    level: i64,
}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: usize,
    ends: [EndJson; 2],
}

#[derive(Serialize, Deserialize)]
struct EndJson {
    vertex: usize,
    kappa: i64,
}

#[derive(Serialize, Deserialize)]
struct LegJson {
    vertex: usize,
    label: usize,
    order: i64,
}

impl From<&EnhancedLevelGraph> for GraphJson {
    fn from(g: &EnhancedLevelGraph) -> Self {
        GraphJson {
            k: g.k,
            vertices: g
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| VertexJson {
                    id,
                    genus: v.genus,
                    level: v.level,
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| EdgeJson {
                    id,
                    ends: [
                        EndJson {
                            vertex: e.ends[0].vertex,
                            kappa: e.ends[0].kappa,
                        },
                        EndJson {
                            vertex: e.ends[1].vertex,
                            kappa: e.ends[1].kappa,
                        },
                    ],
                })
                .collect(),
            legs: g
                .legs
                .iter()
                .map(|l| LegJson {
                    vertex: l.vertex,
                    label: l.label,
                    order: l.order,
                })
                .collect(),
        }
    }
}

impl GraphJson {
    fn into_graph(self) -> Result<EnhancedLevelGraph, GraphError> {
        let n = self.vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.vertices[i].id);
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in order.iter().enumerate() {
            if self.vertices[old].id >= n {
                return Err(GraphError::Malformed("vertex ids must be 0..n".into()));
            }
            remap[self.vertices[old].id] = new;
        }
        let vertices = order
            .iter()
            .map(|&i| Vertex {
                genus: self.vertices[i].genus,
                level: self.vertices[i].level,
            })
            .collect();
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut eorder: Vec<usize> = (0..self.edges.len()).collect();
        eorder.sort_by_key(|&i| self.edges[i].id);
        for &i in &eorder {
            let e = &self.edges[i];
            let get = |j: usize| -> Result<EdgeEnd, GraphError> {
                let end = &e.ends[j];
                if end.vertex >= n {
                    return Err(GraphError::Malformed("edge vertex out of range".into()));
                }
                Ok(EdgeEnd {
                    vertex: remap[end.vertex],
                    kappa: end.kappa,
                })
            };
            let (a, b) = (get(0)?, get(1)?);
            // Store the positive-kappa end first.
            let ends = if a.kappa >= b.kappa { [a, b] } else { [b, a] };
            edges.push(Edge { ends });
        }
        let legs = self
            .legs
            .iter()
            .map(|l| {
                if l.vertex >= n {
                    return Err(GraphError::Malformed("leg vertex out of range".into()));
                }
                Ok(Leg {
                    vertex: remap[l.vertex],
                    label: l.label,
                    order: l.order,
                    kappa: l.order + self.k,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EnhancedLevelGraph {
            k: self.k,
            vertices,
            edges,
            legs,
        })
    }
}

/// Validates a candidate graph against an ambient signature.
pub fn validate_enhanced_graph(
    g: &EnhancedLevelGraph,
    sig: &Signature,
) -> Result<EnhancedLevelGraph, GraphError> {
    g.validate(sig)?;
    Ok(g.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::validate_signature;

    /// Two vertices, genus 1 each, one edge with kappa 2, both legs of order
    /// 2 on the bottom; ambient (k=2, g=2, mu=(2,2)).
    pub(crate) fn gamma_a() -> (EnhancedLevelGraph, Signature) {
        let sig = validate_signature(2, 2, &[2, 2]).unwrap();
        let g = EnhancedLevelGraph::assemble(
            2,
            &[(1, 0), (1, -1)],
            &[(0, 1, 2)],
            &[(1, 0, 2), (1, 1, 2)],
        );
        (g, sig)
    }

    #[test]
    fn gamma_a_validates() {
        let (g, sig) = gamma_a();
        g.validate(&sig).unwrap();
        assert_eq!(g.num_levels(), 2);
        assert_eq!(g.crossed_passages(0), vec![1]);
    }

    #[test]
    fn bad_leg_kappa_rejected() {
        let (mut g, sig) = gamma_a();
        g.legs[0].kappa = 3;
        assert_eq!(
            g.validate(&sig),
            Err(GraphError::LegOrder {
                label: 0,
                kappa: 3,
                expected: 4
            })
        );
    }

    #[test]
    fn unstable_vertex_rejected() {
        // Genus-0 vertex with two half-edges; vertex sums hold.
        let sig = validate_signature(2, 1, &[1, -1]).unwrap();
        let g = EnhancedLevelGraph::assemble(2, &[(1, 0), (0, -1)], &[(0, 1, 1)], &[
            (0, 0, 1),
            (1, 1, -1),
        ]);
        assert!(matches!(g.validate(&sig), Err(GraphError::Stability(1))));
    }

    #[test]
    fn edge_balance_and_orientation_checked() {
        let (mut g, sig) = gamma_a();
        g.edges[0].ends[1].kappa = -3;
        assert!(matches!(g.validate(&sig), Err(GraphError::EdgeBalance(0, 2, -3))));
        let (mut g, sig) = gamma_a();
        g.vertices[0].level = -1;
        g.vertices[1].level = 0;
        assert!(matches!(g.validate(&sig), Err(GraphError::LevelOrientation(0))));
    }

    #[test]
    fn genus_identity_checked() {
        let (g, _) = gamma_a();
        let sig = validate_signature(2, 3, &[2, 6]).unwrap();
        assert!(matches!(g.validate(&sig), Err(_)));
    }

    #[test]
    fn vertex_signatures_of_gamma_a() {
        let (g, _) = gamma_a();
        let top = g.vertex_signature(0);
        assert_eq!((top.k, top.g, top.mu.clone()), (2, 1, vec![0]));
        let bot = g.vertex_signature(1);
        assert_eq!((bot.k, bot.g, bot.mu.clone()), (2, 1, vec![2, 2, -4]));
    }

    #[test]
    fn one_vertex_signature_round_trip() {
        let sig = validate_signature(2, 2, &[2, 2]).unwrap();
        let g = EnhancedLevelGraph::assemble(2, &[(2, 0)], &[], &[(0, 0, 2), (0, 1, 2)]);
        g.validate(&sig).unwrap();
        assert_eq!(g.vertex_signature(0), sig);
    }

    #[test]
    fn undegenerate_three_level_chain() {
        // Levels 0, -1, -2; e0: 0->-1 kappa 2, e1: -1->-2 kappa 2,
        // e2: 0->-2 kappa 3 (valid abelian graph, see twist tests).
        let g = chain_graph();
        let sig = g.ambient_signature().unwrap();
        g.validate(&sig).unwrap();
        let kept: BTreeSet<i64> = [-1].into();
        let u = g.undegenerate(&kept, &BTreeSet::new()).unwrap();
        assert_eq!(u.num_levels(), 2);
        assert_eq!(u.edges.len(), 2);
        let mut kappas: Vec<i64> = u.edges.iter().map(|e| e.ends[0].kappa).collect();
        kappas.sort_unstable();
        assert_eq!(kappas, vec![2, 3]);
        u.validate(&sig).unwrap();
        // Keeping all passages is the identity.
        let all: BTreeSet<i64> = [-1, -2].into();
        let id = g.undegenerate(&all, &BTreeSet::new()).unwrap();
        assert_eq!(id.canonical_form(), g.canonical_form());
        // Keeping nothing contracts all vertical edges.
        let smooth = g.undegenerate(&BTreeSet::new(), &BTreeSet::new()).unwrap();
        assert_eq!(smooth.num_levels(), 1);
        assert_eq!(smooth.edges.len(), 0);
        smooth.validate(&sig).unwrap();
    }

    /// Three-level abelian chain used across the twist tests.
    pub(crate) fn chain_graph() -> EnhancedLevelGraph {
        EnhancedLevelGraph::assemble(
            1,
            &[(3, 0), (0, -1), (0, -2)],
            &[(0, 1, 2), (1, 2, 2), (0, 2, 3)],
            &[(0, 0, 1), (1, 1, 0), (2, 2, 5)],
        )
    }

    #[test]
    fn banana_horizontal_contraction() {
        // One vertex g=0, one horizontal self-loop, ambient (k=1,g=1,mu=(0)).
        let sig = validate_signature(1, 1, &[0]).unwrap();
        let g = EnhancedLevelGraph::assemble(1, &[(0, 0)], &[(0, 0, 0)], &[(0, 0, 0)]);
        g.validate(&sig).unwrap();
        let u = g.undegenerate(&BTreeSet::new(), &[0usize].into()).unwrap();
        assert_eq!(u.vertices.len(), 1);
        assert_eq!(u.vertices[0].genus, 1);
        assert!(u.edges.is_empty());
        u.validate(&sig).unwrap();
    }

    #[test]
    fn undegenerate_error_paths() {
        let g = chain_graph();
        assert!(matches!(
            g.undegenerate(&[-5i64].into(), &BTreeSet::new()),
            Err(GraphError::InvalidPassage(-5))
        ));
        assert!(matches!(
            g.undegenerate(&BTreeSet::new(), &[0usize].into()),
            Err(GraphError::NotHorizontal(0))
        ));
    }

    #[test]
    fn json_round_trip_preserves_canonical_form() {
        let (g, _) = gamma_a();
        let j = g.to_json();
        let back = EnhancedLevelGraph::from_json(&j).unwrap();
        assert_eq!(back.canonical_form(), g.canonical_form());
        assert_eq!(serde_json::to_string(&j).unwrap(), serde_json::to_string(&back.to_json()).unwrap());
    }

    #[test]
    fn dot_has_rank_blocks() {
        let (g, _) = gamma_a();
        let dot = g.to_dot();
        assert_eq!(dot.matches("rank=same").count(), 2);
        assert!(dot.contains("k=2"));
    }
}
