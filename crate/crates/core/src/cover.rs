//! Cyclic degree-k covers of enhanced level graphs.
//!
//! A cover is determined by a local type d_v per vertex (the number of
//! components of the canonical cover of that vertex, constrained by
//! power divisibility) and a gluing shift per edge in Z/gcd(k, kappa_e).
//! The deck generator tau acts by +1 on every fiber labeling. Two covers are
//! equivalent iff they differ by base automorphisms, per-vertex fiber
//! relabelings (powers of tau on one local cover at a time) and horizontal
//! end flips; the canonical form minimizes over exactly that gauge group.

use crate::graph::{EnhancedLevelGraph, GraphError};
use crate::signature::Signature;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("vertex {0}: local type {1} is not an admissible power divisor")]
    BadVertexType(usize, i64),
    #[error("vertex {0}: no consistent cover component exists for d = {1}")]
    Inconsistent(usize, i64),
    #[error("malformed cover data: {0}")]
    Malformed(String),
}

/// One vertex of the cover graph: a component of the local cover of a base
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverVertex {
    pub base_vertex: usize,
    pub sheet: i64,
    pub genus: i64,
    pub level: i64,
}

/// One edge of the cover graph: a preimage of a base node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEdge {
    pub base_edge: usize,
    pub sheet: i64,
    /// Cover vertex at the upper (resp. first) end.
    pub top: usize,
    /// Cover vertex at the lower (resp. second) end.
    pub bot: usize,
    /// kappa_e / gcd(k, kappa_e); zero for horizontal edges.
    pub kappa_hat: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverLeg {
    pub base_label: usize,
    pub sheet: i64,
    pub vertex: usize,
    pub order: i64,
}

/// Cyclic degree-k cover of an enhanced level graph with deck action tau.
#[derive(Debug, Clone)]
pub struct GraphCover {
    pub base: EnhancedLevelGraph,
    pub vertex_types: Vec<i64>,
    pub edge_shifts: Vec<i64>,
    pub vertices: Vec<CoverVertex>,
    pub edges: Vec<CoverEdge>,
    pub legs: Vec<CoverLeg>,
    vertex_offset: Vec<usize>,
    edge_offset: Vec<usize>,
}

/// Fiber size and lifted enhancement of an edge: gcd(k, kappa) preimages
/// (kappa = 0 counts as k) with kappa_hat = kappa / gcd; horizontal lifts
/// have simple poles and no prongs, reported as kappa_hat = 0.
pub fn cover_edge_enhancement(k: i64, kappa: i64) -> (i64, i64) {
    let f = Signature::fiber_size(k, kappa);
    if kappa == 0 {
        (k, 0)
    } else {
        (f, kappa / f)
    }
}

impl GraphCover {
    /// Builds the cover for explicit (d, shifts) data.
    pub fn build(
        base: &EnhancedLevelGraph,
        vertex_types: Vec<i64>,
        edge_shifts: Vec<i64>,
    ) -> Result<GraphCover, CoverError> {
        let k = base.k;
        if vertex_types.len() != base.vertices.len() || edge_shifts.len() != base.edges.len() {
            return Err(CoverError::Malformed("type/shift vector length".into()));
        }
        // Per-vertex component data: reduced signature and its cover genus.
        let mut vertex_offset = Vec::with_capacity(base.vertices.len());
        let mut vertices: Vec<CoverVertex> = Vec::new();
        for (v, &d) in vertex_types.iter().enumerate() {
            let vsig = base.vertex_signature(v);
            if !vsig.power_divisors().contains(&d) {
                return Err(CoverError::BadVertexType(v, d));
            }
            let reduced = vsig.reduce(d).map_err(|_| CoverError::BadVertexType(v, d))?;
            let comp = reduced
                .cover_signature()
                .map_err(|_| CoverError::Inconsistent(v, d))?;
            vertex_offset.push(vertices.len());
            for sheet in 0..d {
                vertices.push(CoverVertex {
                    base_vertex: v,
                    sheet,
                    genus: comp.g_hat,
                    level: base.vertices[v].level,
                });
            }
        }
        let mut edge_offset = Vec::with_capacity(base.edges.len());
        let mut edges: Vec<CoverEdge> = Vec::new();
        for (e, edge) in base.edges.iter().enumerate() {
            let kappa = edge.ends[0].kappa;
            let (fiber, kappa_hat) = cover_edge_enhancement(k, kappa);
            let s = edge_shifts[e].rem_euclid(fiber);
            let (vt, vb) = (edge.ends[0].vertex, edge.ends[1].vertex);
            let (dt, db) = (vertex_types[vt], vertex_types[vb]);
            if fiber % dt != 0 || fiber % db != 0 {
                return Err(CoverError::Inconsistent(vt, dt));
            }
            edge_offset.push(edges.len());
            for sheet in 0..fiber {
                edges.push(CoverEdge {
                    base_edge: e,
                    sheet,
                    top: vertex_offset[vt] + (sheet % dt) as usize,
                    bot: vertex_offset[vb] + ((sheet + s) % db) as usize,
                    kappa_hat,
                });
            }
        }
        let mut legs: Vec<CoverLeg> = Vec::new();
        for leg in &base.legs {
            let d = vertex_types[leg.vertex];
            let fiber = Signature::fiber_size(k, leg.order);
            let order = Signature::lifted_order(k / d, leg.order / d);
            for sheet in 0..fiber {
                legs.push(CoverLeg {
                    base_label: leg.label,
                    sheet,
                    vertex: vertex_offset[leg.vertex] + (sheet % d) as usize,
                    order,
                });
            }
        }
        Ok(GraphCover {
            base: base.clone(),
            vertex_types,
            edge_shifts,
            vertices,
            edges,
            legs,
            vertex_offset,
            edge_offset,
        })
    }

    pub fn k(&self) -> i64 {
        self.base.k
    }

    pub fn tau_vertex(&self, cv: usize) -> usize {
        let v = self.vertices[cv].base_vertex;
        let d = self.vertex_types[v];
        self.vertex_offset[v] + ((self.vertices[cv].sheet + 1) % d) as usize
    }

    pub fn tau_edge(&self, ce: usize) -> usize {
        let e = self.edges[ce].base_edge;
        let f = self.edge_fiber(e);
        self.edge_offset[e] + ((self.edges[ce].sheet + 1) % f) as usize
    }

    pub fn edge_fiber(&self, base_edge: usize) -> i64 {
        cover_edge_enhancement(self.k(), self.base.edges[base_edge].ends[0].kappa).0
    }

    pub fn cover_edges_over(&self, base_edge: usize) -> std::ops::Range<usize> {
        let start = self.edge_offset[base_edge];
        start..start + self.edge_fiber(base_edge) as usize
    }

    pub fn cover_vertices_over(&self, base_vertex: usize) -> std::ops::Range<usize> {
        let start = self.vertex_offset[base_vertex];
        start..start + self.vertex_types[base_vertex] as usize
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
                for (a, b) in [(e.top, e.bot), (e.bot, e.top)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Number of level passages (same as the base).
    pub fn num_passages(&self) -> usize {
        self.base.num_passages()
    }

    /// Reconstructs the base graph from tau-orbits alone: vertex orbits give
    /// base vertices (genus solved from the reduced Riemann-Hurwitz count),
    /// edge orbits give base edges with kappa = orbit size * kappa_hat, leg
    /// orbits give base legs with order = orbit size * (order_hat + 1) - k.
    pub fn quotient(&self) -> EnhancedLevelGraph {
        let k = self.k();
        // Vertex orbits under tau.
        let mut orbit_of = vec![usize::MAX; self.vertices.len()];
        let mut orbit_reps: Vec<usize> = Vec::new();
        for cv in 0..self.vertices.len() {
            if orbit_of[cv] != usize::MAX {
                continue;
            }
            let idx = orbit_reps.len();
            orbit_reps.push(cv);
            let mut cur = cv;
            loop {
                orbit_of[cur] = idx;
                cur = self.tau_vertex(cur);
                if cur == cv {
                    break;
                }
            }
        }
        let orbit_size = |rep: usize, tau: &dyn Fn(usize) -> usize| -> i64 {
            let mut n = 1i64;
            let mut cur = tau(rep);
            while cur != rep {
                n += 1;
                cur = tau(cur);
            }
            n
        };
        // Edge orbits: base kappa from orbit size and kappa_hat.
        let mut edge_seen = vec![false; self.edges.len()];
        let mut edges: Vec<(usize, usize, i64)> = Vec::new();
        for ce in 0..self.edges.len() {
            if edge_seen[ce] {
                continue;
            }
            let mut f = 0i64;
            let mut cur = ce;
            loop {
                edge_seen[cur] = true;
                f += 1;
                cur = self.tau_edge(cur);
                if cur == ce {
                    break;
                }
            }
            let e = &self.edges[ce];
            edges.push((orbit_of[e.top], orbit_of[e.bot], f * e.kappa_hat));
        }
        // Leg orbits: tau sends (label, sheet) to (label, sheet + 1).
        let mut leg_groups: BTreeMap<usize, Vec<&CoverLeg>> = BTreeMap::new();
        for leg in &self.legs {
            leg_groups.entry(leg.base_label).or_default().push(leg);
        }
        let mut legs: Vec<(usize, usize, i64)> = Vec::new();
        for (&label, group) in &leg_groups {
            let f = group.len() as i64;
            let order = f * (group[0].order + 1) - k;
            legs.push((orbit_of[group[0].vertex], label, order));
        }
        // Base genus per vertex orbit via reduced Riemann-Hurwitz: with
        // d = orbit size, k' = k/d, the component satisfies
        // 2 g_hat - 2 = k'(2g - 2) + sum over local fibers of (k' - fiber).
        let mut vertices: Vec<(i64, i64)> = Vec::new();
        for (idx, &rep) in orbit_reps.iter().enumerate() {
            let d = orbit_size(rep, &|v| self.tau_vertex(v));
            let kp = k / d;
            let mut branch = 0i64;
            // Local fibers on the rep component: group incident cover cells
            // by base cell and count.
            let mut fiber_counts: BTreeMap<(u8, usize), i64> = BTreeMap::new();
            for (ce, e) in self.edges.iter().enumerate() {
                if e.top == rep {
                    *fiber_counts.entry((0, self.edges[ce].base_edge)).or_default() += 1;
                }
                if e.bot == rep {
                    *fiber_counts.entry((1, self.edges[ce].base_edge)).or_default() += 1;
                }
            }
            for leg in &self.legs {
                if leg.vertex == rep {
                    *fiber_counts.entry((2, leg.base_label)).or_default() += 1;
                }
            }
            for (_, count) in fiber_counts {
                branch += kp - count;
            }
            let ghat = self.vertices[rep].genus;
            let g = ((2 * ghat - 2 - branch) / kp + 2) / 2;
            vertices.push((g, self.vertices[rep].level));
            debug_assert_eq!(idx, vertices.len() - 1);
        }
        EnhancedLevelGraph::assemble(k, &vertices, &edges, &legs)
    }

    /// Canonical bytes separating inequivalent covers: minimal (d, s) tuple
    /// over base automorphisms and per-vertex fiber relabelings.
    pub fn canonical_form(&self) -> Vec<u8> {
        let base_perm = crate::graph::canon_permutation(&self.base);
        let relabeled = relabel_base(&self.base, &base_perm);
        let canon_base = relabeled.canonical_form();
        // Transport (d, s) to the canonical labeling.
        let mut d_in: Vec<i64> = vec![0; self.vertex_types.len()];
        for (v, &d) in self.vertex_types.iter().enumerate() {
            d_in[base_perm[v]] = d;
        }
        // Edge correspondence: match old edges to relabeled edges by
        // decorated key; parallel edges are interchangeable, so any fixed
        // deterministic matching works (the gauge search below covers the
        // rest).
        let (s_in, flip_in) = transport_shifts(&self.base, &base_perm, &relabeled, &self.edge_shifts);
        let mut best: Option<Vec<u8>> = None;
        let auts = relabeled.automorphisms();
        let k = self.k();
        let nv = relabeled.vertices.len();
        // Gauge search: per-vertex shifts in Z/k.
        let mut gauge = vec![0i64; nv];
        loop {
            for aut in &auts {
                let mut d_t = vec![0i64; nv];
                for v in 0..nv {
                    d_t[aut.vertex_perm[v]] = d_in[v];
                }
                let mut s_t = vec![0i64; relabeled.edges.len()];
                for (e, &(img, flipped)) in aut.edge_map.iter().enumerate() {
                    let fiber = cover_edge_enhancement(k, relabeled.edges[e].ends[0].kappa).0;
                    let raw = if flipped != flip_in[e] { -s_in[e] } else { s_in[e] };
                    let (a, b) = (
                        relabeled.edges[img].ends[0].vertex,
                        relabeled.edges[img].ends[1].vertex,
                    );
                    s_t[img] = (raw + gauge[b] - gauge[a]).rem_euclid(fiber);
                }
                let bytes = serialize_cover_data(&d_t, &s_t);
                if best.as_ref().is_none_or(|b| bytes < *b) {
                    best = Some(bytes);
                }
            }
            if !increment(&mut gauge, k) {
                break;
            }
        }
        let mut out = canon_base;
        out.push(b'|');
        out.extend_from_slice(&best.unwrap());
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let cover_graph = serde_json::json!({
            "vertices": self.vertices,
            "edges": self.edges,
            "legs": self.legs,
        });
        serde_json::json!({
            "base_hash": fnv64_hex(&self.base.canonical_form()),
            "base": self.base.to_json(),
            "vertex_types": self.vertex_types,
            "edge_shifts": self.edge_shifts,
            "cover_graph": cover_graph,
            "tau": {
                "vertices": (0..self.vertices.len()).map(|v| self.tau_vertex(v)).collect::<Vec<_>>(),
                "edges": (0..self.edges.len()).map(|e| self.tau_edge(e)).collect::<Vec<_>>(),
            },
            "connected": self.is_connected(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<GraphCover, CoverError> {
        let base = EnhancedLevelGraph::from_json(
            v.get("base")
                .ok_or_else(|| CoverError::Malformed("missing base".into()))?,
        )
        .map_err(|e| CoverError::Malformed(e.to_string()))?;
        let vertex_types: Vec<i64> = serde_json::from_value(
            v.get("vertex_types")
                .cloned()
                .ok_or_else(|| CoverError::Malformed("missing vertex_types".into()))?,
        )
        .map_err(|e| CoverError::Malformed(e.to_string()))?;
        let edge_shifts: Vec<i64> = serde_json::from_value(
            v.get("edge_shifts")
                .cloned()
                .ok_or_else(|| CoverError::Malformed("missing edge_shifts".into()))?,
        )
        .map_err(|e| CoverError::Malformed(e.to_string()))?;
        GraphCover::build(&base, vertex_types, edge_shifts)
    }

    /// DOT export of the cover graph with one rank block per level.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph cover {\n");
        let levels = self.base.num_levels();
        for lv in 0..levels {
            let level = -(lv as i64);
            s.push_str("  { rank=same;");
            for (i, v) in self.vertices.iter().enumerate() {
                if v.level == level {
                    s.push_str(&format!(
                        " c{i} [label=\"v{}s{} g={}\"];",
                        v.base_vertex, v.sheet, v.genus
                    ));
                }
            }
            s.push_str(" }\n");
        }
        for e in &self.edges {
            s.push_str(&format!(
                "  c{} -- c{} [label=\"e{}s{} k={}\"];\n",
                e.top, e.bot, e.base_edge, e.sheet, e.kappa_hat
            ));
        }
        s.push_str("}\n");
        s
    }
}

fn increment(gauge: &mut [i64], k: i64) -> bool {
    for g in gauge.iter_mut() {
        *g += 1;
        if *g < k {
            return true;
        }
        *g = 0;
    }
    false
}

fn serialize_cover_data(d: &[i64], s: &[i64]) -> Vec<u8> {
    let mut out = Vec::new();
    for &x in d {
        out.extend_from_slice(format!("d{x};").as_bytes());
    }
    for &x in s {
        out.extend_from_slice(format!("s{x};").as_bytes());
    }
    out
}

fn relabel_base(g: &EnhancedLevelGraph, perm: &[usize]) -> EnhancedLevelGraph {
    let mut vertices = vec![(0i64, 0i64); g.vertices.len()];
    for (v, vd) in g.vertices.iter().enumerate() {
        vertices[perm[v]] = (vd.genus, vd.level);
    }
    // Keep edges in a deterministic sorted order under the new labels.
    let mut edges: Vec<(usize, usize, i64)> = g
        .edges
        .iter()
        .map(|e| {
            let a = (perm[e.ends[0].vertex], e.ends[0].kappa);
            let b = (perm[e.ends[1].vertex], e.ends[1].kappa);
            if e.ends[0].kappa == 0 && a.0 > b.0 {
                (b.0, a.0, 0)
            } else {
                (a.0, b.0, a.1)
            }
        })
        .collect();
    edges.sort_unstable();
    let legs: Vec<(usize, usize, i64)> = g
        .legs
        .iter()
        .map(|l| (perm[l.vertex], l.label, l.order))
        .collect();
    EnhancedLevelGraph::assemble(g.k, &vertices, &edges, &legs)
}

/// Transports shifts through the relabeling, tracking horizontal flips.
fn transport_shifts(
    old: &EnhancedLevelGraph,
    perm: &[usize],
    new: &EnhancedLevelGraph,
    shifts: &[i64],
) -> (Vec<i64>, Vec<bool>) {
    // Deterministically match each old edge to a distinct new edge with the
    // same decorated endpoints.
    let mut used = vec![false; new.edges.len()];
    let mut s_out = vec![0i64; new.edges.len()];
    let mut flip_out = vec![false; new.edges.len()];
    for (e, edge) in old.edges.iter().enumerate() {
        let a = (perm[edge.ends[0].vertex], edge.ends[0].kappa);
        let b = (perm[edge.ends[1].vertex], edge.ends[1].kappa);
        let mut found = false;
        for (ne, nedge) in new.edges.iter().enumerate() {
            if used[ne] {
                continue;
            }
            let na = (nedge.ends[0].vertex, nedge.ends[0].kappa);
            let nb = (nedge.ends[1].vertex, nedge.ends[1].kappa);
            if (na, nb) == (a, b) {
                used[ne] = true;
                s_out[ne] = shifts[e];
                flip_out[ne] = false;
                found = true;
                break;
            }
            if (na, nb) == (b, a) && edge.ends[0].kappa == 0 {
                used[ne] = true;
                s_out[ne] = shifts[e];
                flip_out[ne] = true;
                found = true;
                break;
            }
        }
        assert!(found, "relabeled edge not found");
    }
    (s_out, flip_out)
}

fn fnv64_hex(bytes: &[u8]) -> String {
    // FNV-1a, stable non-cryptographic id for report cross-references.
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// All covers of a base graph modulo equivalence, deterministic order.
/// Disconnected covers are included (they encode proper powers); use
/// [`GraphCover::is_connected`] to restrict to boundary strata of the
/// primitive locus.
pub fn enumerate_covers(base: &EnhancedLevelGraph) -> Result<Vec<GraphCover>, GraphError> {
    let mut d_options: Vec<Vec<i64>> = Vec::with_capacity(base.vertices.len());
    for v in 0..base.vertices.len() {
        let vsig = base.vertex_signature(v);
        let opts: Vec<i64> = vsig
            .power_divisors()
            .into_iter()
            .filter(|&d| {
                vsig.reduce(d)
                    .and_then(|r| r.cover_signature())
                    .is_ok()
            })
            .collect();
        if opts.is_empty() {
            return Ok(Vec::new());
        }
        d_options.push(opts);
    }
    let fibers: Vec<i64> = (0..base.edges.len())
        .map(|e| cover_edge_enhancement(base.k, base.edges[e].ends[0].kappa).0)
        .collect();
    let mut out: Vec<GraphCover> = Vec::new();
    let mut seen: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
    let mut d_idx = vec![0usize; base.vertices.len()];
    loop {
        let d: Vec<i64> = d_idx
            .iter()
            .enumerate()
            .map(|(v, &i)| d_options[v][i])
            .collect();
        let mut shifts = vec![0i64; base.edges.len()];
        loop {
            if let Ok(cover) = GraphCover::build(base, d.clone(), shifts.clone()) {
                let key = cover.canonical_form();
                if !seen.contains_key(&key) {
                    seen.insert(key, ());
                    out.push(cover);
                }
            }
            // Next shift tuple.
            let mut done = true;
            for (e, s) in shifts.iter_mut().enumerate() {
                *s += 1;
                if *s < fibers[e] {
                    done = false;
                    break;
                }
                *s = 0;
            }
            if done {
                break;
            }
        }
        // Next d tuple.
        let mut done = true;
        for (v, i) in d_idx.iter_mut().enumerate() {
            *i += 1;
            if *i < d_options[v].len() {
                done = false;
                break;
            }
            *i = 0;
        }
        if done {
            break;
        }
    }
    Ok(out)
}

/// Machine-readable validation report.
#[derive(Debug, Clone, Serialize)]
pub struct CoverReport {
    pub ok: bool,
    pub violations: Vec<CoverViolation>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CoverViolation {
    pub code: String,
    pub detail: String,
}

fn violation(code: &str, detail: String) -> CoverViolation {
    CoverViolation {
        code: code.into(),
        detail,
    }
}

/// Checks every structural invariant of a cover and reports all failures.
pub fn validate_cover(c: &GraphCover) -> CoverReport {
    let mut v = Vec::new();
    let k = c.k();
    // Vertex fibers and deck transitivity.
    for (bv, &d) in c.vertex_types.iter().enumerate() {
        if d < 1 || k % d != 0 {
            v.push(violation("DeckOrder", format!("vertex {bv}: d = {d} does not divide k")));
            continue;
        }
        let fiber: Vec<usize> = c.cover_vertices_over(bv).collect();
        if fiber.len() != d as usize {
            v.push(violation(
                "DeckOrder",
                format!("vertex {bv}: fiber size {} != d {}", fiber.len(), d),
            ));
        }
        // tau must act transitively on the fiber.
        let mut cur = fiber[0];
        let mut visited = vec![fiber[0]];
        for _ in 1..fiber.len() {
            cur = c.tau_vertex(cur);
            visited.push(cur);
        }
        visited.sort_unstable();
        let mut expect = fiber.clone();
        expect.sort_unstable();
        if visited != expect {
            v.push(violation("DeckOrder", format!("vertex {bv}: tau not transitive on fiber")));
        }
    }
    // Edge fibers, enhancements, level equivariance.
    for (be, edge) in c.base.edges.iter().enumerate() {
        let kappa = edge.ends[0].kappa;
        let (fiber, kappa_hat) = cover_edge_enhancement(k, kappa);
        let got = c.cover_edges_over(be).len() as i64;
        if got != fiber {
            v.push(violation("DeckOrder", format!("edge {be}: fiber {got} != gcd {fiber}")));
        }
        for ce in c.cover_edges_over(be) {
            let e = &c.edges[ce];
            if e.kappa_hat != kappa_hat {
                v.push(violation(
                    "EnhancementLift",
                    format!("cover edge {ce}: kappa_hat {} != {}", e.kappa_hat, kappa_hat),
                ));
            }
            if c.vertices[e.top].level != c.base.vertices[edge.ends[0].vertex].level
                || c.vertices[e.bot].level != c.base.vertices[edge.ends[1].vertex].level
            {
                v.push(violation("LevelEquivariance", format!("cover edge {ce} level mismatch")));
            }
            if c.vertices[e.top].base_vertex != edge.ends[0].vertex
                || c.vertices[e.bot].base_vertex != edge.ends[1].vertex
            {
                v.push(violation("QuotientMismatch", format!("cover edge {ce} endpoints")));
            }
        }
    }
    // Per-cover-vertex degree sums: sum of lifted orders = 2 g_hat - 2.
    for (cv, cvert) in c.vertices.iter().enumerate() {
        let mut sum = 0i64;
        for leg in &c.legs {
            if leg.vertex == cv {
                sum += leg.order;
            }
        }
        for e in &c.edges {
            if e.top == cv {
                sum += if e.kappa_hat == 0 { -1 } else { e.kappa_hat - 1 };
            }
            if e.bot == cv {
                sum += if e.kappa_hat == 0 { -1 } else { -e.kappa_hat - 1 };
            }
        }
        if sum != 2 * cvert.genus - 2 {
            v.push(violation(
                "DegreeSum",
                format!("cover vertex {cv}: order sum {sum} != 2g-2 = {}", 2 * cvert.genus - 2),
            ));
        }
    }
    // Quotient round-trip.
    let q = c.quotient();
    if q.canonical_form() != c.base.canonical_form() {
        v.push(violation("QuotientMismatch", "quotient differs from base".into()));
    }
    CoverReport {
        ok: v.is_empty(),
        violations: v,
    }
}
