//! Eigenspace dimensions per level, residue systems with the global residue
//! condition, the per-cover dimension identity, and perturbed-period
//! coordinate shapes.
//!
//! The level-i deformation space of a twisted differential is the
//! zeta-eigenspace of the homology of the level subsurface of the cover,
//! punctured at up-edges and relative at down-edges and marked zeros. Its
//! dimension depends only on the base component data: 2g - 2 + n for a
//! primitive character, and the classical relative count for the trivial
//! one. The residue condition is the abelian condition on the cover in the
//! zeta-eigenspace: coordinates live on tau-orbits of full size k, rows come
//! from connected components above each level, and the per-vertex residue
//! theorems are the relations that make the rank count basis-free.

use crate::cover::GraphCover;
use crate::cyclotomic::{CycElem, CyclotomicField};
use crate::signature::SignatureError;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResidueError {
    #[error("point of order {order} cannot have role {role:?} for k = {k}")]
    InvalidRole { order: i64, role: PointRole, k: i64 },
    #[error("divisor {d} does not divide k = {k} or some order")]
    BadDivisor { d: i64, k: i64 },
    #[error("signature not usable: {0}")]
    Signature(#[from] SignatureError),
    #[error("cover is over an infinite-area signature")]
    InfiniteArea,
    #[error("dimension identity violated: total {total} != expected {expected}")]
    IdentityViolation { total: i64, expected: i64 },
    #[error("perturbed-period shape total {total} != stratum dimension {expected}")]
    ShapeMismatch { total: i64, expected: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointRole {
    /// Marked zeros and down-edge ends: relative homology classes.
    Relative,
    /// Up-edge ends, horizontal ends and marked poles: punctured.
    Puncture,
}

/// Data of one base component of a level: genus, special points with orders
/// and roles, the root order k, and the local primitivity divisor d.
#[derive(Debug, Clone)]
pub struct LevelComponentData {
    pub k: i64,
    pub genus: i64,
    pub d: i64,
    pub points: Vec<(i64, PointRole)>,
}

/// Dimension of the constrained-character homology of one component.
///
/// After the reduction (k, zeta) -> (k/d, zeta^d) on a single component:
/// a primitive character of order >= 2 gives 2g - 2 + n; the trivial
/// character gives the classical relative count 2g + n - 2 (punctures
/// present) or 2g + n - 1 (none).
pub fn eigenspace_dim(data: &LevelComponentData) -> Result<i64, ResidueError> {
    let k = data.k;
    if data.d < 1 || k % data.d != 0 {
        return Err(ResidueError::BadDivisor { d: data.d, k });
    }
    for &(order, role) in &data.points {
        if order % data.d != 0 {
            return Err(ResidueError::BadDivisor { d: data.d, k });
        }
        let expected = if order <= -k {
            PointRole::Puncture
        } else {
            PointRole::Relative
        };
        if role != expected {
            return Err(ResidueError::InvalidRole { order, role, k });
        }
    }
    let k_red = k / data.d;
    let n = data.points.len() as i64;
    if k_red >= 2 {
        Ok(2 * data.genus - 2 + n)
    } else {
        let p = data
            .points
            .iter()
            .filter(|(_, r)| *r == PointRole::Puncture)
            .count() as i64;
        if p >= 1 {
            Ok(2 * data.genus + n - 2)
        } else {
            Ok(2 * data.genus + n - 1)
        }
    }
}

/// Component data of a base vertex inside a cover.
pub fn level_component_data(c: &GraphCover, v: usize) -> LevelComponentData {
    let k = c.k();
    let mut points = Vec::new();
    for l in &c.base.legs {
        if l.vertex == v {
            let role = if l.order <= -k {
                PointRole::Puncture
            } else {
                PointRole::Relative
            };
            points.push((l.order, role));
        }
    }
    for e in &c.base.edges {
        let horizontal = e.is_horizontal_in(&c.base);
        for (side, end) in e.ends.iter().enumerate() {
            if end.vertex != v {
                continue;
            }
            if horizontal {
                points.push((-k, PointRole::Puncture));
            } else if side == 0 {
                points.push((end.kappa - k, PointRole::Relative));
            } else {
                points.push((end.kappa - k, PointRole::Puncture));
            }
        }
    }
    LevelComponentData {
        k,
        genus: c.base.vertices[v].genus,
        d: c.vertex_types[v],
        points,
    }
}

/// One residue coordinate: a tau-orbit of edge ends of full size k, where an
/// equivariant residue can be nonzero. Vertical edges carry one coordinate
/// (the pole at the lower end); horizontal edges carry one per end, coupled
/// by a matching row.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueCoordinate {
    pub base_edge: usize,
    /// End index into the edge: 1 for the vertical pole end, 0 and 1 for the
    /// two ends of a horizontal edge.
    pub end: usize,
    /// Level the residue lives at: the lower level (vertical) or the common
    /// level (horizontal).
    pub level: i64,
    pub horizontal: bool,
}

/// Linear row over the coordinates, with coefficients in Z[zeta].
#[derive(Debug, Clone, Serialize)]
pub struct ResidueRow {
    pub level: i64,
    pub coeffs: Vec<CycElem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidueSystem {
    pub k: i64,
    pub coordinates: Vec<ResidueCoordinate>,
    /// Residue theorems of the cover components, in the eigenspace.
    pub vertex_relations: Vec<ResidueRow>,
    /// One row per level and connected component strictly above it.
    pub grc_rows: Vec<ResidueRow>,
    /// Opposite-residue conditions at horizontal nodes, one per base edge.
    pub matching_rows: Vec<ResidueRow>,
}

impl ResidueSystem {
    /// Rank of the rows binding at a level, as functionals on the admissible
    /// residue space (grc rows modulo the vertex relations).
    pub fn binding_rank(&self, level: i64) -> usize {
        let field = CyclotomicField::new(self.k);
        let relations: Vec<Vec<CycElem>> = self
            .vertex_relations
            .iter()
            .filter(|r| r.level == level)
            .map(|r| r.coeffs.clone())
            .collect();
        let rows: Vec<Vec<CycElem>> = self
            .grc_rows
            .iter()
            .chain(self.matching_rows.iter())
            .filter(|r| r.level == level)
            .map(|r| r.coeffs.clone())
            .collect();
        if rows.is_empty() {
            return 0;
        }
        let mut with_relations = rows;
        with_relations.extend(relations.iter().cloned());
        let r_all = field.rank(&with_relations);
        let r_rel = if relations.is_empty() {
            0
        } else {
            field.rank(&relations)
        };
        r_all - r_rel
    }
}

/// Builds the residue system of a cover.
pub fn grc_system(c: &GraphCover) -> Result<ResidueSystem, ResidueError> {
    let sig = c
        .base
        .ambient_signature()
        .map_err(|_| ResidueError::Signature(SignatureError::EmptySignature))?;
    if !sig.finite_area {
        return Err(ResidueError::InfiniteArea);
    }
    let k = c.k();
    let field = CyclotomicField::new(k);
    // Coordinates: end-orbits of full size k. Vertical edges get one (the
    // pole at the lower end), horizontal edges one per end.
    let mut coord_of: std::collections::BTreeMap<(usize, usize), usize> =
        std::collections::BTreeMap::new();
    let mut coordinates = Vec::new();
    for (e, edge) in c.base.edges.iter().enumerate() {
        if c.edge_fiber(e) != k {
            continue;
        }
        let horizontal = edge.is_horizontal_in(&c.base);
        let level = c.base.vertices[edge.ends[1].vertex].level;
        let ends: &[usize] = if horizontal { &[0, 1] } else { &[1] };
        for &end in ends {
            coord_of.insert((e, end), coordinates.len());
            coordinates.push(ResidueCoordinate {
                base_edge: e,
                end,
                level,
                horizontal,
            });
        }
    }
    let ncoords = coordinates.len();
    // Vertex relations: residue theorem on each cover component, expressed
    // on the orbit representative (sheet 0 of each fiber). The pole-type
    // ends on the component are vertical lower ends and horizontal ends.
    let mut vertex_relations = Vec::new();
    for v in 0..c.base.vertices.len() {
        let rep = c.cover_vertices_over(v).next().unwrap();
        let mut coeffs = vec![field.zero(); ncoords];
        let mut touched = false;
        for ce in &c.edges {
            let horizontal = c.base.edges[ce.base_edge].is_horizontal_in(&c.base);
            if horizontal {
                if ce.top == rep {
                    if let Some(&coord) = coord_of.get(&(ce.base_edge, 0)) {
                        field.add_assign(&mut coeffs[coord], &field.zeta_pow(ce.sheet));
                        touched = true;
                    }
                }
                if ce.bot == rep {
                    if let Some(&coord) = coord_of.get(&(ce.base_edge, 1)) {
                        field.add_assign(&mut coeffs[coord], &field.zeta_pow(ce.sheet));
                        touched = true;
                    }
                }
            } else if ce.bot == rep {
                if let Some(&coord) = coord_of.get(&(ce.base_edge, 1)) {
                    field.add_assign(&mut coeffs[coord], &field.zeta_pow(ce.sheet));
                    touched = true;
                }
            }
        }
        if touched {
            vertex_relations.push(ResidueRow {
                level: c.base.vertices[v].level,
                coeffs,
            });
        }
    }
    // Matching rows: the two branches of a horizontal node carry opposite
    // residues; equivariance reduces each base edge to one row r0 + r1 = 0.
    let mut matching_rows = Vec::new();
    for (e, edge) in c.base.edges.iter().enumerate() {
        if !edge.is_horizontal_in(&c.base) {
            continue;
        }
        let (Some(&c0), Some(&c1)) = (coord_of.get(&(e, 0)), coord_of.get(&(e, 1))) else {
            continue;
        };
        let mut coeffs = vec![field.zero(); ncoords];
        field.add_assign(&mut coeffs[c0], &field.one());
        field.add_assign(&mut coeffs[c1], &field.one());
        matching_rows.push(ResidueRow {
            level: c.base.vertices[edge.ends[0].vertex].level,
            coeffs,
        });
    }
    // GRC rows: for each level i < 0 and each connected component Y of the
    // cover subgraph strictly above i, sum the residues of the edges hanging
    // from Y with lower end at level i.
    let mut grc_rows = Vec::new();
    let min_level = -(c.base.num_passages() as i64);
    for level in (min_level..=-1).rev() {
        // Components of the cover restricted to levels > level.
        let above: Vec<usize> = (0..c.vertices.len())
            .filter(|&cv| c.vertices[cv].level > level)
            .collect();
        if above.is_empty() {
            continue;
        }
        let mut parent: Vec<usize> = (0..c.vertices.len()).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for ce in &c.edges {
            if c.vertices[ce.top].level > level && c.vertices[ce.bot].level > level {
                let a = find(&mut parent, ce.top);
                let b = find(&mut parent, ce.bot);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut component_rows: std::collections::BTreeMap<usize, (Vec<CycElem>, bool)> =
            std::collections::BTreeMap::new();
        for &cv in &above {
            let root = find(&mut parent, cv);
            component_rows
                .entry(root)
                .or_insert_with(|| (vec![field.zero(); ncoords], false));
        }
        for ce in &c.edges {
            if c.vertices[ce.top].level <= level || c.vertices[ce.bot].level != level {
                continue;
            }
            let root = find(&mut parent, ce.top);
            let entry = component_rows.get_mut(&root).unwrap();
            entry.1 = true;
            if let Some(&coord) = coord_of.get(&(ce.base_edge, 1)) {
                field.add_assign(&mut entry.0[coord], &field.zeta_pow(ce.sheet));
            }
        }
        for (_, (coeffs, has_edge)) in component_rows {
            if has_edge {
                grc_rows.push(ResidueRow { level, coeffs });
            }
        }
    }
    Ok(ResidueSystem {
        k,
        coordinates,
        vertex_relations,
        grc_rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelDims {
    pub dims: Vec<i64>,
    pub grc_rank: usize,
}

/// Report of the per-level dimension identity
/// sum of constrained dims = stratum dimension - horizontal edges.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionReport {
    pub per_level: Vec<LevelDims>,
    pub h: usize,
    #[serde(rename = "L")]
    pub num_passages: usize,
    pub total: i64,
    pub expected: i64,
    pub pass: bool,
    pub grc_surrogate: bool,
}

pub fn check_dimension_identity(c: &GraphCover) -> Result<DimensionReport, ResidueError> {
    let sig = c
        .base
        .ambient_signature()
        .map_err(|_| ResidueError::Signature(SignatureError::EmptySignature))?;
    if !sig.finite_area {
        return Err(ResidueError::InfiniteArea);
    }
    let expected_dim = sig.dimension()?;
    let system = grc_system(c)?;
    let num_passages = c.num_passages();
    let h = c.base.horizontal_edges().len();
    let mut per_level = Vec::new();
    let mut total = 0i64;
    for level_idx in 0..=num_passages {
        let level = -(level_idx as i64);
        let mut dims = Vec::new();
        for v in 0..c.base.vertices.len() {
            if c.base.vertices[v].level == level {
                dims.push(eigenspace_dim(&level_component_data(c, v))?);
            }
        }
        let grc_rank = system.binding_rank(level);
        total += dims.iter().sum::<i64>() - grc_rank as i64;
        per_level.push(LevelDims { dims, grc_rank });
    }
    let expected = expected_dim - h as i64;
    let grc_surrogate = !system.coordinates.is_empty()
        && c.vertex_types.iter().enumerate().any(|(v, &d)| {
            d > 1
                && c.base.edges.iter().enumerate().any(|(e, edge)| {
                    system.coordinates.iter().any(|co| co.base_edge == e)
                        && (edge.ends[0].vertex == v || edge.ends[1].vertex == v)
                })
        });
    Ok(DimensionReport {
        per_level,
        h,
        num_passages,
        total,
        expected,
        pass: total == expected,
        grc_surrogate,
    })
}

/// Per-level constrained dimensions (dims sum minus binding rank).
pub fn constrained_level_dims(report: &DimensionReport) -> Vec<i64> {
    report
        .per_level
        .iter()
        .map(|ld| ld.dims.iter().sum::<i64>() - ld.grc_rank as i64)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct PperShape {
    pub h: usize,
    pub levels: usize,
    pub dims_minus_one: Vec<i64>,
    pub total: i64,
}

/// Factor dimensions of the perturbed period chart:
/// C^h x C^(L+1) x prod C^(dim - 1); the total must equal the stratum
/// dimension.
pub fn pper_coordinate_shape(c: &GraphCover) -> Result<PperShape, ResidueError> {
    let report = check_dimension_identity(c)?;
    if !report.pass {
        return Err(ResidueError::IdentityViolation {
            total: report.total,
            expected: report.expected,
        });
    }
    let dims = constrained_level_dims(&report);
    let dims_minus_one: Vec<i64> = dims.iter().map(|d| d - 1).collect();
    let levels = report.num_passages + 1;
    let total = report.h as i64 + levels as i64 + dims_minus_one.iter().sum::<i64>();
    let sig = c.base.ambient_signature().unwrap();
    let expected = sig.dimension()?;
    if total != expected {
        return Err(ResidueError::ShapeMismatch { total, expected });
    }
    Ok(PperShape {
        h: report.h,
        levels,
        dims_minus_one,
        total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{enumerate_covers, GraphCover};
    use crate::graph::{enumerate_boundary_graphs, BoundaryMode, EnhancedLevelGraph, EnumLimits};
    use crate::signature::validate_signature;

    fn gamma_a() -> EnhancedLevelGraph {
        EnhancedLevelGraph::assemble(
            2,
            &[(1, 0), (1, -1)],
            &[(0, 1, 2)],
            &[(1, 0, 2), (1, 1, 2)],
        )
    }

    fn h2_single_tail() -> EnhancedLevelGraph {
        EnhancedLevelGraph::assemble(1, &[(1, 0), (1, -1)], &[(0, 1, 1)], &[(1, 0, 2)])
    }

    fn h2_two_tails() -> EnhancedLevelGraph {
        EnhancedLevelGraph::assemble(
            1,
            &[(1, 0), (1, 0), (0, -1)],
            &[(0, 2, 1), (1, 2, 1)],
            &[(2, 0, 2)],
        )
    }

    fn h2_banana() -> EnhancedLevelGraph {
        EnhancedLevelGraph::assemble(1, &[(1, 0), (0, -1)], &[(0, 1, 1), (0, 1, 1)], &[(1, 0, 2)])
    }

    #[test]
    fn eigenspace_dim_examples() {
        // Gamma_A top: primitive character on a torus with one point.
        let d = LevelComponentData {
            k: 2,
            genus: 1,
            d: 1,
            points: vec![(0, PointRole::Relative)],
        };
        assert_eq!(eigenspace_dim(&d).unwrap(), 1);
        // Gamma_A bottom: two zeros relative, one node pole punctured.
        let d = LevelComponentData {
            k: 2,
            genus: 1,
            d: 1,
            points: vec![
                (2, PointRole::Relative),
                (2, PointRole::Relative),
                (-4, PointRole::Puncture),
            ],
        };
        assert_eq!(eigenspace_dim(&d).unwrap(), 3);
        // Abelian torus with one zero and one node pole.
        let d = LevelComponentData {
            k: 1,
            genus: 1,
            d: 1,
            points: vec![(2, PointRole::Relative), (-2, PointRole::Puncture)],
        };
        assert_eq!(eigenspace_dim(&d).unwrap(), 2);
    }

    #[test]
    fn eigenspace_role_rule_enforced() {
        let d = LevelComponentData {
            k: 2,
            genus: 1,
            d: 1,
            points: vec![(0, PointRole::Puncture)],
        };
        assert!(matches!(
            eigenspace_dim(&d),
            Err(ResidueError::InvalidRole { .. })
        ));
        // Horizontal ends have order exactly -k and are punctures.
        let d = LevelComponentData {
            k: 2,
            genus: 1,
            d: 1,
            points: vec![(-2, PointRole::Puncture), (-2, PointRole::Puncture)],
        };
        assert_eq!(eigenspace_dim(&d).unwrap(), 2);
    }

    #[test]
    fn eigenspace_reduction_order_invariant() {
        // Reducing k=4 by d=4 at once equals reducing by 2 twice.
        let pts = vec![(4, PointRole::Relative), (-8, PointRole::Puncture), (4, PointRole::Relative)];
        let full = LevelComponentData {
            k: 4,
            genus: 2,
            d: 4,
            points: pts.clone(),
        };
        let half = LevelComponentData {
            k: 2,
            genus: 2,
            d: 2,
            points: pts.iter().map(|&(m, r)| (m / 2, r)).collect(),
        };
        assert_eq!(eigenspace_dim(&full).unwrap(), eigenspace_dim(&half).unwrap());
        // And both match the direct trivial-character count.
        let direct = LevelComponentData {
            k: 1,
            genus: 2,
            d: 1,
            points: pts.iter().map(|&(m, r)| (m / 4, r)).collect(),
        };
        assert_eq!(eigenspace_dim(&full).unwrap(), eigenspace_dim(&direct).unwrap());
    }

    #[test]
    fn stratum_dimension_consistency_with_eigenspace() {
        // One-vertex, no-edge graph: eigenspace recipe equals the stratum
        // dimension formula.
        for (k, g, mu) in [
            (2i64, 2i64, vec![2i64, 2]),
            (1, 2, vec![2]),
            (2, 0, vec![-1, -1, -1, -1]),
            (3, 1, vec![1, 2, -3]),
        ] {
            let sig = validate_signature(k, g, &mu).unwrap();
            let data = LevelComponentData {
                k,
                genus: g,
                d: 1,
                points: mu
                    .iter()
                    .map(|&m| {
                        (
                            m,
                            if m <= -k {
                                PointRole::Puncture
                            } else {
                                PointRole::Relative
                            },
                        )
                    })
                    .collect(),
            };
            assert_eq!(eigenspace_dim(&data).unwrap(), sig.dimension().unwrap());
        }
    }

    #[test]
    fn grc_gamma_a_rank_zero() {
        let c = GraphCover::build(&gamma_a(), vec![1, 1], vec![0]).unwrap();
        let sys = grc_system(&c).unwrap();
        assert_eq!(sys.coordinates.len(), 1);
        assert_eq!(sys.binding_rank(-1), 0);
    }

    #[test]
    fn grc_h2_examples() {
        // Two tails: rows r1 = 0, r2 = 0 on the rank-1 admissible space.
        let c = GraphCover::build(&h2_two_tails(), vec![1, 1, 1], vec![0, 0]).unwrap();
        let sys = grc_system(&c).unwrap();
        assert_eq!(sys.coordinates.len(), 2);
        assert_eq!(sys.binding_rank(-1), 1);
        // Single tail: the condition is automatic on the once-punctured torus.
        let c = GraphCover::build(&h2_single_tail(), vec![1, 1], vec![0]).unwrap();
        let sys = grc_system(&c).unwrap();
        assert_eq!(sys.coordinates.len(), 1);
        assert_eq!(sys.binding_rank(-1), 0);
    }

    #[test]
    fn grc_rank_is_basis_independent() {
        // Scaling a coordinate by a power of zeta (choosing another orbit
        // representative) leaves the binding ranks unchanged.
        let c = GraphCover::build(&h2_two_tails(), vec![1, 1, 1], vec![0, 0]).unwrap();
        let mut sys = grc_system(&c).unwrap();
        let field = CyclotomicField::new(sys.k);
        let before: Vec<usize> = (-1..=0).map(|l| sys.binding_rank(l)).collect();
        // Multiply column 0 everywhere by zeta.
        for row in sys.grc_rows.iter_mut().chain(sys.vertex_relations.iter_mut()) {
            let old = row.coeffs[0].clone();
            let mut scaled = field.zero();
            // old * zeta: shift via zeta_pow arithmetic on each basis term.
            for (j, &coef) in old.iter().enumerate() {
                if coef != 0 {
                    let mut t = field.zeta_pow(j as i64 + 1);
                    for x in t.iter_mut() {
                        *x *= coef;
                    }
                    field.add_assign(&mut scaled, &t);
                }
            }
            row.coeffs[0] = scaled;
        }
        let after: Vec<usize> = (-1..=0).map(|l| sys.binding_rank(l)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn identity_hand_verified_cases() {
        // Gamma_A primitive: dims (1, 3), h = 0, total 4.
        let c = GraphCover::build(&gamma_a(), vec![1, 1], vec![0]).unwrap();
        let r = check_dimension_identity(&c).unwrap();
        assert!(r.pass);
        assert_eq!(r.per_level[0].dims, vec![1]);
        assert_eq!(r.per_level[1].dims, vec![3]);
        assert_eq!(r.total, 4);
        assert!(!r.grc_surrogate);
        // Single tail: dims (2, 2).
        let c = GraphCover::build(&h2_single_tail(), vec![1, 1], vec![0]).unwrap();
        let r = check_dimension_identity(&c).unwrap();
        assert!(r.pass);
        assert_eq!(constrained_level_dims(&r), vec![2, 2]);
        // Two tails: dims (4, 1 - 1 = 0).
        let c = GraphCover::build(&h2_two_tails(), vec![1, 1, 1], vec![0, 0]).unwrap();
        let r = check_dimension_identity(&c).unwrap();
        assert!(r.pass);
        assert_eq!(constrained_level_dims(&r), vec![4, 0]);
        assert_eq!(r.total, 4);
        // Banana: dims (3, 1).
        let c = GraphCover::build(&h2_banana(), vec![1, 1], vec![0, 0]).unwrap();
        let r = check_dimension_identity(&c).unwrap();
        assert!(r.pass);
        assert_eq!(constrained_level_dims(&r), vec![3, 1]);
    }

    #[test]
    fn identity_with_split_vertices() {
        // Gamma_A with the top vertex of local type 2: dims (2, 3 - 1).
        let c = GraphCover::build(&gamma_a(), vec![2, 1], vec![0]).unwrap();
        assert!(c.is_connected());
        let r = check_dimension_identity(&c).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.grc_surrogate);
        assert_eq!(constrained_level_dims(&r), vec![2, 2]);
        // Bottom split instead: relation forces the residue to vanish.
        let c = GraphCover::build(&gamma_a(), vec![1, 2], vec![0]).unwrap();
        assert!(c.is_connected());
        let r = check_dimension_identity(&c).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(constrained_level_dims(&r), vec![1, 3]);
        // Both split: disconnected, the identity genuinely fails.
        let c = GraphCover::build(&gamma_a(), vec![2, 2], vec![0]).unwrap();
        assert!(!c.is_connected());
        let r = check_dimension_identity(&c).unwrap();
        assert!(!r.pass);
        assert_eq!(r.total, 5);
    }

    #[test]
    fn identity_sweep_over_strata() {
        for (k, g, mu) in [
            (1i64, 2i64, vec![2i64]),
            (2, 2, vec![2, 2]),
            (2, 0, vec![-1, -1, -1, -1]),
        ] {
            let sig = validate_signature(k, g, &mu).unwrap();
            let graphs =
                enumerate_boundary_graphs(&sig, BoundaryMode::TwoLevel, &EnumLimits::default())
                    .unwrap();
            let mut covers_checked = 0usize;
            for graph in &graphs {
                for cover in enumerate_covers(graph).unwrap() {
                    if !cover.is_connected() {
                        continue;
                    }
                    let r = check_dimension_identity(&cover).unwrap();
                    assert!(
                        r.pass,
                        "identity fails for {:?} types {:?}: {r:?}",
                        sig, cover.vertex_types
                    );
                    covers_checked += 1;
                }
            }
            if k == 2 && g == 2 {
                assert_eq!(covers_checked, 12);
            }
            if k == 1 {
                assert_eq!(covers_checked, 3);
            }
        }
    }

    #[test]
    fn codimension_bound_for_positive_dimensional_covers() {
        // L + h <= P-dim whenever every level is positive-dimensional.
        let sig = validate_signature(1, 2, &[2]).unwrap();
        let pdim = sig.dimension().unwrap() - 1;
        let graphs = enumerate_boundary_graphs(
            &sig,
            BoundaryMode::AllUpTo { levels: 3, edges: 4 },
            &EnumLimits::default(),
        )
        .unwrap();
        let mut positive_seen = 0;
        for graph in &graphs {
            for cover in enumerate_covers(graph).unwrap() {
                if !cover.is_connected() {
                    continue;
                }
                let r = check_dimension_identity(&cover).unwrap();
                assert!(r.pass);
                if constrained_level_dims(&r).iter().all(|&d| d >= 1) {
                    let l = r.num_passages as i64;
                    let h = r.h as i64;
                    assert!(l + h <= pdim, "L={l} h={h} pdim={pdim}");
                    positive_seen += 1;
                }
            }
        }
        assert!(positive_seen > 0);
    }

    #[test]
    fn pper_shapes() {
        // Gamma_A: (0, 2, [0, 2], 4).
        let c = GraphCover::build(&gamma_a(), vec![1, 1], vec![0]).unwrap();
        let s = pper_coordinate_shape(&c).unwrap();
        assert_eq!((s.h, s.levels, s.dims_minus_one.clone(), s.total), (0, 2, vec![0, 2], 4));
        // Smooth one-vertex cover: (0, 1, [dim - 1], dim).
        let sig = validate_signature(2, 2, &[2, 2]).unwrap();
        let g = EnhancedLevelGraph::assemble(2, &[(2, 0)], &[], &[(0, 0, 2), (0, 1, 2)]);
        let c = GraphCover::build(&g, vec![1], vec![]).unwrap();
        let s = pper_coordinate_shape(&c).unwrap();
        assert_eq!((s.h, s.levels, s.dims_minus_one.clone(), s.total), (0, 1, vec![3], 4));
        assert_eq!(s.total, sig.dimension().unwrap());
        // Horizontal banana for (k=1, g=1, mu=(0)): (1, 1, [0], 2).
        let g = EnhancedLevelGraph::assemble(1, &[(0, 0)], &[(0, 0, 0)], &[(0, 0, 0)]);
        let c = GraphCover::build(&g, vec![1], vec![0]).unwrap();
        let s = pper_coordinate_shape(&c).unwrap();
        assert_eq!((s.h, s.levels, s.dims_minus_one.clone(), s.total), (1, 1, vec![0], 2));
    }

    #[test]
    fn pper_total_equals_dimension_whenever_identity_passes() {
        let sig = validate_signature(2, 2, &[2, 2]).unwrap();
        let graphs =
            enumerate_boundary_graphs(&sig, BoundaryMode::TwoLevel, &EnumLimits::default())
                .unwrap();
        for graph in &graphs {
            for cover in enumerate_covers(graph).unwrap() {
                if !cover.is_connected() {
                    continue;
                }
                let s = pper_coordinate_shape(&cover).unwrap();
                assert_eq!(s.total, 4);
            }
        }
    }
}
