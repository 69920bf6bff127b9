//! Prong-matchings, the level rotation action, twist and simple twist
//! lattices, and orbit counts on the cover graph.
//!
//! All data lives on tau-orbits of vertical cover edges: a matching is an
//! offset in Z/kappa_hat per orbit, and the integer vector n in Z^L acts by
//! adding sum of n_p over the passages crossed by the orbit. The twist group
//! is the kernel of that action, the simple twist group the diagonal lattice
//! of per-passage lcms.

use crate::cover::GraphCover;
use crate::lattice;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TwistError {
    #[error("rotation vector has length {0}, expected {1}")]
    DimensionMismatch(usize, usize),
    #[error("brute force size {0} exceeds cap {1}")]
    BruteForceCap(u128, u64),
    #[error("orbit count mismatch: formula {formula} != brute force {brute}")]
    OrbitCountMismatch { formula: u128, brute: u128 },
}

/// One tau-orbit of vertical cover edges with its prong count and the level
/// passages it crosses.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeOrbit {
    /// Representative cover edge id.
    pub rep: usize,
    /// Base edge id.
    pub base_edge: usize,
    /// Orbit size (cover edges over the base edge).
    pub size: i64,
    pub kappa_hat: i64,
    /// Crossed passages, 1-based: passage p sits between level -(p-1) and -p.
    pub passages: Vec<usize>,
}

/// Vertical-edge data of a cover, the input to all twist computations.
#[derive(Debug, Clone, Serialize)]
pub struct ProngData {
    pub num_passages: usize,
    pub orbits: Vec<EdgeOrbit>,
}

impl ProngData {
    pub fn from_cover(c: &GraphCover) -> ProngData {
        let mut orbits = Vec::new();
        for (e, edge) in c.base.edges.iter().enumerate() {
            if edge.is_horizontal_in(&c.base) {
                continue;
            }
            let range = c.cover_edges_over(e);
            let rep = range.start;
            orbits.push(EdgeOrbit {
                rep,
                base_edge: e,
                size: c.edge_fiber(e),
                kappa_hat: c.edges[rep].kappa_hat,
                passages: c.base.crossed_passages(e),
            });
        }
        ProngData {
            num_passages: c.num_passages(),
            orbits,
        }
    }

    /// Test helper: orbits with given kappa_hat and crossing sets.
    pub fn synthetic(num_passages: usize, orbits: &[(i64, &[usize])]) -> ProngData {
        ProngData {
            num_passages,
            orbits: orbits
                .iter()
                .enumerate()
                .map(|(i, &(kappa_hat, passages))| EdgeOrbit {
                    rep: i,
                    base_edge: i,
                    size: 1,
                    kappa_hat,
                    passages: passages.to_vec(),
                })
                .collect(),
        }
    }

    pub fn total_matchings(&self) -> u128 {
        self.orbits.iter().map(|o| o.kappa_hat as u128).product()
    }
}

/// A global prong-matching: one offset per tau-orbit of vertical edges, the
/// values on the rest of the orbit being forced by equivariance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProngMatching {
    pub offsets: Vec<i64>,
}

/// All global prong-matchings, in mixed-radix order; exactly the product of
/// the kappa_hat over orbits, one (empty) matching if there are none.
pub fn global_prong_matchings(data: &ProngData) -> Vec<ProngMatching> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; data.orbits.len()];
    loop {
        out.push(ProngMatching {
            offsets: cur.clone(),
        });
        let mut done = true;
        for (i, c) in cur.iter_mut().enumerate() {
            *c += 1;
            if *c < data.orbits[i].kappa_hat {
                done = false;
                break;
            }
            *c = 0;
        }
        if done {
            break;
        }
    }
    out
}

/// The level rotation action of n in Z^L: each crossed passage shifts the
/// matching by n_p mod kappa_hat.
pub fn rotation_action(
    data: &ProngData,
    n: &[i64],
    pm: &ProngMatching,
) -> Result<ProngMatching, TwistError> {
    if n.len() != data.num_passages {
        return Err(TwistError::DimensionMismatch(n.len(), data.num_passages));
    }
    let offsets = data
        .orbits
        .iter()
        .zip(&pm.offsets)
        .map(|(o, &s)| {
            let shift: i64 = o.passages.iter().map(|&p| n[p - 1]).sum();
            (s + shift).rem_euclid(o.kappa_hat)
        })
        .collect();
    Ok(ProngMatching { offsets })
}

/// Integer sublattice of Z^L, as a Hermite-form basis with its covolume.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TwistLattice {
    pub rank: usize,
    pub basis: Vec<Vec<i64>>,
    pub determinant: i64,
}

/// The twist group: rotations fixing every prong-matching, i.e.
/// kappa_hat | sum of n_p over crossed passages, for every orbit.
pub fn twist_group(data: &ProngData) -> TwistLattice {
    let num_vars = data.num_passages;
    if num_vars == 0 {
        return TwistLattice {
            rank: 0,
            basis: Vec::new(),
            determinant: 1,
        };
    }
    let coeffs: Vec<Vec<i64>> = data
        .orbits
        .iter()
        .map(|o| {
            let mut row = vec![0i64; num_vars];
            for &p in &o.passages {
                row[p - 1] = 1;
            }
            row
        })
        .collect();
    let moduli: Vec<i64> = data.orbits.iter().map(|o| o.kappa_hat).collect();
    let basis = lattice::congruence_lattice(&coeffs, &moduli, num_vars);
    let determinant = lattice::lattice_determinant(&basis) as i64;
    TwistLattice {
        rank: basis.len(),
        basis,
        determinant,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimpleTwistReport {
    /// ell_p: lcm of kappa_hat over orbits crossing passage p.
    pub ell: Vec<i64>,
    /// Diagonal basis of the simple twist group.
    pub stw_basis: Vec<Vec<i64>>,
    pub stw_det: i64,
    pub tw: TwistLattice,
    /// K = [Tw : sTw] = det(sTw) / det(Tw).
    pub index_k: i64,
    /// m[orbit][j] = ell / kappa_hat for each crossed passage (paired with
    /// `passages` of the orbit).
    pub m_exponents: Vec<Vec<i64>>,
}

pub fn simple_twist_and_index(data: &ProngData) -> SimpleTwistReport {
    let num = data.num_passages;
    let mut ell = vec![1i64; num];
    for o in &data.orbits {
        for &p in &o.passages {
            ell[p - 1] = lcm(ell[p - 1], o.kappa_hat);
        }
    }
    let stw_basis: Vec<Vec<i64>> = (0..num)
        .map(|i| {
            let mut row = vec![0i64; num];
            row[i] = ell[i];
            row
        })
        .collect();
    let stw_det: i64 = ell.iter().product();
    let tw = twist_group(data);
    let index_k = if tw.determinant == 0 {
        1
    } else {
        stw_det / tw.determinant
    };
    let m_exponents = data
        .orbits
        .iter()
        .map(|o| {
            o.passages
                .iter()
                .map(|&p| ell[p - 1] / o.kappa_hat)
                .collect()
        })
        .collect();
    SimpleTwistReport {
        ell,
        stw_basis,
        stw_det,
        tw,
        index_k,
        m_exponents,
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitCountReport {
    pub matchings_total: u128,
    pub orbit_count: u128,
    /// Brute-force recount, when within the cap.
    pub brute_force: Option<u128>,
    pub cap: u64,
}

/// Orbits of the rotation action on global prong-matchings. The action is by
/// translations of the product group, so every orbit has the size of the
/// image subgroup and the count is total / [Z^L : Tw]. The brute force
/// recount must agree whenever it runs.
pub fn prong_orbit_count(data: &ProngData, cap: u64) -> Result<OrbitCountReport, TwistError> {
    let total = data.total_matchings();
    let tw = twist_group(data);
    let image = tw.determinant.max(1) as u128;
    debug_assert_eq!(total % image, 0);
    let formula = total / image;
    let brute = if total <= cap as u128 {
        let b = brute_force_orbits(data);
        if b != formula {
            return Err(TwistError::OrbitCountMismatch { formula, brute: b });
        }
        Some(b)
    } else {
        None
    };
    Ok(OrbitCountReport {
        matchings_total: total,
        orbit_count: formula,
        brute_force: brute,
        cap,
    })
}

fn brute_force_orbits(data: &ProngData) -> u128 {
    let all = global_prong_matchings(data);
    let index_of = |pm: &ProngMatching| -> usize {
        let mut idx = 0usize;
        for (i, o) in data.orbits.iter().enumerate().rev() {
            idx = idx * o.kappa_hat as usize + pm.offsets[i] as usize;
        }
        idx
    };
    let mut seen = vec![false; all.len()];
    let mut count = 0u128;
    for start in 0..all.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        // Flood fill with the L generators and their inverses.
        let mut stack = vec![all[start].clone()];
        seen[start] = true;
        while let Some(pm) = stack.pop() {
            for p in 0..data.num_passages {
                for step in [1i64, -1] {
                    let mut n = vec![0i64; data.num_passages];
                    n[p] = step;
                    let next = rotation_action(data, &n, &pm).unwrap();
                    let idx = index_of(&next);
                    if !seen[idx] {
                        seen[idx] = true;
                        stack.push(next);
                    }
                }
            }
        }
    }
    count
}

#[derive(Debug, Clone, Serialize)]
pub struct SlrtReport {
    pub pass: bool,
    /// Per orbit: (sum of ell over crossed passages, kappa_hat * sum of m).
    pub exponents: Vec<(i64, i64)>,
}

/// Exponent identity of the simple-rotation parametrization: the image of
/// (s_p) -> (s_p^{ell_p}, prod s_p^{ell_p/kappa_hat}) satisfies the torus
/// equation r_{e-} ... r_{e+-1} = rho^kappa identically. In exponents:
/// sum of ell_p over crossed passages = kappa_hat * sum of (ell_p/kappa_hat).
pub fn slrt_parametrization_check(data: &ProngData) -> SlrtReport {
    let report = simple_twist_and_index(data);
    let mut exponents = Vec::new();
    let mut pass = true;
    for (o, ms) in data.orbits.iter().zip(&report.m_exponents) {
        let lhs: i64 = o.passages.iter().map(|&p| report.ell[p - 1]).sum();
        let rhs: i64 = o.kappa_hat * ms.iter().sum::<i64>();
        if lhs != rhs {
            pass = false;
        }
        exponents.push((lhs, rhs));
    }
    SlrtReport { pass, exponents }
}

/// Report in the wire format: {"L", "ell", "tw_basis", "stw_det", "tw_det",
/// "K", "orbit_count", "matchings_total"}.
pub fn twist_report_json(data: &ProngData, cap: u64) -> Result<serde_json::Value, TwistError> {
    let simple = simple_twist_and_index(data);
    let orbits = prong_orbit_count(data, cap)?;
    Ok(serde_json::json!({
        "L": data.num_passages,
        "ell": simple.ell,
        "tw_basis": simple.tw.basis,
        "stw_det": simple.stw_det,
        "tw_det": simple.tw.determinant,
        "K": simple.index_k,
        "orbit_count": orbits.orbit_count as u64,
        "matchings_total": orbits.matchings_total as u64,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{enumerate_covers, GraphCover};
    use crate::graph::EnhancedLevelGraph;

    /// Three-level chain with kappa_hat (2, 2, 3): e0 crosses passage 1,
    /// e1 crosses passage 2, e2 crosses both.
    fn chain() -> ProngData {
        ProngData::synthetic(2, &[(2, &[1]), (2, &[2]), (3, &[1, 2])])
    }

    #[test]
    fn matching_counts() {
        let d = ProngData::synthetic(1, &[(2, &[1]), (3, &[1])]);
        assert_eq!(global_prong_matchings(&d).len(), 6);
        let empty = ProngData::synthetic(0, &[]);
        assert_eq!(global_prong_matchings(&empty).len(), 1);
        let single = ProngData::synthetic(1, &[(3, &[1])]);
        assert_eq!(global_prong_matchings(&single).len(), 3);
    }

    #[test]
    fn gamma_a_primitive_cover_has_one_matching() {
        let g = EnhancedLevelGraph::assemble(
            2,
            &[(1, 0), (1, -1)],
            &[(0, 1, 2)],
            &[(1, 0, 2), (1, 1, 2)],
        );
        let c = GraphCover::build(&g, vec![1, 1], vec![0]).unwrap();
        let data = ProngData::from_cover(&c);
        assert_eq!(data.orbits.len(), 1);
        assert_eq!(data.orbits[0].kappa_hat, 1);
        assert_eq!(global_prong_matchings(&data).len(), 1);
    }

    #[test]
    fn rotation_action_examples() {
        let d = ProngData::synthetic(1, &[(2, &[1]), (3, &[1])]);
        let pm = ProngMatching { offsets: vec![0, 0] };
        let r = rotation_action(&d, &[1], &pm).unwrap();
        assert_eq!(r.offsets, vec![1, 1]);
        let r = rotation_action(&d, &[6], &pm).unwrap();
        assert_eq!(r.offsets, vec![0, 0]);
        let r = rotation_action(&d, &[0], &pm).unwrap();
        assert_eq!(r.offsets, vec![0, 0]);
        assert!(matches!(
            rotation_action(&d, &[1, 2], &pm),
            Err(TwistError::DimensionMismatch(2, 1))
        ));
    }

    #[test]
    fn rotation_is_group_action() {
        let d = chain();
        let pm = ProngMatching {
            offsets: vec![1, 0, 2],
        };
        let a = [3i64, -2];
        let b = [-1i64, 4];
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let lhs = rotation_action(&d, &ab, &pm).unwrap();
        let rhs = rotation_action(&d, &a, &rotation_action(&d, &b, &pm).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn twist_group_examples() {
        // L=1, kappa_hat (2,3): 6Z.
        let d = ProngData::synthetic(1, &[(2, &[1]), (3, &[1])]);
        let tw = twist_group(&d);
        assert_eq!(tw.basis, vec![vec![6]]);
        assert_eq!(tw.determinant, 6);
        // Three-level chain: determinant 12.
        let tw = twist_group(&chain());
        assert_eq!(tw.determinant, 12);
        // Single edge kappa_hat 1: all of Z.
        let d = ProngData::synthetic(1, &[(1, &[1])]);
        assert_eq!(twist_group(&d).basis, vec![vec![1]]);
    }

    #[test]
    fn twist_group_membership_is_exactly_fixing_all_matchings() {
        let d = chain();
        let tw = twist_group(&d);
        let matchings = global_prong_matchings(&d);
        for n1 in -6i64..=6 {
            for n2 in -6i64..=6 {
                let n = vec![n1, n2];
                let fixes_all = matchings
                    .iter()
                    .all(|pm| rotation_action(&d, &n, pm).unwrap() == *pm);
                let in_tw = in_lattice(&tw.basis, &n);
                assert_eq!(fixes_all, in_tw, "n = {n:?}");
            }
        }
    }

    fn in_lattice(basis: &[Vec<i64>], v: &[i64]) -> bool {
        let mut v: Vec<i64> = v.to_vec();
        for row in basis {
            let pivot = row.iter().position(|&x| x != 0).unwrap();
            if v[pivot] % row[pivot] != 0 {
                return false;
            }
            let q = v[pivot] / row[pivot];
            for (j, &x) in row.iter().enumerate() {
                v[j] -= q * x;
            }
        }
        v.iter().all(|&x| x == 0)
    }

    #[test]
    fn simple_twist_chain_example() {
        let report = simple_twist_and_index(&chain());
        assert_eq!(report.ell, vec![6, 6]);
        assert_eq!(report.stw_det, 36);
        assert_eq!(report.tw.determinant, 12);
        assert_eq!(report.index_k, 3);
        // m for the kappa_hat 3 orbit crossing both passages: (2, 2);
        // for the single-passage orbits: 6/2 = 3.
        assert_eq!(report.m_exponents[0], vec![3]);
        assert_eq!(report.m_exponents[1], vec![3]);
        assert_eq!(report.m_exponents[2], vec![2, 2]);
    }

    #[test]
    fn k_is_one_for_single_passage() {
        for orbits in [
            vec![(2i64, vec![1usize]), (3, vec![1])],
            vec![(4, vec![1]), (6, vec![1]), (5, vec![1])],
        ] {
            let d = ProngData::synthetic(
                1,
                &orbits
                    .iter()
                    .map(|(kh, ps)| (*kh, ps.as_slice()))
                    .collect::<Vec<_>>(),
            );
            assert_eq!(simple_twist_and_index(&d).index_k, 1);
        }
    }

    #[test]
    fn orbit_count_examples() {
        let d = ProngData::synthetic(1, &[(2, &[1]), (3, &[1])]);
        let r = prong_orbit_count(&d, 10_000).unwrap();
        assert_eq!(r.orbit_count, 1);
        assert_eq!(r.brute_force, Some(1));
        let d = ProngData::synthetic(1, &[(2, &[1]), (2, &[1])]);
        let r = prong_orbit_count(&d, 10_000).unwrap();
        assert_eq!(r.orbit_count, 2);
        let d = ProngData::synthetic(1, &[(7, &[1])]);
        let r = prong_orbit_count(&d, 10_000).unwrap();
        assert_eq!(r.orbit_count, 1);
        // Chain: 12 matchings, det 12, one orbit.
        let r = prong_orbit_count(&chain(), 10_000).unwrap();
        assert_eq!(r.orbit_count, 1);
        assert_eq!(r.brute_force, Some(1));
    }

    #[test]
    fn orbit_count_brute_force_over_enumerated_covers() {
        let g = EnhancedLevelGraph::assemble(
            2,
            &[(1, 0), (0, -1)],
            &[(0, 1, 2), (0, 1, 2)],
            &[(1, 0, 2), (1, 1, 2)],
        );
        for c in enumerate_covers(&g).unwrap() {
            let data = ProngData::from_cover(&c);
            prong_orbit_count(&data, 10_000).unwrap();
        }
    }

    #[test]
    fn m_exponents_are_integral_over_covers() {
        let g = EnhancedLevelGraph::assemble(
            2,
            &[(1, 0), (1, -1)],
            &[(0, 1, 2)],
            &[(1, 0, 2), (1, 1, 2)],
        );
        for c in enumerate_covers(&g).unwrap() {
            let data = ProngData::from_cover(&c);
            let rep = simple_twist_and_index(&data);
            for (o, ms) in data.orbits.iter().zip(&rep.m_exponents) {
                for (j, &p) in o.passages.iter().enumerate() {
                    assert_eq!(ms[j] * o.kappa_hat, rep.ell[p - 1]);
                }
            }
        }
    }

    #[test]
    fn slrt_identity_holds() {
        assert!(slrt_parametrization_check(&chain()).pass);
        let d = ProngData::synthetic(1, &[(2, &[1]), (3, &[1])]);
        assert!(slrt_parametrization_check(&d).pass);
        let empty = ProngData::synthetic(0, &[]);
        assert!(slrt_parametrization_check(&empty).pass);
    }
}
