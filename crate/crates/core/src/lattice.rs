//! Exact integer lattice arithmetic: Hermite-style row normal form, integer
//! kernels, and lattice determinants. Everything runs in i128 internally; the
//! matrices here are tiny (rank = number of level passages).

/// Row Hermite normal form of the lattice spanned by `rows`.
///
/// Returns a basis with positive pivots, entries above each pivot reduced to
/// `[0, pivot)`, zero rows dropped. The output is canonical for the row
/// lattice.
pub fn row_hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0usize;
    for c in 0..ncols {
        loop {
            let mut piv: Option<usize> = None;
            for i in r..a.len() {
                if a[i][c] != 0 && piv.is_none_or(|p| a[i][c].abs() < a[p][c].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            a.swap(r, p);
            let mut clean = true;
            for i in r + 1..a.len() {
                if a[i][c] != 0 {
                    let q = rounded_div(a[i][c], a[r][c]);
                    for j in 0..ncols {
                        a[i][j] -= q * a[r][j];
                    }
                    if a[i][c] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if r < a.len() && a[r][c] != 0 {
            if a[r][c] < 0 {
                for j in 0..ncols {
                    a[r][j] = -a[r][j];
                }
            }
            for i in 0..r {
                let q = a[i][c].div_euclid(a[r][c]);
                if q != 0 {
                    for j in 0..ncols {
                        a[i][j] -= q * a[r][j];
                    }
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a.iter()
        .map(|row| row.iter().map(|&x| x as i64).collect())
        .collect()
}

fn rounded_div(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Basis of the integer kernel `{x : a x = 0}` via unimodular column
/// reduction.
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let nrows = a.len();
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| i128::from(i == j)).collect())
        .collect();
    // u is ncols x ncols; columns of u track the column operations on m.
    let mut lead = 0usize;
    for r in 0..nrows {
        loop {
            let mut piv: Option<usize> = None;
            for j in lead..ncols {
                if m[r][j] != 0 && piv.is_none_or(|p| m[r][j].abs() < m[r][p].abs()) {
                    piv = Some(j);
                }
            }
            let Some(p) = piv else { break };
            for row in m.iter_mut() {
                row.swap(lead, p);
            }
            for row in u.iter_mut() {
                row.swap(lead, p);
            }
            let mut clean = true;
            for j in lead + 1..ncols {
                if m[r][j] != 0 {
                    let q = rounded_div(m[r][j], m[r][lead]);
                    for row in m.iter_mut() {
                        let t = q * row[lead];
                        row[j] -= t;
                    }
                    for row in u.iter_mut() {
                        let t = q * row[lead];
                        row[j] -= t;
                    }
                    if m[r][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if lead < ncols && m[r][lead] != 0 {
            lead += 1;
        }
    }
    (lead..ncols)
        .map(|j| (0..ncols).map(|i| u[i][j] as i64).collect())
        .collect()
}

/// |det| of a square integer matrix by fraction-free Bareiss elimination.
pub fn det_abs(mat: &[Vec<i64>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut prev: i128 = 1;
    let mut sign: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]).abs()
}

/// Sublattice `{n in Z^num_vars : sum_j coeffs[r][j] n_j = 0 mod moduli[r]}`
/// returned as a row-HNF basis. Full rank because the product of moduli times
/// the identity is contained in it.
pub fn congruence_lattice(coeffs: &[Vec<i64>], moduli: &[i64], num_vars: usize) -> Vec<Vec<i64>> {
    assert_eq!(coeffs.len(), moduli.len());
    // Kernel of [coeffs | -diag(moduli)] projected to the first block.
    let nrows = coeffs.len();
    let ncols = num_vars + nrows;
    let mut m: Vec<Vec<i64>> = Vec::with_capacity(nrows);
    for (r, row) in coeffs.iter().enumerate() {
        let mut full = vec![0i64; ncols];
        full[..num_vars].copy_from_slice(&row[..num_vars]);
        full[num_vars + r] = -moduli[r];
        m.push(full);
    }
    let kernel = integer_kernel(&m, ncols);
    let projected: Vec<Vec<i64>> = kernel
        .into_iter()
        .map(|v| v[..num_vars].to_vec())
        .collect();
    row_hnf(&projected)
}

/// Determinant (covolume) of a full-rank lattice given by basis rows.
pub fn lattice_determinant(basis: &[Vec<i64>]) -> i128 {
    det_abs(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_canonicalizes() {
        let b1 = row_hnf(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(b1, vec![vec![2, 0], vec![0, 3]]);
        // Redundant generators of the lattice {(x,y): 2|x, y = 3x/2 mod 6}.
        let b2 = row_hnf(&[vec![2, 3], vec![2, -3], vec![4, 0]]);
        assert_eq!(b2, vec![vec![2, 3], vec![0, 6]]);
        assert_eq!(lattice_determinant(&b2), 12);
    }

    #[test]
    fn kernel_of_small_matrix() {
        // x + y + z = 0 over Z.
        let k = integer_kernel(&[vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
        // Rank-0 kernel.
        let k = integer_kernel(&[vec![1, 0], vec![0, 1]], 2);
        assert!(k.is_empty());
    }

    #[test]
    fn congruence_lattice_matches_exhaustive_search() {
        // {(n1,n2): 2|n1, 2|n2, 3|(n1+n2)} has determinant 12.
        let basis = congruence_lattice(
            &[vec![1, 0], vec![0, 1], vec![1, 1]],
            &[2, 2, 3],
            2,
        );
        assert_eq!(lattice_determinant(&basis), 12);
        // Exhaustive oracle on a 12x12 box.
        let mut expected = Vec::new();
        let mut got = Vec::new();
        for n1 in -12i64..=12 {
            for n2 in -12i64..=12 {
                if n1 % 2 == 0 && n2 % 2 == 0 && (n1 + n2) % 3 == 0 {
                    expected.push((n1, n2));
                }
                if in_lattice(&basis, &[n1, n2]) {
                    got.push((n1, n2));
                }
            }
        }
        assert_eq!(expected, got);
    }

    fn in_lattice(basis: &[Vec<i64>], v: &[i64]) -> bool {
        // Row-HNF basis: solve by back-substitution on pivot columns.
        let mut v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for row in basis {
            let pivot_col = row.iter().position(|&x| x != 0).unwrap();
            let p = row[pivot_col] as i128;
            if v[pivot_col] % p != 0 {
                return false;
            }
            let q = v[pivot_col] / p;
            for (j, &x) in row.iter().enumerate() {
                v[j] -= q * x as i128;
            }
        }
        v.iter().all(|&x| x == 0)
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(det_abs(&[vec![6, 0], vec![0, 2]]), 12);
        assert_eq!(det_abs(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(
            det_abs(&[vec![2, 1, 0], vec![0, 3, 1], vec![1, 0, 1]]),
            7
        );
    }
}
