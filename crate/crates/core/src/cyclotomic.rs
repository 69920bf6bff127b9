//! Exact linear algebra over the cyclotomic field Q(zeta_k).
//!
//! Elements are integer polynomials in zeta reduced mod the k-th cyclotomic
//! polynomial. Ranks are computed by blowing each entry up to its rational
//! multiplication matrix (the companion embedding) and running exact Gaussian
//! elimination over Q; the field rank is the rational rank divided by
//! phi(k). No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// The field Q(zeta_k), with the cyclotomic polynomial precomputed.
#[derive(Debug, Clone)]
pub struct CyclotomicField {
    pub k: i64,
    /// Coefficients of Phi_k, low degree first, monic.
    pub minpoly: Vec<i64>,
    /// phi(k) = deg Phi_k.
    pub degree: usize,
}

/// Element of Q(zeta_k) with integer coordinates in the power basis
/// 1, zeta, ..., zeta^(phi-1).
pub type CycElem = Vec<i64>;

impl CyclotomicField {
    pub fn new(k: i64) -> Self {
        assert!(k >= 1);
        let minpoly = cyclotomic_polynomial(k as usize);
        let degree = minpoly.len() - 1;
        CyclotomicField { k, minpoly, degree }
    }

    pub fn zero(&self) -> CycElem {
        vec![0; self.degree]
    }

    pub fn one(&self) -> CycElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    /// zeta^j as a basis vector, j arbitrary (reduced mod k then mod Phi_k).
    pub fn zeta_pow(&self, j: i64) -> CycElem {
        let j = j.rem_euclid(self.k) as usize;
        let mut poly = vec![0i64; j + 1];
        poly[j] = 1;
        self.reduce(poly)
    }

    pub fn add_assign(&self, a: &mut CycElem, b: &CycElem) {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }

    pub fn is_zero(&self, a: &CycElem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Reduce an integer polynomial in zeta mod Phi_k (monic, so exact).
    fn reduce(&self, mut poly: Vec<i64>) -> CycElem {
        let d = self.degree;
        while poly.len() > d {
            let top = poly.len() - 1;
            let c = poly[top];
            if c != 0 {
                for i in 0..d {
                    poly[top - d + i] -= c * self.minpoly[i];
                }
            }
            poly.pop();
        }
        poly.resize(d, 0);
        poly
    }

    /// Multiplication-by-a matrix on the power basis, as integer columns.
    fn companion_blowup(&self, a: &CycElem) -> Vec<Vec<i64>> {
        let d = self.degree;
        let mut cols = Vec::with_capacity(d);
        let mut shifted: Vec<i64> = a.clone();
        for j in 0..d {
            if j > 0 {
                let mut next = vec![0i64; shifted.len() + 1];
                next[1..].copy_from_slice(&shifted);
                shifted = self.reduce(next);
            }
            cols.push(shifted.clone());
        }
        // cols[j] = a * zeta^j in the power basis.
        cols
    }

    /// Rank over Q(zeta_k) of a matrix with entries in Z[zeta_k].
    pub fn rank(&self, rows: &[Vec<CycElem>]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let d = self.degree;
        let ncols = rows[0].len();
        if ncols == 0 {
            return 0;
        }
        let mut big: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len() * d);
        for row in rows {
            let blowups: Vec<Vec<Vec<i64>>> =
                row.iter().map(|e| self.companion_blowup(e)).collect();
            for i in 0..d {
                let mut brow = Vec::with_capacity(ncols * d);
                for blow in &blowups {
                    for col in blow.iter().take(d) {
                        brow.push(BigRational::from(BigInt::from(col[i])));
                    }
                }
                big.push(brow);
            }
        }
        let r = rational_rank(&mut big);
        assert_eq!(r % d, 0, "companion blow-up rank not divisible by phi(k)");
        r / d
    }
}

/// Exact rank of a rational matrix by Gaussian elimination with partial
/// pivoting on magnitude (keeps entries small-ish).
pub fn rational_rank(a: &mut [Vec<BigRational>]) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0usize;
    for c in 0..ncols {
        let mut piv = None;
        for r in rank..nrows {
            if !a[r][c].is_zero() {
                piv = Some(r);
                break;
            }
        }
        let Some(p) = piv else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].clone();
        for r in rank + 1..nrows {
            if !a[r][c].is_zero() {
                let factor = &a[r][c] / &inv;
                for j in c..ncols {
                    let t = &a[rank][j] * &factor;
                    a[r][j] = &a[r][j] - t;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Phi_n by dividing x^n - 1 by the cyclotomic polynomials of the proper
/// divisors of n. Integer coefficients, low degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    let mut result = num;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            result = exact_poly_div(&result, &phi_d);
        }
    }
    result
}

/// Exact division of integer polynomials with monic divisor.
fn exact_poly_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i64> = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&x| x == 0), "non-exact polynomial division");
    quot
}

/// Euler phi, used in tests as an independent degree oracle.
pub fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|&a| gcd(a, n) == 1).count()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..=24 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn zeta_powers_satisfy_relations() {
        let f = CyclotomicField::new(6);
        // zeta^3 = -1 in Q(zeta_6).
        let z3 = f.zeta_pow(3);
        let mut neg_one = f.one();
        neg_one[0] = -1;
        assert_eq!(z3, neg_one);
        // 1 + zeta^2 + zeta^4 = 0 (sum over a nontrivial coset).
        let mut s = f.zeta_pow(0);
        f.add_assign(&mut s, &f.zeta_pow(2));
        f.add_assign(&mut s, &f.zeta_pow(4));
        assert!(f.is_zero(&s));
    }

    #[test]
    fn rank_over_k2_matches_rational_rank() {
        // k = 2: zeta = -1, the field is Q itself.
        let f = CyclotomicField::new(2);
        let one = f.one();
        let minus = f.zeta_pow(1);
        // [[1, -1], [-1, 1]] has rank 1.
        let rows = vec![vec![one.clone(), minus.clone()], vec![minus, one]];
        assert_eq!(f.rank(&rows), 1);
    }

    #[test]
    fn rank_detects_cyclotomic_dependence() {
        let f = CyclotomicField::new(4);
        // Row2 = zeta * Row1 is a field-linear dependence invisible over Z.
        let rows = vec![
            vec![f.one(), f.zeta_pow(1)],
            vec![f.zeta_pow(1), f.zeta_pow(2)],
        ];
        assert_eq!(f.rank(&rows), 1);
        let rows = vec![
            vec![f.one(), f.zeta_pow(1)],
            vec![f.zeta_pow(1), f.one()],
        ];
        assert_eq!(f.rank(&rows), 2);
    }

    #[test]
    fn rank_of_trivial_field() {
        let f = CyclotomicField::new(1);
        let rows = vec![vec![f.one(), f.one()], vec![f.one(), f.one()]];
        assert_eq!(f.rank(&rows), 1);
    }
}
