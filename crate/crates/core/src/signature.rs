//! Signatures of strata of k-differentials and their canonical covers.
//!
//! A signature is the type `(k, g, mu)` of a stratum: `k` the root order, `g`
//! the genus and `mu` the ordered list of orders at the labeled points, with
//! `sum(mu) = k(2g - 2)`. The canonical degree-k cover carries an abelian
//! differential whose type is derived here as well.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("signature has no marked points")]
    EmptySignature,
    #[error("k must be >= 1, got {0}")]
    InvalidK(i64),
    #[error("genus must be >= 0, got {0}")]
    InvalidGenus(i64),
    #[error("order sum {sum} does not match k(2g-2) = {expected}")]
    SumMismatch { sum: i64, expected: i64 },
    #[error("cover order sum {0} is odd or below -2: cover is disconnected")]
    NonIntegralGenus(i64),
    #[error("signature is a proper power (divisors {0:?}); reduce before use")]
    NotPrimitive(Vec<i64>),
}

/// Type of a stratum of k-differentials with labeled points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub k: i64,
    pub g: i64,
    pub mu: Vec<i64>,
    /// True iff every order exceeds -k, so the flat area is finite.
    #[serde(skip, default)]
    pub finite_area: bool,
}

/// Type of the abelian differential on the canonical k-cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSignature {
    pub mu_hat: Vec<i64>,
    pub g_hat: i64,
    pub n_hat: usize,
    /// gcd(k, m_i) per base point: the number of preimages of that point.
    pub fiber_sizes: Vec<i64>,
}

/// Checks the order-sum identity and builds a validated signature.
pub fn validate_signature(k: i64, g: i64, mu: &[i64]) -> Result<Signature, SignatureError> {
    if k < 1 {
        return Err(SignatureError::InvalidK(k));
    }
    if g < 0 {
        return Err(SignatureError::InvalidGenus(g));
    }
    if mu.is_empty() {
        return Err(SignatureError::EmptySignature);
    }
    let sum: i64 = mu.iter().sum();
    let expected = k * (2 * g - 2);
    if sum != expected {
        return Err(SignatureError::SumMismatch { sum, expected });
    }
    let finite_area = mu.iter().all(|&m| m > -k);
    Ok(Signature {
        k,
        g,
        mu: mu.to_vec(),
        finite_area,
    })
}

impl Signature {
    pub fn new(k: i64, g: i64, mu: &[i64]) -> Result<Self, SignatureError> {
        validate_signature(k, g, mu)
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Multiplicity-of-preimages gcd; `gcd(k, 0) = k`.
    pub fn fiber_size(k: i64, m: i64) -> i64 {
        let g = k.gcd(&m);
        if g == 0 {
            k
        } else {
            g
        }
    }

    /// Order on the cover over a point of order `m`: `(k+m)/gcd(k,m) - 1`.
    pub fn lifted_order(k: i64, m: i64) -> i64 {
        (k + m) / Self::fiber_size(k, m) - 1
    }

    /// Signature of the connected canonical k-cover.
    ///
    /// The genus is solved from the degree-sum identity; an odd or too
    /// negative sum signals a disconnected cover (the differential is a
    /// proper power) and is returned as an error.
    pub fn cover_signature(&self) -> Result<CoverSignature, SignatureError> {
        let mut mu_hat = Vec::new();
        let mut fiber_sizes = Vec::with_capacity(self.mu.len());
        for &m in &self.mu {
            let f = Self::fiber_size(self.k, m);
            let mh = Self::lifted_order(self.k, m);
            fiber_sizes.push(f);
            for _ in 0..f {
                mu_hat.push(mh);
            }
        }
        let sum: i64 = mu_hat.iter().sum();
        if sum % 2 != 0 || sum < -2 {
            return Err(SignatureError::NonIntegralGenus(sum));
        }
        Ok(CoverSignature {
            g_hat: (sum + 2) / 2,
            n_hat: mu_hat.len(),
            mu_hat,
            fiber_sizes,
        })
    }

    /// All d >= 1 with d | k and d | m_i for every order: the necessary
    /// divisibility for the differential to be a d-th power. Sorted ascending,
    /// always contains 1.
    pub fn power_divisors(&self) -> Vec<i64> {
        let mut g = self.k;
        for &m in &self.mu {
            g = g.gcd(&m);
        }
        if g == 0 {
            g = self.k;
        }
        let mut divs: Vec<i64> = (1..=g).filter(|d| g % d == 0).collect();
        divs.sort_unstable();
        divs
    }

    pub fn is_primitive(&self) -> bool {
        self.power_divisors() == [1]
    }

    /// Reduced (k/d)-differential signature, for d in `power_divisors`.
    pub fn reduce(&self, d: i64) -> Result<Signature, SignatureError> {
        if d < 1 || self.k % d != 0 || self.mu.iter().any(|m| m % d != 0) {
            return Err(SignatureError::NotPrimitive(self.power_divisors()));
        }
        let mu: Vec<i64> = self.mu.iter().map(|m| m / d).collect();
        validate_signature(self.k / d, self.g, &mu)
    }

    /// Unprojectivized dimension of the stratum of primitive k-differentials.
    ///
    /// `2g - 2 + n` for k >= 2, `2g - 1 + n` for abelian strata. Signatures
    /// whose canonical cover cannot be connected force every differential to
    /// be a proper power; those must be reduced by the caller first.
    pub fn dimension(&self) -> Result<i64, SignatureError> {
        let n = self.mu.len() as i64;
        if self.k == 1 {
            return Ok(2 * self.g - 1 + n);
        }
        self.cover_signature()
            .map_err(|_| SignatureError::NotPrimitive(self.power_divisors()))?;
        Ok(2 * self.g - 2 + n)
    }
}

/// Free-function aliases mirroring the operation names.
pub fn cover_signature(sig: &Signature) -> Result<CoverSignature, SignatureError> {
    sig.cover_signature()
}

pub fn power_divisors(sig: &Signature) -> Vec<i64> {
    sig.power_divisors()
}

pub fn stratum_dimension(sig: &Signature) -> Result<i64, SignatureError> {
    sig.dimension()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_order_sum() {
        let s = validate_signature(2, 2, &[2, 2]).unwrap();
        assert!(s.finite_area);
        let s = validate_signature(2, 0, &[-1, -1, -1, -1]).unwrap();
        assert!(s.finite_area);
        assert_eq!(
            validate_signature(2, 2, &[1, 2]),
            Err(SignatureError::SumMismatch {
                sum: 3,
                expected: 4
            })
        );
        assert_eq!(
            validate_signature(2, 2, &[]),
            Err(SignatureError::EmptySignature)
        );
    }

    #[test]
    fn finite_area_flag_tracks_pole_orders() {
        // Order -k or lower means infinite area.
        let s = validate_signature(2, 1, &[4, -4]).unwrap();
        assert!(!s.finite_area);
        let s = validate_signature(3, 0, &[-2, -2, -2]).unwrap();
        assert!(s.finite_area);
    }

    #[test]
    fn cover_signature_examples() {
        let s = validate_signature(2, 2, &[2, 2]).unwrap();
        let c = s.cover_signature().unwrap();
        assert_eq!(c.mu_hat, vec![1, 1, 1, 1]);
        assert_eq!(c.g_hat, 3);
        assert_eq!(c.n_hat, 4);

        let s = validate_signature(2, 0, &[-1, -1, -1, -1]).unwrap();
        let c = s.cover_signature().unwrap();
        assert_eq!(c.mu_hat, vec![0, 0, 0, 0]);
        assert_eq!(c.g_hat, 1);
        assert_eq!(c.n_hat, 4);
    }

    #[test]
    fn cover_of_abelian_signature_is_identity() {
        let s = validate_signature(1, 2, &[2]).unwrap();
        let c = s.cover_signature().unwrap();
        assert_eq!(c.mu_hat, s.mu);
        assert_eq!(c.g_hat, s.g);
        assert_eq!(c.n_hat, s.n());
    }

    #[test]
    fn cover_genus_matches_riemann_hurwitz() {
        // Branch bookkeeping: each base point has gcd preimages with
        // ramification index k/gcd.
        for (k, g, mu) in [
            (2i64, 2i64, vec![2i64, 2]),
            (2, 0, vec![-1, -1, -1, -1]),
            (3, 1, vec![1, -1, 0]),
            (4, 0, vec![-2, -3, -3]),
            (6, 2, vec![6, 6, -6, 6, 0]),
        ] {
            let s = validate_signature(k, g, &mu).unwrap();
            if let Ok(c) = s.cover_signature() {
                let branch: i64 = mu
                    .iter()
                    .map(|&m| {
                        let f = Signature::fiber_size(k, m);
                        f * (k / f - 1)
                    })
                    .sum();
                assert_eq!(2 * c.g_hat - 2, k * (2 * g - 2) + branch);
            }
        }
    }

    #[test]
    fn disconnected_cover_detected() {
        let s = validate_signature(2, 1, &[2, -2]).unwrap();
        assert!(s.cover_signature().is_ok());
        // Every order divisible by k: the lifted order sum lands below -2,
        // which only happens for a disconnected cover.
        let s = validate_signature(2, 0, &[-2, -2, 2, -2]).unwrap();
        assert!(matches!(
            s.cover_signature(),
            Err(SignatureError::NonIntegralGenus(-4))
        ));
    }

    #[test]
    fn power_divisor_examples() {
        let s = validate_signature(2, 2, &[2, 2]).unwrap();
        assert_eq!(s.power_divisors(), vec![1, 2]);
        let s = validate_signature(2, 0, &[-1, -1, -1, -1]).unwrap();
        assert_eq!(s.power_divisors(), vec![1]);
        let s = validate_signature(6, 2, &[6, 6, -6, 6, 0]).unwrap();
        assert_eq!(s.power_divisors(), vec![1, 2, 3, 6]);
    }

    #[test]
    fn power_divisors_closed_under_divisors() {
        for (k, g, mu) in [
            (2i64, 2i64, vec![2i64, 2]),
            (4, 1, vec![4, -4, 0, 0]),
            (6, 2, vec![6, 6, -6, 6, 0]),
            (12, 1, vec![6, -6]),
        ] {
            let s = validate_signature(k, g, &mu).unwrap();
            let divs = s.power_divisors();
            assert!(divs.contains(&1));
            for &d in &divs {
                for e in 1..=d {
                    if d % e == 0 {
                        assert!(divs.contains(&e), "{divs:?} missing divisor {e} of {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(
            validate_signature(2, 2, &[2, 2]).unwrap().dimension(),
            Ok(4)
        );
        assert_eq!(validate_signature(1, 2, &[2]).unwrap().dimension(), Ok(4));
        assert_eq!(
            validate_signature(2, 0, &[-1, -1, -1, -1])
                .unwrap()
                .dimension(),
            Ok(2)
        );
        // Forced powers (disconnected canonical cover) are rejected, the
        // caller reduces first.
        let s = validate_signature(2, 0, &[2, 2, -8]).unwrap();
        assert!(matches!(
            s.dimension(),
            Err(SignatureError::NotPrimitive(_))
        ));
        assert_eq!(s.reduce(2).unwrap().dimension(), Ok(2));
    }

    #[test]
    fn signature_json_round_trip() {
        let s = validate_signature(2, 2, &[2, 2]).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"k":2,"g":2,"mu":[2,2]}"#);
        let back: Signature = serde_json::from_str(&j).unwrap();
        let back = validate_signature(back.k, back.g, &back.mu).unwrap();
        assert_eq!(back, s);
    }
}
