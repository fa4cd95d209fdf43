//! Classical Hecke operators on integer q-expansions.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::radial::is_prime_u64;
use crate::{HeckeError, Result};

/// Σ_{n=1}^{N} a_n qⁿ for a form of weight k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub weight: u32,
    coeffs: Vec<BigInt>,
}

impl QSeries {
    /// `coeffs[0]` is a₁.
    pub fn new(weight: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(HeckeError::Precondition("precision must be at least 1".into()));
        }
        Ok(QSeries { weight, coeffs })
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// a_n for 1 ≤ n ≤ N.
    pub fn a(&self, n: usize) -> &BigInt {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        QSeries { weight: self.weight, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn truncate(&self, n: usize) -> QSeries {
        QSeries { weight: self.weight, coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec() }
    }
}

/// Δ = q ∏ (1 − qⁿ)²⁴ to precision N.
pub fn delta_qexp(n: usize) -> Result<QSeries> {
    if n == 0 {
        return Err(HeckeError::Precondition("precision must be at least 1".into()));
    }
    // prod[j] is the coefficient of q^j in ∏(1 − qⁿ)²⁴, j < N.
    let mut prod = vec![BigInt::zero(); n];
    prod[0] = BigInt::one();
    for m in 1..n {
        for _ in 0..24 {
            for j in (m..n).rev() {
                let t = prod[j - m].clone();
                prod[j] -= t;
            }
        }
    }
    QSeries::new(12, prod)
}

/// (T_p f)_n = a_{np} + p^{k−1} a_{n/p}, for n ≤ ⌊N/p⌋.
pub fn hecke_tp(f: &QSeries, p: u64) -> Result<QSeries> {
    if !is_prime_u64(p) {
        return Err(HeckeError::NotPrime(p));
    }
    let p = p as usize;
    let m = f.precision() / p;
    if m == 0 {
        return Err(HeckeError::Precondition(format!("precision {} is below p = {p}", f.precision())));
    }
    let pk = BigInt::from(p).pow(f.weight.saturating_sub(1));
    let coeffs = (1..=m)
        .map(|n| {
            let mut c = f.a(n * p).clone();
            if n % p == 0 {
                c += &pk * f.a(n / p);
            }
            c
        })
        .collect();
    QSeries::new(f.weight, coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Eigen {
    Eigenvalue {
        #[serde(serialize_with = "as_string")]
        eigenvalue: BigInt,
        checked_up_to: usize,
    },
    NotEigenvector {
        first_mismatch: usize,
    },
}

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// λ with T_p f = λ f on the first ⌊N/p⌋ coefficients, or the first index where that fails.
pub fn eigenvalue_of(f: &QSeries, p: u64) -> Result<Eigen> {
    if f.a(1).is_zero() {
        return Err(HeckeError::Precondition("a₁ must be nonzero".into()));
    }
    let t = hecke_tp(f, p)?;
    let (lambda, rem) = (t.a(1) / f.a(1), t.a(1) % f.a(1));
    if !rem.is_zero() {
        return Ok(Eigen::NotEigenvector { first_mismatch: 1 });
    }
    for n in 1..=t.precision() {
        if *t.a(n) != &lambda * f.a(n) {
            return Ok(Eigen::NotEigenvector { first_mismatch: n });
        }
    }
    Ok(Eigen::Eigenvalue { eigenvalue: lambda, checked_up_to: t.precision() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// q · (Σ_m (−1)^m (2m+1) q^{m(m+1)/2})⁸, from the cube of the Euler product.
    fn delta_via_triangular(n: usize) -> Vec<BigInt> {
        let mut cube = vec![BigInt::zero(); n];
        let mut m = 0usize;
        while m * (m + 1) / 2 < n {
            let sign = if m.is_multiple_of(2) { 1 } else { -1 };
            cube[m * (m + 1) / 2] = BigInt::from(sign * (2 * m as i64 + 1));
            m += 1;
        }
        let mut acc = vec![BigInt::zero(); n];
        acc[0] = BigInt::one();
        for _ in 0..8 {
            let mut next = vec![BigInt::zero(); n];
            for (i, a) in acc.iter().enumerate() {
                for (j, b) in cube.iter().enumerate().take(n - i) {
                    next[i + j] += a * b;
                }
            }
            acc = next;
        }
        acc
    }

    #[test]
    fn delta_coefficients() {
        let d = delta_qexp(50).unwrap();
        assert_eq!(d.coeffs()[..4], ints(&[1, -24, 252, -1472])[..]);
        assert_eq!(d.coeffs(), &delta_via_triangular(50)[..]);
        assert!(delta_qexp(0).is_err());
    }

    #[test]
    fn delta_eigenvalues() {
        let d = delta_qexp(50).unwrap();
        for (p, l) in [(2u64, -24i64), (3, 252), (5, 4830)] {
            let t = hecke_tp(&d, p).unwrap();
            assert_eq!(t, d.truncate(50 / p as usize).scale(&BigInt::from(l)));
            assert_eq!(
                eigenvalue_of(&d, p).unwrap(),
                Eigen::Eigenvalue { eigenvalue: BigInt::from(l), checked_up_to: 50 / p as usize }
            );
        }
    }

    #[test]
    fn zero_series_and_errors() {
        let z = QSeries::new(12, vec![BigInt::zero(); 20]).unwrap();
        assert!(hecke_tp(&z, 2).unwrap().coeffs().iter().all(Zero::is_zero));
        assert!(matches!(hecke_tp(&z, 4), Err(HeckeError::NotPrime(4))));
        assert!(matches!(eigenvalue_of(&z, 2), Err(HeckeError::Precondition(_))));
    }

    #[test]
    fn junk_is_not_an_eigenvector() {
        let d = delta_qexp(50).unwrap();
        let mut c = d.coeffs().to_vec();
        c[6] += 1;
        let f = QSeries::new(12, c).unwrap();
        assert_eq!(eigenvalue_of(&f, 2).unwrap(), Eigen::NotEigenvector { first_mismatch: 7 });
        assert_eq!(eigenvalue_of(&f, 7).unwrap(), Eigen::NotEigenvector { first_mismatch: 2 });
    }

    #[test]
    fn hecke_relation_for_delta() {
        let d = delta_qexp(100).unwrap();
        for p in [2u64, 3] {
            let Eigen::Eigenvalue { eigenvalue: lp, .. } = eigenvalue_of(&d, p).unwrap() else { panic!() };
            let pk = BigInt::from(p).pow(11);
            let tpp = hecke_tp(&hecke_tp(&d, p).unwrap(), p).unwrap();
            let m = tpp.precision();
            let shifted: Vec<BigInt> = (1..=m).map(|n| tpp.a(n) - &pk * d.a(n)).collect();
            let lp2 = &shifted[0];
            for n in 1..=m {
                assert_eq!(shifted[n - 1], lp2 * d.a(n));
            }
            assert_eq!(&lp * &lp, lp2 + &pk);
            assert_eq!(lp2, d.a((p * p) as usize));
        }
    }

    #[test]
    fn operators_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let k = rng.gen_range(2..14);
            let f = QSeries::new(k, (0..120).map(|_| BigInt::from(rng.gen_range(-50..50))).collect()).unwrap();
            for (p, q) in [(2u64, 3u64), (2, 5), (3, 7)] {
                let a = hecke_tp(&hecke_tp(&f, p).unwrap(), q).unwrap();
                let b = hecke_tp(&hecke_tp(&f, q).unwrap(), p).unwrap();
                let m = a.precision().min(b.precision());
                assert_eq!(a.truncate(m), b.truncate(m));
            }
        }
    }

    #[test]
    fn eigenvalue_invariant_under_rescaling() {
        let d = delta_qexp(50).unwrap();
        for c in [-3i64, 2, 17] {
            let f = d.scale(&BigInt::from(c));
            assert_eq!(eigenvalue_of(&f, 3).unwrap(), eigenvalue_of(&d, 3).unwrap());
        }
    }
}
