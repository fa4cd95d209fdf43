//! Canonical integer representatives of PGL₂(Q) and the PSL₂(Z) coset
//! labels built on them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::parse_rational;
use crate::error::{HeckeError, Result};

/// A projective class in PGL₂(Q), stored as its content-one integer
/// representative whose first nonzero entry (in order a, b, c, d) is positive.
///
/// Because any two integer content-one representatives differ by ±1, the
/// determinant of the stored matrix is a class invariant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectiveMatrix {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

/// Ratio d₂/d₁ of the Smith divisors of the canonical integer form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElementaryDivisorIndex(pub BigInt);

impl ElementaryDivisorIndex {
    pub fn value(&self) -> &BigInt {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl fmt::Display for ElementaryDivisorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn gcd4(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> BigInt {
    a.gcd(b).gcd(c).gcd(d)
}

/// Extended gcd: returns (g, u, v) with u·x + v·y = g ≥ 0.
fn ext_gcd(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = x.extended_gcd(y);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

impl ProjectiveMatrix {
    /// Canonical representative of the class of an integer matrix.
    pub fn from_integers(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(HeckeError::NotInvertible);
        }
        let g = gcd4(&a, &b, &c, &d);
        let (mut a, mut b, mut c, mut d) = (a / &g, b / &g, c / &g, d / &g);
        let first = [&a, &b, &c, &d].into_iter().find(|x| !x.is_zero()).cloned();
        if first.is_some_and(|x| x.is_negative()) {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        Ok(ProjectiveMatrix { a, b, c, d })
    }

    /// Canonical representative of a rational matrix `[[a, b], [c, d]]`.
    pub fn canonicalize(raw: &[[BigRational; 2]; 2]) -> Result<Self> {
        let entries = [&raw[0][0], &raw[0][1], &raw[1][0], &raw[1][1]];
        let l = entries.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let scaled: Vec<BigInt> =
            entries.iter().map(|q| (q.numer() * &l) / q.denom()).collect();
        let [a, b, c, d]: [BigInt; 4] = scaled.try_into().expect("four entries");
        Self::from_integers(a, b, c, d)
    }

    /// Panics on a singular input; meant for literals.
    pub fn from_i64(e: [i64; 4]) -> Self {
        Self::from_integers(e[0].into(), e[1].into(), e[2].into(), e[3].into())
            .expect("literal matrix must be invertible")
    }

    pub fn identity() -> Self {
        Self::from_i64([1, 0, 0, 1])
    }

    /// S = [[0, −1], [1, 0]].
    pub fn gen_s() -> Self {
        Self::from_i64([0, -1, 1, 0])
    }

    /// T = [[1, 1], [0, 1]].
    pub fn gen_t() -> Self {
        Self::from_i64([1, 1, 0, 1])
    }

    pub fn gen_t_inv() -> Self {
        Self::from_i64([1, -1, 0, 1])
    }

    /// The generating set {S, T, T⁻¹} of PSL₂(Z).
    pub fn gamma_generators() -> Vec<Self> {
        vec![Self::gen_s(), Self::gen_t(), Self::gen_t_inv()]
    }

    pub fn diag(x: i64, y: i64) -> Self {
        Self::from_i64([x, 0, 0, y])
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    /// +1 or −1; negative-determinant classes act anti-holomorphically on H.
    pub fn det_sign(&self) -> i8 {
        if self.det().is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn multiply(&self, y: &Self) -> Self {
        Self::from_integers(
            &self.a * &y.a + &self.b * &y.c,
            &self.a * &y.b + &self.b * &y.d,
            &self.c * &y.a + &self.d * &y.c,
            &self.c * &y.b + &self.d * &y.d,
        )
        .expect("product of invertible matrices is invertible")
    }

    /// Adjugate, then canonicalize.
    pub fn inverse(&self) -> Self {
        Self::from_integers(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
            .expect("adjugate of an invertible matrix is invertible")
    }

    pub fn transpose(&self) -> Self {
        Self::from_integers(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
            .expect("transpose is invertible")
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.multiply(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Membership in Γ = PSL₂(Z): canonical determinant exactly +1.
    pub fn is_in_gamma(&self) -> bool {
        self.det().is_one()
    }

    /// Label of the right coset Γ·x: the unique `[[α, β], [0, δ]]` with
    /// α > 0, 0 ≤ β < |δ| reachable by SL₂(Z) row operations. δ carries the
    /// determinant sign, so δ > 0 for every positive-determinant class.
    pub fn hnf_rep_right(&self) -> Self {
        let (g, u, v) = ext_gcd(&self.a, &self.c);
        // U = [[u, v], [-c/g, a/g]] has determinant one.
        let beta = &u * &self.b + &v * &self.d;
        let delta = self.det() / &g;
        let beta = beta.mod_floor(&delta.abs());
        Self::from_integers(g, beta, BigInt::zero(), delta).expect("triangular form is invertible")
    }

    /// Label of the left coset x·Γ: transpose of the right label of xᵀ,
    /// i.e. the unique lower-triangular `[[α, 0], [β, δ]]`.
    pub fn hnf_rep_left(&self) -> Self {
        self.transpose().hnf_rep_right().transpose()
    }

    /// d₂/d₁ of the Smith normal form; classifies ΓxΓ together with the
    /// determinant sign.
    pub fn divisor_index(&self) -> ElementaryDivisorIndex {
        let (d1, d2) = smith_divisors(&self.a, &self.b, &self.c, &self.d);
        ElementaryDivisorIndex(d2 / d1)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.a.to_f64().unwrap_or(f64::NAN),
            self.b.to_f64().unwrap_or(f64::NAN),
            self.c.to_f64().unwrap_or(f64::NAN),
            self.d.to_f64().unwrap_or(f64::NAN),
        ]
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries().into_iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

/// Smith divisors (d₁, d₂) of a nonsingular 2×2 integer matrix, with
/// d₁ | d₂ and d₁·d₂ = |det|.
pub fn smith_divisors(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let d1 = gcd4(a, b, c, d);
    let det = (a * d - b * c).abs();
    let d2 = &det / &d1;
    (d1, d2)
}

impl fmt::Debug for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Text form "a b c d", row-major.
impl fmt::Display for ProjectiveMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for ProjectiveMatrix {
    type Err = HeckeError;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(HeckeError::Parse(format!("expected four entries, got {s:?}")));
        }
        let q: Vec<BigRational> = parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?;
        Self::canonicalize(&[[q[0].clone(), q[1].clone()], [q[2].clone(), q[3].clone()]])
    }
}

/// JSON form with integers as decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixJson {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
}

impl From<&ProjectiveMatrix> for MatrixJson {
    fn from(m: &ProjectiveMatrix) -> Self {
        MatrixJson { a: m.a.to_string(), b: m.b.to_string(), c: m.c.to_string(), d: m.d.to_string() }
    }
}

impl TryFrom<&MatrixJson> for ProjectiveMatrix {
    type Error = HeckeError;
    fn try_from(j: &MatrixJson) -> Result<Self> {
        format!("{} {} {} {}", j.a, j.b, j.c, j.d).parse()
    }
}

impl Serialize for ProjectiveMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectiveMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        ProjectiveMatrix::try_from(&j).map_err(serde::de::Error::custom)
    }
}
