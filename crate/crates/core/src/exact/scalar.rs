//! Exact Gaussian-rational scalars.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HeckeError, Result};

/// Parse `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || HeckeError::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An element of Q(i), stored as a pair of reduced rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl CQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CQ { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CQ { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        CQ::real(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        CQ::real(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        CQ::default()
    }

    pub fn one() -> Self {
        CQ::from_int(1)
    }

    pub fn i() -> Self {
        CQ { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CQ { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(HeckeError::NotInvertible);
        }
        let n = self.norm_sqr();
        Ok(CQ { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CQ { re: &self.re * q, im: &self.im * q }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }
}

impl fmt::Display for CQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", format_rational(&self.re), format_rational(&-self.im.clone()))
        } else {
            write!(f, "{}+{}i", format_rational(&self.re), format_rational(&self.im))
        }
    }
}

impl<'a> Add<&'a CQ> for &'a CQ {
    type Output = CQ;
    fn add(self, o: &CQ) -> CQ {
        CQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a CQ> for &'a CQ {
    type Output = CQ;
    fn sub(self, o: &CQ) -> CQ {
        CQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a CQ> for &'a CQ {
    type Output = CQ;
    fn mul(self, o: &CQ) -> CQ {
        if self.im.is_zero() && o.im.is_zero() {
            return CQ::real(&self.re * &o.re);
        }
        CQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a CQ> for &'a CQ {
    type Output = Result<CQ>;
    fn div(self, o: &CQ) -> Result<CQ> {
        Ok(self * &o.inv()?)
    }
}

impl Add for CQ {
    type Output = CQ;
    fn add(self, o: CQ) -> CQ {
        &self + &o
    }
}

impl Sub for CQ {
    type Output = CQ;
    fn sub(self, o: CQ) -> CQ {
        &self - &o
    }
}

impl Mul for CQ {
    type Output = CQ;
    fn mul(self, o: CQ) -> CQ {
        &self * &o
    }
}

impl Neg for CQ {
    type Output = CQ;
    fn neg(self) -> CQ {
        CQ { re: -self.re, im: -self.im }
    }
}

impl Neg for &CQ {
    type Output = CQ;
    fn neg(self) -> CQ {
        CQ { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&CQ> for CQ {
    fn add_assign(&mut self, o: &CQ) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&CQ> for CQ {
    fn sub_assign(&mut self, o: &CQ) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// Wire form `{"re": "p/q", "im": "r/s"}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CQJson {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0".to_string()
}

impl From<&CQ> for CQJson {
    fn from(z: &CQ) -> Self {
        CQJson { re: format_rational(&z.re), im: format_rational(&z.im) }
    }
}

impl TryFrom<&CQJson> for CQ {
    type Error = HeckeError;
    fn try_from(j: &CQJson) -> Result<CQ> {
        Ok(CQ::new(parse_rational(&j.re)?, parse_rational(&j.im)?))
    }
}
