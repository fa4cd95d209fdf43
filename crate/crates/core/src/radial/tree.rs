use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::{HeckeError, Result};

/// A finite combination Σ c_n χ_n of word-length sums on the d-regular tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadialElement {
    degree: u32,
    coeffs: BTreeMap<u32, BigRational>,
}

impl RadialElement {
    pub fn zero(degree: u32) -> Self {
        assert!(degree >= 3, "tree degree must be at least 3");
        RadialElement { degree, coeffs: BTreeMap::new() }
    }

    /// χ_n.
    pub fn chi(degree: u32, n: u32) -> Self {
        let mut x = Self::zero(degree);
        x.coeffs.insert(n, BigRational::one());
        x
    }

    pub fn unit(degree: u32) -> Self {
        Self::chi(degree, 0)
    }

    pub fn from_coeffs(degree: u32, coeffs: impl IntoIterator<Item = (u32, BigRational)>) -> Self {
        let mut x = Self::zero(degree);
        for (n, c) in coeffs {
            x.add_term(n, &c);
        }
        x
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, n: u32) -> BigRational {
        self.coeffs.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, n: u32, c: &BigRational) {
        let e = self.coeffs.entry(n).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn add(&self, o: &RadialElement) -> Result<RadialElement> {
        self.check_degree(o)?;
        let mut r = self.clone();
        for (n, c) in &o.coeffs {
            r.add_term(*n, c);
        }
        Ok(r)
    }

    fn check_degree(&self, o: &RadialElement) -> Result<()> {
        if self.degree != o.degree {
            return Err(HeckeError::DegreeMismatch { left: self.degree, right: o.degree });
        }
        Ok(())
    }

    /// χ₁ · self, by χ₁χ₀ = χ₁, χ₁χ₁ = χ₂ + dχ₀, χ₁χ_n = χ_{n+1} + (d−1)χ_{n−1}.
    pub fn times_chi1(&self) -> RadialElement {
        let d = BigRational::from_integer(self.degree.into());
        let d1 = BigRational::from_integer((self.degree - 1).into());
        let mut r = Self::zero(self.degree);
        for (&n, c) in &self.coeffs {
            r.add_term(n + 1, c);
            match n {
                0 => {}
                1 => r.add_term(0, &(c * &d)),
                _ => r.add_term(n - 1, &(c * &d1)),
            }
        }
        r
    }

    pub fn multiply(&self, o: &RadialElement) -> Result<RadialElement> {
        self.check_degree(o)?;
        let mut memo = HashMap::new();
        let mut r = Self::zero(self.degree);
        for (&m, a) in &self.coeffs {
            let chi_m_o = chi_times(self.degree, m, o, &mut memo);
            for (n, b) in &chi_m_o.coeffs {
                r.add_term(*n, &(a * b));
            }
        }
        Ok(r)
    }

    pub fn pow(&self, n: u32) -> RadialElement {
        (0..n).fold(Self::unit(self.degree), |acc, _| acc.multiply(self).expect("same degree"))
    }
}

/// χ_m · y via χ_m = χ₁χ_{m−1} − c·χ_{m−2}.
fn chi_times(d: u32, m: u32, y: &RadialElement, memo: &mut HashMap<u32, RadialElement>) -> RadialElement {
    if let Some(r) = memo.get(&m) {
        return r.clone();
    }
    let r = match m {
        0 => y.clone(),
        1 => y.times_chi1(),
        _ => {
            let c = if m == 2 { d } else { d - 1 };
            let a = chi_times(d, m - 1, y, memo).times_chi1();
            let b = chi_times(d, m - 2, y, memo);
            let mut r = a;
            let c = BigRational::from_integer(c.into());
            for (n, v) in &b.coeffs {
                r.add_term(*n, &(-(v * &c)));
            }
            r
        }
    };
    memo.insert(m, r.clone());
    r
}

/// Radial product of two elements of equal degree.
pub fn radial_multiply(x: &RadialElement, y: &RadialElement) -> Result<RadialElement> {
    x.multiply(y)
}

/// τ(χ₁ⁿ): closed walks of length n at the root of the d-regular tree.
pub fn kesten_moment(d: u32, n: u32) -> BigInt {
    let mut x = RadialElement::unit(d);
    for _ in 0..n {
        x = x.times_chi1();
    }
    x.coeff(0).to_integer()
}

#[derive(Clone, Debug, Serialize)]
pub struct KestenRow {
    pub n: u32,
    pub moment: String,
}

pub fn kesten_table(d: u32, n_max: u32) -> Vec<KestenRow> {
    (0..=n_max).map(|n| KestenRow { n, moment: kesten_moment(d, n).to_string() }).collect()
}

/// Closed walks of length n at the root, counted by enumerating reduced words in d involutions.
pub fn closed_walks_by_enumeration(d: u32, n: u32) -> u64 {
    fn go(d: u32, left: u32, word: &mut Vec<u32>) -> u64 {
        if word.len() as u32 > left {
            return 0;
        }
        if left == 0 {
            return u64::from(word.is_empty());
        }
        let mut total = 0;
        for g in 0..d {
            if word.last() == Some(&g) {
                word.pop();
                total += go(d, left - 1, word);
                word.push(g);
            } else {
                word.push(g);
                total += go(d, left - 1, word);
                word.pop();
            }
        }
        total
    }
    go(d, n, &mut Vec::new())
}
