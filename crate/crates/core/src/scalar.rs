//! Exact rational scalars and sparse coordinate vectors.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct RationalParseError(pub String);

/// Parses `"p/q"` or `"p"`; a zero denominator is rejected.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Sparse vector over a finite basis, keyed by basis index. Zero entries are
/// never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseVec(BTreeMap<u32, Rational>);

impl SparseVec {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn basis(index: u32) -> Self {
        Self::term(index, Rational::one())
    }

    pub fn term(index: u32, coeff: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(index, coeff);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: u32) -> Rational {
        self.0.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        self.0.iter().map(|(k, v)| (*k, v))
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.keys().copied()
    }

    pub fn add_term(&mut self, index: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.0.entry(index).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.0.remove(&index);
        }
    }

    pub fn add_scaled(&mut self, other: &SparseVec, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (k, v) in other.iter() {
            self.add_term(k, v * scale);
        }
    }

    pub fn add_assign(&mut self, other: &SparseVec) {
        for (k, v) in other.iter() {
            self.add_term(k, v.clone());
        }
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(other, &-Rational::one());
        out
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn scaled(&self, scale: &Rational) -> SparseVec {
        let mut out = SparseVec::zero();
        out.add_scaled(self, scale);
        out
    }

    pub fn neg(&self) -> SparseVec {
        self.scaled(&-Rational::one())
    }

    /// Leading (smallest) index, if any.
    pub fn leading(&self) -> Option<(u32, &Rational)> {
        self.0.iter().next().map(|(k, v)| (*k, v))
    }
}

impl FromIterator<(u32, Rational)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (u32, Rational)>>(iter: T) -> Self {
        let mut v = SparseVec::zero();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.0.iter().map(|(k, v)| (k, format_rational(v))))
            .finish()
    }
}

/// `(-1)^e` as a rational.
pub fn sign(exponent: i64) -> Rational {
    if exponent.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 1 / 3 ").unwrap(), ratio(1, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn lowest_terms_and_format() {
        let r = parse_rational("10/-4").unwrap();
        assert_eq!(format_rational(&r), "-5/2");
        assert_eq!(format_rational(&rat(-7)), "-7");
    }

    #[test]
    fn sparse_cancellation() {
        let mut v = SparseVec::basis(2);
        v.add_term(2, rat(-1));
        assert!(v.is_zero());
        v.add_term(1, rat(0));
        assert!(v.is_zero());
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(6), rat(720));
    }
}
