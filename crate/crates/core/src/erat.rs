//! Exact nonnegative rationals extended with `+∞`.
//!
//! This is the value domain for expectations, wp/wlp bounds and measures.
//! `0` is the bottom and `∞` the top of the order; all arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ERat {
    /// Always stored in lowest terms with a positive denominator.
    Finite(Ratio<BigUint>),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ERatError {
    #[error("malformed rational `{0}`")]
    Malformed(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

impl ERat {
    pub fn zero() -> Self {
        ERat::Finite(Ratio::zero())
    }

    pub fn one() -> Self {
        ERat::Finite(Ratio::one())
    }

    pub fn infinity() -> Self {
        ERat::Infinity
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn new(num: impl Into<BigUint>, den: impl Into<BigUint>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "ERat with zero denominator");
        ERat::Finite(Ratio::new(num.into(), den))
    }

    pub fn from_int(n: impl Into<BigUint>) -> Self {
        ERat::Finite(Ratio::from_integer(n.into()))
    }

    /// `1 / 2^k`.
    pub fn recip_pow2(k: usize) -> Self {
        ERat::Finite(Ratio::new(BigUint::one(), BigUint::one() << k))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ERat::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ERat::Finite(r) if r.is_zero())
    }

    pub fn numer(&self) -> Option<&BigUint> {
        match self {
            ERat::Finite(r) => Some(r.numer()),
            ERat::Infinity => None,
        }
    }

    pub fn denom(&self) -> Option<&BigUint> {
        match self {
            ERat::Finite(r) => Some(r.denom()),
            ERat::Infinity => None,
        }
    }

    /// Truncated subtraction: `max(self - rhs, 0)`, with `∞ - ∞ = 0`.
    pub fn sub_trunc(&self, rhs: &ERat) -> ERat {
        match (self, rhs) {
            (ERat::Infinity, ERat::Finite(_)) => ERat::Infinity,
            (_, ERat::Infinity) => ERat::zero(),
            (ERat::Finite(a), ERat::Finite(b)) => {
                if a <= b {
                    ERat::zero()
                } else {
                    ERat::Finite(a - b)
                }
            }
        }
    }

    /// Halve the value; `∞ / 2 = ∞`.
    pub fn div2(&self) -> ERat {
        match self {
            ERat::Infinity => ERat::Infinity,
            ERat::Finite(r) => ERat::Finite(r / BigUint::from(2u8)),
        }
    }

    /// Division by a finite positive rational. `None` when `rhs` is zero or
    /// infinite.
    pub fn checked_div(&self, rhs: &ERat) -> Option<ERat> {
        match rhs {
            ERat::Finite(d) if !d.is_zero() => Some(match self {
                ERat::Infinity => ERat::Infinity,
                ERat::Finite(n) => ERat::Finite(n / d),
            }),
            _ => None,
        }
    }

    /// Nearest `f64`; `∞` maps to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match self {
            ERat::Infinity => f64::INFINITY,
            ERat::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    pub fn min(self, other: ERat) -> ERat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ERat) -> ERat {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Default for ERat {
    fn default() -> Self {
        ERat::zero()
    }
}

impl From<u64> for ERat {
    fn from(n: u64) -> Self {
        ERat::from_int(n)
    }
}

impl Ord for ERat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ERat::Infinity, ERat::Infinity) => Ordering::Equal,
            (ERat::Infinity, ERat::Finite(_)) => Ordering::Greater,
            (ERat::Finite(_), ERat::Infinity) => Ordering::Less,
            (ERat::Finite(a), ERat::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ERat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &ERat {
    type Output = ERat;
    fn add(self, rhs: &ERat) -> ERat {
        match (self, rhs) {
            (ERat::Finite(a), ERat::Finite(b)) => ERat::Finite(a + b),
            _ => ERat::Infinity,
        }
    }
}

impl Add for ERat {
    type Output = ERat;
    fn add(self, rhs: ERat) -> ERat {
        &self + &rhs
    }
}

/// Multiplication with the measure-theoretic convention `0 · ∞ = 0`.
impl Mul for &ERat {
    type Output = ERat;
    fn mul(self, rhs: &ERat) -> ERat {
        match (self, rhs) {
            (ERat::Finite(a), ERat::Finite(b)) => ERat::Finite(a * b),
            (x, y) if x.is_zero() || y.is_zero() => ERat::zero(),
            _ => ERat::Infinity,
        }
    }
}

impl Mul for ERat {
    type Output = ERat;
    fn mul(self, rhs: ERat) -> ERat {
        &self * &rhs
    }
}

impl std::iter::Sum for ERat {
    fn sum<I: Iterator<Item = ERat>>(iter: I) -> ERat {
        iter.fold(ERat::zero(), |acc, x| &acc + &x)
    }
}

/// Always `num/den`, or `inf`.
impl fmt::Display for ERat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ERat::Infinity => f.write_str("inf"),
            ERat::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for ERat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `inf`, a decimal `N` or `N.F`, or a fraction `A/B` whose parts
/// are integers or powers `B^E`, e.g. `1/10^4`.
impl FromStr for ERat {
    type Err = ERatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(ERat::Infinity);
        }
        let malformed = || ERatError::Malformed(s.to_string());
        let digits = |t: &str| {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            t.parse::<BigUint>().map_err(|_| malformed())
        };
        let integer = |t: &str| match t.split_once('^') {
            None => digits(t),
            Some((b, e)) => {
                let e: u32 = e.parse().map_err(|_| malformed())?;
                Ok(digits(b)?.pow(e))
            }
        };
        match (s.split_once('/'), s.split_once('.')) {
            (Some((n, d)), None) => {
                let (n, d) = (integer(n)?, integer(d)?);
                if d.is_zero() {
                    return Err(ERatError::ZeroDenominator);
                }
                Ok(ERat::new(n, d))
            }
            (None, Some((whole, frac))) => {
                let whole = if whole.is_empty() {
                    BigUint::zero()
                } else {
                    digits(whole)?
                };
                let scale = BigUint::from(10u32).pow(frac.len() as u32);
                Ok(ERat::new(whole * &scale + digits(frac)?, scale))
            }
            (None, None) => Ok(ERat::from_int(integer(s)?)),
            (Some(_), Some(_)) => Err(malformed()),
        }
    }
}

impl Serialize for ERat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ERat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    fn q(n: u64, d: u64) -> ERat {
        ERat::new(n, d)
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(&q(1, 2) + &q(1, 4), q(3, 4));
        assert_eq!(&q(5, 7) + &ERat::Infinity, ERat::Infinity);
        assert_eq!(q(2, 3).div2(), q(1, 3));
        assert_eq!(ERat::Infinity.div2(), ERat::Infinity);
        assert_eq!(q(1, 3).sub_trunc(&q(1, 2)), ERat::zero());
        assert_eq!(q(1, 2).sub_trunc(&q(1, 3)), q(1, 6));
        assert_eq!(ERat::Infinity.sub_trunc(&q(9, 1)), ERat::Infinity);
        assert_eq!(&ERat::zero() * &ERat::Infinity, ERat::zero());
        assert_eq!(&q(1, 9) * &ERat::Infinity, ERat::Infinity);
        assert!(q(1000, 1) < ERat::Infinity);
        assert_eq!(q(3, 2).checked_div(&q(2, 1)), Some(q(3, 4)));
        assert_eq!(q(3, 2).checked_div(&ERat::zero()), None);
    }

    #[test]
    fn reduced_form() {
        let x = q(6, 8);
        assert_eq!(x.numer().unwrap(), &BigUint::from(3u8));
        assert_eq!(x.denom().unwrap(), &BigUint::from(4u8));
        assert_eq!(ERat::recip_pow2(3), q(1, 8));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0/1", "5/8", "inf", "341/512"] {
            assert_eq!(s.parse::<ERat>().unwrap().to_string(), s);
        }
        assert_eq!("4/6".parse::<ERat>().unwrap(), q(2, 3));
        assert_eq!("3".parse::<ERat>().unwrap(), q(3, 1));
        assert!("1/0".parse::<ERat>().is_err());
        assert!("-1/2".parse::<ERat>().is_err());
        assert!("x".parse::<ERat>().is_err());
        assert_eq!("0.01".parse::<ERat>().unwrap(), q(1, 100));
        assert_eq!("2.5".parse::<ERat>().unwrap(), q(5, 2));
        assert_eq!(".5".parse::<ERat>().unwrap(), q(1, 2));
        assert_eq!("1/10^4".parse::<ERat>().unwrap(), q(1, 10_000));
        assert_eq!("2^3".parse::<ERat>().unwrap(), q(8, 1));
        assert!("1.".parse::<ERat>().is_err());
        assert!("1/2.5".parse::<ERat>().is_err());
        assert!("1/0^2".parse::<ERat>().is_err());
    }

    // Independent oracle: unreduced numerator/denominator pairs compared and
    // combined by cross-multiplication on raw big integers.
    fn oracle_eq(a: (u64, u64), b: (u64, u64), r: &ERat) -> bool {
        let (n, d) = (r.numer().unwrap(), r.denom().unwrap());
        let lhs = BigUint::from(a.0) * BigUint::from(b.1) + BigUint::from(b.0) * BigUint::from(a.1);
        let rhs = BigUint::from(a.1) * BigUint::from(b.1);
        &lhs * d == &rhs * n && n.gcd(d) == BigUint::one()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn matches_cross_multiplication_oracle(
            an in 0u64..1_000_000, ad in 1u64..1_000_000,
            bn in 0u64..1_000_000, bd in 1u64..1_000_000,
        ) {
            let (a, b) = (q(an, ad), q(bn, bd));
            prop_assert!(oracle_eq((an, ad), (bn, bd), &(&a + &b)));
            let ord = (BigUint::from(an) * BigUint::from(bd)).cmp(&(BigUint::from(bn) * BigUint::from(ad)));
            prop_assert_eq!(a.cmp(&b), ord);
            let prod = &a * &b;
            prop_assert!(BigUint::from(an) * BigUint::from(bn) * prod.denom().unwrap()
                == BigUint::from(ad) * BigUint::from(bd) * prod.numer().unwrap());
            let diff = a.sub_trunc(&b);
            if ord == Ordering::Greater {
                prop_assert_eq!(&diff + &b, a.clone());
            } else {
                prop_assert!(diff.is_zero());
            }
            prop_assert_eq!(&a.div2() + &a.div2(), a);
        }
    }
}
