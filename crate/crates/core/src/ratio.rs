//! Exact integers and rationals.

use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Arbitrary-precision signed integer.
pub type ExactInteger = BigInt;

/// An exact rational, always stored in lowest terms with a positive
/// denominator, so that `==` is structural equality of the value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(domain("zero denominator"));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    /// The exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self)
    }

    /// `1 / value`; `value` must be non-zero.
    pub fn reciprocal_of(value: &BigInt) -> Result<Self> {
        Self::new(BigInt::one(), value.clone())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.0.is_zero() {
            return Err(domain("reciprocal of zero"));
        }
        Ok(Self(self.0.recip()))
    }

    pub fn is_probability(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Nearest `f64`; underflows to `0.0` for values below the subnormal range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// Decimal rendering with `sig_digits` significant digits, rounded half to
    /// even. Values with a decimal exponent below -6 use scientific notation
    /// (`1.23e-9`); everything else is positional.
    pub fn to_decimal_string(&self, sig_digits: usize) -> String {
        let sig_digits = sig_digits.max(1);
        if self.0.is_zero() {
            return "0".to_owned();
        }
        let negative = self.0.is_negative();
        let p = self.0.numer().abs();
        let q = self.0.denom().clone();

        let mut exp = decimal_exponent(&p, &q);
        let shift = sig_digits as i64 - 1 - exp;
        let (num, den) = if shift >= 0 {
            (p * pow10(shift as u64), q)
        } else {
            (p, q * pow10((-shift) as u64))
        };
        let (mut digits, rem) = num.div_rem(&den);
        let twice = rem * 2u32;
        if twice > den || (twice == den && digits.is_odd()) {
            digits += 1u32;
        }
        if digits == pow10(sig_digits as u64) {
            digits = pow10(sig_digits as u64 - 1);
            exp += 1;
        }
        let s = digits.to_str_radix(10);
        debug_assert_eq!(s.len(), sig_digits);

        let mut out = String::new();
        if negative {
            out.push('-');
        }
        if exp < -6 {
            out.push_str(&s[..1]);
            if s.len() > 1 {
                out.push('.');
                out.push_str(&s[1..]);
            }
            out.push_str(&format!("e{exp}"));
        } else if exp < 0 {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(&s);
        } else {
            let int_len = exp as usize + 1;
            if int_len >= s.len() {
                out.push_str(&s);
                out.extend(std::iter::repeat_n('0', int_len - s.len()));
            } else {
                out.push_str(&s[..int_len]);
                out.push('.');
                out.push_str(&s[int_len..]);
            }
        }
        out
    }
}

fn pow10(e: u64) -> BigInt {
    Pow::pow(BigInt::from(10u32), e)
}

/// `floor(log10(p / q))` for positive `p`, `q`.
fn decimal_exponent(p: &BigInt, q: &BigInt) -> i64 {
    let bits = p.bits() as i64 - q.bits() as i64;
    let mut exp = (bits as f64 * std::f64::consts::LOG10_2).floor() as i64;
    // p / q >= 10^exp  <=>  p * 10^-exp >= q (exp < 0) or p >= q * 10^exp
    let at_least = |e: i64| -> bool {
        if e >= 0 {
            *p >= q * pow10(e as u64)
        } else {
            p * pow10((-e) as u64) >= *q
        }
    };
    while !at_least(exp) {
        exp -= 1;
    }
    while at_least(exp + 1) {
        exp += 1;
    }
    exp
}

impl fmt::Display for ExactRatio {
    /// Always `num/den`, including integers (`1/1`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for ExactRatio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| domain(format!("not an integer: {t:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Self::new(parse(n)?, parse(d)?),
            None => Ok(Self::from_integer(parse(s)?)),
        }
    }
}

impl From<BigRational> for ExactRatio {
    fn from(value: BigRational) -> Self {
        Self(value)
    }
}

impl Mul for &ExactRatio {
    type Output = ExactRatio;

    fn mul(self, rhs: Self) -> ExactRatio {
        ExactRatio(&self.0 * &rhs.0)
    }
}

impl Div<&BigInt> for &ExactRatio {
    type Output = ExactRatio;

    /// Panics on a zero divisor, like integer division.
    fn div(self, rhs: &BigInt) -> ExactRatio {
        assert!(rhs.sign() != Sign::NoSign, "division by zero");
        ExactRatio(&self.0 / BigRational::from_integer(rhs.clone()))
    }
}
