//! Exact scalars of the form `(a + b·√2) / 2^e`.
//!
//! Every entry of a phase-free ZH matrix interpretation lives in this ring:
//! spiders and boxes contribute integers, dark generators contribute powers
//! of `√2`, and the star contributes `1/2`. Values are kept in a canonical
//! form so that equality of values is equality of fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("scalar {0} has a non-zero sqrt2 component")]
    NotDyadic(String),
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// An element `(a + b·√2) / 2^e` of `Z[1/√2]` in canonical form.
///
/// Canonical means: zero is `(0, 0, 0)`, and for non-zero values `e` is
/// minimal, i.e. `a` and `b` are not both even whenever `e > 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactScalar {
    a: BigInt,
    b: BigInt,
    e: u32,
}

impl ExactScalar {
    /// Builds `(a + b·√2) / 2^e`. A negative `e` is absorbed into `a` and `b`.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, e: i64) -> Self {
        let (mut a, mut b) = (a.into(), b.into());
        let e = if e < 0 {
            let shift = e.unsigned_abs() as usize;
            a <<= shift;
            b <<= shift;
            0
        } else {
            u32::try_from(e).expect("denominator exponent out of range")
        };
        let mut s = ExactScalar { a, b, e };
        s.canonicalize();
        s
    }

    pub fn zero() -> Self {
        ExactScalar { a: BigInt::zero(), b: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        ExactScalar { a: BigInt::one(), b: BigInt::zero(), e: 0 }
    }

    /// The value of the star generator.
    pub fn half() -> Self {
        ExactScalar { a: BigInt::one(), b: BigInt::zero(), e: 1 }
    }

    pub fn sqrt2() -> Self {
        ExactScalar { a: BigInt::zero(), b: BigInt::one(), e: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ExactScalar { a: n.into(), b: BigInt::zero(), e: 0 }
    }

    /// `√2^p` for any integer `p`.
    pub fn sqrt2_pow(p: i64) -> Self {
        let half = p.div_euclid(2);
        if p.rem_euclid(2) == 0 {
            ExactScalar::new(1, 0, -half)
        } else {
            ExactScalar::new(0, 1, -half)
        }
    }

    /// A dyadic rational `c / 2^d`.
    pub fn dyadic(c: impl Into<BigInt>, d: u32) -> Self {
        ExactScalar::new(c, 0, i64::from(d))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.e == 0 && self.b.is_zero() && self.a.is_one()
    }

    pub fn is_dyadic(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns `(c, d)` with value `c / 2^d`.
    pub fn as_dyadic(&self) -> Result<(BigInt, u32), ScalarError> {
        if self.is_dyadic() {
            Ok((self.a.clone(), self.e))
        } else {
            Err(ScalarError::NotDyadic(self.to_string()))
        }
    }

    /// Multiplies by `2^-k`.
    pub fn halve(&self, k: u32) -> Self {
        let mut s = ExactScalar { a: self.a.clone(), b: self.b.clone(), e: self.e + k };
        s.canonicalize();
        s
    }

    /// Floating approximation. Only meant for sanity checks.
    pub fn approx_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        (a + b * std::f64::consts::SQRT_2) / 2f64.powi(self.e as i32)
    }

    fn canonicalize(&mut self) {
        if self.is_zero() {
            self.e = 0;
            return;
        }
        if self.e == 0 {
            return;
        }
        let tz = match (self.a.trailing_zeros(), self.b.trailing_zeros()) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) | (None, Some(x)) => x,
            (None, None) => unreachable!("zero handled above"),
        };
        let shift = tz.min(u64::from(self.e));
        if shift > 0 {
            self.a >>= shift as usize;
            self.b >>= shift as usize;
            self.e -= shift as u32;
        }
    }

    fn add_ref(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let e = self.e.max(other.e);
        let (ls, lo) = ((e - self.e) as usize, (e - other.e) as usize);
        let mut s = ExactScalar {
            a: (&self.a << ls) + (&other.a << lo),
            b: (&self.b << ls) + (&other.b << lo),
            e,
        };
        s.canonicalize();
        s
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ExactScalar::zero();
        }
        let a = &self.a * &other.a + ((&self.b * &other.b) << 1usize);
        let b = &self.a * &other.b + &self.b * &other.a;
        let mut s = ExactScalar { a, b, e: self.e + other.e };
        s.canonicalize();
        s
    }

    /// Compact human-readable form, e.g. `7`, `3/4`, `√2`, `(1 + 3√2)/4`.
    pub fn pretty(&self) -> String {
        let den = BigInt::one() << self.e as usize;
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => self.a.to_string(),
            (true, false) => match () {
                _ if self.b.is_one() => "√2".to_string(),
                _ if self.b == -BigInt::one() => "-√2".to_string(),
                _ => format!("{}√2", self.b),
            },
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                let mag = self.b.abs();
                let b = if mag.is_one() { "√2".to_string() } else { format!("{}√2", mag) };
                format!("({} {} {})", self.a, sign, b)
            }
        };
        if self.e == 0 {
            num
        } else {
            format!("{}/{}", num, den)
        }
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        ExactScalar::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl From<u64> for ExactScalar {
    fn from(n: u64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        ExactScalar::from_int(n)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        self.add_ref(rhs)
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        if rhs.is_zero() {
            return;
        }
        if self.e == rhs.e {
            self.a += &rhs.a;
            self.b += &rhs.b;
            self.canonicalize();
        } else {
            *self = self.add_ref(rhs);
        }
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        *self += &rhs;
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        ExactScalar { a: -self.a, b: -self.b, e: self.e }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -&self.a, b: -&self.b, e: self.e }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> Self {
        self.add_ref(&-rhs)
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self.add_ref(&-rhs)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        self.mul_ref(rhs)
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl std::iter::Product for ExactScalar {
    fn product<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::one(), |acc, x| acc.mul_ref(&x))
    }
}

/// Canonical text: `(a + b*sqrt2)/2^e`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}*sqrt2)/2^{}", self.a, self.b, self.e)
    }
}

/// Accepts the canonical text form as well as plain dyadic forms:
/// `c`, `c/2^d`, and `c/N` with `N` a power of two.
impl FromStr for ExactScalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScalarError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some(rest) = t.strip_prefix('(') {
            let (body, den) = rest.split_once(")/2^").ok_or_else(err)?;
            let (a, b) = body.split_once('+').ok_or_else(err)?;
            let b = b.strip_suffix("*sqrt2").ok_or_else(err)?;
            let a: BigInt = a.parse().map_err(|_| err())?;
            let b: BigInt = b.parse().map_err(|_| err())?;
            let e: u32 = den.parse().map_err(|_| err())?;
            return Ok(ExactScalar::new(a, b, i64::from(e)));
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (t.as_str(), None),
        };
        let c: BigInt = num.parse().map_err(|_| err())?;
        let d = match den {
            None => 0,
            Some(d) => {
                if let Some(exp) = d.strip_prefix("2^") {
                    exp.parse::<u32>().map_err(|_| err())?
                } else {
                    let n: u128 = d.parse().map_err(|_| err())?;
                    if n == 0 || !n.is_power_of_two() {
                        return Err(err());
                    }
                    n.trailing_zeros()
                }
            }
        };
        Ok(ExactScalar::dyadic(c, d))
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: String,
    b: String,
    e: u32,
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarRepr { a: self.a.to_string(), b: self.b.to_string(), e: self.e }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = ScalarRepr::deserialize(deserializer)?;
        let a: BigInt = r.a.parse().map_err(serde::de::Error::custom)?;
        let b: BigInt = r.b.parse().map_err(serde::de::Error::custom)?;
        Ok(ExactScalar::new(a, b, i64::from(r.e)))
    }
}
