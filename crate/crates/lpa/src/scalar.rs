//! Exact scalar fields.
//!
//! Every coefficient in the engine lives in an exact field: no floating
//! point anywhere. Two fields are provided, the rationals (arbitrary
//! precision, the default) and a prime field of runtime-chosen order.
//! Each field variant sits behind the [`Field`] trait and is registered
//! by name in [`FIELD_REGISTRY`], so the CLI can select one at runtime.

use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::{BigRational, One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar literal `{0}`")]
    BadLiteral(String),
    #[error("unknown field `{0}` (try `rational` or `gf:<p>`)")]
    UnknownField(String),
}

/// An exact field, in the "ring as object" style: the field value carries
/// whatever runtime data is needed (e.g. the prime modulus) and all
/// arithmetic goes through it.
pub trait Field: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    /// Image of the rational p/q under the unique ring map from ℚ (or ℤ),
    /// when defined in this field.
    fn from_ratio(&self, num: i64, den: i64) -> Result<Self::Elem, FieldError>;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    fn format(&self, a: &Self::Elem) -> String;
    fn name(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_ratio(n, 1).expect("integer image is always defined")
    }
}

/// The field of rational numbers with arbitrary-precision integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(a.recip())
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<BigRational, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn parse(&self, s: &str) -> Result<BigRational, FieldError> {
        let bad = || FieldError::BadLiteral(s.to_string());
        let (ns, ds) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n = BigInt::from_str(ns.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(ds.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(BigRational::new(n, d))
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        "rational".to_string()
    }
}

/// The prime field of order `p`, elements stored canonically in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b: u128 = (base % p) as u128;
    base = 0;
    let _ = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Result<u64, FieldError> {
        if *a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(pow_mod(*a, self.p - 2, self.p))
    }
    fn from_ratio(&self, num: i64, den: i64) -> Result<u64, FieldError> {
        if den == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p as i128;
        let n = ((num as i128 % p) + p) % p;
        let d = ((den as i128 % p) + p) % p;
        let d_inv = self.inv(&(d as u64))?;
        Ok(self.mul(&(n as u64), &d_inv))
    }
    fn parse(&self, s: &str) -> Result<u64, FieldError> {
        let bad = || FieldError::BadLiteral(s.to_string());
        let (ns, ds) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let n: i64 = ns.trim().parse().map_err(|_| bad())?;
        let d: i64 = ds.trim().parse().map_err(|_| bad())?;
        self.from_ratio(n, d)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn name(&self) -> String {
        format!("gf:{}", self.p)
    }
}

/// Runtime selection of a coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

/// One entry of the field registry: a name, a usage hint and a matcher
/// that claims (or declines) a selector string.
pub struct FieldFactory {
    pub name: &'static str,
    pub usage: &'static str,
    pub matcher: fn(&str) -> Option<Result<FieldSpec, FieldError>>,
}

fn match_rational(s: &str) -> Option<Result<FieldSpec, FieldError>> {
    match s {
        "rational" | "rationals" | "q" | "Q" => Some(Ok(FieldSpec::Rational)),
        _ => None,
    }
}

fn match_prime(s: &str) -> Option<Result<FieldSpec, FieldError>> {
    let body = s.strip_prefix("gf:").or_else(|| s.strip_prefix("gf"))?;
    match body.parse::<u64>() {
        Ok(p) => Some(PrimeField::new(p).map(|f| FieldSpec::Prime(f.p))),
        Err(_) => Some(Err(FieldError::UnknownField(s.to_string()))),
    }
}

/// All selectable coefficient fields, by name.
pub const FIELD_REGISTRY: &[FieldFactory] = &[
    FieldFactory {
        name: "rational",
        usage: "rational",
        matcher: match_rational,
    },
    FieldFactory {
        name: "gf",
        usage: "gf:<p> for a prime p",
        matcher: match_prime,
    },
];

/// Resolve a `--field` selector against the registry.
pub fn parse_field_spec(s: &str) -> Result<FieldSpec, FieldError> {
    for factory in FIELD_REGISTRY {
        if let Some(res) = (factory.matcher)(s) {
            return res;
        }
    }
    Err(FieldError::UnknownField(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = Rationals;
        let half = f.parse("1/2").unwrap();
        let third = f.parse("1/3").unwrap();
        let sum = f.add(&half, &third);
        assert_eq!(f.format(&sum), "5/6");
        assert_eq!(f.mul(&sum, &f.inv(&sum).unwrap()), f.one());
    }

    #[test]
    fn prime_field_requires_prime_order() {
        assert!(PrimeField::new(7).is_ok());
        assert_eq!(PrimeField::new(6), Err(FieldError::NotPrime(6)));
        assert_eq!(PrimeField::new(1), Err(FieldError::NotPrime(1)));
    }

    #[test]
    fn prime_field_inverse_and_ratio() {
        let f = PrimeField::new(7).unwrap();
        let x = f.from_ratio(1, 2).unwrap(); // 2^{-1} = 4 mod 7
        assert_eq!(x, 4);
        assert_eq!(f.from_ratio(-1, 1).unwrap(), 6);
        assert_eq!(f.inv(&3).unwrap(), 5);
        assert_eq!(f.inv(&0), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn registry_resolves_selectors() {
        assert_eq!(parse_field_spec("rational"), Ok(FieldSpec::Rational));
        assert_eq!(parse_field_spec("gf:5"), Ok(FieldSpec::Prime(5)));
        assert_eq!(parse_field_spec("gf:4"), Err(FieldError::NotPrime(4)));
        assert!(matches!(
            parse_field_spec("float"),
            Err(FieldError::UnknownField(_))
        ));
    }
}
