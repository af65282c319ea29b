//! Exact scalar domains: arbitrary-precision integers, normalized rationals,
//! and modular residues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Coefficient domain for polynomial and matrix carriers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarDomain {
    Integers,
    Rationals,
    Modular(u64),
}

impl ScalarDomain {
    pub fn is_finite(&self) -> bool {
        matches!(self, ScalarDomain::Modular(_))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            ScalarDomain::Integers => Scalar::Int(BigInt::zero()),
            ScalarDomain::Rationals => Scalar::Rat(BigRational::zero()),
            ScalarDomain::Modular(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            ScalarDomain::Integers => Scalar::Int(BigInt::one()),
            ScalarDomain::Rationals => Scalar::Rat(BigRational::one()),
            ScalarDomain::Modular(n) => Scalar::Mod(if *n == 1 { 0 } else { 1 }),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            ScalarDomain::Integers => Scalar::Int(BigInt::from(v)),
            ScalarDomain::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            ScalarDomain::Modular(n) => Scalar::Mod(v.rem_euclid(*n as i64) as u64),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (ScalarDomain::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (ScalarDomain::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (ScalarDomain::Modular(n), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *n as u128) as u64)
            }
            _ => panic!("scalar/domain mismatch in add"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (ScalarDomain::Integers, Scalar::Int(x)) => Scalar::Int(-x),
            (ScalarDomain::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (ScalarDomain::Modular(n), Scalar::Mod(x)) => {
                Scalar::Mod(if *x == 0 { 0 } else { n - x })
            }
            _ => panic!("scalar/domain mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (ScalarDomain::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (ScalarDomain::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (ScalarDomain::Modular(n), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *n as u128) as u64)
            }
            _ => panic!("scalar/domain mismatch in mul"),
        }
    }

    /// Multiply by a plain integer; defined in every domain.
    pub fn scale_i64(&self, a: &Scalar, k: i64) -> Scalar {
        self.mul(a, &self.from_i64(k))
    }

    /// Exact division. Fails over the integers when `b` does not divide `a`
    /// and over modular residues when `b` is not a unit.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        match (self, a, b) {
            (ScalarDomain::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() {
                    return Err(Error::NonIntegralScaling("division by zero".into()));
                }
                let (q, r) = num_integer::Integer::div_rem(x, y);
                if r.is_zero() {
                    Ok(Scalar::Int(q))
                } else {
                    Err(Error::NonIntegralScaling(format!("{} does not divide {}", y, x)))
                }
            }
            (ScalarDomain::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => {
                if y.is_zero() {
                    Err(Error::NonIntegralScaling("division by zero".into()))
                } else {
                    Ok(Scalar::Rat(x / y))
                }
            }
            (ScalarDomain::Modular(n), Scalar::Mod(x), Scalar::Mod(y)) => {
                let inv = mod_inverse(*y, *n).ok_or_else(|| {
                    Error::NonIntegralScaling(format!("{} is not a unit mod {}", y, n))
                })?;
                Ok(Scalar::Mod(((*x as u128 * inv as u128) % *n as u128) as u64))
            }
            _ => panic!("scalar/domain mismatch in div"),
        }
    }

    /// Checks that a scalar is a canonical inhabitant of this domain.
    pub fn is_canonical(&self, a: &Scalar) -> bool {
        match (self, a) {
            (ScalarDomain::Integers, Scalar::Int(_)) => true,
            (ScalarDomain::Rationals, Scalar::Rat(r)) => r.denom().is_positive(),
            (ScalarDomain::Modular(n), Scalar::Mod(x)) => x < n,
            _ => false,
        }
    }
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (n as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n as i128) as u64)
}

/// An exact scalar value. The domain is carried by the ambient carrier,
/// not by the value itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Mod(u64),
    Int(BigInt),
    Rat(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 0,
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
        }
    }

    /// JSON form: modular residues and integers as numbers, rationals as
    /// `[numerator, denominator]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Mod(x) => serde_json::json!(x),
            Scalar::Int(x) => match x.to_i64() {
                Some(v) => serde_json::json!(v),
                None => serde_json::json!(x.to_string()),
            },
            Scalar::Rat(r) => {
                let n = r.numer().to_i64();
                let d = r.denom().to_i64();
                match (n, d) {
                    (Some(n), Some(d)) => serde_json::json!([n, d]),
                    _ => serde_json::json!([r.numer().to_string(), r.denom().to_string()]),
                }
            }
        }
    }

    pub fn from_json(domain: &ScalarDomain, v: &serde_json::Value) -> Result<Scalar> {
        let bad = || Error::ParseError(format!("cannot read scalar {} in {:?}", v, domain));
        match domain {
            ScalarDomain::Modular(n) => {
                let x = v.as_i64().ok_or_else(bad)?;
                Ok(Scalar::Mod(x.rem_euclid(*n as i64) as u64))
            }
            ScalarDomain::Integers => {
                if let Some(x) = v.as_i64() {
                    Ok(Scalar::Int(BigInt::from(x)))
                } else if let Some(s) = v.as_str() {
                    s.parse::<BigInt>()
                        .map(Scalar::Int)
                        .map_err(|_| bad())
                } else {
                    Err(bad())
                }
            }
            ScalarDomain::Rationals => {
                if let Some(x) = v.as_i64() {
                    return Ok(Scalar::Rat(BigRational::from_integer(BigInt::from(x))));
                }
                let arr = v.as_array().ok_or_else(bad)?;
                if arr.len() != 2 {
                    return Err(bad());
                }
                let n = arr[0].as_i64().ok_or_else(bad)?;
                let d = arr[1].as_i64().ok_or_else(bad)?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d))))
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(x) => write!(f, "{}", x),
            Scalar::Int(x) => write!(f, "{}", x),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}
