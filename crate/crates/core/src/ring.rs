//! Coefficient rings and the scalar trait used by multivectors.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{HfError, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Coefficient ring of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl Ring {
    /// `PrimeField(p)`, rejecting composite `p`.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(HfError::Domain(format!("{p} is not prime")))
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Ring::PrimeField(p) => p,
            _ => 0,
        }
    }

    /// Canonical textual tag: `Z`, `Q`, `F2`, `Fp:<p>`.
    pub fn tag(self) -> String {
        self.to_string()
    }

    /// Reduce an integer into the ring's canonical representative
    /// (nonnegative residue for prime fields).
    pub fn reduce(self, v: &BigInt) -> BigInt {
        match self {
            Ring::PrimeField(p) => {
                let p = BigInt::from(p);
                ((v % &p) + &p) % &p
            }
            _ => v.clone(),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => f.write_str("Z"),
            Ring::Rationals => f.write_str("Q"),
            Ring::PrimeField(2) => f.write_str("F2"),
            Ring::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = HfError;

    fn from_str(s: &str) -> Result<Ring> {
        let t = s.trim();
        match t {
            "Z" | "ZZ" | "integers" => return Ok(Ring::Integers),
            "Q" | "QQ" | "rationals" => return Ok(Ring::Rationals),
            _ => {}
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("GF"))
            .or_else(|| t.strip_prefix('F'));
        match digits.map(str::parse::<u64>) {
            Some(Ok(p)) => Ring::prime_field(p),
            _ => Err(HfError::Parse(format!(
                "unknown ring '{s}' (expected Z, Q, F2 or Fp:<p>)"
            ))),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Ring, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact scalars a [`Multivector`](crate::exterior::Multivector) may carry.
pub trait Coeff:
    Clone
    + fmt::Debug
    + fmt::Display
    + FromStr
    + PartialEq
    + Eq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    /// The value as an integer, if it is one.
    fn as_integer(&self) -> Option<BigInt>;
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn as_integer(&self) -> Option<BigInt> {
        Some(self.clone())
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn as_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer().clone())
    }
}

/// Arithmetic in `Z/p` on machine words.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        Fp { p }
    }
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }
    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.p as u128 - b as u128) % self.p as u128) as u64
    }
    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }
    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
    pub fn from_rational(self, v: &BigRational) -> Result<u64> {
        let p = BigInt::from(self.p);
        let n = ((v.numer() % &p) + &p) % &p;
        let d = ((v.denom() % &p) + &p) % &p;
        if d.is_zero() {
            return Err(HfError::Domain(format!(
                "denominator {} not invertible mod {}",
                v.denom(),
                self.p
            )));
        }
        let n = n.to_u64().expect("residue fits");
        let d = d.to_u64().expect("residue fits");
        Ok(self.mul(n, self.inv(d)))
    }
}

/// `a` as a decimal or `p/q` string.
pub fn rational_to_string(a: &BigRational) -> String {
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let bad = || HfError::Parse(format!("bad rational '{s}'"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}
