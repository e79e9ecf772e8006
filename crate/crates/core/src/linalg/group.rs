use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::ring::Ring;

/// A finitely generated abelian group `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_m` with
/// `d_1 | d_2 | ... | d_m` and every `d_i ≥ 2`.  Over a field only the rank
/// is meaningful and the factor list is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupPresentation {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl GroupPresentation {
    /// Canonicalizes arbitrary cyclic orders: zeros become free summands,
    /// units vanish, and the rest is rewritten as a divisibility chain.
    pub fn new(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut free_rank = free_rank;
        let mut fs = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                fs.push(d);
            }
        }
        GroupPresentation {
            free_rank,
            invariant_factors: divisibility_chain(fs),
        }
    }

    pub fn free(rank: usize) -> Self {
        GroupPresentation {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(
            self.free_rank + other.free_rank,
            self.invariant_factors
                .iter()
                .chain(&other.invariant_factors)
                .cloned(),
        )
    }

    /// Some invariant factor is divisible by `n`, i.e. there is an element of
    /// order `n`.
    pub fn has_element_of_order(&self, n: u64) -> bool {
        let n = BigInt::from(n);
        self.invariant_factors.iter().any(|d| (d % &n).is_zero())
    }

    /// Dimension of `G ⊗ F_p`.
    pub fn rank_mod(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.free_rank
            + self
                .invariant_factors
                .iter()
                .filter(|d| (*d % &p).is_zero())
                .count()
    }

    /// Dimension after tensoring with the given field (`Q` keeps the rank).
    pub fn dim_over(&self, ring: Ring) -> Option<usize> {
        match ring {
            Ring::Rationals => Some(self.free_rank),
            Ring::PrimeField(p) => Some(self.rank_mod(p)),
            Ring::Integers => None,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "free_rank": self.free_rank,
            "invariant_factors": self.invariant_factors.iter().map(bigint_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        let free_rank = v
            .get("free_rank")
            .and_then(Value::as_u64)
            .ok_or("missing free_rank")? as usize;
        let mut fs = Vec::new();
        if let Some(list) = v.get("invariant_factors") {
            for d in list.as_array().ok_or("invariant_factors must be a list")? {
                fs.push(bigint_from_json(d).ok_or("bad invariant factor")?);
            }
        }
        Ok(Self::new(free_rank, fs))
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for run in self.invariant_factors.chunk_by(|a, b| a == b) {
            match run.len() {
                1 => parts.push(format!("Z/{}", run[0])),
                n => parts.push(format!("(Z/{})^{n}", run[0])),
            }
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for GroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(D::Error::custom)
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
pub(crate) fn bigint_json(d: &BigInt) -> Value {
    match d.to_i64() {
        Some(v) => json!(v),
        None => json!(d.to_string()),
    }
}

pub(crate) fn bigint_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.to_string().parse().ok(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// Rewrite positive integers as an ascending divisibility chain with the same
/// direct sum of cyclic groups, dropping units.
pub fn divisibility_chain(mut fs: Vec<BigInt>) -> Vec<BigInt> {
    let n = fs.len();
    for i in 0..n {
        for j in i + 1..n {
            if (&fs[j] % &fs[i]).is_zero() {
                continue;
            }
            let g = fs[i].gcd(&fs[j]);
            let l = fs[i].lcm(&fs[j]);
            fs[i] = g;
            fs[j] = l;
        }
    }
    fs.retain(|d| !d.is_one());
    fs.sort();
    fs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn chain_normalization() {
        let g = GroupPresentation::new(0, [b(2), b(3)]);
        assert_eq!(g.invariant_factors(), &[b(6)]);
        let g = GroupPresentation::new(1, [b(4), b(6), b(1), b(0)]);
        assert_eq!(g.free_rank(), 2);
        assert_eq!(g.invariant_factors(), &[b(2), b(12)]);
        assert!(g.has_element_of_order(4));
        assert!(g.has_element_of_order(3));
        assert!(!g.has_element_of_order(8));
        assert_eq!(g.rank_mod(2), 4);
        assert_eq!(g.rank_mod(3), 3);
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/12");
        let g = GroupPresentation::new(0, [2, 2, 2, 6].map(BigInt::from));
        assert_eq!(g.to_string(), "(Z/2)^3 + Z/6");
    }

    #[test]
    fn json_round_trip() {
        let g = GroupPresentation::new(3, [b(2), b(2)]);
        let v = g.to_json();
        assert_eq!(v, json!({"free_rank": 3, "invariant_factors": [2, 2]}));
        assert_eq!(GroupPresentation::from_json(&v).unwrap(), g);
    }
}
