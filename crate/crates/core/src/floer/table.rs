//! Result tables: groups indexed by a half-integer degree.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{HfError, Result};
use crate::linalg::GroupPresentation;
use crate::ring::Ring;

/// A degree in `½ℤ`, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfDegree(i64);

impl HalfDegree {
    pub fn from_twice(t: i64) -> Self {
        HalfDegree(t)
    }

    pub fn integer(n: i64) -> Self {
        HalfDegree(2 * n)
    }

    /// `d + ½`.
    pub fn plus_half(d: i64) -> Self {
        HalfDegree(2 * d + 1)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integral(self) -> bool {
        self.0 % 2 == 0
    }

    /// The integer `d` with `self = d + ½`, if any.
    pub fn floor_of_half(self) -> Option<i64> {
        (!self.is_integral()).then(|| (self.0 - 1).div_euclid(2))
    }

    pub fn shift(self, by: i64) -> Self {
        HalfDegree(self.0 + 2 * by)
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfDegree {
    type Err = HfError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || HfError::Parse(format!("bad degree '{s}'"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            match d.trim() {
                "2" => Ok(HalfDegree(n)),
                "1" => Ok(HalfDegree(2 * n)),
                _ => Err(bad()),
            }
        } else if let Some(stripped) = s.strip_suffix(".5") {
            let n: i64 = stripped.parse().map_err(|_| bad())?;
            let neg = stripped.starts_with('-');
            Ok(HalfDegree(2 * n + if neg { -1 } else { 1 }))
        } else {
            Ok(HalfDegree(2 * s.parse::<i64>().map_err(|_| bad())?))
        }
    }
}

impl Serialize for HalfDegree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfDegree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Spin^c structure `𝔰_k`, with `c_1` dual to `2k[S^1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinC {
    pub k: i64,
}

impl SpinC {
    pub fn new(k: i64) -> Self {
        SpinC { k }
    }

    pub fn is_torsion(self) -> bool {
        self.k == 0
    }

    pub fn conjugate(self) -> Self {
        SpinC { k: -self.k }
    }

    /// Whether the adjunction inequality allows nonzero groups.
    pub fn can_be_nonzero(self, genus: usize) -> bool {
        (self.k.unsigned_abs() as usize) < genus.max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Hat,
    Plus,
    PlusRed,
    Infinity,
}

impl Flavor {
    pub fn tag(self) -> &'static str {
        match self {
            Flavor::Hat => "hat",
            Flavor::Plus => "plus",
            Flavor::PlusRed => "plus_red",
            Flavor::Infinity => "infinity",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Flavor {
    type Err = HfError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hat" => Ok(Flavor::Hat),
            "plus" => Ok(Flavor::Plus),
            "plus_red" => Ok(Flavor::PlusRed),
            "infinity" => Ok(Flavor::Infinity),
            _ => Err(HfError::Parse(format!("unknown flavor '{s}'"))),
        }
    }
}

/// `rank` copies of the tower `ℤ[U,U^{-1}]/U·ℤ[U]` with bottom in `start`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tower {
    pub start: HalfDegree,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloerTable {
    pub genus: usize,
    pub spinc: SpinC,
    pub ring: Ring,
    pub flavor: Flavor,
    pub entries: BTreeMap<HalfDegree, GroupPresentation>,
    pub towers: Vec<Tower>,
    pub metadata: BTreeMap<String, String>,
}

impl FloerTable {
    pub fn new(genus: usize, spinc: SpinC, ring: Ring, flavor: Flavor) -> Self {
        FloerTable {
            genus,
            spinc,
            ring,
            flavor,
            entries: BTreeMap::new(),
            towers: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    /// The group in degree `deg`, trivial when absent.
    pub fn group(&self, deg: HalfDegree) -> GroupPresentation {
        self.entries
            .get(&deg)
            .cloned()
            .unwrap_or_else(GroupPresentation::trivial)
    }

    /// Rank over `Q` for `Z` tables and dimension for field tables.
    pub fn rank(&self, deg: HalfDegree) -> usize {
        let g = self.group(deg);
        match self.ring {
            Ring::PrimeField(p) => g.rank_mod(p),
            _ => g.free_rank(),
        }
    }

    pub fn nonzero_degrees(&self) -> Vec<HalfDegree> {
        self.entries
            .iter()
            .filter(|(_, g)| !g.is_trivial())
            .map(|(d, _)| *d)
            .collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.entries.values().all(GroupPresentation::is_free)
    }

    pub fn total_rank(&self) -> usize {
        self.entries.keys().map(|d| self.rank(*d)).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.genus,
            "spinc": self.spinc.k,
            "ring": self.ring.to_string(),
            "flavor": self.flavor.tag(),
            "entries": self.entries.iter().map(|(d, g)| json!({"deg": d.to_string(), "group": g.to_json()})).collect::<Vec<_>>(),
            "towers": self.towers.iter().map(|t| json!({"start_degree": t.start.to_string(), "rank": t.rank})).collect::<Vec<_>>(),
            "metadata": self.metadata,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| HfError::Parse(format!("floer table: {what}"));
        let genus = v
            .get("genus")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("genus"))? as usize;
        let k = v
            .get("spinc")
            .and_then(Value::as_i64)
            .ok_or_else(|| bad("spinc"))?;
        let ring: Ring = v
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("ring"))?
            .parse()?;
        let flavor: Flavor = v
            .get("flavor")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("flavor"))?
            .parse()?;
        let mut t = FloerTable::new(genus, SpinC::new(k), ring, flavor);
        for e in v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("entries"))?
        {
            let d: HalfDegree = e
                .get("deg")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("deg"))?
                .parse()?;
            let g = GroupPresentation::from_json(e.get("group").ok_or_else(|| bad("group"))?)
                .map_err(|m| bad(&m))?;
            t.entries.insert(d, g);
        }
        if let Some(ts) = v.get("towers").and_then(Value::as_array) {
            for tw in ts {
                let start = tw
                    .get("start_degree")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("start_degree"))?
                    .parse()?;
                let rank = tw
                    .get("rank")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("rank"))? as usize;
                t.towers.push(Tower { start, rank });
            }
        }
        if let Some(Value::Object(m)) = v.get("metadata") {
            for (key, val) in m {
                t.metadata.insert(
                    key.clone(),
                    val.as_str()
                        .map(str::to_owned)
                        .unwrap_or_else(|| val.to_string()),
                );
            }
        }
        Ok(t)
    }

    /// The group as printed: field tables show a vector space.
    fn label(&self, g: &GroupPresentation) -> String {
        let (field, n) = match self.ring {
            Ring::Integers => return g.to_string(),
            Ring::Rationals => ("Q".to_string(), g.free_rank()),
            Ring::PrimeField(p) => (format!("F{p}"), g.rank_mod(p)),
        };
        match n {
            0 => "0".into(),
            1 => field,
            n => format!("{field}^{n}"),
        }
    }

    /// Rows `degree, group, rank` as TSV.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("degree\tgroup\trank\n");
        for (d, g) in &self.entries {
            out.push_str(&format!("{d}\t{}\t{}\n", self.label(g), self.rank(*d)));
        }
        out
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} of Σ_{}×S¹, k = {}, over {}\n",
            self.flavor, self.genus, self.spinc.k, self.ring
        );
        let rows: Vec<(String, String)> = self
            .entries
            .iter()
            .map(|(d, g)| (d.to_string(), self.label(g)))
            .collect();
        let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(6);
        out.push_str(&format!("{:>w$}  group\n", "degree"));
        for (d, g) in rows {
            out.push_str(&format!("{d:>w$}  {g}\n"));
        }
        if !self.towers.is_empty() {
            out.push_str("towers:");
            for t in &self.towers {
                out.push_str(&format!(" T_{}^{}", t.start, t.rank));
            }
            out.push('\n');
        }
        out
    }
}
