use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{HfError, Result};
use crate::ring::{parse_rational, rational_to_string, Fp, Rational, Ring};

/// Sparse column-major matrix with exact entries.
///
/// Entries are stored as rationals.  Over `Z` they are integral, over `F_p`
/// they are canonical residues in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    ring: Ring,
    columns: Vec<BTreeMap<usize, Rational>>,
}

pub type SparseVector = BTreeMap<usize, Rational>;

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, ring: Ring) -> Self {
        SparseMatrix {
            rows,
            cols,
            ring,
            columns: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize, ring: Ring) -> Self {
        let mut m = Self::zero(n, n, ring);
        for i in 0..n {
            m.columns[i].insert(i, Rational::from_integer(1.into()));
        }
        m
    }

    pub fn from_triplets<I>(rows: usize, cols: usize, ring: Ring, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut m = Self::zero(rows, cols, ring);
        for (r, c, v) in entries {
            m.add_entry(r, c, v)?;
        }
        Ok(m)
    }

    /// Build from integer columns.
    pub fn from_integer_columns(
        rows: usize,
        ring: Ring,
        cols: Vec<BTreeMap<usize, BigInt>>,
    ) -> Result<Self> {
        let mut m = Self::zero(rows, cols.len(), ring);
        for (c, col) in cols.into_iter().enumerate() {
            for (r, v) in col {
                m.add_entry(r, c, Rational::from_integer(v))?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.columns[c]
            .get(&r)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn column(&self, c: usize) -> &SparseVector {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    fn normalize(&self, v: Rational) -> Result<Rational> {
        match self.ring {
            Ring::Rationals => Ok(v),
            Ring::Integers => {
                if v.is_integer() {
                    Ok(v)
                } else {
                    Err(HfError::RingMismatch(format!("{v} is not an integer")))
                }
            }
            Ring::PrimeField(p) => Ok(Rational::from_integer(Fp::new(p).from_rational(&v)?.into())),
        }
    }

    /// Add `v` to entry `(r, c)`.
    pub fn add_entry(&mut self, r: usize, c: usize, v: Rational) -> Result<()> {
        if r >= self.rows || c >= self.cols {
            return Err(HfError::Domain(format!(
                "entry ({r},{c}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        let col = &mut self.columns[c];
        let sum = match col.remove(&r) {
            Some(old) => old + v,
            None => v,
        };
        let sum = self.normalize(sum)?;
        if !sum.is_zero() {
            self.columns[c].insert(r, sum);
        }
        Ok(())
    }

    /// Append a column; entries are normalized into the ring.
    pub fn push_column(&mut self, col: SparseVector) -> Result<()> {
        self.cols += 1;
        self.columns.push(BTreeMap::new());
        let c = self.cols - 1;
        for (r, v) in col {
            self.add_entry(r, c, v)?;
        }
        Ok(())
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, &Rational)> {
        let mut out: Vec<_> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
            .collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows, self.ring);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                t.columns[*r].insert(c, v.clone());
            }
        }
        t
    }

    /// `self · v`.
    pub fn apply(&self, v: &SparseVector) -> Result<SparseVector> {
        let mut out: SparseVector = BTreeMap::new();
        for (c, x) in v {
            if *c >= self.cols {
                return Err(HfError::Domain(format!(
                    "vector index {c} outside {} columns",
                    self.cols
                )));
            }
            for (r, a) in &self.columns[*c] {
                let e = out.entry(*r).or_insert_with(Rational::zero);
                *e = &*e + a * x;
            }
        }
        let mut normalized = BTreeMap::new();
        for (r, x) in out {
            let x = self.normalize(x)?;
            if !x.is_zero() {
                normalized.insert(r, x);
            }
        }
        Ok(normalized)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(HfError::Domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(HfError::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        let mut m = Self::zero(self.rows, other.cols, self.ring);
        for c in 0..other.cols {
            m.columns[c] = self.apply(&other.columns[c])?;
        }
        Ok(m)
    }

    /// Reinterpret the entries in another ring (`Z → Q`, `Z → F_p`, ...).
    pub fn with_ring(&self, ring: Ring) -> Result<Self> {
        let mut m = Self::zero(self.rows, self.cols, ring);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.add_entry(*r, c, v.clone())?;
            }
        }
        Ok(m)
    }

    /// Concatenate matrices with equal row counts side by side.
    pub fn hstack(parts: &[&SparseMatrix]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| HfError::Domain("hstack of no matrices".into()))?;
        let mut m = Self::zero(first.rows, 0, first.ring);
        for p in parts {
            if p.rows != first.rows || p.ring != first.ring {
                return Err(HfError::Domain("hstack shape or ring mismatch".into()));
            }
            m.columns.extend(p.columns.iter().cloned());
            m.cols += p.cols;
        }
        Ok(m)
    }

    pub fn select_columns(&self, which: &[usize]) -> Self {
        SparseMatrix {
            rows: self.rows,
            cols: which.len(),
            ring: self.ring,
            columns: which.iter().map(|&c| self.columns[c].clone()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// Dense integer copy; fails unless every entry is integral.
    pub fn to_dense_integer(&self) -> Result<Vec<Vec<BigInt>>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                if !v.is_integer() {
                    return Err(HfError::RingMismatch(format!("{v} is not an integer")));
                }
                d[*r][c] = v.numer().clone();
            }
        }
        Ok(d)
    }

    /// `{"rows","cols","ring","entries":[[r,c,"v"],...]}` with entries in
    /// row-major order; prime fields add `"p"`.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries()
            .into_iter()
            .map(|(r, c, v)| json!([r, c, rational_to_string(v)]))
            .collect();
        let mut v = json!({
            "rows": self.rows,
            "cols": self.cols,
            "ring": ring_json_tag(self.ring),
            "entries": entries,
        });
        if let Ring::PrimeField(p) = self.ring {
            v["p"] = json!(p);
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |why: &str| HfError::Parse(format!("matrix JSON: {why}"));
        let dim = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| bad(&format!("missing {k}")))
        };
        let rows = dim("rows")?;
        let cols = dim("cols")?;
        let tag = v.get("ring").and_then(Value::as_str).unwrap_or("Z");
        let ring = match (tag, v.get("p").and_then(Value::as_u64)) {
            ("Fp", Some(p)) => Ring::prime_field(p)?,
            ("Fp", None) => return Err(bad("ring Fp needs \"p\"")),
            (t, _) => t.parse()?,
        };
        let mut m = Self::zero(rows, cols, ring);
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing entries"))?;
        for e in entries {
            let triple = e
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| bad("entry must be [r,c,v]"))?;
            let r = triple[0].as_u64().ok_or_else(|| bad("row index"))? as usize;
            let c = triple[1].as_u64().ok_or_else(|| bad("column index"))? as usize;
            let val = match &triple[2] {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => parse_rational(&n.to_string())?,
                _ => return Err(bad("entry value")),
            };
            m.add_entry(r, c, val)?;
        }
        Ok(m)
    }

    /// SHA-256 of the canonical JSON encoding, used to name matrices in
    /// reports.
    pub fn sha256(&self) -> String {
        let text = serde_json::to_string(&self.to_json()).expect("matrix JSON serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn ring_json_tag(ring: Ring) -> &'static str {
    match ring {
        Ring::Integers => "Z",
        Ring::Rationals => "Q",
        Ring::PrimeField(_) => "Fp",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn json_round_trip() {
        let m = SparseMatrix::from_triplets(2, 3, Ring::Integers, [(0, 1, q(2)), (1, 2, q(-7))])
            .unwrap();
        let v = m.to_json();
        assert_eq!(v["entries"], json!([[0, 1, "2"], [1, 2, "-7"]]));
        assert_eq!(SparseMatrix::from_json(&v).unwrap(), m);
        let f = m.with_ring(Ring::PrimeField(5)).unwrap();
        assert_eq!(f.get(1, 2), q(3));
        assert_eq!(SparseMatrix::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn integers_reject_fractions() {
        let half = Rational::new(1.into(), 2.into());
        assert!(SparseMatrix::from_triplets(1, 1, Ring::Integers, [(0, 0, half.clone())]).is_err());
        assert!(SparseMatrix::from_triplets(1, 1, Ring::Rationals, [(0, 0, half)]).is_ok());
        assert!(SparseMatrix::from_triplets(1, 1, Ring::Integers, [(1, 0, q(1))]).is_err());
    }

    #[test]
    fn cancellation_leaves_no_zero() {
        let m = SparseMatrix::from_triplets(1, 1, Ring::Integers, [(0, 0, q(2)), (0, 0, q(-2))])
            .unwrap();
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            Ring::Integers,
            [(0, 0, q(1)), (0, 1, q(2)), (1, 1, q(3))],
        )
        .unwrap();
        let at = a.transpose();
        let p = a.mul(&at).unwrap();
        assert_eq!(p.get(0, 0), q(5));
        assert_eq!(p.get(0, 1), q(6));
        assert_eq!(p.get(1, 1), q(9));
        assert_ne!(a.sha256(), at.sha256());
    }
}
