//! Exterior algebra of `H^1` of a genus-`g` surface with its symplectic pairing.
//!
//! The basis `e_1, ..., e_{2g}` is stored as bits `0..2g` of a [`Blade`] mask,
//! with `ω(e_{2i-1}, e_{2i}) = 1`.  The pair blades `z_j = e_{2j-1} e_{2j}`
//! sum to `ω`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use serde_json::{json, Value};

use crate::error::{HfError, Result};
use crate::linalg::SparseMatrix;
use crate::ring::{Coeff, Integer, Rational, Ring};

/// Largest genus a `u32` blade mask can represent.
pub const HARD_GENUS_LIMIT: usize = 16;
/// Default runtime cap (blade space `2^20`).
pub const DEFAULT_GENUS_CAP: usize = 10;

pub fn check_genus(g: usize, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_GENUS_LIMIT);
    if g == 0 || g > cap {
        return Err(HfError::GenusOutOfRange { genus: g, cap });
    }
    Ok(())
}

/// A wedge product of distinct basis vectors in ascending index order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(u32);

impl Blade {
    pub const UNIT: Blade = Blade(0);

    pub const fn from_mask(mask: u32) -> Blade {
        Blade(mask)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// `e_k` for `k` in `1..=2g`.
    pub fn basis(k: usize) -> Blade {
        assert!((1..=2 * HARD_GENUS_LIMIT).contains(&k), "basis index {k}");
        Blade(1 << (k - 1))
    }

    /// `z_j = e_{2j-1} e_{2j}`.
    pub fn pair(j: usize) -> Blade {
        assert!((1..=HARD_GENUS_LIMIT).contains(&j), "pair index {j}");
        Blade(3 << (2 * (j - 1)))
    }

    /// `e_1 ... e_{2g}`, which equals `z_1 ... z_g`.
    pub fn top(g: usize) -> Blade {
        Blade(full_mask(g))
    }

    pub fn fits(self, g: usize) -> bool {
        self.0 & !full_mask(g) == 0
    }

    /// 1-based indices in ascending order.
    pub fn indices(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    /// `e_{i_1} ∧ ... ∧ e_{i_k}` as a sign and a blade; `None` on a repeat.
    pub fn from_indices(idx: &[usize]) -> Option<(i64, Blade)> {
        let mut sign = 1;
        let mut acc = Blade::UNIT;
        for &k in idx {
            if k == 0 || k > 2 * HARD_GENUS_LIMIT {
                return None;
            }
            let (s, b) = acc.wedge(Blade::basis(k))?;
            sign *= s;
            acc = b;
        }
        Some((sign, acc))
    }

    pub fn wedge(self, other: Blade) -> Option<(i64, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        Some((wedge_sign(self.0, other.0), Blade(self.0 | other.0)))
    }

    /// `self ∠ other`: the vectors of `self` act right to left, so
    /// `(v_1 ... v_p)∠α = v_1∠(v_2∠(...(v_p∠α)))`.
    pub fn contract(self, other: Blade) -> Option<(i64, Blade)> {
        let mut sign = 1;
        let mut acc = other.0;
        let mut rest = self.0;
        while rest != 0 {
            let bit = 31 - rest.leading_zeros();
            rest &= !(1 << bit);
            let (s, m) = contract_bit(bit, acc)?;
            sign *= s;
            acc = m;
        }
        Some((sign, Blade(acc)))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Blade{:?}", self.indices())
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.indices().iter().map(|k| format!("e{k}")).collect();
        f.write_str(&parts.join("^"))
    }
}

#[inline]
fn full_mask(g: usize) -> u32 {
    if 2 * g >= 32 {
        u32::MAX
    } else {
        (1u32 << (2 * g)) - 1
    }
}

/// Sign of merging `a` then `b` into ascending order: one transposition for
/// every pair `(i ∈ a, j ∈ b)` with `i > j`.
#[inline]
fn wedge_sign(a: u32, b: u32) -> i64 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (a >> j >> 1).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `e∠(w_1 ... w_k) = Σ (-1)^{l-1} ω(w_l, e) w_1 ... ŵ_l ... w_k` for the basis
/// vector `e` at bit `bit`.  Only the symplectic partner of `e` pairs
/// nontrivially.
#[inline]
fn contract_bit(bit: u32, mask: u32) -> Option<(i64, u32)> {
    let partner = bit ^ 1;
    if mask >> partner & 1 == 0 {
        return None;
    }
    let before = (mask & ((1u32 << partner) - 1)).count_ones();
    // ω(e_{2i-1}, e_{2i}) = 1 and the odd-indexed vectors sit on even bits.
    let pairing = if partner % 2 == 0 { 1 } else { -1 };
    let sign = if before % 2 == 0 { pairing } else { -pairing };
    Some((sign, mask & !(1 << partner)))
}

/// Sparse element of `Λ* H^1(Σ_g)` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector<C = Integer> {
    genus: usize,
    terms: BTreeMap<Blade, C>,
}

impl<C: Coeff> Multivector<C> {
    pub fn zero(genus: usize) -> Self {
        Multivector {
            genus,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(genus: usize) -> Self {
        Self::blade(genus, Blade::UNIT)
    }

    pub fn scalar(genus: usize, c: C) -> Self {
        Self::signed_blade(genus, Blade::UNIT, c)
    }

    pub fn blade(genus: usize, b: Blade) -> Self {
        Self::signed_blade(genus, b, C::one())
    }

    pub fn signed_blade(genus: usize, b: Blade, c: C) -> Self {
        assert!(b.fits(genus), "{b:?} outside genus {genus}");
        let mut m = Self::zero(genus);
        m.add_term(b, c);
        m
    }

    /// `e_k`, 1-based.
    pub fn basis_vector(genus: usize, k: usize) -> Self {
        assert!((1..=2 * genus).contains(&k), "e_{k} outside genus {genus}");
        Self::blade(genus, Blade::basis(k))
    }

    pub fn from_terms<I: IntoIterator<Item = (Blade, C)>>(genus: usize, terms: I) -> Result<Self> {
        let mut m = Self::zero(genus);
        for (b, c) in terms {
            if !b.fits(genus) {
                return Err(HfError::Domain(format!("{b:?} outside genus {genus}")));
            }
            m.add_term(b, c);
        }
        Ok(m)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Blade, C> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coeff(&self, b: Blade) -> C {
        self.terms.get(&b).cloned().unwrap_or_else(C::zero)
    }

    pub fn grades(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|b| b.grade()).collect()
    }

    /// The common grade of all terms; `None` for zero or mixed grades.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let gs = self.grades();
        (gs.len() == 1).then(|| *gs.iter().next().unwrap())
    }

    pub fn grade_part(&self, p: usize) -> Self {
        Multivector {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| b.grade() == p)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, b: Blade, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        assert_eq!(self.genus, other.genus, "genus mismatch");
        for (b, v) in &other.terms {
            self.add_term(*b, v.clone() * c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut m = Self::zero(self.genus);
        m.add_scaled(self, c);
        m
    }

    fn same_genus(&self, other: &Self) -> Result<()> {
        if self.genus != other.genus {
            return Err(HfError::GenusMismatch(self.genus, other.genus));
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_genus(other)?;
        let mut m = Self::zero(self.genus);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((s, blade)) = a.wedge(*b) {
                    m.add_term(blade, signed(ca.clone() * cb.clone(), s));
                }
            }
        }
        Ok(m)
    }

    /// `self ∠ other`, bilinear in both arguments.
    pub fn contract(&self, other: &Self) -> Result<Self> {
        self.same_genus(other)?;
        let mut m = Self::zero(self.genus);
        for (x, cx) in &self.terms {
            for (a, ca) in &other.terms {
                if let Some((s, blade)) = x.contract(*a) {
                    m.add_term(blade, signed(cx.clone() * ca.clone(), s));
                }
            }
        }
        Ok(m)
    }

    /// Hodge–Lefschetz star `α ↦ α∠η_g`.
    pub fn star(&self) -> Self {
        let top = Blade::top(self.genus);
        let mut m = Self::zero(self.genus);
        for (b, c) in &self.terms {
            let (s, blade) = b
                .contract(top)
                .expect("every blade contracts into the top blade");
            m.add_term(blade, signed(c.clone(), s));
        }
        m
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Multivector<D> {
        let mut m = Multivector::<D>::zero(self.genus);
        for (b, c) in &self.terms {
            m.add_term(*b, f(c));
        }
        m
    }

    /// JSON list of `{"blade": [1-based indices], "coeff": "text"}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(b, c)| json!({"blade": b.indices(), "coeff": c.to_string()}))
                .collect(),
        )
    }

    /// Parse the format of [`Multivector::to_json`].  Index lists need not be
    /// sorted; the reordering sign is applied.
    pub fn from_json(genus: usize, v: &Value) -> Result<Self> {
        let bad = |why: &str| HfError::Parse(format!("multivector JSON: {why}"));
        let items = v.as_array().ok_or_else(|| bad("expected a list"))?;
        let mut m = Self::zero(genus);
        for item in items {
            let idx: Vec<usize> = item
                .get("blade")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing blade"))?
                .iter()
                .map(|x| x.as_u64().map(|k| k as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("blade indices must be integers"))?;
            let coeff = match item.get("coeff") {
                Some(Value::String(s)) => s.parse::<C>().map_err(|_| bad("bad coefficient"))?,
                Some(Value::Number(n)) => n
                    .to_string()
                    .parse::<C>()
                    .map_err(|_| bad("bad coefficient"))?,
                _ => return Err(bad("missing coeff")),
            };
            if idx.iter().any(|&k| k == 0 || k > 2 * genus) {
                return Err(bad("index out of range"));
            }
            if let Some((s, b)) = Blade::from_indices(&idx) {
                m.add_term(b, signed(coeff, s));
            }
        }
        Ok(m)
    }
}

impl Multivector<Integer> {
    pub fn to_rational(&self) -> Multivector<Rational> {
        self.map_coeffs(|c| Rational::from_integer(c.clone()))
    }
}

impl Multivector<Rational> {
    /// The integer element, if every coefficient is integral.
    pub fn to_integer(&self) -> Option<Multivector<Integer>> {
        let mut m = Multivector::zero(self.genus);
        for (b, c) in &self.terms {
            m.add_term(*b, c.as_integer()?);
        }
        Some(m)
    }
}

#[inline]
pub(crate) fn signed<C: Coeff>(c: C, s: i64) -> C {
    if s < 0 {
        -c
    } else {
        c
    }
}

impl<C: Coeff> fmt::Debug for Multivector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(g={}, {})", self.genus, self)
    }
}

impl<C: Coeff> fmt::Display for Multivector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("({c}) {b}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

// Operators panic on mismatched genus; use `wedge`/`contract` for checked
// products.
impl<C: Coeff> Add for Multivector<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &C::one());
        self
    }
}

impl<C: Coeff> Sub for Multivector<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_scaled(&rhs, &-C::one());
        self
    }
}

impl<C: Coeff> Neg for Multivector<C> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-C::one())
    }
}

/// `η_k = Σ_{j_1 < ... < j_k} z_{j_1} ... z_{j_k}`, zero for `k > g`.
pub fn eta<C: Coeff>(k: usize, g: usize) -> Multivector<C> {
    let mut m = Multivector::zero(g);
    if k > g {
        return m;
    }
    for_each_subset(g, k, |set| {
        let mask = set
            .iter()
            .fold(0u32, |acc, &j| acc | Blade::pair(j + 1).mask());
        m.add_term(Blade::from_mask(mask), C::one());
    });
    m
}

/// The symplectic form `ω = η_1`.
pub fn omega<C: Coeff>(g: usize) -> Multivector<C> {
    eta(1, g)
}

/// `e^{tω} = Σ_n t^n η_n`.
pub fn exp_omega<C: Coeff>(g: usize, t: i64) -> Multivector<C> {
    let mut m = Multivector::zero(g);
    let mut power = BigInt::from(1);
    for n in 0..=g {
        m.add_scaled(&eta(n, g), &C::from_bigint(&power));
        power *= t;
    }
    m
}

/// `ι_γ(a) = γ*∠a` for `γ*` the basis vector `e_k`.
pub fn interior<C: Coeff>(k: usize, a: &Multivector<C>) -> Result<Multivector<C>> {
    if k == 0 || k > 2 * a.genus() {
        return Err(HfError::Domain(format!(
            "e_{k} outside genus {}",
            a.genus()
        )));
    }
    Multivector::basis_vector(a.genus(), k).contract(a)
}

/// All blades of grade `p` in ascending mask order.
pub fn blades_of_grade(g: usize, p: usize) -> Vec<Blade> {
    let n = 2 * g;
    let mut out = Vec::new();
    if p > n {
        return out;
    }
    for_each_subset(n, p, |set| {
        out.push(Blade::from_mask(set.iter().fold(0, |acc, &b| acc | 1 << b)));
    });
    out.sort();
    out
}

/// All `2^{2g}` blades in ascending mask order.
pub fn all_blades(g: usize) -> impl Iterator<Item = Blade> {
    (0..=full_mask(g)).map(Blade::from_mask)
}

/// Matrix of a linear map `Λ^p → Λ^q` in the ascending-mask blade bases.
pub fn grade_operator_matrix(
    g: usize,
    p: usize,
    q: usize,
    ring: Ring,
    f: impl Fn(Blade) -> Multivector<Integer>,
) -> Result<SparseMatrix> {
    let src = blades_of_grade(g, p);
    let tgt = blades_of_grade(g, q);
    let pos: HashMap<Blade, usize> = tgt.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut m = SparseMatrix::zero(tgt.len(), src.len(), ring);
    for (c, b) in src.iter().enumerate() {
        for (t, v) in f(*b).terms() {
            let r = *pos
                .get(t)
                .ok_or_else(|| HfError::Domain(format!("{t:?} is not of grade {q}")))?;
            m.add_entry(r, c, Rational::from_integer(v.clone()))?;
        }
    }
    Ok(m)
}

pub fn grade_dim(g: usize, p: usize) -> usize {
    if p > 2 * g {
        0
    } else {
        binomial(2 * g, p)
    }
}

/// Visit each `k`-subset of `0..n` (ascending lexicographic order).
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut set: Vec<usize> = (0..k).collect();
    loop {
        f(&set);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if set[i] < n - k + i {
                break;
            }
        }
        set[i] += 1;
        for t in i + 1..k {
            set[t] = set[t - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Mv = Multivector<Integer>;

    fn e(g: usize, k: usize) -> Mv {
        Mv::basis_vector(g, k)
    }

    fn int(v: i64) -> Integer {
        Integer::from(v)
    }

    #[test]
    fn wedge_examples() {
        let g = 2;
        assert_eq!(
            e(g, 1).wedge(&e(g, 2)).unwrap(),
            Mv::blade(g, Blade::pair(1))
        );
        assert!(e(g, 1).wedge(&e(g, 1)).unwrap().is_zero());
        let lhs = e(g, 1).wedge(&e(g, 3)).unwrap().wedge(&e(g, 2)).unwrap();
        let e123 = Blade::from_indices(&[1, 2, 3]).unwrap().1;
        assert_eq!(lhs, Mv::signed_blade(g, e123, int(-1)));
    }

    #[test]
    fn contraction_examples() {
        for g in 1..=5 {
            let w = omega::<Integer>(g);
            assert_eq!(w.contract(&w).unwrap(), Mv::scalar(g, int(-(g as i64))));
            for k in 1..=2 * g {
                assert_eq!(e(g, k).contract(&w).unwrap(), e(g, k));
                assert_eq!(interior(k, &w).unwrap(), e(g, k));
                assert!(interior(k, &Mv::one(g)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn pair_contracts_eta() {
        for g in 2..=5 {
            for k in 0..=g {
                for i in 1..=g {
                    let z = Mv::blade(g, Blade::pair(i));
                    let lhs = z.contract(&eta(k, g)).unwrap();
                    let mut rhs = Mv::zero(g);
                    if k >= 1 {
                        rhs = rhs - eta(k - 1, g);
                    }
                    if k >= 2 {
                        rhs = rhs + z.wedge(&eta(k - 2, g)).unwrap();
                    }
                    assert_eq!(lhs, rhs, "g={g} k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta::<Integer>(0, 3), Mv::one(3));
        let w: Mv = (1..=3)
            .map(|j| Mv::blade(3, Blade::pair(j)))
            .fold(Mv::zero(3), |a, b| a + b);
        assert_eq!(eta::<Integer>(1, 3), w);
        assert_eq!(eta::<Integer>(2, 2), Mv::blade(2, Blade::top(2)));
        assert!(eta::<Integer>(4, 3).is_zero());
        for g in 1..=6 {
            for k in 0..=g {
                assert_eq!(eta::<Integer>(k, g).len(), binomial(g, k));
            }
        }
    }

    #[test]
    fn star_examples() {
        for g in 1..=4 {
            assert_eq!(Mv::one(g).star(), eta(g, g));
            for n in 0..=g {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                assert_eq!(
                    eta::<Integer>(n, g).contract(&eta(g, g)).unwrap(),
                    eta::<Integer>(g - n, g).scale(&int(sign))
                );
            }
        }
        // x_1 z_2 in genus 3 goes to -x_1 z_3.
        let x1z2 = Blade::from_mask(0b00_11_01);
        let x1z3 = Blade::from_mask(0b11_00_01);
        assert_eq!(
            Mv::blade(3, x1z2).star(),
            Mv::signed_blade(3, x1z3, int(-1))
        );
    }

    #[test]
    fn subsets_enumerated() {
        let mut count = 0;
        for_each_subset(6, 3, |_| count += 1);
        assert_eq!(count, 20);
        let mut empty = 0;
        for_each_subset(4, 0, |s| {
            assert!(s.is_empty());
            empty += 1
        });
        assert_eq!(empty, 1);
        assert_eq!(blades_of_grade(2, 2).len(), 6);
        assert_eq!(blades_of_grade(3, 7).len(), 0);
    }

    #[test]
    fn json_round_trip_and_genus_errors() {
        let a = eta::<Integer>(2, 3) - e(3, 4).scale(&int(7));
        let back = Mv::from_json(3, &a.to_json()).unwrap();
        assert_eq!(a, back);
        let unsorted = serde_json::json!([{"blade": [2, 1], "coeff": "3"}]);
        assert_eq!(
            Mv::from_json(1, &unsorted).unwrap(),
            Mv::signed_blade(1, Blade::top(1), int(-3))
        );
        assert!(matches!(
            e(2, 1).wedge(&e(3, 1)),
            Err(HfError::GenusMismatch(2, 3))
        ));
        assert!(e(2, 1).contract(&e(3, 1)).is_err());
        assert!(check_genus(11, DEFAULT_GENUS_CAP).is_err());
        assert!(check_genus(0, DEFAULT_GENUS_CAP).is_err());
    }
}
