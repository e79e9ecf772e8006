//! The bigraded model: `Λ* H^1 ⊗ Z[U, U^{-1}]` laid out on the `(i, j)`
//! lattice, the flip map `J^∞`, and the slice maps built from it.
//!
//! A generator `ξ ⊗ U^{-i}` with `ξ` of grade `p` sits at lattice point
//! `(i, j)` with `j = p − g + i` and has degree `i + j = 2i + p − g`.  All
//! maps preserve degree, so everything is computed one finite degree slice at
//! a time.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{HfError, Result};
use crate::exterior::{blades_of_grade, Blade, Multivector};
use crate::linalg::{SparseMatrix, SparseVector};
use crate::ring::{Coeff, Integer, Rational, Ring};

/// Lattice region cut out by a condition on `(i, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    FullPlane,
    /// `i ≥ 0`.
    IGeqZero,
    /// `j ≥ s`.
    JGeqS(i64),
    /// `i ≥ 0 and j ≥ s`.
    Corner(i64),
    /// `i ≥ 0 or j ≥ s`.
    Hook(i64),
    /// `i = 0`.
    RowIEqZero,
    /// `min(i, j − s) = 0`.
    MinZero(i64),
    /// `i ≥ 0 and j < s`, the part of `B⁺` outside `C⁺_s`.
    Triangle(i64),
}

impl Region {
    pub fn contains(self, i: i64, j: i64) -> bool {
        match self {
            Region::FullPlane => true,
            Region::IGeqZero => i >= 0,
            Region::JGeqS(s) => j >= s,
            Region::Corner(s) => i >= 0 && j >= s,
            Region::Hook(s) => i >= 0 || j >= s,
            Region::RowIEqZero => i == 0,
            Region::MinZero(s) => i.min(j - s) == 0,
            Region::Triangle(s) => i >= 0 && j < s,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::FullPlane => write!(f, "all"),
            Region::IGeqZero => write!(f, "i>=0"),
            Region::JGeqS(s) => write!(f, "j>={s}"),
            Region::Corner(s) => write!(f, "i>=0,j>={s}"),
            Region::Hook(s) => write!(f, "i>=0|j>={s}"),
            Region::RowIEqZero => write!(f, "i=0"),
            Region::MinZero(s) => write!(f, "min(i,j-{s})=0"),
            Region::Triangle(s) => write!(f, "i>=0,j<{s}"),
        }
    }
}

#[inline]
pub fn j_coord(g: usize, i: i64, grade: usize) -> i64 {
    grade as i64 - g as i64 + i
}

#[inline]
pub fn lattice_degree(g: usize, i: i64, grade: usize) -> i64 {
    2 * i + grade as i64 - g as i64
}

/// The flip sign `ε = (−1)^{g−1}`.
pub fn flip_sign(g: usize) -> i64 {
    if (g - 1) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Finite sum of `ξ ⊗ U^{-i}`, keyed by `(i, blade)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedElement<C = Integer> {
    genus: usize,
    terms: BTreeMap<(i64, Blade), C>,
}

impl<C: Coeff> GradedElement<C> {
    pub fn zero(genus: usize) -> Self {
        GradedElement {
            genus,
            terms: BTreeMap::new(),
        }
    }

    /// `x ⊗ U^{-i}`.
    pub fn at(i: i64, x: &Multivector<C>) -> Self {
        let mut e = Self::zero(x.genus());
        for (b, c) in x.terms() {
            e.add_term(i, *b, c.clone());
        }
        e
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn add_term(&mut self, i: i64, b: Blade, c: C) {
        if c.is_zero() {
            return;
        }
        let key = (i, b);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        for ((i, b), v) in &other.terms {
            self.add_term(*i, *b, v.clone() * c.clone());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Blade, &C)> {
        self.terms.iter().map(|((i, b), c)| (*i, *b, c))
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

    pub fn coeff(&self, i: i64, b: Blade) -> C {
        self.terms.get(&(i, b)).cloned().unwrap_or_else(C::zero)
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.terms
            .keys()
            .map(|(i, b)| lattice_degree(self.genus, *i, b.grade()))
            .collect()
    }

    /// The common degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let ds = self.degrees();
        (ds.len() == 1).then(|| *ds.iter().next().unwrap())
    }

    pub fn degree_part(&self, d: i64) -> Self {
        self.filter(|i, b| lattice_degree(self.genus, i, b.grade()) == d)
    }

    /// Keep terms lying in `region`.
    pub fn restrict(&self, region: Region) -> Self {
        self.filter(|i, b| region.contains(i, j_coord(self.genus, i, b.grade())))
    }

    fn filter(&self, keep: impl Fn(i64, Blade) -> bool) -> Self {
        GradedElement {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .filter(|((i, b), _)| keep(*i, *b))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// The multivector sitting at lattice column `i`.
    pub fn part_at(&self, i: i64) -> Multivector<C> {
        let mut m = Multivector::zero(self.genus);
        for ((ii, b), c) in &self.terms {
            if *ii == i {
                m.add_term(*b, c.clone());
            }
        }
        m
    }

    /// Multiply by `U^n`: lattice point `(i, j)` moves to `(i − n, j − n)`.
    pub fn times_u(&self, n: i64) -> Self {
        GradedElement {
            genus: self.genus,
            terms: self
                .terms
                .iter()
                .map(|((i, b), c)| ((i - n, *b), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut e = Self::zero(self.genus);
        e.add_scaled(self, c);
        e
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> GradedElement<D> {
        let mut e = GradedElement::zero(self.genus);
        for ((i, b), c) in &self.terms {
            e.add_term(*i, *b, f(c));
        }
        e
    }
}

impl<C: Coeff> std::ops::Add for GradedElement<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.genus, rhs.genus, "genus mismatch");
        self.add_scaled(&rhs, &C::one());
        self
    }
}

impl<C: Coeff> std::ops::Sub for GradedElement<C> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        assert_eq!(self.genus, rhs.genus, "genus mismatch");
        self.add_scaled(&rhs, &-C::one());
        self
    }
}

impl<C: Coeff> fmt::Debug for GradedElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, b), c)| format!("({c}) {b}⊗U^{}", -i))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Terms of `η_n ∠ y` for a single blade `y`: each subset of `n` full pairs
/// of `y` is contracted away.
fn eta_contract_blade(n: usize, y: Blade, g: usize) -> Vec<(i64, Blade)> {
    let pairs: Vec<usize> = (1..=g)
        .filter(|&j| y.mask() & Blade::pair(j).mask() == Blade::pair(j).mask())
        .collect();
    let mut out = Vec::new();
    if n > pairs.len() {
        return out;
    }
    crate::exterior::for_each_subset(pairs.len(), n, |t| {
        let z = t
            .iter()
            .fold(0u32, |acc, &k| acc | Blade::pair(pairs[k]).mask());
        if let Some(term) = Blade::from_mask(z).contract(y) {
            out.push(term);
        }
    });
    out
}

/// `J^∞(ξ ⊗ U^{-i}) = ε(−1)^p e^{2ωU}∠⋆̃ξ ⊗ U^{-(p−g+i)}` with
/// `ε = (−1)^{g−1}`; the term `2^n η_n U^n` of `e^{2ωU}` contracts the form
/// and moves it to lattice column `p − g + i + n`.
pub fn j_infinity<C: Coeff>(x: &GradedElement<C>) -> GradedElement<C> {
    let g = x.genus();
    let top = Blade::top(g);
    let eps = flip_sign(g);
    let mut out = GradedElement::zero(g);
    for (i, b, c) in x.terms() {
        let p = b.grade();
        let (star_sign, y) = b.contract(top).expect("blades contract into the top blade");
        let base = eps * star_sign * if p % 2 == 0 { 1 } else { -1 };
        let i0 = j_coord(g, i, p);
        for n in 0..=y.grade() / 2 {
            let weight = C::from_i64(base << n);
            for (s, blade) in eta_contract_blade(n, y, g) {
                let v = c.clone() * weight.clone();
                out.add_term(i0 + n as i64, blade, if s < 0 { -v } else { v });
            }
        }
    }
    out
}

/// The `H_1` action of the basis class with dual `e_k`:
/// `γ.(ξ ⊗ U^{-i}) = (e_k∠ξ) ⊗ U^{-i} + (e_k∧ξ) ⊗ U^{-i+1}`.
pub fn h1_standard<C: Coeff>(k: usize, x: &GradedElement<C>) -> Result<GradedElement<C>> {
    let g = x.genus();
    if k == 0 || k > 2 * g {
        return Err(HfError::Domain(format!("e_{k} outside genus {g}")));
    }
    let e = Blade::basis(k);
    let mut out = GradedElement::zero(g);
    for (i, b, c) in x.terms() {
        if let Some((s, r)) = e.contract(b) {
            out.add_term(i, r, if s < 0 { -c.clone() } else { c.clone() });
        }
        if let Some((s, r)) = e.wedge(b) {
            out.add_term(i - 1, r, if s < 0 { -c.clone() } else { c.clone() });
        }
    }
    Ok(out)
}

/// `π_{C_s} ∘ U^{-s} ∘ J^∞`.
pub fn apply_h<C: Coeff>(s: i64, x: &GradedElement<C>) -> GradedElement<C> {
    j_infinity(x).times_u(-s).restrict(Region::Corner(s))
}

/// `v + h` from `B⁺` to `C⁺_s`.
pub fn apply_f<C: Coeff>(s: i64, x: &GradedElement<C>) -> GradedElement<C> {
    x.restrict(Region::Corner(s)) + apply_h(s, x)
}

/// One lattice point of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub i: i64,
    pub j: i64,
    pub grade: usize,
}

/// Enumerated basis of the part of a region in a set of degrees: degrees
/// ascending, then cells by `i` ascending, then blades by mask ascending.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    genus: usize,
    region: Region,
    degrees: Vec<i64>,
    cells: Vec<Cell>,
    elements: Vec<(i64, Blade)>,
    index: HashMap<(i64, Blade), usize>,
}

impl SliceBasis {
    pub fn new(g: usize, region: Region, d: i64) -> Self {
        Self::spanning(g, region, [d])
    }

    pub fn spanning(g: usize, region: Region, degrees: impl IntoIterator<Item = i64>) -> Self {
        let degrees: Vec<i64> = degrees
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let gi = g as i64;
        let mut cells = Vec::new();
        let mut elements = Vec::new();
        for &d in &degrees {
            let lo = (d - gi).div_euclid(2) - 1;
            let hi = (d + gi).div_euclid(2) + 1;
            for i in lo..=hi {
                let p = gi + d - 2 * i;
                if p < 0 || p > 2 * gi {
                    continue;
                }
                let j = d - i;
                if !region.contains(i, j) {
                    continue;
                }
                let p = p as usize;
                cells.push(Cell { i, j, grade: p });
                elements.extend(blades_of_grade(g, p).into_iter().map(|b| (i, b)));
            }
        }
        let index = elements.iter().enumerate().map(|(n, e)| (*e, n)).collect();
        SliceBasis {
            genus: g,
            region,
            degrees,
            cells,
            elements,
            index,
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn elements(&self) -> &[(i64, Blade)] {
        &self.elements
    }

    pub fn position(&self, i: i64, b: Blade) -> Option<usize> {
        self.index.get(&(i, b)).copied()
    }

    pub fn element(&self, n: usize) -> (i64, Blade) {
        self.elements[n]
    }

    pub fn degree_of(&self, n: usize) -> i64 {
        let (i, b) = self.elements[n];
        lattice_degree(self.genus, i, b.grade())
    }

    pub fn basis_element<C: Coeff>(&self, n: usize) -> GradedElement<C> {
        let (i, b) = self.elements[n];
        let mut e = GradedElement::zero(self.genus);
        e.add_term(i, b, C::one());
        e
    }

    /// Coordinates of `x`; every term must lie in the slice.
    pub fn coordinates<C: Coeff>(&self, x: &GradedElement<C>) -> Result<SparseVector> {
        let mut v = BTreeMap::new();
        for (i, b, c) in x.terms() {
            let n = self
                .position(i, b)
                .ok_or_else(|| HfError::Domain(format!("term {b:?}⊗U^{} outside the slice", -i)))?;
            let c = c
                .as_integer()
                .map(Rational::from_integer)
                .or_else(|| c.to_string().parse().ok())
                .ok_or_else(|| HfError::Domain("coefficient not representable".into()))?;
            v.insert(n, c);
        }
        Ok(v)
    }

    /// Coordinates of `x` after dropping the terms outside the slice.
    pub fn project<C: Coeff>(&self, x: &GradedElement<C>) -> SparseVector {
        let mut v = BTreeMap::new();
        for (i, b, c) in x.terms() {
            if let Some(n) = self.position(i, b) {
                let c = c
                    .as_integer()
                    .map(Rational::from_integer)
                    .unwrap_or_else(|| c.to_string().parse().expect("rational coefficient"));
                v.insert(n, c);
            }
        }
        v
    }

    pub fn element_of(&self, v: &SparseVector) -> GradedElement<Rational> {
        let mut e = GradedElement::zero(self.genus);
        for (n, c) in v {
            let (i, b) = self.elements[*n];
            e.add_term(i, b, c.clone());
        }
        e
    }

    /// Describes the ordering, for report metadata.
    pub fn describe(&self) -> String {
        let cells: Vec<String> = self
            .cells
            .iter()
            .map(|c| format!("L{}U{}", c.grade, -c.i))
            .collect();
        format!(
            "region {} degrees {:?}: {}",
            self.region,
            self.degrees,
            cells.join(" ")
        )
    }
}

/// The maps of the surgery model, each with its spin^c shift `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceOp {
    /// `1 + J^∞` on the full plane.
    OnePlusJ,
    /// Projection `B⁺ → C⁺_s`.
    V(i64),
    /// `π ∘ U^{-s} ∘ J^∞ : B⁺ → C⁺_s`.
    H(i64),
    /// `V + H`.
    F(i64),
    /// The hat version `C{i=0} → C{min(i, j−s) = 0}`.
    FHat(i64),
}

impl SliceOp {
    /// Parse `1+J`, `v`, `h`, `F` or `F_hat`, attaching `s`.
    pub fn parse(name: &str, s: i64) -> Result<SliceOp> {
        match name {
            "1+J" | "identity+J" | "one_plus_j" | "J" => Ok(SliceOp::OnePlusJ),
            "v" | "V" => Ok(SliceOp::V(s)),
            "h" | "H" => Ok(SliceOp::H(s)),
            "F" | "f" => Ok(SliceOp::F(s)),
            "F_hat" | "Fhat" | "hat" => Ok(SliceOp::FHat(s)),
            other => Err(HfError::Domain(format!("unknown slice op '{other}'"))),
        }
    }
}

impl FromStr for SliceOp {
    type Err = HfError;
    fn from_str(s: &str) -> Result<SliceOp> {
        SliceOp::parse(s, 0)
    }
}

impl fmt::Display for SliceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceOp::OnePlusJ => write!(f, "1+J"),
            SliceOp::V(s) => write!(f, "v(s={s})"),
            SliceOp::H(s) => write!(f, "h(s={s})"),
            SliceOp::F(s) => write!(f, "F(s={s})"),
            SliceOp::FHat(s) => write!(f, "F_hat(s={s})"),
        }
    }
}

/// A slice map with its bases; columns follow `source`, rows `target`.
#[derive(Clone, Debug)]
pub struct SliceMap {
    pub op: SliceOp,
    pub degree: i64,
    pub source: SliceBasis,
    pub target: SliceBasis,
    pub matrix: SparseMatrix,
}

/// Source and target bases of `op` at source degree `d`.  Maps with `s ≠ 0`
/// shift degree by `2s` through `U^{-s}`; their targets span both degrees.
pub fn slice_bases(g: usize, op: SliceOp, d: i64) -> (SliceBasis, SliceBasis) {
    match op {
        SliceOp::OnePlusJ => (
            SliceBasis::new(g, Region::FullPlane, d),
            SliceBasis::new(g, Region::FullPlane, d),
        ),
        SliceOp::V(s) => (
            SliceBasis::new(g, Region::IGeqZero, d),
            SliceBasis::new(g, Region::Corner(s), d),
        ),
        SliceOp::H(s) => (
            SliceBasis::new(g, Region::IGeqZero, d),
            SliceBasis::new(g, Region::Corner(s), d + 2 * s),
        ),
        SliceOp::F(s) => (
            SliceBasis::new(g, Region::IGeqZero, d),
            SliceBasis::spanning(g, Region::Corner(s), [d, d + 2 * s]),
        ),
        SliceOp::FHat(s) => (
            SliceBasis::new(g, Region::RowIEqZero, d),
            SliceBasis::spanning(g, Region::MinZero(s), [d, d + 2 * s]),
        ),
    }
}

/// Image of one generator under `op`, before projection to the target.
pub fn apply_op<C: Coeff>(op: SliceOp, x: &GradedElement<C>) -> GradedElement<C> {
    match op {
        SliceOp::OnePlusJ => x.clone() + j_infinity(x),
        SliceOp::V(s) => x.restrict(Region::Corner(s)),
        SliceOp::H(s) => apply_h(s, x),
        SliceOp::F(s) => apply_f(s, x),
        SliceOp::FHat(s) => {
            let r = Region::MinZero(s);
            x.restrict(r) + j_infinity(x).times_u(-s).restrict(r)
        }
    }
}

pub fn slice_map(g: usize, op: SliceOp, d: i64, ring: Ring) -> Result<SliceMap> {
    let (source, target) = slice_bases(g, op, d);
    let matrix = map_matrix(&source, &target, ring, |x| apply_op(op, x))?;
    Ok(SliceMap {
        op,
        degree: d,
        source,
        target,
        matrix,
    })
}

/// Matrix of `f` from `source` to `target`, projecting images onto the
/// target slice.
pub fn map_matrix(
    source: &SliceBasis,
    target: &SliceBasis,
    ring: Ring,
    f: impl Fn(&GradedElement<Integer>) -> GradedElement<Integer>,
) -> Result<SparseMatrix> {
    let mut m = SparseMatrix::zero(target.dim(), 0, ring);
    for n in 0..source.dim() {
        let image = f(&source.basis_element(n));
        m.push_column(target.project(&image))?;
    }
    Ok(m)
}

/// `U^n` from `source` to `target` (terms leaving the target are dropped).
pub fn u_power_matrix(
    source: &SliceBasis,
    target: &SliceBasis,
    n: i64,
    ring: Ring,
) -> Result<SparseMatrix> {
    map_matrix(source, target, ring, |x| x.times_u(n))
}

/// `Σ_k t^k η_k ∠ (·)`, the contraction by `e^{tω}`, on a multivector.
pub fn exp_contract<C: Coeff>(t: i64, x: &Multivector<C>) -> Multivector<C> {
    let g = x.genus();
    crate::exterior::exp_omega::<C>(g, t)
        .contract(x)
        .expect("same genus")
}

/// Multiplication by `e^{tωU}` on a graded element: the term `t^k η_k U^k`
/// wedges and moves `k` columns left.
pub fn exp_omega_u_wedge<C: Coeff>(t: i64, x: &GradedElement<C>) -> GradedElement<C> {
    let g = x.genus();
    let mut out = GradedElement::zero(g);
    let mut power = C::one();
    for k in 0..=g {
        let eta = crate::exterior::eta::<C>(k, g);
        let mut by_col: BTreeMap<i64, Multivector<C>> = BTreeMap::new();
        for (i, b, c) in x.terms() {
            by_col
                .entry(i)
                .or_insert_with(|| Multivector::zero(g))
                .add_term(b, c.clone());
        }
        for (i, m) in by_col {
            let w = eta.wedge(&m).expect("same genus").scale(&power);
            for (b, c) in w.terms() {
                out.add_term(i - k as i64, *b, c.clone());
            }
        }
        power = power * C::from_i64(t);
    }
    out
}

/// Contraction by `e^{tωU}`: the term `t^k η_k U^k` contracts and moves `k`
/// columns right.
pub fn exp_omega_u_contract<C: Coeff>(t: i64, x: &GradedElement<C>) -> GradedElement<C> {
    let g = x.genus();
    let mut out = GradedElement::zero(g);
    let mut power = C::one();
    for k in 0..=g {
        let eta = crate::exterior::eta::<C>(k, g);
        for (i, b, c) in x.terms() {
            let w = eta
                .contract(&Multivector::signed_blade(g, b, c.clone()))
                .expect("same genus");
            for (bb, cc) in w.terms() {
                out.add_term(i + k as i64, *bb, cc.clone() * power.clone());
            }
        }
        power = power * C::from_i64(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    type Ge = GradedElement<Integer>;

    #[test]
    fn slice_examples() {
        let b = SliceBasis::new(3, Region::IGeqZero, -3);
        assert_eq!(b.dim(), 1);
        assert_eq!(
            b.cells(),
            &[Cell {
                i: 0,
                j: -3,
                grade: 0
            }]
        );
        let c = SliceBasis::new(2, Region::Corner(0), 1);
        assert_eq!(
            c.cells().iter().map(|c| c.grade).collect::<Vec<_>>(),
            vec![3, 1]
        );
        assert_eq!(c.dim(), 8);
        let b0 = SliceBasis::new(3, Region::IGeqZero, 0);
        assert_eq!(
            b0.cells()
                .iter()
                .map(|c| (c.i, c.grade))
                .collect::<Vec<_>>(),
            vec![(0, 3), (1, 1)]
        );
        assert_eq!(b0.dim(), 26);
    }

    #[test]
    fn j_of_top_blade() {
        let g = 3;
        let x = Ge::at(0, &Multivector::blade(g, Blade::top(g)));
        let y = j_infinity(&x);
        let mut expected = Ge::zero(g);
        expected.add_term(3, Blade::UNIT, Integer::from(-1));
        assert_eq!(y, expected);
    }

    #[test]
    fn j_support_from_grade_one() {
        let g = 3;
        for k in 1..=6 {
            let x = Ge::at(5, &Multivector::basis_vector(g, k));
            let y = j_infinity(&x);
            let cols: BTreeSet<(i64, usize)> = y.terms().map(|(i, b, _)| (i, b.grade())).collect();
            assert_eq!(cols, BTreeSet::from([(3, 5), (4, 3), (5, 1)]));
        }
    }

    #[test]
    fn hat_map_matches_closed_form() {
        let g = 3;
        for jrow in -2i64..=3 {
            let p = (g as i64 + jrow) as usize;
            let m = slice_map(g, SliceOp::FHat(0), jrow, Ring::Integers).unwrap();
            for (n, &(i, b)) in m.source.elements().iter().enumerate() {
                assert_eq!((i, b.grade()), (0, p));
                let xi = Multivector::<Integer>::blade(g, b);
                let st = xi.star();
                let mut expected = Ge::zero(g);
                if jrow >= 1 {
                    expected.add_scaled(&Ge::at(0, &xi), &Integer::one());
                    let sign = if (jrow + 1) % 2 == 0 { 1 } else { -1 };
                    expected.add_scaled(&Ge::at(jrow, &st), &Integer::from(sign));
                } else if jrow == 0 {
                    expected = Ge::at(0, &(xi.clone() - st.clone()));
                }
                let got = m.target.element_of(&m.matrix.column(n).clone());
                assert_eq!(
                    got,
                    expected.map_coeffs(|c| Rational::from_integer(c.clone())),
                    "{b:?}"
                );
            }
        }
    }
}
