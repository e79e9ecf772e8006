//! The torsion spin^c structure `k = 0`: `ĤF`, `HF⁺`, its reduced part,
//! `HF^∞`, and the `U`-action on the reduced part.
//!
//! In degree `d + ½` the mapping cone gives `Ker F_d ⊕ Coker F_{d+1}`; the
//! extension splits over `Z` because the kernel is a subgroup of a free group.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::table::{Flavor, FloerTable, HalfDegree, SpinC, Tower};
use crate::cfk::{slice_map, SliceBasis, SliceMap, SliceOp};
use crate::error::{HfError, Result};
use crate::exterior::{check_genus, grade_operator_matrix, Multivector, DEFAULT_GENUS_CAP};
use crate::linalg::{
    cokernel, kernel_basis, kernel_lattice, kernel_rank, rank, GroupPresentation, SparseMatrix,
    SparseVector,
};
use crate::ring::{Rational, Ring};

/// Inclusive range of integer degrees `d`; torsion tables report `d + ½`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeWindow {
    pub lo: i64,
    pub hi: i64,
}

impl DegreeWindow {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(HfError::Domain(format!("empty degree window {lo}..{hi}")));
        }
        Ok(DegreeWindow { lo, hi })
    }

    /// `[−g−2, g+2]`.
    pub fn default_for(g: usize) -> Self {
        let g = g as i64;
        DegreeWindow {
            lo: -g - 2,
            hi: g + 2,
        }
    }

    pub fn iter(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

pub(crate) const ORDERING: &str = "degree, then i ascending, then blade mask ascending";

fn maps(g: usize, op: SliceOp, ring: Ring, lo: i64, hi: i64) -> Result<BTreeMap<i64, SliceMap>> {
    (lo..=hi)
        .into_par_iter()
        .map(|d| slice_map(g, op, d, ring).map(|m| (d, m)))
        .collect()
}

/// `Ker f ⊕ Coker next`.
fn cone_group(f: &SparseMatrix, next: &SparseMatrix) -> Result<GroupPresentation> {
    Ok(GroupPresentation::free(kernel_rank(f)?).direct_sum(&cokernel(next)?))
}

fn cone_table(
    g: usize,
    ring: Ring,
    flavor: Flavor,
    op: SliceOp,
    window: DegreeWindow,
    tag: &str,
) -> Result<FloerTable> {
    let ms = maps(g, op, ring, window.lo, window.hi + 1)?;
    let mut t = FloerTable::new(g, SpinC::new(0), ring, flavor);
    let groups: Vec<(i64, GroupPresentation)> = window
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| cone_group(&ms[&d].matrix, &ms[&(d + 1)].matrix).map(|gp| (d, gp)))
        .collect::<Result<_>>()?;
    for (d, gp) in groups {
        t.entries.insert(HalfDegree::plus_half(d), gp);
    }
    for (d, m) in &ms {
        t.metadata.insert(format!("{tag}[{d}]"), m.matrix.sha256());
    }
    t.metadata.insert("ordering".into(), ORDERING.into());
    Ok(t)
}

/// `ĤF(Σ_g × S^1, 𝔰_0)` from the hat maps `C{i=0} → C{min(i,j) = 0}`.
pub fn hf_hat(g: usize, ring: Ring) -> Result<FloerTable> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let gi = g as i64;
    cone_table(
        g,
        ring,
        Flavor::Hat,
        SliceOp::FHat(0),
        DegreeWindow::new(-gi - 2, gi + 1)?,
        "F_hat",
    )
}

/// Closed-form rank of `ĤF` in degree `d + ½`.
pub fn hat_rank_closed_form(g: usize, d: i64) -> usize {
    let gi = g as i64;
    let twice = 2 * d + 1;
    let abs = twice.abs();
    if abs == 1 {
        binom(2 * g, g - 1) + (1 << (g - 1)) + binom(2 * g, g) / 2
    } else if abs < 2 * gi {
        // Λ^{g − |i| − ½}
        binom(2 * g, (gi - (abs + 1) / 2) as usize)
    } else {
        0
    }
}

pub(crate) fn binom(n: usize, k: usize) -> usize {
    if k > n {
        0
    } else {
        num_integer::binomial(n, k)
    }
}

/// `HF⁺(Σ_g × S^1, 𝔰_0)` in degrees `d + ½` for `d` in the window, with
/// the towers.
pub fn hf_plus_torsion(g: usize, ring: Ring, window: DegreeWindow) -> Result<FloerTable> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let mut t = cone_table(g, ring, Flavor::Plus, SliceOp::F(0), window, "F")?;
    t.towers = torsion_towers(g)?;
    Ok(t)
}

/// Kernel data of `F_d` used for the reduced part.
struct Kernels {
    ring: Ring,
    bases: BTreeMap<i64, SliceBasis>,
    /// A basis of `Ker F_d` (a `Z`-basis over `Z`).
    kernels: BTreeMap<i64, Vec<SparseVector>>,
}

/// The stable degree used for `U^N(Ker F_D)`: the least `D ≥ max(d, g)`
/// with `D ≡ d (mod 2)`.
fn stable_degree(g: usize, d: i64) -> i64 {
    let floor = d.max(g as i64);
    floor + (floor - d).rem_euclid(2)
}

fn kernels(g: usize, ring: Ring, degrees: impl IntoIterator<Item = i64>) -> Result<Kernels> {
    let ds: Vec<i64> = degrees.into_iter().collect();
    let data: Vec<(i64, SliceBasis, Vec<SparseVector>)> = ds
        .into_par_iter()
        .map(|d| {
            let m = slice_map(g, SliceOp::F(0), d, ring)?;
            let ker = match ring {
                Ring::Integers => kernel_lattice(&m.matrix)?
                    .into_iter()
                    .map(|v| {
                        v.into_iter()
                            .map(|(r, c)| (r, Rational::from_integer(c)))
                            .collect()
                    })
                    .collect(),
                _ => kernel_basis(&m.matrix)?,
            };
            Ok((d, m.source, ker))
        })
        .collect::<Result<_>>()?;
    let mut k = Kernels {
        ring,
        bases: BTreeMap::new(),
        kernels: BTreeMap::new(),
    };
    for (d, b, v) in data {
        k.bases.insert(d, b);
        k.kernels.insert(d, v);
    }
    Ok(k)
}

impl Kernels {
    /// `U^n` from the `B⁺` slice at `from` to the one at `from − 2n`.
    fn u_power(&self, from: i64, n: i64, v: &SparseVector) -> SparseVector {
        let src = &self.bases[&from];
        let tgt = &self.bases[&(from - 2 * n)];
        v.iter()
            .filter_map(|(k, c)| {
                let (i, b) = src.element(*k);
                tgt.position(i - n, b).map(|p| (p, c.clone()))
            })
            .collect()
    }

    /// `U^N(Ker F_D)` inside the slice at `d`.
    fn stable_image(&self, g: usize, d: i64) -> Vec<SparseVector> {
        let big = stable_degree(g, d);
        let n = (big - d) / 2;
        self.kernels[&big]
            .iter()
            .map(|v| self.u_power(big, n, v))
            .collect()
    }

    fn dim(&self, d: i64) -> usize {
        self.bases[&d].dim()
    }
}

fn column_matrix(rows: usize, ring: Ring, vs: &[SparseVector]) -> Result<SparseMatrix> {
    let mut m = SparseMatrix::zero(rows, 0, ring);
    for v in vs {
        m.push_column(v.clone())?;
    }
    Ok(m)
}

fn rank_of(rows: usize, ring: Ring, vs: &[SparseVector]) -> Result<usize> {
    rank(&column_matrix(rows, ring, vs)?)
}

/// `HF⁺_red` in degree `d + ½` as `Ker F_d / U^N(Ker F_D)`.
fn reduced_group(k: &Kernels, g: usize, d: i64) -> Result<GroupPresentation> {
    let image = k.stable_image(g, d);
    let rows = k.dim(d);
    let m = column_matrix(rows, k.ring, &image)?;
    let free = k.kernels[&d].len() - rank(&m)?;
    if k.ring != Ring::Integers {
        return Ok(GroupPresentation::free(free));
    }
    // Ker F_d is saturated in B_d, so the torsion of B_d / image is the
    // torsion of Ker F_d / image.
    let coker = cokernel(&m)?;
    Ok(GroupPresentation::new(
        free,
        coker.invariant_factors().iter().cloned(),
    ))
}

fn needed_degrees(g: usize, window: DegreeWindow) -> Vec<i64> {
    let mut ds: Vec<i64> = window.iter().collect();
    for d in window.iter() {
        ds.push(stable_degree(g, d));
    }
    ds.sort_unstable();
    ds.dedup();
    ds
}

/// `HF⁺_red(Σ_g × S^1, 𝔰_0)`: the quotient of `HF⁺` by the image of `U^N`
/// for large `N`.
pub fn hf_plus_reduced(g: usize, ring: Ring, window: DegreeWindow) -> Result<FloerTable> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let k = kernels(g, ring, needed_degrees(g, window))?;
    let mut t = FloerTable::new(g, SpinC::new(0), ring, Flavor::PlusRed);
    let groups: Vec<(i64, GroupPresentation)> = window
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|d| reduced_group(&k, g, d).map(|gp| (d, gp)))
        .collect::<Result<_>>()?;
    for (d, gp) in groups {
        t.entries.insert(HalfDegree::plus_half(d), gp);
    }
    t.metadata.insert("ordering".into(), ORDERING.into());
    t.metadata.insert(
        "stable_image".into(),
        "U^N Ker F_D, D >= max(d, g), D = d mod 2".into(),
    );
    Ok(t)
}

/// Tower bottoms and multiplicities, from `Q`-ranks: the tower part in
/// degree `m` has rank `rank HF⁺_m − rank HF⁺_red,m`, and `U` maps it onto
/// the tower part two degrees lower with kernel the towers starting at `m`.
pub fn torsion_towers(g: usize) -> Result<Vec<Tower>> {
    let gi = g as i64;
    let window = DegreeWindow::new(-gi - 3, gi + 1)?;
    let plus = cone_table(g, Ring::Rationals, Flavor::Plus, SliceOp::F(0), window, "F")?;
    let red = hf_plus_reduced(g, Ring::Rationals, window)?;
    let tower_rank = |d: i64| {
        let deg = HalfDegree::plus_half(d);
        plus.rank(deg) - red.rank(deg)
    };
    let mut out = Vec::new();
    for d in window.lo + 2..=window.hi {
        let starts = tower_rank(d) as i64 - tower_rank(d - 2) as i64;
        if starts < 0 {
            return Err(HfError::Domain(format!(
                "tower rank drops at degree {d}+1/2"
            )));
        }
        if starts > 0 {
            out.push(Tower {
                start: HalfDegree::plus_half(d),
                rank: starts as usize,
            });
        }
    }
    Ok(out)
}

/// `dim X_n(g, d)`: the degree-`n` part of `⊕_i Λ^i ⊗ U^{0..d−i}` where
/// `Λ^i ⊗ U^{-q}` has degree `i − g + 2q`.
pub fn x_rank(g: usize, d: i64, n: i64) -> usize {
    let mut total = 0;
    for i in 0..=d.min(2 * g as i64) {
        let twice_q = n - i + g as i64;
        if twice_q >= 0 && twice_q % 2 == 0 && twice_q / 2 <= d - i {
            total += binom(2 * g, i as usize);
        }
    }
    total
}

/// Expected `Q`-rank of `HF⁺_red` in degree `d + ½`: `dim X_{d−2}(g, g−3)`.
pub fn reduced_rank_closed_form(g: usize, d: i64) -> usize {
    if g < 3 {
        return 0;
    }
    x_rank(g, g as i64 - 3, d - 2)
}

/// `HF^∞` in degrees `d + ½`.  It is two-periodic; the groups are computed
/// at the stable degrees `d = g, g+1` where `F = 1 + J^∞` and copied across
/// the window by parity.
pub fn hf_infinity(g: usize, ring: Ring, window: DegreeWindow) -> Result<FloerTable> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let gi = g as i64;
    let ms = maps(g, SliceOp::OnePlusJ, ring, gi, gi + 2)?;
    let even = cone_group(&ms[&gi].matrix, &ms[&(gi + 1)].matrix)?;
    let odd = cone_group(&ms[&(gi + 1)].matrix, &ms[&(gi + 2)].matrix)?;
    let mut t = FloerTable::new(g, SpinC::new(0), ring, Flavor::Infinity);
    for d in window.iter() {
        let gp = if (d - gi).rem_euclid(2) == 0 {
            &even
        } else {
            &odd
        };
        t.entries.insert(HalfDegree::plus_half(d), gp.clone());
    }
    for (d, m) in &ms {
        t.metadata.insert(format!("1+J[{d}]"), m.matrix.sha256());
    }
    t.metadata.insert("ordering".into(), ORDERING.into());
    Ok(t)
}

/// `dim HF⁺_m(F_2)` predicted by `ĤF(Z) ⊗ T_0 ⊗ Z/2`: every class of `ĤF`
/// in degree `m'` contributes to degrees `m', m'+2, …`.
pub fn mod2_prediction(hat: &FloerTable, deg: HalfDegree) -> usize {
    hat.entries
        .iter()
        .filter(|(d, _)| d.twice() <= deg.twice() && (deg.twice() - d.twice()) % 4 == 0)
        .map(|(_, gp)| gp.rank_mod(2))
        .sum()
}

/// One step `U : HF⁺_red,d+½ → HF⁺_red,d−3/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UStep {
    pub source: HalfDegree,
    pub target: HalfDegree,
    pub source_dim: usize,
    pub target_dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
}

impl UStep {
    pub fn injective(&self) -> bool {
        self.kernel_dim == 0
    }

    pub fn surjective(&self) -> bool {
        self.image_dim == self.target_dim
    }
}

#[derive(Clone, Debug)]
pub struct UActionReport {
    pub genus: usize,
    pub ring: Ring,
    pub steps: Vec<UStep>,
}

impl UActionReport {
    pub fn step(&self, source: HalfDegree) -> Option<&UStep> {
        self.steps.iter().find(|s| s.source == source)
    }

    /// The nonzero reduced degrees, lowest to highest.
    pub fn support(&self) -> Vec<HalfDegree> {
        self.steps
            .iter()
            .filter(|s| s.source_dim > 0)
            .map(|s| s.source)
            .collect()
    }
}

/// `2^{g−1} − ½C(2g, g) + C(2g, g−2)`.
pub fn u_kernel_formula(g: usize) -> i64 {
    (1i64 << (g - 1)) - binom(2 * g, g) as i64 / 2 + binom(2 * g, g - 2) as i64
}

/// `U` on `HF⁺_red` over a field.  Empty for `g < 3`, where the reduced
/// part vanishes.
pub fn u_action_red(g: usize, ring: Ring) -> Result<UActionReport> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    if ring == Ring::Integers {
        return Err(HfError::Unsupported(
            "U-action report is computed over a field".into(),
        ));
    }
    let mut report = UActionReport {
        genus: g,
        ring,
        steps: Vec::new(),
    };
    if g < 3 {
        return Ok(report);
    }
    let gi = g as i64;
    let window = DegreeWindow::new(-gi - 1, gi + 1)?;
    let k = kernels(g, ring, needed_degrees(g, window))?;
    let images: BTreeMap<i64, Vec<SparseVector>> =
        window.iter().map(|d| (d, k.stable_image(g, d))).collect();
    let red_dim = |d: i64| -> Result<usize> {
        Ok(k.kernels[&d].len() - rank_of(k.dim(d), ring, &images[&d])?)
    };
    for d in window.lo + 2..=window.hi {
        let rows = k.dim(d - 2);
        let below = &images[&(d - 2)];
        let mut pushed: Vec<SparseVector> =
            k.kernels[&d].iter().map(|v| k.u_power(d, 1, v)).collect();
        let r_below = rank_of(rows, ring, below)?;
        pushed.extend(below.iter().cloned());
        let image_dim = rank_of(rows, ring, &pushed)? - r_below;
        let source_dim = red_dim(d)?;
        report.steps.push(UStep {
            source: HalfDegree::plus_half(d),
            target: HalfDegree::plus_half(d - 2),
            source_dim,
            target_dim: red_dim(d - 2)?,
            kernel_dim: source_dim - image_dim,
            image_dim,
        });
    }
    Ok(report)
}

/// `coker(1 + (−1)^g ε ⋆̃)` on `Λ^g` for both signs `ε`.
#[derive(Clone, Debug)]
pub struct SignTest {
    pub genus: usize,
    /// `(ε, cokernel)` for `ε = 1, −1`.
    pub cokernels: Vec<(i64, GroupPresentation)>,
}

impl SignTest {
    /// The signs whose cokernel is torsion-free.
    pub fn torsion_free_signs(&self) -> Vec<i64> {
        self.cokernels
            .iter()
            .filter(|(_, c)| c.is_free())
            .map(|(e, _)| *e)
            .collect()
    }
}

pub fn sign_test(g: usize) -> Result<SignTest> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let mut out = Vec::new();
    for eps in [1i64, -1] {
        let c = if g % 2 == 0 { eps } else { -eps };
        let m = grade_operator_matrix(g, g, g, Ring::Integers, |b| {
            let x = Multivector::blade(g, b);
            x.clone() + x.star().scale(&c.into())
        })?;
        out.push((eps, cokernel(&m)?));
    }
    Ok(SignTest {
        genus: g,
        cokernels: out,
    })
}

/// The self-dual vectors at `C{0,0}`: kernel rank of `1 − ⋆̃` on `Λ^g`.
pub fn self_dual_count(g: usize) -> Result<usize> {
    let m = grade_operator_matrix(g, g, g, Ring::Rationals, |b| {
        let x = Multivector::blade(g, b);
        x.clone() - x.star()
    })?;
    kernel_rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_ranks_small_genus() {
        for g in 1..=3 {
            let t = hf_hat(g, Ring::Integers).unwrap();
            for (deg, gp) in &t.entries {
                let d = deg.floor_of_half().unwrap();
                assert_eq!(
                    gp.free_rank(),
                    hat_rank_closed_form(g, d),
                    "g={g} deg={deg}"
                );
                assert!(gp.is_free());
            }
        }
        assert_eq!(hat_rank_closed_form(3, 0), 29);
        assert_eq!(hat_rank_closed_form(1, -1), 3);
    }

    #[test]
    fn reduced_ranks_g4() {
        let t = hf_plus_reduced(4, Ring::Integers, DegreeWindow::default_for(4)).unwrap();
        for (deg, gp) in &t.entries {
            let d = deg.floor_of_half().unwrap();
            assert_eq!(gp.free_rank(), reduced_rank_closed_form(4, d), "{deg}");
            assert!(gp.is_free());
        }
    }

    #[test]
    fn infinity_small() {
        let t = hf_infinity(1, Ring::Rationals, DegreeWindow::default_for(1)).unwrap();
        assert!(t.entries.values().all(|g| g.free_rank() == 3));
        let t = hf_infinity(3, Ring::PrimeField(2), DegreeWindow::default_for(3)).unwrap();
        assert!(t.entries.keys().all(|d| t.rank(*d) == 36));
    }

    #[test]
    fn stable_degrees() {
        assert_eq!(stable_degree(3, -2), 4);
        assert_eq!(stable_degree(3, -1), 3);
        assert_eq!(stable_degree(3, 5), 5);
    }

    #[test]
    fn x_ranks() {
        // X(3,0) = Λ^0 in degree −3
        assert_eq!(x_rank(3, 0, -3), 1);
        assert_eq!((-8..8).map(|n| x_rank(3, 0, n)).sum::<usize>(), 1);
        // total rank Σ C(2g,i)(d−i+1)
        assert_eq!(
            (-10..10).map(|n| x_rank(4, 2, n)).sum::<usize>(),
            3 + 8 * 2 + 28
        );
    }
}
