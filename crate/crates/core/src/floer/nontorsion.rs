//! Nontorsion spin^c structures `k ≠ 0`.
//!
//! With `s = −|k|` the map `F = v + h : B⁺ → C⁺_s` is surjective and
//! `HF⁺ ≅ Ker F`.  The triangle `{i ≥ 0, j < s}` is killed by `v`, and
//! `φ(ξ) = Σ_n (−1)^n T^n ξ` with `T = π ∘ U^{|k|} ∘ J^∞` lifts each
//! triangle element to the kernel.  Classes are graded by their triangle
//! component, which is where the model `X(g, g−1−|k|)` lives.
//!
//! Ranks for `k > 0` are computed directly with `s = k`.  The lift `φ` and
//! the `H_1` action use `s = −|k|`, which conjugation identifies with `k`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::table::{Flavor, FloerTable, HalfDegree, SpinC};
use super::torsion::{x_rank, DegreeWindow, ORDERING};
use crate::cfk::{
    apply_f, apply_h, h1_standard, lattice_degree, map_matrix, GradedElement, Region, SliceBasis,
};
use crate::error::{HfError, Result};
use crate::exterior::{blades_of_grade, check_genus, DEFAULT_GENUS_CAP};
use crate::linalg::{rank, GroupPresentation};
use crate::ring::{Integer, Ring};

/// `X(g, d) = ⊕_{i ≤ d} Λ^i ⊗ Z[U^{-1}]/U^{i−d−1}`, graded so that `U`
/// has degree `−2` and `Λ^i` sits in degree `i − g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XModel {
    pub genus: usize,
    pub d: i64,
}

impl XModel {
    pub fn new(genus: usize, d: i64) -> Self {
        XModel { genus, d }
    }

    /// The model for `𝔰_k`, or `None` when the group vanishes.
    pub fn for_spinc(genus: usize, k: i64) -> Option<Self> {
        let d = genus as i64 - 1 - k.abs();
        (k != 0 && d >= 0).then_some(XModel { genus, d })
    }

    pub fn degree(&self, grade: usize, q: i64) -> i64 {
        grade as i64 - self.genus as i64 + 2 * q
    }

    /// `(grade i, U-exponent q)` for the summands `Λ^i ⊗ U^{-q}`.
    pub fn cells(&self) -> Vec<(usize, i64)> {
        let top = self.d.min(2 * self.genus as i64);
        (0..=top)
            .flat_map(|i| (0..=self.d - i).map(move |q| (i as usize, q)))
            .collect()
    }

    pub fn rank_in_degree(&self, n: i64) -> usize {
        x_rank(self.genus, self.d, n)
    }

    pub fn ranks(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (i, q) in self.cells() {
            *out.entry(self.degree(i, q)).or_insert(0) += super::torsion::binom(2 * self.genus, i);
        }
        out
    }

    pub fn total_rank(&self) -> usize {
        self.ranks().values().sum()
    }

    /// Basis elements `blade ⊗ U^{-q}`, which sit at lattice column `q`.
    pub fn basis(&self) -> Vec<GradedElement<Integer>> {
        let mut out = Vec::new();
        for (i, q) in self.cells() {
            for b in blades_of_grade(self.genus, i) {
                let mut e = GradedElement::zero(self.genus);
                e.add_term(q, b, Integer::from(1));
                out.push(e);
            }
        }
        out
    }
}

fn shift(k: i64) -> i64 {
    -k.abs()
}

/// `φ(ξ) = Σ_{n ≥ 0} (−1)^n T^n ξ`; the series stops because `T` lowers
/// degree by `2|k|` and `B⁺` is bounded below.
pub fn phi(k: i64, xi: &GradedElement<Integer>) -> Result<GradedElement<Integer>> {
    if k == 0 {
        return Err(HfError::Domain("φ needs k ≠ 0".into()));
    }
    let g = xi.genus();
    let s = shift(k);
    let mut out = xi.clone();
    let mut cur = xi.clone();
    let mut sign = Integer::from(1);
    let cap = 2 * g + 4;
    for _ in 0..cap {
        cur = apply_h(s, &cur);
        if cur.is_zero() {
            return Ok(out);
        }
        sign = -sign;
        out.add_scaled(&cur, &sign);
    }
    Err(HfError::Domain("φ series did not terminate".into()))
}

/// Per-degree kernel ranks of `F` computed two ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelComparison {
    /// From the rank of `F` restricted to `B⁺` in degrees `≤ m`.
    pub direct: BTreeMap<i64, usize>,
    /// From the leading degrees of the `φ`-lifts of the triangle basis.
    pub series: BTreeMap<i64, usize>,
    /// Every `φ(ξ)` lies in `Ker F`.
    pub series_in_kernel: bool,
    /// Direct ranks for the conjugate structure, `s = +|k|`.
    pub conjugate: BTreeMap<i64, usize>,
}

/// `Ker F` graded by the filtration of `B⁺` by degree.
pub fn direct_kernel_ranks(g: usize, s: i64, top: i64) -> Result<BTreeMap<i64, usize>> {
    let lo = -(g as i64);
    let source = SliceBasis::spanning(g, Region::IGeqZero, lo..=top);
    let tlo = lo.min(lo + 2 * s);
    let thi = top.max(top + 2 * s);
    let target = SliceBasis::spanning(g, Region::Corner(s), tlo..=thi);
    let f = map_matrix(&source, &target, Ring::Rationals, |x| apply_f(s, x))?;
    let prefixes: Vec<(i64, usize)> = (lo..=top)
        .map(|m| {
            (
                m,
                (0..source.dim())
                    .take_while(|&c| source.degree_of(c) <= m)
                    .count(),
            )
        })
        .collect();
    let cumulative: Vec<(i64, usize)> = prefixes
        .into_par_iter()
        .map(|(m, n)| {
            let cols: Vec<usize> = (0..n).collect();
            rank(&f.select_columns(&cols)).map(|r| (m, n - r))
        })
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    let mut prev = 0;
    for (m, c) in cumulative {
        if c != prev {
            out.insert(m, c - prev);
        }
        prev = c;
    }
    Ok(out)
}

pub fn compare_kernels(g: usize, k: i64) -> Result<KernelComparison> {
    let Some(model) = XModel::for_spinc(g, k) else {
        return Ok(KernelComparison {
            direct: BTreeMap::new(),
            series: BTreeMap::new(),
            series_in_kernel: true,
            conjugate: BTreeMap::new(),
        });
    };
    let s = shift(k);
    let direct = direct_kernel_ranks(g, s, g as i64 + 1)?;
    let conjugate = direct_kernel_ranks(g, -s, g as i64 + 1)?;
    let lifts: Vec<(i64, bool)> = model
        .basis()
        .into_par_iter()
        .map(|xi| {
            let deg = xi
                .homogeneous_degree()
                .expect("basis elements are homogeneous");
            let lift = phi(k, &xi)?;
            let ok = apply_f(s, &lift).is_zero() && lift.restrict(Region::Triangle(s)) == xi;
            let lead = lift.degrees().into_iter().max().unwrap_or(deg);
            Ok((lead, ok && lead == deg))
        })
        .collect::<Result<_>>()?;
    let mut series = BTreeMap::new();
    for (d, _) in &lifts {
        *series.entry(*d).or_insert(0) += 1;
    }
    Ok(KernelComparison {
        direct,
        series,
        series_in_kernel: lifts.iter().all(|(_, ok)| *ok),
        conjugate,
    })
}

/// `HF⁺(Σ_g × S^1, 𝔰_k)` for `k ≠ 0` in integer degrees of the window.
pub fn hf_plus_nontorsion(g: usize, k: i64, window: DegreeWindow) -> Result<(FloerTable, XModel)> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    if k == 0 {
        return Err(HfError::Domain(
            "k = 0 is the torsion spin^c structure".into(),
        ));
    }
    let model = XModel::for_spinc(g, k).unwrap_or(XModel { genus: g, d: -1 });
    let mut t = FloerTable::new(g, SpinC::new(k), Ring::Integers, Flavor::Plus);
    let ranks = if model.d >= 0 {
        direct_kernel_ranks(g, k, g as i64 + 1)?
    } else {
        BTreeMap::new()
    };
    for n in window.iter() {
        t.entries.insert(
            HalfDegree::integer(n),
            GroupPresentation::free(ranks.get(&n).copied().unwrap_or(0)),
        );
    }
    t.metadata.insert("ordering".into(), ORDERING.into());
    t.metadata.insert("s".into(), k.to_string());
    Ok((t, model))
}

/// A homogeneous correction `ρ_ℓ(γ, ξ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionTerm {
    pub ell: i64,
    pub value: GradedElement<Integer>,
    pub degree: i64,
}

impl CorrectionTerm {
    /// `(grade, U-exponent)` of the terms, when they share one summand.
    pub fn location(&self) -> Option<(usize, i64)> {
        let mut locs = self.value.terms().map(|(i, b, _)| (b.grade(), -i));
        let first = locs.next()?;
        locs.all(|l| l == first).then_some(first)
    }
}

/// `A_γ(ξ) = γ.ξ + Σ_ℓ ρ_ℓ(γ, ξ)`.
#[derive(Clone, Debug)]
pub struct ActionResult {
    pub standard: GradedElement<Integer>,
    pub corrections: Vec<CorrectionTerm>,
    /// Corrections breaking the degree or location constraints.
    pub violations: Vec<String>,
}

/// The `H_1` action of the basis class dual to `e_gamma` on a homogeneous
/// element of `X(g, g−1−|k|)`, read off as `φ^{-1}(γ.φ(ξ))`.
pub fn h1_action(
    g: usize,
    k: i64,
    gamma: usize,
    xi: &GradedElement<Integer>,
) -> Result<ActionResult> {
    if k == 0 {
        return Err(HfError::Unsupported(
            "the H_1 action at k = 0 involves an extension problem".into(),
        ));
    }
    if xi.genus() != g {
        return Err(HfError::GenusMismatch(g, xi.genus()));
    }
    let n = xi
        .homogeneous_degree()
        .ok_or_else(|| HfError::Domain("ξ must be homogeneous and nonzero".into()))?;
    let s = shift(k);
    let tri = Region::Triangle(s);
    if xi.restrict(tri) != *xi {
        return Err(HfError::Domain("ξ must lie in X(g, g−1−|k|)".into()));
    }
    let standard = h1_standard(gamma, xi)?.restrict(tri);
    let acted = h1_standard(gamma, &phi(k, xi)?)?.restrict(tri);
    let rest = acted - standard.clone();
    let kk = k.abs();
    let (a, b) = (g as i64 - 2 - 2 * kk - n, -kk - 1 - n);
    let mut corrections = Vec::new();
    let mut violations = Vec::new();
    for deg in rest.degrees().into_iter().rev() {
        let value = rest.degree_part(deg);
        let gap = n - 1 - deg;
        if gap <= 0 || gap % (2 * kk) != 0 {
            violations.push(format!(
                "γ=e{gamma}, ξ={xi:?}: term in degree {deg} is not n−1−2ℓ|k|"
            ));
            continue;
        }
        let ell = gap / (2 * kk);
        let term = CorrectionTerm {
            ell,
            value,
            degree: deg,
        };
        let want = ((a + 2 * ell * kk + 1) as usize, b + 2 * ell * kk + 1);
        if n < (2 * ell - 1) * kk {
            violations.push(format!(
                "γ=e{gamma}, ξ={xi:?}: ρ_{ell} nonzero with n < (2ℓ−1)|k|"
            ));
        }
        if term.location() != Some(want) {
            violations.push(format!(
                "γ=e{gamma}, ξ={xi:?}: ρ_{ell} at {:?}, expected Λ^{}⊗U^{}",
                term.location(),
                want.0,
                want.1
            ));
        }
        corrections.push(term);
    }
    Ok(ActionResult {
        standard,
        corrections,
        violations,
    })
}

/// Totals of a sweep over all basis `γ` and all basis `ξ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionSweep {
    pub genus: usize,
    pub k: i64,
    pub pairs: usize,
    /// Count of nonzero `ρ_ℓ` per `ℓ`.
    pub nonzero: BTreeMap<i64, usize>,
    pub violations: Vec<String>,
}

impl ActionSweep {
    pub fn total_nonzero(&self) -> usize {
        self.nonzero.values().sum()
    }
}

pub fn action_sweep(g: usize, k: i64) -> Result<ActionSweep> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let mut sweep = ActionSweep {
        genus: g,
        k,
        ..Default::default()
    };
    let Some(model) = XModel::for_spinc(g, k) else {
        return Ok(sweep);
    };
    let results: Vec<ActionResult> = model
        .basis()
        .into_par_iter()
        .flat_map_iter(|xi| (1..=2 * g).map(move |gamma| h1_action(g, k, gamma, &xi)))
        .collect::<Result<_>>()?;
    sweep.pairs = results.len();
    for r in results {
        for c in &r.corrections {
            *sweep.nonzero.entry(c.ell).or_insert(0) += 1;
        }
        sweep.violations.extend(r.violations);
    }
    Ok(sweep)
}

/// Degree of `ξ ⊗ U^{-q}` for a blade of the given grade.
pub fn model_degree(g: usize, grade: usize, q: i64) -> i64 {
    lattice_degree(g, q, grade)
}
