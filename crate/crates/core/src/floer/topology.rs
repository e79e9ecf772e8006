//! Classical cross-checks: the cohomology of the circle bundle `E_g` over the
//! Jacobian torus, the cokernel comparison behind the `HF^∞` torsion, and the
//! triple-cup map on `Λ^* H^1(Σ_g × S^1)`.

use std::collections::HashMap;

use super::torsion::binom;
use crate::error::Result;
use crate::exterior::{
    blades_of_grade, check_genus, exp_omega, for_each_subset, omega, Blade, Multivector,
    DEFAULT_GENUS_CAP,
};
use crate::linalg::{cokernel, kernel_rank, rank, GroupPresentation, SparseMatrix};
use crate::ring::{Integer, Rational, Ring};

/// `H^j(E_g)` for `j = 0..=2g+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgCohomology {
    pub genus: usize,
    pub ring: Ring,
    pub groups: Vec<GroupPresentation>,
}

impl EgCohomology {
    pub fn dims(&self) -> Vec<usize> {
        self.groups
            .iter()
            .map(|g| match self.ring {
                Ring::PrimeField(p) => g.rank_mod(p),
                _ => g.free_rank(),
            })
            .collect()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.iter().any(|g| !g.is_free())
    }
}

/// `ω∧ : Λ^p → Λ^{p+2}`, with the empty matrix when either side is zero.
fn omega_wedge(g: usize, p: i64, ring: Ring) -> Result<SparseMatrix> {
    let dim = |q: i64| {
        if q < 0 || q > 2 * g as i64 {
            0
        } else {
            binom(2 * g, q as usize)
        }
    };
    if dim(p) == 0 || dim(p + 2) == 0 {
        return Ok(SparseMatrix::zero(dim(p + 2), dim(p), ring));
    }
    let w = omega::<Integer>(g);
    crate::exterior::grade_operator_matrix(g, p as usize, p as usize + 2, ring, |b| {
        w.wedge(&Multivector::blade(g, b)).expect("same genus")
    })
}

/// Gysin sequence: `H^j(E_g) = Coker(ω∧ on Λ^{j−2}) ⊕ Ker(ω∧ on Λ^{j−1})`.
pub fn eg_cohomology(g: usize, ring: Ring) -> Result<EgCohomology> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let mut groups = Vec::new();
    for j in 0..=2 * g as i64 + 1 {
        let coker = cokernel(&omega_wedge(g, j - 2, ring)?)?;
        let ker = kernel_rank(&omega_wedge(g, j - 1, ring)?)?;
        groups.push(coker.direct_sum(&GroupPresentation::free(ker)));
    }
    Ok(EgCohomology {
        genus: g,
        ring,
        groups,
    })
}

/// Matrix of a linear map on the forms of one parity, in mask order.
fn parity_operator(
    g: usize,
    parity: usize,
    ring: Ring,
    f: impl Fn(Blade) -> Multivector<Integer>,
) -> Result<SparseMatrix> {
    let basis: Vec<Blade> = (parity..=2 * g)
        .step_by(2)
        .flat_map(|p| blades_of_grade(g, p))
        .collect();
    let pos: HashMap<Blade, usize> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut m = SparseMatrix::zero(basis.len(), basis.len(), ring);
    for (c, b) in basis.iter().enumerate() {
        for (t, v) in f(*b).terms() {
            m.add_entry(pos[t], c, Rational::from_integer(v.clone()))?;
        }
    }
    Ok(m)
}

/// `coker(ω∧)` against `coker((1 − e^{−ω})∠)` on the forms of one parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelComparison {
    pub genus: usize,
    pub parity: usize,
    pub omega_wedge: GroupPresentation,
    pub exp_contract: GroupPresentation,
}

impl CokernelComparison {
    pub fn agrees(&self) -> bool {
        self.omega_wedge == self.exp_contract
    }
}

pub fn cokernel_comparison(g: usize) -> Result<Vec<CokernelComparison>> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let w = omega::<Integer>(g);
    let e = exp_omega::<Integer>(g, -1);
    let mut out = Vec::new();
    for parity in 0..2 {
        let a = parity_operator(g, parity, Ring::Integers, |b| {
            w.wedge(&Multivector::blade(g, b)).expect("same genus")
        })?;
        let c = parity_operator(g, parity, Ring::Integers, |b| {
            let x = Multivector::blade(g, b);
            x.clone() - e.contract(&x).expect("same genus")
        })?;
        out.push(CokernelComparison {
            genus: g,
            parity,
            omega_wedge: cokernel(&a)?,
            exp_contract: cokernel(&c)?,
        });
    }
    Ok(out)
}

/// Sorted index lists of the `s`-subsets of `H^1(Σ_g × S^1)`, basis
/// `e_1, …, e_{2g}, t` with `t` last.
fn y_basis(g: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_subset(2 * g + 1, s, |sub| {
        out.push(sub.iter().map(|i| i + 1).collect())
    });
    out
}

/// `β_s : Λ^s H^1(Y) → Λ^{s−3} H^1(Y)`,
/// `β(α_1…α_s) = Σ_{i<j<l} (−1)^{i+j+l} ⟨α_iα_jα_l, [Y]⟩ α_1…α̂_i…α̂_j…α̂_l…α_s`
/// with `⟨e_a ∪ e_b ∪ t⟩ = ω(e_a, e_b)` and all other triples zero.
pub fn triple_cup_beta(g: usize, s: usize, ring: Ring) -> Result<SparseMatrix> {
    check_genus(g, DEFAULT_GENUS_CAP)?;
    let cols = y_basis(g, s);
    if s < 3 {
        return Ok(SparseMatrix::zero(0, cols.len(), ring));
    }
    let rows = y_basis(g, s - 3);
    let pos: HashMap<Vec<usize>, usize> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();
    let t = 2 * g + 1;
    let mut m = SparseMatrix::zero(rows.len(), cols.len(), ring);
    for (c, idx) in cols.iter().enumerate() {
        // t is the largest index, so it can only be the last factor.
        if idx.last() != Some(&t) {
            continue;
        }
        let l = idx.len();
        for i in 0..l - 1 {
            for j in i + 1..l - 1 {
                let (a, b) = (idx[i], idx[j]);
                if a % 2 == 0 || b != a + 1 {
                    continue;
                }
                let sign = if (i + 1 + j + 1 + l) % 2 == 0 { 1 } else { -1 };
                let rest: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(n, _)| ![i, j, l - 1].contains(n))
                    .map(|(_, v)| *v)
                    .collect();
                m.add_entry(pos[&rest], c, Rational::from_integer(sign.into()))?;
            }
        }
    }
    Ok(m)
}

/// The `β` complex: composites and the quotients `Ker β_s / Im β_{s+3}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleCupReport {
    pub genus: usize,
    pub composites_vanish: bool,
    /// `dim_Q Ker β_s / Im β_{s+3}` for `s = 0..=2g+1`.
    pub quotient_dims: Vec<usize>,
}

impl TripleCupReport {
    pub fn total(&self) -> usize {
        self.quotient_dims.iter().sum()
    }
}

pub fn triple_cup_report(g: usize) -> Result<TripleCupReport> {
    let n = 2 * g + 1;
    let betas: Vec<SparseMatrix> = (0..=n + 3)
        .map(|s| triple_cup_beta(g, s, Ring::Rationals))
        .collect::<Result<_>>()?;
    let mut composites_vanish = true;
    for s in 3..=n {
        if s + 3 <= n {
            composites_vanish &= betas[s].mul(&betas[s + 3])?.is_zero();
        }
    }
    let mut quotient_dims = Vec::new();
    for s in 0..=n {
        let ker = kernel_rank(&betas[s])?;
        let img = if s + 3 <= n { rank(&betas[s + 3])? } else { 0 };
        quotient_dims.push(ker - img);
    }
    Ok(TripleCupReport {
        genus: g,
        composites_vanish,
        quotient_dims,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_on_single_triple() {
        let m = triple_cup_beta(1, 3, Ring::Integers).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 1));
        assert_eq!(m.get(0, 0), Rational::from_integer(1.into()));
        assert!(triple_cup_beta(2, 2, Ring::Integers).unwrap().is_zero());
    }

    #[test]
    fn eg_small() {
        let h = eg_cohomology(2, Ring::Rationals).unwrap();
        assert_eq!(h.dims()[1], 4);
        let h = eg_cohomology(3, Ring::Rationals).unwrap();
        assert_eq!(h.dims().iter().sum::<usize>(), 2 * 35);
    }
}
