//! The Lefschetz `sl_2` action on `Λ* H^1(Σ_g)`, primitive and coprimitive
//! subspaces over `Q`, and the lattice of star-fixed middle-degree classes.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{HfError, Result};
use crate::exterior::{blades_of_grade, grade_operator_matrix, omega, Blade, Multivector};
use crate::linalg::{kernel_basis, solve, SparseMatrix, SparseVector};
use crate::ring::{Coeff, Integer, Rational, Ring};

/// `Λ(α) = ω∧α`, raising the grade by two.
pub fn op_lambda<C: Coeff>(a: &Multivector<C>) -> Multivector<C> {
    omega::<C>(a.genus()).wedge(a).expect("same genus")
}

/// `L(α) = −ω∠α`, lowering the grade by two.
pub fn op_l<C: Coeff>(a: &Multivector<C>) -> Multivector<C> {
    -omega::<C>(a.genus()).contract(a).expect("same genus")
}

/// `H(α) = (p − g)α` on each grade-`p` part.
pub fn op_h<C: Coeff>(a: &Multivector<C>) -> Multivector<C> {
    let g = a.genus() as i64;
    let mut out = Multivector::zero(a.genus());
    for (b, c) in a.terms() {
        out.add_term(*b, c.clone() * C::from_i64(b.grade() as i64 - g));
    }
    out
}

/// Basis of `P^j = ker L ∩ Λ^j` over `Q`, scaled to primitive integer
/// vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveBasis {
    pub genus: usize,
    pub degree: usize,
    pub vectors: Vec<Multivector<Rational>>,
}

/// Basis of `ker(ω∧·) ∩ Λ^j` over `Q`, scaled to primitive integer vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoprimitiveBasis {
    pub genus: usize,
    pub degree: usize,
    pub vectors: Vec<Multivector<Rational>>,
}

pub fn primitive_basis(g: usize, j: usize) -> PrimitiveBasis {
    PrimitiveBasis {
        genus: g,
        degree: j,
        vectors: grade_kernel(g, j, j.wrapping_sub(2), |b| {
            op_l(&Multivector::<Integer>::blade(g, b))
        }),
    }
}

pub fn coprimitive_basis(g: usize, j: usize) -> CoprimitiveBasis {
    CoprimitiveBasis {
        genus: g,
        degree: j,
        vectors: grade_kernel(g, j, j + 2, |b| {
            op_lambda(&Multivector::<Integer>::blade(g, b))
        }),
    }
}

/// Null space of a grade-`p` to grade-`q` operator (`q` may be out of range,
/// in which case the operator is zero).
fn grade_kernel(
    g: usize,
    p: usize,
    q: usize,
    f: impl Fn(Blade) -> Multivector<Integer>,
) -> Vec<Multivector<Rational>> {
    if p > 2 * g {
        return Vec::new();
    }
    let src = blades_of_grade(g, p);
    if q > 2 * g {
        return src.into_iter().map(|b| Multivector::blade(g, b)).collect();
    }
    let m = grade_operator_matrix(g, p, q, Ring::Rationals, f).expect("operator lands in grade q");
    kernel_basis(&m)
        .expect("rational kernel")
        .into_iter()
        .map(|v| primitive_integer_vector(g, &src, &v))
        .collect()
}

/// Clear denominators and divide by the content, making the leading
/// coefficient positive.
fn primitive_integer_vector(g: usize, basis: &[Blade], v: &SparseVector) -> Multivector<Rational> {
    let denom = v.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<(usize, BigInt)> = v
        .iter()
        .map(|(i, x)| (*i, x.numer() * (&denom / x.denom())))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    let lead_negative = ints.first().is_some_and(|(_, x)| x.is_negative());
    let mut out = Multivector::zero(g);
    for (i, x) in ints {
        let mut y = x / &content;
        if lead_negative {
            y = -y;
        }
        out.add_term(basis[i], Rational::from_integer(y));
    }
    out
}

/// `dim P^j = C(2g, j) − C(2g, j−2)` for `j ≤ g`, zero above.
pub fn primitive_dim(g: usize, j: usize) -> usize {
    if j > g {
        return 0;
    }
    let c = |k: usize| num_integer::binomial(2 * g, k);
    c(j) - if j >= 2 { c(j - 2) } else { 0 }
}

/// `dim P̃^j`, which equals `dim P^{2g−j}`.
pub fn coprimitive_dim(g: usize, j: usize) -> usize {
    if j > 2 * g {
        0
    } else {
        primitive_dim(g, 2 * g - j)
    }
}

/// One summand `ω^k ∧ β` of the Lefschetz decomposition, `β` primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzComponent {
    pub power: usize,
    pub primitive: Multivector<Rational>,
    pub component: Multivector<Rational>,
}

/// Decompose a homogeneous `a ∈ Λ^p` as `Σ_k ω^k ∧ β_k` with `β_k ∈ P^{p−2k}`.
/// Only nonzero summands are returned, in increasing `k`.
pub fn primitive_decomposition(a: &Multivector<Rational>) -> Result<Vec<LefschetzComponent>> {
    if a.is_zero() {
        return Ok(Vec::new());
    }
    let p = a.homogeneous_grade().ok_or_else(|| {
        HfError::Domain("primitive decomposition needs a homogeneous element".into())
    })?;
    let g = a.genus();
    let basis = blades_of_grade(g, p);
    let pos = |b: &Blade| basis.binary_search(b).expect("grade-p blade");
    // Columns ω^k ∧ β for every primitive basis vector β, largest k first.
    let mut columns: Vec<(usize, Multivector<Rational>, Multivector<Rational>)> = Vec::new();
    for k in (0..=p / 2).rev() {
        let power = omega_power(g, k);
        for beta in primitive_basis(g, p - 2 * k).vectors {
            let image = power.wedge(&beta)?;
            columns.push((k, beta, image));
        }
    }
    let mut m = SparseMatrix::zero(basis.len(), 0, Ring::Rationals);
    for (_, _, image) in &columns {
        m.push_column(image.terms().map(|(b, c)| (pos(b), c.clone())).collect())?;
    }
    let rhs: SparseVector = a.terms().map(|(b, c)| (pos(b), c.clone())).collect();
    let x = solve(&m, &rhs)?
        .ok_or_else(|| HfError::Domain("element outside the Lefschetz span".into()))?;
    let mut out: Vec<LefschetzComponent> = Vec::new();
    for (i, (k, beta, image)) in columns.iter().enumerate() {
        let Some(coeff) = x.get(&i) else { continue };
        match out.iter_mut().find(|c| c.power == *k) {
            Some(c) => {
                c.primitive.add_scaled(beta, coeff);
                c.component.add_scaled(image, coeff);
            }
            None => out.push(LefschetzComponent {
                power: *k,
                primitive: beta.scale(coeff),
                component: image.scale(coeff),
            }),
        }
    }
    out.retain(|c| !c.component.is_zero());
    out.sort_by_key(|c| c.power);
    Ok(out)
}

/// `ω^k` (not divided by `k!`).
pub fn omega_power<C: Coeff>(g: usize, k: usize) -> Multivector<C> {
    let w = omega::<C>(g);
    (0..k).fold(Multivector::one(g), |acc, _| {
        acc.wedge(&w).expect("same genus")
    })
}

/// Integer generators of the star-fixed subgroup of `Λ^g`:
/// `x_I` when the `x`'s use every pair, otherwise
/// `x_I (z_S + (−1)^n z_{J∖S})` with `|S| = n`, `|J| = 2n`, and `S`
/// containing the least element of `J`.  Here `x_i` is either vector of the
/// `i`-th symplectic pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualLattice {
    pub genus: usize,
    pub generators: Vec<Multivector<Integer>>,
}

impl SelfDualLattice {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

pub fn self_dual_lattice(g: usize) -> SelfDualLattice {
    let mut generators = Vec::new();
    for r in (0..=g).rev().filter(|r| (g - r) % 2 == 0) {
        let n = (g - r) / 2;
        crate::exterior::for_each_subset(g, r, |xs| {
            let rest: Vec<usize> = (0..g).filter(|j| !xs.contains(j)).collect();
            for choice in 0u32..1 << r {
                let x_mask = xs.iter().enumerate().fold(0u32, |acc, (t, &j)| {
                    acc | 1 << (2 * j + (choice >> t & 1) as usize)
                });
                let x = Multivector::<Integer>::blade(g, Blade::from_mask(x_mask));
                if n == 0 {
                    generators.push(x);
                    continue;
                }
                // S ranges over n-subsets of `rest` containing rest[0].
                crate::exterior::for_each_subset(2 * n - 1, n - 1, |tail| {
                    let s: Vec<usize> = std::iter::once(rest[0])
                        .chain(tail.iter().map(|&t| rest[t + 1]))
                        .collect();
                    let z_of = |set: &[usize]| {
                        let mask = set
                            .iter()
                            .fold(0u32, |acc, &j| acc | Blade::pair(j + 1).mask());
                        Multivector::<Integer>::blade(g, Blade::from_mask(mask))
                    };
                    let complement: Vec<usize> =
                        rest.iter().copied().filter(|j| !s.contains(j)).collect();
                    let sign = Integer::from(if n % 2 == 0 { 1 } else { -1 });
                    let pair = z_of(&s) + z_of(&complement).scale(&sign);
                    generators.push(x.wedge(&pair).expect("same genus"));
                });
            }
        });
    }
    SelfDualLattice {
        genus: g,
        generators,
    }
}

/// `2^{g−1} + C(2g, g)/2`.
pub fn self_dual_rank(g: usize) -> usize {
    (1 << (g - 1)) + num_integer::binomial(2 * g, g) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::eta;

    #[test]
    fn operator_examples() {
        for g in 1..=4 {
            let top = Multivector::<Integer>::blade(g, Blade::from_mask((1 << g) - 1));
            assert!(op_h(&top).is_zero());
            assert_eq!(
                op_l(&omega::<Integer>(g)),
                Multivector::scalar(g, Integer::from(g))
            );
            assert!(op_lambda(&eta::<Integer>(g, g)).is_zero());
        }
    }

    #[test]
    fn primitive_dimensions() {
        assert_eq!(primitive_basis(1, 0).vectors, vec![Multivector::one(1)]);
        assert_eq!(primitive_basis(2, 2).vectors.len(), 5);
        assert!(primitive_basis(3, 4).vectors.is_empty());
        for g in 1..=4 {
            for j in 0..=2 * g {
                assert_eq!(
                    primitive_basis(g, j).vectors.len(),
                    primitive_dim(g, j),
                    "g={g} j={j}"
                );
                assert_eq!(
                    coprimitive_basis(g, j).vectors.len(),
                    coprimitive_dim(g, j),
                    "g={g} j={j}"
                );
                for v in primitive_basis(g, j).vectors {
                    assert!(op_l(&v).is_zero());
                }
            }
        }
    }

    #[test]
    fn decomposition_examples() {
        let g = 3;
        let w = omega::<Rational>(g);
        let parts = primitive_decomposition(&w).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].power, 1);
        assert_eq!(parts[0].component, w);
        let beta = primitive_basis(g, 2).vectors[0].clone();
        let parts = primitive_decomposition(&beta).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!((parts[0].power, &parts[0].component), (0, &beta));
        let mixed = w.clone() + Multivector::basis_vector(g, 1);
        assert!(primitive_decomposition(&mixed).is_err());
    }

    #[test]
    fn self_dual_generators() {
        for g in 1..=5 {
            let lat = self_dual_lattice(g);
            assert_eq!(lat.rank(), self_dual_rank(g), "g={g}");
            for v in &lat.generators {
                assert_eq!(&v.star(), v);
                assert_eq!(v.homogeneous_grade(), Some(g));
            }
        }
        assert_eq!(self_dual_rank(1), 2);
        assert_eq!(self_dual_rank(3), 14);
    }
}
