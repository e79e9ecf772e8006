//! Rank and null space over `Q` and `F_p`, block by block.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::blocks::{blocks, Block};
use super::matrix::{SparseMatrix, SparseVector};
use crate::error::{HfError, Result};
use crate::ring::{Fp, Rational, Ring};

/// Rank over the fraction field for `Z`, otherwise over the matrix's field.
pub fn rank(m: &SparseMatrix) -> Result<usize> {
    let mut total = 0;
    for b in blocks(m) {
        total += match m.ring() {
            Ring::PrimeField(p) => rref_fp(m, &b, p)?.pivots.len(),
            _ => rref_q(m, &b).pivots.len(),
        };
    }
    Ok(total)
}

pub fn kernel_rank(m: &SparseMatrix) -> Result<usize> {
    Ok(m.cols() - rank(m)?)
}

/// A basis of the null space over a field.  Each vector has a `1` in one
/// non-pivot column and is supported on that column and pivot columns.
/// Over `Z` only the rank is available.
pub fn kernel_basis(m: &SparseMatrix) -> Result<Vec<SparseVector>> {
    if m.ring() == Ring::Integers {
        return Err(HfError::Unsupported(
            "kernel basis over Z; use kernel_rank or the Smith transforms".into(),
        ));
    }
    let mut out: Vec<SparseVector> = Vec::new();
    let mut covered = vec![false; m.cols()];
    for b in blocks(m) {
        for &c in &b.cols {
            covered[c] = true;
        }
        let ker = match m.ring() {
            Ring::PrimeField(p) => rref_fp(m, &b, p)?.kernel_with(
                |x| *x == 0,
                |x| Rational::from_integer(((p - x) % p).into()),
            ),
            _ => rref_q(m, &b).kernel_with(Zero::is_zero, |x| -x.clone()),
        };
        out.extend(ker);
    }
    for (c, seen) in covered.into_iter().enumerate() {
        if !seen {
            out.push(BTreeMap::from([(c, Rational::one())]));
        }
    }
    out.sort_by_key(|v| *v.keys().next_back().expect("kernel vectors are nonzero"));
    Ok(out)
}

/// Some `x` with `m x = b` over a field, or `None` when `b` is not in the
/// column space.
pub fn solve(m: &SparseMatrix, b: &SparseVector) -> Result<Option<SparseVector>> {
    let mut aug = m.clone();
    aug.push_column(b.iter().map(|(r, v)| (*r, -v.clone())).collect())?;
    let last = m.cols();
    for mut v in kernel_basis(&aug)? {
        if v.contains_key(&last) {
            // Kernel vectors carry a 1 in their own free column.
            v.remove(&last);
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Reduced row echelon form of one block, with block-local column indices
/// mapped back through `cols`.
struct Echelon<T> {
    cols: Vec<usize>,
    /// (local pivot column, reduced row) in increasing pivot order.
    pivots: Vec<(usize, Vec<T>)>,
}

impl<T> Echelon<T> {
    /// One kernel vector per free column; `neg` maps a reduced entry `x` to
    /// the rational `-x`.
    fn kernel_with(
        &self,
        is_zero: impl Fn(&T) -> bool,
        neg: impl Fn(&T) -> Rational,
    ) -> Vec<SparseVector> {
        let n = self.cols.len();
        let mut is_pivot = vec![false; n];
        for (c, _) in &self.pivots {
            is_pivot[*c] = true;
        }
        let mut out = Vec::new();
        for free in (0..n).filter(|c| !is_pivot[*c]) {
            let mut v = BTreeMap::from([(self.cols[free], Rational::one())]);
            for (pc, row) in &self.pivots {
                if !is_zero(&row[free]) {
                    v.insert(self.cols[*pc], neg(&row[free]));
                }
            }
            out.push(v);
        }
        out
    }
}

fn dense_rows<T: Clone>(
    m: &SparseMatrix,
    b: &Block,
    zero: T,
    conv: impl Fn(&Rational) -> Result<T>,
) -> Result<Vec<Vec<T>>> {
    let mut local_row = BTreeMap::new();
    for (i, r) in b.rows.iter().enumerate() {
        local_row.insert(*r, i);
    }
    let mut a = vec![vec![zero; b.cols.len()]; b.rows.len()];
    for (j, c) in b.cols.iter().enumerate() {
        for (r, v) in m.column(*c) {
            a[local_row[r]][j] = conv(v)?;
        }
    }
    Ok(a)
}

fn rref_q(m: &SparseMatrix, b: &Block) -> Echelon<Rational> {
    let mut a =
        dense_rows(m, b, Rational::zero(), |v| Ok(v.clone())).expect("rational entries convert");
    let (nr, nc) = (b.rows.len(), b.cols.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut().skip(c) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..nc {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &f * &pivot_row[j];
                }
            }
        }
        pivots.push((c, r));
        r += 1;
    }
    Echelon {
        cols: b.cols.clone(),
        pivots: pivots
            .into_iter()
            .map(|(c, r)| (c, std::mem::take(&mut a[r])))
            .collect(),
    }
}

fn rref_fp(m: &SparseMatrix, b: &Block, p: u64) -> Result<Echelon<u64>> {
    let f = Fp::new(p);
    let mut a = dense_rows(m, b, 0u64, |v| f.from_rational(v))?;
    let (nr, nc) = (b.rows.len(), b.cols.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(piv) = (r..nr).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = f.inv(a[r][c]);
        for x in a[r].iter_mut().skip(c) {
            *x = f.mul(*x, inv);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let k = row[c];
            for j in c..nc {
                if pivot_row[j] != 0 {
                    row[j] = f.sub(row[j], f.mul(k, pivot_row[j]));
                }
            }
        }
        pivots.push((c, r));
        r += 1;
    }
    Ok(Echelon {
        cols: b.cols.clone(),
        pivots: pivots
            .into_iter()
            .map(|(c, r)| (c, std::mem::take(&mut a[r])))
            .collect(),
    })
}
