//! Smith normal form over `Z`.
//!
//! Each block of the matrix is reduced separately.  Pivots of absolute value
//! one are eliminated sparsely first, choosing the entry of least Markowitz
//! cost `(row nnz − 1)(col nnz − 1)`; such eliminations are unimodular and
//! contribute an invariant factor 1 each.  What is left is diagonalized densely
//! with arbitrary-precision integers, and the diagonal is finally rewritten as
//! a divisibility chain.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::blocks::{blocks, Block};
use super::group::{divisibility_chain, GroupPresentation};
use super::matrix::SparseMatrix;
use crate::error::{HfError, Result};
use crate::ring::{Rational, Ring};

/// Invariant factors `d_1 | d_2 | ... | d_r` (units included) of a
/// `rows × cols` integer matrix of rank `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn kernel_rank(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn cokernel(&self) -> GroupPresentation {
        GroupPresentation::new(
            self.rows - self.rank(),
            self.invariant_factors.iter().cloned(),
        )
    }
}

/// Unimodular `left`, `right` with `left · m · right` zero except at the
/// listed pivot positions.  The pivots are a diagonalization (before the
/// divisibility-chain rewrite), one per row and column at most.
#[derive(Clone, Debug)]
pub struct SmithTransforms {
    pub left: SparseMatrix,
    pub right: SparseMatrix,
    pub pivots: Vec<(usize, usize, BigInt)>,
}

fn require_integers(m: &SparseMatrix) -> Result<()> {
    if m.ring() != Ring::Integers {
        return Err(HfError::RingMismatch(format!(
            "Smith normal form needs an integer matrix, got ring {}",
            m.ring()
        )));
    }
    Ok(())
}

pub fn smith_normal_form(m: &SparseMatrix) -> Result<SmithForm> {
    require_integers(m)?;
    let mut diagonal = Vec::new();
    let mut units = 0usize;
    for b in blocks(m) {
        let (u, mut residual) = eliminate_units(m, &b);
        units += u;
        diagonal.extend(diagonalize(&mut residual, None));
    }
    Ok(assemble(m, units, diagonal))
}

fn assemble(m: &SparseMatrix, units: usize, diagonal: Vec<BigInt>) -> SmithForm {
    let mut units = units;
    let mut big = Vec::new();
    for d in diagonal {
        if d.is_one() {
            units += 1;
        } else {
            big.push(d);
        }
    }
    let chain = divisibility_chain(big.clone());
    // The chain rewrite can turn factors into units; rank is unchanged.
    let rank = units + big.len();
    let mut invariant_factors = vec![BigInt::one(); rank - chain.len()];
    invariant_factors.extend(chain);
    SmithForm {
        rows: m.rows(),
        cols: m.cols(),
        invariant_factors,
    }
}

/// Smith form together with transforms, reducing every block densely.
pub fn smith_with_transforms(m: &SparseMatrix) -> Result<(SmithForm, SmithTransforms)> {
    require_integers(m)?;
    let (nr, nc) = (m.rows(), m.cols());
    let mut left: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    let mut right: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
    let mut in_block_row = vec![false; nr];
    let mut in_block_col = vec![false; nc];
    let mut pivots = Vec::new();
    let mut diagonal = Vec::new();
    for b in blocks(m) {
        let mut a = dense_block(m, &b);
        let mut p = identity(b.rows.len());
        let mut q = identity(b.cols.len());
        let d = diagonalize(&mut a, Some((&mut p, &mut q)));
        for (k, v) in d.iter().enumerate() {
            pivots.push((b.rows[k], b.cols[k], v.clone()));
        }
        diagonal.extend(d);
        scatter(&mut left, &p, &b.rows, &b.rows);
        scatter(&mut right, &q, &b.cols, &b.cols);
        for &r in &b.rows {
            in_block_row[r] = true;
        }
        for &c in &b.cols {
            in_block_col[c] = true;
        }
    }
    for (r, seen) in in_block_row.iter().enumerate() {
        if !seen {
            left.insert((r, r), BigInt::one());
        }
    }
    for (c, seen) in in_block_col.iter().enumerate() {
        if !seen {
            right.insert((c, c), BigInt::one());
        }
    }
    let to_matrix = |n: usize, entries: BTreeMap<(usize, usize), BigInt>| {
        SparseMatrix::from_triplets(
            n,
            n,
            Ring::Integers,
            entries
                .into_iter()
                .map(|((r, c), v)| (r, c, Rational::from_integer(v))),
        )
        .expect("transform entries are in range")
    };
    let form = assemble(m, 0, diagonal);
    Ok((
        form,
        SmithTransforms {
            left: to_matrix(nr, left),
            right: to_matrix(nc, right),
            pivots,
        },
    ))
}

/// A `Z`-basis of the kernel lattice `{x ∈ Z^cols : m x = 0}`.
pub fn kernel_lattice(m: &SparseMatrix) -> Result<Vec<BTreeMap<usize, BigInt>>> {
    let (_, t) = smith_with_transforms(m)?;
    let mut pivot_col = vec![false; m.cols()];
    for (_, c, _) in &t.pivots {
        pivot_col[*c] = true;
    }
    let mut out = Vec::new();
    for c in (0..m.cols()).filter(|c| !pivot_col[*c]) {
        out.push(
            t.right
                .column(c)
                .iter()
                .map(|(r, v)| (*r, v.numer().clone()))
                .collect(),
        );
    }
    Ok(out)
}

/// Cokernel `ring^rows / image`, as an abelian group over `Z` and as a
/// vector space (free rank only) over a field.
pub fn cokernel(m: &SparseMatrix) -> Result<GroupPresentation> {
    match m.ring() {
        Ring::Integers => Ok(smith_normal_form(m)?.cokernel()),
        _ => Ok(GroupPresentation::free(m.rows() - super::field::rank(m)?)),
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn scatter(
    out: &mut BTreeMap<(usize, usize), BigInt>,
    local: &[Vec<BigInt>],
    rows: &[usize],
    cols: &[usize],
) {
    for (i, row) in local.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.insert((rows[i], cols[j]), v.clone());
            }
        }
    }
}

fn dense_block(m: &SparseMatrix, b: &Block) -> Vec<Vec<BigInt>> {
    let local: BTreeMap<usize, usize> = b.rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut a = vec![vec![BigInt::zero(); b.cols.len()]; b.rows.len()];
    for (j, c) in b.cols.iter().enumerate() {
        for (r, v) in m.column(*c) {
            a[local[r]][j] = v.numer().clone();
        }
    }
    a
}

/// Sparse elimination of unit pivots inside one block.  Returns the number of
/// pivots removed and the dense residual (rows and columns that still carry
/// entries).
fn eliminate_units(m: &SparseMatrix, b: &Block) -> (usize, Vec<Vec<BigInt>>) {
    let local: BTreeMap<usize, usize> = b.rows.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); b.rows.len()];
    let mut col_rows: Vec<BTreeMap<usize, ()>> = vec![BTreeMap::new(); b.cols.len()];
    for (j, c) in b.cols.iter().enumerate() {
        for (r, v) in m.column(*c) {
            let i = local[r];
            rows[i].insert(j, v.numer().clone());
            col_rows[j].insert(i, ());
        }
    }
    let mut units = 0;
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row {
                if v.abs().is_one() {
                    let cost = (row.len() - 1) * (col_rows[*j].len() - 1);
                    if best.is_none_or(|(c, _, _)| cost < c) {
                        best = Some((cost, i, *j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pi]);
        let unit = pivot_row[&pj].clone();
        for k in pivot_row.keys() {
            col_rows[*k].remove(&pi);
        }
        let others: Vec<usize> = col_rows[pj].keys().copied().collect();
        for i in others {
            let factor = &rows[i][&pj] * &unit;
            for (k, v) in &pivot_row {
                let entry = rows[i].entry(*k).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[i].remove(k);
                    col_rows[*k].remove(&i);
                } else {
                    col_rows[*k].insert(i, ());
                }
            }
        }
        debug_assert!(col_rows[pj].is_empty());
        units += 1;
    }
    let live_rows: Vec<usize> = (0..rows.len()).filter(|i| !rows[*i].is_empty()).collect();
    let live_cols: Vec<usize> = (0..col_rows.len())
        .filter(|j| !col_rows[*j].is_empty())
        .collect();
    let col_pos: BTreeMap<usize, usize> =
        live_cols.iter().enumerate().map(|(n, j)| (*j, n)).collect();
    let mut residual = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (n, i) in live_rows.iter().enumerate() {
        for (j, v) in &rows[*i] {
            residual[n][col_pos[j]] = v.clone();
        }
    }
    (units, residual)
}

/// Diagonalize `a` in place by unimodular row and column operations, mirroring
/// them into `(p, q)` when given so that `p · a_in · q = a_out`.  Returns the
/// nonzero diagonal (absolute values), which sits at positions `(k, k)`.
fn diagonalize(a: &mut [Vec<BigInt>], mut transforms: Transforms<'_>) -> Vec<BigInt> {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        let Some((pi, pj)) = smallest_entry(a, t, t..nr, t..nc) else {
            break;
        };
        swap_rows(a, &mut transforms, t, pi);
        swap_cols(a, &mut transforms, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(a, &mut transforms, i, t, &q, t);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(a, &mut transforms, j, t, &q, t);
                dirty |= !a[t][j].is_zero();
            }
            if !dirty {
                break;
            }
            // A remainder smaller than the pivot survived; move it into place.
            let in_col = smallest_entry(a, t, t + 1..nr, t..t + 1);
            let in_row = smallest_entry(a, t, t..t + 1, t + 1..nc);
            let pick = match (in_col, in_row) {
                (Some(x), Some(y)) => {
                    if a[x.0][x.1].abs() <= a[y.0][y.1].abs() {
                        x
                    } else {
                        y
                    }
                }
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => unreachable!("dirty implies a nonzero remainder"),
            };
            swap_rows(a, &mut transforms, t, pick.0);
            swap_cols(a, &mut transforms, t, pick.1);
        }
        if a[t][t].is_negative() {
            negate_row(a, &mut transforms, t);
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    diag
}

fn smallest_entry(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = &a[i][j];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

type Transforms<'a> = Option<(&'a mut Vec<Vec<BigInt>>, &'a mut Vec<Vec<BigInt>>)>;

fn swap_rows(a: &mut [Vec<BigInt>], tr: &mut Transforms<'_>, i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    if let Some((p, _)) = tr {
        p.swap(i, j);
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], tr: &mut Transforms<'_>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    if let Some((_, q)) = tr {
        for row in q.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// `row_i -= q · row_t`; entries of row `t` left of `from` are zero.
fn row_axpy(
    a: &mut [Vec<BigInt>],
    tr: &mut Transforms<'_>,
    i: usize,
    t: usize,
    q: &BigInt,
    from: usize,
) {
    let (src, dst) = pair_mut(a, t, i);
    for j in from..src.len() {
        if !src[j].is_zero() {
            dst[j] -= q * &src[j];
        }
    }
    if let Some((p, _)) = tr {
        let (src, dst) = pair_mut(p, t, i);
        for j in 0..src.len() {
            if !src[j].is_zero() {
                dst[j] -= q * &src[j];
            }
        }
    }
}

/// `col_j -= q · col_t`; entries of column `t` above `from` are zero.
fn col_axpy(
    a: &mut [Vec<BigInt>],
    tr: &mut Transforms<'_>,
    j: usize,
    t: usize,
    q: &BigInt,
    from: usize,
) {
    for row in a.iter_mut().skip(from) {
        if !row[t].is_zero() {
            let d = q * &row[t];
            row[j] -= d;
        }
    }
    if let Some((_, qm)) = tr {
        for row in qm.iter_mut() {
            if !row[t].is_zero() {
                let d = q * &row[t];
                row[j] -= d;
            }
        }
    }
}

fn negate_row(a: &mut [Vec<BigInt>], tr: &mut Transforms<'_>, t: usize) {
    for x in a[t].iter_mut() {
        *x = -std::mem::take(x);
    }
    if let Some((p, _)) = tr {
        for x in p[t].iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}

fn pair_mut<T>(v: &mut [T], a: usize, b: usize) -> (&T, &mut T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&hi[0], &mut lo[b])
    }
}
