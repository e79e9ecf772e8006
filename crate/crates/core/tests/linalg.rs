use hf_core::linalg::{
    cokernel, kernel_lattice, rank, smith_normal_form, smith_with_transforms, SparseMatrix,
};
use hf_core::{Rational, Ring};
use num_bigint::BigInt;
use num_integer::Integer as _;
use proptest::prelude::*;

type Dense = Vec<Vec<i64>>;

fn to_sparse(m: &Dense, ring: Ring) -> SparseMatrix {
    let cols = m.first().map_or(0, Vec::len);
    let entries = m.iter().enumerate().flat_map(|(r, row)| {
        row.iter()
            .enumerate()
            .map(move |(c, v)| (r, c, Rational::from_integer((*v).into())))
    });
    SparseMatrix::from_triplets(m.len(), cols, ring, entries).unwrap()
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors `d_k = gcd of k×k minors`.
fn invariant_factors_by_minors(m: &Dense) -> Vec<i128> {
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c] as i128).collect())
                    .collect();
                d = d.gcd(&det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Rank over `F_2` by dense elimination on bit rows.
fn rank_f2(m: &Dense) -> usize {
    let mut rows: Vec<u64> = m
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold(0u64, |acc, (c, v)| acc | ((v.rem_euclid(2) as u64) << c))
        })
        .collect();
    let mut r = 0;
    for bit in 0..64 {
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        r += 1;
    }
    r
}

fn dense(max: usize) -> impl Strategy<Value = Dense> {
    (1..=max, 1..=max)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

/// Row and column operations `(target, source, multiplier)` and swaps.
fn unimodular(n: usize) -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0..n, 0..n, -3i64..=3), 0..8)
}

fn apply_rows(m: &mut Dense, ops: &[(usize, usize, i64)]) {
    for &(t, s, k) in ops {
        if t == s {
            m.swap(0, t);
        } else {
            for c in 0..m[0].len() {
                m[t][c] += k * m[s][c];
            }
        }
    }
}

fn transpose(m: &Dense) -> Dense {
    (0..m[0].len())
        .map(|c| m.iter().map(|row| row[c]).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_matches_determinantal_divisors(m in dense(5)) {
        let snf = smith_normal_form(&to_sparse(&m, Ring::Integers)).unwrap();
        let got: Vec<i128> = snf.invariant_factors.iter().map(|d| i128::try_from(d.clone()).unwrap()).collect();
        prop_assert_eq!(got, invariant_factors_by_minors(&m));
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(
        (m, rops, cops) in dense(5).prop_flat_map(|m| {
            let (r, c) = (m.len(), m[0].len());
            (Just(m), unimodular(r), unimodular(c))
        })
    ) {
        let before = cokernel(&to_sparse(&m, Ring::Integers)).unwrap();
        let mut moved = m.clone();
        apply_rows(&mut moved, &rops);
        let mut t = transpose(&moved);
        apply_rows(&mut t, &cops);
        let moved = transpose(&t);
        prop_assert_eq!(cokernel(&to_sparse(&moved, Ring::Integers)).unwrap(), before);
    }

    #[test]
    fn field_ranks_follow_the_invariant_factors(m in dense(6)) {
        let snf = smith_normal_form(&to_sparse(&m, Ring::Integers)).unwrap();
        prop_assert_eq!(rank(&to_sparse(&m, Ring::Rationals)).unwrap(), snf.rank());
        prop_assert_eq!(rank(&to_sparse(&m, Ring::PrimeField(2))).unwrap(), rank_f2(&m));
        for p in [2u64, 3, 5, 7] {
            let expected = snf.invariant_factors.iter().filter(|d| !d.is_multiple_of(&BigInt::from(p))).count();
            prop_assert_eq!(rank(&to_sparse(&m, Ring::PrimeField(p))).unwrap(), expected, "p = {}", p);
        }
    }

    #[test]
    fn cokernel_rank_plus_rank_is_rows(m in dense(6)) {
        let sm = to_sparse(&m, Ring::Integers);
        prop_assert_eq!(cokernel(&sm).unwrap().free_rank() + rank(&sm).unwrap(), m.len());
    }

    #[test]
    fn transforms_diagonalize(m in dense(5)) {
        let sm = to_sparse(&m, Ring::Integers);
        let (snf, t) = smith_with_transforms(&sm).unwrap();
        let d = t.left.mul(&sm).unwrap().mul(&t.right).unwrap();
        for (r, c, v) in d.entries() {
            let pivot = t.pivots.iter().find(|(pr, pc, _)| (*pr, *pc) == (r, c));
            prop_assert!(pivot.is_some_and(|(_, _, pv)| Rational::from_integer(pv.clone()) == *v), "stray entry at ({}, {})", r, c);
        }
        prop_assert_eq!(t.pivots.len(), snf.rank());
    }

    #[test]
    fn kernel_lattice_is_a_kernel_basis(m in dense(5)) {
        let sm = to_sparse(&m, Ring::Integers);
        let ker = kernel_lattice(&sm).unwrap();
        prop_assert_eq!(ker.len(), m[0].len() - rank(&sm).unwrap());
        for v in &ker {
            for row in &m {
                let dot: BigInt = v.iter().map(|(c, x)| x * BigInt::from(row[*c])).sum();
                prop_assert_eq!(dot, BigInt::from(0));
            }
        }
    }
}

#[test]
fn two_by_two_examples() {
    // [[2, 4], [6, 8]]: gcd 2, det −8, so factors 2 and 4.
    let m = vec![vec![2, 4], vec![6, 8]];
    assert_eq!(invariant_factors_by_minors(&m), vec![2, 4]);
    let c = cokernel(&to_sparse(&m, Ring::Integers)).unwrap();
    assert_eq!(c.free_rank(), 0);
    assert_eq!(c.invariant_factors(), &[BigInt::from(2), BigInt::from(4)]);
}

#[test]
fn matrix_json_round_trip() {
    let m = to_sparse(&vec![vec![1, -2, 0], vec![0, 3, 5]], Ring::Integers);
    let back = SparseMatrix::from_json(&m.to_json()).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.sha256(), m.sha256());
}
