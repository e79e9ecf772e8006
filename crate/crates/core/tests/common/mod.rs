//! Reference implementations used as oracles by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use hf_core::{Blade, Integer, Multivector};
use proptest::prelude::*;

/// Exterior algebra element as sorted 1-based index lists.
pub type Ref = BTreeMap<Vec<usize>, i64>;

/// `ω(e_a, e_b)` for 1-based indices.
pub fn symplectic(a: usize, b: usize) -> i64 {
    if a % 2 == 1 && b == a + 1 {
        1
    } else if b % 2 == 1 && a == b + 1 {
        -1
    } else {
        0
    }
}

/// Sort a word of indices, returning the permutation sign, or `None` on a
/// repeat.
pub fn sort_word(mut w: Vec<usize>) -> Option<(i64, Vec<usize>)> {
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((sign, w))
}

fn add(out: &mut Ref, k: Vec<usize>, c: i64) {
    let e = out.entry(k.clone()).or_insert(0);
    *e += c;
    if *e == 0 {
        out.remove(&k);
    }
}

pub fn ref_wedge(a: &Ref, b: &Ref) -> Ref {
    let mut out = Ref::new();
    for (x, c) in a {
        for (y, d) in b {
            let word: Vec<usize> = x.iter().chain(y).copied().collect();
            if let Some((s, w)) = sort_word(word) {
                add(&mut out, w, s * c * d);
            }
        }
    }
    out
}

/// `v∠(e_{j_1}…e_{j_p}) = Σ_t (−1)^{t−1} ω(e_{j_t}, v) e_{j_1}…ê_{j_t}…e_{j_p}`.
fn ref_vector_contract(v: usize, a: &Ref) -> Ref {
    let mut out = Ref::new();
    for (x, c) in a {
        for (t, &j) in x.iter().enumerate() {
            let w = symplectic(j, v);
            if w != 0 {
                let mut rest = x.clone();
                rest.remove(t);
                add(&mut out, rest, if t % 2 == 0 { w * c } else { -w * c });
            }
        }
    }
    out
}

/// `(v_1…v_q)∠x = v_1∠(v_2∠(…(v_q∠x)))`.
pub fn ref_contract(a: &Ref, x: &Ref) -> Ref {
    let mut out = Ref::new();
    for (word, c) in a {
        let mut acc = x.clone();
        for &v in word.iter().rev() {
            acc = ref_vector_contract(v, &acc);
        }
        for (k, d) in acc {
            add(&mut out, k, c * d);
        }
    }
    out
}

pub fn to_ref(m: &Multivector<Integer>) -> Ref {
    m.terms()
        .map(|(b, c)| {
            (
                b.indices(),
                i64::try_from(c.clone()).expect("small coefficient"),
            )
        })
        .collect()
}

/// Random multivector of genus `g` with small coefficients.
pub fn multivector(g: usize) -> impl Strategy<Value = Multivector<Integer>> {
    prop::collection::vec((0u32..1 << (2 * g), -3i64..=3), 0..6).prop_map(move |terms| {
        let mut m = Multivector::zero(g);
        for (mask, c) in terms {
            m.add_term(Blade::from_mask(mask), Integer::from(c));
        }
        m
    })
}

/// Random homogeneous multivector of genus `g` and grade `p`.
pub fn homogeneous(g: usize, p: usize) -> impl Strategy<Value = Multivector<Integer>> {
    multivector(g).prop_map(move |m| {
        // Fold every blade onto grade p by toggling bits from the bottom.
        let mut out = Multivector::zero(g);
        for (b, c) in m.terms() {
            let mut mask = b.mask();
            let mut bit = 0;
            while (mask.count_ones() as usize) < p {
                mask |= 1 << bit;
                bit += 1;
            }
            while (mask.count_ones() as usize) > p {
                mask &= mask - 1;
            }
            out.add_term(Blade::from_mask(mask), c.clone());
        }
        out
    })
}

pub fn small(v: i64) -> Integer {
    Integer::from(v)
}
