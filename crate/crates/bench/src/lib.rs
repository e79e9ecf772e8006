//! Fixed inputs shared by the benchmarks.

use hf_core::exterior::Blade;
use hf_core::{Integer, Multivector};

/// Every blade of genus `g` with a small coefficient derived from its mask,
/// so runs are reproducible without an RNG.
pub fn dense(g: usize, salt: u32) -> Multivector<Integer> {
    let terms = (0u32..1 << (2 * g)).filter_map(|m| {
        let c = (m.wrapping_mul(2654435761).wrapping_add(salt) >> 28) as i64 - 8;
        (c != 0).then(|| (Blade::from_mask(m), Integer::from(c)))
    });
    Multivector::from_terms(g, terms).expect("masks fit the genus")
}

#[cfg(test)]
mod tests {
    #[test]
    fn dense_is_deterministic_and_full() {
        let a = super::dense(3, 1);
        assert_eq!(a, super::dense(3, 1));
        assert!(a.len() > 40);
    }
}
