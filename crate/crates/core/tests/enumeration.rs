use num_bigint::BigUint;
use proptest::prelude::*;

use schottky_core::enumeration::{
    count_report, enumerate_types, m_g, m_g_oracle, q_multiset, t_gamma, Signature,
};
use schottky_core::par::Execution;

/// Multisets of size `n` from `l` labels, by brute force over sorted tuples.
fn multisets(l: u64, n: u32) -> u64 {
    fn go(start: u64, l: u64, left: u32) -> u64 {
        if left == 0 {
            return 1;
        }
        (start..l).map(|i| go(i, l, left - 1)).sum()
    }
    go(0, l, n)
}

proptest! {
    #[test]
    fn q_multiset_counts_multisets(l in 0u64..8, n in 0u32..6) {
        prop_assert_eq!(q_multiset(l, n), BigUint::from(multisets(l, n)));
    }

    #[test]
    fn signatures_round_trip(g in 0u32..8, idx in 0usize..500) {
        let sigs = Signature::all_of_rank(g);
        let s = &sigs[idx % sigs.len()];
        prop_assert_eq!(s.validate().unwrap(), g);
        let back: Signature = s.to_string().parse().unwrap();
        prop_assert_eq!(&back, s);
    }
}

#[test]
fn counts_agree_with_the_oracle_and_the_type_list() {
    for g in 0..=6 {
        let oracle = m_g_oracle(g, 12, Execution::Sequential).unwrap();
        assert_eq!(m_g(g), oracle, "g = {g}");
        let types = enumerate_types(g, 12, 1_000_000).unwrap();
        assert_eq!(BigUint::from(types.len()), oracle, "g = {g}");
        assert_eq!(count_report(g).m_g, oracle.to_string());
    }
}

#[test]
fn real_schottky_counts() {
    let got: Vec<BigUint> = (1..=4).map(t_gamma).collect();
    assert_eq!(got, [2u32, 6, 40, 420].map(BigUint::from));
}

#[test]
fn execution_modes_agree() {
    for g in 0..=8 {
        assert_eq!(
            m_g_oracle(g, 12, Execution::Sequential).unwrap(),
            m_g_oracle(g, 12, Execution::Parallel).unwrap()
        );
    }
}

#[test]
fn bound_is_enforced() {
    assert!(m_g_oracle(13, 12, Execution::Sequential).is_err());
}
