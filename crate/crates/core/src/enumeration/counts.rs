//! Closed-form counts of topological types of extended Schottky groups.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

/// `e` real factors of ranks `γ₁ ≤ … ≤ γ_e` (the `e` is the length).
pub type RealRanks = Vec<u32>;

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Rising factorial `x (x+1) … (x+n−1)`.
fn rising(x: &BigUint, n: u32) -> BigUint {
    (0..n).fold(BigUint::one(), |acc, k| acc * (x + k))
}

/// Number of real Schottky types of rank `γ`: `2 (2γ−1)! / γ!`.
pub fn t_gamma(gamma: u32) -> BigUint {
    assert!(gamma >= 1, "rank must be positive");
    factorial(2 * gamma - 1) * 2u32 / factorial(gamma)
}

/// Multisets of size `n` from `L` labels: `L (L+1) … (L+n−1) / n!`.
pub fn q_multiset(labels: u64, n: u32) -> BigUint {
    rising(&BigUint::from(labels), n) / factorial(n)
}

/// Tuples `(e; γ₁..γ_e)` with `e ≥ 1`, `1 ≤ γ₁ ≤ … ≤ γ_e` and
/// `e + Σγ ≤ g + 1`, ordered by `e`, then lexicographically.
pub fn delta_set(g: u32) -> Vec<RealRanks> {
    let budget = g + 1;
    let mut out = Vec::new();
    for e in 1..=budget / 2 {
        let mut cur = Vec::with_capacity(e as usize);
        rank_sequences(e, budget - e, 1, &mut cur, &mut out);
    }
    out
}

/// Non-decreasing sequences of `len` ranks `≥ min` with sum at most `room`.
fn rank_sequences(len: u32, room: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<RealRanks>) {
    if len == 0 {
        out.push(cur.clone());
        return;
    }
    let mut gamma = min;
    while gamma * len <= room {
        cur.push(gamma);
        rank_sequences(len - 1, room - gamma, gamma, cur, out);
        cur.pop();
        gamma += 1;
    }
}

/// `g_f = g − e − Σγ`, which is at least −1 on the delta set.
pub fn residual_rank(g: u32, f: &[u32]) -> i64 {
    g as i64 - f.len() as i64 - f.iter().map(|&x| x as i64).sum::<i64>()
}

/// Number of non-real parts `(a, b, c, d)` compatible with `f`, summed over
/// the three shapes: `b = d = 0` gives `1 + ⌊(g_f+1)/2⌋`; `d = 0 < b` gives
/// `1 + g_f`; `d > 0` gives `⌊(g_f+1)/2⌋ ⌊(g_f+2)/2⌋`.
pub fn n_f(g: u32, f: &[u32]) -> BigUint {
    let gf = residual_rank(g, f);
    assert!(gf >= -1, "f is not in the delta set of rank {g}");
    let half = (gf + 1).div_euclid(2);
    let v = (1 + half) + (1 + gf) + half * (gf + 2).div_euclid(2);
    BigUint::from(v as u64)
}

/// The single-product closed form `⌊(g_f+3)/2⌋ ⌊(g_f+5)/2⌋ − δ_f`
/// (`δ_f = 1` for odd `g_f`, including −1). It agrees with [`n_f`] for odd
/// `g_f` and for `g_f = 0`, and falls short by `g_f/2` for even `g_f ≥ 2`.
pub fn n_f_closed_form(g: u32, f: &[u32]) -> BigUint {
    let gf = residual_rank(g, f);
    assert!(gf >= -1, "f is not in the delta set of rank {g}");
    let delta = if gf.rem_euclid(2) == 1 { 1 } else { 0 };
    let v = (gf + 3).div_euclid(2) * (gf + 5).div_euclid(2) - delta;
    BigUint::from(v as u64)
}

/// `m_g` with [`n_f_closed_form`] in place of [`n_f`].
pub fn m_g_closed_form(g: u32) -> BigUint {
    g0_count(g)
        + delta_set(g)
            .iter()
            .map(|f| n_f_closed_form(g, f) * b_f(f))
            .fold(BigUint::zero(), |a, b| a + b)
}

/// Multisets of real factors with the given ranks: for each run of `l`
/// equal ranks `γ`, multisets of size `l` over `T_γ` labels.
pub fn b_f(f: &[u32]) -> BigUint {
    let mut total = BigUint::one();
    let mut i = 0;
    while i < f.len() {
        let mut j = i;
        while j < f.len() && f[j] == f[i] {
            j += 1;
        }
        let l = (j - i) as u32;
        total *= rising(&t_gamma(f[i]), l) / factorial(l);
        i = j;
    }
    total
}

/// Types without real factors: `⌊(g+4)/2⌋ ⌊(g+5)/2⌋ − 2`.
pub fn g0_count(g: u32) -> BigUint {
    let g = g as u64;
    BigUint::from(((g + 4) / 2) * ((g + 5) / 2) - 2)
}

/// Total number of topological types of extended Schottky groups of rank `g`.
pub fn m_g(g: u32) -> BigUint {
    g0_count(g) + real_part_sum(g)
}

/// `Σ_{f ∈ Δ_g} N_f B_f`.
pub fn real_part_sum(g: u32) -> BigUint {
    delta_set(g)
        .iter()
        .map(|f| n_f(g, f) * b_f(f))
        .fold(BigUint::zero(), |a, b| a + b)
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaEntry {
    pub e: usize,
    pub gammas: Vec<u32>,
    pub n_f: String,
    pub n_f_closed_form: String,
    pub b_f: String,
}

/// Everything that goes into `m_g`, with big integers as decimal strings.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub g: u32,
    pub m_g: String,
    pub g0: String,
    pub real_part: String,
    pub m_g_closed_form: String,
    pub delta_set: Vec<DeltaEntry>,
}

pub fn count_report(g: u32) -> CountReport {
    let delta_set = delta_set(g)
        .into_iter()
        .map(|f| DeltaEntry {
            e: f.len(),
            n_f: n_f(g, &f).to_string(),
            n_f_closed_form: n_f_closed_form(g, &f).to_string(),
            b_f: b_f(&f).to_string(),
            gammas: f,
        })
        .collect();
    CountReport {
        g,
        m_g: m_g(g).to_string(),
        g0: g0_count(g).to_string(),
        real_part: real_part_sum(g).to_string(),
        m_g_closed_form: m_g_closed_form(g).to_string(),
        delta_set,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn t_gamma_values() {
        assert_eq!(t_gamma(1), big(2));
        assert_eq!(t_gamma(2), big(6));
        assert_eq!(t_gamma(3), big(40));
    }

    #[test]
    fn q_values() {
        assert_eq!(q_multiset(7, 1), big(7));
        assert_eq!(q_multiset(7, 2), big(28));
        // Oracle: count pairs i ≤ j from three labels.
        let pairs = (0..3).flat_map(|i| (i..3).map(move |j| (i, j))).count() as u64;
        assert_eq!(q_multiset(3, 2), big(pairs));
        assert_eq!(q_multiset(5, 0), big(1));
    }

    #[test]
    fn delta_examples() {
        assert!(delta_set(0).is_empty());
        assert_eq!(delta_set(1), vec![vec![1]]);
        assert_eq!(delta_set(2), vec![vec![1], vec![2]]);
        assert_eq!(delta_set(3), vec![vec![1], vec![2], vec![3], vec![1, 1]]);
    }

    #[test]
    fn n_f_examples() {
        assert_eq!(n_f(2, &[1]), big(2));
        assert_eq!(n_f(2, &[2]), big(1));
        assert_eq!(n_f(3, &[1]), big(5));
        for (g, f) in [(2, vec![1]), (2, vec![2]), (3, vec![1]), (5, vec![1])] {
            assert_eq!(n_f(g, &f), n_f_closed_form(g, &f));
        }
        // g_f = 2: (3,0,0,0) (1,0,1,0) (2,1,0,0) (1,2,0,0) (0,3,0,0) (1,0,0,1) (0,1,0,1)
        assert_eq!(n_f(4, &[1]), big(7));
        assert_eq!(n_f_closed_form(4, &[1]), big(6));
    }

    #[test]
    fn b_f_examples() {
        assert_eq!(b_f(&[1]), big(2));
        assert_eq!(b_f(&[1, 1]), big(3));
        assert_eq!(b_f(&[1, 2]), big(12));
    }

    #[test]
    fn g0_examples() {
        assert_eq!(g0_count(0), big(2));
        assert_eq!(g0_count(1), big(4));
        assert_eq!(g0_count(2), big(7));
    }

    #[test]
    fn m_g_examples() {
        assert_eq!(m_g(0), big(2));
        assert_eq!(m_g(1), big(6));
        assert_eq!(m_g(2), big(17));
    }
}
