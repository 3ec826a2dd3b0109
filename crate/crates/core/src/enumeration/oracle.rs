//! Brute-force counting and explicit listing of topological types, kept
//! independent of the closed forms in `counts`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::counts::{m_g, t_gamma};
use super::Signature;
use crate::error::{Error, Result};
use crate::par::{self, Execution};

/// A real Schottky factor of rank `rank`, identified by an abstract label in
/// `1..=T_rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RealFactor {
    pub rank: u32,
    pub label: u64,
}

/// A topological type: counts of reflections, imaginary reflections,
/// loxodromics and glide-reflections, plus a multiset of real factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TopType {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub real_factors: Vec<RealFactor>,
}

impl TopType {
    pub fn signature(&self) -> Signature {
        Signature::new(
            self.a,
            self.b,
            self.c,
            self.d,
            self.real_factors.iter().map(|f| f.rank).collect(),
        )
    }

    /// Short description of the factors, e.g. `reflection` for `(1,0,0,0)`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        let mut push = |n: u32, what: &str| {
            if n == 1 {
                parts.push(what.to_string());
            } else if n > 1 {
                parts.push(format!("{n} x {what}"));
            }
        };
        push(self.a, "reflection");
        push(self.b, "imaginary-reflection");
        push(self.c, "loxodromic");
        push(self.d, "glide-reflection");
        for f in &self.real_factors {
            parts.push(format!("real-schottky(rank {}, label {})", f.rank, f.label));
        }
        parts.join(" * ")
    }
}

impl fmt::Display for TopType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signature())?;
        if !self.real_factors.is_empty() {
            let labels: Vec<String> = self
                .real_factors
                .iter()
                .map(|r| format!("{}:{}", r.rank, r.label))
                .collect();
            write!(f, " [{}]", labels.join(" "))?;
        }
        Ok(())
    }
}

/// Bordered-surface type `(±; h; m)` of a real Schottky group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RealSchottkyType {
    pub orientable: bool,
    pub h: u32,
    pub m: u32,
}

impl RealSchottkyType {
    pub fn rank(&self) -> u32 {
        if self.orientable {
            2 * self.h + self.m - 1
        } else {
            self.h + self.m - 1
        }
    }
}

impl fmt::Display for RealSchottkyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.orientable { '+' } else { '-' };
        write!(f, "({sign};{};{})", self.h, self.m)
    }
}

/// All `(+;h;m)` with `2h+m−1 = γ` and `(−;h;m)` with `h ≥ 1`, `h+m−1 = γ`.
pub fn refined_types(gamma: u32) -> Vec<RealSchottkyType> {
    let mut out = Vec::new();
    for h in 0..=gamma / 2 {
        out.push(RealSchottkyType {
            orientable: true,
            h,
            m: gamma + 1 - 2 * h,
        });
    }
    for h in 1..=gamma {
        out.push(RealSchottkyType {
            orientable: false,
            h,
            m: gamma + 1 - h,
        });
    }
    out
}

/// The non-real parts `(a, b, c, d)` with `a + b + 2c + 2d = budget` in
/// normal form (`b + d > 0 ⇒ c = 0`).
fn nonreal_parts(budget: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in 0..=budget {
        for b in 0..=budget - a {
            let rest = budget - a - b;
            if !rest.is_multiple_of(2) {
                continue;
            }
            for c in 0..=rest / 2 {
                let d = rest / 2 - c;
                if b + d > 0 && c > 0 {
                    continue;
                }
                out.push([a, b, c, d]);
            }
        }
    }
    out
}

/// Non-decreasing rank sequences with `Σ(γ+1) = room`.
fn real_rank_partitions(room: u32) -> Vec<Vec<u32>> {
    fn rec(room: u32, min_part: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if room == 0 {
            out.push(cur.clone());
            return;
        }
        for part in min_part..=room {
            cur.push(part - 1);
            rec(room - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(room, 2, &mut Vec::new(), &mut out);
    out
}

/// Multisets of size `l` from `t` labels, by Burnside over the symmetric
/// group: `(1/l!) Σ_λ |class(λ)| t^{parts(λ)}`.
fn multisets_by_cycle_index(t: &BigUint, l: u32) -> BigUint {
    fn rec(
        remaining: u32,
        max_part: u32,
        mult: &mut Vec<u32>,
        t: &BigUint,
        l: u32,
        acc: &mut BigUint,
    ) {
        if remaining == 0 {
            // |class| = l! / Π i^{m_i} m_i!
            let mut denom = BigUint::one();
            let mut parts = 0u32;
            for (i, &m) in mult.iter().enumerate() {
                let i = i as u32 + 1;
                parts += m;
                denom *= BigUint::from(i).pow(m);
                denom *= (1..=m).fold(BigUint::one(), |x, k| x * k);
            }
            let fact = (1..=l).fold(BigUint::one(), |x, k| x * k);
            *acc += fact / denom * t.pow(parts);
            return;
        }
        for part in (1..=max_part.min(remaining)).rev() {
            mult[part as usize - 1] += 1;
            rec(remaining - part, part, mult, t, l, acc);
            mult[part as usize - 1] -= 1;
        }
    }
    let mut acc = BigUint::zero();
    let mut mult = vec![0u32; l as usize];
    rec(l, l, &mut mult, t, l, &mut acc);
    let fact = (1..=l).fold(BigUint::one(), |x, k| x * k);
    acc / fact
}

fn check_bound(g: u32, bound: u32) -> Result<()> {
    if g > bound {
        Err(Error::BoundExceeded {
            requested: g,
            bound,
        })
    } else {
        Ok(())
    }
}

/// Counts types by walking every non-real part and every rank partition of
/// the remaining budget, counting label multisets per run of equal ranks.
pub fn m_g_oracle(g: u32, bound: u32, exec: Execution) -> Result<BigUint> {
    check_bound(g, bound)?;
    let budget = g + 1;
    let parts = nonreal_parts_upto(budget);
    let counts = par::map(exec, &parts, |&[a, b, c, d]| {
        let room = budget - a - b - 2 * c - 2 * d;
        let mut total = BigUint::zero();
        for ranks in real_rank_partitions(room) {
            if a + b + d + ranks.len() as u32 == 0 {
                continue;
            }
            let mut product = BigUint::one();
            for (gamma, l) in runs(&ranks) {
                product *= multisets_by_cycle_index(&t_gamma(gamma), l);
            }
            total += product;
        }
        total
    });
    Ok(counts.into_iter().fold(BigUint::zero(), |x, y| x + y))
}

fn nonreal_parts_upto(budget: u32) -> Vec<[u32; 4]> {
    (0..=budget).flat_map(nonreal_parts).collect()
}

fn runs(ranks: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &r in ranks {
        match out.last_mut() {
            Some((g, l)) if *g == r => *l += 1,
            _ => out.push((r, 1)),
        }
    }
    out
}

/// The explicit list of types of rank `g` with abstract real-factor labels,
/// sorted. Fails when more than `cap` types would be produced.
pub fn enumerate_types(g: u32, bound: u32, cap: usize) -> Result<Vec<TopType>> {
    check_bound(g, bound)?;
    if m_g(g) > BigUint::from(cap) {
        return Err(Error::ExplosionGuard { cap });
    }
    let budget = g + 1;
    let mut out = Vec::new();
    for [a, b, c, d] in nonreal_parts_upto(budget) {
        let room = budget - a - b - 2 * c - 2 * d;
        for ranks in real_rank_partitions(room) {
            if a + b + d + ranks.len() as u32 == 0 {
                continue;
            }
            let mut factor_lists: Vec<Vec<RealFactor>> = vec![Vec::new()];
            for (gamma, l) in runs(&ranks) {
                let t: u64 = t_gamma(gamma)
                    .try_into()
                    .map_err(|_| Error::ExplosionGuard { cap })?;
                let choices = label_multisets(t, l);
                factor_lists = factor_lists
                    .into_iter()
                    .flat_map(|prefix| {
                        choices.iter().map(move |labels| {
                            let mut v = prefix.clone();
                            v.extend(
                                labels
                                    .iter()
                                    .map(|&label| RealFactor { rank: gamma, label }),
                            );
                            v
                        })
                    })
                    .collect();
            }
            for real_factors in factor_lists {
                out.push(TopType {
                    a,
                    b,
                    c,
                    d,
                    real_factors,
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Non-decreasing label sequences of length `l` over `1..=t`.
fn label_multisets(t: u64, l: u32) -> Vec<Vec<u64>> {
    fn rec(t: u64, l: u32, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if l == 0 {
            out.push(cur.clone());
            return;
        }
        for x in min..=t {
            cur.push(x);
            rec(t, l - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(t, l, 1, &mut Vec::new(), &mut out);
    out
}

/// Per rank: the abstract label count `T_γ` next to the number of refined
/// `(±;h;m)` types. The two are reported side by side, not equated.
#[derive(Debug, Clone, Serialize)]
pub struct Granularity {
    pub rank: u32,
    pub abstract_labels: String,
    pub refined: Vec<String>,
}

pub fn granularity(gamma: u32) -> Granularity {
    Granularity {
        rank: gamma,
        abstract_labels: t_gamma(gamma).to_string(),
        refined: refined_types(gamma).iter().map(|t| t.to_string()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::counts::{g0_count, n_f};

    #[test]
    fn oracle_small_values() {
        let seq = Execution::Sequential;
        assert_eq!(m_g_oracle(0, 12, seq).unwrap(), BigUint::from(2u32));
        assert_eq!(m_g_oracle(2, 12, seq).unwrap(), BigUint::from(17u32));
        assert_eq!(m_g_oracle(5, 12, seq).unwrap(), m_g(5));
        assert!(matches!(
            m_g_oracle(13, 12, seq),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn cycle_index_matches_stars_and_bars() {
        // Oracle: explicit enumeration of non-decreasing sequences.
        for t in 1..6u64 {
            for l in 0..5u32 {
                let direct = label_multisets(t, l).len();
                assert_eq!(
                    multisets_by_cycle_index(&BigUint::from(t), l),
                    BigUint::from(direct)
                );
            }
        }
    }

    #[test]
    fn nonreal_counts_match_closed_forms() {
        // g0: parts filling the whole budget.
        for g in 0..10 {
            let direct = nonreal_parts(g + 1)
                .iter()
                .filter(|p| p[0] + p[1] + p[3] > 0)
                .count();
            assert_eq!(BigUint::from(direct), g0_count(g));
        }
        // n_f: parts filling budget − e − Σγ, any of them allowed.
        assert_eq!(BigUint::from(nonreal_parts(1).len()), n_f(2, &[1]));
        assert_eq!(BigUint::from(nonreal_parts(0).len()), n_f(2, &[2]));
        assert_eq!(BigUint::from(nonreal_parts(2).len()), n_f(3, &[1]));
    }

    #[test]
    fn type_lists() {
        let t0 = enumerate_types(0, 12, 1000).unwrap();
        assert_eq!(t0.len(), 2);
        assert_eq!(t0[0].describe(), "imaginary-reflection");
        assert_eq!(t0[1].describe(), "reflection");
        assert_eq!(enumerate_types(1, 12, 1000).unwrap().len(), 6);
        assert_eq!(enumerate_types(2, 12, 1000).unwrap().len(), 17);
        for g in 0..6 {
            let types = enumerate_types(g, 12, 1_000_000).unwrap();
            assert_eq!(BigUint::from(types.len()), m_g(g));
            for t in &types {
                assert_eq!(t.signature().validate(), Ok(g));
            }
        }
        assert!(matches!(
            enumerate_types(9, 12, 10),
            Err(Error::ExplosionGuard { .. })
        ));
    }

    #[test]
    fn refined_type_counts() {
        let r1: Vec<String> = refined_types(1).iter().map(|t| t.to_string()).collect();
        assert_eq!(r1, vec!["(+;0;2)", "(-;1;1)"]);
        let counts: Vec<usize> = (1..=4).map(|g| refined_types(g).len()).collect();
        assert_eq!(counts, vec![2, 4, 5, 7]);
        for g in 1..8 {
            assert!(refined_types(g).iter().all(|t| t.rank() == g));
        }
    }
}
