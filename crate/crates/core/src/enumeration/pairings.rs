//! Brute-force counts of directed pairings of `2γ` circles placed around a
//! common circle, used to check the real Schottky type count.

use std::collections::HashSet;

use serde::Serialize;

/// A directed perfect matching of `0..2γ`: each pair is (source, target).
type Pairing = Vec<(u8, u8)>;

/// Every directed perfect matching of `2γ` points.
pub fn directed_pairings(gamma: u32) -> Vec<Pairing> {
    fn rec(free: &[u8], cur: &mut Pairing, out: &mut Vec<Pairing>) {
        let Some(&first) = free.first() else {
            let mut p = cur.clone();
            p.sort_unstable();
            out.push(p);
            return;
        };
        for k in 1..free.len() {
            let partner = free[k];
            let rest: Vec<u8> = free
                .iter()
                .copied()
                .filter(|&x| x != first && x != partner)
                .collect();
            for pair in [(first, partner), (partner, first)] {
                cur.push(pair);
                rec(&rest, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    let free: Vec<u8> = (0..2 * gamma as u8).collect();
    rec(&free, &mut Vec::new(), &mut out);
    out
}

/// Directed pairings divided by `γ`, the quotient taken in the closed-form
/// count. `None` if the division is not exact.
pub fn pairings_over_gamma(gamma: u32) -> Option<u64> {
    let n = directed_pairings(gamma).len() as u64;
    n.is_multiple_of(gamma as u64).then(|| n / gamma as u64)
}

fn transform(p: &Pairing, n: u8, f: impl Fn(u8) -> u8) -> Pairing {
    let mut q: Pairing = p.iter().map(|&(s, t)| (f(s) % n, f(t) % n)).collect();
    q.sort_unstable();
    q
}

fn orbit_count(gamma: u32, maps: &[Box<dyn Fn(u8) -> u8>]) -> usize {
    let n = 2 * gamma as u8;
    let canon: HashSet<Pairing> = directed_pairings(gamma)
        .iter()
        .map(|p| {
            maps.iter()
                .map(|f| transform(p, n, f))
                .min()
                .expect("group is nonempty")
        })
        .collect();
    canon.len()
}

/// Orbit counts of directed pairings under several symmetry groups of the
/// `2γ` positions. Exploratory only: none of these is asserted to equal the
/// closed-form count.
#[derive(Debug, Clone, Serialize)]
pub struct PairingReport {
    pub gamma: u32,
    pub directed_pairings: usize,
    pub divided_by_gamma: Option<u64>,
    pub closed_form: String,
    pub rotation_orbits: usize,
    pub even_rotation_orbits: usize,
    pub dihedral_orbits: usize,
}

pub fn pairing_report(gamma: u32) -> PairingReport {
    let n = 2 * gamma as u8;
    let rotations: Vec<Box<dyn Fn(u8) -> u8>> = (0..n)
        .map(|k| Box::new(move |i: u8| i + k) as Box<dyn Fn(u8) -> u8>)
        .collect();
    let even: Vec<Box<dyn Fn(u8) -> u8>> = (0..n)
        .step_by(2)
        .map(|k| Box::new(move |i: u8| i + k) as Box<dyn Fn(u8) -> u8>)
        .collect();
    let mut dihedral: Vec<Box<dyn Fn(u8) -> u8>> = (0..n)
        .map(|k| Box::new(move |i: u8| i + k) as Box<dyn Fn(u8) -> u8>)
        .collect();
    dihedral.extend((0..n).map(|k| Box::new(move |i: u8| (n - i) + k) as Box<dyn Fn(u8) -> u8>));
    PairingReport {
        gamma,
        directed_pairings: directed_pairings(gamma).len(),
        divided_by_gamma: pairings_over_gamma(gamma),
        closed_form: super::t_gamma(gamma).to_string(),
        rotation_orbits: orbit_count(gamma, &rotations),
        even_rotation_orbits: orbit_count(gamma, &even),
        dihedral_orbits: orbit_count(gamma, &dihedral),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_pairing_counts() {
        // (2γ−1)!! matchings, two directions per pair.
        assert_eq!(directed_pairings(1).len(), 2);
        assert_eq!(directed_pairings(2).len(), 12);
        assert_eq!(directed_pairings(3).len(), 120);
    }

    #[test]
    fn quotient_matches_closed_form() {
        for gamma in 1..=4 {
            assert_eq!(
                pairings_over_gamma(gamma).map(|v| v.to_string()),
                Some(super::super::t_gamma(gamma).to_string())
            );
        }
    }

    #[test]
    fn report_is_consistent() {
        let r = pairing_report(2);
        assert_eq!(r.directed_pairings, 12);
        assert!(r.dihedral_orbits <= r.rotation_orbits);
        assert!(r.rotation_orbits <= r.even_rotation_orbits);
    }
}
