use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Factor counts `(a, b, c, d, e; γ₁..γ_e)` of an extended Schottky group:
/// reflections, imaginary reflections, loxodromics, glide-reflections and
/// real Schottky factors with their ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub e: u32,
    pub gammas: Vec<u32>,
}

impl Signature {
    /// Builds a signature with `e = gammas.len()`; the ranks are sorted.
    pub fn new(a: u32, b: u32, c: u32, d: u32, mut gammas: Vec<u32>) -> Self {
        gammas.sort_unstable();
        Signature {
            a,
            b,
            c,
            d,
            e: gammas.len() as u32,
            gammas,
        }
    }

    /// Rank `a + b + 2c + 2d + e − 1 + Σγ`.
    pub fn validate(&self) -> Result<u32> {
        if self.gammas.len() != self.e as usize {
            return Err(Error::InvalidSignature(format!(
                "e = {} but {} ranks given",
                self.e,
                self.gammas.len()
            )));
        }
        if self.gammas.contains(&0) {
            return Err(Error::InvalidSignature(
                "real factor ranks must be positive".into(),
            ));
        }
        if self.gammas.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSignature(
                "real factor ranks must be non-decreasing".into(),
            ));
        }
        if self.a + self.b + self.d + self.e == 0 {
            return Err(Error::NotExtended);
        }
        let g =
            self.a as i64 + self.b as i64 + 2 * self.c as i64 + 2 * self.d as i64 + self.e as i64
                - 1
                + self.gammas.iter().map(|&x| x as i64).sum::<i64>();
        if g < 0 {
            return Err(Error::NegativeRank(g));
        }
        Ok(g as u32)
    }

    /// `b + d > 0 ⇒ c = 0`.
    pub fn is_normal_form(&self) -> bool {
        self.b + self.d == 0 || self.c == 0
    }

    pub fn real_rank_sum(&self) -> u32 {
        self.gammas.iter().sum()
    }

    /// All valid signatures of rank `g`, normal form or not, in
    /// lexicographic order of `(a, b, c, d, e, γ)`.
    pub fn all_of_rank(g: u32) -> Vec<Signature> {
        let budget = g + 1;
        let mut out = Vec::new();
        for a in 0..=budget {
            for b in 0..=budget - a {
                for c in 0..=(budget - a - b) / 2 {
                    for d in 0..=(budget - a - b - 2 * c) / 2 {
                        let rest = budget - a - b - 2 * c - 2 * d;
                        for parts in partitions_min2(rest) {
                            let gammas: Vec<u32> = parts.iter().map(|p| p - 1).collect();
                            let s = Signature::new(a, b, c, d, gammas);
                            if s.a + s.b + s.d + s.e > 0 {
                                out.push(s);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn parse(text: &str) -> Result<Signature> {
        let bad = || Error::Parse(format!("expected (a,b,c,d,e;g1,...), got {text:?}"));
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (head, tail) = inner.split_once(';').unwrap_or((inner, ""));
        let nums = |s: &str| -> Result<Vec<u32>> {
            s.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty() && *t != "-" && *t != "−")
                .map(|t| t.parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        let head = nums(head)?;
        let [a, b, c, d, e] = head[..] else {
            return Err(bad());
        };
        let gammas = nums(tail)?;
        let s = Signature {
            a,
            b,
            c,
            d,
            e,
            gammas,
        };
        s.validate()?;
        Ok(s)
    }
}

/// Non-decreasing sequences of integers `≥ 2` summing to `n`.
fn partitions_min2(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in min..=n {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 2, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs: Vec<String> = self.gammas.iter().map(u32::to_string).collect();
        write!(
            f,
            "({},{},{},{},{};{})",
            self.a,
            self.b,
            self.c,
            self.d,
            self.e,
            gs.join(",")
        )
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Signature::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_formula_examples() {
        assert_eq!(Signature::new(1, 0, 0, 0, vec![1]).validate(), Ok(2));
        assert_eq!(
            Signature::new(0, 0, 1, 0, vec![]).validate(),
            Err(Error::NotExtended)
        );
        assert_eq!(Signature::new(0, 0, 0, 2, vec![]).validate(), Ok(3));
        assert_eq!(Signature::new(1, 0, 0, 0, vec![]).validate(), Ok(0));
    }

    #[test]
    fn parse_and_display() {
        let s: Signature = "(0,0,0,2,0;)".parse().unwrap();
        assert_eq!(s, Signature::new(0, 0, 0, 2, vec![]));
        assert_eq!(s.to_string(), "(0,0,0,2,0;)");
        let t: Signature = "(1,0,0,0,1;1)".parse().unwrap();
        assert_eq!(t.gammas, vec![1]);
        assert_eq!(
            "(0,0,0,0,1;2)".parse::<Signature>().unwrap().validate(),
            Ok(2)
        );
        assert_eq!("(3,0,0,0,0;-)".parse::<Signature>().unwrap().a, 3);
        assert!("(1,0,0,0,2;1)".parse::<Signature>().is_err());
        assert!("(1,0,0,0)".parse::<Signature>().is_err());
    }

    #[test]
    fn rank_lists_validate() {
        for g in 0..6 {
            for s in Signature::all_of_rank(g) {
                assert_eq!(s.validate(), Ok(g), "{s}");
            }
        }
        let low: Vec<String> = Signature::all_of_rank(0)
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(low, vec!["(0,1,0,0,0;)", "(1,0,0,0,0;)"]);
    }
}
