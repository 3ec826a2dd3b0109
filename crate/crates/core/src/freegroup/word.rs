use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A freely reduced word in the free group, stored as signed generator
/// indices: `j` is `x_j` and `-j` is `x_j⁻¹` (indices start at 1).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn empty() -> Self {
        FreeWord::default()
    }

    pub fn generator(j: usize) -> Self {
        assert!(j >= 1, "generator indices start at 1");
        FreeWord {
            letters: vec![j as i32],
        }
    }

    /// Reduces the given letter sequence. Panics on the invalid letter 0.
    pub fn from_letters<I: IntoIterator<Item = i32>>(letters: I) -> Self {
        let mut w = FreeWord::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: i32) {
        assert!(l != 0, "0 is not a generator letter");
        if self.letters.last() == Some(&-l) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &l in &other.letters {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> FreeWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = FreeWord::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.multiply(&base);
        }
        w
    }

    /// `c · self · c⁻¹`.
    pub fn conjugate_by(&self, c: &FreeWord) -> FreeWord {
        c.multiply(self).multiply(&c.inverse())
    }

    pub fn max_index(&self) -> usize {
        self.letters
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Splits the word as `u · c · u⁻¹` with `c` cyclically reduced.
    pub fn cyclic_reduction(&self) -> (FreeWord, FreeWord) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == -self.letters[n - 1 - k] {
            k += 1;
        }
        (
            FreeWord {
                letters: self.letters[..k].to_vec(),
            },
            FreeWord {
                letters: self.letters[k..n - k].to_vec(),
            },
        )
    }

    /// Exponent sum of each generator `x_1..x_rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Parses `x1 x3^-1 x2^2`; the empty string and `1` denote the identity.
    pub fn parse(s: &str) -> Result<FreeWord> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(FreeWord::empty());
        }
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            let body = token
                .strip_prefix('x')
                .ok_or_else(|| Error::Parse(format!("bad letter {token:?} in word {s:?}")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let idx: i32 = idx
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| Error::Parse(format!("bad generator index in {token:?}")))?;
            let exp: i32 = exp
                .parse()
                .ok()
                .filter(|&e| e != 0)
                .ok_or_else(|| Error::Parse(format!("bad exponent in {token:?}")))?;
            for _ in 0..exp.unsigned_abs() {
                letters.push(idx * exp.signum());
            }
        }
        Ok(FreeWord::from_letters(letters))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if *l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FreeWord::parse(s)
    }
}

impl Mul for &FreeWord {
    type Output = FreeWord;
    fn mul(self, rhs: &FreeWord) -> FreeWord {
        self.multiply(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> FreeWord {
        s.parse().unwrap()
    }

    #[test]
    fn multiply_and_inverse() {
        assert!(w("x1").multiply(&w("x1^-1")).is_empty());
        assert_eq!(w("x1 x2").multiply(&w("x2^-1 x3")), w("x1 x3"));
        assert_eq!(w("x1 x2^-1").inverse(), w("x2 x1^-1"));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let u = w("x1 x3^-1 x2^2");
        assert_eq!(u.letters(), &[1, -3, 2, 2]);
        assert_eq!(u.to_string(), "x1 x3^-1 x2 x2");
        assert_eq!(w(&u.to_string()), u);
        assert_eq!(w(""), FreeWord::empty());
        assert!(FreeWord::parse("y1").is_err());
        assert!(FreeWord::parse("x0").is_err());
    }

    #[test]
    fn cyclic_reduction_splits() {
        let (u, c) = w("x2 x1 x3 x2^-1").cyclic_reduction();
        assert_eq!(u, w("x2"));
        assert_eq!(c, w("x1 x3"));
        let (u, c) = w("x1").cyclic_reduction();
        assert!(u.is_empty());
        assert_eq!(c, w("x1"));
    }

    #[test]
    fn exponent_sums_count_signs() {
        assert_eq!(w("x1 x2 x1^-1 x2").exponent_sums(3), vec![0, 2, 0]);
    }
}
