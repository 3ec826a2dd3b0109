//! Small square integer matrices: products, determinants, characteristic
//! polynomials and Smith invariants.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds from rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.n.max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&i| a[i * n + k] != 0) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] =
                        (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        sign * a[n * n - 1]
    }

    pub fn trace(&self) -> i128 {
        (0..self.n).map(|i| self.get(i, i) as i128).sum()
    }

    /// Coefficients of `det(tI − M)`, constant term first.
    pub fn char_poly(&self) -> Vec<i128> {
        // Faddeev–LeVerrier; every division is exact over the integers.
        let n = self.n;
        let m: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut coeffs = vec![0i128; n + 1];
        coeffs[n] = 1;
        let mut mk = vec![0i128; n * n];
        for k in 1..=n {
            let mut next = vec![0i128; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0i128;
                    for l in 0..n {
                        s += m[i * n + l] * mk[l * n + j];
                    }
                    next[i * n + j] = s;
                }
                next[i * n + i] += coeffs[n - k + 1];
            }
            mk = next;
            let mut tr = 0i128;
            for i in 0..n {
                for l in 0..n {
                    tr += m[i * n + l] * mk[l * n + i];
                }
            }
            coeffs[n - k] = -tr / k as i128;
        }
        coeffs
    }

    /// Invariant factors of the Smith normal form (non-negative, each
    /// dividing the next; zeros last).
    pub fn smith_invariants(&self) -> Vec<i128> {
        let n = self.n;
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let at = |i: usize, j: usize| i * n + j;
        for t in 0..n {
            // Pivot: smallest nonzero entry in the trailing block.
            loop {
                let pivot = (t..n)
                    .flat_map(|i| (t..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| a[at(i, j)] != 0)
                    .min_by_key(|&(i, j)| a[at(i, j)].abs());
                let Some((pi, pj)) = pivot else {
                    break;
                };
                for j in 0..n {
                    a.swap(at(t, j), at(pi, j));
                }
                for i in 0..n {
                    a.swap(at(i, t), at(i, pj));
                }
                let p = a[at(t, t)];
                let mut clean = true;
                for i in t + 1..n {
                    let q = a[at(i, t)] / p;
                    for j in t..n {
                        a[at(i, j)] -= q * a[at(t, j)];
                    }
                    clean &= a[at(i, t)] == 0;
                }
                for j in t + 1..n {
                    let q = a[at(t, j)] / p;
                    for i in t..n {
                        a[at(i, j)] -= q * a[at(i, t)];
                    }
                    clean &= a[at(t, j)] == 0;
                }
                if !clean {
                    continue;
                }
                // Enforce divisibility of the trailing block by the pivot.
                let bad = (t + 1..n)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[at(i, j)] % p != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..n {
                            a[at(t, j)] += a[at(i, j)];
                        }
                    }
                    None => break,
                }
            }
        }
        let mut d: Vec<i128> = (0..n).map(|i| a[at(i, i)].abs()).collect();
        // Normalize to the divisibility chain (gcd/lcm sweep).
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (d[i], d[j]);
                if x == 0 && y != 0 {
                    d.swap(i, j);
                } else if x != 0 && y != 0 {
                    d[i] = x.gcd(&y);
                    d[j] = x.lcm(&y);
                }
            }
        }
        d
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "size mismatch");
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).map(|l| self.get(i, l) * rhs.get(l, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}
