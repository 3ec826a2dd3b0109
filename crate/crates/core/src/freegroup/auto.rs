use std::fmt;

use serde::{Deserialize, Serialize};

use super::intmatrix::IntMatrix;
use super::word::FreeWord;
use crate::error::{Error, Result};

/// An automorphism of the free group of rank `rank`, given by the images of
/// the basis `x_1..x_rank`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AutoRecord", into = "AutoRecord")]
pub struct FgAuto {
    rank: usize,
    images: Vec<FreeWord>,
}

#[derive(Serialize, Deserialize)]
struct AutoRecord {
    rank: usize,
    images: Vec<String>,
}

impl TryFrom<AutoRecord> for FgAuto {
    type Error = Error;
    fn try_from(r: AutoRecord) -> Result<Self> {
        let images = r
            .images
            .iter()
            .map(|s| FreeWord::parse(s))
            .collect::<Result<Vec<_>>>()?;
        FgAuto::new(r.rank, images)
    }
}

impl From<FgAuto> for AutoRecord {
    fn from(a: FgAuto) -> Self {
        AutoRecord {
            rank: a.rank,
            images: a.images.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl FgAuto {
    /// Validates ranks and letters, and checks invertibility by Nielsen
    /// reduction of the image tuple.
    pub fn new(rank: usize, images: Vec<FreeWord>) -> Result<Self> {
        if images.len() != rank {
            return Err(Error::RankMismatch {
                expected: rank,
                got: images.len(),
            });
        }
        if let Some(w) = images.iter().find(|w| w.max_index() > rank) {
            return Err(Error::NotAutomorphism(format!(
                "image {w} uses a letter beyond x{rank}"
            )));
        }
        let auto = FgAuto { rank, images };
        if nielsen_inverse(&auto.images).is_none() {
            return Err(Error::NotAutomorphism(format!(
                "Nielsen reduction of ({auto}) did not reach a basis within budget"
            )));
        }
        Ok(auto)
    }

    pub fn identity(rank: usize) -> Self {
        FgAuto {
            rank,
            images: (1..=rank).map(FreeWord::generator).collect(),
        }
    }

    /// `x_j ↦ w x_j w⁻¹`.
    pub fn inner(rank: usize, w: &FreeWord) -> Self {
        assert!(
            w.max_index() <= rank,
            "conjugator uses letters beyond the rank"
        );
        FgAuto {
            rank,
            images: (1..=rank)
                .map(|j| FreeWord::generator(j).conjugate_by(w))
                .collect(),
        }
    }

    /// The standard generators of `Aut(F_g)`: 1 swaps `x₁, x₂`; 2 cycles
    /// `x_j ↦ x_{j+1}`, `x_g ↦ x₁`; 3 inverts `x₁`; 4 sends `x₁ ↦ x₁x₂`.
    /// Panics unless `k ∈ 1..=4` and `g ≥ 2` (`g ≥ 1` for `k = 3`).
    pub fn nielsen(k: u8, g: usize) -> Self {
        assert!(
            g >= 2 || (k == 3 && g >= 1),
            "Nielsen generator {k} needs rank >= 2"
        );
        let mut images: Vec<FreeWord> = (1..=g).map(FreeWord::generator).collect();
        match k {
            1 => images.swap(0, 1),
            2 => images = (1..=g).map(|j| FreeWord::generator(j % g + 1)).collect(),
            3 => images[0] = FreeWord::from_letters([-1]),
            4 => images[0] = FreeWord::from_letters([1, 2]),
            _ => panic!("Nielsen generators are numbered 1..=4"),
        }
        FgAuto { rank: g, images }
    }

    /// Inverts every generator; for rank 2 this is central in `Out(F₂)`.
    pub fn invert_all(rank: usize) -> Self {
        FgAuto {
            rank,
            images: (1..=rank)
                .map(|j| FreeWord::from_letters([-(j as i32)]))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn image(&self, j: usize) -> &FreeWord {
        &self.images[j - 1]
    }

    pub fn total_length(&self) -> usize {
        self.images.iter().map(FreeWord::len).sum()
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        let mut out = FreeWord::empty();
        for &l in w.letters() {
            let img = &self.images[l.unsigned_abs() as usize - 1];
            out = if l > 0 {
                out.multiply(img)
            } else {
                out.multiply(&img.inverse())
            };
        }
        out
    }

    /// `(self ∘ other)(x_j) = self(other(x_j))`.
    pub fn compose(&self, other: &FgAuto) -> Result<FgAuto> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: other.rank,
            });
        }
        Ok(FgAuto {
            rank: self.rank,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
        })
    }

    pub fn pow(&self, n: u32) -> FgAuto {
        let mut acc = FgAuto::identity(self.rank);
        for _ in 0..n {
            acc = self.compose(&acc).expect("equal ranks");
        }
        acc
    }

    pub fn inverse(&self) -> FgAuto {
        let images = nielsen_inverse(&self.images).expect("automorphisms are invertible");
        FgAuto {
            rank: self.rank,
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(j, w)| w.letters() == [j as i32 + 1])
    }

    /// Returns `w` with `self(x_j) = w x_j w⁻¹` for every `j`, if one exists.
    pub fn is_inner(&self) -> Option<FreeWord> {
        if self.rank == 0 {
            return Some(FreeWord::empty());
        }
        if self.rank == 1 {
            return self.is_identity().then(FreeWord::empty);
        }
        let (u, core) = self.images[0].cyclic_reduction();
        if core.letters() != [1] {
            return None;
        }
        let bound = self.images.iter().map(FreeWord::len).max().unwrap_or(0) as i64 + 1;
        let x1 = FreeWord::generator(1);
        let mut ks = vec![0i64];
        for k in 1..=bound {
            ks.push(k);
            ks.push(-k);
        }
        ks.into_iter().map(|k| u.multiply(&x1.pow(k))).find(|w| {
            self.images
                .iter()
                .enumerate()
                .all(|(j, img)| *img == FreeWord::generator(j + 1).conjugate_by(w))
        })
    }

    /// Smallest `n ≤ max_order` with `selfⁿ` inner.
    pub fn order_in_out(&self, max_order: u32) -> Option<u32> {
        let mut power = self.clone();
        for n in 1..=max_order {
            if power.is_inner().is_some() {
                return Some(n);
            }
            power = power.compose(self).expect("equal ranks");
        }
        None
    }

    /// Action on the abelianization: column `j` holds the exponent sums of
    /// the image of `x_j`.
    pub fn abelianize(&self) -> Result<IntMatrix> {
        let g = self.rank;
        let mut m = IntMatrix::zeros(g);
        for (j, w) in self.images.iter().enumerate() {
            for (i, s) in w.exponent_sums(g).into_iter().enumerate() {
                m.set(i, j, s);
            }
        }
        let det = m.det();
        if det.abs() != 1 {
            return Err(Error::NotInvertibleMatrix { det });
        }
        Ok(m)
    }
}

impl fmt::Display for FgAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.to_string()
                }
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy)]
struct Move {
    target: usize,
    source: usize,
    exponent: i64,
    left: bool,
}

impl Move {
    fn apply(&self, tuple: &mut [FreeWord]) {
        let s = tuple[self.source].pow(self.exponent);
        let t = &tuple[self.target];
        tuple[self.target] = if self.left {
            s.multiply(t)
        } else {
            t.multiply(&s)
        };
    }

    fn new_len(&self, tuple: &[FreeWord]) -> usize {
        let s = tuple[self.source].pow(self.exponent);
        let t = &tuple[self.target];
        if self.left {
            s.multiply(t).len()
        } else {
            t.multiply(&s).len()
        }
    }
}

fn all_moves(g: usize) -> Vec<Move> {
    let mut moves = Vec::with_capacity(4 * g * g);
    for target in 0..g {
        for source in 0..g {
            if source == target {
                continue;
            }
            for exponent in [1, -1] {
                for left in [false, true] {
                    moves.push(Move {
                        target,
                        source,
                        exponent,
                        left,
                    });
                }
            }
        }
    }
    moves
}

/// Inverts the endomorphism with the given images by greedy Nielsen
/// reduction with a two-step lookahead. Each elementary move applied to the
/// image tuple is also applied to a tracking tuple starting at the identity;
/// once the images form a signed permutation of the basis, the tracking
/// tuple yields the inverse. The step budget is `10 · total length`.
fn nielsen_inverse(images: &[FreeWord]) -> Option<Vec<FreeWord>> {
    let g = images.len();
    let mut u = images.to_vec();
    let mut track: Vec<FreeWord> = (1..=g).map(FreeWord::generator).collect();
    let moves = all_moves(g);
    let total: usize = u.iter().map(FreeWord::len).sum();
    let budget = 10 * total.max(1);
    let mut steps = 0;
    loop {
        if let Some(inv) = signed_permutation_inverse(&u, &track) {
            return Some(inv);
        }
        if steps >= budget || u.iter().any(FreeWord::is_empty) {
            return None;
        }
        let best = moves
            .iter()
            .map(|m| (m, m.new_len(&u) as i64 - u[m.target].len() as i64))
            .filter(|&(_, delta)| delta < 0)
            .min_by_key(|&(_, delta)| delta);
        if let Some((m, _)) = best {
            m.apply(&mut u);
            m.apply(&mut track);
            steps += 1;
            continue;
        }
        let pair = lookahead(&u, &moves)?;
        for m in pair {
            m.apply(&mut u);
            m.apply(&mut track);
        }
        steps += 2;
    }
}

/// A length-preserving move followed by a strictly length-reducing one.
fn lookahead(u: &[FreeWord], moves: &[Move]) -> Option<[Move; 2]> {
    for first in moves {
        if first.new_len(u) != u[first.target].len() {
            continue;
        }
        let mut trial = u.to_vec();
        first.apply(&mut trial);
        if let Some(second) = moves
            .iter()
            .find(|m| m.new_len(&trial) < trial[m.target].len())
        {
            return Some([*first, *second]);
        }
    }
    None
}

fn signed_permutation_inverse(u: &[FreeWord], track: &[FreeWord]) -> Option<Vec<FreeWord>> {
    let g = u.len();
    let mut inv = vec![None; g];
    for (i, w) in u.iter().enumerate() {
        let [l] = w.letters() else {
            return None;
        };
        let p = l.unsigned_abs() as usize - 1;
        if inv[p].is_some() {
            return None;
        }
        inv[p] = Some(if *l > 0 {
            track[i].clone()
        } else {
            track[i].inverse()
        });
    }
    inv.into_iter().collect()
}
