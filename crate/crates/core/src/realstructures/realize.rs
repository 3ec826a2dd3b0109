//! Concrete extended Schottky groups with a prescribed signature, built as
//! a free product of factors placed along the real axis five units apart.

use std::collections::BTreeMap;

use crate::enumeration::Signature;
use crate::error::Result;
use crate::freegroup::{FgAuto, RhoBasis, Symbol, SymbolWord};
use crate::mobius::{MobiusMap, C64};
use crate::schottky::MarkedSchottky;

const SPACING: f64 = 5.0;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Reflection in the unit circle about `p`: `z ↦ p + 1/(z̄ − p)`.
fn reflection(p: f64) -> MobiusMap {
    MobiusMap::reversing(c(p, 0.0), c(1.0 - p * p, 0.0), c(1.0, 0.0), c(-p, 0.0))
}

/// Fixed-point-free involution `z ↦ p − 1/(z̄ − p)`.
fn imaginary_reflection(p: f64) -> MobiusMap {
    MobiusMap::reversing(c(p, 0.0), c(-1.0 - p * p, 0.0), c(1.0, 0.0), c(-p, 0.0))
}

const PAIR_OFFSET: f64 = 0.6;
const PAIR_RADIUS: f64 = 0.4;

/// Sends the outside of the circle of radius 0.4 about `p − 0.6` onto the
/// inside of the one about `p + 0.6`, with a rotation `e^{iθ}`.
fn loxodromic(p: f64, theta: f64) -> MobiusMap {
    let (c1, c2) = (p - PAIR_OFFSET, p + PAIR_OFFSET);
    let k = C64::from_polar(PAIR_RADIUS * PAIR_RADIUS, theta);
    MobiusMap::preserving(c(c2, 0.0), k - c2 * c1, c(1.0, 0.0), c(-c1, 0.0))
}

/// Same circles as [`loxodromic`], orientation reversing:
/// `z ↦ c₂ + r²/(z̄ − c₁)`.
fn glide(p: f64) -> MobiusMap {
    let (c1, c2) = (p - PAIR_OFFSET, p + PAIR_OFFSET);
    let r2 = PAIR_RADIUS * PAIR_RADIUS;
    MobiusMap::reversing(c(c2, 0.0), c(r2 - c2 * c1, 0.0), c(1.0, 0.0), c(-c1, 0.0))
}

/// Cayley-type map taking the real line to the unit circle about `p`.
fn cayley(p: f64) -> MobiusMap {
    MobiusMap::preserving(c(1.0 + p, 0.0), c(0.0, p - 1.0), c(1.0, 0.0), c(0.0, 1.0))
}

/// A real factor of rank `gamma` about `p`: reflection in the unit circle
/// and loxodromics pairing `2γ` circles orthogonal to it. On the real line
/// the circles have radius 0.3 and centers `−γ + ½ + m`; circle `k` is
/// paired with circle `k + γ`.
fn real_factor(p: f64, gamma: u32) -> (MobiusMap, Vec<MobiusMap>) {
    let t = cayley(p);
    let t_inv = t.inverse();
    let f = t.compose(&MobiusMap::conjugation()).compose(&t_inv);
    let r = 0.3;
    let center = |m: u32| -(gamma as f64) + 0.5 + m as f64;
    let lox = (0..gamma)
        .map(|k| {
            let (x1, x2) = (center(k), center(k + gamma));
            // z ↦ x₂ − r²/(z − x₁), a real map of positive determinant.
            let a = MobiusMap::preserving(
                c(x2, 0.0),
                c(-r * r - x1 * x2, 0.0),
                c(1.0, 0.0),
                c(-x1, 0.0),
            );
            t.compose(&a).compose(&t_inv)
        })
        .collect();
    (f, lox)
}

/// An extended Schottky group of the given signature together with the
/// free basis of its orientation-preserving half.
#[derive(Debug, Clone)]
pub struct Realization {
    pub basis: RhoBasis,
    pub maps: BTreeMap<Symbol, MobiusMap>,
}

/// Builds generators for every factor: `E_i` are reflections (`i ≤ a`) or
/// imaginary reflections in unit circles, `L_i` and `N_i` pair two small
/// circles, real factors use a unit circle and `2γ` circles orthogonal to
/// it. Factor `k` (in the order E, L, N, real) sits at `5k`.
pub fn realize_signature(s: &Signature) -> Result<Realization> {
    let basis = RhoBasis::new(s)?;
    let mut maps = BTreeMap::new();
    let mut slot = 0u32;
    let mut next = || {
        let p = SPACING * slot as f64;
        slot += 1;
        p
    };
    for i in 1..=s.a + s.b {
        let p = next();
        maps.insert(
            Symbol::E(i),
            if i <= s.a {
                reflection(p)
            } else {
                imaginary_reflection(p)
            },
        );
    }
    for i in 1..=s.c {
        maps.insert(Symbol::L(i), loxodromic(next(), 0.3 + 0.4 * i as f64));
    }
    for i in 1..=s.d {
        maps.insert(Symbol::N(i), glide(next()));
    }
    for (j, &gamma) in s.gammas.iter().enumerate() {
        let j = j as u32 + 1;
        let (f, lox) = real_factor(next(), gamma);
        maps.insert(Symbol::F(j), f);
        for (k, a) in lox.into_iter().enumerate() {
            maps.insert(Symbol::A(j, k as u32 + 1), a);
        }
    }
    Ok(Realization { basis, maps })
}

impl Realization {
    pub fn evaluate(&self, w: &SymbolWord) -> MobiusMap {
        w.letters()
            .iter()
            .fold(MobiusMap::identity(), |acc, &(s, e)| {
                let m = self.maps[&s];
                acc.compose(&if e > 0 { m } else { m.inverse() })
            })
    }

    /// The orientation-reversing element conjugating the half.
    pub fn transversal(&self) -> MobiusMap {
        self.maps[&self.basis.transversal()]
    }

    /// The basis elements evaluated as Möbius maps.
    pub fn marked(&self) -> Result<MarkedSchottky> {
        MarkedSchottky::new(
            self.basis
                .basis()
                .iter()
                .map(|w| self.evaluate(w))
                .collect(),
        )
    }

    pub fn rho(&self) -> Result<FgAuto> {
        self.basis.rho()
    }
}
