//! The outer automorphism induced on the orientation-preserving half of an
//! extended Schottky group by conjugation with an orientation-reversing
//! element, computed by Reidemeister–Schreier rewriting.

use std::fmt;

use serde::Serialize;

use super::auto::FgAuto;
use super::word::FreeWord;
use crate::enumeration::Signature;
use crate::error::{Error, Result};

/// Generators of an extended Schottky group with the given signature:
/// `E_i` reflections and imaginary reflections (`i ≤ a + b`), `L_i`
/// loxodromics, `N_i` glide-reflections, and for real factor `j` its
/// reflection `F_j` and loxodromics `A_{j,k}`. Indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    E(u32),
    L(u32),
    N(u32),
    F(u32),
    A(u32, u32),
}

impl Symbol {
    pub fn reverses_orientation(self) -> bool {
        matches!(self, Symbol::E(_) | Symbol::N(_) | Symbol::F(_))
    }

    pub fn is_involution(self) -> bool {
        matches!(self, Symbol::E(_) | Symbol::F(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::E(i) => write!(f, "E{i}"),
            Symbol::L(i) => write!(f, "L{i}"),
            Symbol::N(i) => write!(f, "N{i}"),
            Symbol::F(j) => write!(f, "F{j}"),
            Symbol::A(j, k) => write!(f, "A{j},{k}"),
        }
    }
}

/// A word in the extended-group generators, kept in normal form under
/// `E² = F² = 1` and `F_j A_{j,k} = A_{j,k} F_j` (each `F_j` is moved to the
/// right of its own loxodromics).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SymbolWord {
    letters: Vec<(Symbol, i32)>,
}

impl SymbolWord {
    pub fn empty() -> Self {
        SymbolWord::default()
    }

    pub fn from_letters<I: IntoIterator<Item = (Symbol, i32)>>(letters: I) -> Self {
        let mut w = SymbolWord::empty();
        for (s, e) in letters {
            w.push(s, e);
        }
        w
    }

    pub fn letters(&self) -> &[(Symbol, i32)] {
        &self.letters
    }

    pub fn push(&mut self, s: Symbol, e: i32) {
        assert!(e == 1 || e == -1, "exponents are ±1");
        let e = if s.is_involution() { 1 } else { e };
        match self.letters.last().copied() {
            Some((t, f)) if t == s && (s.is_involution() || f == -e) => {
                self.letters.pop();
            }
            Some((Symbol::F(j), _)) if matches!(s, Symbol::A(jj, _) if jj == j) => {
                self.letters.pop();
                self.push(s, e);
                self.push(Symbol::F(j), 1);
            }
            _ => self.letters.push((s, e)),
        }
    }

    pub fn multiply(&self, other: &SymbolWord) -> SymbolWord {
        let mut w = self.clone();
        for &(s, e) in &other.letters {
            w.push(s, e);
        }
        w
    }

    pub fn inverse(&self) -> SymbolWord {
        SymbolWord::from_letters(self.letters.iter().rev().map(|&(s, e)| (s, -e)))
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.letters
            .iter()
            .filter(|(s, _)| s.reverses_orientation())
            .count()
            % 2
            == 0
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^-1")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Which generator represents the orientation-reversing coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoCase {
    /// `a + b > 0`: conjugation by `E₁`.
    Reflection,
    /// `a + b = 0`, `e > 0`: conjugation by `F₁`.
    RealFactor,
    /// `a + b = e = 0`: conjugation by `N₁`.
    Glide,
}

/// A free basis of the orientation-preserving half together with the
/// coset-scanning tables that rewrite its elements in that basis.
#[derive(Debug, Clone)]
pub struct RhoBasis {
    signature: Signature,
    rank: usize,
    case: RhoCase,
    basis: Vec<SymbolWord>,
    index: Index,
}

/// 1-based basis positions, keyed by the generator they are built from.
#[derive(Debug, Clone, Default)]
struct Index {
    ee: Vec<i32>,
    l: Vec<i32>,
    en: Vec<i32>,
    ele: Vec<i32>,
    ne: Vec<i32>,
    a: Vec<Vec<i32>>,
    ef: Vec<i32>,
    ff: Vec<i32>,
    nn1: i32,
    nn: Vec<i32>,
    nninv: Vec<i32>,
}

fn sym(s: Symbol) -> (Symbol, i32) {
    (s, 1)
}

fn inv(s: Symbol) -> (Symbol, i32) {
    (s, -1)
}

impl RhoBasis {
    pub fn new(signature: &Signature) -> Result<Self> {
        let g = signature.validate()?;
        if g == 0 {
            return Err(Error::InvalidSignature(format!("{signature} has rank 0")));
        }
        let Signature {
            a,
            b,
            c,
            d,
            e,
            ref gammas,
        } = *signature;
        let big_a = a + b;
        let mut basis: Vec<SymbolWord> = Vec::new();
        let mut ix = Index::default();
        let add = |basis: &mut Vec<SymbolWord>, w: Vec<(Symbol, i32)>| -> i32 {
            basis.push(SymbolWord::from_letters(w));
            basis.len() as i32
        };
        let case = if big_a > 0 {
            use Symbol::*;
            ix.ee = vec![0; big_a as usize + 1];
            for i in 2..=big_a {
                ix.ee[i as usize] = add(&mut basis, vec![sym(E(1)), sym(E(i))]);
            }
            ix.l = (1..=c).map(|i| add(&mut basis, vec![sym(L(i))])).collect();
            ix.en = (1..=d)
                .map(|i| add(&mut basis, vec![sym(E(1)), sym(N(i))]))
                .collect();
            ix.ele = (1..=c)
                .map(|i| add(&mut basis, vec![sym(E(1)), sym(L(i)), sym(E(1))]))
                .collect();
            ix.ne = (1..=d)
                .map(|i| add(&mut basis, vec![sym(N(i)), sym(E(1))]))
                .collect();
            for (j, &gj) in gammas.iter().enumerate() {
                let j = j as u32 + 1;
                ix.a.push(
                    (1..=gj)
                        .map(|k| add(&mut basis, vec![sym(A(j, k))]))
                        .collect(),
                );
            }
            ix.ef = (1..=e)
                .map(|j| add(&mut basis, vec![sym(E(1)), sym(F(j))]))
                .collect();
            RhoCase::Reflection
        } else if e > 0 {
            use Symbol::*;
            ix.ff = vec![0; e as usize + 1];
            for j in 2..=e {
                ix.ff[j as usize] = add(&mut basis, vec![sym(F(1)), sym(F(j))]);
            }
            ix.a = vec![Vec::new(); e as usize];
            ix.a[0] = (1..=gammas[0])
                .map(|k| add(&mut basis, vec![sym(A(1, k))]))
                .collect();
            ix.l = (1..=c).map(|i| add(&mut basis, vec![sym(L(i))])).collect();
            ix.en = (1..=d)
                .map(|i| add(&mut basis, vec![sym(F(1)), sym(N(i))]))
                .collect();
            ix.ele = (1..=c)
                .map(|i| add(&mut basis, vec![sym(F(1)), sym(L(i)), sym(F(1))]))
                .collect();
            ix.ne = (1..=d)
                .map(|i| add(&mut basis, vec![sym(N(i)), sym(F(1))]))
                .collect();
            for j in 2..=e {
                ix.a[j as usize - 1] = (1..=gammas[j as usize - 1])
                    .map(|k| add(&mut basis, vec![sym(A(j, k))]))
                    .collect();
            }
            RhoCase::RealFactor
        } else {
            use Symbol::*;
            // d ≥ 1 here. With c > 0 (not a normal form) the loxodromic
            // generators and their conjugates by N₁ are appended.
            ix.nn1 = add(&mut basis, vec![sym(N(1)), sym(N(1))]);
            ix.nn = vec![0; d as usize + 1];
            ix.nninv = vec![0; d as usize + 1];
            for i in 2..=d {
                ix.nn[i as usize] = add(&mut basis, vec![sym(N(1)), sym(N(i))]);
            }
            for i in 2..=d {
                ix.nninv[i as usize] = add(&mut basis, vec![sym(N(1)), inv(N(i))]);
            }
            ix.l = (1..=c).map(|i| add(&mut basis, vec![sym(L(i))])).collect();
            ix.ele = (1..=c)
                .map(|i| add(&mut basis, vec![sym(N(1)), sym(L(i)), inv(N(1))]))
                .collect();
            RhoCase::Glide
        };
        debug_assert_eq!(basis.len(), g as usize);
        Ok(RhoBasis {
            signature: signature.clone(),
            rank: g as usize,
            case,
            basis,
            index: ix,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn case(&self) -> RhoCase {
        self.case
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The basis elements `x_1..x_g` as words in the extended generators.
    pub fn basis(&self) -> &[SymbolWord] {
        &self.basis
    }

    /// The orientation-reversing element `r` used for conjugation.
    pub fn transversal(&self) -> Symbol {
        match self.case {
            RhoCase::Reflection => Symbol::E(1),
            RhoCase::RealFactor => Symbol::F(1),
            RhoCase::Glide => Symbol::N(1),
        }
    }

    /// Expresses an orientation-preserving word in the basis by scanning
    /// cosets of the transversal `{1, r}`.
    pub fn rewrite(&self, w: &SymbolWord) -> Result<FreeWord> {
        let mut odd = false;
        let mut out: Vec<i32> = Vec::new();
        for &(s, e) in w.letters() {
            let (emit, next) = self.step(odd, s, e)?;
            out.extend(emit);
            odd = next;
        }
        if odd {
            return Err(Error::InvalidSignature(format!("{w} reverses orientation")));
        }
        Ok(FreeWord::from_letters(out))
    }

    fn unknown(&self, s: Symbol) -> Error {
        Error::InvalidSignature(format!(
            "generator {s} does not occur in {}",
            self.signature
        ))
    }

    fn lookup(&self, table: &[i32], i: u32, s: Symbol) -> Result<i32> {
        table
            .get(i as usize - 1)
            .copied()
            .filter(|&x| x != 0)
            .ok_or_else(|| self.unknown(s))
    }

    fn lookup_a(&self, j: u32, k: u32, s: Symbol) -> Result<i32> {
        self.index
            .a
            .get(j as usize - 1)
            .and_then(|v| v.get(k as usize - 1))
            .copied()
            .ok_or_else(|| self.unknown(s))
    }

    /// Basis letters emitted for symbol `s^e` read in the current coset, and
    /// the coset afterwards (`true` for the orientation-reversing one).
    fn step(&self, odd: bool, s: Symbol, e: i32) -> Result<(Vec<i32>, bool)> {
        use Symbol::*;
        let ix = &self.index;
        let flip = !odd;
        let r = match (self.case, s) {
            (RhoCase::Reflection, E(1)) => (vec![], flip),
            (RhoCase::Reflection, E(i)) => {
                let x = self.lookup(&ix.ee[1..], i, s)?;
                (vec![if odd { x } else { -x }], flip)
            }
            (RhoCase::Reflection, F(j)) => {
                let x = self.lookup(&ix.ef, j, s)?;
                (vec![if odd { x } else { -x }], flip)
            }
            (RhoCase::Reflection, A(j, k)) => {
                let x = self.lookup_a(j, k, s)?;
                if odd {
                    let c = self.lookup(&ix.ef, j, s)?;
                    (vec![c, e * x, -c], odd)
                } else {
                    (vec![e * x], odd)
                }
            }
            (RhoCase::RealFactor, F(1)) => (vec![], flip),
            (RhoCase::RealFactor, F(j)) => {
                let x = self.lookup(&ix.ff[1..], j, s)?;
                (vec![if odd { x } else { -x }], flip)
            }
            (RhoCase::RealFactor, A(j, k)) => {
                let x = self.lookup_a(j, k, s)?;
                if odd && j >= 2 {
                    let c = self.lookup(&ix.ff[1..], j, s)?;
                    (vec![c, e * x, -c], odd)
                } else {
                    (vec![e * x], odd)
                }
            }
            (RhoCase::Reflection | RhoCase::RealFactor, L(i)) => {
                let x = if odd {
                    self.lookup(&ix.ele, i, s)?
                } else {
                    self.lookup(&ix.l, i, s)?
                };
                (vec![e * x], odd)
            }
            (RhoCase::Reflection | RhoCase::RealFactor, N(i)) => {
                let (en, ne) = (self.lookup(&ix.en, i, s)?, self.lookup(&ix.ne, i, s)?);
                let x = match (odd, e) {
                    (false, 1) => ne,
                    (false, _) => -en,
                    (true, 1) => en,
                    (true, _) => -ne,
                };
                (vec![x], flip)
            }
            (RhoCase::Glide, N(1)) => {
                let x = match (odd, e) {
                    (false, 1) | (true, -1) => vec![],
                    (false, _) => vec![-ix.nn1],
                    (true, _) => vec![ix.nn1],
                };
                (x, flip)
            }
            (RhoCase::Glide, N(i)) => {
                let (nn, nninv) = (
                    self.lookup(&ix.nn[1..], i, s)?,
                    self.lookup(&ix.nninv[1..], i, s)?,
                );
                let x = match (odd, e) {
                    (false, 1) => -nninv,
                    (false, _) => -nn,
                    (true, 1) => nn,
                    (true, _) => nninv,
                };
                (vec![x], flip)
            }
            (RhoCase::Glide, L(i)) => {
                let x = if odd {
                    self.lookup(&ix.ele, i, s)?
                } else {
                    self.lookup(&ix.l, i, s)?
                };
                (vec![e * x], odd)
            }
            _ => return Err(self.unknown(s)),
        };
        Ok(r)
    }

    /// Substitutes the basis words back: the inverse of `rewrite`.
    pub fn expand(&self, w: &FreeWord) -> SymbolWord {
        let mut out = SymbolWord::empty();
        for &l in w.letters() {
            let x = &self.basis[l.unsigned_abs() as usize - 1];
            out = out.multiply(&if l > 0 { x.clone() } else { x.inverse() });
        }
        out
    }

    /// `x_j ↦ rewrite(r · x_j · r⁻¹)`.
    pub fn rho(&self) -> Result<FgAuto> {
        let r = SymbolWord::from_letters([(self.transversal(), 1)]);
        let images = self
            .basis
            .iter()
            .map(|x| self.rewrite(&r.multiply(x).multiply(&r.inverse())))
            .collect::<Result<Vec<_>>>()?;
        FgAuto::new(self.rank, images)
    }
}

/// ρ_K for the signature: conjugation by `E₁`, `F₁` or `N₁` expressed on
/// the free basis of the orientation-preserving half.
pub fn rho_from_signature(s: &Signature) -> Result<FgAuto> {
    RhoBasis::new(s)?.rho()
}

/// What a closed-form image table states for one basis element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "word", rename_all = "snake_case")]
pub enum TableEntry {
    Stated(String),
    /// The table's target index lies outside `1..=g`.
    OutOfRange(String),
    NotStated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agree,
    Disagree,
    OutOfRange,
    NotStated,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoLine {
    pub generator: String,
    pub definition: String,
    pub derived: String,
    pub table: TableEntry,
    pub status: Agreement,
}

#[derive(Debug, Clone, Serialize)]
pub struct RhoDiagnostics {
    pub signature: String,
    pub rank: usize,
    pub case: RhoCase,
    pub lines: Vec<RhoLine>,
    pub disagreements: usize,
}

/// Compares the derived images with the closed-form tables usually quoted
/// for the three cases, index for index. Nothing is asserted here: this is a
/// report.
pub fn rho_diagnostics(s: &Signature) -> Result<RhoDiagnostics> {
    let basis = RhoBasis::new(s)?;
    let rho = basis.rho()?;
    let table = closed_form_table(&basis);
    let lines: Vec<RhoLine> = (0..basis.rank)
        .map(|j| {
            let derived = rho.images()[j].clone();
            let (entry, status) = match &table[j] {
                Cell::Word(w) => (
                    TableEntry::Stated(w.to_string()),
                    if *w == derived {
                        Agreement::Agree
                    } else {
                        Agreement::Disagree
                    },
                ),
                Cell::OutOfRange(idx) => (
                    TableEntry::OutOfRange(format!("x{idx}")),
                    Agreement::OutOfRange,
                ),
                Cell::Missing => (TableEntry::NotStated, Agreement::NotStated),
            };
            RhoLine {
                generator: format!("x{}", j + 1),
                definition: basis.basis[j].to_string(),
                derived: derived.to_string(),
                table: entry,
                status,
            }
        })
        .collect();
    let disagreements = lines
        .iter()
        .filter(|l| matches!(l.status, Agreement::Disagree | Agreement::OutOfRange))
        .count();
    Ok(RhoDiagnostics {
        signature: s.to_string(),
        rank: basis.rank,
        case: basis.case,
        lines,
        disagreements,
    })
}

enum Cell {
    Word(FreeWord),
    OutOfRange(usize),
    Missing,
}

/// The closed-form tables, transcribed literally (1-based indices).
fn closed_form_table(basis: &RhoBasis) -> Vec<Cell> {
    let g = basis.rank;
    let s = &basis.signature;
    let (a, e) = ((s.a + s.b) as usize, s.e as usize);
    let big_b = (s.c + s.d) as usize;
    let big_c = s.real_rank_sum() as usize;
    let mut cells: Vec<Cell> = (0..g).map(|_| Cell::Missing).collect();
    let x = |i: usize| FreeWord::generator(i);
    let xinv = |i: usize| FreeWord::generator(i).inverse();
    let mut set = |j: usize, target: Option<FreeWord>, idx: usize| {
        if (1..=g).contains(&j) {
            cells[j - 1] = match target {
                Some(w) if idx <= g => Cell::Word(w),
                _ => Cell::OutOfRange(idx),
            };
        }
    };
    match basis.case {
        RhoCase::Reflection => {
            for j in 1..a {
                set(j, Some(xinv(j)), j);
            }
            for j in a..a + big_b {
                let t = j + big_b + 1;
                set(j, (t <= g).then(|| x(t)), t);
            }
            for j in a + 2 * big_b..a + 2 * big_b + big_c {
                let t = j + a + 2 * big_b + big_c + 1;
                set(j, (t <= g).then(|| x(t)), t);
                if t <= g {
                    set(t, Some(x(j)), j);
                }
            }
            for j in a + 2 * big_b + big_c..a + 2 * big_b + big_c + e {
                set(j, Some(xinv(j)), j);
            }
        }
        RhoCase::RealFactor => {
            let g1 = s.gammas[0] as usize;
            for j in 1..e {
                set(j, Some(xinv(j)), j);
            }
            for j in e..e + g1 {
                set(j, Some(x(j)), j);
            }
            for j in e + g1..e + big_b + g1 {
                set(j, Some(x(j + big_b)), j + big_b);
                set(j + big_b, Some(x(j)), j);
            }
            let mut start = e + 2 * big_b + g1;
            for m in 2..=e {
                let len = s.gammas[m - 1] as usize;
                for j in start..start + len {
                    set(j, Some(x(j).conjugate_by(&x(m - 1))), j);
                }
                start += len;
            }
        }
        RhoCase::Glide => {
            let b = s.d as usize;
            set(1, Some(x(1)), 1);
            for j in 2..=b {
                set(j, Some(x(1).multiply(&xinv(b + j - 1))), b + j - 1);
            }
            for j in b + 1..2 * b {
                set(j, Some(x(1).multiply(&xinv(j - b + 1))), j - b + 1);
            }
        }
    }
    cells
}
