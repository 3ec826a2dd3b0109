//! The four real structures of rank 2, identification of `ρ_K` with one of
//! them, and a bounded conjugacy search in `Out(F_g)`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::RealStructureSpec;
use crate::enumeration::Signature;
use crate::error::{Error, Result};
use crate::freegroup::{rho_from_signature, FgAuto, FreeWord, IntMatrix};

pub const DEFAULT_SEARCH_BUDGET: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Genus2Class {
    #[serde(rename = "J2")]
    J2,
    #[serde(rename = "rho1")]
    Rho1,
    #[serde(rename = "rho2")]
    Rho2,
    #[serde(rename = "rho3")]
    Rho3,
}

impl Genus2Class {
    pub const ALL: [Genus2Class; 4] = [
        Genus2Class::J2,
        Genus2Class::Rho1,
        Genus2Class::Rho2,
        Genus2Class::Rho3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Genus2Class::J2 => "J2",
            Genus2Class::Rho1 => "rho1",
            Genus2Class::Rho2 => "rho2",
            Genus2Class::Rho3 => "rho3",
        }
    }

    /// Identity, `(x₂, x₁)`, `(x₁⁻¹, x₂)` and `(x₂⁻¹, x₁)`.
    pub fn twist(self) -> FgAuto {
        let w = |l: i32| FreeWord::from_letters([l]);
        let images = match self {
            Genus2Class::J2 => vec![w(1), w(2)],
            Genus2Class::Rho1 => vec![w(2), w(1)],
            Genus2Class::Rho2 => vec![w(-1), w(2)],
            Genus2Class::Rho3 => vec![w(-2), w(1)],
        };
        FgAuto::new(2, images).expect("signed permutation")
    }

    pub fn spec(self) -> RealStructureSpec {
        RealStructureSpec::new_unchecked(self.twist())
    }

    /// Connected components of the real part.
    pub fn components(self) -> u32 {
        match self {
            Genus2Class::J2 => 5,
            Genus2Class::Rho1 => 3,
            Genus2Class::Rho2 => 2,
            Genus2Class::Rho3 => 0,
        }
    }
}

impl fmt::Display for Genus2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The ten rank-2 signatures in normal form and the structure each induces.
pub const GENUS2_TABLE: [(&str, Genus2Class); 10] = [
    ("(3,0,0,0,0;)", Genus2Class::J2),
    ("(2,1,0,0,0;)", Genus2Class::J2),
    ("(1,2,0,0,0;)", Genus2Class::J2),
    ("(0,3,0,0,0;)", Genus2Class::J2),
    ("(0,0,0,0,1;2)", Genus2Class::J2),
    ("(1,0,1,0,0;)", Genus2Class::Rho1),
    ("(1,0,0,1,0;)", Genus2Class::Rho1),
    ("(0,1,0,1,0;)", Genus2Class::Rho1),
    ("(1,0,0,0,1;1)", Genus2Class::Rho2),
    ("(0,1,0,0,1;1)", Genus2Class::Rho2),
];

#[derive(Debug, Clone, Serialize)]
pub struct Genus2Entry {
    pub class: Genus2Class,
    pub twist: FgAuto,
    pub components: u32,
    pub has_real_points: bool,
    /// Order of the twist in `Out(F₂)`; all four are involutions modulo `ρ₀`.
    pub order_in_out: u32,
    pub signatures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Genus2Data {
    pub classes: Vec<Genus2Entry>,
    /// Representatives of the three conjugacy classes of involutions in
    /// `Out(F₂)`: `ρ₀ = (x₁⁻¹, x₂⁻¹)`, `(x₂, x₁)`, `(x₁⁻¹, x₂)`.
    pub order_two_in_out: Vec<FgAuto>,
    pub rho0: FgAuto,
}

pub fn genus2_classes() -> Genus2Data {
    let classes = Genus2Class::ALL
        .iter()
        .map(|&class| {
            let twist = class.twist();
            Genus2Entry {
                class,
                components: class.components(),
                has_real_points: class.components() > 0,
                order_in_out: twist.order_in_out(6).expect("finite order"),
                signatures: GENUS2_TABLE
                    .iter()
                    .filter(|(_, c)| *c == class)
                    .map(|(s, _)| s.to_string())
                    .collect(),
                twist,
            }
        })
        .collect();
    Genus2Data {
        classes,
        order_two_in_out: vec![
            FgAuto::invert_all(2),
            Genus2Class::Rho1.twist(),
            Genus2Class::Rho2.twist(),
        ],
        rho0: FgAuto::invert_all(2),
    }
}

/// Outcome of a bounded search for `C` with `C⁻¹ φ C ≡ target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Search {
    Found { conjugator: FgAuto, explored: usize },
    Exhausted { explored: usize },
}

/// Breadth-first search over conjugates `n⁻¹ ψ n` by Nielsen generators and
/// their inverses, starting from `phi`. Equality is up to inner
/// automorphisms, and also up to `ρ₀` when `modulo_rho0` is set (rank 2
/// only). `budget` bounds the number of visited states.
pub fn conjugate_search(
    phi: &FgAuto,
    target: &FgAuto,
    modulo_rho0: bool,
    budget: usize,
) -> Result<Search> {
    if phi.rank() != target.rank() {
        return Err(Error::RankMismatch {
            expected: target.rank(),
            got: phi.rank(),
        });
    }
    let g = phi.rank();
    let rho0 = (modulo_rho0 && g == 2).then(|| FgAuto::invert_all(2));
    let target_inv = target.inverse();
    let matches = |psi: &FgAuto| -> bool {
        let d = psi.compose(&target_inv).expect("equal ranks");
        d.is_inner().is_some()
            || rho0
                .as_ref()
                .is_some_and(|r| d.compose(r).expect("rank 2").is_inner().is_some())
    };
    let gens = nielsen_moves(g);
    let max_len = 2 * (phi.total_length() + target.total_length()) + 8;
    let start = tighten(phi.clone());
    let mut seen: HashSet<FgAuto> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, FgAuto::identity(g))]);
    let mut explored = 0;
    while let Some((psi, c)) = queue.pop_front() {
        explored += 1;
        if matches(&psi) {
            return Ok(Search::Found {
                conjugator: c,
                explored,
            });
        }
        if explored >= budget {
            break;
        }
        for (n, n_inv) in &gens {
            let next = tighten(n_inv.compose(&psi)?.compose(n)?);
            if next.total_length() > max_len || !seen.insert(next.clone()) {
                continue;
            }
            queue.push_back((next, c.compose(n)?));
        }
    }
    Ok(Search::Exhausted { explored })
}

fn nielsen_moves(g: usize) -> Vec<(FgAuto, FgAuto)> {
    let mut ks = vec![3u8];
    if g >= 2 {
        ks.extend([1, 4]);
    }
    if g >= 3 {
        ks.push(2);
    }
    let mut out = Vec::new();
    for k in ks {
        let n = FgAuto::nielsen(k, g);
        let inv = n.inverse();
        out.push((n.clone(), inv.clone()));
        if inv != n {
            out.push((inv, n));
        }
    }
    out
}

/// Strips a common outer conjugation `l (…) l⁻¹` from all images.
fn tighten(mut psi: FgAuto) -> FgAuto {
    loop {
        let imgs = psi.images();
        let Some(&l) = imgs
            .iter()
            .find(|w| w.len() >= 2)
            .and_then(|w| w.letters().first())
        else {
            return psi;
        };
        let strips = imgs.iter().all(|w| {
            let ls = w.letters();
            ls == [l] || (ls.len() >= 2 && ls[0] == l && ls[ls.len() - 1] == -l)
        });
        if !strips {
            return psi;
        }
        let u = FreeWord::from_letters([-l]);
        let images = imgs.iter().map(|w| w.conjugate_by(&u)).collect();
        psi = FgAuto::new(psi.rank(), images).expect("conjugate of an automorphism");
    }
}

/// Class of a rank-2 twist read off its action on `ℤ²`, which determines
/// the class in `Out(F₂)/⟨ρ₀⟩` (the abelianization map is an isomorphism in
/// rank 2). `None` if the twist is not an involution modulo `ρ₀`.
fn class_from_abelianization(a: &IntMatrix) -> Option<Genus2Class> {
    let id = IntMatrix::identity(2);
    if *a == id || *a == -&id {
        return Some(Genus2Class::J2);
    }
    let sq = a * a;
    if sq != id && sq != -&id {
        return None;
    }
    if a.det() == 1 {
        return Some(Genus2Class::Rho3);
    }
    let d = a - &id;
    let even = (0..2).all(|i| (0..2).all(|j| d.get(i, j) % 2 == 0));
    Some(if even {
        Genus2Class::Rho2
    } else {
        Genus2Class::Rho1
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Genus2Classification {
    pub signature: Signature,
    pub class: Genus2Class,
    pub rho: FgAuto,
    /// `C` with `C⁻¹ ρ_K C` equal to the class twist modulo inner
    /// automorphisms and `ρ₀`.
    pub conjugator: FgAuto,
    pub explored: usize,
}

/// Identifies the real structure induced by a rank-2 signature: the
/// abelianization proposes a class and a bounded conjugacy search certifies
/// it. Never guesses: an exhausted search is an error.
pub fn structure_of_signature_g2(s: &Signature, budget: usize) -> Result<Genus2Classification> {
    let g = s.validate()?;
    if g != 2 {
        return Err(Error::RankMismatch {
            expected: 2,
            got: g as usize,
        });
    }
    let rho = rho_from_signature(s)?;
    let class = class_from_abelianization(&rho.abelianize()?)
        .ok_or(Error::ClassificationInconclusive { explored: 0 })?;
    match conjugate_search(&rho, &class.twist(), true, budget)? {
        Search::Found {
            conjugator,
            explored,
        } => Ok(Genus2Classification {
            signature: s.clone(),
            class,
            rho,
            conjugator,
            explored,
        }),
        Search::Exhausted { explored } => Err(Error::ClassificationInconclusive { explored }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The group's reference member.
    Reference,
    Certified,
    /// Abelianization invariants differ.
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentMember {
    pub signature: String,
    pub rho: Vec<String>,
    pub abelianization: IntMatrix,
    pub char_poly: Vec<i128>,
    /// Compared with the first member of the group.
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentGroup {
    /// `(a+b, c+d, e; γ)`.
    pub key: String,
    pub members: Vec<ExperimentMember>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossVerdict {
    pub left: String,
    pub right: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport {
    pub g: u32,
    pub budget: usize,
    pub groups: Vec<ExperimentGroup>,
    /// Comparisons between the reference members of different groups.
    pub cross: Vec<CrossVerdict>,
    /// Signatures merged along certified conjugacies.
    pub classes: Vec<Vec<String>>,
    pub all_certified: bool,
}

struct Invariants {
    char_poly: Vec<i128>,
    minus: Vec<i128>,
    plus: Vec<i128>,
}

fn invariants(a: &IntMatrix) -> Invariants {
    let id = IntMatrix::identity(a.size());
    Invariants {
        char_poly: a.char_poly(),
        minus: (a - &id).smith_invariants(),
        plus: (a + &id).smith_invariants(),
    }
}

fn same_invariants(x: &Invariants, y: &Invariants) -> bool {
    x.char_poly == y.char_poly && x.minus == y.minus && x.plus == y.plus
}

fn compare(phi: &FgAuto, psi: &FgAuto, budget: usize) -> Result<Verdict> {
    let (a, b) = (phi.abelianize()?, psi.abelianize()?);
    let (ia, ib) = (invariants(&a), invariants(&b));
    let up_to_sign = phi.rank() == 2 && same_invariants(&ia, &invariants(&-&b));
    if !same_invariants(&ia, &ib) && !up_to_sign {
        return Ok(Verdict::Refuted);
    }
    Ok(match conjugate_search(phi, psi, phi.rank() == 2, budget)? {
        Search::Found { .. } => Verdict::Certified,
        Search::Exhausted { .. } => Verdict::Inconclusive,
    })
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Groups the `ρ_K` of all normal-form signatures of rank `g` by
/// `(a+b, c+d, e; γ)` and tests conjugacy in `Out(F_g)` (modulo `ρ₀` for
/// `g = 2`) within each group and between groups. Evidence only.
pub fn conjugacy_experiment(g: u32, bound: u32, budget: usize) -> Result<ConjugacyReport> {
    if g > bound {
        return Err(Error::BoundExceeded {
            requested: g,
            bound,
        });
    }
    if g == 0 {
        return Err(Error::InvalidSignature("rank 0 has no free basis".into()));
    }
    let sigs: Vec<Signature> = Signature::all_of_rank(g)
        .into_iter()
        .filter(Signature::is_normal_form)
        .collect();
    let rhos = sigs
        .iter()
        .map(rho_from_signature)
        .collect::<Result<Vec<_>>>()?;
    let mut by_key: BTreeMap<(u32, u32, u32, Vec<u32>), Vec<usize>> = BTreeMap::new();
    for (i, s) in sigs.iter().enumerate() {
        by_key
            .entry((s.a + s.b, s.c + s.d, s.e, s.gammas.clone()))
            .or_default()
            .push(i);
    }
    let mut parent: Vec<usize> = (0..sigs.len()).collect();
    let mut groups = Vec::new();
    let mut all_certified = true;
    for ((ab, cd, e, gammas), idx) in &by_key {
        let first = idx[0];
        let mut members = Vec::new();
        for &i in idx {
            let verdict = if i == first {
                Verdict::Reference
            } else {
                compare(&rhos[i], &rhos[first], budget)?
            };
            if verdict == Verdict::Certified {
                let (ri, rf) = (find(&mut parent, i), find(&mut parent, first));
                parent[ri] = rf;
            }
            all_certified &= matches!(verdict, Verdict::Reference | Verdict::Certified);
            let ab_matrix = rhos[i].abelianize()?;
            members.push(ExperimentMember {
                signature: sigs[i].to_string(),
                rho: rhos[i].images().iter().map(FreeWord::to_string).collect(),
                char_poly: ab_matrix.char_poly(),
                abelianization: ab_matrix,
                verdict,
            });
        }
        let gs: Vec<String> = gammas.iter().map(u32::to_string).collect();
        groups.push(ExperimentGroup {
            key: format!("({ab},{cd},{e};{})", gs.join(",")),
            members,
        });
    }
    let reps: Vec<usize> = by_key.values().map(|v| v[0]).collect();
    let mut cross = Vec::new();
    for x in 0..reps.len() {
        for y in (x + 1)..reps.len() {
            let (i, j) = (reps[x], reps[y]);
            let verdict = compare(&rhos[j], &rhos[i], budget)?;
            if verdict == Verdict::Certified {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[rj] = ri;
            }
            cross.push(CrossVerdict {
                left: sigs[i].to_string(),
                right: sigs[j].to_string(),
                verdict,
            });
        }
    }
    let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, s) in sigs.iter().enumerate() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(s.to_string());
    }
    Ok(ConjugacyReport {
        g,
        budget,
        groups,
        cross,
        classes: classes.into_values().collect(),
        all_certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_classes_one_empty() {
        let data = genus2_classes();
        assert_eq!(data.classes.len(), 4);
        assert_eq!(
            data.classes.iter().filter(|c| !c.has_real_points).count(),
            1
        );
        let comps: Vec<u32> = data.classes.iter().map(|c| c.components).collect();
        assert_eq!(comps, vec![5, 3, 2, 0]);
        let orders: Vec<u32> = data.classes.iter().map(|c| c.order_in_out).collect();
        assert_eq!(orders, vec![1, 2, 2, 4]);
    }

    #[test]
    fn rho3_is_rho1_after_rho2() {
        let prod = Genus2Class::Rho1
            .twist()
            .compose(&Genus2Class::Rho2.twist())
            .unwrap();
        let d = prod.compose(&Genus2Class::Rho3.twist().inverse()).unwrap();
        assert!(d.is_inner().is_some());
        // ρ₃² = ρ₀.
        assert_eq!(Genus2Class::Rho3.twist().pow(2), FgAuto::invert_all(2));
    }

    #[test]
    fn table_reproduced() {
        for (text, expected) in GENUS2_TABLE {
            let s: Signature = text.parse().unwrap();
            let c = structure_of_signature_g2(&s, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(c.class, expected, "{text}");
        }
    }

    #[test]
    fn rejects_other_ranks() {
        let s: Signature = "(0,0,0,2,0;)".parse().unwrap();
        assert!(matches!(
            structure_of_signature_g2(&s, 10),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn search_finds_conjugates() {
        let phi = Genus2Class::Rho1.twist();
        let c = FgAuto::nielsen(4, 2)
            .compose(&FgAuto::nielsen(3, 2))
            .unwrap();
        let conj = c.compose(&phi).unwrap().compose(&c.inverse()).unwrap();
        match conjugate_search(&conj, &phi, false, 5000).unwrap() {
            Search::Found { conjugator, .. } => {
                let back = conjugator
                    .inverse()
                    .compose(&conj)
                    .unwrap()
                    .compose(&conjugator)
                    .unwrap();
                assert!(back.compose(&phi.inverse()).unwrap().is_inner().is_some());
            }
            other => panic!("{other:?}"),
        }
        let swap = Genus2Class::Rho1.twist();
        let flip = Genus2Class::Rho2.twist();
        assert_eq!(compare(&swap, &flip, 100).unwrap(), Verdict::Refuted);
    }

    #[test]
    fn experiment_genus_two() {
        let r = conjugacy_experiment(2, 12, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(r.classes.len(), 3);
        assert!(r.all_certified);
        let rho1 = r
            .classes
            .iter()
            .find(|c| c.contains(&"(1,0,1,0,0;)".to_string()))
            .unwrap();
        assert!(rho1.contains(&"(1,0,0,1,0;)".to_string()));
        for class in &r.classes {
            let tags: HashSet<Genus2Class> = class
                .iter()
                .map(|s| {
                    structure_of_signature_g2(&s.parse().unwrap(), DEFAULT_SEARCH_BUDGET)
                        .unwrap()
                        .class
                })
                .collect();
            assert_eq!(tags.len(), 1);
        }
    }
}
