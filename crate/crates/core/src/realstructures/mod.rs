//! Real structures on marked Schottky space. Each one is `J_g ∘ ρ` for an
//! outer automorphism `ρ` of order at most two, where `J_g` conjugates every
//! generator entrywise; only `ρ` is stored.

mod genus2;
mod realize;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{FgAuto, FreeWord};
use crate::mobius::{MobiusMap, Orientation, SpherePoint};
use crate::schottky::MarkedSchottky;

pub use genus2::{
    conjugacy_experiment, conjugate_search, genus2_classes, structure_of_signature_g2,
    ConjugacyReport, ExperimentGroup, ExperimentMember, Genus2Class, Genus2Classification,
    Genus2Data, Genus2Entry, Search, Verdict, DEFAULT_SEARCH_BUDGET, GENUS2_TABLE,
};
pub use realize::{realize_signature, Realization};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealStructureSpec {
    pub rho: FgAuto,
}

impl RealStructureSpec {
    /// Rejects twists whose class in `Out(F_g)` does not have order one or two.
    pub fn new(rho: FgAuto) -> Result<Self> {
        match rho.order_in_out(2) {
            Some(_) => Ok(RealStructureSpec { rho }),
            None => Err(Error::NotAutomorphism(format!(
                "({rho}) does not have order 1 or 2 in Out"
            ))),
        }
    }

    /// Skips the order check; genus-2 twists such as `(x₂⁻¹, x₁)` have order
    /// four in `Out(F₂)` and only become involutions modulo `ρ₀`.
    pub fn new_unchecked(rho: FgAuto) -> Self {
        RealStructureSpec { rho }
    }

    /// The canonical structure `J_g`.
    pub fn canonical(rank: usize) -> Self {
        RealStructureSpec {
            rho: FgAuto::identity(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.rho.rank()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointWitness {
    pub conjugator: MobiusMap,
    pub residual: f64,
}

/// Entrywise conjugate of every generator.
pub fn canonical_j(m: &MarkedSchottky) -> MarkedSchottky {
    let gens = m
        .generators()
        .iter()
        .map(MobiusMap::bar_conjugate)
        .collect();
    MarkedSchottky::new(gens).expect("conjugation preserves loxodromy and distinct fixed points")
}

/// Generator `j` of the result is the conjugate of the word `ρ(x_j)`
/// evaluated on `m`.
pub fn act(spec: &RealStructureSpec, m: &MarkedSchottky) -> Result<MarkedSchottky> {
    if spec.rank() != m.rank() {
        return Err(Error::RankMismatch {
            expected: spec.rank(),
            got: m.rank(),
        });
    }
    let gens = spec
        .rho
        .images()
        .iter()
        .map(|w| m.evaluate_word(w).bar_conjugate())
        .collect();
    MarkedSchottky::new(gens)
}

/// Re-marks `m` along `c`: generator `j` becomes the map of `c(x_j)`.
pub fn remark(m: &MarkedSchottky, c: &FgAuto) -> Result<MarkedSchottky> {
    if c.rank() != m.rank() {
        return Err(Error::RankMismatch {
            expected: m.rank(),
            got: c.rank(),
        });
    }
    MarkedSchottky::new(c.images().iter().map(|w| m.evaluate_word(w)).collect())
}

/// Largest projective defect of `M A_j M⁻¹ = B_j` over the generators.
pub fn conjugation_residual(m: &MobiusMap, a: &MarkedSchottky, b: &MarkedSchottky) -> f64 {
    a.generators()
        .iter()
        .zip(b.generators())
        .map(|(x, y)| x.conjugate_by(m).projective_distance(y))
        .fold(0.0, f64::max)
}

/// Decides whether `[m]` is fixed by `J_g ∘ ρ`. A conjugator from `m` to
/// `act(spec, m)` must carry the fixed points of `A₁` and the attracting
/// point of `A₂` to the corresponding points of the image, which pins down
/// a single candidate; it is accepted when every generator equation holds
/// within `tol`.
pub fn is_fixed_point(
    spec: &RealStructureSpec,
    m: &MarkedSchottky,
    tol: f64,
) -> Result<Option<FixedPointWitness>> {
    if m.rank() < 2 {
        return Err(Error::DegenerateMarking(format!("rank {} < 2", m.rank())));
    }
    let b = act(spec, m)?;
    let source = anchor_points(m)?;
    let target = anchor_points(&b)?;
    let conjugator = MobiusMap::from_three_points(&source, &target).map_err(|e| match e {
        Error::DegenerateTriple(i, j) => {
            Error::DegenerateMarking(format!("anchor points {} and {} coincide", i + 1, j + 1))
        }
        other => other,
    })?;
    let residual = conjugation_residual(&conjugator, m, &b);
    Ok((residual < tol).then_some(FixedPointWitness {
        conjugator,
        residual,
    }))
}

fn anchor_points(m: &MarkedSchottky) -> Result<[SpherePoint; 3]> {
    let f1 = m.generators()[0].fixed_data()?;
    let f2 = m.generators()[1].fixed_data()?;
    Ok([f1.attracting, f1.repelling, f2.attracting])
}

/// `A₁A₂ − A₂A₁` renormalized to determinant one. The diagonal is written
/// as `(x, −x)` so the trace is exactly zero.
pub fn keen_involution(a1: &MobiusMap, a2: &MobiusMap) -> Result<MobiusMap> {
    if !a1.is_preserving() || !a2.is_preserving() {
        return Err(Error::NotLoxodromic {
            class: "orientation-reversing".into(),
        });
    }
    let [p, q, r, s] = a1.matrix();
    let [t, u, v, w] = a2.matrix();
    let e11 = (p * t + q * v) - (t * p + u * r);
    let e12 = (p * u + q * w) - (t * q + u * s);
    let e21 = (r * t + s * v) - (v * p + w * r);
    let det = -e11 * e11 - e12 * e21;
    let scale = a1.scale().max(a2.scale()).powi(2);
    if det.norm() < crate::config::tolerance() * scale * scale {
        return Err(Error::SingularDifference { det: det.norm() });
    }
    MobiusMap::try_from_matrix([e11, e12, e21, -e11], Orientation::Preserving)
        .ok_or(Error::SingularDifference { det: det.norm() })
}

/// `x_j ↦ x_j⁻¹` for the listed generators, identity elsewhere.
pub fn invert_generators(rank: usize, which: &[usize]) -> FgAuto {
    let images = (1..=rank)
        .map(|j| {
            let x = FreeWord::generator(j);
            if which.contains(&j) {
                x.inverse()
            } else {
                x
            }
        })
        .collect();
    FgAuto::new(rank, images).expect("signed permutation")
}
