use proptest::prelude::*;

use schottky_core::enumeration::Signature;
use schottky_core::par::Execution;
use schottky_core::realstructures::{
    act, conjugation_residual, invert_generators, is_fixed_point, keen_involution,
    realize_signature, Genus2Class, RealStructureSpec,
};
use schottky_core::schottky::{sample_classical, MarkedSchottky};
use schottky_core::{MobiusMap, SpherePoint, C64};

fn sample(g: usize, seed: u64) -> MarkedSchottky {
    sample_classical(g, 1, seed, Execution::Sequential)
        .pop()
        .unwrap()
        .unwrap()
}

fn arb_mobius() -> impl Strategy<Value = MobiusMap> {
    proptest::array::uniform4((-2.0f64..2.0, -2.0f64..2.0))
        .prop_map(|e| e.map(|(re, im)| C64::new(re, im)))
        .prop_filter("well conditioned", |e| {
            (e[0] * e[3] - e[1] * e[2]).norm() > 0.5
        })
        .prop_map(|e| MobiusMap::preserving(e[0], e[1], e[2], e[3]))
}

fn arb_spec(g: usize) -> impl Strategy<Value = RealStructureSpec> {
    proptest::collection::vec(any::<bool>(), g).prop_map(move |flags| {
        let which: Vec<usize> = (1..=g).filter(|&j| flags[j - 1]).collect();
        RealStructureSpec::new(invert_generators(g, &which)).unwrap()
    })
}

fn equivalent(a: &MarkedSchottky, b: &MarkedSchottky) -> bool {
    let (na, _) = a.normalize().unwrap();
    let (nb, _) = b.normalize().unwrap();
    na.generators()
        .iter()
        .zip(nb.generators())
        .all(|(x, y)| x.projective_distance(y) < 1e-8 * x.scale().max(1.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn act_is_an_involution_on_classes(seed in any::<u64>(), (g, spec) in (2usize..=3).prop_flat_map(|g| (Just(g), arb_spec(g)))) {
        let m = sample(g, seed);
        let twice = act(&spec, &act(&spec, &m).unwrap()).unwrap();
        prop_assert!(equivalent(&m, &twice));
    }

    #[test]
    fn genus2_classes_act_as_involutions(seed in any::<u64>(), k in 0usize..3) {
        let m = sample(2, seed);
        let spec = [Genus2Class::J2, Genus2Class::Rho1, Genus2Class::Rho2][k].spec();
        let twice = act(&spec, &act(&spec, &m).unwrap()).unwrap();
        prop_assert!(equivalent(&m, &twice));
    }

    #[test]
    fn witnesses_are_sound(idx in 0usize..64, h in arb_mobius()) {
        // Conjugating a realization keeps it a fixed point of its own structure.
        let sigs: Vec<Signature> = (2..=3).flat_map(Signature::all_of_rank).collect();
        let s = &sigs[idx % sigs.len()];
        let r = realize_signature(s).unwrap();
        let m = r.marked().unwrap().conjugate(&h);
        let spec = RealStructureSpec::new_unchecked(r.rho().unwrap());
        // Residuals are absolute entry differences, so allow for rounding at
        // the size of the entries and of the conjugation by `h`.
        let size = m.generators().iter().map(MobiusMap::scale).fold(1.0, f64::max);
        let tol = (1e-9 + 1e-12 * size * size) * h.scale().powi(4);
        let w = is_fixed_point(&spec, &m, tol).unwrap();
        prop_assert!(w.is_some(), "{s} not recognized at tolerance {tol:.1e}");
        // The same tolerance still rejects a slightly moved group.
        let mut moved = m.generators().to_vec();
        moved[1] = moved[1].compose(&MobiusMap::preserving(C64::new(1.0, 0.0), C64::new(1e-4, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
        let moved = MarkedSchottky::new(moved).unwrap();
        prop_assert!(is_fixed_point(&spec, &moved, tol).unwrap().is_none(), "{s} perturbed still accepted");
        let w = w.unwrap();
        let image = act(&spec, &m).unwrap();
        prop_assert!(conjugation_residual(&w.conjugator, &m, &image) < tol);
        // Pointwise: C A_j C⁻¹ agrees with the image generator.
        for (a, b) in m.generators().iter().zip(image.generators()) {
            let z = SpherePoint::finite(C64::new(0.31, -0.47));
            let lhs = w.conjugator.apply(&a.apply(&w.conjugator.inverse().apply(&z)));
            prop_assert!(lhs.chordal_distance(&b.apply(&z)) < 1e-7);
        }
    }

    #[test]
    fn keen_involution_inverts_both_generators(seed in any::<u64>()) {
        let m = sample(2, seed);
        let (a1, a2) = (m.generators()[0], m.generators()[1]);
        let e = keen_involution(&a1, &a2).unwrap();
        prop_assert_eq!(e.trace(), C64::new(0.0, 0.0));
        prop_assert!(e.compose(&e).is_identity(1e-9));
        for a in [a1, a2] {
            prop_assert!(a.conjugate_by(&e).projective_distance(&a.inverse()) < 1e-8);
        }
    }

    #[test]
    fn rho3_has_no_classical_fixed_points(seed in any::<u64>()) {
        let m = sample(2, seed);
        prop_assert!(is_fixed_point(&Genus2Class::Rho3.spec(), &m, 1e-8).unwrap().is_none());
    }
}

#[test]
fn geometry_matches_symbolic_rho() {
    for g in 1..=3 {
        for s in Signature::all_of_rank(g) {
            let r = realize_signature(&s).unwrap();
            let m = r.marked().unwrap();
            let t = r.transversal();
            for (x, w) in m.generators().iter().zip(r.rho().unwrap().images()) {
                let lhs = t.compose(x).compose(&t.inverse());
                assert!(lhs.approx_eq(&m.evaluate_word(w), 1e-8), "{s}");
            }
        }
    }
}
