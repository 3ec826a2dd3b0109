// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Built without the libtest harness so the lines always show.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schottky_core::enumeration::{m_g, m_g_oracle, q_multiset, t_gamma, Signature};
use schottky_core::freegroup::{rho_from_signature, FgAuto, FreeWord};
use schottky_core::par::Execution;
use schottky_core::realstructures::{
    invert_generators, is_fixed_point, keen_involution, realize_signature,
    structure_of_signature_g2, Genus2Class, RealStructureSpec, DEFAULT_SEARCH_BUDGET,
};
use schottky_core::schottky::{random_mobius, sample_classical, MarkedSchottky};
use schottky_core::{MobiusMap, Orientation, SpherePoint};

const SEED: u64 = 20240917;

type Mat = [Complex64; 4];

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mul(x: &Mat, y: &Mat) -> Mat {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn det(x: &Mat) -> Complex64 {
    x[0] * x[3] - x[1] * x[2]
}

fn inv(x: &Mat) -> Mat {
    let d = det(x);
    [x[3] / d, -x[1] / d, -x[2] / d, x[0] / d]
}

/// Distance in PSL(2,C) after scaling both to determinant one.
fn psl_distance(x: &Mat, y: &Mat) -> f64 {
    let nx = det(x).sqrt();
    let ny = det(y).sqrt();
    let (mut minus, mut plus) = (0.0f64, 0.0f64);
    for i in 0..4 {
        let (a, b) = (x[i] / nx, y[i] / ny);
        minus = minus.max((a - b).norm());
        plus = plus.max((a + b).norm());
    }
    minus.min(plus)
}

/// Möbius action `z ↦ (az+b)/(cz+d)` on finite points.
fn mobius(x: &Mat, z: Complex64) -> Complex64 {
    (x[0] * z + x[1]) / (x[2] * z + x[3])
}

fn word_matrix(gens: &[Mat], w: &FreeWord) -> Mat {
    w.letters().iter().fold(
        [cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)],
        |acc, &l| {
            let g = gens[l.unsigned_abs() as usize - 1];
            mul(&acc, &if l > 0 { g } else { inv(&g) })
        },
    )
}

fn classical(g: usize, count: usize) -> Vec<MarkedSchottky> {
    sample_classical(g, count, SEED, Execution::Parallel)
        .into_iter()
        .map(|m| m.expect("classical sample"))
        .collect()
}

/// Freely reduced product of letter lists, done here without the library.
fn reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Applies an automorphism given by images to a word, then reduces.
fn substitute(images: &[Vec<i32>], w: &[i32]) -> Vec<i32> {
    reduce(w.iter().flat_map(|&l| {
        let img = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            img.clone()
        } else {
            img.iter().rev().map(|x| -x).collect()
        }
    }))
}

/// Whether `images` describe an inner automorphism `x ↦ c x c⁻¹`. Any
/// conjugator can be shortened to one not ending in `x_j^±1`, which is then
/// a prefix of the reduced image of `x_j`, so prefixes are the only candidates.
fn is_inner(images: &[Vec<i32>]) -> bool {
    let candidates = images
        .iter()
        .flat_map(|w| (0..=w.len()).map(move |k| &w[..k]));
    candidates.into_iter().any(|c| {
        images.iter().enumerate().all(|(j, w)| {
            let inv_c = c.iter().rev().map(|l| -l);
            reduce(c.iter().copied().chain([j as i32 + 1]).chain(inv_c)) == *w
        })
    })
}

fn letters_of(rho: &FgAuto) -> Vec<Vec<i32>> {
    rho.images().iter().map(|w| w.letters().to_vec()).collect()
}

fn criterion_1() -> (bool, String) {
    let got: Vec<BigUint> = (0..=2).map(m_g).collect();
    let ok = got == [2u32, 6, 17].map(BigUint::from);
    (
        ok,
        format!(
            "M_0, M_1, M_2 = {:?}",
            got.iter().map(ToString::to_string).collect::<Vec<_>>()
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let mut bad = Vec::new();
    for g in 0..=10 {
        let oracle = m_g_oracle(g, 12, Execution::Parallel).expect("within bound");
        if m_g(g) != oracle {
            bad.push(g);
        }
    }
    (
        bad.is_empty(),
        format!("g = 0..=10, mismatches {bad:?}, M_10 = {}", m_g(10)),
    )
}

fn criterion_3() -> (bool, String) {
    let got: Vec<BigUint> = (1..=3).map(t_gamma).collect();
    (
        got == [2u32, 6, 40].map(BigUint::from),
        format!("T_1..T_3 = {got:?}"),
    )
}

fn criterion_4() -> (bool, String) {
    let mut failures = 0;
    for n in 1..=30u32 {
        for l in 0..=30u64 {
            let sum: BigUint = (1..=l).map(|j| q_multiset(j, n - 1)).sum();
            if q_multiset(l, n) != sum {
                failures += 1;
            }
        }
    }
    (
        failures == 0,
        format!("{failures} failures over L, n <= 30"),
    )
}

fn criterion_5() -> (bool, String) {
    let sigs: Vec<Signature> = (1..=6).flat_map(Signature::all_of_rank).collect();
    let mut bad = Vec::new();
    for s in &sigs {
        let rho = rho_from_signature(s).expect("valid signature");
        let images = letters_of(&rho);
        let square: Vec<Vec<i32>> = images.iter().map(|w| substitute(&images, w)).collect();
        if !is_inner(&square) {
            bad.push(s.to_string());
        }
    }
    // The oracle itself must separate inner from outer.
    let oracle_sane = is_inner(&[vec![2, 1, -2], vec![2]]) && !is_inner(&[vec![-1], vec![2]]);
    let ok = oracle_sane && sigs.len() >= 200 && bad.is_empty();
    (ok, format!("{} signatures, failures {bad:?}", sigs.len()))
}

fn criterion_6() -> (bool, String) {
    let s: Signature = "(0,0,0,2,0;)".parse().expect("valid");
    let rho = rho_from_signature(&s).expect("valid");
    let want = [vec![1], vec![1, -3], vec![1, -2]];
    let ok = letters_of(&rho) == want;
    let shown: Vec<String> = rho.images().iter().map(ToString::to_string).collect();
    (ok, format!("images {shown:?}"))
}

fn criterion_7() -> (bool, String) {
    use Genus2Class::*;
    let table = [
        ("(3,0,0,0,0;)", J2),
        ("(2,1,0,0,0;)", J2),
        ("(1,2,0,0,0;)", J2),
        ("(0,3,0,0,0;)", J2),
        ("(0,0,0,0,1;2)", J2),
        ("(1,0,1,0,0;)", Rho1),
        ("(1,0,0,1,0;)", Rho1),
        ("(0,1,0,1,0;)", Rho1),
        ("(1,0,0,0,1;1)", Rho2),
        ("(0,1,0,0,1;1)", Rho2),
    ];
    let mut bad = Vec::new();
    let mut tally = [0; 4];
    for (text, want) in table {
        let s: Signature = text.parse().expect("valid");
        let got = structure_of_signature_g2(&s, DEFAULT_SEARCH_BUDGET).map(|c| c.class);
        match got {
            Ok(c) if c == want => {
                tally[Genus2Class::ALL.iter().position(|&x| x == c).unwrap()] += 1
            }
            other => bad.push(format!("{text}: {other:?}")),
        }
    }
    let ok = bad.is_empty() && tally == [5, 3, 2, 0];
    (
        ok,
        format!(
            "J2/rho1/rho2 = {}/{}/{}, failures {bad:?}",
            tally[0], tally[1], tally[2]
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut bad = 0;
    let samples = classical(2, 200);
    for m in &samples {
        let (a1, a2) = (m.generators()[0], m.generators()[1]);
        let Ok(e) = keen_involution(&a1, &a2) else {
            bad += 1;
            continue;
        };
        if e.trace() != cx(0.0, 0.0) {
            bad += 1;
        }
        // The commutator difference computed directly; E must agree with it
        // projectively.
        let (x, y) = (a1.matrix(), a2.matrix());
        let xy = mul(&x, &y);
        let yx = mul(&y, &x);
        let diff = [xy[0] - yx[0], xy[1] - yx[1], xy[2] - yx[2], xy[3] - yx[3]];
        worst = worst.max(psl_distance(&diff, &e.matrix()));
        for a in [x, y] {
            let em = e.matrix();
            let conj = mul(&mul(&em, &a), &inv(&em));
            worst = worst.max(psl_distance(&conj, &inv(&a)));
        }
    }
    (
        bad == 0 && worst < 1e-8,
        format!("200 samples, {bad} failures, worst defect {worst:.2e}"),
    )
}

/// Pointwise check that `c ∘ A_j ∘ c⁻¹ = conj ∘ A'_j ∘ conj` on a few
/// points, where `A'_j` is the word `ρ(x_j)`: the defining relation of a
/// fixed point of `J ∘ ρ`.
fn fixed_point_defect(m: &MarkedSchottky, rho: &FgAuto, c: &MobiusMap) -> f64 {
    let gens: Vec<Mat> = m.generators().iter().map(MobiusMap::matrix).collect();
    let cm = c.matrix();
    let probes = [cx(0.3, 0.7), cx(-1.2, 0.4), cx(2.5, -0.9)];
    let mut worst = 0.0f64;
    for (j, a) in gens.iter().enumerate() {
        let target = word_matrix(&gens, rho.image(j + 1));
        for &z in &probes {
            let lhs = mobius(&cm, mobius(a, mobius(&inv(&cm), z)));
            let rhs = mobius(&target, z.conj()).conj();
            worst = worst.max(SpherePoint::finite(lhs).chordal_distance(&SpherePoint::finite(rhs)));
        }
    }
    worst
}

fn criterion_9() -> (bool, String) {
    let a = cx(1.5, 0.5);
    let a1 = MobiusMap::preserving(a, cx(0.0, 1.5), cx(0.0, -1.0), a.conj());
    let a2 = MobiusMap::preserving(cx(3.0, 0.0), cx(8.0, 0.0), cx(1.0, 0.0), cx(3.0, 0.0));
    let a3 = MobiusMap::preserving(cx(3.0, 0.0), cx(1.0, 0.0), cx(8.0, 0.0), cx(3.0, 0.0));
    let m = MarkedSchottky::new(vec![a1, a2, a3]).expect("loxodromic");
    let twist = invert_generators(3, &[1]);
    let spec = RealStructureSpec::new(twist.clone()).expect("involution");
    let witness = is_fixed_point(&spec, &m, 1e-8).expect("solvable");
    let mixed = witness
        .as_ref()
        .map(|w| (w.residual, fixed_point_defect(&m, &twist, &w.conjugator)));
    let mixed_ok = mixed.is_some_and(|(r, d)| r < 1e-8 && d < 1e-8);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut real_bad = 0;
    for _ in 0..50 {
        let gens: Vec<MobiusMap> = (0..3)
            .map(|_| loop {
                let g = random_mobius(&mut rng);
                // Real matrices: the real parts of a random map, rescaled.
                let re = g.matrix().map(|z| cx(z.re, 0.0));
                let d = det(&re).re;
                if d > 0.3 {
                    let s = d.sqrt();
                    let h = MobiusMap::from_matrix(re.map(|z| z / s), Orientation::Preserving);
                    if h.trace().re.abs() > 2.2 {
                        break h;
                    }
                }
            })
            .collect();
        let Ok(real) = MarkedSchottky::new(gens) else {
            continue;
        };
        let spec = RealStructureSpec::canonical(3);
        match is_fixed_point(&spec, &real, 1e-8) {
            Ok(Some(w))
                if psl_distance(&w.conjugator.matrix(), &MobiusMap::identity().matrix()) < 1e-9 => {
            }
            _ => real_bad += 1,
        }
    }
    let ok = mixed_ok && real_bad == 0;
    (ok, format!("mixed example (residual, pointwise defect) {mixed:?}, real tuples without identity witness {real_bad}"))
}

fn criterion_10() -> (bool, String) {
    let spec = Genus2Class::Rho3.spec();
    let samples = classical(2, 1000);
    let hits = samples
        .iter()
        .filter(|m| !matches!(is_fixed_point(&spec, m, 1e-8), Ok(None)))
        .count();
    (
        hits == 0,
        format!("{hits} of 1000 samples not certified empty"),
    )
}

fn criterion_11() -> (bool, String) {
    let s: Signature = "(2,0,0,0,0;)".parse().expect("valid");
    let r = realize_signature(&s).expect("realizable");
    let rho = rho_from_signature(&s).expect("valid");
    let m = r.marked().expect("loxodromic");
    let e1 = r.transversal();
    // The realization's reflections must be z ↦ 1/z̄ and z ↦ 5 + 1/(z̄ − 5).
    let probes = [cx(0.3, 0.7), cx(-1.2, 0.4), cx(6.5, -0.9)];
    let mut layout = 0.0f64;
    let second = *r.maps.values().nth(1).expect("two factors");
    for &z in &probes {
        let want1 = SpherePoint::finite(cx(1.0, 0.0) / z.conj());
        let want2 = SpherePoint::finite(cx(5.0, 0.0) + cx(1.0, 0.0) / (z.conj() - 5.0));
        layout = layout.max(e1.apply_complex(z).chordal_distance(&want1));
        layout = layout.max(second.apply_complex(z).chordal_distance(&want2));
    }
    let lhs = e1.compose(&m.generators()[0]).compose(&e1);
    let rhs = m.evaluate_word(rho.image(1));
    let defect = lhs.projective_distance(&rhs);
    let ok = rho.image(1).letters() == [-1] && defect < 1e-9 && layout < 1e-12;
    (
        ok,
        format!(
            "rho(x1) = {}, defect {defect:.2e}, layout error {layout:.2e}",
            rho.image(1)
        ),
    )
}

fn max_defect(a: &MarkedSchottky, b: &MarkedSchottky) -> f64 {
    a.generators()
        .iter()
        .zip(b.generators())
        .map(|(x, y)| psl_distance(&x.matrix(), &y.matrix()) / x.scale().max(1.0))
        .fold(0.0, f64::max)
}

fn criterion_12() -> (bool, String) {
    let mut worst = 0.0f64;
    let mut errors = 0;
    let mut placement = 0.0f64;
    let mut coord_faults = 0;
    for i in 0..500u64 {
        let g = 2 + (i % 3) as usize;
        let m = sample_classical(g, 1, SEED.wrapping_add(i), Execution::Sequential)
            .pop()
            .unwrap()
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ i);
        let h = random_mobius(&mut rng);
        let (Ok((n1, _)), Ok(z)) = (m.normalize(), m.zeta()) else {
            errors += 1;
            continue;
        };
        let (Ok((n2, _)), Ok((n3, _))) = (n1.normalize(), m.conjugate(&h).normalize()) else {
            errors += 1;
            continue;
        };
        worst = worst.max(max_defect(&n1, &n2)).max(max_defect(&n1, &n3));
        // A1 fixes ∞ (c = 0), A2 fixes 0 (b = 0), A2 A1 fixes 1.
        let gens: Vec<Mat> = n1.generators().iter().map(MobiusMap::matrix).collect();
        let a21 = mul(&gens[1], &gens[0]);
        placement = placement
            .max(gens[0][2].norm())
            .max(gens[1][1].norm())
            .max((mobius(&a21, cx(1.0, 0.0)) - 1.0).norm());
        if z.len() != 3 * g - 3 || z.iter().any(|w| w.norm() < 1e-6 || (w - 1.0).norm() < 1e-6) {
            coord_faults += 1;
        }
    }
    let ok = errors == 0 && worst < 1e-9 && placement < 1e-9 && coord_faults == 0;
    (
        ok,
        format!(
            "500 samples, {errors} errors, worst defect {worst:.2e}, placement {placement:.2e}, {coord_faults} coordinate faults"
        ),
    )
}

type Criterion = (&'static str, fn() -> (bool, String), Option<u64>);

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("enumeration exactness", criterion_1, Some(1)),
        ("oracle agreement", criterion_2, Some(60)),
        ("real Schottky counts", criterion_3, None),
        ("Q recursion", criterion_4, None),
        ("rho involutivity", criterion_5, Some(60)),
        ("case-3 table", criterion_6, None),
        ("genus-2 classification", criterion_7, Some(30)),
        ("Keen involution", criterion_8, None),
        ("fixed-point solver", criterion_9, None),
        ("rho3 emptiness sampling", criterion_10, None),
        ("geometry cross-validation", criterion_11, None),
        ("normalization and coordinates", criterion_12, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|s| took < Duration::from_secs(s));
        let pass = ok && in_time;
        failed += usize::from(!pass);
        let timing = match limit {
            Some(s) => format!(" [{:.2}s of {s}s]", took.as_secs_f64()),
            None => String::new(),
        };
        println!(
            "{} {:>2} {name}: {detail}{timing}",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
