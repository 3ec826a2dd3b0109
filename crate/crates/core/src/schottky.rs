//! Classical Schottky groups: circle pairings, marked groups, normalization,
//! marked-space coordinates and limit-set sampling.

use std::collections::HashMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config;
use crate::error::{Error, Result};
use crate::freegroup::FreeWord;
use crate::mobius::{MapClass, MobiusMap, Orientation, SpherePoint, C64};
use crate::par::{self, Execution};

/// A circle on the sphere: either round, or a line `Re(z·n̄) = offset` with
/// unit normal `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Circle {
    Round { center: C64, radius: f64 },
    Line { normal: C64, offset: f64 },
}

impl Circle {
    pub fn round(center: C64, radius: f64) -> Circle {
        assert!(radius > 0.0, "circle radius must be positive");
        Circle::Round { center, radius }
    }

    pub fn line(normal: C64, offset: f64) -> Circle {
        let n = normal.norm();
        assert!(n > 0.0, "line normal must be nonzero");
        Circle::Line {
            normal: normal / n,
            offset: offset / n,
        }
    }

    pub fn center(&self) -> Option<C64> {
        match *self {
            Circle::Round { center, .. } => Some(center),
            Circle::Line { .. } => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            Circle::Round { radius, .. } => Some(radius),
            Circle::Line { .. } => None,
        }
    }

    /// Three distinct points on the circle.
    pub fn sample_points(&self) -> [SpherePoint; 3] {
        match *self {
            Circle::Round { center, radius } => {
                let at = |t: f64| SpherePoint::finite(center + C64::from_polar(radius, t));
                [at(0.0), at(2.0 * PI / 3.0), at(4.0 * PI / 3.0)]
            }
            Circle::Line { normal, offset } => {
                let foot = normal * offset;
                let dir = normal * C64::new(0.0, 1.0);
                [
                    SpherePoint::finite(foot - dir),
                    SpherePoint::finite(foot + dir),
                    SpherePoint::infinity(),
                ]
            }
        }
    }

    /// Circle through three points; line form when they are (numerically)
    /// collinear or one of them is ∞.
    pub fn through(points: &[SpherePoint; 3]) -> Circle {
        let tol = config::tolerance();
        let finite: Vec<C64> = points
            .iter()
            .filter(|p| !p.is_infinite(tol * 1e-3))
            .filter_map(|p| p.to_complex())
            .collect();
        if finite.len() < 3 {
            return line_through(finite[0], finite[1]);
        }
        let (a, b, c) = (finite[0], finite[1], finite[2]);
        let (p, q) = ((b - a).re, (b - a).im);
        let (s, t) = ((c - a).re, (c - a).im);
        let d = 2.0 * (p * t - q * s);
        let nb = (b - a).norm_sqr();
        let nc = (c - a).norm_sqr();
        let span = nb.max(nc).max((c - b).norm_sqr());
        if d.abs() <= 1e-12 * span {
            return line_through(a, if nb >= nc { b } else { c });
        }
        let w = C64::new((nb * t - nc * q) / d, (p * nc - s * nb) / d);
        let radius = w.norm();
        if !radius.is_finite() || radius > 1e12 * span.sqrt().max(1.0) {
            return line_through(a, if nb >= nc { b } else { c });
        }
        Circle::Round {
            center: a + w,
            radius,
        }
    }

    /// Whether `p` lies in the closed disc bounded by a round circle, within
    /// `tol`. Lines bound no disc and always return false.
    pub fn disc_contains(&self, p: &SpherePoint, tol: f64) -> bool {
        match (*self, p.to_complex()) {
            (Circle::Round { center, radius }, Some(z)) => (z - center).norm() <= radius + tol,
            _ => false,
        }
    }

    /// Hausdorff-type distance `|c₁−c₂| + |r₁−r₂|`; infinite between a round
    /// circle and a line, and between non-parallel lines.
    pub fn distance(&self, other: &Circle) -> f64 {
        match (*self, *other) {
            (
                Circle::Round {
                    center: c1,
                    radius: r1,
                },
                Circle::Round {
                    center: c2,
                    radius: r2,
                },
            ) => (c1 - c2).norm() + (r1 - r2).abs(),
            (
                Circle::Line {
                    normal: n1,
                    offset: o1,
                },
                Circle::Line {
                    normal: n2,
                    offset: o2,
                },
            ) => {
                let same = (n1 - n2).norm() + (o1 - o2).abs();
                let flipped = (n1 + n2).norm() + (o1 + o2).abs();
                same.min(flipped)
            }
            _ => f64::INFINITY,
        }
    }
}

fn line_through(a: C64, b: C64) -> Circle {
    let dir = b - a;
    let normal = C64::new(0.0, 1.0) * dir / dir.norm();
    Circle::Line {
        normal,
        offset: (a * normal.conj()).re,
    }
}

/// Image of a circle under a (possibly orientation-reversing) Möbius map.
pub fn image_circle(f: &MobiusMap, c: &Circle) -> Circle {
    let pts = c.sample_points().map(|p| f.apply(&p));
    Circle::through(&pts)
}

/// Disjointness margin between the closed discs of two round circles;
/// negative when the discs meet or nest.
pub fn disc_margin(c1: &Circle, c2: &Circle) -> f64 {
    match (*c1, *c2) {
        (
            Circle::Round {
                center: a,
                radius: r,
            },
            Circle::Round {
                center: b,
                radius: s,
            },
        ) => (a - b).norm() - r - s,
        _ => f64::NEG_INFINITY,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedCircles {
    pub source: Circle,
    pub target: Circle,
    pub map: MobiusMap,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CirclePairing {
    pub pairs: Vec<PairedCircles>,
}

impl CirclePairing {
    pub fn new(pairs: Vec<PairedCircles>) -> Self {
        CirclePairing { pairs }
    }

    /// Builds each `A_j` sending `C_j` onto `C'_j`, exterior to interior.
    ///
    /// Three points `c + r e^{iφ}` of the source go to `c' + r' e^{i(θ−φ)}`,
    /// reversing the cyclic order; `θ` is a free twist parameter.
    pub fn from_circles(circles: &[(Circle, Circle, f64)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(circles.len());
        for (j, &(source, target, twist)) in circles.iter().enumerate() {
            let (
                Circle::Round {
                    center: c,
                    radius: r,
                },
                Circle::Round {
                    center: d,
                    radius: s,
                },
            ) = (source, target)
            else {
                return Err(Error::InvalidWitness(format!("pair {} uses a line", j + 1)));
            };
            let phis = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];
            let p = phis.map(|phi| SpherePoint::finite(c + C64::from_polar(r, phi)));
            let q = phis.map(|phi| SpherePoint::finite(d + C64::from_polar(s, twist - phi)));
            let map = MobiusMap::from_three_points(&p, &q)?;
            pairs.push(PairedCircles {
                source,
                target,
                map,
            });
        }
        Ok(CirclePairing { pairs })
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    pub fn circles(&self) -> Vec<Circle> {
        self.pairs
            .iter()
            .flat_map(|p| [p.source, p.target])
            .collect()
    }

    pub fn generators(&self) -> Vec<MobiusMap> {
        self.pairs.iter().map(|p| p.map).collect()
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PairReport {
    pub disjointness_margin: f64,
    pub hausdorff: f64,
    pub exterior_to_interior: bool,
    pub loxodromic: bool,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub pairs: Vec<PairReport>,
    pub valid: bool,
}

/// Checks disc disjointness, `A_j(C_j) = C'_j`, and that a point outside
/// `C_j` lands inside `C'_j`. Failures are reported, never thrown.
pub fn validate_pairing(p: &CirclePairing, tol: f64) -> ValidationReport {
    let circles = p.circles();
    let mut reports = Vec::with_capacity(p.pairs.len());
    for (j, pair) in p.pairs.iter().enumerate() {
        let mut margin = f64::INFINITY;
        for own in [2 * j, 2 * j + 1] {
            for (k, other) in circles.iter().enumerate() {
                if k != own {
                    margin = margin.min(disc_margin(&circles[own], other));
                }
            }
        }
        let hausdorff = image_circle(&pair.map, &pair.source).distance(&pair.target);
        let exterior_to_interior = match pair.source {
            Circle::Round { center, radius } => {
                let outside = SpherePoint::finite(center + C64::from_polar(3.0 * radius, 0.7));
                let image = pair.map.apply(&outside);
                pair.target.disc_contains(&image, 0.0)
                    && pair
                        .target
                        .disc_contains(&pair.map.apply(&SpherePoint::infinity()), 0.0)
            }
            Circle::Line { .. } => false,
        };
        let loxodromic = matches!(pair.map.classify(tol), Ok(MapClass::Loxodromic));
        reports.push(PairReport {
            disjointness_margin: margin,
            hausdorff,
            exterior_to_interior,
            loxodromic,
        });
    }
    let valid = reports.iter().all(|r| {
        r.disjointness_margin > tol && r.hausdorff < tol && r.exterior_to_interior && r.loxodromic
    });
    ValidationReport {
        pairs: reports,
        valid,
    }
}

/// An ordered tuple of loxodromic generators, optionally with a circle
/// pairing witnessing that the group is classical Schottky.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedSchottky {
    generators: Vec<MobiusMap>,
    witness: Option<CirclePairing>,
}

impl MarkedSchottky {
    pub fn new(generators: Vec<MobiusMap>) -> Result<Self> {
        let tol = config::tolerance();
        let mut fixed = Vec::with_capacity(2 * generators.len());
        for (j, a) in generators.iter().enumerate() {
            let fd = a.fixed_data().map_err(|e| match e {
                Error::NotLoxodromic { class } => Error::NotLoxodromic {
                    class: format!("generator {}: {class}", j + 1),
                },
                other => other,
            })?;
            fixed.push(fd.attracting);
            fixed.push(fd.repelling);
        }
        for i in 0..fixed.len() {
            for k in (i + 1)..fixed.len() {
                if fixed[i].chordal_distance(&fixed[k]) <= tol {
                    return Err(Error::DegenerateMarking(format!(
                        "generators {} and {} share a fixed point",
                        i / 2 + 1,
                        k / 2 + 1
                    )));
                }
            }
        }
        Ok(MarkedSchottky {
            generators,
            witness: None,
        })
    }

    /// Builds the marked group of a pairing and keeps it as witness; the
    /// pairing must validate.
    pub fn from_pairing(pairing: CirclePairing) -> Result<Self> {
        let report = validate_pairing(&pairing, config::tolerance());
        if !report.valid {
            return Err(Error::InvalidWitness(format!("{report:?}")));
        }
        let mut m = MarkedSchottky::new(pairing.generators())?;
        m.witness = Some(pairing);
        Ok(m)
    }

    pub fn with_witness(self, pairing: CirclePairing) -> Result<Self> {
        if pairing.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: pairing.rank(),
            });
        }
        for (a, p) in self.generators.iter().zip(&pairing.pairs) {
            if !a.approx_eq(&p.map, 1e-6 * (1.0 + a.scale())) {
                return Err(Error::InvalidWitness(
                    "witness maps differ from generators".into(),
                ));
            }
        }
        let witness = MarkedSchottky::from_pairing(pairing)?.witness;
        Ok(MarkedSchottky {
            generators: self.generators,
            witness,
        })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[MobiusMap] {
        &self.generators
    }

    pub fn witness(&self) -> Option<&CirclePairing> {
        self.witness.as_ref()
    }

    /// Conjugates every generator (`g A_j g⁻¹`) and carries the witness along
    /// when its circles stay round with the discs on the same side.
    pub fn conjugate(&self, g: &MobiusMap) -> MarkedSchottky {
        let generators = self.generators.iter().map(|a| a.conjugate_by(g)).collect();
        let witness = self.witness.as_ref().and_then(|w| {
            let pairs = w
                .pairs
                .iter()
                .map(|p| PairedCircles {
                    source: image_circle(g, &p.source),
                    target: image_circle(g, &p.target),
                    map: p.map.conjugate_by(g),
                })
                .collect();
            let moved = CirclePairing::new(pairs);
            validate_pairing(&moved, config::tolerance())
                .valid
                .then_some(moved)
        });
        MarkedSchottky {
            generators,
            witness,
        }
    }

    /// The map of the free-group element `w`, letters composed left to right.
    pub fn evaluate_word(&self, w: &FreeWord) -> MobiusMap {
        w.letters().iter().fold(MobiusMap::identity(), |acc, &l| {
            acc.compose(&self.letter(l))
        })
    }

    fn letter(&self, l: i32) -> MobiusMap {
        let a = self.generators[(l.unsigned_abs() - 1) as usize];
        if l > 0 {
            a
        } else {
            a.inverse()
        }
    }

    fn attracting_of_letter(&self, l: i32) -> Result<SpherePoint> {
        let fd = self.generators[(l.unsigned_abs() - 1) as usize].fixed_data()?;
        Ok(if l > 0 { fd.attracting } else { fd.repelling })
    }

    /// Conjugates so that `A₁`, `A₂`, `A₂A₁` have attracting fixed points
    /// `∞`, `0`, `1`. Returns the conjugated tuple and the conjugator `M`
    /// (each output generator is `M A_j M⁻¹`). The witness is dropped since
    /// its circles through ∞ no longer bound discs.
    pub fn normalize(&self) -> Result<(MarkedSchottky, MobiusMap)> {
        if self.rank() < 2 {
            return Err(Error::DegenerateMarking(format!(
                "rank {} < 2",
                self.rank()
            )));
        }
        let a1 = self.generators[0];
        let a2 = self.generators[1];
        let p = [
            a1.fixed_data()?.attracting,
            a2.fixed_data()?.attracting,
            a2.compose(&a1).fixed_data()?.attracting,
        ];
        let q = [
            SpherePoint::infinity(),
            SpherePoint::real(0.0),
            SpherePoint::real(1.0),
        ];
        let m = MobiusMap::from_three_points(&p, &q).map_err(|e| match e {
            Error::DegenerateTriple(i, j) => Error::DegenerateMarking(format!(
                "attracting points {} and {} of A1, A2, A2A1 coincide",
                i + 1,
                j + 1
            )),
            other => other,
        })?;
        let generators = self.generators.iter().map(|a| a.conjugate_by(&m)).collect();
        Ok((
            MarkedSchottky {
                generators,
                witness: None,
            },
            m,
        ))
    }

    /// Marked-space coordinates `(a₃..a_g, r₁..r_g, s₂..s_g)` of the
    /// normalized tuple: attracting points of `A_j` (j ≥ 3), repelling points
    /// of all `A_j`, and repelling points of `A_j A₁` (j ≥ 2).
    pub fn zeta(&self) -> Result<Vec<C64>> {
        let (n, _) = self.normalize()?;
        let g = n.rank();
        let mut named = Vec::with_capacity(3 * g - 3);
        for j in 2..g {
            named.push((
                format!("a{}", j + 1),
                n.generators[j].fixed_data()?.attracting,
            ));
        }
        for j in 0..g {
            named.push((
                format!("r{}", j + 1),
                n.generators[j].fixed_data()?.repelling,
            ));
        }
        let a1 = n.generators[0];
        for j in 1..g {
            named.push((
                format!("s{}", j + 1),
                n.generators[j].compose(&a1).fixed_data()?.repelling,
            ));
        }
        let tol = config::tolerance();
        let forbidden = [
            SpherePoint::real(0.0),
            SpherePoint::real(1.0),
            SpherePoint::infinity(),
        ];
        named
            .into_iter()
            .map(|(name, p)| {
                if forbidden.iter().any(|f| f.chordal_distance(&p) <= tol) {
                    return Err(Error::DegenerateMarking(format!(
                        "coordinate {name} is {p}"
                    )));
                }
                p.to_complex()
                    .ok_or_else(|| Error::DegenerateMarking(format!("coordinate {name} is inf")))
            })
            .collect()
    }

    /// Samples the limit set: for every reduced word `w` of length at most
    /// `max_len`, the image under `w` of the attracting fixed point of its
    /// last letter (the first map applied). Points are deduplicated within
    /// the global tolerance; order is the depth-first word order with
    /// letters ranked `x₁ < x₁⁻¹ < x₂ < …`.
    pub fn limit_points(
        &self,
        max_len: usize,
        cap: usize,
        exec: Execution,
    ) -> Result<Vec<SpherePoint>> {
        if let Some(w) = &self.witness {
            if !validate_pairing(w, config::tolerance()).valid {
                return Err(Error::InvalidWitness(
                    "witness pairing does not validate".into(),
                ));
            }
        }
        let g = self.rank();
        if g == 0 || max_len == 0 {
            return Ok(Vec::new());
        }
        let total = reduced_word_count(g, max_len);
        if total > cap as u128 {
            return Err(Error::ExplosionGuard { cap });
        }
        let letters = letter_order(g);
        let maps: Vec<MobiusMap> = letters.iter().map(|&l| self.letter(l)).collect();
        let attr: Vec<SpherePoint> = letters
            .iter()
            .map(|&l| self.attracting_of_letter(l))
            .collect::<Result<_>>()?;
        let inverse_index: Vec<usize> = (0..letters.len()).map(|i| i ^ 1).collect();
        let ctx = WordWalk {
            maps: &maps,
            attr: &attr,
            inverse_index: &inverse_index,
            max_len,
        };
        let branches = par::map_range(exec, letters.len(), |first| {
            let mut out = Vec::new();
            ctx.walk(maps[first], first, 1, &mut out);
            out
        });
        let mut set = PointSet::new(config::tolerance());
        for p in branches.into_iter().flatten() {
            set.insert(p);
        }
        Ok(set.into_points())
    }
}

struct WordWalk<'a> {
    maps: &'a [MobiusMap],
    attr: &'a [SpherePoint],
    inverse_index: &'a [usize],
    max_len: usize,
}

impl WordWalk<'_> {
    fn walk(&self, word: MobiusMap, last: usize, len: usize, out: &mut Vec<SpherePoint>) {
        out.push(word.apply(&self.attr[last]));
        if len == self.max_len {
            return;
        }
        for next in 0..self.maps.len() {
            if next != self.inverse_index[last] {
                self.walk(word.compose(&self.maps[next]), next, len + 1, out);
            }
        }
    }
}

/// Letters in the order `x₁, x₁⁻¹, x₂, x₂⁻¹, …` as signed indices.
fn letter_order(g: usize) -> Vec<i32> {
    (1..=g as i32).flat_map(|j| [j, -j]).collect()
}

/// Number of nonempty reduced words of length ≤ `max_len` in rank `g`.
pub fn reduced_word_count(g: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 2 * g as u128;
    for _ in 0..max_len {
        total = total.saturating_add(level);
        level = level.saturating_mul(2 * g as u128 - 1);
    }
    total
}

/// Tolerance-deduplicated point set keyed by a grid on the unit sphere.
struct PointSet {
    tol: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<SpherePoint>,
}

impl PointSet {
    fn new(tol: f64) -> Self {
        PointSet {
            tol,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: &SpherePoint) -> [i64; 3] {
        let v = sphere_coords(p);
        v.map(|x| (x / self.tol).floor() as i64)
    }

    fn insert(&mut self, p: SpherePoint) -> bool {
        let k = self.key(&p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        if ids
                            .iter()
                            .any(|&i| self.points[i].chordal_distance(&p) <= self.tol)
                        {
                            return false;
                        }
                    }
                }
            }
        }
        self.cells.entry(k).or_default().push(self.points.len());
        self.points.push(p);
        true
    }

    fn into_points(self) -> Vec<SpherePoint> {
        self.points
    }
}

/// Stereographic lift to the sphere of diameter one centered at the origin,
/// so Euclidean distance equals chordal distance.
fn sphere_coords(p: &SpherePoint) -> [f64; 3] {
    let (u, v) = (p.num(), p.den());
    let n = u.norm_sqr() + v.norm_sqr();
    let w = u * v.conj();
    [w.re / n, w.im / n, 0.5 * (u.norm_sqr() - v.norm_sqr()) / n]
}

/// Random classical Schottky group of rank `g`: `2g` disjoint circles on a
/// jittered ring, circle `j` paired with the opposite circle `j + g`.
pub fn random_classical<R: Rng + ?Sized>(g: usize, rng: &mut R) -> Result<MarkedSchottky> {
    assert!(g >= 1, "rank must be positive");
    let n = 2 * g;
    let sector = 2.0 * PI / n as f64;
    let centers: Vec<C64> = (0..n)
        .map(|k| {
            let angle = sector * (k as f64 + rng.random_range(-0.15..0.15));
            C64::from_polar(rng.random_range(0.9..1.1), angle)
        })
        .collect();
    let mut radii = vec![0.0; n];
    for k in 0..n {
        let nearest = (0..n)
            .filter(|&i| i != k)
            .map(|i| (centers[i] - centers[k]).norm())
            .fold(f64::INFINITY, f64::min);
        radii[k] = nearest * rng.random_range(0.15..0.45);
    }
    let triples: Vec<(Circle, Circle, f64)> = (0..g)
        .map(|j| {
            (
                Circle::round(centers[j], radii[j]),
                Circle::round(centers[j + g], radii[j + g]),
                rng.random_range(0.0..2.0 * PI),
            )
        })
        .collect();
    MarkedSchottky::from_pairing(CirclePairing::from_circles(&triples)?)
}

/// `count` reproducible random classical groups; sample `i` uses stream `i`
/// of a ChaCha8 generator seeded with `seed`, so results do not depend on the
/// execution mode.
pub fn sample_classical(
    g: usize,
    count: usize,
    seed: u64,
    exec: Execution,
) -> Vec<Result<MarkedSchottky>> {
    par::map_range(exec, count, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        random_classical(g, &mut rng)
    })
}

/// Random determinant-one preserving map with entries in a bounded box.
pub fn random_mobius<R: Rng + ?Sized>(rng: &mut R) -> MobiusMap {
    loop {
        let mut e = [C64::new(0.0, 0.0); 4];
        for z in e.iter_mut() {
            *z = C64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        }
        let det = e[0] * e[3] - e[1] * e[2];
        if det.norm() > 0.5 {
            return MobiusMap::from_matrix(e, Orientation::Preserving);
        }
    }
}
