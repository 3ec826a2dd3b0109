//! Möbius and extended Möbius transformations of the Riemann sphere.
//!
//! Maps are stored as a determinant-one complex matrix together with an
//! orientation flag. An orientation-reversing map with matrix `M` acts as
//! `z ↦ M(z̄)`. All comparisons are projective: a map is only defined up to
//! the global sign of its matrix.

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config;
use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A point of the Riemann sphere in homogeneous coordinates `(num : den)`.
///
/// The representative is scaled so that `max(|num|, |den|) = 1`; `(1 : 0)` is
/// the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    num: C64,
    den: C64,
}

impl SpherePoint {
    /// Builds a point from a homogeneous pair. Returns `None` for `(0 : 0)`
    /// or non-finite input.
    pub fn try_new(num: C64, den: C64) -> Option<Self> {
        let scale = num.norm().max(den.norm());
        if !(scale.is_finite() && scale > 0.0) {
            return None;
        }
        Some(SpherePoint {
            num: num / scale,
            den: den / scale,
        })
    }

    pub fn new(num: C64, den: C64) -> Self {
        Self::try_new(num, den).expect("homogeneous pair must not be (0:0)")
    }

    pub fn finite(z: C64) -> Self {
        Self::new(z, ONE)
    }

    pub fn real(x: f64) -> Self {
        Self::finite(C64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        SpherePoint {
            num: ONE,
            den: ZERO,
        }
    }

    pub fn num(&self) -> C64 {
        self.num
    }

    pub fn den(&self) -> C64 {
        self.den
    }

    /// Affine coordinate, or `None` when the denominator vanishes exactly.
    pub fn to_complex(&self) -> Option<C64> {
        if self.den == ZERO {
            None
        } else {
            Some(self.num / self.den)
        }
    }

    /// True when the point lies within `tol` (chordally) of ∞.
    pub fn is_infinite(&self, tol: f64) -> bool {
        self.chordal_distance(&SpherePoint::infinity()) <= tol
    }

    /// Chordal distance on the sphere of diameter one.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        let cross = self.num * other.den - other.num * self.den;
        let n1 = (self.num.norm_sqr() + self.den.norm_sqr()).sqrt();
        let n2 = (other.num.norm_sqr() + other.den.norm_sqr()).sqrt();
        cross.norm() / (n1 * n2)
    }

    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        self.chordal_distance(other) <= tol
    }

    pub fn conj(&self) -> SpherePoint {
        SpherePoint {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_complex() {
            Some(z) => write!(f, "{}{:+}i", z.re, z.im),
            None => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn compose(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
    PseudoParabolic,
    GlideReflection,
    PseudoElliptic,
    Reflection,
    ImaginaryReflection,
}

impl MapClass {
    pub fn name(self) -> &'static str {
        match self {
            MapClass::Identity => "identity",
            MapClass::Parabolic => "parabolic",
            MapClass::Elliptic => "elliptic",
            MapClass::Loxodromic => "loxodromic",
            MapClass::PseudoParabolic => "pseudo-parabolic",
            MapClass::GlideReflection => "glide-reflection",
            MapClass::PseudoElliptic => "pseudo-elliptic",
            MapClass::Reflection => "reflection",
            MapClass::ImaginaryReflection => "imaginary-reflection",
        }
    }
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Attracting/repelling fixed points of a loxodromic map and its multiplier
/// (the derivative at the attracting point, so `|multiplier| < 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedData {
    pub attracting: SpherePoint,
    pub repelling: SpherePoint,
    pub multiplier: C64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MapRecord", into = "MapRecord")]
pub struct MobiusMap {
    m: [C64; 4],
    orientation: Orientation,
}

impl MobiusMap {
    /// Normalizes `[a, b, c, d]` to determinant one. `None` if singular.
    pub fn try_from_matrix(m: [C64; 4], orientation: Orientation) -> Option<Self> {
        let det = m[0] * m[3] - m[1] * m[2];
        if !(det.norm() > 0.0 && det.norm().is_finite()) {
            return None;
        }
        let s = det.sqrt();
        Some(MobiusMap {
            m: [m[0] / s, m[1] / s, m[2] / s, m[3] / s],
            orientation,
        })
    }

    pub fn from_matrix(m: [C64; 4], orientation: Orientation) -> Self {
        Self::try_from_matrix(m, orientation).expect("singular Möbius matrix")
    }

    /// `z ↦ (az + b)/(cz + d)`.
    pub fn preserving(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self::from_matrix([a, b, c, d], Orientation::Preserving)
    }

    /// `z ↦ (a z̄ + b)/(c z̄ + d)`.
    pub fn reversing(a: C64, b: C64, c: C64, d: C64) -> Self {
        Self::from_matrix([a, b, c, d], Orientation::Reversing)
    }

    pub fn identity() -> Self {
        MobiusMap {
            m: [ONE, ZERO, ZERO, ONE],
            orientation: Orientation::Preserving,
        }
    }

    /// `z ↦ z̄`.
    pub fn conjugation() -> Self {
        MobiusMap {
            m: [ONE, ZERO, ZERO, ONE],
            orientation: Orientation::Reversing,
        }
    }

    pub fn scaling(k: C64) -> Self {
        Self::preserving(k, ZERO, ZERO, ONE)
    }

    pub fn translation(t: C64) -> Self {
        Self::preserving(ONE, t, ZERO, ONE)
    }

    pub fn matrix(&self) -> [C64; 4] {
        self.m
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn is_preserving(&self) -> bool {
        self.orientation == Orientation::Preserving
    }

    pub fn trace(&self) -> C64 {
        self.m[0] + self.m[3]
    }

    /// Largest entry modulus of the determinant-one representative.
    pub fn scale(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self ∘ g`. Both factors have determinant one, so the product is
    /// kept as is; recomputing `ad − bc` would cancel badly for large entries.
    pub fn compose(&self, g: &MobiusMap) -> MobiusMap {
        let rhs = match self.orientation {
            Orientation::Preserving => g.m,
            Orientation::Reversing => conj4(g.m),
        };
        MobiusMap {
            m: mat_mul(self.m, rhs),
            orientation: self.orientation.compose(g.orientation),
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        let [a, b, c, d] = self.m;
        let adj = [d, -b, -c, a];
        match self.orientation {
            Orientation::Preserving => MobiusMap {
                m: adj,
                orientation: self.orientation,
            },
            Orientation::Reversing => MobiusMap {
                m: conj4(adj),
                orientation: self.orientation,
            },
        }
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &MobiusMap) -> MobiusMap {
        g.compose(self).compose(&g.inverse())
    }

    pub fn pow(&self, n: i64) -> MobiusMap {
        let base = if n < 0 { self.inverse() } else { *self };
        let mut acc = MobiusMap::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let (u, v) = match self.orientation {
            Orientation::Preserving => (p.num, p.den),
            Orientation::Reversing => (p.num.conj(), p.den.conj()),
        };
        let [a, b, c, d] = self.m;
        SpherePoint::new(a * u + b * v, c * u + d * v)
    }

    pub fn apply_complex(&self, z: C64) -> SpherePoint {
        self.apply(&SpherePoint::finite(z))
    }

    /// Entrywise complex conjugation of the matrix: `J ∘ self ∘ J`.
    pub fn bar_conjugate(&self) -> MobiusMap {
        MobiusMap {
            m: conj4(self.m),
            orientation: self.orientation,
        }
    }

    /// Max-entry distance between determinant-one representatives, minimized
    /// over the sign ambiguity. Infinite when orientations differ.
    pub fn projective_distance(&self, other: &MobiusMap) -> f64 {
        if self.orientation != other.orientation {
            return f64::INFINITY;
        }
        let minus = (0..4)
            .map(|i| (self.m[i] - other.m[i]).norm())
            .fold(0.0, f64::max);
        let plus = (0..4)
            .map(|i| (self.m[i] + other.m[i]).norm())
            .fold(0.0, f64::max);
        minus.min(plus)
    }

    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        self.projective_distance(other) <= tol
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&MobiusMap::identity(), tol)
    }

    pub fn classify(&self, tol: f64) -> Result<MapClass> {
        match self.orientation {
            Orientation::Preserving => classify_preserving(self, tol),
            Orientation::Reversing => classify_reversing(self, tol),
        }
    }

    pub fn fixed_data(&self) -> Result<FixedData> {
        let class = self.classify(config::tolerance())?;
        if class != MapClass::Loxodromic {
            return Err(Error::NotLoxodromic {
                class: class.name().to_string(),
            });
        }
        let t = self.trace();
        let disc = (t * t - 4.0).sqrt();
        let (mu1, mu2) = ((t + disc) / 2.0, (t - disc) / 2.0);
        let mu_attr = if mu1.norm() >= mu2.norm() { mu1 } else { mu2 };
        let mu_rep = ONE / mu_attr;
        Ok(FixedData {
            attracting: self.eigen_point(mu_attr),
            repelling: self.eigen_point(mu_rep),
            multiplier: ONE / (mu_attr * mu_attr),
        })
    }

    fn eigen_point(&self, mu: C64) -> SpherePoint {
        let [a, b, c, d] = self.m;
        let v1 = (b, mu - a);
        let v2 = (mu - d, c);
        let n1 = v1.0.norm_sqr() + v1.1.norm_sqr();
        let n2 = v2.0.norm_sqr() + v2.1.norm_sqr();
        if n1 >= n2 {
            SpherePoint::new(v1.0, v1.1)
        } else {
            SpherePoint::new(v2.0, v2.1)
        }
    }

    /// The unique orientation-preserving map with `p[i] ↦ q[i]`.
    pub fn from_three_points(p: &[SpherePoint; 3], q: &[SpherePoint; 3]) -> Result<MobiusMap> {
        let tol = config::tolerance();
        check_distinct(p, tol)?;
        check_distinct(q, tol)?;
        let sp = to_standard_triple(p);
        let sq = to_standard_triple(q);
        let sq = MobiusMap::try_from_matrix(sq, Orientation::Preserving)
            .ok_or(Error::DegenerateTriple(0, 1))?;
        let sp = MobiusMap::try_from_matrix(sp, Orientation::Preserving)
            .ok_or(Error::DegenerateTriple(0, 1))?;
        Ok(sq.inverse().compose(&sp))
    }
}

/// Serialized form: entries `a, b, c, d` as `[re, im]` pairs.
#[derive(Serialize, Deserialize)]
pub struct MapRecord {
    pub matrix: [[f64; 2]; 4],
    pub orientation: Orientation,
}

impl From<MobiusMap> for MapRecord {
    fn from(f: MobiusMap) -> Self {
        MapRecord {
            matrix: f.m.map(|z| [z.re, z.im]),
            orientation: f.orientation,
        }
    }
}

impl TryFrom<MapRecord> for MobiusMap {
    type Error = Error;
    fn try_from(r: MapRecord) -> Result<Self> {
        let m = r.matrix.map(|[re, im]| C64::new(re, im));
        MobiusMap::try_from_matrix(m, r.orientation)
            .ok_or_else(|| Error::Parse(format!("singular matrix {:?}", r.matrix)))
    }
}

impl Mul for MobiusMap {
    type Output = MobiusMap;
    fn mul(self, rhs: MobiusMap) -> MobiusMap {
        self.compose(&rhs)
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = match self.orientation {
            Orientation::Preserving => "z",
            Orientation::Reversing => "conj(z)",
        };
        let [a, b, c, d] = self.m;
        write!(f, "({a})*{z} + ({b}) / ({c})*{z} + ({d})")
    }
}

fn conj4(m: [C64; 4]) -> [C64; 4] {
    [m[0].conj(), m[1].conj(), m[2].conj(), m[3].conj()]
}

fn mat_mul(x: [C64; 4], y: [C64; 4]) -> [C64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

fn check_distinct(p: &[SpherePoint; 3], tol: f64) -> Result<()> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if p[i].chordal_distance(&p[j]) <= tol {
            return Err(Error::DegenerateTriple(i, j));
        }
    }
    Ok(())
}

/// Matrix sending `p0 ↦ ∞`, `p1 ↦ 0`, `p2 ↦ 1` (homogeneous cross-ratio form).
fn to_standard_triple(p: &[SpherePoint; 3]) -> [C64; 4] {
    let (u1, v1) = (p[0].num, p[0].den);
    let (u2, v2) = (p[1].num, p[1].den);
    let (u3, v3) = (p[2].num, p[2].den);
    let alpha = v1 * u3 - u1 * v3;
    let beta = v2 * u3 - u2 * v3;
    [alpha * v2, -alpha * u2, beta * v1, -beta * u1]
}

fn classify_preserving(f: &MobiusMap, tol: f64) -> Result<MapClass> {
    if f.is_identity(tol) {
        return Ok(MapClass::Identity);
    }
    let t = f.trace();
    let t2 = t * t;
    let defect = (t2 - 4.0).norm();
    // Only an exactly representable trace of ±2 counts as parabolic; anything
    // inside the tolerance band is ambiguous at double precision.
    let exact = 16.0 * f64::EPSILON * (1.0 + f.scale() * f.scale());
    if defect <= exact {
        return Ok(MapClass::Parabolic);
    }
    if defect < tol {
        return Err(Error::IllConditioned { defect });
    }
    if t2.im.abs() <= tol * t2.norm().max(1.0) && t2.re >= 0.0 && t2.re < 4.0 {
        Ok(MapClass::Elliptic)
    } else {
        Ok(MapClass::Loxodromic)
    }
}

fn classify_reversing(f: &MobiusMap, tol: f64) -> Result<MapClass> {
    let square = f.compose(f);
    let scale = 1.0 + f.scale() * f.scale();
    if square.is_identity(tol * scale) {
        return Ok(involution_kind(f, tol));
    }
    Ok(match classify_preserving(&square, tol)? {
        MapClass::Parabolic => MapClass::PseudoParabolic,
        MapClass::Elliptic => MapClass::PseudoElliptic,
        MapClass::Loxodromic => MapClass::GlideReflection,
        // Already handled by the identity check above; a looser tolerance in
        // the inner test can still land here.
        _ => involution_kind(f, tol),
    })
}

/// Circle `A|z|² + Bx + Cy + D = 0`, as coefficient vector `[A, B, C, D]`.
type CircleEq = [f64; 4];

/// Reflection versus imaginary reflection for an anti-Möbius involution.
///
/// The fixed-point equation `c|z|² + dz − a z̄ − b = 0` splits into two real
/// circle equations. A reflection has a rank-one system describing a genuine
/// circle or line; otherwise there is no fixed point. Three sampled points
/// of the candidate circle must actually be fixed.
fn involution_kind(f: &MobiusMap, tol: f64) -> MapClass {
    let [a, b, c, d] = f.m;
    let u: CircleEq = [c.re, d.re - a.re, -d.im - a.im, -b.re];
    let v: CircleEq = [c.im, d.im - a.im, d.re + a.re, -b.im];
    let nu = norm4(&u);
    let nv = norm4(&v);
    let mut max_minor: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            max_minor = max_minor.max((u[i] * v[j] - u[j] * v[i]).abs());
        }
    }
    let scale = 1.0 + f.scale() * f.scale();
    let rank_one = max_minor <= tol * scale * nu.max(nv).max(1.0);
    let candidate = if rank_one {
        let w = if nu >= nv { u } else { v };
        sample_circle(&w)
    } else {
        None
    };
    match candidate {
        Some(points) => {
            let fixes_all = points
                .iter()
                .all(|p| f.apply(p).chordal_distance(p) <= tol * scale * 10.0);
            if fixes_all {
                MapClass::Reflection
            } else {
                sign_fallback(f)
            }
        }
        None => MapClass::ImaginaryReflection,
    }
}

/// For an anti-involution with determinant-one matrix `M`, `M M̄ = ±I`;
/// the sign separates reflections (+) from imaginary reflections (−).
fn sign_fallback(f: &MobiusMap) -> MapClass {
    let p = mat_mul(f.m, conj4(f.m));
    if (p[0] + p[3]).re > 0.0 {
        MapClass::Reflection
    } else {
        MapClass::ImaginaryReflection
    }
}

fn norm4(w: &CircleEq) -> f64 {
    w.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn sample_circle(w: &CircleEq) -> Option<[SpherePoint; 3]> {
    let [a, b, c, d] = *w;
    let n = norm4(w);
    if n == 0.0 {
        return None;
    }
    if a.abs() > 1e-12 * n {
        let center = C64::new(-b / (2.0 * a), -c / (2.0 * a));
        let r2 = center.norm_sqr() - d / a;
        if r2 <= 0.0 {
            return None;
        }
        let r = r2.sqrt();
        let at = |theta: f64| SpherePoint::finite(center + C64::from_polar(r, theta));
        Some([at(0.3), at(2.4), at(4.5)])
    } else {
        // Line bx + cy + d = 0.
        let normal = C64::new(b, c);
        if normal.norm() <= 1e-12 * n {
            return None;
        }
        let foot = -normal * (d / normal.norm_sqr());
        let dir = C64::new(-c, b) / normal.norm();
        Some([
            SpherePoint::finite(foot),
            SpherePoint::finite(foot + dir),
            SpherePoint::infinity(),
        ])
    }
}
