//! Projective model of Lie sphere geometry in R^{4,2}.
//!
//! Coordinates are ordered `(e1, e2, e3, e0, einf, er)` with
//! `<e0, einf> = -1/2`, `<er, er> = -1` and the Euclidean dot product on
//! `e1..e3`. Positive sphere radius means the unit normal points inward.

use crate::linalg;
use crate::scalar::{lit, to_f64, Real, Tol};
use crate::vec3::Vec3;
use core::ops::{Add, Mul, Neg, Sub};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const E0: usize = 3;
pub const EINF: usize = 4;
pub const ER: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("vector is not isotropic (relative residual {0:.3e})")]
    NonIsotropic(f64),
    #[error("zero vector")]
    ZeroVector,
    #[error("spheres are not in oriented contact (relative residual {0:.3e})")]
    NotInContact(f64),
    #[error("spheres are projectively identical")]
    IdenticalSpheres,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

/// Homogeneous coordinates in R^{4,2}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LieVector<T> {
    pub c: [T; 6],
}

impl<T: Real> LieVector<T> {
    pub fn new(c: [T; 6]) -> Self {
        LieVector { c }
    }

    pub fn zero() -> Self {
        LieVector { c: [T::zero(); 6] }
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Self::zero();
        v.c[i] = T::one();
        v
    }

    pub fn e0() -> Self {
        Self::basis(E0)
    }

    pub fn einf() -> Self {
        Self::basis(EINF)
    }

    pub fn er() -> Self {
        Self::basis(ER)
    }

    pub fn euclid(&self) -> Vec3<T> {
        Vec3::new(self.c[0], self.c[1], self.c[2])
    }

    pub fn r(&self) -> T {
        self.c[ER]
    }

    pub fn o(&self) -> T {
        self.c[E0]
    }

    pub fn inf(&self) -> T {
        self.c[EINF]
    }

    /// Coefficient norm, used only to scale tolerances.
    pub fn norm(&self) -> T {
        self.c.iter().fold(T::zero(), |a, &x| a.hypot(x))
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }

    pub fn scale(&self, s: T) -> Self {
        let mut v = *self;
        for x in v.c.iter_mut() {
            *x = *x * s;
        }
        v
    }

    /// Rescales to unit coefficient norm with the largest entry positive.
    pub fn canonical(&self) -> Self {
        let n = self.norm();
        if n == T::zero() {
            return *self;
        }
        let mut k = 0;
        for i in 1..6 {
            if self.c[i].abs() > self.c[k].abs() {
                k = i;
            }
        }
        let s = if self.c[k] < T::zero() { -n } else { n };
        self.scale(T::one() / s)
    }

    /// Normalizes per the Lie-coordinate conventions: e0 -> 1 for spheres
    /// and points, unit Euclidean part for planes, einf -> 1 for infinity.
    pub fn normalized(&self, tol: Tol<T>) -> Self {
        let n = self.norm();
        if n == T::zero() {
            return *self;
        }
        if self.o().abs() > tol.rel * n {
            self.scale(T::one() / self.o())
        } else if self.r().abs() > tol.rel * n {
            let e = self.euclid().norm();
            let s = if self.r() < T::zero() { -e } else { e };
            self.scale(T::one() / s)
        } else {
            self.scale(T::one() / self.inf())
        }
    }

    pub fn cast<U: Real>(&self) -> LieVector<U> {
        LieVector { c: self.c.map(|x| U::from(x).unwrap()) }
    }

    pub fn to_f64(&self) -> [f64; 6] {
        self.c.map(to_f64)
    }
}

impl<T: Real> Add for LieVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut v = self;
        for i in 0..6 {
            v.c[i] = v.c[i] + o.c[i];
        }
        v
    }
}

impl<T: Real> Sub for LieVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let mut v = self;
        for i in 0..6 {
            v.c[i] = v.c[i] - o.c[i];
        }
        v
    }
}

impl<T: Real> Neg for LieVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul<T> for LieVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// The Lie inner product of signature (4,2).
pub fn lie_inner<T: Real>(a: &LieVector<T>, b: &LieVector<T>) -> T {
    let half: T = lit(0.5);
    a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2]
        - half * (a.c[E0] * b.c[EINF] + a.c[EINF] * b.c[E0])
        - a.c[ER] * b.c[ER]
}

/// Relative isotropy residual `|<v,v>| / |v|^2`.
pub fn isotropy_residual<T: Real>(v: &LieVector<T>) -> T {
    let n = v.norm();
    if n == T::zero() {
        return T::zero();
    }
    lie_inner(v, v).abs() / (n * n)
}

/// Relative polarity residual `|<a,b>| / (|a| |b|)`.
pub fn polarity_residual<T: Real>(a: &LieVector<T>, b: &LieVector<T>) -> T {
    let d = a.norm() * b.norm();
    if d == T::zero() {
        return T::zero();
    }
    lie_inner(a, b).abs() / d
}

/// Projective equality up to scale (and therefore up to sign).
pub fn projectively_equal<T: Real>(a: &LieVector<T>, b: &LieVector<T>, tol: T) -> bool {
    projective_distance(a, b) <= tol
}

/// Distance between the canonical representatives of two vectors.
pub fn projective_distance<T: Real>(a: &LieVector<T>, b: &LieVector<T>) -> T {
    let ca = a.canonical();
    let cb = b.canonical();
    let d1 = (ca - cb).norm();
    let d2 = (ca + cb).norm();
    d1.min(d2)
}

/// A point of compactified space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Point<T> {
    Finite(Vec3<T>),
    Infinity,
}

impl<T: Real> Point<T> {
    pub fn finite(&self) -> Option<Vec3<T>> {
        match self {
            Point::Finite(p) => Some(*p),
            Point::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn lift(&self) -> LieVector<T> {
        match self {
            Point::Finite(x) => point_lift(*x),
            Point::Infinity => LieVector::einf(),
        }
    }

    /// Euclidean distance; infinity is at distance zero from itself only.
    pub fn dist(&self, o: &Point<T>) -> T {
        match (self, o) {
            (Point::Finite(a), Point::Finite(b)) => a.dist(*b),
            (Point::Infinity, Point::Infinity) => T::zero(),
            _ => T::infinity(),
        }
    }
}

impl<T: Real> From<Vec3<T>> for Point<T> {
    fn from(v: Vec3<T>) -> Self {
        Point::Finite(v)
    }
}

/// Oriented generalized sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum OrientedSphere<T> {
    Sphere { center: Vec3<T>, radius: T },
    Point(Point<T>),
    Plane { normal: Vec3<T>, offset: T },
}

impl<T: Real> OrientedSphere<T> {
    pub fn lift(&self) -> LieVector<T> {
        lift(self)
    }

    /// Oriented unit normal of the carrier at a point on it.
    pub fn normal_at(&self, x: Vec3<T>) -> Option<Vec3<T>> {
        match self {
            OrientedSphere::Sphere { center, radius } => Some((*center - x) / *radius),
            OrientedSphere::Plane { normal, .. } => Some(*normal),
            OrientedSphere::Point(_) => None,
        }
    }

    /// Signed incidence residual of a finite point.
    pub fn incidence(&self, x: Vec3<T>) -> T {
        match self {
            OrientedSphere::Sphere { center, radius } => x.dist(*center) - radius.abs(),
            OrientedSphere::Plane { normal, offset } => normal.dot(x) - *offset,
            OrientedSphere::Point(Point::Finite(p)) => x.dist(*p),
            OrientedSphere::Point(Point::Infinity) => T::infinity(),
        }
    }

    /// Same carrier with reversed orientation.
    pub fn flipped(&self) -> Self {
        match *self {
            OrientedSphere::Sphere { center, radius } => OrientedSphere::Sphere { center, radius: -radius },
            OrientedSphere::Plane { normal, offset } => OrientedSphere::Plane { normal: -normal, offset: -offset },
            p => p,
        }
    }
}

/// Lie coordinates of a finite point: `x + e0 + |x|^2 einf`.
pub fn point_lift<T: Real>(x: Vec3<T>) -> LieVector<T> {
    LieVector::new([x.x, x.y, x.z, T::one(), x.norm2(), T::zero()])
}

/// Lie coordinates of the oriented plane `<n, x> = d`.
pub fn plane_lift<T: Real>(n: Vec3<T>, d: T) -> LieVector<T> {
    let two: T = lit(2.0);
    LieVector::new([n.x, n.y, n.z, T::zero(), two * d, T::one()])
}

/// Lie coordinates of the sphere with center `c` and signed radius `r`.
pub fn sphere_lift<T: Real>(c: Vec3<T>, r: T) -> LieVector<T> {
    LieVector::new([c.x, c.y, c.z, T::one(), c.norm2() - r * r, r])
}

pub fn lift<T: Real>(s: &OrientedSphere<T>) -> LieVector<T> {
    match s {
        OrientedSphere::Sphere { center, radius } => sphere_lift(*center, *radius),
        OrientedSphere::Point(p) => p.lift(),
        OrientedSphere::Plane { normal, offset } => plane_lift(*normal, *offset),
    }
}

/// Inverse of [`lift`] up to homogeneous scale.
pub fn project<T: Real>(v: &LieVector<T>, tol: Tol<T>) -> Result<OrientedSphere<T>, LieError> {
    let n = v.norm();
    if !(n > T::zero()) || !n.is_finite() {
        return Err(LieError::ZeroVector);
    }
    let iso = isotropy_residual(v);
    if iso > tol.rel {
        return Err(LieError::NonIsotropic(to_f64(iso)));
    }
    let u = v.scale(T::one() / n);
    if u.o().abs() > tol.rel {
        let w = u.scale(T::one() / u.o());
        if u.r().abs() <= tol.rel {
            Ok(OrientedSphere::Point(Point::Finite(w.euclid())))
        } else {
            Ok(OrientedSphere::Sphere { center: w.euclid(), radius: w.r() })
        }
    } else if u.r().abs() > tol.rel {
        let w = u.scale(T::one() / u.r());
        let e = w.euclid();
        let len = e.norm();
        let half: T = lit(0.5);
        Ok(OrientedSphere::Plane { normal: e / len, offset: half * w.inf() / len })
    } else {
        Ok(OrientedSphere::Point(Point::Infinity))
    }
}

/// Projects an isotropic vector with vanishing e_r-component to a point.
pub fn project_point<T: Real>(v: &LieVector<T>, tol: Tol<T>) -> Result<Point<T>, LieError> {
    let n = v.norm();
    if !(n > T::zero()) || !n.is_finite() {
        return Err(LieError::ZeroVector);
    }
    if v.o().abs() <= tol.rel * n {
        Ok(Point::Infinity)
    } else {
        Ok(Point::Finite(v.euclid() / v.o()))
    }
}

pub fn oriented_contact<T: Real>(s1: &OrientedSphere<T>, s2: &OrientedSphere<T>, tol: Tol<T>) -> bool {
    let a = lift(s1);
    let b = lift(s2);
    polarity_residual(&a, &b) <= tol.rel
}

/// The point sphere of the pencil spanned by `a` and `b`, without checking
/// polarity. The e0-component is normalized explicitly.
pub fn span_point<T: Real>(a: &LieVector<T>, b: &LieVector<T>, tol: Tol<T>) -> Result<Point<T>, LieError> {
    let p = *a * b.r() - *b * a.r();
    let scale = b.r().abs() * a.norm() + a.r().abs() * b.norm();
    if !(scale > T::zero()) {
        // both are point spheres
        return if projectively_equal(a, b, tol.rel) {
            project_point(a, tol)
        } else {
            Err(LieError::IdenticalSpheres)
        };
    }
    if p.norm() <= tol.rel * scale {
        return Err(LieError::IdenticalSpheres);
    }
    project_point(&p, tol)
}

/// Contact point of two spheres in oriented contact, given in Lie coordinates.
pub fn contact_point_lie<T: Real>(a: &LieVector<T>, b: &LieVector<T>, tol: Tol<T>) -> Result<Point<T>, LieError> {
    if a.norm() == T::zero() || b.norm() == T::zero() {
        return Err(LieError::ZeroVector);
    }
    let res = polarity_residual(a, b);
    if res > tol.rel {
        return Err(LieError::NotInContact(to_f64(res)));
    }
    if projectively_equal(a, b, tol.rel.sqrt() * tol.rel.sqrt()) {
        return Err(LieError::IdenticalSpheres);
    }
    span_point(a, b, tol)
}

pub fn contact_point<T: Real>(s1: &OrientedSphere<T>, s2: &OrientedSphere<T>, tol: Tol<T>) -> Result<Point<T>, LieError> {
    contact_point_lie(&lift(s1), &lift(s2), tol)
}

/// A contact element: a point with a unit normal, equivalently an isotropic
/// line of the Lie quadric spanned by two of its spheres.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactElement<T> {
    pub point: Point<T>,
    pub normal: Vec3<T>,
    pub span: [LieVector<T>; 2],
}

impl<T: Real> ContactElement<T> {
    pub fn new(point: Point<T>, normal: Vec3<T>) -> Self {
        let n = normal.normalized().unwrap_or(normal);
        let (a, b) = match point {
            Point::Finite(x) => (point_lift(x), plane_lift(n, n.dot(x))),
            Point::Infinity => (LieVector::einf(), plane_lift(n, T::zero())),
        };
        ContactElement { point, normal: n, span: [a, b] }
    }

    /// Builds the element spanned by two polar isotropic vectors.
    pub fn from_span(a: &LieVector<T>, b: &LieVector<T>, tol: Tol<T>) -> Result<Self, LieError> {
        let point = span_point(a, b, tol)?;
        let ra = a.r().abs() / a.norm();
        let rb = b.r().abs() / b.norm();
        let v = if ra >= rb { a } else { b };
        let normal = normal_in_element(v, &point).ok_or(LieError::DegenerateInput("contact element without sphere".into()))?;
        Ok(ContactElement { point, normal, span: [*a, *b] })
    }

    /// Whether an oriented sphere belongs to this contact element.
    pub fn contains(&self, s: &LieVector<T>, tol: Tol<T>) -> bool {
        polarity_residual(&self.span[0], s) <= tol.rel && polarity_residual(&self.span[1], s) <= tol.rel
    }
}

/// Oriented unit normal at `x` of the sphere `v`, where `x` lies on `v`.
pub fn normal_in_element<T: Real>(v: &LieVector<T>, x: &Point<T>) -> Option<Vec3<T>> {
    if v.r() == T::zero() {
        return None;
    }
    let e = match x {
        Point::Finite(p) => v.euclid() - *p * v.o(),
        Point::Infinity => v.euclid(),
    };
    (e / v.r()).normalized()
}

/// A circle, or a straight line regarded as a circle through infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Circle3D<T> {
    Circle { center: Vec3<T>, radius: T, normal: Vec3<T> },
    Line { point: Vec3<T>, direction: Vec3<T> },
}

impl<T: Real> Circle3D<T> {
    /// Distance of a finite point from the carrier.
    pub fn distance(&self, p: Vec3<T>) -> T {
        match self {
            Circle3D::Circle { center, radius, normal } => {
                let d = p - *center;
                let h = d.dot(*normal);
                let inplane = (d - *normal * h).norm();
                (inplane - *radius).hypot(h)
            }
            Circle3D::Line { point, direction } => {
                let d = p - *point;
                (d - *direction * d.dot(*direction)).norm()
            }
        }
    }

    pub fn contains(&self, p: &Point<T>, tol: T) -> bool {
        match (self, p) {
            (Circle3D::Line { .. }, Point::Infinity) => true,
            (Circle3D::Circle { .. }, Point::Infinity) => false,
            (Circle3D::Circle { radius, .. }, Point::Finite(x)) => self.distance(*x) <= tol * radius.max(T::one()),
            (Circle3D::Line { point, .. }, Point::Finite(x)) => self.distance(*x) <= tol * (T::one() + x.dist(*point)),
        }
    }

    /// Orthonormal in-plane basis `(u, v)` with `u` towards `p`.
    pub fn plane_basis(&self, p: Vec3<T>) -> (Vec3<T>, Vec3<T>) {
        match self {
            Circle3D::Circle { center, normal, .. } => {
                let u = (p - *center).normalized().unwrap_or_else(|| normal.any_orthogonal());
                (u, normal.cross(u))
            }
            Circle3D::Line { direction, .. } => (*direction, direction.any_orthogonal()),
        }
    }
}

fn distinct<T: Real>(a: &Point<T>, b: &Point<T>, tol: T, scale: T) -> bool {
    match (a, b) {
        (Point::Finite(x), Point::Finite(y)) => x.dist(*y) > tol * scale,
        (Point::Infinity, Point::Infinity) => false,
        _ => true,
    }
}

fn points_scale<T: Real>(pts: &[Point<T>]) -> T {
    let fin: Vec<Vec3<T>> = pts.iter().filter_map(|p| p.finite()).collect();
    let mut s = T::zero();
    for a in &fin {
        for b in &fin {
            s = s.max(a.dist(*b));
        }
    }
    if s > T::zero() {
        s
    } else {
        T::one()
    }
}

/// Whether four points lie on a common circle (a line counts as a circle).
pub fn concircular<T: Real>(pts: [Point<T>; 4], tol: Tol<T>) -> Result<bool, LieError> {
    Ok(concircular_residual(pts, tol)? <= tol.rel)
}

/// Ratio of the fourth to the first singular value of the normalized lifts.
pub fn concircular_residual<T: Real>(pts: [Point<T>; 4], tol: Tol<T>) -> Result<T, LieError> {
    let scale = points_scale(&pts);
    let mut uniq: Vec<Point<T>> = Vec::new();
    for p in pts.iter() {
        if uniq.iter().all(|q| distinct(p, q, tol.rel, scale)) {
            uniq.push(*p);
        }
    }
    if uniq.len() < 3 {
        return Err(LieError::DegenerateInput("fewer than three distinct points".into()));
    }
    if uniq.len() == 3 {
        return Ok(T::zero());
    }
    // a similarity does not change concircularity; center and rescale
    let fin: Vec<Vec3<T>> = pts.iter().filter_map(|p| p.finite()).collect();
    let mut c = Vec3::zero();
    for p in &fin {
        c += *p;
    }
    if !fin.is_empty() {
        c = c / lit(fin.len() as f64);
    }
    let rows: Vec<Vec<f64>> = pts
        .iter()
        .map(|p| {
            let l = match p {
                Point::Finite(x) => point_lift((*x - c) / scale),
                Point::Infinity => LieVector::einf(),
            };
            let l = l.scale(T::one() / l.norm());
            l.c[..5].iter().map(|x| to_f64(*x)).collect()
        })
        .collect();
    let sv = linalg::singular_values(&rows);
    Ok(lit(sv[3] / sv[0]))
}

/// Circle through three distinct points; collinear triples give a line.
pub fn circle_through<T: Real>(p1: Point<T>, p2: Point<T>, p3: Point<T>, tol: Tol<T>) -> Result<Circle3D<T>, LieError> {
    let pts = [p1, p2, p3];
    let scale = points_scale(&pts);
    for i in 0..3 {
        for j in i + 1..3 {
            if !distinct(&pts[i], &pts[j], tol.rel, scale) {
                return Err(LieError::DegenerateInput("coincident points".into()));
            }
        }
    }
    let fin: Vec<Vec3<T>> = pts.iter().filter_map(|p| p.finite()).collect();
    if fin.len() == 2 {
        let d = (fin[1] - fin[0]).normalized().unwrap();
        return Ok(Circle3D::Line { point: fin[0], direction: d });
    }
    let a = fin[0];
    let u = fin[1] - a;
    let v = fin[2] - a;
    let w = u.cross(v);
    if w.norm() <= tol.rel * u.norm() * v.norm() {
        let far = if u.norm() >= v.norm() { u } else { v };
        return Ok(Circle3D::Line { point: a, direction: far.normalized().unwrap() });
    }
    let two: T = lit(2.0);
    let off = (v.cross(w) * u.norm2() + w.cross(u) * v.norm2()) / (two * w.norm2());
    Ok(Circle3D::Circle { center: a + off, radius: off.norm(), normal: w.normalized().unwrap() })
}

/// The circle through `x` and `x2` tangent to `t` at `x`.
pub fn circle_from_tangent<T: Real>(x: Vec3<T>, t: Vec3<T>, x2: Vec3<T>, tol: Tol<T>) -> Result<Circle3D<T>, LieError> {
    let d = x2 - x;
    let dn = d.norm();
    if dn <= tol.rel * (T::one() + x.norm()) {
        return Err(LieError::DegenerateInput("coincident points".into()));
    }
    let t = t.normalized().ok_or_else(|| LieError::DegenerateInput("zero tangent".into()))?;
    let w = t.cross(d);
    if w.norm() <= tol.rel * dn {
        return Ok(Circle3D::Line { point: x, direction: d / dn });
    }
    let normal = w.normalized().unwrap();
    let m = normal.cross(t);
    let two: T = lit(2.0);
    let s = d.norm2() / (two * m.dot(d));
    Ok(Circle3D::Circle { center: x + m * s, radius: s.abs(), normal })
}

/// Signature `(p, q, z)` of the Lie form restricted to the span of `vs`.
pub fn span_signature<T: Real>(vs: &[LieVector<T>], tol: Tol<T>) -> (usize, usize, usize) {
    let rows: Vec<Vec<f64>> = vs
        .iter()
        .filter(|v| v.norm() > T::zero())
        .map(|v| {
            let u = v.scale(T::one() / v.norm());
            u.to_f64().to_vec()
        })
        .collect();
    let basis = linalg::row_space(&rows, to_f64(tol.rel));
    let k = basis.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let a = LieVector::<f64>::new(basis[i].clone().try_into().unwrap());
            let b = LieVector::<f64>::new(basis[j].clone().try_into().unwrap());
            g[i][j] = lie_inner(&a, &b);
        }
    }
    let ev = linalg::sym_eigenvalues(&g);
    let t = to_f64(tol.rel);
    let p = ev.iter().filter(|&&x| x > t).count();
    let q = ev.iter().filter(|&&x| x < -t).count();
    (p, q, k - p - q)
}
