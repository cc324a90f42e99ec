use super::{CircularNet, Idx, NetError};
use crate::lie::{circle_through, Circle3D, OrientedSphere, Point};
use crate::linalg::smallest_singular_vector;
use crate::scalar::{lit, to_f64, Real, Tol};
use crate::vec3::Vec3;

fn circle<T: Real>(a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, tol: Tol<T>) -> Option<Circle3D<T>> {
    circle_through(Point::Finite(a), Point::Finite(b), Point::Finite(c), tol).ok()
}

/// Second intersection of two circles through `p`: the reflection of `p`
/// in the plane containing both axes.
fn second_intersection<T: Real>(a: &Circle3D<T>, b: &Circle3D<T>, p: Vec3<T>) -> Option<Vec3<T>> {
    let (Circle3D::Circle { center: ca, normal: na, .. }, Circle3D::Circle { center: cb, normal: nb, .. }) = (a, b) else {
        return None;
    };
    let mut m = na.cross(*nb);
    if m.norm() <= lit(1e-9) {
        m = na.cross(*cb - *ca);
    }
    let m = m.normalized()?;
    let two: T = lit(2.0);
    Some(p - m * (two * (p - *ca).dot(m)))
}

/// The eighth vertex of an elementary hexahedron: the common point of the
/// circles through `(x1, x12, x13)`, `(x2, x12, x23)` and `(x3, x13, x23)`.
pub fn miquel_eighth_point<T: Real>(
    x: Vec3<T>,
    x1: Vec3<T>,
    x2: Vec3<T>,
    x3: Vec3<T>,
    x12: Vec3<T>,
    x13: Vec3<T>,
    x23: Vec3<T>,
    tol: Tol<T>,
) -> Result<Vec3<T>, NetError> {
    let pts = [x, x1, x2, x3, x12, x13, x23];
    let mut scale = T::zero();
    for a in &pts {
        for b in &pts {
            scale = scale.max(a.dist(*b));
        }
    }
    let degenerate = |residual: f64| NetError::DegenerateMiquel { residual, at: None };
    if !(scale > T::zero()) || pts.iter().any(|p| !p.is_finite()) {
        return Err(degenerate(f64::INFINITY));
    }
    let ca = circle(x1, x12, x13, tol).ok_or_else(|| degenerate(f64::INFINITY))?;
    let cb = circle(x2, x12, x23, tol).ok_or_else(|| degenerate(f64::INFINITY))?;
    let cc = circle(x3, x13, x23, tol).ok_or_else(|| degenerate(f64::INFINITY))?;
    let residual = |q: Vec3<T>| ca.distance(q).max(cb.distance(q)).max(cc.distance(q)) / scale;
    let mut best: Option<(T, Vec3<T>)> = None;
    for (u, v, p) in [(&ca, &cb, x12), (&ca, &cc, x13), (&cb, &cc, x23)] {
        if let Some(q) = second_intersection(u, v, p) {
            let r = residual(q);
            if best.map_or(true, |(b, _)| r < b) {
                best = Some((r, q));
            }
        }
    }
    match best {
        Some((r, q)) if r <= tol.switch => Ok(q),
        Some((r, _)) => Err(degenerate(to_f64(r))),
        None => Err(degenerate(f64::INFINITY)),
    }
}

/// Least-squares sphere (or plane) through the points, with the largest
/// relative deviation of a point from it.
pub fn miquel_sphere<T: Real>(points: &[Vec3<T>]) -> Option<(OrientedSphere<T>, T)> {
    let n = points.len();
    if n < 4 {
        return None;
    }
    let mut c = Vec3::zero();
    for p in points {
        c += *p;
    }
    let c = c / lit(n as f64);
    let s = points.iter().map(|p| p.dist(c)).fold(T::zero(), T::max);
    if !(s > T::zero()) {
        return None;
    }
    let local: Vec<Vec3<f64>> = points.iter().map(|p| ((*p - c) / s).cast()).collect();
    let rows: Vec<Vec<f64>> = local.iter().map(|p| vec![p.norm2(), p.x, p.y, p.z, 1.0]).collect();
    let v = smallest_singular_vector(&rows);
    let (a, b, d) = (v[0], Vec3::new(v[1], v[2], v[3]), v[4]);
    if a.abs() <= 1e-9 * b.norm() {
        let bn = b.norm();
        let normal = b / bn;
        let off = -d / bn;
        let dev = local.iter().map(|p| (p.dot(normal) - off).abs()).fold(0.0, f64::max);
        let normal: Vec3<T> = normal.cast();
        let offset = lit::<T>(off) * s + normal.dot(c);
        return Some((OrientedSphere::Plane { normal, offset }, lit(dev)));
    }
    let center = b / (-2.0 * a);
    let r = (center.norm2() - d / a).sqrt();
    let dev = local.iter().map(|p| (p.dist(center) - r).abs()).fold(0.0, f64::max) / r;
    Some((OrientedSphere::Sphere { center: c + center.cast::<T>() * s, radius: lit::<T>(r) * s }, lit(dev)))
}

/// Loop nesting used when filling the interior.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillOrder {
    /// First index outermost.
    Lexicographic,
    /// Third index outermost.
    ReverseLexicographic,
}

/// Fills a three-dimensional net from its coordinate planes through the
/// origin: `p12` on `z3 = 0`, `p13` on `z2 = 0`, `p23` on `z1 = 0`.
pub fn complete_3d_from_coordinate_planes<T: Real>(
    p12: &CircularNet<T>,
    p13: &CircularNet<T>,
    p23: &CircularNet<T>,
    order: FillOrder,
    tol: Tol<T>,
) -> Result<CircularNet<T>, NetError> {
    if p12.m != 2 || p13.m != 2 || p23.m != 2 {
        return Err(NetError::InvalidNet("coordinate planes must be two-dimensional".into()));
    }
    let (n1, n2, n3) = (p12.extents[0], p12.extents[1], p13.extents[1]);
    if p13.extents[0] != n1 || p23.extents[0] != n2 || p23.extents[1] != n3 {
        return Err(NetError::InvalidNet("coordinate plane extents disagree".into()));
    }
    let scale = p12.diameter().max(p13.diameter()).max(p23.diameter());
    let agree = |a: Vec3<T>, b: Vec3<T>| a.dist(b) <= tol.rel * scale;
    let axes_ok = (0..n1).all(|i| agree(p12.get([i, 0, 0]), p13.get([i, 0, 0])))
        && (0..n2).all(|j| agree(p12.get([0, j, 0]), p23.get([j, 0, 0])))
        && (0..n3).all(|k| agree(p13.get([0, k, 0]), p23.get([0, k, 0])));
    if !axes_ok {
        return Err(NetError::InvalidNet("coordinate planes disagree on a shared axis".into()));
    }
    let ext = [n1, n2, n3];
    let at = |z: Idx| z[0] + n1 * (z[1] + n2 * z[2]);
    let mut v: Vec<Option<Vec3<T>>> = vec![None; n1 * n2 * n3];
    for i in 0..n1 {
        for j in 0..n2 {
            v[at([i, j, 0])] = Some(p12.get([i, j, 0]));
        }
        for k in 0..n3 {
            v[at([i, 0, k])] = Some(p13.get([i, k, 0]));
        }
    }
    for j in 0..n2 {
        for k in 0..n3 {
            v[at([0, j, k])] = Some(p23.get([j, k, 0]));
        }
    }
    let mut interior = Vec::new();
    for a in 1..ext[0] {
        for b in 1..ext[1] {
            for c in 1..ext[2] {
                interior.push([a, b, c]);
            }
        }
    }
    if order == FillOrder::ReverseLexicographic {
        interior.sort_by_key(|z| (z[2], z[1], z[0]));
    }
    for z in interior {
        let b = [z[0] - 1, z[1] - 1, z[2] - 1];
        let g = |d: [usize; 3]| v[at([b[0] + d[0], b[1] + d[1], b[2] + d[2]])].unwrap();
        let p = miquel_eighth_point(
            g([0, 0, 0]),
            g([1, 0, 0]),
            g([0, 1, 0]),
            g([0, 0, 1]),
            g([1, 1, 0]),
            g([1, 0, 1]),
            g([0, 1, 1]),
            tol,
        )
        .map_err(|e| match e {
            NetError::DegenerateMiquel { residual, .. } => NetError::DegenerateMiquel { residual, at: Some(z) },
            e => e,
        })?;
        v[at(z)] = Some(p);
    }
    CircularNet::new(3, ext, v.into_iter().map(Option::unwrap).collect())
}
