use super::{CyclideError, VertexFrame, VertexQuad};
use crate::lie::{circle_through, lie_inner, plane_lift, point_lift, Circle3D, LieVector, OrientedSphere, Point};
use crate::scalar::{lit, Real, Tol};
use crate::vec3::Vec3;

fn chord_check<T: Real>(x: Vec3<T>, delta: Vec3<T>) -> Result<(), CyclideError> {
    let d = delta.norm();
    if !(d > T::zero()) || d <= T::epsilon() * x.norm() {
        return Err(CyclideError::ZeroDelta);
    }
    Ok(())
}

/// The oriented sphere through `x` and `x + delta` with normal `n` at `x`.
pub fn boundary_sphere<T: Real>(x: Vec3<T>, delta: Vec3<T>, n: Vec3<T>, tol: Tol<T>) -> Result<OrientedSphere<T>, CyclideError> {
    chord_check(x, delta)?;
    let dn = delta.dot(n);
    if dn.abs() <= tol.rel * delta.norm() {
        return Ok(OrientedSphere::Plane { normal: n, offset: n.dot(x) });
    }
    let two: T = lit(2.0);
    let r = delta.norm2() / (two * dn);
    Ok(OrientedSphere::Sphere { center: x + n * r, radius: r })
}

/// Lie coordinates `2<delta,n> x^ + |delta|^2 p^` of the same sphere; valid
/// without case distinction, including the plane limit.
pub fn boundary_sphere_lie<T: Real>(x: Vec3<T>, delta: Vec3<T>, n: Vec3<T>) -> Result<LieVector<T>, CyclideError> {
    chord_check(x, delta)?;
    let two: T = lit(2.0);
    let k = two * delta.dot(n);
    let p = plane_lift(n, n.dot(x));
    Ok(point_lift(x) * k + p * delta.norm2())
}

/// Reflection of `v` in the perpendicular bisector plane of `x` and `xi`.
pub fn reflect_in_bisector<T: Real>(x: Vec3<T>, xi: Vec3<T>, v: Vec3<T>, _tol: Tol<T>) -> Result<Vec3<T>, CyclideError> {
    let d = xi - x;
    let dd = d.norm2();
    if !(dd > T::zero()) {
        return Err(CyclideError::CoincidentPoints);
    }
    let two: T = lit(2.0);
    Ok(v - d * (two * d.dot(v) / dd))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcMidpointData<T> {
    pub v: Vec3<T>,
    pub rho: T,
    pub y: Point<T>,
}

/// Midpoint of the arc from `x` to `xi` leaving `x` in direction `t`.
pub fn arc_midpoint<T: Real>(x: Vec3<T>, xi: Vec3<T>, t: Vec3<T>, tol: Tol<T>) -> Result<ArcMidpointData<T>, CyclideError> {
    let d = xi - x;
    let dn = d.norm();
    if !(dn > T::zero()) {
        return Err(CyclideError::CoincidentPoints);
    }
    let v = t * dn + d;
    let two: T = lit(2.0);
    if v.norm() <= tol.rel * dn {
        return Ok(ArcMidpointData { v, rho: T::infinity(), y: Point::Infinity });
    }
    let rho = d.norm2() / (two * d.dot(v));
    Ok(ArcMidpointData { v, rho, y: Point::Finite(x + v * rho) })
}

/// Lie coordinates of the arc midpoint, polynomial in the data so that the
/// point at infinity needs no special case.
pub fn arc_midpoint_lie<T: Real>(x: Vec3<T>, xi: Vec3<T>, t: Vec3<T>) -> Result<LieVector<T>, CyclideError> {
    let d = xi - x;
    let dn = d.norm();
    if !(dn > T::zero()) {
        return Err(CyclideError::CoincidentPoints);
    }
    let v = t * dn + d;
    let tiny: T = lit(64.0);
    if v.norm() <= tiny * T::epsilon() * dn {
        return Ok(LieVector::einf());
    }
    let two: T = lit(2.0);
    let k = two * d.dot(v);
    let w = x * k + v * d.norm2();
    let l = LieVector::new([k * w.x, k * w.y, k * w.z, k * k, w.norm2(), T::zero()]);
    let n = l.norm();
    Ok(if n > T::zero() { l.scale(T::one() / n) } else { l })
}

/// The sphere polar to `s_opp` touching `s` at the point `y`.
pub fn third_sphere<T: Real>(
    s: &LieVector<T>,
    y: &LieVector<T>,
    s_opp: &LieVector<T>,
    tol: Tol<T>,
) -> Result<LieVector<T>, CyclideError> {
    let a = lie_inner(s, s_opp);
    if a.abs() <= tol.rel * s.norm() * s_opp.norm() {
        return Err(CyclideError::OrientedContactDegenerate);
    }
    let sigma = *s * lie_inner(y, s_opp) - *y * a;
    Ok(sigma.normalized(tol))
}

/// Frames at `x, x1, x12, x2` induced by the frame at `x`.
pub fn vertex_frames<T: Real>(q: &VertexQuad<T>, b: &VertexFrame<T>, tol: Tol<T>) -> Result<[VertexFrame<T>; 4], CyclideError> {
    q.validate(tol)?;
    let step = |f: &VertexFrame<T>, to: Vec3<T>, flip: Option<usize>| -> Result<VertexFrame<T>, CyclideError> {
        match flip {
            Some(j) => f.flip(j).reflect_to(to, tol),
            None => f.reflect_to(to, tol),
        }
    };
    let (x, x1, x12, x2) = (q.x, q.x1, q.x12, q.x2);
    let b = VertexFrame { x, ..*b };
    let b1 = step(&b, x1, q.separated(x, x1, x2, x12, tol)?.then_some(2))?;
    let b2 = step(&b, x2, q.separated(x, x2, x1, x12, tol)?.then_some(1))?;
    let b12 = step(&b1, x12, q.separated(x1, x12, x, x2, tol)?.then_some(1))?;
    Ok([b, b1, b12, b2])
}

/// Whether the normal line at `x` meets (or is parallel to) the axis of
/// the vertex circle.
pub fn is_spherical<T: Real>(q: &VertexQuad<T>, b: &VertexFrame<T>, tol: Tol<T>) -> bool {
    spherical_residual(q, b, tol) <= tol.rel
}

pub(crate) fn spherical_residual<T: Real>(q: &VertexQuad<T>, b: &VertexFrame<T>, tol: Tol<T>) -> T {
    match circle_through(Point::Finite(q.x), Point::Finite(q.x1), Point::Finite(q.x2), tol) {
        Ok(Circle3D::Circle { center, normal, .. }) => {
            let d = center - q.x;
            let dn = d.norm();
            if dn == T::zero() {
                return T::zero();
            }
            b.n.cross(normal).dot(d).abs() / dn
        }
        Ok(Circle3D::Line { direction, .. }) => b.n.dot(direction).abs(),
        Err(_) => T::infinity(),
    }
}
