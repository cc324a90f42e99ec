//! Nets whose quads are exactly circular, plus random instances for tests.

use super::miquel::{complete_3d_from_coordinate_planes, FillOrder};
use super::{validate_circular, CircularNet, NetError};
use crate::cyclide::{VertexFrame, VertexQuad};
use crate::lie::{circle_through, Circle3D, Point};
use crate::scalar::{lit, Real, Tol};
use crate::vec3::{axis_angle, mat_vec, Vec3};
use rand::Rng;

/// Profile polyline `(r, z)` rotated about the z axis in steps of `step`.
pub fn rotational_net<T: Real>(profile: &[(T, T)], n_rot: usize, step: T) -> Result<CircularNet<T>, NetError> {
    CircularNet::from_fn(2, [profile.len(), n_rot, 1], |z| {
        let (r, h) = profile[z[0]];
        let (s, c) = (step * lit(z[1] as f64)).sin_cos();
        Vec3::new(r * c, r * s, h)
    })
}

/// Point of the torus with radii `big` and `small`; `u` turns about the z
/// axis, `v` about the tube.
pub fn torus_point<T: Real>(big: T, small: T, u: T, v: T) -> Vec3<T> {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    let rho = big + small * cv;
    Vec3::new(rho * cu, rho * su, small * sv)
}

/// Unit tangents `(d/du, d/dv)` and normal of the torus parametrization.
pub fn torus_frame<T: Real>(big: T, small: T, u: T, v: T) -> VertexFrame<T> {
    let (su, cu) = u.sin_cos();
    let (sv, cv) = v.sin_cos();
    let t1 = Vec3::new(-su, cu, T::zero());
    let t2 = Vec3::new(-sv * cu, -sv * su, cv);
    VertexFrame::from_tangents(torus_point(big, small, u, v), t1, t2)
}

/// Curvature-line samples `x(i, j) = torus(u0 + i du, v0 + j dv)`.
pub fn torus_net<T: Real>(big: T, small: T, u0: T, v0: T, du: T, dv: T, n1: usize, n2: usize) -> Result<CircularNet<T>, NetError> {
    CircularNet::from_fn(2, [n1, n2, 1], |z| {
        torus_point(big, small, u0 + du * lit(z[0] as f64), v0 + dv * lit(z[1] as f64))
    })
}

/// Unit sphere sampled on a longitude (first index) / latitude grid.
pub fn sphere_grid<T: Real>(lon0: T, dlon: T, lat0: T, dlat: T, n1: usize, n2: usize) -> Result<CircularNet<T>, NetError> {
    CircularNet::from_fn(2, [n1, n2, 1], |z| spherical_point(T::one(), lat0 + dlat * lit(z[1] as f64), lon0 + dlon * lit(z[0] as f64)))
}

pub fn spherical_point<T: Real>(r: T, lat: T, lon: T) -> Vec3<T> {
    let (sa, ca) = lat.sin_cos();
    let (so, co) = lon.sin_cos();
    Vec3::new(r * ca * co, r * ca * so, r * sa)
}

/// Concentric spheres (first index) crossed with latitude and longitude.
pub fn spherical_lattice<T: Real>(radii: &[T], lats: &[T], lons: &[T]) -> Result<CircularNet<T>, NetError> {
    CircularNet::from_fn(3, [radii.len(), lats.len(), lons.len()], |z| spherical_point(radii[z[0]], lats[z[1]], lons[z[2]]))
}

/// Radial, latitude and longitude unit vectors at a lattice point.
pub fn spherical_lattice_frame<T: Real>(r: T, lat: T, lon: T) -> VertexFrame<T> {
    let (sa, ca) = lat.sin_cos();
    let (so, co) = lon.sin_cos();
    let t1 = Vec3::new(ca * co, ca * so, sa);
    let t2 = Vec3::new(-sa * co, -sa * so, ca);
    let t3 = Vec3::new(-so, co, T::zero());
    VertexFrame::new(spherical_point(r, lat, lon), t1, t2, t3)
}

/// The three coordinate planes through the origin of a 3D net.
pub fn coordinate_planes<T: Real>(net: &CircularNet<T>) -> Result<[CircularNet<T>; 3], NetError> {
    let e = net.extents;
    Ok([
        CircularNet::from_fn(2, [e[0], e[1], 1], |z| net.get([z[0], z[1], 0]))?,
        CircularNet::from_fn(2, [e[0], e[2], 1], |z| net.get([z[0], 0, z[1]]))?,
        CircularNet::from_fn(2, [e[1], e[2], 1], |z| net.get([0, z[0], z[1]]))?,
    ])
}

/// Point at fraction `f` of the arc from `a` to `b` that avoids `x`, on the
/// circle through the three points.
pub fn opposite_arc_point<T: Real>(x: Vec3<T>, a: Vec3<T>, b: Vec3<T>, f: T, tol: Tol<T>) -> Option<Vec3<T>> {
    match circle_through(Point::Finite(x), Point::Finite(a), Point::Finite(b), tol).ok()? {
        Circle3D::Circle { center, normal, .. } => {
            let two_pi = T::PI() + T::PI();
            let ang = |n: Vec3<T>, p: Vec3<T>| {
                let u = a - center;
                let w = n.cross(u);
                let q = p - center;
                let t = q.dot(w).atan2(q.dot(u));
                if t < T::zero() {
                    t + two_pi
                } else {
                    t
                }
            };
            let n = if ang(normal, x) < ang(normal, b) { -normal } else { normal };
            let sweep = ang(n, b);
            let r = a - center;
            let (s, c) = (sweep * f).sin_cos();
            Some(center + r * c + n.cross(r) * s)
        }
        Circle3D::Line { .. } => None,
    }
}

fn jitter<T: Real, R: Rng>(rng: &mut R, amp: f64) -> Vec3<T> {
    Vec3::from_f64(rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp), rng.gen_range(-amp..=amp))
}

/// Fills a 2D net from its two axis polylines, putting each new vertex on
/// the opposite arc of the circle through its three predecessors.
pub fn fill_from_axes<T: Real, R: Rng>(
    rng: &mut R,
    axis1: &[Vec3<T>],
    axis2: &[Vec3<T>],
    spread: f64,
    tol: Tol<T>,
) -> Result<CircularNet<T>, NetError> {
    let (n1, n2) = (axis1.len(), axis2.len());
    let mut v = vec![Vec3::zero(); n1 * n2];
    for i in 0..n1 {
        v[i] = axis1[i];
    }
    for j in 0..n2 {
        v[n1 * j] = axis2[j];
    }
    for j in 1..n2 {
        for i in 1..n1 {
            let f: T = lit(rng.gen_range(0.5 - spread..0.5 + spread));
            let x = v[(i - 1) + n1 * (j - 1)];
            let a = v[i + n1 * (j - 1)];
            let b = v[(i - 1) + n1 * j];
            v[i + n1 * j] = opposite_arc_point(x, a, b, f, tol)
                .ok_or_else(|| NetError::InvalidNet("collinear predecessors".into()))?;
        }
    }
    CircularNet::new(2, [n1, n2, 1], v)
}

/// Perturbed unit-step polyline from `origin` along `dir`.
pub fn random_axis<T: Real, R: Rng>(rng: &mut R, origin: Vec3<T>, dir: Vec3<T>, n: usize, amp: f64) -> Vec<Vec3<T>> {
    (0..n)
        .map(|i| if i == 0 { origin } else { origin + dir * lit(i as f64) + jitter(rng, amp) })
        .collect()
}

/// Random 2D circular net with embedded quads.
pub fn random_circular_net<T: Real, R: Rng>(rng: &mut R, n1: usize, n2: usize, tol: Tol<T>) -> Result<CircularNet<T>, NetError> {
    let o = Vec3::zero();
    let a1 = random_axis(rng, o, Vec3::unit_x(), n1, 0.2);
    let a2 = random_axis(rng, o, Vec3::unit_y(), n2, 0.2);
    fill_from_axes(rng, &a1, &a2, 0.2, tol)
}

/// Random 3D circular net: three random coordinate planes completed by
/// Miquel's theorem. The completion can produce quads that are not
/// embedded; such draws are discarded, up to 100 attempts.
pub fn random_circular_net_3d<T: Real, R: Rng>(rng: &mut R, n: [usize; 3], tol: Tol<T>) -> Result<CircularNet<T>, NetError> {
    let o = Vec3::zero();
    let mut last = NetError::InvalidNet("no attempt".into());
    for _ in 0..100 {
        let a1 = random_axis(rng, o, Vec3::unit_x(), n[0], 0.1);
        let a2 = random_axis(rng, o, Vec3::unit_y(), n[1], 0.1);
        let a3 = random_axis(rng, o, Vec3::unit_z(), n[2], 0.1);
        let p12 = fill_from_axes(rng, &a1, &a2, 0.1, tol)?;
        let p13 = fill_from_axes(rng, &a1, &a3, 0.1, tol)?;
        let p23 = fill_from_axes(rng, &a2, &a3, 0.1, tol)?;
        match complete_3d_from_coordinate_planes(&p12, &p13, &p23, FillOrder::Lexicographic, tol) {
            Ok(net) if validate_circular(&net, tol).valid => return Ok(net),
            Ok(_) => last = NetError::InvalidNet("completed net has non-embedded quads".into()),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Uniformly distributed rotation.
pub fn random_rotation<T: Real, R: Rng>(rng: &mut R) -> [[T; 3]; 3] {
    let axis: Vec3<T> = loop {
        let v = jitter::<T, R>(rng, 1.0);
        let n = v.norm();
        if n > lit(0.1) && n <= T::one() {
            break v;
        }
    };
    // angle density proportional to 1 - cos for the Haar measure
    let angle = loop {
        let a: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        if rng.gen_range(0.0..2.0) <= 1.0 - a.cos() {
            break a;
        }
    };
    axis_angle(axis, lit(angle))
}

/// Frame at `x` given by the rows of a random rotation.
pub fn random_frame<T: Real, R: Rng>(rng: &mut R, x: Vec3<T>) -> VertexFrame<T> {
    let m = random_rotation::<T, R>(rng);
    VertexFrame::new(x, Vec3::from(m[0]), Vec3::from(m[1]), Vec3::from(m[2]))
}

/// Applies a rotation to the vectors of a frame.
pub fn rotate_frame<T: Real>(f: &VertexFrame<T>, m: &[[T; 3]; 3]) -> VertexFrame<T> {
    VertexFrame::new(f.x, mat_vec(m, f.t1), mat_vec(m, f.t2), mat_vec(m, f.n))
}

/// Frame at `z` from Gram-Schmidt on the forward edges, turned by a random
/// rotation of angle at most `max_angle`.
pub fn adapted_frame<T: Real, R: Rng>(rng: &mut R, net: &CircularNet<T>, z: [usize; 3], max_angle: f64) -> Option<VertexFrame<T>> {
    let x = net.get(z);
    let e = |d: usize| net.step(z, d, true).map(|w| net.get(w) - x);
    let t1 = e(1)?.normalized()?;
    let d2 = e(2)?;
    let t2 = (d2 - t1 * d2.dot(t1)).normalized()?;
    let mut t3 = t1.cross(t2);
    if let Some(d3) = e(3) {
        if d3.dot(t3) < T::zero() {
            t3 = -t3;
        }
    }
    let axis: Vec3<T> = jitter(rng, 1.0);
    let m = axis_angle(axis, lit(rng.gen_range(0.0..=max_angle)));
    Some(rotate_frame(&VertexFrame::new(x, t1, t2, t3), &m))
}

/// Random embedded quad on a random circle with a random frame.
pub fn random_quad_and_frame<T: Real, R: Rng>(rng: &mut R) -> (VertexQuad<T>, VertexFrame<T>) {
    let center: Vec3<T> = jitter(rng, 1.0);
    let radius: T = lit(rng.gen_range(0.5..2.0));
    let m = random_rotation::<T, R>(rng);
    let (u, w) = (Vec3::from(m[0]), Vec3::from(m[1]));
    let mut th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let mut pts = [Vec3::zero(); 4];
    for (k, p) in pts.iter_mut().enumerate() {
        if k > 0 {
            th += rng.gen_range(0.4..1.8);
        }
        let (s, c) = th.sin_cos();
        *p = center + (u * lit(c) + w * lit(s)) * radius;
    }
    let q = VertexQuad::new(pts[0], pts[1], pts[2], pts[3]);
    (q, random_frame(rng, pts[0]))
}
