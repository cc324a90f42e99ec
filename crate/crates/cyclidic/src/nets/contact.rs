use super::c1::sphere_distance;
use super::{CircularNet, CyclidicNet, Idx, NetError};
use crate::cyclide::{boundary_sphere, boundary_sphere_lie, VertexFrame};
use crate::lie::{ContactElement, OrientedSphere, Point};
use crate::scalar::{to_f64, Real, Tol};
use serde::{Deserialize, Serialize};

fn check_2d<T: Real>(c: &CyclidicNet<T>) -> Result<(), NetError> {
    if c.m() != 2 {
        return Err(NetError::InvalidNet("operation needs a two-dimensional net".into()));
    }
    Ok(())
}

/// Contact element `(x, t1 x t2)` at every vertex, in storage order.
pub fn extract_contact_element_net<T: Real>(c: &CyclidicNet<T>) -> Result<Vec<ContactElement<T>>, NetError> {
    check_2d(c)?;
    Ok(c.frames
        .iter()
        .map(|f| ContactElement::new(Point::Finite(f.x), f.t1.cross(f.t2)))
        .collect())
}

/// Largest disagreement, over all edges, between the spheres through an
/// edge that touch the contact elements at its two ends.
pub fn contact_element_residual<T: Real>(c: &CyclidicNet<T>) -> Result<T, NetError> {
    check_2d(c)?;
    let mut m = T::zero();
    for z in c.net.indices() {
        for dir in 1..=2 {
            let Some(w) = c.net.step(z, dir, true) else { continue };
            let (a, b) = (c.frame(z), c.frame(w));
            let d = b.x - a.x;
            let s = boundary_sphere_lie(a.x, d, a.t1.cross(a.t2))?;
            let s_back = boundary_sphere_lie(b.x, -d, b.t1.cross(b.t2))?;
            m = m.max(sphere_distance(&s, &s_back));
        }
    }
    Ok(m)
}

/// Moves every vertex by `eps` along its normal and keeps the frames.
pub fn offset_net<T: Real>(c: &CyclidicNet<T>, eps: T, tol: Tol<T>) -> Result<CyclidicNet<T>, NetError> {
    check_2d(c)?;
    let net = c.net.map(|z, x| x + c.frame(z).n * eps);
    let scale = net.diameter().max(T::one());
    for z in net.indices() {
        for dir in 1..=2 {
            if let Some(w) = net.step(z, dir, true) {
                if net.get(z).dist(net.get(w)) <= tol.rel * scale {
                    return Err(NetError::CollidingVertices(z));
                }
            }
        }
    }
    let frames = c
        .frames
        .iter()
        .zip(&net.vertices)
        .map(|(f, x)| VertexFrame { x: *x, ..*f })
        .collect();
    Ok(CyclidicNet { net, frames, seed: c.seed })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RibaucourReport<T> {
    /// Per vertex, in storage order.
    pub residuals: Vec<f64>,
    /// Per vertex, the sphere touching both nets.
    pub spheres: Vec<OrientedSphere<T>>,
    pub max_residual: f64,
    pub pass: bool,
}

fn ribaucour_frame<T: Real>(f: &VertexFrame<T>, xp: crate::vec3::Vec3<T>, z: Idx, tol: Tol<T>) -> Result<VertexFrame<T>, NetError> {
    if f.x.dist(xp) <= tol.rel * f.x.norm().max(T::one()) {
        return Err(NetError::CoincidentPoints(z));
    }
    Ok(f.reflect_to(xp, tol)?.flip(3))
}

/// The net with vertices `xplus` whose frames are the reflections of the
/// frames of `a` with flipped normals.
pub fn ribaucour_transform<T: Real>(a: &CyclidicNet<T>, xplus: &CircularNet<T>, tol: Tol<T>) -> Result<CyclidicNet<T>, NetError> {
    check_2d(a)?;
    if xplus.extents != a.net.extents || xplus.m != a.m() {
        return Err(NetError::InvalidNet("extents differ".into()));
    }
    let frames = a
        .net
        .indices()
        .into_iter()
        .map(|z| ribaucour_frame(a.frame(z), xplus.get(z), z, tol))
        .collect::<Result<_, _>>()?;
    Ok(CyclidicNet { net: xplus.clone(), frames, seed: a.seed })
}

/// Checks `B+ = H F(+) B` at every vertex.
pub fn verify_ribaucour<T: Real>(a: &CyclidicNet<T>, b: &CyclidicNet<T>, tol: Tol<T>) -> Result<RibaucourReport<T>, NetError> {
    check_2d(a)?;
    check_2d(b)?;
    if a.net.extents != b.net.extents {
        return Err(NetError::InvalidNet("extents differ".into()));
    }
    let mut residuals = Vec::new();
    let mut spheres = Vec::new();
    for z in a.net.indices() {
        let fa = a.frame(z);
        let fb = b.frame(z);
        let expect = ribaucour_frame(fa, fb.x, z, tol)?;
        residuals.push(to_f64(expect.max_diff(fb)));
        spheres.push(boundary_sphere(fa.x, fb.x - fa.x, fa.n, tol)?);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(RibaucourReport { pass: max_residual <= 1e-10, residuals, spheres, max_residual })
}
