use super::{patches_of_net, shift, Arc, CyclidicNet, PatchKey, PatchSet};
use crate::cyclide::{CyclidicPatch, Edge};
use crate::lie::{projective_distance, LieVector};
use crate::scalar::{lit, to_f64, Real, Tol};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointCheck {
    pub a: PatchKey,
    pub b: PatchKey,
    /// Hausdorff distance between the two copies of the shared arc.
    pub arc: f64,
    /// Projective distance of the boundary spheres, up to orientation.
    pub sphere: f64,
    /// Largest angle between the two normals along the arc, in radians.
    pub normal: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C1Report {
    pub joints: Vec<JointCheck>,
    pub pass: bool,
}

pub(crate) const ARC_TOL: f64 = 1e-8;
pub(crate) const SPHERE_TOL: f64 = 1e-8;
pub(crate) const NORMAL_TOL: f64 = 1e-6;
const SAMPLES: usize = 10;

/// The arc of a patch boundary, through its corners and edge midpoint.
pub fn edge_arc<T: Real>(p: &CyclidicPatch<T>, e: Edge) -> Option<Arc<T>> {
    let pt = |s: T| {
        let (u, v) = e.at(s);
        p.eval_exact_corners(u, v).finite()
    };
    Arc::through(pt(T::zero())?, pt(lit(0.5))?, pt(T::one())?, p.tol)
}

pub(crate) fn sphere_distance<T: Real>(a: &LieVector<T>, b: &LieVector<T>) -> T {
    let mut f = *b;
    f.c[5] = -f.c[5];
    projective_distance(a, b).min(projective_distance(a, &f))
}

/// Largest angle between the normals of `a` along `ea` and of `b` at the
/// same points, located on `eb` by inversion.
pub(crate) fn normal_mismatch<T: Real>(
    a: &CyclidicPatch<T>,
    ea: Edge,
    b: &CyclidicPatch<T>,
    eb: Edge,
    angle: impl Fn(crate::vec3::Vec3<T>, crate::vec3::Vec3<T>) -> T,
) -> T {
    let mut m = T::zero();
    for k in 0..SAMPLES {
        let s: T = lit((k as f64 + 0.5) / SAMPLES as f64);
        let (u, v) = ea.at(s);
        let p = a.eval(u, v);
        let Some(na) = a.normal(u, v) else { return T::infinity() };
        let Some(sb) = b.edge_param(eb, &p) else { return T::infinity() };
        let (ub, vb) = eb.at(sb);
        let Some(nb) = b.normal(ub, vb) else { return T::infinity() };
        m = m.max(angle(na, nb));
    }
    m
}

fn check_joint<T: Real>(a: &CyclidicPatch<T>, ea: Edge, b: &CyclidicPatch<T>, eb: Edge, scale: T) -> (f64, f64, f64) {
    let arc = match (edge_arc(a, ea), edge_arc(b, eb)) {
        (Some(x), Some(y)) => to_f64(x.hausdorff(&y, SAMPLES) / scale),
        _ => f64::INFINITY,
    };
    let sphere = to_f64(sphere_distance(&a.boundary_sphere(ea), &b.boundary_sphere(eb)));
    let normal = to_f64(normal_mismatch(a, ea, b, eb, |x, y| x.angle(y)));
    (arc, sphere, normal)
}

/// Builds the patches of `cnet` and checks every interior joint.
pub fn check_c1_joints<T: Real>(cnet: &CyclidicNet<T>, tol: Tol<T>) -> C1Report {
    check_patch_joints(&patches_of_net(cnet, None, tol))
}

/// Checks every interior joint between neighboring patches of the same
/// orientation: shared arcs, boundary spheres and normals.
pub fn check_patch_joints<T: Real>(set: &PatchSet<T>) -> C1Report {
    let scale = set
        .patches
        .values()
        .filter_map(|p| p.as_ref().ok())
        .map(|p| p.quad.diameter())
        .fold(T::one(), |m, d| m.max(d));
    let mut joints = Vec::new();
    for (&(z, a, b), pa) in &set.patches {
        for (dir, ea, eb) in [(a, Edge::Right, Edge::Left), (b, Edge::Top, Edge::Bottom)] {
            let key_b = (shift(z, dir, true).unwrap(), a, b);
            let Some(pb) = set.patches.get(&key_b) else { continue };
            let (arc, sphere, normal) = match (pa, pb) {
                (Ok(x), Ok(y)) => check_joint(x, ea, y, eb, scale),
                _ => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
            };
            let pass = arc <= ARC_TOL && sphere <= SPHERE_TOL && normal <= NORMAL_TOL;
            joints.push(JointCheck { a: (z, a, b), b: key_b, arc, sphere, normal, pass });
        }
    }
    let pass = joints.iter().all(|j| j.pass);
    C1Report { joints, pass }
}
