//! Dupin cyclide patches: sphere-family conics, patch construction from a
//! circular quad and a frame, evaluation, subpatches, singular points.

mod conic;
mod construct;
mod patch;
mod spherical;

pub use conic::FamilyConic;
pub use construct::{
    arc_midpoint, arc_midpoint_lie, boundary_sphere, boundary_sphere_lie, is_spherical, reflect_in_bisector,
    third_sphere, vertex_frames, ArcMidpointData,
};
pub use patch::{patch_allowing_singular, patch_from_data, patch_with_midpoints, CyclidicPatch, Edge, Midpoint, PatchKind};
pub use spherical::{ProjectiveSegment, SphericalPatch};

use crate::lie::{circle_through, Circle3D, LieError, Point};
use crate::scalar::{Real, Tol};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CyclideError {
    #[error("zero chord")]
    ZeroDelta,
    #[error("coincident points")]
    CoincidentPoints,
    #[error("boundary spheres in oriented contact")]
    OrientedContactDegenerate,
    #[error("invalid quad: {0}")]
    InvalidQuad(String),
    #[error("quad is not embedded in its circle")]
    NonEmbeddedQuad,
    #[error("singular vertex")]
    SingularVertex,
    #[error("degenerate subdomain")]
    DegenerateSubdomain,
    #[error("degenerate span")]
    DegenerateSpan,
    #[error("ambiguous support sphere: {0}")]
    AmbiguousSupport(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Orthonormal frame `(t1, t2, n)` at a base point. In three-dimensional
/// nets the third vector is the third tangent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexFrame<T> {
    pub x: Vec3<T>,
    pub t1: Vec3<T>,
    pub t2: Vec3<T>,
    pub n: Vec3<T>,
}

impl<T: Real> VertexFrame<T> {
    pub fn new(x: Vec3<T>, t1: Vec3<T>, t2: Vec3<T>, n: Vec3<T>) -> Self {
        VertexFrame { x, t1, t2, n }
    }

    /// Frame with `n = t1 x t2`.
    pub fn from_tangents(x: Vec3<T>, t1: Vec3<T>, t2: Vec3<T>) -> Self {
        VertexFrame { x, t1, t2, n: t1.cross(t2) }
    }

    pub fn vecs(&self) -> [Vec3<T>; 3] {
        [self.t1, self.t2, self.n]
    }

    pub fn with_vecs(x: Vec3<T>, v: [Vec3<T>; 3]) -> Self {
        VertexFrame { x, t1: v[0], t2: v[1], n: v[2] }
    }

    /// Vector `i` with 1-based indexing.
    pub fn vec(&self, i: usize) -> Vec3<T> {
        self.vecs()[i - 1]
    }

    /// Reverses the direction of vector `i` (1-based).
    pub fn flip(&self, i: usize) -> Self {
        let mut v = self.vecs();
        v[i - 1] = -v[i - 1];
        Self::with_vecs(self.x, v)
    }

    /// Reflection in the bisecting plane of `x` and `xi`, based at `xi`.
    pub fn reflect_to(&self, xi: Vec3<T>, tol: Tol<T>) -> Result<Self, CyclideError> {
        let v = self.vecs();
        let mut out = v;
        for k in 0..3 {
            out[k] = reflect_in_bisector(self.x, xi, v[k], tol)?;
        }
        Ok(Self::with_vecs(xi, out))
    }

    /// Largest deviation of the Gram matrix from the identity.
    pub fn gram_residual(&self) -> T {
        let v = self.vecs();
        let mut m = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { T::one() } else { T::zero() };
                m = m.max((v[i].dot(v[j]) - e).abs());
            }
        }
        m
    }

    /// Componentwise distance of the vectors (base points ignored).
    pub fn max_diff(&self, o: &Self) -> T {
        let a = self.vecs();
        let b = o.vecs();
        (0..3).fold(T::zero(), |m, k| m.max((a[k] - b[k]).max_abs()))
    }

    pub fn det(&self) -> T {
        self.t1.cross(self.t2).dot(self.n)
    }

    /// Rows are `t1, t2, n`.
    pub fn matrix(&self) -> [[T; 3]; 3] {
        [self.t1.to_array(), self.t2.to_array(), self.n.to_array()]
    }

    pub fn cast<U: Real>(&self) -> VertexFrame<U> {
        VertexFrame { x: self.x.cast(), t1: self.t1.cast(), t2: self.t2.cast(), n: self.n.cast() }
    }
}

/// Four points in cyclic order `x, x1, x12, x2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexQuad<T> {
    pub x: Vec3<T>,
    pub x1: Vec3<T>,
    pub x12: Vec3<T>,
    pub x2: Vec3<T>,
}

impl<T: Real> VertexQuad<T> {
    pub fn new(x: Vec3<T>, x1: Vec3<T>, x12: Vec3<T>, x2: Vec3<T>) -> Self {
        VertexQuad { x, x1, x12, x2 }
    }

    pub fn points(&self) -> [Vec3<T>; 4] {
        [self.x, self.x1, self.x12, self.x2]
    }

    pub fn diameter(&self) -> T {
        let p = self.points();
        let mut d = T::zero();
        for a in &p {
            for b in &p {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// The circle (or line) through `x, x1, x2`.
    pub fn carrier(&self, tol: Tol<T>) -> Result<Circle3D<T>, CyclideError> {
        Ok(circle_through(Point::Finite(self.x), Point::Finite(self.x1), Point::Finite(self.x2), tol)?)
    }

    /// Checks finiteness, distinctness and concircularity.
    pub fn validate(&self, tol: Tol<T>) -> Result<(), CyclideError> {
        let p = self.points();
        if p.iter().any(|v| !v.is_finite()) {
            return Err(CyclideError::InvalidQuad("non-finite vertex".into()));
        }
        let d = self.diameter();
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i].dist(p[j]) <= tol.rel * d || d == T::zero() {
                    return Err(CyclideError::InvalidQuad(format!("vertices {i} and {j} coincide")));
                }
            }
        }
        let res = crate::lie::concircular_residual(p.map(Point::Finite), tol)?;
        if res > tol.switch {
            return Err(CyclideError::InvalidQuad(format!("not concircular (residual {:.3e})", res.to_f64().unwrap())));
        }
        Ok(())
    }

    /// Whether the pairs `{a, b}` and `{c, d}` interleave on the carrier.
    pub fn separated(&self, a: Vec3<T>, b: Vec3<T>, c: Vec3<T>, d: Vec3<T>, tol: Tol<T>) -> Result<bool, CyclideError> {
        let carrier = self.carrier(tol)?;
        Ok(match carrier {
            Circle3D::Circle { center, .. } => {
                let (u, v) = carrier.plane_basis(self.x);
                let ang = |p: Vec3<T>| {
                    let q = p - center;
                    q.dot(v).atan2(q.dot(u))
                };
                let two_pi = T::PI() + T::PI();
                let ccw = |from: T, to: T| {
                    let mut r = to - from;
                    while r < T::zero() {
                        r += two_pi;
                    }
                    while r >= two_pi {
                        r -= two_pi;
                    }
                    r
                };
                let (aa, ab) = (ang(a), ang(b));
                let span = ccw(aa, ab);
                (ccw(aa, ang(c)) < span) != (ccw(aa, ang(d)) < span)
            }
            Circle3D::Line { point, direction } => {
                let s = |p: Vec3<T>| (p - point).dot(direction);
                let (lo, hi) = (s(a).min(s(b)), s(a).max(s(b)));
                let inside = |q: T| lo < q && q < hi;
                inside(s(c)) != inside(s(d))
            }
        })
    }

    /// Embedded quads have `x, x1, x12, x2` in cyclic order on the carrier.
    pub fn is_embedded(&self, tol: Tol<T>) -> Result<bool, CyclideError> {
        Ok(!self.separated(self.x, self.x1, self.x2, self.x12, tol)?
            && !self.separated(self.x, self.x2, self.x1, self.x12, tol)?)
    }

    pub fn cast<U: Real>(&self) -> VertexQuad<U> {
        VertexQuad { x: self.x.cast(), x1: self.x1.cast(), x12: self.x12.cast(), x2: self.x2.cast() }
    }
}
