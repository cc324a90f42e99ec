use super::conic::{quadratic_roots_in, FamilyConic};
use super::construct::{arc_midpoint_lie, boundary_sphere_lie, spherical_residual, third_sphere, vertex_frames};
use super::spherical::SphericalPatch;
use super::{CyclideError, VertexFrame, VertexQuad};
use crate::lie::{lie_inner, polarity_residual, span_point, ContactElement, LieVector, Point};
use crate::scalar::{lit, Real, Tol};
use crate::vec3::Vec3;

/// Which point fixes the parameter value 1/2 of a family: the default arc
/// midpoint on the edge through `x`, a given point on that edge, or a given
/// point on the opposite edge.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Midpoint<T> {
    #[default]
    Default,
    Near(Point<T>),
    Far(Point<T>),
}

/// Boundary arcs of the unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Edge {
    /// `t2 = 0`, from `x` to `x1`
    Bottom,
    /// `t1 = 1`, from `x1` to `x12`
    Right,
    /// `t2 = 1`, from `x2` to `x12`
    Top,
    /// `t1 = 0`, from `x` to `x2`
    Left,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left];

    /// Domain point at arc parameter `s`.
    pub fn at<T: Real>(&self, s: T) -> (T, T) {
        match self {
            Edge::Bottom => (s, T::zero()),
            Edge::Right => (T::one(), s),
            Edge::Top => (s, T::one()),
            Edge::Left => (T::zero(), s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PatchKind<T> {
    /// `family1` holds `s(1), sigma(1), s2(1)` and is parametrized by `t2`;
    /// `family2` holds `s(2), sigma(2), s1(2)` and is parametrized by `t1`.
    Generic { family1: FamilyConic<T>, family2: FamilyConic<T> },
    Spherical(SphericalPatch<T>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CyclidicPatch<T> {
    pub quad: VertexQuad<T>,
    pub frame: VertexFrame<T>,
    pub kind: PatchKind<T>,
    pub tol: Tol<T>,
}

pub fn patch_from_data<T: Real>(q: &VertexQuad<T>, b: &VertexFrame<T>, tol: Tol<T>) -> Result<CyclidicPatch<T>, CyclideError> {
    patch_with_midpoints(q, b, Midpoint::Default, Midpoint::Default, tol)
}

/// Builds the patch with vertices `q` and frame `b` at `q.x`. `m1` fixes the
/// line `t1 = 1/2`, `m2` the line `t2 = 1/2`.
pub fn patch_with_midpoints<T: Real>(
    q: &VertexQuad<T>,
    b: &VertexFrame<T>,
    m1: Midpoint<T>,
    m2: Midpoint<T>,
    tol: Tol<T>,
) -> Result<CyclidicPatch<T>, CyclideError> {
    if !q.is_embedded(tol)? {
        return Err(CyclideError::NonEmbeddedQuad);
    }
    build(q, b, m1, m2, tol)
}

/// Same construction without the embeddedness requirement. Quads whose
/// vertices are not in cyclic order on their circle give patches through
/// singular points of the cyclide.
pub fn patch_allowing_singular<T: Real>(q: &VertexQuad<T>, b: &VertexFrame<T>, tol: Tol<T>) -> Result<CyclidicPatch<T>, CyclideError> {
    build(q, b, Midpoint::Default, Midpoint::Default, tol)
}

fn build<T: Real>(
    q: &VertexQuad<T>,
    b: &VertexFrame<T>,
    m1: Midpoint<T>,
    m2: Midpoint<T>,
    tol: Tol<T>,
) -> Result<CyclidicPatch<T>, CyclideError> {
    q.validate(tol)?;
    let diam = q.diameter();
    if b.x.dist(q.x) > tol.switch * diam {
        return Err(CyclideError::InvalidQuad("frame is not based at the first vertex".into()));
    }
    let frame_tol: T = lit(1e-8);
    if b.gram_residual() > frame_tol {
        return Err(CyclideError::InvalidQuad("frame is not orthonormal".into()));
    }
    let frame = VertexFrame { x: q.x, ..*b };
    let spherical = |m1, m2| -> Result<CyclidicPatch<T>, CyclideError> {
        let sp = SphericalPatch::new(q, &frame, m1, m2, tol)?;
        Ok(CyclidicPatch { quad: *q, frame, kind: PatchKind::Spherical(sp), tol })
    };
    if spherical_residual(q, &frame, tol) <= tol.rel {
        return spherical(m1, m2);
    }
    let (x, x1, x12, x2) = (q.x, q.x1, q.x12, q.x2);
    let n1 = frame.reflect_to(x1, tol)?.n;
    let n2 = frame.reflect_to(x2, tol)?.n;
    let s1 = boundary_sphere_lie(x, x1 - x, frame.n)?;
    let s2 = boundary_sphere_lie(x, x2 - x, frame.n)?;
    let s1_2 = boundary_sphere_lie(x2, x12 - x2, n2)?;
    let s2_1 = boundary_sphere_lie(x1, x12 - x1, n1)?;
    // the pairing is quadratic in the distance of the two spheres
    if polarity_residual(&s1, &s1_2).sqrt() < tol.switch || polarity_residual(&s2, &s2_1).sqrt() < tol.switch {
        return spherical(m1, m2);
    }
    let sigma2 = match m1 {
        Midpoint::Default => third_sphere(&s1, &arc_midpoint_lie(x, x1, frame.t1)?, &s1_2, tol)?,
        Midpoint::Near(p) => third_sphere(&s1, &p.lift(), &s1_2, tol)?,
        Midpoint::Far(p) => third_sphere(&s1_2, &p.lift(), &s1, tol)?,
    };
    let sigma1 = match m2 {
        Midpoint::Default => third_sphere(&s2, &arc_midpoint_lie(x, x2, frame.t2)?, &s2_1, tol)?,
        Midpoint::Near(p) => third_sphere(&s2, &p.lift(), &s2_1, tol)?,
        Midpoint::Far(p) => third_sphere(&s2_1, &p.lift(), &s2, tol)?,
    };
    let family1 = FamilyConic::new(s1, sigma1, s1_2);
    let family2 = FamilyConic::new(s2, sigma2, s2_1);
    Ok(CyclidicPatch { quad: *q, frame, kind: PatchKind::Generic { family1, family2 }, tol })
}

impl<T: Real> CyclidicPatch<T> {
    pub fn is_spherical(&self) -> bool {
        matches!(self.kind, PatchKind::Spherical(_))
    }

    pub fn eval(&self, t1: T, t2: T) -> Point<T> {
        match &self.kind {
            PatchKind::Generic { family1, family2 } => {
                span_point(&family2.eval(t1), &family1.eval(t2), self.tol).unwrap_or(Point::Infinity)
            }
            PatchKind::Spherical(sp) => sp.eval(t1, t2),
        }
    }

    /// Like [`eval`](Self::eval) but with the exact vertices at the corners.
    pub fn eval_exact_corners(&self, t1: T, t2: T) -> Point<T> {
        let (z, o) = (T::zero(), T::one());
        let q = &self.quad;
        match (t1 == z || t1 == o, t2 == z || t2 == o) {
            (true, true) => Point::Finite(match (t1 == o, t2 == o) {
                (false, false) => q.x,
                (true, false) => q.x1,
                (true, true) => q.x12,
                (false, true) => q.x2,
            }),
            _ => self.eval(t1, t2),
        }
    }

    pub fn eval_contact_element(&self, t1: T, t2: T) -> Result<ContactElement<T>, CyclideError> {
        match &self.kind {
            PatchKind::Generic { family1, family2 } => {
                let a = family2.eval(t1);
                let b = family1.eval(t2);
                ContactElement::from_span(&a, &b, self.tol).map_err(|_| CyclideError::DegenerateSpan)
            }
            PatchKind::Spherical(sp) => {
                let p = sp.eval(t1, t2);
                let n = sp.normal_at(&p).ok_or(CyclideError::DegenerateSpan)?;
                Ok(ContactElement::new(p, n))
            }
        }
    }

    /// Oriented surface normal.
    pub fn normal(&self, t1: T, t2: T) -> Option<Vec3<T>> {
        self.eval_contact_element(t1, t2).ok().map(|c| c.normal)
    }

    /// The boundary sphere supporting an edge, in Lie coordinates.
    pub fn boundary_sphere(&self, e: Edge) -> LieVector<T> {
        match &self.kind {
            PatchKind::Generic { family1, family2 } => match e {
                Edge::Bottom => family1.eval(T::zero()),
                Edge::Top => family1.eval(T::one()),
                Edge::Left => family2.eval(T::zero()),
                Edge::Right => family2.eval(T::one()),
            },
            PatchKind::Spherical(sp) => sp.support.lift(),
        }
    }

    pub fn corner_frames(&self) -> Result<[VertexFrame<T>; 4], CyclideError> {
        vertex_frames(&self.quad, &self.frame, self.tol)
    }

    /// Parameters of a point on the patch's cyclide.
    pub fn param_of(&self, p: &Point<T>) -> Option<(T, T)> {
        match &self.kind {
            PatchKind::Generic { family1, family2 } => {
                let l = p.lift();
                Some((family2.invert(&l)?, family1.invert(&l)?))
            }
            PatchKind::Spherical(sp) => sp.param_of(p),
        }
    }

    /// Arc parameter of a point on the given edge.
    pub fn edge_param(&self, e: Edge, p: &Point<T>) -> Option<T> {
        let (t1, t2) = self.param_of(p)?;
        Some(match e {
            Edge::Bottom | Edge::Top => t1,
            Edge::Left | Edge::Right => t2,
        })
    }

    /// The patch over `[0, u0] x [0, v0]`, reparametrized to the unit square.
    pub fn subpatch(&self, u0: T, v0: T) -> Result<Self, CyclideError> {
        if !(u0 > T::zero() && u0 <= T::one() && v0 > T::zero() && v0 <= T::one()) {
            return Err(CyclideError::DegenerateSubdomain);
        }
        let corner = |a: T, b: T| self.eval_exact_corners(a, b).finite().ok_or(CyclideError::SingularVertex);
        let q = VertexQuad::new(self.quad.x, corner(u0, T::zero())?, corner(u0, v0)?, corner(T::zero(), v0)?);
        let p = q.points();
        let d = q.diameter();
        for i in 0..4 {
            for j in i + 1..4 {
                if p[i].dist(p[j]) <= self.tol.rel * d || d == T::zero() {
                    return Err(CyclideError::SingularVertex);
                }
            }
        }
        let kind = match &self.kind {
            PatchKind::Generic { family1, family2 } => {
                PatchKind::Generic { family1: family1.restrict(T::zero(), v0), family2: family2.restrict(T::zero(), u0) }
            }
            PatchKind::Spherical(sp) => PatchKind::Spherical(sp.restrict(u0, v0).ok_or(CyclideError::DegenerateSubdomain)?),
        };
        Ok(CyclidicPatch { quad: q, frame: self.frame, kind, tol: self.tol })
    }

    /// Parameters in `[0, 1]` where a family member is a point sphere, as
    /// `(family, t)`; family 1 is parametrized by `t2`, family 2 by `t1`.
    pub fn singular_parameters(&self) -> Vec<(usize, T)> {
        let mut out = Vec::new();
        if let PatchKind::Generic { family1, family2 } = &self.kind {
            let slack: T = lit(1e-9);
            for (id, f) in [(1, family1), (2, family2)] {
                let (a, b, c) = f.radius_coeffs();
                for t in quadratic_roots_in(a, b, c, -slack, T::one() + slack) {
                    out.push((id, t.max(T::zero()).min(T::one())));
                }
            }
        }
        out
    }

    /// Largest relative polarity residual between family members on an
    /// `n x n` parameter grid.
    pub fn polarity_residual(&self, n: usize) -> T {
        let mut m = T::zero();
        if let PatchKind::Generic { family1, family2 } = &self.kind {
            for i in 0..n {
                for j in 0..n {
                    let a = family1.eval(lit(i as f64 / (n - 1) as f64));
                    let b = family2.eval(lit(j as f64 / (n - 1) as f64));
                    let d = a.norm() * b.norm();
                    if d > T::zero() {
                        m = m.max(lie_inner(&a, &b).abs() / d);
                    }
                }
            }
        }
        m
    }
}
