//! Patches lying in a single sphere or plane. The support is mapped to a
//! plane by an inversion; a Moebius map then sends the two orthogonal
//! circle pencils to rays and concentric circles, or to two families of
//! parallel lines.

use super::construct::{arc_midpoint, boundary_sphere, reflect_in_bisector};
use super::{CyclideError, Midpoint, VertexFrame, VertexQuad};
use crate::linalg;
use crate::lie::{OrientedSphere, Point};
use crate::scalar::{lit, to_f64, Real, Tol};
use crate::vec3::Vec3;
use num_complex::Complex;

/// Projective parametrization `h(t) = (1 - t) v0 + t v1` of an arc of the
/// real projective line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveSegment<T> {
    pub v0: [T; 2],
    pub v1: [T; 2],
}

fn cross2<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[1] - a[1] * b[0]
}

fn norm2d<T: Real>(a: [T; 2]) -> T {
    a[0].hypot(a[1])
}

impl<T: Real> ProjectiveSegment<T> {
    /// The segment with `h(0) ~ h0`, `h(1/2) ~ hm`, `h(1) ~ h1`.
    pub fn through(h0: [T; 2], hm: [T; 2], h1: [T; 2]) -> Option<Self> {
        let det = cross2(h0, h1);
        let eps: T = lit(1e-13);
        if det.abs() <= eps * norm2d(h0) * norm2d(h1) {
            return None;
        }
        let a = cross2(hm, h1) / det;
        let b = cross2(h0, hm) / det;
        let m = norm2d(hm);
        if a.abs() * norm2d(h0) <= eps * m || b.abs() * norm2d(h1) <= eps * m {
            return None;
        }
        Some(ProjectiveSegment { v0: [a * h0[0], a * h0[1]], v1: [b * h1[0], b * h1[1]] })
    }

    pub fn at(&self, t: T) -> [T; 2] {
        let s = T::one() - t;
        [s * self.v0[0] + t * self.v1[0], s * self.v0[1] + t * self.v1[1]]
    }

    /// Affine value `h0 / h1`.
    pub fn ratio(&self, t: T) -> T {
        let h = self.at(t);
        h[0] / h[1]
    }

    /// Angle whose half-angle direction is `h(t)`.
    pub fn angle(&self, t: T) -> T {
        let h = self.at(t);
        let two: T = lit(2.0);
        two * h[1].atan2(h[0])
    }

    /// Parameter `t` with `h(t)` parallel to `g`.
    pub fn invert(&self, g: [T; 2]) -> Option<T> {
        let c0 = cross2(self.v0, g);
        let c1 = cross2(self.v1, g);
        let d = c0 - c1;
        (d != T::zero()).then(|| c0 / d)
    }

    pub fn restrict(&self, t0: T, t1: T) -> Option<Self> {
        let half: T = lit(0.5);
        Self::through(self.at(t0), self.at(half * (t0 + t1)), self.at(t1))
    }
}

fn ratio_vec<T: Real>(s: T) -> [T; 2] {
    [s, T::one()]
}

fn angle_vec<T: Real>(theta: T) -> [T; 2] {
    let half: T = lit(0.5);
    [(half * theta).cos(), (half * theta).sin()]
}

/// Inversion in the sphere of radius `sqrt(k)` about `center`, followed by
/// orthonormal coordinates on the image plane.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Chart<T> {
    center: Vec3<T>,
    k: T,
    origin: Vec3<T>,
    e1: Vec3<T>,
    e2: Vec3<T>,
}

impl<T: Real> Chart<T> {
    fn invert(&self, p: Point<T>) -> Point<T> {
        match p {
            Point::Infinity => Point::Finite(self.center),
            Point::Finite(q) => {
                let d = q - self.center;
                let dd = d.norm2();
                if dd == T::zero() {
                    Point::Infinity
                } else {
                    Point::Finite(self.center + d * (self.k / dd))
                }
            }
        }
    }

    fn to_z(&self, p: Point<T>) -> Option<Complex<T>> {
        let q = self.invert(p).finite()?;
        let d = q - self.origin;
        Some(Complex::new(d.dot(self.e1), d.dot(self.e2)))
    }

    fn from_z(&self, z: Option<Complex<T>>) -> Point<T> {
        match z {
            Some(z) if z.re.is_finite() && z.im.is_finite() => {
                self.invert(Point::Finite(self.origin + self.e1 * z.re + self.e2 * z.im))
            }
            _ => Point::Finite(self.center),
        }
    }
}

/// Planar circle `c + e0 + (|c|^2 - r^2) einf` or line `n + 2d einf`, as
/// `(x, y, e0, einf)`.
type Mv<T> = [T; 4];

fn minner<T: Real>(a: &Mv<T>, b: &Mv<T>) -> T {
    let half: T = lit(0.5);
    a[0] * b[0] + a[1] * b[1] - half * (a[2] * b[3] + a[3] * b[2])
}

fn det3<T: Real>(m: [[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Generalized circle through three points, unit normalized.
fn circle3<T: Real>(z: [Complex<T>; 3]) -> Option<Mv<T>> {
    let half: T = lit(0.5);
    let rows: Vec<[T; 4]> = z.iter().map(|p| [p.re, p.im, -half * p.norm_sqr(), -half]).collect();
    let mut c = [T::zero(); 4];
    for k in 0..4 {
        let mut m = [[T::zero(); 3]; 3];
        for i in 0..3 {
            let mut jj = 0;
            for j in 0..4 {
                if j != k {
                    m[i][jj] = rows[i][j];
                    jj += 1;
                }
            }
        }
        let d = det3(m);
        c[k] = if k % 2 == 0 { d } else { -d };
    }
    let q = minner(&c, &c);
    if !(q > T::zero()) {
        return None;
    }
    let s = q.sqrt();
    Some(c.map(|x| x / s))
}

fn mv_to_point<T: Real>(v: &Mv<T>) -> Option<Complex<T>> {
    let n = v.iter().fold(T::zero(), |a, &b| a.hypot(b));
    let eps: T = lit(1e-12);
    if v[2].abs() <= eps * n {
        return None;
    }
    Some(Complex::new(v[0] / v[2], v[1] / v[2]))
}

fn comb<T: Real>(a: &Mv<T>, s: T, b: &Mv<T>, r: T) -> Mv<T> {
    [a[0] * s + b[0] * r, a[1] * s + b[1] * r, a[2] * s + b[2] * r, a[3] * s + b[3] * r]
}

/// The two null directions of the Lorentzian plane spanned by `a`, `b`.
fn null_pair<T: Real>(a: &Mv<T>, b: &Mv<T>) -> Option<(Mv<T>, Mv<T>)> {
    let (ga, gb, gc) = (minner(a, a), minner(a, b), minner(b, b));
    let disc = gb * gb - ga * gc;
    if disc < T::zero() {
        return None;
    }
    let sq = disc.sqrt();
    let q = -(gb + if gb >= T::zero() { sq } else { -sq });
    if ga.abs() >= gc.abs() {
        // ga x^2 + 2 gb x + gc = 0 with vectors x a + b
        if q == T::zero() || ga == T::zero() {
            return None;
        }
        Some((comb(a, q / ga, b, T::one()), comb(a, gc / q, b, T::one())))
    } else {
        // gc y^2 + 2 gb y + ga = 0 with vectors a + y b
        if q == T::zero() {
            return None;
        }
        Some((comb(a, T::one(), b, q / gc), comb(a, T::one(), b, ga / q)))
    }
}

/// Orthogonal complement of `span(a, b)` with respect to the form.
fn complement<T: Real>(a: &Mv<T>, b: &Mv<T>) -> Option<(Mv<T>, Mv<T>)> {
    let jrow = |v: &Mv<T>| vec![to_f64(v[0]), to_f64(v[1]), -0.5 * to_f64(v[3]), -0.5 * to_f64(v[2])];
    let ns = linalg::null_space(&[jrow(a), jrow(b)], 4, 1e-12);
    if ns.len() != 2 {
        return None;
    }
    let conv = |v: &Vec<f64>| [lit(v[0]), lit(v[1]), lit(v[2]), lit(v[3])];
    Some((conv(&ns[0]), conv(&ns[1])))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Mobius<T> {
    /// `w = (z - p) / (z - q)`
    Pair { p: Complex<T>, q: Complex<T> },
    /// `w = 1 / (z - p)`
    Parabolic { p: Complex<T> },
}

impl<T: Real> Mobius<T> {
    fn apply(&self, z: Option<Complex<T>>) -> Complex<T> {
        match (self, z) {
            (Mobius::Pair { p, q }, Some(z)) => (z - p) / (z - q),
            (Mobius::Pair { .. }, None) => Complex::new(T::one(), T::zero()),
            (Mobius::Parabolic { p }, Some(z)) => Complex::new(T::one(), T::zero()) / (z - p),
            (Mobius::Parabolic { .. }, None) => Complex::new(T::zero(), T::zero()),
        }
    }

    fn inverse(&self, w: Complex<T>) -> Option<Complex<T>> {
        let one = Complex::new(T::one(), T::zero());
        match self {
            Mobius::Pair { p, q } => {
                let d = one - w;
                (d.norm_sqr() > T::zero()).then(|| (p - q * w) / d)
            }
            Mobius::Parabolic { p } => (w.norm_sqr() > T::zero()).then(|| p + one / w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum NormalForm<T> {
    /// One family of rays from the origin, one of concentric circles
    /// (parametrized by squared radius).
    Polar { u_rays: bool },
    /// Lines `<w, i e> = a` and `<w, e> = b`.
    Parallel { e: Complex<T> },
}

/// A spherical patch. `u` parametrizes the lines `t2 = const` by `t2`,
/// `v` the lines `t1 = const` by `t1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalPatch<T> {
    pub support: OrientedSphere<T>,
    chart: Chart<T>,
    mobius: Mobius<T>,
    form: NormalForm<T>,
    pub u: ProjectiveSegment<T>,
    pub v: ProjectiveSegment<T>,
}

fn cdot<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.re + a.im * b.im
}

impl<T: Real> SphericalPatch<T> {
    pub fn new(
        q: &VertexQuad<T>,
        b: &VertexFrame<T>,
        m1: Midpoint<T>,
        m2: Midpoint<T>,
        tol: Tol<T>,
    ) -> Result<Self, CyclideError> {
        let support = boundary_sphere(q.x, q.x1 - q.x, b.n, tol)?;
        let chart = make_chart(q, &support)?;
        let zc = |p: Point<T>| chart.to_z(p).ok_or_else(|| CyclideError::AmbiguousSupport("vertex at inversion center".into()));
        let zx = zc(Point::Finite(q.x))?;
        let zx1 = zc(Point::Finite(q.x1))?;
        let zx12 = zc(Point::Finite(q.x12))?;
        let zx2 = zc(Point::Finite(q.x2))?;

        let t1_at_x2 = reflect_in_bisector(q.x, q.x2, b.t1, tol)?;
        let t2_at_x1 = reflect_in_bisector(q.x, q.x1, b.t2, tol)?;
        let near1 = match m1 {
            Midpoint::Near(p) => p,
            _ => arc_midpoint(q.x, q.x1, b.t1, tol)?.y,
        };
        let far1 = match m1 {
            Midpoint::Far(p) => p,
            _ => arc_midpoint(q.x2, q.x12, t1_at_x2, tol)?.y,
        };
        let near2 = match m2 {
            Midpoint::Near(p) => p,
            _ => arc_midpoint(q.x, q.x2, b.t2, tol)?.y,
        };
        let far2 = match m2 {
            Midpoint::Far(p) => p,
            _ => arc_midpoint(q.x1, q.x12, t2_at_x1, tol)?.y,
        };
        let (zn1, zf1, zn2, zf2) = (zc(near1)?, zc(far1)?, zc(near2)?, zc(far2)?);
        let bad = || CyclideError::AmbiguousSupport("degenerate boundary circle".into());
        let k1 = circle3([zx, zn1, zx1]).ok_or_else(bad)?;
        let k1f = circle3([zx2, zf1, zx12]).ok_or_else(bad)?;
        let k2 = circle3([zx, zn2, zx2]).ok_or_else(bad)?;
        let k2f = circle3([zx1, zf2, zx12]).ok_or_else(bad)?;

        let same = |a: &Mv<T>, c: &Mv<T>| {
            let g = minner(a, c);
            let d = comb(a, T::one(), c, -g.signum());
            let eps: T = lit(1e-9);
            d.iter().fold(T::zero(), |m, x| m.max(x.abs())) <= eps * a.iter().fold(T::zero(), |m, x| m.max(x.abs()))
        };
        let (pa, pb) = if !same(&k1, &k1f) {
            (k1, k1f)
        } else {
            complement(&k2, &k2f).ok_or_else(bad)?
        };
        let (ga, gb, gc) = (minner(&pa, &pa), minner(&pa, &pb), minner(&pb, &pb));
        let scale = ga.abs().max(gb.abs()).max(gc.abs());
        let det = (ga * gc - gb * gb) / (scale * scale);
        let par_tol: T = lit(1e-13);
        let to_pt = |v: &Mv<T>| mv_to_point(v).ok_or_else(|| CyclideError::AmbiguousSupport("pencil point at inversion center".into()));
        let (mobius, u_rays) = if det.abs() <= par_tol {
            let kernel = if ga.abs() >= gc.abs() { comb(&pa, -gb, &pb, ga) } else { comb(&pa, gc, &pb, -gb) };
            (Mobius::Parabolic { p: to_pt(&kernel)? }, None)
        } else if det > T::zero() {
            // U-circles meet in two points: they become rays
            let (c1, c2) = complement(&pa, &pb).ok_or_else(bad)?;
            let (n1, n2) = null_pair(&c1, &c2).ok_or_else(bad)?;
            (Mobius::Pair { p: to_pt(&n1)?, q: to_pt(&n2)? }, Some(true))
        } else {
            let (n1, n2) = null_pair(&pa, &pb).ok_or_else(bad)?;
            (Mobius::Pair { p: to_pt(&n1)?, q: to_pt(&n2)? }, Some(false))
        };
        let w = |z: Complex<T>| mobius.apply(Some(z));
        let (wx, wx1, wx2) = (w(zx), w(zx1), w(zx2));
        let wu = w(match m2 {
            Midpoint::Far(_) => zf2,
            _ => zn2,
        });
        let wv = w(match m1 {
            Midpoint::Far(_) => zf1,
            _ => zn1,
        });
        let seg = |a: [T; 2], m: [T; 2], c: [T; 2]| ProjectiveSegment::through(a, m, c).ok_or_else(bad);
        let angle = |z: Complex<T>| angle_vec(z.im.atan2(z.re));
        let rad = |z: Complex<T>| ratio_vec(z.norm_sqr());
        let (form, u, v) = match u_rays {
            None => {
                let d = wx1 - wx;
                let e = d / d.norm();
                let ep = e * Complex::new(T::zero(), T::one());
                let off = |z: Complex<T>| ratio_vec(cdot(z, ep));
                let along = |z: Complex<T>| ratio_vec(cdot(z, e));
                (NormalForm::Parallel { e }, seg(off(wx), off(wu), off(wx2))?, seg(along(wx), along(wv), along(wx1))?)
            }
            Some(true) => (NormalForm::Polar { u_rays: true }, seg(angle(wx), angle(wu), angle(wx2))?, seg(rad(wx), rad(wv), rad(wx1))?),
            Some(false) => (NormalForm::Polar { u_rays: false }, seg(rad(wx), rad(wu), rad(wx2))?, seg(angle(wx), angle(wv), angle(wx1))?),
        };
        Ok(SphericalPatch { support, chart, mobius, form, u, v })
    }

    fn w_at(&self, t1: T, t2: T) -> Complex<T> {
        match self.form {
            NormalForm::Parallel { e } => {
                let ep = e * Complex::new(T::zero(), T::one());
                ep * self.u.ratio(t2) + e * self.v.ratio(t1)
            }
            NormalForm::Polar { u_rays } => {
                let (theta, r2) = if u_rays { (self.u.angle(t2), self.v.ratio(t1)) } else { (self.v.angle(t1), self.u.ratio(t2)) };
                Complex::from_polar(r2.max(T::zero()).sqrt(), theta)
            }
        }
    }

    pub fn eval(&self, t1: T, t2: T) -> Point<T> {
        let w = self.w_at(t1, t2);
        self.chart.from_z(self.mobius.inverse(w))
    }

    /// Oriented support normal at a point of the patch.
    pub fn normal_at(&self, p: &Point<T>) -> Option<Vec3<T>> {
        match (self.support, p) {
            (OrientedSphere::Plane { normal, .. }, _) => Some(normal),
            (s, Point::Finite(x)) => s.normal_at(*x),
            _ => None,
        }
    }

    /// Parameters `(t1, t2)` of a point of the support.
    pub fn param_of(&self, p: &Point<T>) -> Option<(T, T)> {
        let w = self.mobius.apply(self.chart.to_z(*p));
        match self.form {
            NormalForm::Parallel { e } => {
                let ep = e * Complex::new(T::zero(), T::one());
                Some((self.v.invert(ratio_vec(cdot(w, e)))?, self.u.invert(ratio_vec(cdot(w, ep)))?))
            }
            NormalForm::Polar { u_rays } => {
                let a = angle_vec(w.im.atan2(w.re));
                let r = ratio_vec(w.norm_sqr());
                if u_rays {
                    Some((self.v.invert(r)?, self.u.invert(a)?))
                } else {
                    Some((self.v.invert(a)?, self.u.invert(r)?))
                }
            }
        }
    }

    pub fn restrict(&self, u0: T, v0: T) -> Option<Self> {
        Some(SphericalPatch { u: self.u.restrict(T::zero(), v0)?, v: self.v.restrict(T::zero(), u0)?, ..*self })
    }
}

fn make_chart<T: Real>(q: &VertexQuad<T>, support: &OrientedSphere<T>) -> Result<Chart<T>, CyclideError> {
    match *support {
        OrientedSphere::Sphere { center, radius } => {
            let r = radius.abs();
            let mut m = Vec3::zero();
            for p in q.points() {
                m += (p - center).normalized().unwrap_or(Vec3::zero());
            }
            let small: T = lit(0.1);
            let u = if m.norm() > small { m.normalized().unwrap() } else { (q.x - center).normalized().unwrap() };
            let four: T = lit(4.0);
            let e1 = u.any_orthogonal();
            Ok(Chart { center: center - u * r, k: four * r * r, origin: center + u * r, e1, e2: u.cross(e1) })
        }
        OrientedSphere::Plane { normal, .. } => {
            let four: T = lit(4.0);
            let l = four * q.diameter();
            let e1 = normal.any_orthogonal();
            Ok(Chart { center: q.x + e1 * l, k: l * l, origin: q.x, e1, e2: normal.cross(e1) })
        }
        OrientedSphere::Point(_) => Err(CyclideError::AmbiguousSupport("support degenerates to a point".into())),
    }
}
