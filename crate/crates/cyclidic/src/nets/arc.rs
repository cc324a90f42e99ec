use crate::lie::{circle_through, Circle3D, Point};
use crate::scalar::{lit, Real, Tol};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Circular arc, straight segment, or the complement of a segment on its
/// line (an arc through infinity).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Arc<T> {
    /// Runs counterclockwise about `normal` from `start` through angle `sweep`.
    Circle { center: Vec3<T>, radius: T, normal: Vec3<T>, start: Vec3<T>, end: Vec3<T>, sweep: T },
    Segment { start: Vec3<T>, end: Vec3<T> },
    Complement { start: Vec3<T>, end: Vec3<T> },
}

impl<T: Real> Arc<T> {
    /// The arc from `a` through `m` to `b`.
    pub fn through(a: Vec3<T>, m: Vec3<T>, b: Vec3<T>, tol: Tol<T>) -> Option<Self> {
        match circle_through(Point::Finite(a), Point::Finite(m), Point::Finite(b), tol).ok()? {
            Circle3D::Circle { center, radius, normal } => {
                let mut normal = normal;
                let mut sweep = ccw_angle(center, normal, a, b);
                if ccw_angle(center, normal, a, m) > sweep {
                    normal = -normal;
                    sweep = ccw_angle(center, normal, a, b);
                }
                Some(Arc::Circle { center, radius, normal, start: a, end: b, sweep })
            }
            Circle3D::Line { .. } => {
                let d = b - a;
                let s = (m - a).dot(d) / d.norm2();
                if s > T::zero() && s < T::one() {
                    Some(Arc::Segment { start: a, end: b })
                } else {
                    Some(Arc::Complement { start: a, end: b })
                }
            }
        }
    }

    pub fn endpoints(&self) -> (Vec3<T>, Vec3<T>) {
        match *self {
            Arc::Circle { start, end, .. } | Arc::Segment { start, end } | Arc::Complement { start, end } => (start, end),
        }
    }

    /// Point at fraction `s` of the sweep (segment length for lines).
    pub fn at(&self, s: T) -> Point<T> {
        match *self {
            Arc::Circle { center, normal, start, sweep, .. } => {
                let r = start - center;
                let (sn, cs) = (s * sweep).sin_cos();
                Point::Finite(center + r * cs + normal.cross(r) * sn)
            }
            Arc::Segment { start, end } => Point::Finite(start + (end - start) * s),
            Arc::Complement { start, end } => {
                if s == lit(0.5) {
                    return Point::Infinity;
                }
                let d = end - start;
                let lam = if s <= lit(0.5) { -s / (lit::<T>(0.5) - s) } else { T::one() + (T::one() - s) / (s - lit(0.5)) };
                Point::Finite(start + d * lam)
            }
        }
    }

    /// Euclidean distance from `p` to the arc.
    pub fn distance(&self, p: Vec3<T>) -> T {
        match *self {
            Arc::Circle { center, radius, normal, start, end, sweep } => {
                let q = p - center;
                let h = q.dot(normal);
                let inplane = q - normal * h;
                let ang = ccw_angle(center, normal, start, p);
                if inplane.norm() > T::zero() && ang <= sweep {
                    (h * h + (inplane.norm() - radius).powi(2)).sqrt()
                } else {
                    p.dist(start).min(p.dist(end))
                }
            }
            Arc::Segment { start, end } => {
                let d = end - start;
                let s = ((p - start).dot(d) / d.norm2()).max(T::zero()).min(T::one());
                p.dist(start + d * s)
            }
            Arc::Complement { start, end } => {
                let d = end - start;
                let s = (p - start).dot(d) / d.norm2();
                let foot = if s > T::zero() && s < T::one() {
                    if s < lit(0.5) {
                        start
                    } else {
                        end
                    }
                } else {
                    start + d * s
                };
                p.dist(foot)
            }
        }
    }

    /// Two-sided Hausdorff distance estimated from `n` samples per arc.
    pub fn hausdorff(&self, o: &Arc<T>, n: usize) -> T {
        let one_sided = |a: &Arc<T>, b: &Arc<T>| {
            let mut m = T::zero();
            for k in 0..n {
                let s: T = lit((k as f64 + 0.5) / n as f64);
                if let Point::Finite(p) = a.at(s) {
                    m = m.max(b.distance(p));
                }
            }
            for p in [a.endpoints().0, a.endpoints().1] {
                m = m.max(b.distance(p));
            }
            m
        };
        one_sided(self, o).max(one_sided(o, self))
    }
}

fn ccw_angle<T: Real>(c: Vec3<T>, n: Vec3<T>, a: Vec3<T>, p: Vec3<T>) -> T {
    let u = a - c;
    let v = n.cross(u);
    let q = p - c;
    let ang = q.dot(v).atan2(q.dot(u));
    if ang < T::zero() {
        ang + T::PI() + T::PI()
    } else {
        ang
    }
}
