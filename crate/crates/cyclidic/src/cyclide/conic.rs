use crate::lie::{lie_inner, LieVector};
use crate::scalar::{lit, Real};

/// Quadratic parametrization of a conic of oriented spheres through three
/// given members, with `s(0) ~ s1`, `s(1/2) ~ s2`, `s(1) ~ s3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyConic<T> {
    pub s: [LieVector<T>; 3],
    pub a23: T,
    pub a13: T,
    pub a12: T,
}

impl<T: Real> FamilyConic<T> {
    pub fn new(s1: LieVector<T>, s2: LieVector<T>, s3: LieVector<T>) -> Self {
        FamilyConic { a23: lie_inner(&s2, &s3), a13: lie_inner(&s1, &s3), a12: lie_inner(&s1, &s2), s: [s1, s2, s3] }
    }

    /// Coefficient weights of `s1, s2, s3` at parameter `t`.
    pub fn weights(&self, t: T) -> [T; 3] {
        let two: T = lit(2.0);
        let three: T = lit(3.0);
        [
            self.a23 * (two * t * t - three * t + T::one()),
            self.a13 * (t - t * t),
            self.a12 * (two * t * t - t),
        ]
    }

    pub fn eval(&self, t: T) -> LieVector<T> {
        let w = self.weights(t);
        self.s[0] * w[0] + self.s[1] * w[1] + self.s[2] * w[2]
    }

    /// Leading coefficient, the member at `t = infinity`.
    pub fn eval_inf(&self) -> LieVector<T> {
        let two: T = lit(2.0);
        self.s[0] * (two * self.a23) - self.s[1] * self.a13 + self.s[2] * (two * self.a12)
    }

    /// The e_r-component of [`eval`](Self::eval).
    pub fn family_radius(&self, t: T) -> T {
        self.eval(t).r()
    }

    /// Coefficients `(a, b, c)` of `<v, s(t)> = a t^2 + b t + c`.
    pub fn pairing(&self, v: &LieVector<T>) -> (T, T, T) {
        let q0 = lie_inner(v, &self.s[0]) * self.a23;
        let q1 = lie_inner(v, &self.s[1]) * self.a13;
        let q2 = lie_inner(v, &self.s[2]) * self.a12;
        quad_coeffs(q0, q1, q2)
    }

    /// Coefficients of the e_r-component as a quadratic in `t`.
    pub fn radius_coeffs(&self) -> (T, T, T) {
        quad_coeffs(self.s[0].r() * self.a23, self.s[1].r() * self.a13, self.s[2].r() * self.a12)
    }

    /// Parameter of the member touching the point `p` (given by its lift),
    /// as the double root of `<p, s(t)>`.
    pub fn invert(&self, p: &LieVector<T>) -> Option<T> {
        let (a, b, c) = self.pairing(p);
        let two: T = lit(2.0);
        let t = if a.abs() >= c.abs() {
            if a == T::zero() {
                return None;
            }
            -b / (two * a)
        } else {
            if b == T::zero() {
                return None;
            }
            -two * c / b
        };
        t.is_finite().then_some(t)
    }

    /// Reparametrization restricted to `[t0, t1]`.
    pub fn restrict(&self, t0: T, t1: T) -> Self {
        let half: T = lit(0.5);
        Self::new(self.eval(t0), self.eval(half * (t0 + t1)), self.eval(t1))
    }
}

fn quad_coeffs<T: Real>(q0: T, q1: T, q2: T) -> (T, T, T) {
    let two: T = lit(2.0);
    let three: T = lit(3.0);
    (two * q0 - q1 + two * q2, -three * q0 + q1 - q2, q0)
}

/// Real roots of `a t^2 + b t + c` in `[lo, hi]`, sorted.
pub(crate) fn quadratic_roots_in<T: Real>(a: T, b: T, c: T, lo: T, hi: T) -> Vec<T> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    let mut roots = Vec::new();
    if scale == T::zero() {
        return roots;
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    let eps: T = lit(1e-14);
    if a.abs() <= eps {
        if b.abs() > eps {
            roots.push(-c / b);
        }
    } else {
        let four: T = lit(4.0);
        let two: T = lit(2.0);
        let disc = b * b - four * a * c;
        if disc >= -eps {
            let sq = disc.max(T::zero()).sqrt();
            let q = -(b + if b >= T::zero() { sq } else { -sq }) / two;
            if q != T::zero() {
                roots.push(q / a);
                roots.push(c / q);
            } else {
                roots.push(T::zero());
            }
            if disc.abs() <= eps {
                roots.truncate(1);
                roots[0] = -b / (two * a);
            }
        }
    }
    roots.retain(|t| *t >= lo && *t <= hi);
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}
