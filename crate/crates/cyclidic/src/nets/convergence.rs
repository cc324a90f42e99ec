use super::generators::{spherical_point, torus_frame, torus_point};
use super::{patches_of_net, propagate_frames, CircularNet, NetError};
use crate::cyclide::VertexFrame;
use crate::scalar::{lit, to_f64, Real, Tol};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Smooth curvature-line parametrizations whose grid samples are exactly
/// circular nets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothSystem {
    /// Torus with radii 2 and 1.
    Torus,
    /// Unit sphere in longitude and latitude.
    Sphere,
    /// Prolate spheroid with semi-axes 1 and 1.6; not a cyclide.
    Spheroid,
}

impl SmoothSystem {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "torus" => Some(SmoothSystem::Torus),
            "sphere" => Some(SmoothSystem::Sphere),
            "spheroid" => Some(SmoothSystem::Spheroid),
            _ => None,
        }
    }

    /// Parameter rectangle origin and side length.
    fn domain(&self) -> (f64, f64, f64) {
        match self {
            SmoothSystem::Torus => (0.1, 0.2, 0.8),
            SmoothSystem::Sphere | SmoothSystem::Spheroid => (0.1, -0.4, 0.8),
        }
    }

    pub fn point<T: Real>(&self, u: T, v: T) -> Vec3<T> {
        match self {
            SmoothSystem::Torus => torus_point(lit(2.0), T::one(), u, v),
            SmoothSystem::Sphere => spherical_point(T::one(), v, u),
            SmoothSystem::Spheroid => {
                let p = spherical_point(T::one(), v, u);
                Vec3::new(p.x, p.y, p.z * lit(1.6))
            }
        }
    }

    pub fn frame<T: Real>(&self, u: T, v: T) -> VertexFrame<T> {
        match self {
            SmoothSystem::Torus => torus_frame(lit(2.0), T::one(), u, v),
            SmoothSystem::Sphere | SmoothSystem::Spheroid => {
                let c: T = if *self == SmoothSystem::Sphere { T::one() } else { lit(1.6) };
                let (su, cu) = u.sin_cos();
                let (sv, cv) = v.sin_cos();
                let t1 = Vec3::new(-su, cu, T::zero());
                let t2 = Vec3::new(-sv * cu, -sv * su, c * cv).normalized().unwrap();
                VertexFrame::from_tangents(self.point(u, v), t1, t2)
            }
        }
    }

    /// Distance from the surface (first order for the spheroid).
    pub fn distance<T: Real>(&self, p: Vec3<T>) -> T {
        match self {
            SmoothSystem::Torus => {
                let rho = p.x.hypot(p.y);
                ((rho - lit(2.0)).hypot(p.z) - T::one()).abs()
            }
            SmoothSystem::Sphere => (p.norm() - T::one()).abs(),
            SmoothSystem::Spheroid => {
                let c2: T = lit(1.6 * 1.6);
                let f = p.x * p.x + p.y * p.y + p.z * p.z / c2 - T::one();
                let g = (p.x * p.x + p.y * p.y + p.z * p.z / (c2 * c2)).sqrt() * lit(2.0);
                f.abs() / g
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub eps: f64,
    /// Largest distance of a patch sample from the smooth surface.
    pub surface_error: f64,
    /// Largest distance of a patch sample from the smooth point with the
    /// same parameters.
    pub param_error: f64,
    /// Largest componentwise deviation of the net frames from the smooth
    /// frames at the vertices.
    pub frame_error: f64,
    /// Deviation at the seeded corner.
    pub seed_frame_error: f64,
}

/// Samples `system` on grids of step `eps` over a fixed parameter square,
/// seeds the frame at the corner from the smooth frame and compares the
/// resulting cyclidic net with the smooth surface.
pub fn convergence_experiment<T: Real>(
    system: SmoothSystem,
    eps: &[T],
    samples: usize,
    tol: Tol<T>,
) -> Result<Vec<ConvergenceRow>, NetError> {
    let (u0, v0, side) = system.domain();
    let (u0, v0): (T, T) = (lit(u0), lit(v0));
    let mut rows = Vec::new();
    for &e in eps {
        let n = (to_f64(lit::<T>(side) / e)).round() as usize + 1;
        let at = |i: usize| e * lit(i as f64);
        let net = CircularNet::from_fn(2, [n, n, 1], |z| system.point(u0 + at(z[0]), v0 + at(z[1])))?;
        let c = propagate_frames(&net, [0, 0, 0], &system.frame(u0, v0), tol)?;
        let mut frame_error = T::zero();
        for z in net.indices() {
            frame_error = frame_error.max(c.frame(z).max_diff(&system.frame(u0 + at(z[0]), v0 + at(z[1]))));
        }
        let seed_frame_error = c.frame([0, 0, 0]).max_diff(&system.frame(u0, v0));
        let set = patches_of_net(&c, None, tol);
        let (mut surf, mut par) = (T::zero(), T::zero());
        for (&(z, _, _), p) in &set.patches {
            let p = p.as_ref().map_err(Clone::clone)?;
            for a in 0..samples {
                for b in 0..samples {
                    let s: T = lit(a as f64 / (samples - 1) as f64);
                    let t: T = lit(b as f64 / (samples - 1) as f64);
                    let q = p.eval(s, t).finite().ok_or(NetError::InvalidNet("patch through infinity".into()))?;
                    surf = surf.max(system.distance(q));
                    let smooth = system.point(u0 + e * (lit::<T>(z[0] as f64) + s), v0 + e * (lit::<T>(z[1] as f64) + t));
                    par = par.max(q.dist(smooth));
                }
            }
        }
        rows.push(ConvergenceRow {
            eps: to_f64(e),
            surface_error: to_f64(surf),
            param_error: to_f64(par),
            frame_error: to_f64(frame_error),
            seed_frame_error: to_f64(seed_frame_error),
        });
    }
    Ok(rows)
}
