use super::{shift, Idx, NetError};
use crate::cyclide::VertexQuad;
use crate::lie::{concircular_residual, Point};
use crate::scalar::{to_f64, Real, Tol};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Vertices on the box `[0, n1) x [0, n2) (x [0, n3))`, stored with the
/// first index running fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircularNet<T> {
    pub m: usize,
    pub extents: [usize; 3],
    pub vertices: Vec<Vec3<T>>,
}

impl<T: Real> CircularNet<T> {
    pub fn new(m: usize, extents: [usize; 3], vertices: Vec<Vec3<T>>) -> Result<Self, NetError> {
        if !(m == 2 || m == 3) {
            return Err(NetError::InvalidNet(format!("dimension {m} not supported")));
        }
        let mut ext = extents;
        if m == 2 {
            ext[2] = 1;
        }
        if ext[..m].iter().any(|&n| n < 2) {
            return Err(NetError::InvalidNet("every extent must be at least 2".into()));
        }
        if vertices.len() != ext.iter().product::<usize>() {
            return Err(NetError::InvalidNet("vertex count does not match extents".into()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(NetError::InvalidNet("non-finite vertex".into()));
        }
        Ok(CircularNet { m, extents: ext, vertices })
    }

    /// Builds a net from a function of the grid index.
    pub fn from_fn(m: usize, extents: [usize; 3], f: impl Fn(Idx) -> Vec3<T>) -> Result<Self, NetError> {
        let mut ext = extents;
        if m == 2 {
            ext[2] = 1;
        }
        let mut v = Vec::with_capacity(ext.iter().product());
        for k in 0..ext[2] {
            for j in 0..ext[1] {
                for i in 0..ext[0] {
                    v.push(f([i, j, k]));
                }
            }
        }
        Self::new(m, ext, v)
    }

    pub fn contains(&self, z: Idx) -> bool {
        (0..3).all(|k| z[k] < self.extents[k])
    }

    pub fn index(&self, z: Idx) -> usize {
        z[0] + self.extents[0] * (z[1] + self.extents[1] * z[2])
    }

    pub fn get(&self, z: Idx) -> Vec3<T> {
        self.vertices[self.index(z)]
    }

    pub fn step(&self, z: Idx, dir: usize, forward: bool) -> Option<Idx> {
        shift(z, dir, forward).filter(|w| self.contains(*w))
    }

    /// All indices, first coordinate fastest.
    pub fn indices(&self) -> Vec<Idx> {
        let mut out = Vec::with_capacity(self.vertices.len());
        for k in 0..self.extents[2] {
            for j in 0..self.extents[1] {
                for i in 0..self.extents[0] {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    /// Elementary quads `(z, i, j)` with `i < j`.
    pub fn quads(&self) -> Vec<(Idx, usize, usize)> {
        let mut out = Vec::new();
        for z in self.indices() {
            for i in 1..=self.m {
                for j in i + 1..=self.m {
                    let zij = shift(shift(z, i, true).unwrap(), j, true).unwrap();
                    if self.contains(zij) {
                        out.push((z, i, j));
                    }
                }
            }
        }
        out
    }

    pub fn quad(&self, z: Idx, i: usize, j: usize) -> VertexQuad<T> {
        let zi = shift(z, i, true).unwrap();
        let zj = shift(z, j, true).unwrap();
        let zij = shift(zi, j, true).unwrap();
        VertexQuad::new(self.get(z), self.get(zi), self.get(zij), self.get(zj))
    }

    pub fn diameter(&self) -> T {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo = Vec3::new(lo.x.min(v.x), lo.y.min(v.y), lo.z.min(v.z));
            hi = Vec3::new(hi.x.max(v.x), hi.y.max(v.y), hi.z.max(v.z));
        }
        lo.dist(hi)
    }

    pub fn map(&self, f: impl Fn(Idx, Vec3<T>) -> Vec3<T>) -> Self {
        let vertices = self.indices().into_iter().map(|z| f(z, self.get(z))).collect();
        CircularNet { m: self.m, extents: self.extents, vertices }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadCheck {
    pub z: Idx,
    pub i: usize,
    pub j: usize,
    pub residual: f64,
    pub embedded: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircularReport {
    pub quads: Vec<QuadCheck>,
    pub max_residual: f64,
    pub valid: bool,
}

pub fn validate_circular<T: Real>(net: &CircularNet<T>, tol: Tol<T>) -> CircularReport {
    let mut quads = Vec::new();
    for (z, i, j) in net.quads() {
        let q = net.quad(z, i, j);
        let (residual, embedded) = match q.validate(Tol { switch: T::infinity(), ..tol }) {
            Ok(()) => (
                concircular_residual(q.points().map(Point::Finite), tol).map(to_f64).unwrap_or(f64::INFINITY),
                q.is_embedded(tol).unwrap_or(false),
            ),
            Err(_) => (f64::INFINITY, false),
        };
        let pass = residual <= to_f64(tol.rel) && embedded;
        quads.push(QuadCheck { z, i, j, residual, embedded, pass });
    }
    let max_residual = quads.iter().map(|q| q.residual).fold(0.0, f64::max);
    let valid = quads.iter().all(|q| q.pass);
    CircularReport { quads, max_residual, valid }
}
