use super::{CircularNet, Idx, NetError};
use crate::cyclide::VertexFrame;
use crate::nets::validate_circular;
use crate::scalar::{lit, to_f64, Real, Tol};
use serde::{Deserialize, Serialize};

/// A circular net with an orthonormal frame at every vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclidicNet<T> {
    pub net: CircularNet<T>,
    pub frames: Vec<VertexFrame<T>>,
    pub seed: Idx,
}

impl<T: Real> CyclidicNet<T> {
    pub fn frame(&self, z: Idx) -> &VertexFrame<T> {
        &self.frames[self.net.index(z)]
    }

    pub fn m(&self) -> usize {
        self.net.m
    }
}

/// One lattice step along direction `dir` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub dir: usize,
    pub forward: bool,
}

/// Frame carried from `z` to the neighbor along `dir`: reflect in the
/// bisecting plane of the two vertices and flip the `dir` vector.
fn carry<T: Real>(b: &VertexFrame<T>, to: crate::vec3::Vec3<T>, dir: usize, tol: Tol<T>) -> Result<VertexFrame<T>, NetError> {
    Ok(b.reflect_to(to, tol)?.flip(dir))
}

/// Transports `b` (at `z`) along a lattice path.
pub fn transport<T: Real>(
    net: &CircularNet<T>,
    z: Idx,
    b: &VertexFrame<T>,
    path: &[Step],
    tol: Tol<T>,
) -> Result<(Idx, VertexFrame<T>), NetError> {
    let mut z = z;
    let mut f = *b;
    for s in path {
        let w = net
            .step(z, s.dir, s.forward)
            .ok_or_else(|| NetError::InvalidNet(format!("path leaves the net at {z:?}")))?;
        f = carry(&f, net.get(w), s.dir, tol)?;
        z = w;
    }
    Ok((z, f))
}

/// Extends the seed frame `b0` at `z0` to the whole net.
pub fn propagate_frames<T: Real>(
    net: &CircularNet<T>,
    z0: Idx,
    b0: &VertexFrame<T>,
    tol: Tol<T>,
) -> Result<CyclidicNet<T>, NetError> {
    if !net.contains(z0) {
        return Err(NetError::InvalidFrame(format!("seed {z0:?} outside the net")));
    }
    let g = b0.gram_residual();
    if !(g <= lit(1e-9)) {
        return Err(NetError::InvalidFrame(format!("seed frame not orthonormal (residual {:.3e})", to_f64(g))));
    }
    let report = validate_circular(net, tol);
    if let Some(q) = report.quads.iter().find(|q| q.residual > to_f64(tol.rel)) {
        return Err(NetError::InvalidNet(format!(
            "quad at {:?} in directions ({},{}) is not circular (residual {:.3e})",
            q.z, q.i, q.j, q.residual
        )));
    }
    if let Some(q) = report.quads.iter().find(|q| !q.embedded) {
        return Err(NetError::NonEmbeddedQuad { z: q.z, i: q.i, j: q.j });
    }

    let mut frames: Vec<Option<VertexFrame<T>>> = vec![None; net.vertices.len()];
    let mut seed = *b0;
    seed.x = net.get(z0);
    frames[net.index(z0)] = Some(seed);
    // Sweep the seed line along direction 1, then planes along 2, then 3.
    for dir in 1..=net.m {
        let known: Vec<Idx> = net.indices().into_iter().filter(|z| frames[net.index(*z)].is_some()).collect();
        for z in known {
            for forward in [true, false] {
                let mut cur = z;
                while let Some(w) = net.step(cur, dir, forward) {
                    if frames[net.index(w)].is_some() {
                        break;
                    }
                    let f = frames[net.index(cur)].unwrap();
                    frames[net.index(w)] = Some(carry(&f, net.get(w), dir, tol)?);
                    cur = w;
                }
            }
        }
    }
    Ok(CyclidicNet { net: net.clone(), frames: frames.into_iter().map(Option::unwrap).collect(), seed: z0 })
}

/// Largest deviation from the edge relation `B(z + e_i) = H F B(z)`.
pub fn frame_residual<T: Real>(c: &CyclidicNet<T>, tol: Tol<T>) -> Result<T, NetError> {
    let mut m = T::zero();
    for z in c.net.indices() {
        for dir in 1..=c.m() {
            if let Some(w) = c.net.step(z, dir, true) {
                let f = carry(c.frame(z), c.net.get(w), dir, tol)?;
                m = m.max(f.max_diff(c.frame(w)));
            }
        }
    }
    Ok(m)
}

/// Largest discrepancy of frame transport around elementary quads, from
/// every vertex frame of the net.
pub fn loop_closure<T: Real>(c: &CyclidicNet<T>, tol: Tol<T>) -> Result<T, NetError> {
    let mut m = T::zero();
    for (z, i, j) in c.net.quads() {
        let b = c.frame(z);
        let step = |d| Step { dir: d, forward: true };
        let back = |d| Step { dir: d, forward: false };
        let (_, a) = transport(&c.net, z, b, &[step(i), step(j)], tol)?;
        let (_, bb) = transport(&c.net, z, b, &[step(j), step(i)], tol)?;
        let (_, round) = transport(&c.net, z, b, &[step(i), step(j), back(i), back(j)], tol)?;
        m = m.max(a.max_diff(&bb)).max(round.max_diff(b));
    }
    Ok(m)
}
