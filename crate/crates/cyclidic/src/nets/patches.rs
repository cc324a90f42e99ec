use super::{shift, CyclidicNet, HalfLineTracker, Idx, NetError};
use crate::cyclide::{patch_with_midpoints, CyclidicPatch, Midpoint, VertexFrame};
use crate::scalar::{Real, Tol};
use std::collections::BTreeMap;

/// Face `(z, a, b)` with `a < b`, based at `z`.
pub type PatchKey = (Idx, usize, usize);

#[derive(Clone, Debug)]
pub struct PatchSet<T> {
    pub patches: BTreeMap<PatchKey, Result<CyclidicPatch<T>, NetError>>,
}

impl<T: Real> PatchSet<T> {
    pub fn get(&self, key: &PatchKey) -> Option<&CyclidicPatch<T>> {
        self.patches.get(key).and_then(|r| r.as_ref().ok())
    }

    pub fn failures(&self) -> Vec<(PatchKey, NetError)> {
        self.patches
            .iter()
            .filter_map(|(k, r)| r.as_ref().err().map(|e| (*k, e.clone())))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }
}

/// Frame used for the face `(z, a, b)`: the tangents along `a` and `b`,
/// then the remaining frame vector as normal.
pub(crate) fn face_frame<T: Real>(c: &CyclidicNet<T>, z: Idx, a: usize, b: usize) -> VertexFrame<T> {
    let f = c.frame(z);
    let k = 6 - a - b;
    VertexFrame::new(f.x, f.vec(a), f.vec(b), f.vec(k))
}

pub(crate) fn face_midpoints<T: Real>(
    h: Option<&HalfLineTracker<T>>,
    z: Idx,
    a: usize,
    b: usize,
) -> (Midpoint<T>, Midpoint<T>) {
    let Some(h) = h else { return (Midpoint::Default, Midpoint::Default) };
    let pick = |d: usize, other: usize| {
        if let Some(p) = h.get(z, d) {
            Midpoint::Near(p)
        } else if let Some(p) = h.get(shift(z, other, true).unwrap(), d) {
            Midpoint::Far(p)
        } else {
            Midpoint::Default
        }
    };
    (pick(a, b), pick(b, a))
}

pub(crate) fn build_face<T: Real>(
    c: &CyclidicNet<T>,
    h: Option<&HalfLineTracker<T>>,
    key: PatchKey,
    tol: Tol<T>,
) -> Result<CyclidicPatch<T>, NetError> {
    let (z, a, b) = key;
    let q = c.net.quad(z, a, b);
    let f = face_frame(c, z, a, b);
    let (m1, m2) = face_midpoints(h, z, a, b);
    patch_with_midpoints(&q, &f, m1, m2, tol).map_err(|err| NetError::Patch { z, err })
}

/// One patch per elementary quad. With a tracker, the half-lines of the
/// tracker fix the middle curvature lines.
pub fn patches_of_net<T: Real>(c: &CyclidicNet<T>, halflines: Option<&HalfLineTracker<T>>, tol: Tol<T>) -> PatchSet<T> {
    let patches = c.net.quads().into_iter().map(|key| (key, build_face(c, halflines, key, tol))).collect();
    PatchSet { patches }
}
