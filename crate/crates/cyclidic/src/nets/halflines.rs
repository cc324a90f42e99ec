use super::patches::build_face;
use super::{shift, CyclidicNet, Idx, NetError};
use crate::cyclide::arc_midpoint;
use crate::lie::Point;
use crate::scalar::{lit, to_f64, Real, Tol};
use std::collections::{BTreeMap, BTreeSet};

/// The distinguished point on every edge `(z, dir)` from `z` to `z + e_dir`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLineTracker<T> {
    pub points: BTreeMap<(Idx, usize), Point<T>>,
    /// Largest disagreement seen when an edge was reached from two faces,
    /// relative to the net diameter.
    pub max_discrepancy: f64,
}

impl<T: Real> HalfLineTracker<T> {
    pub fn get(&self, z: Idx, dir: usize) -> Option<Point<T>> {
        self.points.get(&(z, dir)).copied()
    }
}

fn point_gap<T: Real>(a: &Point<T>, b: &Point<T>) -> T {
    match (a, b) {
        (Point::Infinity, Point::Infinity) => T::zero(),
        _ => a.dist(b),
    }
}

/// Seeds arc midpoints on the edges of the coordinate axes through the
/// seed vertex and carries them across the net face by face.
pub fn propagate_half_lines<T: Real>(c: &CyclidicNet<T>, tol: Tol<T>) -> Result<HalfLineTracker<T>, NetError> {
    let net = &c.net;
    let scale = net.diameter();
    let mut points = BTreeMap::new();
    let z0 = c.seed;
    for dir in 1..=c.m() {
        for z in net.indices() {
            let on_axis = (0..3).all(|k| k == dir - 1 || z[k] == z0[k]);
            if let (true, Some(w)) = (on_axis, net.step(z, dir, true)) {
                let y = arc_midpoint(net.get(z), net.get(w), c.frame(z).vec(dir), tol)?.y;
                points.insert((z, dir), y);
            }
        }
    }
    let mut tracker = HalfLineTracker { points, max_discrepancy: 0.0 };
    let mut pending: BTreeSet<(Idx, usize, usize)> = net.quads().into_iter().collect();
    let limit: T = lit(1e-8);
    while !pending.is_empty() {
        let ready: Vec<_> = pending
            .iter()
            .copied()
            .filter(|&(z, a, b)| {
                let za = shift(z, a, true).unwrap();
                let zb = shift(z, b, true).unwrap();
                (tracker.get(z, a).is_some() || tracker.get(zb, a).is_some())
                    && (tracker.get(z, b).is_some() || tracker.get(za, b).is_some())
            })
            .collect();
        if ready.is_empty() {
            return Err(NetError::InvalidNet("faces unreachable from the seed axes".into()));
        }
        for key in ready {
            pending.remove(&key);
            let (z, a, b) = key;
            let p = build_face(c, Some(&tracker), key, tol)?;
            let half: T = lit(0.5);
            let za = shift(z, a, true).unwrap();
            let zb = shift(z, b, true).unwrap();
            let edges = [
                ((z, a), p.eval(half, T::zero())),
                ((zb, a), p.eval(half, T::one())),
                ((z, b), p.eval(T::zero(), half)),
                ((za, b), p.eval(T::one(), half)),
            ];
            for (e, y) in edges {
                match tracker.points.get(&e) {
                    None => {
                        tracker.points.insert(e, y);
                    }
                    Some(old) => {
                        let gap = point_gap(old, &y) / scale;
                        tracker.max_discrepancy = tracker.max_discrepancy.max(to_f64(gap));
                        if !(gap <= limit) {
                            return Err(NetError::PropagationConflict { z: e.0, dir: e.1, residual: to_f64(gap) });
                        }
                    }
                }
            }
        }
    }
    Ok(tracker)
}

/// Largest gap, relative to the net diameter, between the ends of the
/// half-parameter lines of neighboring patches on their shared arcs.
pub fn half_line_continuity<T: Real>(c: &CyclidicNet<T>, h: &HalfLineTracker<T>, tol: Tol<T>) -> Result<T, NetError> {
    let set = super::patches_of_net(c, Some(h), tol);
    let scale = c.net.diameter();
    let half: T = lit(0.5);
    let mut m = T::zero();
    for (&(z, a, b), pa) in &set.patches {
        let pa = pa.as_ref().map_err(Clone::clone)?;
        for (dir, ua, ub) in [
            (a, (T::one(), half), (T::zero(), half)),
            (b, (half, T::one()), (half, T::zero())),
        ] {
            let Some(Ok(pb)) = set.patches.get(&(shift(z, dir, true).unwrap(), a, b)) else { continue };
            m = m.max(point_gap(&pa.eval(ua.0, ua.1), &pb.eval(ub.0, ub.1)) / scale);
        }
    }
    Ok(m)
}
