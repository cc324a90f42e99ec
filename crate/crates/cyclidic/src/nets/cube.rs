use super::c1::edge_arc;
use super::miquel::miquel_eighth_point;
use super::{CyclidicNet, Idx, NetError};
use crate::cyclide::{patch_from_data, CyclidicPatch, Edge, VertexFrame, VertexQuad};
use crate::lie::Point;
use crate::scalar::{lit, to_f64, Real, Tol};
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Corner `bits` of an elementary hexahedron: bit `d - 1` set means one
/// step along direction `d`.
pub(crate) fn bit(d: usize) -> usize {
    1 << (d - 1)
}

/// The two directions other than `k`, ascending.
pub(crate) fn others(k: usize) -> (usize, usize) {
    match k {
        1 => (2, 3),
        2 => (1, 3),
        _ => (1, 2),
    }
}

/// An elementary hexahedron of a three-dimensional cyclidic net with its
/// six face patches. `faces[k - 1][0]` is the face through the base vertex
/// with normal direction `k`; `faces[k - 1][1]` is the opposite face.
#[derive(Clone, Debug)]
pub struct CyclidicCube<T> {
    pub base: Idx,
    pub vertices: [Vec3<T>; 8],
    pub frames: [VertexFrame<T>; 8],
    pub faces: [[CyclidicPatch<T>; 2]; 3],
    pub tol: Tol<T>,
    singular: OnceLock<Option<String>>,
}

impl<T: Real> CyclidicCube<T> {
    pub fn from_net(c: &CyclidicNet<T>, base: Idx, tol: Tol<T>) -> Result<Self, NetError> {
        if c.m() != 3 {
            return Err(NetError::InvalidNet("cubes need a three-dimensional net".into()));
        }
        let idx = |b: usize| [base[0] + (b & 1), base[1] + ((b >> 1) & 1), base[2] + ((b >> 2) & 1)];
        if !c.net.contains(idx(7)) {
            return Err(NetError::InvalidNet(format!("no hexahedron at {base:?}")));
        }
        let vertices: [Vec3<T>; 8] = core::array::from_fn(|b| c.net.get(idx(b)));
        let frames: [VertexFrame<T>; 8] = core::array::from_fn(|b| *c.frame(idx(b)));
        let face = |k: usize, side: usize| -> Result<CyclidicPatch<T>, NetError> {
            let (a, b) = others(k);
            let o = side * bit(k);
            let q = VertexQuad::new(vertices[o], vertices[o | bit(a)], vertices[o | bit(a) | bit(b)], vertices[o | bit(b)]);
            let f = frames[o];
            let fr = VertexFrame::new(f.x, f.vec(a), f.vec(b), f.vec(k));
            patch_from_data(&q, &fr, tol).map_err(|err| NetError::Patch { z: idx(o), err })
        };
        let faces = [[face(1, 0)?, face(1, 1)?], [face(2, 0)?, face(2, 1)?], [face(3, 0)?, face(3, 1)?]];
        Ok(CyclidicCube { base, vertices, frames, faces, tol, singular: OnceLock::new() })
    }

    pub fn face(&self, k: usize, side: usize) -> &CyclidicPatch<T> {
        &self.faces[k - 1][side]
    }

    /// Replaces a face and forgets the cached singularity test.
    pub fn set_face(&mut self, k: usize, side: usize, p: CyclidicPatch<T>) {
        self.faces[k - 1][side] = p;
        self.singular = OnceLock::new();
    }

    /// Cached result of [`cube_is_singular`].
    pub fn singularity(&self) -> Option<&str> {
        self.singular.get_or_init(|| cube_is_singular(self)).as_deref()
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for a in &self.vertices {
            for b in &self.vertices {
                d = d.max(a.dist(*b));
            }
        }
        d
    }
}

/// Edge of face `k` running along direction `d` at offset `off` in the
/// remaining in-face direction.
fn face_edge(k: usize, d: usize, off: usize) -> Edge {
    let (a, _) = others(k);
    match (d == a, off) {
        (true, 0) => Edge::Bottom,
        (true, _) => Edge::Top,
        (false, 0) => Edge::Left,
        (false, _) => Edge::Right,
    }
}

fn third(a: usize, b: usize) -> usize {
    6 - a - b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcCheck {
    /// Direction of the edge and bit mask of its starting vertex.
    pub dir: usize,
    pub corner: usize,
    pub hausdorff: f64,
    /// Largest deviation of the face normals from a right angle, radians.
    pub angle: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeReport {
    pub arcs: Vec<ArcCheck>,
    /// Largest `|cos|` between face normals at the eight vertices.
    pub vertex_deviation: f64,
    pub pass: bool,
}

const ARC_SAMPLES: usize = 10;

fn right_angle_dev<T: Real>(a: Vec3<T>, b: Vec3<T>) -> T {
    (a.angle(b) - T::FRAC_PI_2()).abs()
}

/// Checks that adjacent faces share their boundary arcs and meet at right
/// angles along them.
pub fn check_cube_orthogonality<T: Real>(cube: &CyclidicCube<T>) -> CubeReport {
    let diam = cube.diameter();
    let mut arcs = Vec::new();
    for d in 1..=3 {
        let (p, q) = others(d);
        for corner in [0, bit(p), bit(q), bit(p) | bit(q)] {
            // the faces with normals p and q through this edge
            let fa = cube.face(p, (corner >> (p - 1)) & 1);
            let ea = face_edge(p, d, (corner >> (q - 1)) & 1);
            let fb = cube.face(q, (corner >> (q - 1)) & 1);
            let eb = face_edge(q, d, (corner >> (p - 1)) & 1);
            let hausdorff = match (edge_arc(fa, ea), edge_arc(fb, eb)) {
                (Some(x), Some(y)) => to_f64(x.hausdorff(&y, ARC_SAMPLES) / diam),
                _ => f64::INFINITY,
            };
            let angle = to_f64(super::c1::normal_mismatch(fa, ea, fb, eb, right_angle_dev));
            let pass = hausdorff <= 1e-8 && angle <= 1e-5;
            arcs.push(ArcCheck { dir: d, corner, hausdorff, angle, pass });
        }
    }
    let mut vertex_deviation = 0.0f64;
    for v in 0..8usize {
        let normals: Vec<Option<Vec3<T>>> = (1..=3)
            .map(|k| {
                let f = cube.face(k, (v >> (k - 1)) & 1);
                let (a, b) = others(k);
                let u: T = lit(((v >> (a - 1)) & 1) as f64);
                let w: T = lit(((v >> (b - 1)) & 1) as f64);
                f.normal(u, w)
            })
            .collect();
        for i in 0..3 {
            for j in i + 1..3 {
                let dev = match (normals[i], normals[j]) {
                    (Some(x), Some(y)) => to_f64(x.dot(y).abs()),
                    _ => f64::INFINITY,
                };
                vertex_deviation = vertex_deviation.max(dev);
            }
        }
    }
    let pass = arcs.iter().all(|a| a.pass) && vertex_deviation <= 1e-5;
    CubeReport { arcs, vertex_deviation, pass }
}

fn samples<T: Real>(p: &CyclidicPatch<T>, n: usize) -> Option<Vec<Vec3<T>>> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let u: T = lit(i as f64 / (n - 1) as f64);
            let v: T = lit(j as f64 / (n - 1) as f64);
            out.push(p.eval_exact_corners(u, v).finite()?);
        }
    }
    Some(out)
}

/// Sampling test for singular cubes: opposite faces must stay apart and
/// adjacent faces may only come close along their shared arc. Returns a
/// description of the first violation.
pub fn cube_is_singular<T: Real>(cube: &CyclidicCube<T>) -> Option<String> {
    const N: usize = 20;
    let diam = cube.diameter();
    let h = diam / lit(N as f64);
    let mut pts: Vec<Vec<Vec<Vec3<T>>>> = Vec::new();
    for k in 1..=3 {
        let mut sides = Vec::new();
        for side in 0..2 {
            let f = cube.face(k, side);
            if !f.singular_parameters().is_empty() {
                return Some(format!("face {k}/{side} passes through a singular point"));
            }
            match samples(f, N) {
                Some(s) => sides.push(s),
                None => return Some(format!("face {k}/{side} passes through infinity")),
            }
        }
        pts.push(sides);
    }
    let min_dist = |a: &[Vec3<T>], b: &[Vec3<T>]| {
        a.iter().flat_map(|p| b.iter().map(move |q| p.dist(*q))).fold(T::infinity(), T::min)
    };
    for k in 0..3 {
        if min_dist(&pts[k][0], &pts[k][1]) <= lit::<T>(1e-3) * diam {
            return Some(format!("opposite faces with normal {} meet", k + 1));
        }
    }
    let close: T = h * lit(0.25);
    for p in 1..=3 {
        for q in p + 1..=3 {
            let d = third(p, q);
            for sp in 0..2 {
                for sq in 0..2 {
                    let corner = sp * bit(p) | sq * bit(q);
                    let arc = edge_arc(cube.face(p, sp), face_edge(p, d, sq));
                    let Some(arc) = arc else { return Some("degenerate shared arc".into()) };
                    for a in &pts[p - 1][sp] {
                        for b in &pts[q - 1][sq] {
                            if a.dist(*b) < close && arc.distance(*a) > h * lit(2.0) {
                                return Some(format!("faces {p}/{sp} and {q}/{sq} meet away from the arc at corner {corner}"));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Result of [`patch_in_between`].
#[derive(Clone, Debug)]
pub struct InBetween<T> {
    pub patch: CyclidicPatch<T>,
    /// `x~_i, x~_ij, x~_ik, x~_ijk`.
    pub vertices: [Vec3<T>; 4],
    /// The far vertex reached through the faces normal to `j` and to `k`.
    pub route_j: Vec3<T>,
    pub route_k: Vec3<T>,
    /// Largest discrepancy among the two routes and the Miquel point,
    /// relative to the cube diameter.
    pub closure: T,
    /// Largest deviation from a right angle between the new patch and the
    /// side faces along its boundary, radians.
    pub orthogonality: T,
}

/// Domain point of face `k` with parameter `s` along direction `d` and
/// `r` along the other in-face direction.
fn face_uv<T: Real>(k: usize, d: usize, s: T, r: T) -> (T, T) {
    if others(k).0 == d {
        (s, r)
    } else {
        (r, s)
    }
}

/// Parameter along direction `d` of a point on the edge of face `k` that
/// starts at the face's base vertex.
fn param_on_base_edge<T: Real>(f: &CyclidicPatch<T>, k: usize, d: usize, p: Vec3<T>) -> Option<T> {
    let s = f.edge_param(face_edge(k, d, 0), &Point::Finite(p))?;
    Some(s.max(T::zero()).min(T::one()))
}

/// The cyclidic patch through the point at parameter `s` of the edge from
/// the base vertex along direction `i`, bounded by the four side faces.
pub fn patch_in_between<T: Real>(cube: &CyclidicCube<T>, i: usize, s: T) -> Result<InBetween<T>, NetError> {
    if !(1..=3).contains(&i) || !(s >= T::zero() && s <= T::one()) {
        return Err(NetError::InvalidNet("direction or parameter out of range".into()));
    }
    if let Some(why) = cube.singularity() {
        return Err(NetError::SingularCube(why.to_string()));
    }
    let tol = cube.tol;
    let j = i % 3 + 1;
    let k = j % 3 + 1;
    let v = &cube.vertices;
    let diam = cube.diameter();
    let fail = || NetError::SingularCube("curvature line leaves the face".into());
    let at = |f: &CyclidicPatch<T>, uv: (T, T)| f.eval_exact_corners(uv.0, uv.1).finite().ok_or_else(fail);

    let fk = cube.face(k, 0);
    let fj = cube.face(j, 0);
    let xi = at(fk, face_uv(k, i, s, T::zero()))?;
    let xij = at(fk, face_uv(k, i, s, T::one()))?;
    let sj = param_on_base_edge(fj, j, i, xi).ok_or_else(fail)?;
    let xik = at(fj, face_uv(j, i, sj, T::one()))?;

    let fjj = cube.face(j, 1);
    let s_jj = param_on_base_edge(fjj, j, i, xij).ok_or_else(fail)?;
    let route_j = at(fjj, face_uv(j, i, s_jj, T::one()))?;
    let fkk = cube.face(k, 1);
    let s_kk = param_on_base_edge(fkk, k, i, xik).ok_or_else(fail)?;
    let route_k = at(fkk, face_uv(k, i, s_kk, T::one()))?;

    let (bi, bj, bk) = (bit(i), bit(j), bit(k));
    let eps: T = lit(1e-9);
    let mut closure = route_j.dist(route_k) / diam;
    let xijk = if s > eps && s < T::one() - eps {
        let m = miquel_eighth_point(v[bi], xi, v[bi | bj], v[bi | bk], xij, xik, v[bi | bj | bk], tol)?;
        closure = closure.max(m.dist(route_j) / diam).max(m.dist(route_k) / diam);
        m
    } else {
        route_j
    };
    if closure > tol.closure {
        return Err(NetError::ClosureViolation { residual: to_f64(closure) });
    }

    // frame at x~_i from the normals of the two side faces through it
    let h: T = lit(1e-5);
    // step of face kf across its base edge along d, at parameter sd
    let toward = |f: &CyclidicPatch<T>, kf: usize, d: usize, sd: T| -> Result<Vec3<T>, NetError> {
        Ok(at(f, face_uv(kf, d, sd, h))? - at(f, face_uv(kf, d, sd, T::zero()))?)
    };
    let nk = fk.normal(face_uv(k, i, s, T::zero()).0, face_uv(k, i, s, T::zero()).1).ok_or_else(fail)?;
    let nj = fj.normal(face_uv(j, i, sj, T::zero()).0, face_uv(j, i, sj, T::zero()).1).ok_or_else(fail)?;
    // t_j is normal to face j and points along the j-lines of face k
    let dj = toward(fk, k, i, s)?;
    let tj = if nj.dot(dj) >= T::zero() { nj } else { -nj };
    let dk = toward(fj, j, i, sj)?;
    let tk0 = if nk.dot(dk) >= T::zero() { nk } else { -nk };
    let tk = (tk0 - tj * tk0.dot(tj)).normalized().ok_or_else(fail)?;
    let ti0 = tj.cross(tk);
    let (s_lo, s_hi) = if s + h <= T::one() { (s, s + h) } else { (s - h, s) };
    let di = at(fk, face_uv(k, i, s_hi, T::zero()))? - at(fk, face_uv(k, i, s_lo, T::zero()))?;
    let ti = if ti0.dot(di) >= T::zero() { ti0 } else { -ti0 };

    let (a, b) = others(i);
    let (xa, xb, ta, tb) = if a == j { (xij, xik, tj, tk) } else { (xik, xij, tk, tj) };
    let q = VertexQuad::new(xi, xa, xijk, xb);
    let frame = VertexFrame::new(xi, ta, tb, ti);
    let patch = patch_from_data(&q, &frame, tol).map_err(|err| NetError::Patch { z: cube.base, err })?;

    // orthogonality against the side faces: edges along a lie in the faces
    // normal to b and vice versa
    let mut orthogonality = T::zero();
    for (edge, side_k, side) in [(Edge::Bottom, b, 0), (Edge::Top, b, 1), (Edge::Left, a, 0), (Edge::Right, a, 1)] {
        let f = cube.face(side_k, side);
        for n in 0..ARC_SAMPLES {
            let t: T = lit((n as f64 + 0.5) / ARC_SAMPLES as f64);
            let (u, w) = edge.at(t);
            let p = patch.eval(u, w);
            let np = patch.normal(u, w).ok_or_else(fail)?;
            let (fu, fw) = f.param_of(&p).ok_or_else(fail)?;
            let nf = f.normal(fu, fw).ok_or_else(fail)?;
            orthogonality = orthogonality.max(right_angle_dev(np, nf));
        }
    }
    Ok(InBetween { patch, vertices: [xi, xij, xik, xijk], route_j, route_k, closure, orthogonality })
}
