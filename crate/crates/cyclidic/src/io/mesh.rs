use super::IoError;
use crate::{Patch, Point, Vector3};
use serde::{Deserialize, Serialize};

/// Sampled patch: `(res + 1)^2` vertices in row-major order (index
/// `j (res + 1) + i` at `(t1, t2) = (i / res, j / res)`) and `res^2` quads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadMesh {
    pub group: String,
    pub positions: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
    pub params: Vec<[f64; 2]>,
    pub quads: Vec<[usize; 4]>,
    /// Singular parameters of the patch as `(family, t)`; non-empty means
    /// the mesh passes through a singular point.
    #[serde(default)]
    pub singular: Vec<(usize, f64)>,
}

impl QuadMesh {
    pub fn res(&self) -> usize {
        (self.positions.len() as f64).sqrt() as usize - 1
    }

    pub fn corners(&self) -> [[f64; 3]; 4] {
        let r = self.res();
        let w = r + 1;
        [self.positions[0], self.positions[r], self.positions[w * r + r], self.positions[w * r]]
    }
}

fn normal_near(p: &Patch, t1: f64, t2: f64) -> Option<Vector3> {
    if let Some(n) = p.normal(t1, t2).and_then(|n| n.normalized()) {
        return Some(n);
    }
    // singular points of the parametrization: step towards the centre
    let h = 1e-7;
    let (a, b) = (t1 + h * (0.5 - t1).signum(), t2 + h * (0.5 - t2).signum());
    p.normal(a, b).and_then(|n| n.normalized())
}

pub fn sample_patch(p: &Patch, res: usize, group: &str) -> Result<QuadMesh, IoError> {
    if res < 2 {
        return Err(IoError::BadResolution(res));
    }
    let w = res + 1;
    let mut mesh = QuadMesh {
        group: group.to_string(),
        positions: Vec::with_capacity(w * w),
        normals: Vec::with_capacity(w * w),
        params: Vec::with_capacity(w * w),
        quads: Vec::with_capacity(res * res),
        singular: p.singular_parameters(),
    };
    for j in 0..w {
        for i in 0..w {
            let (t1, t2) = (i as f64 / res as f64, j as f64 / res as f64);
            let x = match p.eval_exact_corners(t1, t2) {
                Point::Finite(x) => x,
                Point::Infinity => return Err(IoError::InfinitySample { t1, t2 }),
            };
            let n = normal_near(p, t1, t2).ok_or(IoError::DegenerateNormal { t1, t2 })?;
            mesh.positions.push(x.to_array());
            mesh.normals.push(n.to_array());
            mesh.params.push([t1, t2]);
        }
    }
    for j in 0..res {
        for i in 0..res {
            let a = j * w + i;
            mesh.quads.push([a, a + 1, a + w + 1, a + w]);
        }
    }
    Ok(mesh)
}
