//! Operations shared by the command line and the HTTP service.

use cyclidic::io::{build_scene, frame_rows, sample_patch, QuadMesh, SceneDocument};
use cyclidic::nets::{patch_in_between, propagate_frames, CyclidicCube, Idx};
use cyclidic::vec3::{axis_angle, det3, mat_vec};
use cyclidic::{Frame, NetError, Tol, Vector3};
use serde::{Deserialize, Serialize};

/// Rotation as axis and angle (radians) or as a row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rotation {
    AxisAngle { axis: [f64; 3], angle: f64 },
    Matrix([[f64; 3]; 3]),
}

impl Rotation {
    pub fn matrix(&self) -> Result<[[f64; 3]; 3], OpError> {
        match self {
            Rotation::AxisAngle { axis, angle } => {
                if Vector3::from(*axis).normalized().is_none() {
                    return Err(OpError::Input("rotation axis is zero".into()));
                }
                Ok(axis_angle(Vector3::from(*axis), *angle))
            }
            Rotation::Matrix(m) => {
                let r = Frame::new(Vector3::zero(), m[0].into(), m[1].into(), m[2].into());
                let g = r.gram_residual();
                if !(g <= 1e-9) || det3(m[0].into(), m[1].into(), m[2].into()) < 0.0 {
                    return Err(OpError::Geometry { message: "matrix is not a rotation".into(), residual: Some(g) });
                }
                Ok(*m)
            }
        }
    }
}

#[derive(Debug)]
pub enum OpError {
    /// Malformed request.
    Input(String),
    /// Geometric precondition failed.
    Geometry { message: String, residual: Option<f64> },
}

impl From<NetError> for OpError {
    fn from(e: NetError) -> Self {
        let residual = match &e {
            NetError::DegenerateMiquel { residual, .. } => Some(*residual),
            NetError::PropagationConflict { residual, .. } => Some(*residual),
            NetError::ClosureViolation { residual } => Some(*residual),
            _ => None,
        };
        OpError::Geometry { message: e.to_string(), residual }
    }
}

impl From<cyclidic::io::IoError> for OpError {
    fn from(e: cyclidic::io::IoError) -> Self {
        use cyclidic::io::IoError;
        match e {
            IoError::Net(n) => n.into(),
            IoError::SchemaMismatch { .. } | IoError::Parse(_) => OpError::Input(e.to_string()),
            e => OpError::Geometry { message: e.to_string(), residual: None },
        }
    }
}

impl std::fmt::Display for OpError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OpError::Input(m) => write!(f, "{m}"),
            OpError::Geometry { message, residual: Some(r) } => write!(f, "{message} (residual {r:.3e})"),
            OpError::Geometry { message, .. } => write!(f, "{message}"),
        }
    }
}

pub fn grid_index(z: &[usize], m: usize) -> Result<Idx, OpError> {
    if z.len() != m {
        return Err(OpError::Input(format!("expected {m} grid coordinates, got {}", z.len())));
    }
    let mut out = [0; 3];
    out[..m].copy_from_slice(z);
    Ok(out)
}

/// Scene with the frame at `z0` (default: the seed) turned by `rot` and
/// propagated over the net again.
pub fn rotate_seed(scene: &SceneDocument, z0: Option<Idx>, rot: &Rotation) -> Result<SceneDocument, OpError> {
    let c = scene.cnet()?;
    let z0 = z0.unwrap_or(c.seed);
    if !c.net.contains(z0) {
        return Err(OpError::Input(format!("z0 {z0:?} outside the net")));
    }
    let r = rot.matrix()?;
    let b = c.frame(z0);
    let b0 = Frame::with_vecs(b.x, b.vecs().map(|v| mat_vec(&r, v)));
    let c2 = propagate_frames(&c.net, z0, &b0, Tol::default())?;
    Ok(build_scene(&c2, scene.options)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetweenDoc {
    pub cube: Idx,
    pub dir: usize,
    pub s: f64,
    pub vertices: [[f64; 3]; 4],
    pub frame: [[f64; 3]; 3],
    pub closure: f64,
    pub orthogonality: f64,
    pub mesh: QuadMesh,
}

pub fn between(scene: &SceneDocument, cube: Idx, dir: usize, s: f64) -> Result<BetweenDoc, OpError> {
    if !(1..=3).contains(&dir) {
        return Err(OpError::Input(format!("dir must be 1, 2 or 3, got {dir}")));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(OpError::Input(format!("s must lie in [0, 1], got {s}")));
    }
    let c = scene.cnet()?;
    let cube_data = CyclidicCube::from_net(&c, cube, Tol::default())?;
    let ib = patch_in_between(&cube_data, dir, s)?;
    let name = format!("between_{}_{}_{}_{dir}", cube[0], cube[1], cube[2]);
    Ok(BetweenDoc {
        cube,
        dir,
        s,
        vertices: ib.vertices.map(|v| v.to_array()),
        frame: frame_rows(&ib.patch.frame),
        closure: ib.closure,
        orthogonality: ib.orthogonality,
        mesh: sample_patch(&ib.patch, scene.options.res, &name)?,
    })
}

/// Mesh of the subpatch `[0, u0] x [0, v0]` of a named patch.
pub fn subpatch(scene: &SceneDocument, name: &str, u0: f64, v0: f64) -> Result<QuadMesh, OpError> {
    let Some(doc) = scene.patches.iter().find(|p| p.name == name) else {
        return Err(OpError::Input(format!("no patch named {name}")));
    };
    let set = scene.patch_set()?;
    let key = (doc.z, doc.dirs[0], doc.dirs[1]);
    let p = match set.patches.get(&key) {
        Some(Ok(p)) => p,
        Some(Err(e)) => return Err(e.clone().into()),
        None => return Err(OpError::Input(format!("no patch named {name}"))),
    };
    let sub = p.subpatch(u0, v0).map_err(|e| OpError::Geometry { message: e.to_string(), residual: None })?;
    Ok(sample_patch(&sub, scene.options.res, &format!("{name}_sub"))?)
}
