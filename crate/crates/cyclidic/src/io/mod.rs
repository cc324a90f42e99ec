//! Mesh sampling, OBJ export, scene documents and validation reports.
//! Everything here works in `f64`.

mod mesh;
mod obj;
mod scene;
mod validate;

pub use mesh::{sample_patch, QuadMesh};
pub use obj::{export_obj, obj_string, write_obj};
pub use scene::{
    build_scene, export_scene_json, import_scene_json, patch_name, read_cnet, read_net, scene_from_json, write_cnet,
    write_net, ArcDoc, NetDoc, PatchDoc, SceneDocument, SceneOptions, SeedDoc, YPointDoc, CNET_SCHEMA, NET_SCHEMA,
    SCENE_SCHEMA,
};
pub use validate::{validate_net, SuiteResult, ValidationReport};

use crate::nets::NetError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("sample at infinity at (t1, t2) = ({t1}, {t2})")]
    InfinitySample { t1: f64, t2: f64 },
    #[error("no normal at (t1, t2) = ({t1}, {t2})")]
    DegenerateNormal { t1: f64, t2: f64 },
    #[error("resolution must be at least 2, got {0}")]
    BadResolution(usize),
    #[error("schema mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: String, found: String },
    #[error("malformed document: {0}")]
    Parse(String),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Frame as a row-major 3x3 array with rows `t1, t2, n`.
pub fn frame_rows(f: &crate::Frame) -> [[f64; 3]; 3] {
    f.matrix()
}

pub fn frame_from_rows(x: crate::Vector3, m: &[[f64; 3]; 3]) -> crate::Frame {
    crate::Frame::new(x, m[0].into(), m[1].into(), m[2].into())
}
