//! Circular and cyclidic nets on finite boxes of Z^2 and Z^3.

mod arc;
mod c1;
mod circular;
mod contact;
mod convergence;
mod cube;
mod frames;
pub mod generators;
mod halflines;
mod miquel;
mod patches;

pub use arc::Arc;
pub use c1::{check_c1_joints, check_patch_joints, edge_arc, C1Report, JointCheck};
pub use circular::{validate_circular, CircularNet, CircularReport, QuadCheck};
pub use contact::{
    contact_element_residual, extract_contact_element_net, offset_net, ribaucour_transform, verify_ribaucour,
    RibaucourReport,
};
pub use convergence::{convergence_experiment, ConvergenceRow, SmoothSystem};
pub use cube::{check_cube_orthogonality, cube_is_singular, patch_in_between, CubeReport, CyclidicCube, InBetween};
pub use frames::{frame_residual, loop_closure, propagate_frames, transport, CyclidicNet, Step};
pub use halflines::{half_line_continuity, propagate_half_lines, HalfLineTracker};
pub use miquel::{complete_3d_from_coordinate_planes, miquel_eighth_point, miquel_sphere, FillOrder};
pub use patches::{patches_of_net, PatchKey, PatchSet};

use crate::cyclide::CyclideError;
use thiserror::Error;

/// Grid index; the third entry is 0 for two-dimensional nets.
pub type Idx = [usize; 3];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetError {
    #[error("invalid net: {0}")]
    InvalidNet(String),
    #[error("quad at {z:?} in directions ({i},{j}) is not embedded")]
    NonEmbeddedQuad { z: Idx, i: usize, j: usize },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("Miquel circles do not meet (residual {residual:.3e}) at {at:?}")]
    DegenerateMiquel { residual: f64, at: Option<Idx> },
    #[error("half-line propagation conflict on edge {z:?}/{dir} (residual {residual:.3e})")]
    PropagationConflict { z: Idx, dir: usize, residual: f64 },
    #[error("offset vertex {0:?} collides with a neighbor")]
    CollidingVertices(Idx),
    #[error("coincident points at {0:?}")]
    CoincidentPoints(Idx),
    #[error("singular cube: {0}")]
    SingularCube(String),
    #[error("closure violated (residual {residual:.3e})")]
    ClosureViolation { residual: f64 },
    #[error("patch construction failed at {z:?}: {err}")]
    Patch { z: Idx, err: CyclideError },
    #[error(transparent)]
    Cyclide(#[from] CyclideError),
}

/// Unit vector index shift; `dir` is 1-based.
pub fn shift(z: Idx, dir: usize, forward: bool) -> Option<Idx> {
    let mut w = z;
    let k = dir - 1;
    if forward {
        w[k] += 1;
    } else {
        w[k] = w[k].checked_sub(1)?;
    }
    Some(w)
}

#[cfg(test)]
mod tests;
