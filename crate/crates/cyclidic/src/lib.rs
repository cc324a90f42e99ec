pub mod cyclide;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod nets;
pub mod scalar;
pub mod vec3;

pub use cyclide::{CyclideError, CyclidicPatch, Edge, FamilyConic, VertexFrame, VertexQuad};
pub use nets::{CircularNet, CyclidicNet, NetError};
pub use lie::{Circle3D, ContactElement, LieError, LieVector, OrientedSphere, Point};
pub use scalar::{Real, Tol};
pub use vec3::Vec3;

pub type Vector3 = Vec3<f64>;
pub type Lie = LieVector<f64>;
pub type Sphere = OrientedSphere<f64>;
pub type Frame = VertexFrame<f64>;
pub type Quad = VertexQuad<f64>;
pub type Patch = CyclidicPatch<f64>;
pub type Net = CyclidicNet<f64>;
