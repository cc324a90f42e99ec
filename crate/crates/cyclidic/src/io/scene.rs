use super::{frame_from_rows, frame_rows, sample_patch, validate_net, IoError, QuadMesh, SuiteResult, ValidationReport};
use crate::cyclide::PatchKind;
use crate::nets::{edge_arc, patches_of_net, propagate_half_lines, shift, Arc, HalfLineTracker, Idx, PatchKey, PatchSet};
use crate::{CircularNet, CyclidicNet, Edge, Frame, Patch, Point, Tol, Vector3};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

pub const SCENE_SCHEMA: &str = "cyclidic-scene/1";
pub const NET_SCHEMA: &str = "cyclidic-net/1";
pub const CNET_SCHEMA: &str = "cyclidic-cnet/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedDoc {
    pub z0: Idx,
    /// Rows `t1, t2, n` (or `t1, t2, t3` for three-dimensional nets).
    pub frame: [[f64; 3]; 3],
}

/// A circular net, optionally with its frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetDoc {
    pub m: usize,
    pub extents: [usize; 3],
    pub vertices: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<[[f64; 3]; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<SeedDoc>,
}

impl NetDoc {
    pub fn from_net(net: &CircularNet<f64>) -> Self {
        NetDoc {
            m: net.m,
            extents: net.extents,
            vertices: net.vertices.iter().map(|v| v.to_array()).collect(),
            frames: None,
            seed: None,
        }
    }

    pub fn from_cnet(c: &CyclidicNet<f64>) -> Self {
        NetDoc {
            frames: Some(c.frames.iter().map(frame_rows).collect()),
            seed: Some(SeedDoc { z0: c.seed, frame: frame_rows(c.frame(c.seed)) }),
            ..Self::from_net(&c.net)
        }
    }

    pub fn net(&self) -> Result<CircularNet<f64>, IoError> {
        let vs = self.vertices.iter().map(|&v| Vector3::from(v)).collect();
        Ok(CircularNet::new(self.m, self.extents, vs)?)
    }

    pub fn cnet(&self) -> Result<CyclidicNet<f64>, IoError> {
        let net = self.net()?;
        let (Some(frames), Some(seed)) = (&self.frames, &self.seed) else {
            return Err(IoError::Parse("net has no frames".into()));
        };
        if frames.len() != net.vertices.len() {
            return Err(IoError::Parse(format!("{} frames for {} vertices", frames.len(), net.vertices.len())));
        }
        if !net.contains(seed.z0) {
            return Err(IoError::Parse(format!("seed {:?} outside the net", seed.z0)));
        }
        let frames = frames.iter().zip(&net.vertices).map(|(f, &x)| frame_from_rows(x, f)).collect();
        Ok(CyclidicNet { net, frames, seed: seed.z0 })
    }
}

#[derive(Serialize, Deserialize)]
struct NetFile {
    schema: String,
    net: NetDoc,
}

fn check_schema(v: &serde_json::Value, expected: &str) -> Result<(), IoError> {
    let found = v.get("schema").and_then(|s| s.as_str()).unwrap_or("<none>");
    if found != expected {
        return Err(IoError::SchemaMismatch { expected: expected.into(), found: found.into() });
    }
    Ok(())
}

fn parse_net_file(text: &str, schema: &str) -> Result<NetDoc, IoError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    check_schema(&v, schema)?;
    let f: NetFile = serde_json::from_value(v).map_err(|e| IoError::Parse(e.to_string()))?;
    Ok(f.net)
}

fn net_file_string(schema: &str, net: NetDoc) -> String {
    serde_json::to_string_pretty(&NetFile { schema: schema.into(), net }).expect("net serializes")
}

pub fn write_net(net: &CircularNet<f64>) -> String {
    net_file_string(NET_SCHEMA, NetDoc::from_net(net))
}

pub fn read_net(text: &str) -> Result<CircularNet<f64>, IoError> {
    parse_net_file(text, NET_SCHEMA)?.net()
}

pub fn write_cnet(c: &CyclidicNet<f64>) -> String {
    net_file_string(CNET_SCHEMA, NetDoc::from_cnet(c))
}

pub fn read_cnet(text: &str) -> Result<CyclidicNet<f64>, IoError> {
    parse_net_file(text, CNET_SCHEMA)?.cnet()
}

/// Boundary arc of the net between `z` and `z + e_dir`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArcDoc {
    /// Angles are measured counterclockwise about `normal` from `u_axis`.
    Circle {
        z: Idx,
        dir: usize,
        center: [f64; 3],
        radius: f64,
        normal: [f64; 3],
        u_axis: [f64; 3],
        start_angle: f64,
        end_angle: f64,
    },
    /// A straight segment, or with `through_infinity` its complement.
    Line { z: Idx, dir: usize, endpoints: [[f64; 3]; 2], through_infinity: bool },
}

impl ArcDoc {
    fn new(z: Idx, dir: usize, arc: &Arc<f64>) -> Self {
        match *arc {
            Arc::Circle { center, radius, normal, start, sweep, .. } => {
                let u = normal.any_orthogonal();
                let w = normal.cross(u);
                let r = start - center;
                let a0 = r.dot(w).atan2(r.dot(u));
                ArcDoc::Circle {
                    z,
                    dir,
                    center: center.to_array(),
                    radius,
                    normal: normal.to_array(),
                    u_axis: u.to_array(),
                    start_angle: a0,
                    end_angle: a0 + sweep,
                }
            }
            Arc::Segment { start, end } => {
                ArcDoc::Line { z, dir, endpoints: [start.to_array(), end.to_array()], through_infinity: false }
            }
            Arc::Complement { start, end } => {
                ArcDoc::Line { z, dir, endpoints: [start.to_array(), end.to_array()], through_infinity: true }
            }
        }
    }
}

/// Point on the arc from `z` along `dir` fixing the middle curvature line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YPointDoc {
    pub z: Idx,
    pub dir: usize,
    pub point: [f64; 3],
    pub inf: bool,
}

impl YPointDoc {
    fn new(z: Idx, dir: usize, p: Point<f64>) -> Self {
        match p {
            Point::Finite(x) => YPointDoc { z, dir, point: x.to_array(), inf: false },
            Point::Infinity => YPointDoc { z, dir, point: [0.0; 3], inf: true },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatchDoc {
    pub name: String,
    pub z: Idx,
    pub dirs: [usize; 2],
    pub vertices: [[f64; 3]; 4],
    pub frame: [[f64; 3]; 3],
    pub spherical: bool,
    /// Lie coordinates of the boundary spheres: bottom, right, top, left.
    pub boundary_spheres: [[f64; 6]; 4],
    /// Family members at parameter 1/2 (families 1 and 2); absent for
    /// spherical patches.
    pub middle_spheres: Option<[[f64; 6]; 2]>,
    pub singular: Vec<(usize, f64)>,
    pub error: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneOptions {
    pub half_lines: bool,
    pub res: usize,
}

impl Default for SceneOptions {
    fn default() -> Self {
        SceneOptions { half_lines: false, res: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneDocument {
    pub schema: String,
    pub options: SceneOptions,
    pub net: NetDoc,
    pub patches: Vec<PatchDoc>,
    pub arcs: Vec<ArcDoc>,
    pub y_points: Vec<YPointDoc>,
    pub meshes: Vec<QuadMesh>,
    pub validation: ValidationReport,
}

pub fn patch_name(key: &PatchKey, m: usize) -> String {
    let (z, a, b) = key;
    if m == 2 {
        format!("patch_{}_{}", z[0], z[1])
    } else {
        format!("patch_{}_{}_{}_{a}{b}", z[0], z[1], z[2])
    }
}

fn patch_doc(name: String, key: PatchKey, c: &CyclidicNet<f64>, r: &Result<Patch, crate::NetError>) -> PatchDoc {
    let (z, a, b) = key;
    let q = c.net.quad(z, a, b);
    let mut d = PatchDoc {
        name,
        z,
        dirs: [a, b],
        vertices: q.points().map(|p| p.to_array()),
        frame: frame_rows(c.frame(z)),
        spherical: false,
        boundary_spheres: [[0.0; 6]; 4],
        middle_spheres: None,
        singular: Vec::new(),
        error: None,
    };
    match r {
        Ok(p) => {
            d.frame = frame_rows(&p.frame);
            d.spherical = p.is_spherical();
            d.boundary_spheres = Edge::ALL.map(|e| p.boundary_sphere(e).to_f64());
            if let PatchKind::Generic { family1, family2 } = &p.kind {
                d.middle_spheres = Some([family1.eval(0.5).to_f64(), family2.eval(0.5).to_f64()]);
            }
            d.singular = p.singular_parameters();
        }
        Err(e) => d.error = Some(e.to_string()),
    }
    d
}

/// Patches of a net, with half-line midpoints if requested.
pub(crate) fn scene_patches(
    c: &CyclidicNet<f64>,
    half_lines: bool,
    tol: Tol<f64>,
) -> Result<(PatchSet<f64>, Option<HalfLineTracker<f64>>), IoError> {
    let h = if half_lines { Some(propagate_half_lines(c, tol)?) } else { None };
    Ok((patches_of_net(c, h.as_ref(), tol), h))
}

fn net_arcs(set: &PatchSet<f64>) -> Vec<ArcDoc> {
    // every net edge from the first patch that contains it
    let mut arcs: BTreeMap<(Idx, usize), ArcDoc> = BTreeMap::new();
    for (&(z, a, b), p) in &set.patches {
        let Ok(p) = p else { continue };
        let za = shift(z, a, true).unwrap();
        let zb = shift(z, b, true).unwrap();
        for (key, e) in [((z, a), Edge::Bottom), ((zb, a), Edge::Top), ((z, b), Edge::Left), ((za, b), Edge::Right)] {
            if arcs.contains_key(&key) {
                continue;
            }
            if let Some(arc) = edge_arc(p, e) {
                arcs.insert(key, ArcDoc::new(key.0, key.1, &arc));
            }
        }
    }
    arcs.into_values().collect()
}

fn y_points(c: &CyclidicNet<f64>, h: Option<&HalfLineTracker<f64>>, tol: Tol<f64>) -> Vec<YPointDoc> {
    if let Some(h) = h {
        return h.points.iter().map(|(&(z, d), &p)| YPointDoc::new(z, d, p)).collect();
    }
    let mut out = Vec::new();
    for z in c.net.indices() {
        for d in 1..=c.m() {
            let Some(zd) = c.net.step(z, d, true) else { continue };
            let f: &Frame = c.frame(z);
            if let Ok(y) = crate::cyclide::arc_midpoint(f.x, c.net.get(zd), f.vec(d), tol) {
                out.push(YPointDoc::new(z, d, y.y));
            }
        }
    }
    out
}

/// Patches, meshes, arcs, midpoints and validation of a cyclidic net.
/// Identical inputs give identical documents.
pub fn build_scene(c: &CyclidicNet<f64>, opts: SceneOptions) -> Result<SceneDocument, IoError> {
    let tol = Tol::default();
    let (set, h) = scene_patches(c, opts.half_lines, tol)?;
    let mut patches = Vec::new();
    let mut meshes = Vec::new();
    for (key, r) in &set.patches {
        let name = patch_name(key, c.m());
        let mut doc = patch_doc(name.clone(), *key, c, r);
        if let Ok(p) = r {
            match sample_patch(p, opts.res, &name) {
                Ok(m) => meshes.push(m),
                Err(e) => doc.error = Some(e.to_string()),
            }
        }
        patches.push(doc);
    }
    Ok(SceneDocument {
        schema: SCENE_SCHEMA.into(),
        options: opts,
        net: NetDoc::from_cnet(c),
        arcs: net_arcs(&set),
        y_points: y_points(c, h.as_ref(), tol),
        patches,
        meshes,
        validation: validate_net(c, opts.half_lines),
    })
}

impl SceneDocument {
    pub fn cnet(&self) -> Result<CyclidicNet<f64>, IoError> {
        self.net.cnet()
    }

    /// Rebuilds the patch set from the stored net and frames.
    pub fn patch_set(&self) -> Result<PatchSet<f64>, IoError> {
        Ok(scene_patches(&self.cnet()?, self.options.half_lines, Tol::default())?.0)
    }

    /// Meshes of all patches at resolution `res`.
    pub fn sample(&self, res: usize) -> Result<Vec<QuadMesh>, IoError> {
        let c = self.cnet()?;
        let set = self.patch_set()?;
        let mut out = Vec::new();
        for (key, r) in &set.patches {
            let Ok(p) = r else { continue };
            out.push(sample_patch(p, res, &patch_name(key, c.m()))?);
        }
        Ok(out)
    }

    /// Validates the stored net and checks that the stored meshes are
    /// reproduced exactly by a rebuild.
    pub fn validate(&self) -> Result<ValidationReport, IoError> {
        let c = self.cnet()?;
        let mut r = validate_net(&c, self.options.half_lines);
        let same = self.sample(self.options.res).map(|m| m == self.meshes);
        let s = match same {
            Ok(true) => SuiteResult::new("scene_reproducible", 0.0, 0.0),
            Ok(false) => SuiteResult::failed("scene_reproducible", 0.0, "stored meshes differ from a rebuild".into()),
            Err(e) => SuiteResult::failed("scene_reproducible", 0.0, e.to_string()),
        };
        r.suites.push(s);
        r.pass = r.suites.iter().all(|s| s.pass);
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }
}

pub fn scene_from_json(text: &str) -> Result<SceneDocument, IoError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    check_schema(&v, SCENE_SCHEMA)?;
    serde_json::from_value(v).map_err(|e| IoError::Parse(e.to_string()))
}

pub fn export_scene_json(doc: &SceneDocument, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, doc.to_json())?;
    Ok(())
}

pub fn import_scene_json(path: &Path) -> Result<SceneDocument, IoError> {
    scene_from_json(&std::fs::read_to_string(path)?)
}
