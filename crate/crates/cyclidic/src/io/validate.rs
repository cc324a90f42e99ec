use crate::nets::{
    check_c1_joints, check_cube_orthogonality, contact_element_residual, frame_residual, half_line_continuity,
    loop_closure, miquel_sphere, patches_of_net, propagate_half_lines, validate_circular, CyclidicCube,
};
use crate::{CyclidicNet, Tol};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SuiteResult {
    pub(crate) fn new(name: &str, value: f64, tol: f64) -> Self {
        SuiteResult { name: name.into(), value, tol, pass: value <= tol, note: None }
    }

    pub(crate) fn failed(name: &str, tol: f64, note: String) -> Self {
        SuiteResult { name: name.into(), value: f64::INFINITY, tol, pass: false, note: Some(note) }
    }

    fn from_result(name: &str, r: Result<f64, crate::NetError>, tol: f64) -> Self {
        match r {
            Ok(v) => Self::new(name, v, tol),
            Err(e) => Self::failed(name, tol, e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

impl ValidationReport {
    /// Fixed-width table, one suite per line.
    pub fn table(&self) -> String {
        let mut s = format!("{:<24} {:>12} {:>10}  result\n", "suite", "residual", "tol");
        for r in &self.suites {
            s += &format!(
                "{:<24} {:>12.3e} {:>10.1e}  {}{}\n",
                r.name,
                r.value,
                r.tol,
                if r.pass { "PASS" } else { "FAIL" },
                r.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
            );
        }
        s
    }
}

/// Runs every invariant check that applies to the net.
pub fn validate_net(c: &CyclidicNet<f64>, half_lines: bool) -> ValidationReport {
    let tol = Tol::default();
    let mut suites = Vec::new();

    let circ = validate_circular(&c.net, tol);
    let mut s = SuiteResult::new("circularity", circ.max_residual, 1e-9);
    if let Some(q) = circ.quads.iter().find(|q| !q.embedded) {
        s.pass = false;
        s.note = Some(format!("quad {:?} ({}, {}) not embedded", q.z, q.i, q.j));
    }
    suites.push(s);

    let gram = c.frames.iter().map(|f| f.gram_residual()).fold(0.0, f64::max);
    suites.push(SuiteResult::new("frame_gram", gram, 1e-12));
    suites.push(SuiteResult::from_result("frame_relation", frame_residual(c, tol), 1e-10));
    suites.push(SuiteResult::from_result("loop_closure", loop_closure(c, tol), 1e-10));

    let set = patches_of_net(c, None, tol);
    let failures = set.failures();
    let mut s = SuiteResult::new("patch_construction", failures.len() as f64, 0.0);
    if let Some((k, e)) = failures.first() {
        s.note = Some(format!("{:?}: {e}", k.0));
    }
    suites.push(s);

    let scale = c.net.diameter().max(1.0);
    let mut corner = 0.0f64;
    for p in set.patches.values().flatten() {
        let q = p.quad.points();
        for (k, (u, v)) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)].into_iter().enumerate() {
            corner = corner.max(p.eval(u, v).finite().map_or(f64::INFINITY, |x| x.dist(q[k]) / scale));
        }
    }
    suites.push(SuiteResult::new("patch_corners", corner, 1e-9));

    if c.m() == 2 {
        let r = check_c1_joints(c, tol);
        let max = |f: fn(&crate::nets::JointCheck) -> f64| r.joints.iter().map(f).fold(0.0, f64::max);
        suites.push(SuiteResult::new("c1_arcs", max(|j| j.arc), 1e-8));
        suites.push(SuiteResult::new("c1_spheres", max(|j| j.sphere), 1e-8));
        suites.push(SuiteResult::new("c1_normals", max(|j| j.normal), 1e-6));
        suites.push(SuiteResult::from_result("contact_elements", contact_element_residual(c), 1e-8));
    } else {
        let mut angle = 0.0f64;
        let mut arcs = 0.0f64;
        let mut sphere = 0.0f64;
        let mut note = None;
        for z in c.net.indices() {
            if !c.net.contains([z[0] + 1, z[1] + 1, z[2] + 1]) {
                continue;
            }
            match CyclidicCube::from_net(c, z, tol) {
                Ok(cube) => {
                    let r = check_cube_orthogonality(&cube);
                    for a in &r.arcs {
                        angle = angle.max(a.angle);
                        arcs = arcs.max(a.hausdorff);
                    }
                    angle = angle.max(r.vertex_deviation);
                    sphere = sphere.max(miquel_sphere(&cube.vertices).map_or(f64::INFINITY, |s| s.1));
                }
                Err(e) => {
                    angle = f64::INFINITY;
                    note.get_or_insert(format!("{z:?}: {e}"));
                }
            }
        }
        let mut s = SuiteResult::new("cube_orthogonality", angle, 1e-5);
        s.note = note;
        suites.push(s);
        suites.push(SuiteResult::new("cube_arcs", arcs, 1e-8));
        suites.push(SuiteResult::new("miquel_spheres", sphere, 1e-8));
    }

    if half_lines {
        let r = propagate_half_lines(c, tol).and_then(|h| half_line_continuity(c, &h, tol));
        suites.push(SuiteResult::from_result("half_lines", r, 1e-8));
    }

    let pass = suites.iter().all(|s| s.pass);
    ValidationReport { suites, pass }
}
