use super::{IoError, QuadMesh};
use std::fmt::Write as _;
use std::path::Path;

fn num(x: f64) -> String {
    // 9 significant digits; no negative zero
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

/// OBJ text for a list of meshes: one group per mesh, vertices and normals
/// shared by index, quads as `f v//vn` records.
pub fn obj_string(meshes: &[QuadMesh]) -> String {
    let mut s = String::new();
    let nv: usize = meshes.iter().map(|m| m.positions.len()).sum();
    let nf: usize = meshes.iter().map(|m| m.quads.len()).sum();
    let _ = writeln!(s, "# cyclidic patches: {} groups, {nv} vertices, {nf} quads", meshes.len());
    let mut base = 1;
    for m in meshes {
        let _ = writeln!(s, "g {}", m.group);
        for p in &m.positions {
            let _ = writeln!(s, "v {} {} {}", num(p[0]), num(p[1]), num(p[2]));
        }
        for n in &m.normals {
            let _ = writeln!(s, "vn {} {} {}", num(n[0]), num(n[1]), num(n[2]));
        }
        for q in &m.quads {
            let [a, b, c, d] = q.map(|i| i + base);
            let _ = writeln!(s, "f {a}//{a} {b}//{b} {c}//{c} {d}//{d}");
        }
        base += m.positions.len();
    }
    s
}

pub fn write_obj(meshes: &[QuadMesh], w: &mut impl std::io::Write) -> Result<(), IoError> {
    w.write_all(obj_string(meshes).as_bytes())?;
    Ok(())
}

pub fn export_obj(meshes: &[QuadMesh], path: &Path) -> Result<(), IoError> {
    std::fs::write(path, obj_string(meshes))?;
    Ok(())
}
