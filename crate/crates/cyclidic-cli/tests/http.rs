mod common;

use common::{lattice_scene, request, spawn_server, torus_scene};
use cyclidic::io::{QuadMesh, SceneDocument, ValidationReport};
use cyclidic_cli::ops::BetweenDoc;
use cyclidic_cli::server::{handle, ServerState};

fn sorted(mut v: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[test]
fn identity_frame_reproduces_scene() {
    let addr = spawn_server(torus_scene());
    let (st, scene) = request(addr, "GET", "/scene", "");
    assert_eq!(st, 200);
    let doc: SceneDocument = serde_json::from_str(&scene).unwrap();
    assert_eq!(doc.schema, "cyclidic-scene/1");
    for body in [
        r#"{"rotation": {"axis": [0, 0, 1], "angle": 0}}"#,
        r#"{"rotation": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}"#,
        r#"{"z0": [0, 0], "rotation": {"axis": [1, 2, 3], "angle": 0}}"#,
    ] {
        let (st, r) = request(addr, "POST", "/frame", body);
        assert_eq!(st, 200, "{r}");
        assert_eq!(r, scene, "{body}");
    }
}

#[test]
fn rotated_frames_are_deterministic_and_valid() {
    let addr = spawn_server(torus_scene());
    let body = r#"{"rotation": {"axis": [0.3, -1, 0.2], "angle": 0.4}}"#;
    let (s1, a) = request(addr, "POST", "/frame", body);
    let (s2, b) = request(addr, "POST", "/frame", body);
    assert_eq!((s1, s2), (200, 200));
    assert_eq!(a, b);
    let (_, scene) = request(addr, "GET", "/scene", "");
    assert_ne!(a, scene);
    let doc: SceneDocument = serde_json::from_str(&a).unwrap();
    assert!(doc.validation.pass, "{}", doc.validation.table());
    // the base scene is untouched
    assert_eq!(request(addr, "GET", "/scene", "").1, scene);
}

#[test]
fn concurrent_requests_agree() {
    let addr = spawn_server(torus_scene());
    let body = r#"{"rotation": {"axis": [1, 0, 0], "angle": 0.25}}"#;
    let handles: Vec<_> = (0..4).map(|_| std::thread::spawn(move || request(addr, "POST", "/frame", body))).collect();
    let out: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert!(out.iter().all(|r| r == &out[0] && r.0 == 200));
}

#[test]
fn between_at_zero_matches_face() {
    let scene = lattice_scene();
    let addr = spawn_server(scene.clone());
    for (dir, face) in [(1, "patch_0_0_0_23"), (2, "patch_0_0_0_13"), (3, "patch_0_0_0_12")] {
        let (st, r) = request(addr, "POST", "/between", &format!(r#"{{"cube": [0, 0, 0], "dir": {dir}, "s": 0}}"#));
        assert_eq!(st, 200, "{r}");
        let b: BetweenDoc = serde_json::from_str(&r).unwrap();
        let face = scene.meshes.iter().find(|m| m.group == face).unwrap();
        let got = sorted(b.mesh.corners().to_vec());
        let want = sorted(face.corners().to_vec());
        for (g, w) in got.iter().zip(&want) {
            for k in 0..3 {
                assert!((g[k] - w[k]).abs() <= 1e-9, "{dir}: {g:?} vs {w:?}");
            }
        }
    }
    let (st, r) = request(addr, "POST", "/between", r#"{"cube": [0, 0, 0], "dir": 2, "s": 0.5}"#);
    assert_eq!(st, 200);
    let b: BetweenDoc = serde_json::from_str(&r).unwrap();
    assert!(b.closure <= 1e-8 && b.orthogonality <= 1e-5);
}

#[test]
fn subpatch_mesh() {
    let scene = torus_scene();
    let addr = spawn_server(scene.clone());
    let (st, r) = request(addr, "POST", "/subpatch", r#"{"patch": "patch_1_0", "u0": 0.5, "v0": 0.25}"#);
    assert_eq!(st, 200, "{r}");
    let m: QuadMesh = serde_json::from_str(&r).unwrap();
    let full = scene.meshes.iter().find(|m| m.group == "patch_1_0").unwrap();
    assert_eq!(m.positions[0], full.positions[0]);
    assert_eq!(m.positions.len(), full.positions.len());
    // (t1, t2) = (1/2, 1/4) is a node of the res-4 grid
    let far = m.corners()[2];
    let node = full.positions[5 + 2];
    for k in 0..3 {
        assert!((far[k] - node[k]).abs() < 1e-12);
    }
}

#[test]
fn validate_endpoint() {
    let addr = spawn_server(lattice_scene());
    let (st, r) = request(addr, "GET", "/validate", "");
    assert_eq!(st, 200);
    let rep: ValidationReport = serde_json::from_str(&r).unwrap();
    assert!(rep.pass);
    assert!(rep.suites.iter().any(|s| s.name == "cube_orthogonality"));
}

#[test]
fn error_statuses() {
    let addr = spawn_server(torus_scene());
    let cases = [
        ("POST", "/frame", "not json", 400),
        ("POST", "/frame", r#"{"rotation": [[1, 0, 0]]}"#, 400),
        ("POST", "/frame", r#"{"rotation": {"axis": [0, 0, 1], "angle": 0}, "extra": 1}"#, 400),
        ("POST", "/frame", r#"{"z0": [9, 9], "rotation": {"axis": [0, 0, 1], "angle": 0}}"#, 400),
        ("POST", "/frame", r#"{"rotation": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}"#, 422),
        ("POST", "/between", r#"{"cube": [0, 0, 0], "dir": 1, "s": 0.5}"#, 422),
        ("POST", "/subpatch", r#"{"patch": "patch_9_9", "u0": 0.5, "v0": 0.5}"#, 400),
        ("POST", "/subpatch", r#"{"patch": "patch_0_0", "u0": 0.0, "v0": 0.5}"#, 422),
        ("GET", "/frame", "", 405),
        ("GET", "/nothing", "", 404),
    ];
    for (m, p, b, want) in cases {
        let (st, r) = request(addr, m, p, b);
        assert_eq!(st, want, "{m} {p} {b}: {r}");
        let v: serde_json::Value = serde_json::from_str(&r).unwrap();
        assert!(v["error"].is_string());
    }
    let (_, r) = request(addr, "POST", "/frame", r#"{"rotation": [[2, 0, 0], [0, 1, 0], [0, 0, 1]]}"#);
    let v: serde_json::Value = serde_json::from_str(&r).unwrap();
    assert!(v["residual"].as_f64().unwrap() > 1.0);
}

#[test]
fn handler_is_pure() {
    let state = ServerState::new(lattice_scene());
    let body = br#"{"cube": [0, 0, 0], "dir": 3, "s": 0.3}"#;
    let a = handle(&state, "POST", "/between", body);
    let b = handle(&state, "POST", "/between", body);
    assert_eq!(a.status, 200);
    assert_eq!(a, b);
}
