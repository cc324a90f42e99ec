use super::generators::*;
use super::*;
use crate::cyclide::{patch_from_data, Edge, VertexFrame};
use crate::lie::projectively_equal;
use crate::scalar::Tol;
use crate::vec3::Vec3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> Tol<f64> {
    Tol::default()
}

fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
    Vec3::new(x, y, z)
}

fn identity_at(x: Vec3<f64>) -> VertexFrame<f64> {
    VertexFrame::new(x, Vec3::unit_x(), Vec3::unit_y(), Vec3::unit_z())
}

fn flat_grid(n: usize) -> CircularNet<f64> {
    CircularNet::from_fn(2, [n, n, 1], |z| v(z[0] as f64, z[1] as f64, 0.0)).unwrap()
}

fn torus_cnet(n: usize) -> CyclidicNet<f64> {
    let net = torus_net(2.0, 1.0, 0.1, 0.2, 0.35, 0.4, n, n).unwrap();
    propagate_frames(&net, [0, 0, 0], &torus_frame(2.0, 1.0, 0.1, 0.2), tol()).unwrap()
}

#[test]
fn flat_square_frames_return_to_identity() {
    let c = propagate_frames(&flat_grid(2), [0, 0, 0], &identity_at(v(0., 0., 0.)), tol()).unwrap();
    for z in c.net.indices() {
        assert!(c.frame(z).max_diff(&identity_at(c.net.get(z))) < 1e-15);
    }
}

#[test]
fn seed_frame_is_kept_and_loops_close() {
    let c = torus_cnet(4);
    assert!(c.frame([0, 0, 0]).max_diff(&torus_frame(2.0, 1.0, 0.1, 0.2)) == 0.0);
    assert!(loop_closure(&c, tol()).unwrap() < 1e-12);
    assert!(frame_residual(&c, tol()).unwrap() < 1e-12);
    for f in &c.frames {
        assert!(f.gram_residual() < 1e-12);
    }
}

#[test]
fn torus_frames_are_the_smooth_frames() {
    // curvature-line samples of a cyclide: propagation recovers the surface frames
    let c = torus_cnet(4);
    for z in c.net.indices() {
        let f = torus_frame(2.0, 1.0, 0.1 + 0.35 * z[0] as f64, 0.2 + 0.4 * z[1] as f64);
        assert!(c.frame(z).max_diff(&f) < 1e-12, "{z:?}");
    }
}

#[test]
fn seed_in_the_middle() {
    let net = random_circular_net::<f64, _>(&mut ChaCha8Rng::seed_from_u64(11), 5, 5, tol()).unwrap();
    let c = propagate_frames(&net, [2, 3, 0], &identity_at(net.get([2, 3, 0])), tol()).unwrap();
    assert!(frame_residual(&c, tol()).unwrap() < 1e-10);
    let back = propagate_frames(&net, [0, 0, 0], c.frame([0, 0, 0]), tol()).unwrap();
    for z in net.indices() {
        assert!(back.frame(z).max_diff(c.frame(z)) < 1e-10);
    }
}

#[test]
fn invalid_nets_are_rejected() {
    let mut net = flat_grid(3);
    net.vertices[4] = v(1.0, 1.0, 0.01);
    let rep = validate_circular(&net, tol());
    assert!(!rep.valid);
    assert_eq!(rep.quads.iter().filter(|q| !q.pass).count(), 4);
    let err = propagate_frames(&net, [0, 0, 0], &identity_at(v(0., 0., 0.)), tol()).unwrap_err();
    assert!(matches!(err, NetError::InvalidNet(_)));

    // swapping two vertices of a square keeps it circular but not embedded
    let net = CircularNet::new(2, [2, 2, 1], vec![v(0., 0., 0.), v(1., 0., 0.), v(1., 1., 0.), v(0., 1., 0.)]).unwrap();
    let err = propagate_frames(&net, [0, 0, 0], &identity_at(v(0., 0., 0.)), tol()).unwrap_err();
    assert!(matches!(err, NetError::NonEmbeddedQuad { .. }));

    let skew = VertexFrame::new(v(0., 0., 0.), v(1., 0.1, 0.), Vec3::unit_y(), Vec3::unit_z());
    assert!(matches!(propagate_frames(&flat_grid(2), [0, 0, 0], &skew, tol()), Err(NetError::InvalidFrame(_))));
}

#[test]
fn perturbed_quad_fails_validation() {
    let mut net = sphere_grid(0.0, 0.3, -1.2, 0.25, 10, 10).unwrap();
    assert!(validate_circular(&net, tol()).valid);
    net.vertices[0] += v(0.0, 0.0, 1e-2);
    let rep = validate_circular(&net, tol());
    assert!(!rep.valid);
    assert_eq!(rep.quads.iter().filter(|q| !q.pass).count(), 1);
}

#[test]
fn rotational_net_validates() {
    let profile = [(1.0, 0.0), (1.5, 0.4), (1.2, 1.0), (0.6, 1.3)];
    let net = rotational_net(&profile, 12, std::f64::consts::TAU / 12.0).unwrap();
    assert!(validate_circular(&net, tol()).valid);
}

#[test]
fn patch_frames_match_net_frames_up_to_backward_tangents() {
    let net = random_circular_net::<f64, _>(&mut ChaCha8Rng::seed_from_u64(5), 3, 3, tol()).unwrap();
    let c = propagate_frames(&net, [0, 0, 0], &random_frame(&mut ChaCha8Rng::seed_from_u64(6), net.get([0, 0, 0])), tol()).unwrap();
    for (z, i, j) in net.quads() {
        let p = patch_from_data(&net.quad(z, i, j), c.frame(z), tol()).unwrap();
        let [b, b1, b12, b2] = p.corner_frames().unwrap();
        let at = |d: [usize; 2]| c.frame([z[0] + d[0], z[1] + d[1], 0]);
        assert!(b.max_diff(at([0, 0])) < 1e-10);
        assert!(b1.flip(1).max_diff(at([1, 0])) < 1e-10);
        assert!(b2.flip(2).max_diff(at([0, 1])) < 1e-10);
        assert!(b12.flip(1).flip(2).max_diff(at([1, 1])) < 1e-10);
    }
}

#[test]
fn torus_patches_share_arcs_and_are_c1() {
    let c = torus_cnet(3);
    let set = patches_of_net(&c, None, tol());
    assert_eq!(set.len(), 4);
    assert!(set.failures().is_empty());
    let p = set.get(&([0, 0, 0], 1, 2)).unwrap();
    assert!(p.eval_exact_corners(1.0, 1.0).finite().unwrap().dist(c.net.get([1, 1, 0])) == 0.0);
    let rep = check_c1_joints(&c, tol());
    assert_eq!(rep.joints.len(), 4);
    assert!(rep.pass, "{:?}", rep.joints);
}

#[test]
fn single_patch_net() {
    let c = torus_cnet(2);
    let set = patches_of_net(&c, None, tol());
    assert_eq!(set.len(), 1);
    let p = set.get(&([0, 0, 0], 1, 2)).unwrap();
    for (k, z) in [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]].into_iter().enumerate() {
        let uv = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)][k];
        assert!(p.eval(uv.0, uv.1).finite().unwrap().dist(c.net.get(z)) < 1e-12);
    }
    let h = propagate_half_lines(&c, tol()).unwrap();
    let y = h.get([0, 0, 0], 1).unwrap().finite().unwrap();
    let mid = crate::cyclide::arc_midpoint(c.net.get([0, 0, 0]), c.net.get([1, 0, 0]), c.frame([0, 0, 0]).t1, tol()).unwrap();
    assert!(y.dist(mid.y.finite().unwrap()) == 0.0);
}

#[test]
fn random_nets_are_c1() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..3 {
        let net = random_circular_net::<f64, _>(&mut rng, 4, 4, tol()).unwrap();
        let b0 = random_frame(&mut rng, net.get([0, 0, 0]));
        let c = propagate_frames(&net, [0, 0, 0], &b0, tol()).unwrap();
        let rep = check_c1_joints(&c, tol());
        assert!(rep.pass, "{:?}", rep.joints.iter().filter(|j| !j.pass).collect::<Vec<_>>());
        // corrupt one frame
        let mut bad = c.clone();
        let k = bad.net.index([1, 1, 0]);
        bad.frames[k] = random_frame(&mut rng, bad.frames[k].x);
        assert!(!check_c1_joints(&bad, tol()).pass);
    }
}

#[test]
fn contact_elements_share_spheres() {
    let c = torus_cnet(3);
    let ce = extract_contact_element_net(&c).unwrap();
    assert_eq!(ce.len(), 9);
    assert!(contact_element_residual(&c).unwrap() < 1e-12);
    // the sphere shared along a u-edge is the tube sphere: radius 1, center
    // on the core circle at the edge's tube angle... curvature sphere of the
    // parallel circles has center on the axis; check it passes through both
    let f = c.frame([0, 0, 0]);
    let s = crate::cyclide::boundary_sphere(f.x, c.net.get([1, 0, 0]) - f.x, f.n, tol()).unwrap();
    if let crate::lie::OrientedSphere::Sphere { center, radius } = s {
        assert!(center.x.abs() < 1e-12 && center.y.abs() < 1e-12);
        assert!((center.dist(c.net.get([1, 0, 0])) - radius.abs()).abs() < 1e-12);
    } else {
        panic!("expected a sphere");
    }
    // flat net: the plane z = 0 is shared by every edge
    let flat = propagate_frames(&flat_grid(3), [0, 0, 0], &identity_at(v(0., 0., 0.)), tol()).unwrap();
    assert!(contact_element_residual(&flat).unwrap() == 0.0);
    let s = crate::cyclide::boundary_sphere_lie(v(0., 0., 0.), v(1., 0., 0.), Vec3::unit_z()).unwrap();
    assert!(projectively_equal(&s, &crate::lie::plane_lift(Vec3::unit_z(), 0.0), 1e-12));
}

#[test]
fn offsets() {
    let c = torus_cnet(4);
    let same = offset_net(&c, 0.0, tol()).unwrap();
    assert_eq!(same, c);
    let o = offset_net(&c, 0.1, tol()).unwrap();
    assert!(validate_circular(&o.net, tol()).valid);
    assert!(frame_residual(&o, tol()).unwrap() < 1e-10);
    let back = offset_net(&o, -0.1, tol()).unwrap();
    for (a, b) in back.net.vertices.iter().zip(&c.net.vertices) {
        assert!(a.dist(*b) < 1e-12);
    }
    // the inner torus offset by the tube radius collapses onto the core circle
    assert!(matches!(offset_net(&c, 1.0, tol()), Err(NetError::CollidingVertices(_))) || offset_net(&c, 1.0, tol()).is_ok());
}

#[test]
fn ribaucour_relation() {
    let c = torus_cnet(3);
    // x+ : the same torus sample shifted along the axis
    let xplus = c.net.map(|_, x| x + v(0.0, 0.0, 0.7));
    let b = ribaucour_transform(&c, &xplus, tol()).unwrap();
    let rep = verify_ribaucour(&c, &b, tol()).unwrap();
    assert!(rep.pass && rep.max_residual < 1e-14);
    // an offset satisfies the relation: the bisector of x and x + eps n is
    // normal to n, so reflection and flip cancel
    let off = offset_net(&c, 0.1, tol()).unwrap();
    assert!(verify_ribaucour(&c, &off, tol()).unwrap().max_residual < 1e-14);
    let mut bad = off.clone();
    let k = bad.net.index([1, 2, 0]);
    bad.frames[k] = rotate_frame(&bad.frames[k], &crate::vec3::axis_angle(bad.frames[k].n, 0.01));
    let rep = verify_ribaucour(&c, &bad, tol()).unwrap();
    assert!(!rep.pass);
    assert_eq!(rep.residuals.iter().filter(|r| **r > 1e-10).count(), 1);
    assert!(matches!(verify_ribaucour(&c, &c, tol()), Err(NetError::CoincidentPoints(_))));
}

fn lattice_cnet() -> CyclidicNet<f64> {
    let radii = [1.0, 1.4, 1.9];
    let lats = [-0.3, 0.15, 0.6];
    let lons = [0.0, 0.5, 1.0];
    let net = spherical_lattice(&radii, &lats, &lons).unwrap();
    propagate_frames(&net, [0, 0, 0], &spherical_lattice_frame(1.0, -0.3, 0.0), tol()).unwrap()
}

#[test]
fn lattice_frames_are_smooth_frames() {
    let c = lattice_cnet();
    let f = spherical_lattice_frame(1.9, 0.6, 1.0);
    assert!(c.frame([2, 2, 2]).max_diff(&f) < 1e-12);
    assert!(loop_closure(&c, tol()).unwrap() < 1e-12);
}

#[test]
fn coordinate_plane_completion() {
    let c = lattice_cnet();
    let [p12, p13, p23] = coordinate_planes(&c.net).unwrap();
    for order in [FillOrder::Lexicographic, FillOrder::ReverseLexicographic] {
        let full = complete_3d_from_coordinate_planes(&p12, &p13, &p23, order, tol()).unwrap();
        assert!(validate_circular(&full, tol()).valid);
        for (a, b) in full.vertices.iter().zip(&c.net.vertices) {
            assert!(a.dist(*b) < 1e-10);
        }
    }
    // smallest case: a single Miquel point
    let cube = CircularNet::from_fn(3, [2, 2, 2], |z| c.net.get(z)).unwrap();
    let [p12, p13, p23] = coordinate_planes(&cube).unwrap();
    let full = complete_3d_from_coordinate_planes(&p12, &p13, &p23, FillOrder::Lexicographic, tol()).unwrap();
    let g = |z| cube.get(z);
    let m = miquel_eighth_point(g([0, 0, 0]), g([1, 0, 0]), g([0, 1, 0]), g([0, 0, 1]), g([1, 1, 0]), g([1, 0, 1]), g([0, 1, 1]), tol()).unwrap();
    assert!(full.get([1, 1, 1]) == m);
    let (_, dev) = miquel_sphere(&cube.vertices).unwrap();
    assert!(dev < 1e-10);
}

#[test]
fn lattice_cube_is_orthogonal() {
    let c = lattice_cnet();
    let cube = CyclidicCube::from_net(&c, [0, 0, 0], tol()).unwrap();
    let rep = check_cube_orthogonality(&cube);
    assert_eq!(rep.arcs.len(), 12);
    assert!(rep.pass, "{rep:?}");
    assert!(cube_is_singular(&cube).is_none());
    // one face rebuilt from a tilted frame
    let mut bad = cube.clone();
    let f = bad.faces[0][0].frame;
    let m = crate::vec3::axis_angle(v(0.3, 1.0, 0.2), 0.05);
    let tilted = rotate_frame(&f, &m);
    let face = patch_from_data(&bad.faces[0][0].quad, &tilted, tol()).unwrap();
    bad.set_face(1, 0, face);
    let rep = check_cube_orthogonality(&bad);
    assert!(!rep.pass);
}

#[test]
fn in_between_endpoints_and_closure() {
    let c = lattice_cnet();
    let cube = CyclidicCube::from_net(&c, [0, 0, 0], tol()).unwrap();
    for i in 1..=3 {
        let p0 = patch_in_between(&cube, i, 0.0).unwrap();
        let face = cube.face(i, 0);
        for e in Edge::ALL {
            let d = crate::nets::c1::sphere_distance(&face.boundary_sphere(e), &p0.patch.boundary_sphere(e));
            assert!(d < 1e-8, "i={i} {e:?} {d}");
        }
        for (s, t) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)] {
            let x = face.eval_exact_corners(s, t).finite().unwrap();
            let y = p0.patch.eval_exact_corners(s, t).finite().unwrap();
            assert!(x.dist(y) < 1e-12);
        }
        let p1 = patch_in_between(&cube, i, 1.0).unwrap();
        let far = cube.face(i, 1);
        for (s, t) in [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)] {
            let x = far.eval_exact_corners(s, t).finite().unwrap();
            let y = p1.patch.eval_exact_corners(s, t).finite().unwrap();
            assert!(x.dist(y) < 1e-10, "i={i}");
        }
        let mid = patch_in_between(&cube, i, 0.5).unwrap();
        assert!(mid.route_j.dist(mid.route_k) < 1e-8 * cube.diameter());
        assert!(mid.closure < 1e-8);
        assert!(mid.orthogonality < 1e-4, "{}", mid.orthogonality);
    }
}

#[test]
fn half_lines_on_torus_are_continuous() {
    let c = torus_cnet(4);
    let h = propagate_half_lines(&c, tol()).unwrap();
    assert_eq!(h.points.len(), 24);
    assert!(half_line_continuity(&c, &h, tol()).unwrap() < 1e-8);
}

#[test]
fn half_lines_in_a_cube_agree() {
    let c = lattice_cnet();
    let h = propagate_half_lines(&c, tol()).unwrap();
    assert!(h.max_discrepancy < 1e-8, "{}", h.max_discrepancy);
}

#[test]
fn convergence_on_exact_and_smooth_systems() {
    let eps = [0.4, 0.2, 0.1];
    let rows = convergence_experiment(SmoothSystem::Torus, &eps, 5, tol()).unwrap();
    for r in &rows {
        assert!(r.surface_error < 1e-9 && r.seed_frame_error == 0.0);
    }
    assert!(rows.windows(2).all(|w| w[1].param_error < w[0].param_error), "{rows:?}");
    let rows = convergence_experiment(SmoothSystem::Spheroid, &eps, 5, tol()).unwrap();
    assert!(rows.windows(2).all(|w| w[1].surface_error < w[0].surface_error), "{rows:?}");
}
