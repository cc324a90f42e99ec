//! Values checked against independent computations.

use cyclidic::cyclide::patch_from_data;
use cyclidic::lie::{concircular, Point};
use cyclidic::nets::generators::{sphere_grid, torus_frame, torus_net, torus_point};
use cyclidic::nets::{patches_of_net, propagate_frames};
use cyclidic::{Frame, Quad, Tol, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(x: f64, y: f64, z: f64) -> Vector3 {
    Vector3::new(x, y, z)
}

fn torus_patch() -> cyclidic::Patch {
    let q = Quad::new(v(3.0, 0.0, 0.0), v(0.0, 3.0, 0.0), v(0.0, 2.0, 1.0), v(2.0, 0.0, 1.0));
    let b = Frame::new(v(3.0, 0.0, 0.0), v(0.0, 1.0, 0.0), v(0.0, 0.0, 1.0), v(1.0, 0.0, 0.0));
    patch_from_data(&q, &b, Tol::default()).unwrap()
}

#[test]
fn torus_quarter_patch_center() {
    let x = torus_patch().eval(0.5, 0.5).finite().unwrap();
    // rho = 2 + cos(pi/4) at azimuth pi/4, height sin(pi/4)
    let want = torus_point(2.0, 1.0, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4);
    assert!(x.dist(want) < 1e-12);
    assert!(x.dist(v(1.91421, 1.91421, 0.70711)) < 1e-5);
}

#[test]
fn torus_quarter_patch_on_implicit_torus() {
    let p = torus_patch();
    for i in 0..16 {
        for j in 0..16 {
            let x = p.eval(i as f64 / 15.0, j as f64 / 15.0).finite().unwrap();
            let r = (x.x.hypot(x.y) - 2.0).powi(2) + x.z * x.z - 1.0;
            assert!(r.abs() <= 1e-8, "({i}, {j}): {r}");
        }
    }
}

#[test]
fn sampled_torus_patches_stay_on_torus() {
    let net = torus_net(3.0, 1.2, -0.3, 0.4, 0.5, 0.45, 4, 3).unwrap();
    let c = propagate_frames(&net, [1, 1, 0], &torus_frame(3.0, 1.2, 0.2, 0.85), Tol::default()).unwrap();
    for p in patches_of_net(&c, None, Tol::default()).patches.values() {
        let p = p.as_ref().unwrap();
        for i in 0..=6 {
            for j in 0..=6 {
                let x = p.eval(i as f64 / 6.0, j as f64 / 6.0).finite().unwrap();
                let r = (x.x.hypot(x.y) - 3.0).powi(2) + x.z * x.z - 1.44;
                assert!(r.abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn sphere_grid_patches_stay_on_sphere() {
    let net = sphere_grid(0.0, 0.4, -0.5, 0.3, 4, 4).unwrap();
    let x0 = net.get([0, 0, 0]);
    let (t1, t2) = (v(-x0.y, x0.x, 0.0).normalized().unwrap(), v(0.0, 0.0, 1.0));
    let t2 = (t2 - x0 * x0.dot(t2)).normalized().unwrap();
    let c = propagate_frames(&net, [0, 0, 0], &Frame::from_tangents(x0, t1, t2), Tol::default()).unwrap();
    for p in patches_of_net(&c, None, Tol::default()).patches.values() {
        let p = p.as_ref().unwrap();
        assert!(p.is_spherical());
        for i in 0..=5 {
            for j in 0..=5 {
                let x = p.eval(i as f64 / 5.0, j as f64 / 5.0).finite().unwrap();
                assert!((x.norm() - 1.0).abs() <= 1e-9);
            }
        }
    }
}

/// Circumcircle of three points, then the distance of the fourth.
fn brute_force_concircular(p: [Vector3; 4]) -> bool {
    let (a, b) = (p[1] - p[0], p[2] - p[0]);
    let n = a.cross(b);
    let center = p[0] + (b * a.norm2() - a * b.norm2()).cross(n) / (2.0 * n.norm2());
    let r = center.dist(p[0]);
    let d = p[3] - center;
    let off_plane = d.dot(n).abs() / n.norm();
    off_plane <= 1e-9 * r && (d.norm() - r).abs() <= 1e-9 * r
}

#[test]
fn concircularity_agrees_with_circumcircle_fit() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..1000 {
        let c = v(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let r = rng.gen_range(0.3..3.0);
        let u = v(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)).normalized().unwrap();
        let w = u.any_orthogonal();
        let on = |t: f64| c + (u * t.cos() + w.cross(u) * t.sin()) * r;
        let mut p = [on(0.3), on(1.7), on(3.1), on(rng.gen_range(3.5..6.0))];
        if k % 2 == 1 {
            p[3] += v(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 1e-3 * r;
        }
        let got = concircular(p.map(Point::Finite), Tol::default()).unwrap();
        assert_eq!(got, brute_force_concircular(p), "case {k}");
        assert_eq!(got, k % 2 == 0);
    }
}
