#![allow(dead_code)]

use cyclidic::io::{build_scene, SceneDocument, SceneOptions};
use cyclidic::nets::generators::{coordinate_planes, spherical_lattice, torus_frame, torus_net};
use cyclidic::nets::{complete_3d_from_coordinate_planes, propagate_frames, FillOrder};
use cyclidic::Tol;
use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};

pub fn torus_scene() -> SceneDocument {
    let net = torus_net(2.0, 1.0, 0.1, 0.2, 0.4, 0.3, 3, 3).unwrap();
    let c = propagate_frames(&net, [0, 0, 0], &torus_frame(2.0, 1.0, 0.1, 0.2), Tol::default()).unwrap();
    build_scene(&c, SceneOptions { half_lines: false, res: 4 }).unwrap()
}

pub fn lattice_scene() -> SceneDocument {
    let l = spherical_lattice(&[2.0, 2.4, 2.8], &[-0.3, -0.05, 0.2], &[0.0, 0.3, 0.6]).unwrap();
    let [a, b, c] = coordinate_planes(&l).unwrap();
    let net = complete_3d_from_coordinate_planes(&a, &b, &c, FillOrder::Lexicographic, Tol::default()).unwrap();
    let f = cyclidic_cli::cli::edge_frame(&net, [0, 0, 0]).unwrap();
    let c = propagate_frames(&net, [0, 0, 0], &f, Tol::default()).unwrap();
    build_scene(&c, SceneOptions { half_lines: true, res: 4 }).unwrap()
}

/// Starts the service on an ephemeral port in a background thread.
pub fn spawn_server(scene: SceneDocument) -> SocketAddr {
    let std_listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    std_listener.set_nonblocking(true).unwrap();
    let addr = std_listener.local_addr().unwrap();
    std::thread::spawn(move || {
        let rt = tokio::runtime::Runtime::new().unwrap();
        rt.block_on(async move {
            let listener = tokio::net::TcpListener::from_std(std_listener).unwrap();
            cyclidic_cli::server::serve(listener, scene).await.unwrap();
        });
    });
    addr
}

/// Minimal HTTP/1.1 client: returns status and body.
pub fn request(addr: SocketAddr, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut s = TcpStream::connect(addr).unwrap();
    write!(
        s,
        "{method} {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\nContent-Type: application/json\r\nContent-Length: {}\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut raw = Vec::new();
    s.read_to_end(&mut raw).unwrap();
    let text = String::from_utf8(raw).unwrap();
    let (head, rest) = text.split_once("\r\n\r\n").unwrap();
    let status = head.split_whitespace().nth(1).unwrap().parse().unwrap();
    let chunked = head.to_ascii_lowercase().contains("transfer-encoding: chunked");
    let body = if chunked { dechunk(rest) } else { rest.to_string() };
    (status, body)
}

fn dechunk(mut s: &str) -> String {
    let mut out = String::new();
    loop {
        let (len, rest) = s.split_once("\r\n").unwrap();
        let n = usize::from_str_radix(len.trim(), 16).unwrap();
        if n == 0 {
            return out;
        }
        out.push_str(&rest[..n]);
        s = &rest[n + 2..];
    }
}
