use crate::ops::{between, grid_index};
use crate::CliError;
use clap::{Parser, Subcommand, ValueEnum};
use cyclidic::io::{
    build_scene, export_obj, import_scene_json, read_cnet, read_net, write_cnet, write_net, SceneOptions,
};
use cyclidic::nets::generators::{coordinate_planes, random_circular_net_3d, rotational_net, sphere_grid, spherical_lattice, torus_net};
use cyclidic::nets::{complete_3d_from_coordinate_planes, propagate_frames, FillOrder, Idx};
use cyclidic::{CircularNet, Frame, Tol, Vector3};
use rand::SeedableRng;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "cyclidic", version, about = "Build, validate and export cyclidic nets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Rotational,
    SphereGrid,
    TorusSample,
    #[value(name = "miquel-3d")]
    Miquel3d,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a circular net.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 4)]
        nx: usize,
        #[arg(long, default_value_t = 4)]
        ny: usize,
        #[arg(long, default_value_t = 3)]
        nz: usize,
        /// Comma separated `key=value` pairs, see the README for the keys.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Propagate a seed frame over a net.
    Frames {
        #[arg(long)]
        net: PathBuf,
        /// `z0=(i,j[,k]);t1=(x,y,z);t2=(x,y,z)[;t3=(x,y,z)]`; without `t1`
        /// and `t2` the frame is fitted to the edges at `z0`.
        #[arg(long)]
        seed: String,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Build patches, meshes and the validation report of a cyclidic net.
    Build {
        #[arg(long)]
        cnet: PathBuf,
        #[arg(long)]
        half_lines: bool,
        #[arg(long, default_value_t = 8)]
        res: usize,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Sample all patches of a scene and write them as OBJ.
    Sample {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 16)]
        res: usize,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Run every invariant suite on a scene.
    Validate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Patch in between two opposite faces of a cube.
    Between {
        #[arg(long)]
        scene: PathBuf,
        /// Base vertex `i,j,k` of the cube.
        #[arg(long)]
        cube: String,
        #[arg(long)]
        dir: usize,
        #[arg(long)]
        s: f64,
        #[arg(short, long)]
        o: PathBuf,
    },
    /// Serve a scene over HTTP.
    Serve {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// `key=value` pairs; unknown keys are rejected.
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn parse(s: &str, allowed: &[&str]) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("parameter `{item}` is not key=value")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(usage(format!("unknown parameter `{k}` (expected one of {})", allowed.join(", "))));
            }
            let v: f64 = v.trim().parse().map_err(|_| usage(format!("parameter `{k}` is not a number")))?;
            map.insert(k.to_string(), v);
        }
        Ok(Params(map))
    }

    fn get(&self, k: &str, default: f64) -> f64 {
        self.0.get(k).copied().unwrap_or(default)
    }
}

fn steps(a: f64, d: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + d * k as f64).collect()
}

pub fn generate(kind: Kind, nx: usize, ny: usize, nz: usize, params: &str) -> Result<CircularNet<f64>, CliError> {
    let net = match kind {
        Kind::TorusSample => {
            let p = Params::parse(params, &["R", "r", "u0", "v0", "du", "dv"])?;
            torus_net(p.get("R", 2.0), p.get("r", 1.0), p.get("u0", 0.1), p.get("v0", 0.2), p.get("du", 0.4), p.get("dv", 0.3), nx, ny)
        }
        Kind::SphereGrid => {
            let p = Params::parse(params, &["lon0", "dlon", "lat0", "dlat"])?;
            sphere_grid(p.get("lon0", 0.0), p.get("dlon", 0.3), p.get("lat0", -0.4), p.get("dlat", 0.25), nx, ny)
        }
        Kind::Rotational => {
            // meridian ellipse (c + a cos v, b sin v), rotated in steps
            let p = Params::parse(params, &["c", "a", "b", "v0", "dv", "step"])?;
            let (c, a, b) = (p.get("c", 2.0), p.get("a", 1.0), p.get("b", 1.6));
            let profile: Vec<(f64, f64)> =
                steps(p.get("v0", -0.6), p.get("dv", 0.3), nx).into_iter().map(|v| (c + a * v.cos(), b * v.sin())).collect();
            rotational_net(&profile, ny, p.get("step", 0.35))
        }
        Kind::Miquel3d => {
            let p = Params::parse(params, &["seed", "r0", "dr", "lat0", "dlat", "lon0", "dlon"])?;
            if let Some(&seed) = p.0.get("seed") {
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed as u64);
                random_circular_net_3d(&mut rng, [nx, ny, nz], Tol::default())
            } else {
                // coordinate planes of a spherical lattice, interior by Miquel completion
                let lattice = spherical_lattice(
                    &steps(p.get("r0", 2.0), p.get("dr", 0.4), nx),
                    &steps(p.get("lat0", -0.3), p.get("dlat", 0.25), ny),
                    &steps(p.get("lon0", 0.0), p.get("dlon", 0.3), nz),
                )?;
                let [p12, p13, p23] = coordinate_planes(&lattice)?;
                complete_3d_from_coordinate_planes(&p12, &p13, &p23, FillOrder::Lexicographic, Tol::default())
            }
        }
    };
    Ok(net?)
}

fn parse_tuple<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    inner
        .split(',')
        .map(|t| t.trim().parse::<T>().map_err(|_| usage(format!("cannot parse {what} `{s}`"))))
        .collect()
}

fn parse_vec(s: &str, what: &str) -> Result<Vector3, CliError> {
    let v: Vec<f64> = parse_tuple(s, what)?;
    match v[..] {
        [x, y, z] => Ok(Vector3::new(x, y, z)),
        _ => Err(usage(format!("{what} needs three components"))),
    }
}

/// Parsed `--seed`: grid index and optional vectors.
#[derive(Debug, PartialEq)]
pub struct Seed {
    pub z0: Vec<usize>,
    pub vecs: Option<(Vector3, Vector3, Option<Vector3>)>,
}

pub fn parse_seed(s: &str) -> Result<Seed, CliError> {
    let mut fields = BTreeMap::new();
    for part in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| usage(format!("seed field `{part}` is not key=value")))?;
        if !["z0", "t1", "t2", "t3"].contains(&k.trim()) {
            return Err(usage(format!("unknown seed field `{}`", k.trim())));
        }
        fields.insert(k.trim().to_string(), v.trim().to_string());
    }
    let z0 = parse_tuple(fields.get("z0").ok_or_else(|| usage("seed needs z0"))?, "z0")?;
    let vecs = match (fields.get("t1"), fields.get("t2")) {
        (Some(a), Some(b)) => {
            let t3 = fields.get("t3").map(|c| parse_vec(c, "t3")).transpose()?;
            Some((parse_vec(a, "t1")?, parse_vec(b, "t2")?, t3))
        }
        (None, None) if !fields.contains_key("t3") => None,
        _ => return Err(usage("seed needs both t1 and t2")),
    };
    Ok(Seed { z0, vecs })
}

/// Orthonormal frame through Gram-Schmidt; the input must already be
/// orthonormal up to 1e-9.
pub fn seed_frame(x: Vector3, t1: Vector3, t2: Vector3, t3: Option<Vector3>) -> Result<Frame, CliError> {
    let n = t3.unwrap_or(t1.cross(t2));
    let g = Frame::new(x, t1, t2, n).gram_residual();
    if !(g <= 1e-9) {
        return Err(usage(format!("seed frame is not orthonormal: Gram matrix deviates from the identity by {g:.3e} (limit 1e-9)")));
    }
    Ok(orthonormalize(x, t1, t2, n))
}

fn orthonormalize(x: Vector3, t1: Vector3, t2: Vector3, n: Vector3) -> Frame {
    let a = t1 / t1.norm();
    let b = t2 - a * a.dot(t2);
    let b = b / b.norm();
    let c = n - a * a.dot(n) - b * b.dot(n);
    Frame::new(x, a, b, c / c.norm())
}

/// Frame from the lattice edges at `z`, oriented along increasing indices.
pub fn edge_frame(net: &CircularNet<f64>, z: Idx) -> Result<Frame, CliError> {
    let x = net.get(z);
    let edge = |d: usize| match (net.step(z, d, true), net.step(z, d, false)) {
        (Some(w), _) => Ok(net.get(w) - x),
        (None, Some(w)) => Ok(x - net.get(w)),
        _ => Err(usage(format!("no edge in direction {d} at {z:?}"))),
    };
    let (e1, e2) = (edge(1)?, edge(2)?);
    let e3 = if net.m == 3 { edge(3)? } else { e1.cross(e2) };
    let f = orthonormalize(x, e1, e2, e3);
    if !(f.gram_residual() <= 1e-12) {
        return Err(usage(format!("edges at {z:?} are degenerate")));
    }
    Ok(f)
}

pub fn frames(net_text: &str, seed: &str) -> Result<String, CliError> {
    let net = read_net(net_text)?;
    let s = parse_seed(seed)?;
    let z0 = grid_index(&s.z0, net.m).map_err(|e| usage(e.to_string()))?;
    if !net.contains(z0) {
        return Err(usage(format!("z0 {z0:?} outside the net")));
    }
    let b0 = match s.vecs {
        Some((t1, t2, t3)) => {
            if net.m == 2 && t3.is_some() {
                return Err(usage("t3 is only allowed for three-dimensional nets"));
            }
            seed_frame(net.get(z0), t1, t2, t3)?
        }
        None => edge_frame(&net, z0)?,
    };
    Ok(write_cnet(&propagate_frames(&net, z0, &b0, Tol::default())?))
}

fn parse_cube(s: &str) -> Result<Idx, CliError> {
    let v: Vec<usize> = parse_tuple(s, "cube")?;
    grid_index(&v, 3).map_err(|e| usage(e.to_string()))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { kind, nx, ny, nz, params, o } => write(&o, &write_net(&generate(kind, nx, ny, nz, &params)?)),
        Command::Frames { net, seed, o } => write(&o, &frames(&read(&net)?, &seed)?),
        Command::Build { cnet, half_lines, res, o } => {
            let c = read_cnet(&read(&cnet)?)?;
            let doc = build_scene(&c, SceneOptions { half_lines, res })?;
            write(&o, &doc.to_json())
        }
        Command::Sample { scene, res, o } => {
            let doc = import_scene_json(&scene)?;
            Ok(export_obj(&doc.sample(res)?, &o)?)
        }
        Command::Validate { scene, report } => {
            let doc = import_scene_json(&scene)?;
            let r = doc.validate()?;
            print!("{}", r.table());
            if let Some(path) = report {
                write(&path, &serde_json::to_string_pretty(&r).expect("report serializes"))?;
            }
            if r.pass {
                Ok(())
            } else {
                Err(CliError::Validation)
            }
        }
        Command::Between { scene, cube, dir, s, o } => {
            let doc = import_scene_json(&scene)?;
            let b = between(&doc, parse_cube(&cube)?, dir, s).map_err(|e| usage(e.to_string()))?;
            write(&o, &serde_json::to_string_pretty(&b).expect("patch serializes"))
        }
        Command::Serve { scene, port } => {
            let doc = import_scene_json(&scene)?;
            crate::server::serve_blocking(doc, port).map_err(|e| usage(e.to_string()))
        }
    }
}
