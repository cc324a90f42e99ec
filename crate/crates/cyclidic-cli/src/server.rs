//! HTTP service over a fixed base scene. Every request is recomputed from
//! the base scene and the request body; nothing is mutated.

use crate::ops::{between, grid_index, rotate_seed, subpatch, OpError, Rotation};
use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response as AxumResponse};
use axum::Router;
use cyclidic::io::SceneDocument;
use serde::Deserialize;
use serde_json::json;
use std::sync::Arc;

pub struct ServerState {
    pub scene: SceneDocument,
    scene_json: String,
}

impl ServerState {
    pub fn new(scene: SceneDocument) -> Self {
        let scene_json = scene.to_json();
        ServerState { scene, scene_json }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Response {
    pub status: u16,
    pub body: String,
}

impl Response {
    fn ok(body: String) -> Self {
        Response { status: 200, body }
    }

    fn error(status: u16, message: &str, residual: Option<f64>) -> Self {
        let body = json!({ "error": message, "residual": residual });
        Response { status, body: serde_json::to_string_pretty(&body).unwrap() }
    }

    fn from_op(e: OpError) -> Self {
        match e {
            OpError::Input(m) => Self::error(400, &m, None),
            OpError::Geometry { message, residual } => Self::error(422, &message, residual),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FrameRequest {
    z0: Option<Vec<usize>>,
    rotation: Rotation,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BetweenRequest {
    cube: Vec<usize>,
    dir: usize,
    s: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubpatchRequest {
    patch: String,
    u0: f64,
    v0: f64,
}

fn parse<'a, T: Deserialize<'a>>(body: &'a [u8]) -> Result<T, Response> {
    serde_json::from_slice(body).map_err(|e| Response::error(400, &format!("invalid request body: {e}"), None))
}

fn pretty<T: serde::Serialize>(v: &T) -> Response {
    Response::ok(serde_json::to_string_pretty(v).expect("response serializes"))
}

/// Routes one request. Pure: the same request always gives the same
/// response.
pub fn handle(state: &ServerState, method: &str, path: &str, body: &[u8]) -> Response {
    let scene = &state.scene;
    let r = match (method, path) {
        ("GET", "/scene") => Ok(Response::ok(state.scene_json.clone())),
        ("GET", "/validate") => match scene.validate() {
            Ok(r) => Ok(pretty(&r)),
            Err(e) => Err(Response::from_op(e.into())),
        },
        ("POST", "/frame") => parse::<FrameRequest>(body).and_then(|req| {
            let z0 = req.z0.map(|z| grid_index(&z, scene.net.m)).transpose().map_err(Response::from_op)?;
            rotate_seed(scene, z0, &req.rotation).map(|s| Response::ok(s.to_json())).map_err(Response::from_op)
        }),
        ("POST", "/between") => parse::<BetweenRequest>(body).and_then(|req| {
            if scene.net.m != 3 {
                return Err(Response::error(422, "in-between patches need a three-dimensional net", None));
            }
            let cube = grid_index(&req.cube, 3).map_err(Response::from_op)?;
            between(scene, cube, req.dir, req.s).map(|b| pretty(&b)).map_err(Response::from_op)
        }),
        ("POST", "/subpatch") => parse::<SubpatchRequest>(body).and_then(|req| {
            subpatch(scene, &req.patch, req.u0, req.v0).map(|m| pretty(&m)).map_err(Response::from_op)
        }),
        (_, "/scene" | "/validate" | "/frame" | "/between" | "/subpatch") => {
            Err(Response::error(405, &format!("{method} not allowed on {path}"), None))
        }
        _ => Err(Response::error(404, &format!("no endpoint {path}"), None)),
    };
    r.unwrap_or_else(|e| e)
}

async fn dispatch(State(state): State<Arc<ServerState>>, method: Method, uri: Uri, body: Bytes) -> AxumResponse {
    let path = uri.path().to_string();
    let r = tokio::task::spawn_blocking(move || handle(&state, method.as_str(), &path, &body))
        .await
        .unwrap_or_else(|e| Response::error(500, &e.to_string(), None));
    let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, "application/json")], r.body).into_response()
}

pub fn router(state: Arc<ServerState>) -> Router {
    Router::new().fallback(dispatch).with_state(state)
}

pub async fn serve(listener: tokio::net::TcpListener, scene: SceneDocument) -> std::io::Result<()> {
    axum::serve(listener, router(Arc::new(ServerState::new(scene)))).await
}

pub fn serve_blocking(scene: SceneDocument, port: u16) -> std::io::Result<()> {
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
        println!("listening on http://{}", listener.local_addr()?);
        serve(listener, scene).await
    })
}
