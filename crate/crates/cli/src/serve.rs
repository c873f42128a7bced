//! HTTP API behind the human matching interface. Sessions walk the trials
//! file in order; answers go to the shared results log. Nothing here reads
//! the truths file, so no response can leak which candidate is right.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Component, Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Instant;

use procsim::matchkit::{append_answers, Answer, Evaluator, Mode, TrialSet, CANDIDATES};
use serde_json::{json, Value};
use tiny_http::{Header, Method, Request, Response, Server};

use crate::error::CliError;
use crate::harness::{load_trials, ImageStore};

const WORKERS: usize = 4;

pub struct ServeOptions {
    pub trials: PathBuf,
    pub manifest: PathBuf,
    pub results: PathBuf,
    pub bind: String,
    pub port: u16,
    /// Directory of UI assets served under `/`.
    pub static_dir: Option<PathBuf>,
}

struct Session {
    mode: Mode,
    /// Indices into the trial list, in presentation order.
    order: Vec<usize>,
    answered: HashMap<String, usize>,
    served_at: HashMap<String, Instant>,
    started: Instant,
}

struct State {
    trials: TrialSet,
    store: ImageStore,
    results: PathBuf,
    static_dir: Option<PathBuf>,
    sessions: Mutex<(u64, HashMap<String, Session>)>,
    images: Mutex<HashMap<(String, Mode), Arc<Vec<u8>>>>,
}

type Reply = Response<std::io::Cursor<Vec<u8>>>;

fn json_reply(status: u16, body: Value) -> Reply {
    Response::from_string(body.to_string())
        .with_status_code(status)
        .with_header(Header::from_bytes("Content-Type", "application/json").expect("static header"))
}

fn error_reply(status: u16, error: &str, detail: impl Into<String>) -> Reply {
    json_reply(status, json!({ "error": error, "detail": detail.into() }))
}

fn query_param<'a>(query: &'a str, key: &str) -> Option<&'a str> {
    query
        .split('&')
        .filter_map(|kv| kv.split_once('='))
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v)
}

fn image_url(id: &str, mode: Mode) -> String {
    match mode {
        Mode::Color => format!("/img/{id}.png"),
        Mode::Gray => format!("/img/{id}.png?mode=gray"),
    }
}

impl State {
    fn new_session(&self, query: &str) -> Reply {
        let mode = match query_param(query, "mode").unwrap_or("color").parse::<Mode>() {
            Ok(m) => m,
            Err(e) => return error_reply(400, "BadRequest", e),
        };
        let total = match query_param(query, "n").map(str::parse::<usize>) {
            None => self.trials.trials.len(),
            Some(Ok(n)) => n.min(self.trials.trials.len()),
            Some(Err(_)) => return error_reply(400, "BadRequest", "n must be a non-negative integer"),
        };
        let mut guard = self.sessions.lock().expect("session lock");
        guard.0 += 1;
        let id = format!("s{}", guard.0);
        guard.1.insert(
            id.clone(),
            Session {
                mode,
                order: (0..total).collect(),
                answered: HashMap::new(),
                served_at: HashMap::new(),
                started: Instant::now(),
            },
        );
        json_reply(200, json!({ "session_id": id, "total": total }))
    }

    fn next(&self, sid: &str) -> Reply {
        let mut guard = self.sessions.lock().expect("session lock");
        let Some(s) = guard.1.get_mut(sid) else {
            return error_reply(404, "SessionExpired", format!("no session `{sid}`"));
        };
        let pending = s
            .order
            .iter()
            .map(|&i| &self.trials.trials[i])
            .find(|t| !s.answered.contains_key(&t.id));
        match pending {
            None => json_reply(200, json!({ "done": true })),
            Some(t) => {
                s.served_at.entry(t.id.clone()).or_insert_with(Instant::now);
                json_reply(
                    200,
                    json!({
                        "trial_id": t.id,
                        "mode": s.mode,
                        "reference": image_url(&t.reference, s.mode),
                        "candidates": t.candidates.iter().map(|c| image_url(c, s.mode)).collect::<Vec<_>>(),
                        "answered": s.answered.len(),
                        "total": s.order.len(),
                    }),
                )
            }
        }
    }

    fn answer(&self, sid: &str, body: &str) -> Result<Reply, CliError> {
        let parsed: Value = match serde_json::from_str(body) {
            Ok(v) => v,
            Err(e) => return Ok(error_reply(400, "BadRequest", e.to_string())),
        };
        let Some(trial_id) = parsed.get("trial_id").and_then(Value::as_str) else {
            return Ok(error_reply(400, "BadRequest", "trial_id must be a string"));
        };
        let choice = match parsed.get("choice").and_then(Value::as_i64) {
            Some(c) if (0..CANDIDATES as i64).contains(&c) => c as usize,
            _ => return Ok(error_reply(400, "OutOfRange", format!("choice must be an integer in 0..{CANDIDATES}"))),
        };
        let mut guard = self.sessions.lock().expect("session lock");
        let Some(s) = guard.1.get_mut(sid) else {
            return Ok(error_reply(404, "SessionExpired", format!("no session `{sid}`")));
        };
        if !s.order.iter().any(|&i| self.trials.trials[i].id == trial_id) {
            return Ok(error_reply(404, "UnknownTrial", format!("trial `{trial_id}` is not in this session")));
        }
        if s.answered.contains_key(trial_id) {
            return Ok(error_reply(409, "AlreadyAnswered", format!("trial `{trial_id}` was already answered")));
        }
        let since = s.served_at.get(trial_id).copied().unwrap_or(s.started);
        let answer = Answer {
            trial_id: trial_id.to_string(),
            evaluator: Evaluator::Human,
            mode: s.mode,
            choice,
            latency_ms: since.elapsed().as_millis() as u64,
            session: Some(sid.to_string()),
        };
        // appended while holding the session lock: one writer at a time
        append_answers(&self.results, &[answer]).map_err(|e| CliError::Unwritable(e.to_string()))?;
        s.answered.insert(trial_id.to_string(), choice);
        Ok(json_reply(
            200,
            json!({ "ok": true, "answered": s.answered.len(), "total": s.order.len() }),
        ))
    }

    fn summary(&self, sid: &str) -> Reply {
        let guard = self.sessions.lock().expect("session lock");
        match guard.1.get(sid) {
            None => error_reply(404, "SessionExpired", format!("no session `{sid}`")),
            Some(s) => json_reply(
                200,
                json!({
                    "session_id": sid,
                    "answered": s.answered.len(),
                    "total": s.order.len(),
                    "done": s.answered.len() == s.order.len(),
                }),
            ),
        }
    }

    fn image(&self, id: &str, query: &str) -> Reply {
        let mode = match query_param(query, "mode").unwrap_or("color").parse::<Mode>() {
            Ok(m) => m,
            Err(e) => return error_reply(400, "BadRequest", e),
        };
        if !self.store.contains(id) {
            return error_reply(404, "NotFound", format!("no image `{id}`"));
        }
        let key = (id.to_string(), mode);
        let cached = self.images.lock().expect("image lock").get(&key).cloned();
        let bytes = match cached {
            Some(b) => b,
            None => {
                let encoded = self
                    .store
                    .load_presented(id, mode)
                    .and_then(|img| img.encode_png().map_err(|e| CliError::Other(e.to_string())));
                match encoded {
                    Ok(b) => {
                        let b = Arc::new(b);
                        self.images.lock().expect("image lock").insert(key, b.clone());
                        b
                    }
                    Err(e) => return error_reply(500, "ImageError", e.to_string()),
                }
            }
        };
        Response::from_data(bytes.as_slice().to_vec())
            .with_header(Header::from_bytes("Content-Type", "image/png").expect("static header"))
    }

    fn static_file(&self, path: &str) -> Reply {
        let Some(dir) = &self.static_dir else {
            if path == "/" {
                return Response::from_string("matcher API: see /api/session/new\n");
            }
            return error_reply(404, "NotFound", path);
        };
        let rel = Path::new(path.trim_start_matches('/'));
        if rel.components().any(|c| !matches!(c, Component::Normal(_))) && !rel.as_os_str().is_empty() {
            return error_reply(404, "NotFound", path);
        }
        let mut full = dir.join(rel);
        if full.is_dir() {
            full = full.join("index.html");
        }
        match std::fs::read(&full) {
            Ok(bytes) => {
                let ctype = match full.extension().and_then(|e| e.to_str()) {
                    Some("html") => "text/html; charset=utf-8",
                    Some("js") => "text/javascript",
                    Some("css") => "text/css",
                    Some("png") => "image/png",
                    Some("svg") => "image/svg+xml",
                    _ => "application/octet-stream",
                };
                Response::from_data(bytes).with_header(Header::from_bytes("Content-Type", ctype).expect("static header"))
            }
            Err(_) => error_reply(404, "NotFound", path),
        }
    }

    fn handle(&self, req: &mut Request) -> Reply {
        let url = req.url().to_string();
        let (path, query) = url.split_once('?').unwrap_or((&url, ""));
        let parts: Vec<&str> = path.trim_matches('/').split('/').collect();
        match (req.method(), parts.as_slice()) {
            (Method::Get, ["api", "session", "new"]) => self.new_session(query),
            (Method::Get, ["api", "session", sid, "next"]) => self.next(sid),
            (Method::Get, ["api", "session", sid, "summary"]) => self.summary(sid),
            (Method::Post, ["api", "session", sid, "answer"]) => {
                let sid = sid.to_string();
                let mut body = String::new();
                if req.as_reader().read_to_string(&mut body).is_err() {
                    return error_reply(400, "BadRequest", "unreadable body");
                }
                self.answer(&sid, &body)
                    .unwrap_or_else(|e| error_reply(500, "LogError", e.to_string()))
            }
            (Method::Get, ["img", file]) if file.ends_with(".png") => self.image(&file[..file.len() - 4], query),
            (Method::Get, _) if parts.first() != Some(&"api") => self.static_file(path),
            _ => error_reply(404, "NotFound", path),
        }
    }
}

/// Binds, prints `listening on http://ADDR`, and serves until killed.
pub fn serve(opts: &ServeOptions) -> Result<(), CliError> {
    let trials = load_trials(&opts.trials)?;
    let store = ImageStore::open(&opts.manifest)?;
    for t in &trials.trials {
        for id in std::iter::once(&t.reference).chain(&t.candidates) {
            if !store.contains(id) {
                return Err(CliError::MalformedInput(format!("trial {} names unknown image `{id}`", t.id)));
            }
        }
    }
    let server = Server::http((opts.bind.as_str(), opts.port)).map_err(|e| {
        match e.downcast_ref::<std::io::Error>().map(std::io::Error::kind) {
            Some(std::io::ErrorKind::AddrInUse) => CliError::PortBusy(format!("port {} is busy: {e}", opts.port)),
            _ => CliError::Other(format!("cannot bind {}:{}: {e}", opts.bind, opts.port)),
        }
    })?;
    let addr = server
        .server_addr()
        .to_ip()
        .map(|a| a.to_string())
        .unwrap_or_else(|| format!("{}:{}", opts.bind, opts.port));
    println!("listening on http://{addr}");
    std::io::stdout().flush().ok();

    let state = Arc::new(State {
        trials,
        store,
        results: opts.results.clone(),
        static_dir: opts.static_dir.clone(),
        sessions: Mutex::new((0, HashMap::new())),
        images: Mutex::new(HashMap::new()),
    });
    let server = Arc::new(server);
    let workers: Vec<_> = (0..WORKERS)
        .map(|_| {
            let (server, state) = (server.clone(), state.clone());
            thread::spawn(move || {
                for mut req in server.incoming_requests() {
                    let reply = state.handle(&mut req);
                    let _ = req.respond(reply);
                }
            })
        })
        .collect();
    for w in workers {
        let _ = w.join();
    }
    Ok(())
}
