//! A scripted judge server for protocol tests.
#![allow(dead_code)]

use std::net::TcpListener;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use tiny_http::{Header, Response, Server};

#[derive(Debug, Clone)]
pub enum Script {
    /// Replies with this body to every request.
    Always(String),
    /// Holds the first `stalls` requests for `delay_ms` before answering,
    /// then replies with `body` immediately.
    StallFirst { stalls: usize, delay_ms: u64, body: String },
}

pub struct StubJudge {
    pub url: String,
    hits: Arc<AtomicUsize>,
    bodies: Arc<Mutex<Vec<String>>>,
    server: Arc<Server>,
    worker: Option<thread::JoinHandle<()>>,
}

pub fn choice(c: i64) -> String {
    format!("{{\"choice\":{c}}}")
}

impl StubJudge {
    pub fn start(script: Script) -> Self {
        let server = Arc::new(Server::http("127.0.0.1:0").expect("bind stub judge"));
        let url = format!("http://{}/judge", server.server_addr().to_ip().expect("tcp address"));
        let hits = Arc::new(AtomicUsize::new(0));
        let bodies = Arc::new(Mutex::new(Vec::new()));
        let worker = {
            let (server, hits, bodies) = (server.clone(), hits.clone(), bodies.clone());
            thread::spawn(move || {
                for mut req in server.incoming_requests() {
                    let n = hits.fetch_add(1, Ordering::SeqCst);
                    let mut body = String::new();
                    let _ = req.as_reader().read_to_string(&mut body);
                    bodies.lock().unwrap().push(body);
                    let script = script.clone();
                    // answer on a side thread so a stalled reply does not block the next request
                    thread::spawn(move || {
                        let reply = match script {
                            Script::Always(b) => b,
                            Script::StallFirst { stalls, delay_ms, body } => {
                                if n < stalls {
                                    thread::sleep(Duration::from_millis(delay_ms));
                                }
                                body
                            }
                        };
                        let header = Header::from_bytes("Content-Type", "application/json").unwrap();
                        let _ = req.respond(Response::from_string(reply).with_header(header));
                    });
                }
            })
        };
        Self {
            url,
            hits,
            bodies,
            server,
            worker: Some(worker),
        }
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }

    pub fn bodies(&self) -> Vec<String> {
        self.bodies.lock().unwrap().clone()
    }
}

impl Drop for StubJudge {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}

/// A loopback URL with nothing listening on it.
pub fn dead_url() -> String {
    let l = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = l.local_addr().unwrap();
    drop(l);
    format!("http://{addr}/judge")
}
