// Starts the JSON API on a local port and walks one session through it
// with plain HTTP/1.1 requests.
//
//     cargo run --example http_service

use std::future::IntoFuture;
use std::sync::Arc;

use serde_json::{json, Value};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};

use pairwise::http::router;
use pairwise::service::Service;

async fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: Option<Value>) -> anyhow::Result<Value> {
    let body = body.map(|b| b.to_string()).unwrap_or_default();
    let mut stream = TcpStream::connect(addr).await?;
    let head = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
        body.len()
    );
    stream.write_all(head.as_bytes()).await?;
    stream.write_all(body.as_bytes()).await?;
    let mut raw = String::new();
    stream.read_to_string(&mut raw).await?;
    let (status, payload) = raw.split_once("\r\n\r\n").unwrap_or((&raw, ""));
    println!("{method} {path} -> {}", status.lines().next().unwrap_or(""));
    Ok(serde_json::from_str(payload).unwrap_or(Value::Null))
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    let listener = TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    let server = tokio::spawn(axum::serve(listener, router(Arc::new(Service::in_memory()))).into_future());

    let study = request(addr, "POST", "/studies", Some(json!({"labels": ["tea", "coffee", "water"], "scale": "three:3,9"}))).await?;
    let study_id = study["study_id"].as_str().unwrap().to_string();
    let session = request(addr, "POST", &format!("/studies/{study_id}/sessions"), Some(json!({"expert": "bo"}))).await?;
    let sid = session["session_id"].as_str().unwrap().to_string();

    let answers = [(1, 1), (3, 1), (1, 1)];
    for (n, d) in answers {
        let next = request(addr, "GET", &format!("/sessions/{sid}/next"), None).await?;
        println!("  pair ({}, {}): {} vs {}", next["i"], next["j"], next["label_i"], next["label_j"]);
        let out = request(addr, "POST", &format!("/sessions/{sid}/judgments"), Some(json!({"value_num": n, "value_den": d}))).await?;
        if out["status"] == "conflict" {
            println!("  conflict: {}", out["triads"][0]["text"]);
            let fix = json!({"i": out["pair"][0], "j": out["pair"][1], "value_num": 3, "value_den": 1});
            let out = request(addr, "POST", &format!("/sessions/{sid}/revisions"), Some(fix)).await?;
            println!("  revision: {}", out["status"]);
        }
    }
    let results = request(addr, "GET", &format!("/sessions/{sid}/results"), None).await?;
    println!("  weights {} CR {}", results["w_approx"], results["cr"]);
    let agg = request(addr, "GET", &format!("/studies/{study_id}/aggregate?level=0.95"), None).await?;
    println!("  aggregate over k={}: {}", agg["k"], agg["mean_w"]);
    server.abort();
    Ok(())
}
