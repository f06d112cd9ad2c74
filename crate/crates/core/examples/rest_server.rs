//! Serves a loaded corpus over HTTP on a free port, fetches one view and
//! shuts down. Pass a port to keep serving instead.

use std::io::{Read, Write};
use std::net::SocketAddr;
use std::sync::Arc;

use swarm_debugging::service::{router, serve, AppState};
use swarm_debugging::fixtures;

#[tokio::main]
async fn main() -> swarm_debugging::Result<()> {
    let store = Arc::new(fixtures::two_task_gv().load()?);
    let state = AppState { store, project_root: None };
    if let Some(port) = std::env::args().nth(1) {
        let addr: SocketAddr = ([127, 0, 0, 1], port.parse().expect("port")).into();
        println!("listening on http://{addr}");
        return serve(state, addr).await;
    }

    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let addr = listener.local_addr()?;
    tokio::spawn(async move { axum::serve(listener, router(state)).await });

    let path = format!("/api/products/{}/globalview?tasks=318", fixtures::GV_PRODUCT);
    let resp = tokio::task::spawn_blocking(move || -> std::io::Result<String> {
        let mut conn = std::net::TcpStream::connect(addr)?;
        write!(conn, "GET {path} HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n")?;
        let mut resp = String::new();
        conn.read_to_string(&mut resp)?;
        Ok(resp)
    })
    .await
    .expect("client thread")?;
    let (head, body) = resp.split_once("\r\n\r\n").unwrap_or((&resp, ""));
    println!("{}", head.lines().next().unwrap_or(""));
    println!("{body}");
    Ok(())
}
