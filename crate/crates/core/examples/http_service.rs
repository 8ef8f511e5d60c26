// Serve the HTTP API on an ephemeral port and call it.

use std::sync::Arc;

use msa::dialogue::StubClient;
use msa::interface::server::{serve_on, AppState};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let rt = tokio::runtime::Runtime::new()?;
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0"))?;
    let base = format!("http://{}", listener.local_addr()?);
    let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
    let server = rt.spawn(serve_on(
        listener,
        AppState::new(Arc::new(StubClient)),
        async {
            let _ = stopped.await;
        },
    ));

    let client = reqwest::blocking::Client::new();
    let reply: serde_json::Value = client
        .post(format!("{base}/generate_with_speaker_module"))
        .body(r##"{"prompt": "Summarise the plan.", "speaker_module": ["#T_SOFTASSERT", "#C_LOOP"]}"##)
        .send()?
        .json()?;
    println!("generate: {}", reply["output"]);

    let graph = client
        .post(format!("{base}/analyze_graph"))
        .body(r#"{"nodes": ["a", "b", "c"], "edges": [{"from": "a", "to": "b"}, {"from": "b", "to": "a"}]}"#)
        .send()?
        .text()?;
    println!("analyze_graph: {graph}");

    let bad = client
        .post(format!("{base}/generate_with_speaker_module"))
        .body(r##"{"prompt": "x", "speaker_module": ["#T_BANANA"]}"##)
        .send()?;
    println!("bad tag: {} {}", bad.status(), bad.text()?);

    let _ = stop.send(());
    rt.block_on(server)??;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run()
}
