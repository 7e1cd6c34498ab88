use std::net::SocketAddr;

use clap::Parser;
use fjordmap_tiles::{router, AppState, TileConfig};

#[derive(Parser, Debug)]
#[command(name = "fjordmap-tiles", version, about = "Serve fjordmap tiles over HTTP")]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "FJORDMAP_BIND", default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Zoom factor between levels.
    #[arg(long, env = "FJORDMAP_BASE", default_value_t = 5, value_parser = clap::value_parser!(u32).range(2..))]
    base: u32,
    /// Tiles kept in memory.
    #[arg(long, env = "FJORDMAP_CACHE", default_value_t = 1024)]
    cache: usize,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    let args = Args::parse();
    let state = AppState::new(TileConfig {
        base: args.base,
        cache_capacity: args.cache,
        ..TileConfig::default()
    });
    let listener = tokio::net::TcpListener::bind(args.bind).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
