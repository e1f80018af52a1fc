use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::Context;
use clap::Parser;
use routeplan_service::{serve, AppState, ServiceConfig};

#[derive(Parser, Debug)]
#[command(name = "routeplan-service", about = "Clinic-access routing planner over HTTP/JSON")]
struct Args {
    /// Directory holding the reference CSV tables.
    #[arg(long, env = "ROUTEPLAN_DATA_ROOT")]
    data_root: PathBuf,
    #[arg(long, env = "ROUTEPLAN_HOST", default_value = "127.0.0.1")]
    host: std::net::IpAddr,
    #[arg(long, env = "ROUTEPLAN_PORT", default_value_t = 8080)]
    port: u16,
    /// Wall-clock limit for a single solve.
    #[arg(long, env = "ROUTEPLAN_SOLVE_TIMEOUT_S", default_value_t = 60)]
    solve_timeout_s: u64,
    /// Defaults to the number of CPUs.
    #[arg(long, env = "ROUTEPLAN_MAX_CONCURRENT_SOLVES")]
    max_concurrent_solves: Option<usize>,
    /// Write scenarios and solutions here as JSON on shutdown.
    #[arg(long, env = "ROUTEPLAN_SNAPSHOT")]
    snapshot: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    let args = Args::parse();

    let data = routeplan_core::load_datasets(&args.data_root)
        .with_context(|| format!("loading reference data from {}", args.data_root.display()))?;
    for w in data.warnings() {
        tracing::warn!("{w}");
    }
    let mut config = ServiceConfig {
        solve_timeout: Duration::from_secs(args.solve_timeout_s),
        snapshot: args.snapshot,
        ..ServiceConfig::default()
    };
    if let Some(n) = args.max_concurrent_solves {
        config.max_concurrent_solves = n;
    }
    let state = AppState::new(data, config);

    let addr = SocketAddr::new(args.host, args.port);
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
    tracing::info!("listening on {}", listener.local_addr()?);
    serve(listener, state, async {
        let _ = tokio::signal::ctrl_c().await;
        tracing::info!("shutting down");
    })
    .await?;
    Ok(())
}
