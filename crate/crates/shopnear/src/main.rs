use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use shopnear::api::{self, AppState};
use shopnear::clock::SystemClock;
use shopnear::config::ServiceConfig;
use shopnear::orders::Orders;
use shopnear::outbox::DirOutbox;
use shopnear::recommend::{mine_shop_output, render_table};
use shopnear::seed::{self, SeedSpec};
use shopnear::store::Store;
use shopnear::{arff, snapshot};
use shopnear_core::{RankKey, ShopId};

#[derive(Parser)]
#[command(name = "shopnear", version, about = "Nearby bakery shops, basket recommendations and live orders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP API.
    Serve(ServeArgs),
    /// Generate a reproducible store and write it as a snapshot.
    Seed(SeedArgs),
    /// Mine one shop's history and print frequent itemsets and top rules.
    Mine(MineArgs),
    /// Write one shop's transactions as an ARFF file.
    ExportArff(ExportArgs),
    /// Load the fixed demo dataset and serve it.
    Demo(ServeArgs),
}

#[derive(Args, Clone, Default)]
struct MiningArgs {
    #[arg(long, env = "SHOPNEAR_MIN_SUPPORT")]
    min_support: Option<f64>,
    #[arg(long, env = "SHOPNEAR_MIN_CONFIDENCE")]
    min_confidence: Option<f64>,
    #[arg(long, env = "SHOPNEAR_TOP_K")]
    top_k: Option<usize>,
    #[arg(long, env = "SHOPNEAR_RANK_BY", value_enum)]
    rank_by: Option<RankArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankArg {
    Support,
    Confidence,
}

#[derive(Args)]
struct ServeArgs {
    /// TOML file with any of the service settings; flags win over it.
    #[arg(long, env = "SHOPNEAR_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, env = "SHOPNEAR_LISTEN")]
    listen: Option<SocketAddr>,
    #[arg(long, env = "SHOPNEAR_SNAPSHOT")]
    snapshot: Option<PathBuf>,
    #[arg(long, env = "SHOPNEAR_OUTBOX")]
    outbox: Option<PathBuf>,
    #[arg(long, env = "SHOPNEAR_RADIUS_KM")]
    radius_km: Option<f64>,
    #[arg(long, env = "SHOPNEAR_CACHE_TTL_SECS")]
    cache_ttl_secs: Option<f64>,
    #[command(flatten)]
    mining: MiningArgs,
}

#[derive(Args)]
struct SeedArgs {
    /// Snapshot file to write.
    #[arg(long)]
    out: PathBuf,
    /// Write the fixed demo dataset instead of random data.
    #[arg(long)]
    demo: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shops: Option<usize>,
    #[arg(long)]
    products: Option<usize>,
    #[arg(long)]
    customers: Option<usize>,
    #[arg(long)]
    orders: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Args)]
struct MineArgs {
    #[arg(long, env = "SHOPNEAR_SNAPSHOT")]
    snapshot: PathBuf,
    #[arg(long)]
    shop: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, env = "SHOPNEAR_CONFIG")]
    config: Option<PathBuf>,
    #[command(flatten)]
    mining: MiningArgs,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, env = "SHOPNEAR_SNAPSHOT")]
    snapshot: PathBuf,
    #[arg(long)]
    shop: u64,
    #[arg(long)]
    out: PathBuf,
}

fn base_config(path: Option<&Path>) -> anyhow::Result<ServiceConfig> {
    Ok(match path {
        Some(p) => ServiceConfig::from_file(p)?,
        None => ServiceConfig::default(),
    })
}

fn apply_mining(cfg: &mut ServiceConfig, m: &MiningArgs) {
    if let Some(v) = m.min_support {
        cfg.min_support = v;
    }
    if let Some(v) = m.min_confidence {
        cfg.min_confidence = v;
    }
    if let Some(v) = m.top_k {
        cfg.top_k = v;
    }
    if let Some(v) = m.rank_by {
        cfg.rank_by = match v {
            RankArg::Support => RankKey::Support,
            RankArg::Confidence => RankKey::Confidence,
        };
    }
}

fn serve_config(args: &ServeArgs) -> anyhow::Result<ServiceConfig> {
    let mut cfg = base_config(args.config.as_deref())?;
    if let Some(v) = args.listen {
        cfg.listen = v;
    }
    if let Some(v) = &args.snapshot {
        cfg.snapshot = Some(v.clone());
    }
    if let Some(v) = &args.outbox {
        cfg.outbox_dir = v.clone();
    }
    if let Some(v) = args.radius_km {
        cfg.default_radius_km = v;
    }
    if let Some(v) = args.cache_ttl_secs {
        cfg.cache_ttl_secs = v;
    }
    apply_mining(&mut cfg, &args.mining);
    cfg.validate()?;
    Ok(cfg)
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
    tracing::info!("shutting down");
}

fn run_server(cfg: ServiceConfig, store: Store) -> anyhow::Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let outbox = DirOutbox::new(&cfg.outbox_dir)
            .with_context(|| format!("cannot create outbox {}", cfg.outbox_dir.display()))?;
        let orders = Arc::new(Orders::new(Arc::new(store), Arc::new(outbox), Arc::new(SystemClock)));
        let state = AppState::new(orders, cfg.api_settings());
        let listener = tokio::net::TcpListener::bind(cfg.listen)
            .await
            .with_context(|| format!("cannot listen on {}", cfg.listen))?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        api::serve(listener, state, shutdown_signal()).await?;
        Ok(())
    })
}

fn open_store(cfg: &ServiceConfig) -> anyhow::Result<Store> {
    Ok(match &cfg.snapshot {
        Some(path) => Store::open(path)?,
        None => Store::in_memory(),
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Serve(args) => {
            let cfg = serve_config(&args)?;
            let store = open_store(&cfg)?;
            run_server(cfg, store)
        }
        Command::Demo(args) => {
            let cfg = serve_config(&args)?;
            let (demo, info) = seed::demo()?;
            let store = match &cfg.snapshot {
                Some(path) if path.exists() => bail!("{} already exists; use `serve` to run it", path.display()),
                Some(path) => {
                    demo.snapshot_to(path)?;
                    Store::open(path)?
                }
                None => demo,
            };
            eprintln!(
                "demo: shop {} (\"Demo Bakery\") owned by user {}, customer user {}, password {:?}",
                info.shop_id, info.shopkeeper_id, info.customer_id, info.password
            );
            run_server(cfg, store)
        }
        Command::Seed(args) => {
            let store = if args.demo {
                seed::demo()?.0
            } else {
                let d = SeedSpec::default();
                let spec = SeedSpec {
                    seed: args.seed.unwrap_or(d.seed),
                    shops: args.shops.unwrap_or(d.shops),
                    products: args.products.unwrap_or(d.products),
                    customers: args.customers.unwrap_or(d.customers),
                    orders: args.orders.unwrap_or(d.orders),
                    ..d
                };
                seed::seed(&spec)?
            };
            store.snapshot_to(&args.out)?;
            eprintln!("wrote {}", args.out.display());
            Ok(())
        }
        Command::Mine(args) => {
            let mut cfg = base_config(args.config.as_deref())?;
            apply_mining(&mut cfg, &args.mining);
            cfg.validate()?;
            let state = snapshot::load(&args.snapshot)?;
            let out = mine_shop_output(&state, ShopId(args.shop), &cfg.mining())?;
            match args.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
                Format::Table => print!("{}", render_table(&out)),
            }
            Ok(())
        }
        Command::ExportArff(args) => {
            let state = snapshot::load(&args.snapshot)?;
            let doc = arff::export_arff(&state, ShopId(args.shop))?;
            std::fs::write(&args.out, doc).with_context(|| format!("cannot write {}", args.out.display()))?;
            eprintln!("wrote {}", args.out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
