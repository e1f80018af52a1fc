//! `routeplan`: solve a scenario file through the planner service.
//!
//! Without `--server` the service is started in-process on a loopback port
//! for the duration of the run.
//!
//! Exit codes: 0 ok, 1 data or validation error, 2 min-cost infeasible.

mod table;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use routeplan_client::{Client, ClientError};
use routeplan_core::data::{generate_fixture, random_scenario, write_datasets, write_demo_fixture, FixtureShape};
use routeplan_core::formulation::{build_model, Model};
use routeplan_core::model::{build_network, Scenario};
use routeplan_core::plan::{PlanOutcome, PlanStatus};
use routeplan_service::{AppState, ServiceConfig};

#[derive(Parser, Debug)]
#[command(name = "routeplan", about = "Plan clinic-access travel for a scenario")]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Reference data directory (ignored with --server).
    #[arg(long, env = "ROUTEPLAN_DATA_ROOT")]
    data_root: Option<PathBuf>,
    /// Scenario JSON, same shape as POST /api/scenarios.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModelArg::Both)]
    model: ModelArg,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Use a running service instead of an in-process one.
    #[arg(long, env = "ROUTEPLAN_SERVER")]
    server: Option<String>,
    #[arg(long, default_value_t = 60)]
    solve_timeout_s: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a fixture bundle (CSVs plus scenario.json).
    Fixture {
        #[arg(long)]
        out: PathBuf,
        /// Random tiny fixture from this seed; the demo fixture when absent.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the integer program for a scenario in LP text.
    DumpLp {
        #[arg(long)]
        data_root: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = SingleModel::MaxFlow)]
        model: SingleModel,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ModelArg {
    MaxFlow,
    MinCost,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SingleModel {
    MaxFlow,
    MinCost,
}

impl From<SingleModel> for Model {
    fn from(m: SingleModel) -> Self {
        match m {
            SingleModel::MaxFlow => Model::MaxFlow,
            SingleModel::MinCost => Model::MinCost,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Fixture { out, seed }) => write_fixture(&out, seed).map(|()| 0),
        Some(Command::DumpLp {
            data_root,
            scenario,
            model,
        }) => dump_lp(&data_root, &scenario, model.into()).map(|()| 0),
        None => run(cli.run),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_scenario(path: &Path) -> anyhow::Result<Scenario> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_fixture(out: &Path, seed: Option<u64>) -> anyhow::Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    match seed {
        None => write_demo_fixture(out)?,
        Some(seed) => {
            let data = generate_fixture(seed, &FixtureShape::tiny());
            write_datasets(out, &data)?;
            let mut json = serde_json::to_string_pretty(&random_scenario(seed, &data))?;
            json.push('\n');
            std::fs::write(out.join("scenario.json"), json)?;
        }
    }
    Ok(())
}

fn dump_lp(data_root: &Path, scenario: &Path, model: Model) -> anyhow::Result<()> {
    let data = routeplan_core::load_datasets(data_root)?;
    let scenario = read_scenario(scenario)?;
    let network = build_network(&scenario, &data)?;
    let formulation = build_model(&network, &scenario, model)?;
    print!("{}", routeplan_core::ip::to_lp_string(&formulation.program));
    Ok(())
}

fn run(args: RunArgs) -> anyhow::Result<u8> {
    let Some(scenario_path) = &args.scenario else {
        bail!("--scenario is required");
    };
    let scenario = read_scenario(scenario_path)?;
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    let (outcomes, code) = runtime.block_on(async {
        match &args.server {
            Some(url) => solve_all(&Client::new(url.clone()), &scenario, args.model).await,
            None => {
                let Some(root) = &args.data_root else {
                    bail!("--data-root is required without --server");
                };
                let data = routeplan_core::load_datasets(root)
                    .with_context(|| format!("loading reference data from {}", root.display()))?;
                let config = ServiceConfig {
                    solve_timeout: std::time::Duration::from_secs(args.solve_timeout_s),
                    ..ServiceConfig::default()
                };
                let state = AppState::new(data, config);
                let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
                let addr = listener.local_addr()?;
                let (stop, stopped) = tokio::sync::oneshot::channel::<()>();
                let server = tokio::spawn(routeplan_service::serve(listener, state, async {
                    let _ = stopped.await;
                }));
                let result = solve_all(&Client::new(format!("http://{addr}")), &scenario, args.model).await;
                let _ = stop.send(());
                server.await??;
                result
            }
        }
    })?;

    let rendered = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcomes)?;
            s.push('\n');
            s
        }
        Format::Table => table::render(&outcomes),
    };
    match &args.out {
        Some(path) => std::fs::write(path, rendered).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(code)
}

/// Solves the requested models in order. `both` skips min-cost when the
/// max-flow plan leaves demand unmet.
async fn solve_all(client: &Client, scenario: &Scenario, which: ModelArg) -> anyhow::Result<(Vec<PlanOutcome>, u8)> {
    let stored = client.create_scenario(scenario).await.map_err(describe)?;
    let mut outcomes = Vec::new();
    let mut code = 0;
    let models: &[Model] = match which {
        ModelArg::MaxFlow => &[Model::MaxFlow],
        ModelArg::MinCost => &[Model::MinCost],
        ModelArg::Both => &[Model::MaxFlow, Model::MinCost],
    };
    for &model in models {
        if model == Model::MinCost && matches!(which, ModelArg::Both) {
            if let Some(report) = outcomes.first().and_then(|o: &PlanOutcome| o.report.as_ref()) {
                if report.total_transported < report.demand_total {
                    eprintln!(
                        "notice: max flow moves {} of {} travelers; skipping min_cost",
                        report.total_transported, report.demand_total
                    );
                    continue;
                }
            }
        }
        match client.solve(&stored.id, model).await {
            Ok(sol) => outcomes.push(PlanOutcome {
                model,
                status: sol.status,
                report: sol.report,
                diagnostic: sol.diagnostic,
            }),
            Err(ClientError::Api { status, body }) if status.as_u16() == 422 => {
                if let Some(d) = &body.diagnostic {
                    eprintln!("{}: {}", model.as_str(), d.message);
                }
                outcomes.push(PlanOutcome {
                    model,
                    status: PlanStatus::Infeasible,
                    report: None,
                    diagnostic: body.diagnostic,
                });
                code = 2;
            }
            Err(e) => return Err(describe(e)),
        }
    }
    Ok((outcomes, code))
}

fn describe(e: ClientError) -> anyhow::Error {
    match &e {
        ClientError::Api { body, .. } if !body.details.is_empty() => {
            let lines: Vec<String> = body.details.iter().map(|d| format!("  {}: {}", d.field, d.message)).collect();
            anyhow::anyhow!("{e}\n{}", lines.join("\n"))
        }
        _ => anyhow::Error::new(e),
    }
}
