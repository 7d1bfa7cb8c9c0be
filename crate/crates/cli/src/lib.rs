//! Command line front end: crawl a home, confirm links, query the store,
//! and train or apply the appliance classifier.

pub mod ask;
pub mod confirm;
pub mod crawl;
pub mod error;
pub mod model;

use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use homecrawl_core::clock::ReplayClock;
use homecrawl_core::sim::{run_gateway, Scenario, SimGateway};

pub use crawl::{crawl, CrawlOptions, CrawlReport, Source};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "homecrawl", version, about = "Discover, describe and query smart home devices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct StoreArg {
    /// Triple store file
    #[arg(long, default_value = "crawl.nt")]
    pub store: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the network, query gateways and record what was found
    Crawl {
        /// `real` or `sim:SCENARIO.json`
        #[arg(long)]
        source: Source,
        #[command(flatten)]
        store: StoreArg,
        /// Type ambiguous devices with their best candidate
        #[arg(long)]
        auto_accept_top: bool,
        /// Model used to recognise appliances behind power streams
        #[arg(long, value_name = "MODEL")]
        classify: Option<PathBuf>,
        /// Polls per measurement stream
        #[arg(long)]
        poll_samples: Option<usize>,
        #[arg(long, default_value_t = 3)]
        scan_seconds: u64,
    },
    /// Resolve ambiguous device links interactively
    Confirm {
        #[command(flatten)]
        store: StoreArg,
    },
    /// Answer a question: whats-happening, devices, appliances or network
    Ask {
        #[command(flatten)]
        store: StoreArg,
        question: String,
    },
    /// Serve a simulated gateway over TCP
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        listen: SocketAddr,
    },
    /// Train the appliance classifier on synthetic traces
    Train {
        /// Appliance model list; the bundled twelve by default
        #[arg(long)]
        models: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        traces_per_class: usize,
    },
    /// Classify one power trace CSV
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Match a triple pattern or look up streams
    Query {
        #[command(flatten)]
        store: StoreArg,
        #[arg(long, conflicts_with = "find_streams", required_unless_present = "find_streams")]
        pattern: Option<String>,
        #[arg(long)]
        find_streams: bool,
        #[arg(long, requires = "find_streams")]
        quantity: Option<String>,
        #[arg(long, requires = "find_streams")]
        device_type: Option<String>,
    },
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Config(e.to_string())),
        _ => Ok(()),
    }
}

pub fn run(cli: Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Crawl { source, store, auto_accept_top, classify, poll_samples, scan_seconds } => {
            if scan_seconds == 0 {
                return Err(CliError::Config("--scan-seconds must be positive".into()));
            }
            let options = CrawlOptions {
                auto_accept_top,
                classify,
                poll_samples,
                scan_duration: Duration::from_secs(scan_seconds),
            };
            let report = crawl(&source, &store.store, &options)?;
            write_out(out, &report.to_string())
        }
        Command::Confirm { store } => {
            let summary = confirm::confirm(&store.store, input, out)?;
            if summary != confirm::ConfirmSummary::default() {
                write_out(out, &format!("{} confirmed, {} skipped", summary.confirmed, summary.skipped))?;
            }
            Ok(())
        }
        Command::Ask { store, question } => {
            let store = crawl::load_store(&store.store)?;
            write_out(out, &ask::answer(&store, &question)?)
        }
        Command::Simulate { scenario, listen } => {
            let scenario =
                Scenario::load(&scenario).map_err(|e| CliError::Config(format!("{}: {e}", scenario.display())))?;
            let clock = Arc::new(ReplayClock::new(scenario.start()?));
            let gateway = Arc::new(SimGateway::new(&scenario, clock)?);
            let handle = run_gateway(gateway, listen)?;
            write_out(out, &format!("serving {} on {}", scenario.gateway_name, handle.local_addr()))?;
            out.flush().map_err(|e| CliError::Config(e.to_string()))?;
            handle.wait();
            Ok(())
        }
        Command::Train { models, out: model_path, seed, traces_per_class } => {
            let models = model::load_models(models.as_deref())?;
            let (forest, evaluation) = model::train_and_evaluate(&models, traces_per_class, seed)?;
            forest.save(&model_path)?;
            write_out(out, &model::format_evaluation(&evaluation))?;
            write_out(out, &format!("model written to {}", model_path.display()))
        }
        Command::Classify { model, trace } => {
            let prediction = model::classify(&model, &trace)?;
            write_out(out, &format!("{prediction}\t{:.3}", prediction.confidence()))
        }
        Command::Query { store, pattern, find_streams, quantity, device_type } => {
            let store = crawl::load_store(&store.store)?;
            let rows = match pattern {
                Some(p) => ask::match_pattern(&store, &p)?,
                None => {
                    debug_assert!(find_streams);
                    ask::find_streams(&store, quantity.as_deref(), device_type.as_deref())?
                }
            };
            for row in rows {
                write_out(out, &row)?;
            }
            Ok(())
        }
    }
}
