use std::fmt;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use homecrawl_core::apispec::{self, Role};
use homecrawl_core::clock::{Clock, SimClock, SystemClock};
use homecrawl_core::discovery::{record_observation, scan, ScanConfig, SimBus, Transport, UdpTransport};
use homecrawl_core::gateway::{
    poll_many, request_node, request_nodes, AttributeTypeRegistry, Connection, Sample, TcpConnection,
};
use homecrawl_core::linker::{self, LinkResult, LinkerConfig};
use homecrawl_core::ml::{extract_features, PowerTrace, RandomForest, DEFAULT_ON_THRESHOLD_W};
use homecrawl_core::normalizer::{
    associate_entity, deduplicate, link_triples, normalize_node, normalize_observation, record_link,
    IotStreamRecord, NormalizerConfig,
};
use homecrawl_core::rdf::{self, Iri, Store, Term, Triple};
use homecrawl_core::sim::{announce, Scenario, SimGateway};
use homecrawl_core::vocab::{ns, Category, DeviceOntology, UnitRegistry};

use crate::error::CliError;

pub const GATEWAY_PORT: u16 = 7681;
const CONNECT_TIMEOUT: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Real,
    Sim(PathBuf),
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => Ok(Source::Real),
            _ => match s.strip_prefix("sim:") {
                Some(path) if !path.is_empty() => Ok(Source::Sim(PathBuf::from(path))),
                _ => Err(format!("expected `real` or `sim:PATH`, got {s:?}")),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct CrawlOptions {
    pub auto_accept_top: bool,
    pub classify: Option<PathBuf>,
    /// Measurement polls per stream; defaults to 90 for simulations and
    /// 0 for real networks.
    pub poll_samples: Option<usize>,
    pub scan_duration: Duration,
}

impl Default for CrawlOptions {
    fn default() -> Self {
        CrawlOptions {
            auto_accept_top: false,
            classify: None,
            poll_samples: None,
            scan_duration: Duration::from_secs(3),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub stream: Iri,
    pub label: String,
    pub prediction: String,
    pub confidence: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CrawlReport {
    pub devices_discovered: usize,
    pub gateways: usize,
    pub gateway_nodes: usize,
    pub linked: usize,
    pub ambiguous: usize,
    pub no_match: usize,
    pub auto_accepted: usize,
    pub streams: usize,
    pub observations: usize,
    pub skipped_attributes: usize,
    pub merges: usize,
    pub classifications: Vec<Classification>,
    pub duration: Duration,
}

impl CrawlReport {
    fn tally(&mut self, result: &LinkResult, auto_accept_top: bool) {
        match result {
            LinkResult::Linked(_) => self.linked += 1,
            LinkResult::Ambiguous(_) => {
                self.ambiguous += 1;
                if auto_accept_top {
                    self.auto_accepted += 1;
                }
            }
            LinkResult::NoMatch => self.no_match += 1,
        }
    }
}

impl fmt::Display for CrawlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "devices discovered:  {}", self.devices_discovered)?;
        writeln!(f, "gateways queried:    {}", self.gateways)?;
        writeln!(f, "gateway nodes:       {}", self.gateway_nodes)?;
        writeln!(
            f,
            "links:               {} linked, {} ambiguous ({} auto-accepted), {} no match",
            self.linked, self.ambiguous, self.auto_accepted, self.no_match
        )?;
        writeln!(f, "streams:             {}", self.streams)?;
        writeln!(f, "observations:        {}", self.observations)?;
        if self.skipped_attributes > 0 {
            writeln!(f, "skipped attributes:  {}", self.skipped_attributes)?;
        }
        writeln!(f, "merges:              {}", self.merges)?;
        for c in &self.classifications {
            writeln!(f, "classified:          {} -> {} ({:.2})", c.label, c.prediction, c.confidence)?;
        }
        write!(f, "duration:            {} ms", self.duration.as_millis())
    }
}

type Connector = Box<dyn Fn(IpAddr) -> Result<Box<dyn Connection>, CliError>>;

/// Where a crawl runs: the network, the clock, and how gateways are
/// reached.
struct World {
    clock: Arc<dyn Clock>,
    transport: Box<dyn Transport>,
    connect: Connector,
    poll_period: Duration,
    default_samples: usize,
}

fn sim_world(path: &Path) -> Result<World, CliError> {
    let scenario = Scenario::load(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let clock = Arc::new(SimClock::new(scenario.start()?));
    let mut bus = SimBus::new(clock.clone());
    announce(&mut bus, &scenario);
    let gateway = Arc::new(SimGateway::new(&scenario, clock.clone())?);
    let gateway_ip = IpAddr::V4(scenario.gateway_ip);
    Ok(World {
        clock,
        transport: Box::new(bus),
        connect: Box::new(move |ip| {
            if ip == gateway_ip {
                Ok(Box::new(gateway.connect()) as Box<dyn Connection>)
            } else {
                Err(CliError::Transport(format!("no gateway at {ip}")))
            }
        }),
        poll_period: Duration::from_secs(u64::from(scenario.sample_period_sec)),
        default_samples: 90,
    })
}

fn real_world() -> Result<World, CliError> {
    let transport = UdpTransport::bind().map_err(|e| CliError::Transport(e.to_string()))?;
    Ok(World {
        clock: Arc::new(SystemClock),
        transport: Box::new(transport),
        connect: Box::new(|ip| {
            let conn = TcpConnection::connect(SocketAddr::new(ip, GATEWAY_PORT), CONNECT_TIMEOUT)?;
            Ok(Box::new(conn) as Box<dyn Connection>)
        }),
        poll_period: Duration::from_secs(10),
        default_samples: 0,
    })
}

pub fn load_store(path: &Path) -> Result<Store, CliError> {
    if path.exists() {
        Ok(rdf::load(path)?)
    } else {
        Ok(Store::new())
    }
}

fn is_gateway(store: &Store, ontology: &DeviceOntology, device: &Iri) -> bool {
    store
        .objects(&Term::Iri(device.clone()), &Iri::from_static(ns::RDF_TYPE))
        .iter()
        .filter_map(Term::as_iri)
        .filter_map(|c| ontology.get(c))
        .any(|c| c.category == Category::Gateway)
}

/// Scan, link, query gateways, normalise, poll, deduplicate and
/// optionally classify, then persist the store.
pub fn crawl(source: &Source, store_path: &Path, options: &CrawlOptions) -> Result<CrawlReport, CliError> {
    let started = Instant::now();
    let forest = match &options.classify {
        Some(path) => Some(
            RandomForest::load(path).map_err(|e| CliError::Config(format!("model {}: {e}", path.display())))?,
        ),
        None => None,
    };
    let mut world = match source {
        Source::Sim(path) => sim_world(path)?,
        Source::Real => real_world()?,
    };
    let mut store = load_store(store_path)?;
    let ontology = DeviceOntology::builtin();
    let units = UnitRegistry::builtin();
    let types = AttributeTypeRegistry::default();
    let linker_config = LinkerConfig::default();
    let mut report = CrawlReport::default();

    let observations = scan(world.transport.as_mut(), options.scan_duration, &*world.clock, &ScanConfig::default())?;
    report.devices_discovered = observations.len();
    let mut gateways = Vec::new();
    for obs in &observations {
        record_observation(&mut store, obs)?;
        let device = obs.device_iri();
        let result = linker::link(&obs.network_name, &ontology, &linker_config);
        report.tally(&result, options.auto_accept_top);
        record_link(&mut store, &device, link_triples(&device, &result, options.auto_accept_top).0)?;
        if is_gateway(&store, &ontology, &device) {
            gateways.push((obs, device));
        }
    }

    let (api, enrichment) = apispec::bundled_homee();
    let api_usable = !apispec::endpoints_with_role(&api, &enrichment, Role::DeviceMetadata).is_empty()
        && !apispec::endpoints_with_role(&api, &enrichment, Role::MeasurementData).is_empty();
    let samples = options.poll_samples.unwrap_or(world.default_samples);
    for (obs, gateway_device) in gateways.into_iter().filter(|_| api_usable) {
        let Some(ip) = obs.address else { continue };
        let mut conn = (world.connect)(ip)?;
        let nodes = request_nodes(conn.as_mut())?;
        report.gateways += 1;
        report.gateway_nodes += nodes.len();
        let config = NormalizerConfig {
            gateway_name: obs.network_name.clone(),
            gateway_device: Some(gateway_device.clone()),
            linker: linker_config,
            auto_accept_top: options.auto_accept_top,
        };
        let mut streams: Vec<IotStreamRecord> = Vec::new();
        for summary in &nodes {
            let mut node = request_node(conn.as_mut(), summary.id)?;
            if node.name.is_empty() {
                node.name = summary.name.clone();
            }
            node.ip = node.ip.or_else(|| summary.ip.clone());
            node.room = node.room.or_else(|| summary.room.clone());
            let n = normalize_node(&node, &ontology, &units, &types, &config);
            report.tally(&n.link, options.auto_accept_top);
            report.skipped_attributes += n.skipped.len();
            store.extend(n.triples)?;
            record_link(&mut store, &n.device, n.link_triples)?;
            streams.extend(n.streams);
        }
        report.streams += streams.len();
        if samples == 0 || streams.is_empty() {
            continue;
        }
        let targets: Vec<(u32, u32)> = streams.iter().map(|s| (s.node_id, s.attribute_type)).collect();
        let series = poll_many(conn.as_mut(), &*world.clock, &targets, world.poll_period, samples)?;
        let offset = *world.clock.now().offset();
        for (stream, samples) in streams.iter().zip(&series) {
            for sample in samples {
                store.extend(normalize_observation(stream, sample, &units, offset)?)?;
                report.observations += 1;
            }
            if let (Some(forest), true) = (&forest, stream.observed_property.as_str() == ns::QK_POWER) {
                if let Some(c) = classify_stream(&mut store, forest, stream, samples, world.poll_period)? {
                    report.classifications.push(c);
                }
            }
        }
    }

    report.merges = deduplicate(&mut store)?.len();
    rdf::persist(&store, store_path)?;
    report.duration = started.elapsed();
    Ok(report)
}

fn classify_stream(
    store: &mut Store,
    forest: &RandomForest,
    stream: &IotStreamRecord,
    samples: &[Sample],
    period: Duration,
) -> Result<Option<Classification>, CliError> {
    let Some(first) = samples.first() else { return Ok(None) };
    let watts = samples.iter().map(|s| s.value.max(0.0)).collect();
    let period = u32::try_from(period.as_secs().max(1)).unwrap_or(u32::MAX);
    let trace = PowerTrace::new(period, first.timestamp, watts)?;
    let prediction = forest.predict(&extract_features(&trace, DEFAULT_ON_THRESHOLD_W)?);
    store.insert(Triple::new(
        stream.stream.clone(),
        Iri::from_static(ns::SHC_APPLIANCE_DETECTION),
        Term::string(prediction.to_string()),
    )?)?;
    if let Some(label) = prediction.label() {
        associate_entity(store, &stream.stream, label)?;
    }
    Ok(Some(Classification {
        stream: stream.stream.clone(),
        label: stream.label.clone(),
        prediction: prediction.to_string(),
        confidence: prediction.confidence(),
    }))
}
