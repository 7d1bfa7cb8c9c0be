use std::collections::{BTreeMap, BTreeSet};

use chrono::DateTime;
use homecrawl_core::ml::{
    builtin_rules, detect_usage, infer_activities, render_activities, ActivityInput, PowerTrace, UsageThresholds,
};
use homecrawl_core::rdf::{Iri, Pattern, PatternTerm, Store, StreamIndex, Term};
use homecrawl_core::vocab::{ns, DeviceOntology};

use crate::error::CliError;

/// How far back `whats-happening` looks, from the newest observation.
pub const RECENT_WINDOW_SEC: i64 = 900;

pub const QUESTIONS: [&str; 4] = ["whats-happening", "devices", "appliances", "network"];

fn iri(s: &'static str) -> Iri {
    Iri::from_static(s)
}

fn var(name: &str) -> PatternTerm {
    PatternTerm::var(name)
}

fn lexical(store: &Store, subject: &Term, predicate: &'static str) -> Option<String> {
    store.object(subject, &iri(predicate)).and_then(|t| t.lexical().map(str::to_string))
}

pub fn answer(store: &Store, question: &str) -> Result<String, CliError> {
    match question {
        "whats-happening" => Ok(whats_happening(store)),
        "devices" => Ok(lines(devices(store))),
        "appliances" => Ok(lines(appliances(store))),
        "network" => Ok(lines(network(store))),
        other => Err(CliError::Config(format!(
            "unknown question {other:?}; expected one of {}",
            QUESTIONS.join(", ")
        ))),
    }
}

fn lines(rows: Vec<String>) -> String {
    if rows.is_empty() {
        "none".to_string()
    } else {
        rows.join("\n")
    }
}

/// `label<TAB>class` for every subject typed with an ontology class.
pub fn devices(store: &Store) -> Vec<String> {
    let ontology = DeviceOntology::builtin();
    let bindings = store.query_join(&[Pattern::new(var("d"), iri(ns::RDF_TYPE), var("c"))]);
    let mut rows = BTreeSet::new();
    for b in bindings {
        let (Some(d), Some(Term::Iri(c))) = (b.get("d"), b.get("c")) else { continue };
        if !ontology.contains(c) {
            continue;
        }
        let name = lexical(store, d, ns::RDFS_LABEL)
            .or_else(|| lexical(store, d, ns::SHC_HAS_NETWORK_NAME))
            .unwrap_or_else(|| d.to_string());
        rows.insert(format!("{name}\t{c}"));
    }
    rows.into_iter().collect()
}

/// `appliance<TAB>stream label` per associated feature of interest.
pub fn appliances(store: &Store) -> Vec<String> {
    let bindings = store.query_join(&[
        Pattern::new(var("s"), iri(ns::SOSA_HAS_FEATURE_OF_INTEREST), var("f")),
        Pattern::new(var("f"), iri(ns::RDFS_LABEL), var("a")),
    ]);
    let mut rows = BTreeSet::new();
    for b in bindings {
        let (Some(s), Some(a)) = (b.get("s"), b.get("a").and_then(Term::lexical)) else { continue };
        let stream = lexical(store, s, ns::RDFS_LABEL).unwrap_or_else(|| s.to_string());
        rows.insert(format!("{a}\t{stream}"));
    }
    rows.into_iter().collect()
}

/// `name<TAB>ip` per discovered network device.
pub fn network(store: &Store) -> Vec<String> {
    let bindings = store.query_join(&[Pattern::new(var("d"), iri(ns::SHC_HAS_NETWORK_NAME), var("n"))]);
    let mut rows = BTreeSet::new();
    for b in bindings {
        let (Some(d), Some(n)) = (b.get("d"), b.get("n").and_then(Term::lexical)) else { continue };
        let ip = lexical(store, d, ns::SHC_HAS_IP_ADDRESS).unwrap_or_else(|| "-".into());
        rows.insert(format!("{n}\t{ip}"));
    }
    rows.into_iter().collect()
}

/// Power samples per stream, sorted by time.
fn power_series(store: &Store) -> BTreeMap<Iri, Vec<(i64, f64)>> {
    let index = StreamIndex::build(store);
    let mut out = BTreeMap::new();
    for stream in index.find_streams(Some(&iri(ns::QK_POWER)), None) {
        let bindings = store.query_join(&[
            Pattern::new(var("o"), iri(ns::IOT_BELONGS_TO), stream.clone()),
            Pattern::new(var("o"), iri(ns::SOSA_RESULT_TIME), var("t")),
            Pattern::new(var("o"), iri(ns::SOSA_HAS_RESULT), var("r")),
            Pattern::new(var("r"), iri(ns::QUDT_NUMERIC_VALUE), var("v")),
        ]);
        let mut series: Vec<(i64, f64)> = bindings
            .iter()
            .filter_map(|b| {
                let t = DateTime::parse_from_rfc3339(b.get("t")?.lexical()?).ok()?.timestamp();
                let v = b.get("v")?.lexical()?.parse().ok()?;
                Some((t, v))
            })
            .collect();
        series.sort_by_key(|&(t, _)| t);
        series.dedup_by_key(|&mut (t, _)| t);
        out.insert(stream, series);
    }
    out
}

/// Usage detection over each power stream's recent samples, phrased with
/// the activity rules. A stream without an associated appliance still
/// reports generic use.
pub fn whats_happening(store: &Store) -> String {
    let series = power_series(store);
    let Some(latest) = series.values().filter_map(|s| s.last()).map(|&(t, _)| t).max() else {
        return render_activities(&[]);
    };
    let mut inputs = Vec::new();
    for (stream, samples) in &series {
        let recent: Vec<(i64, f64)> =
            samples.iter().copied().filter(|&(t, _)| t > latest - RECENT_WINDOW_SEC).collect();
        let Some(trace) = to_trace(&recent) else { continue };
        let Ok(events) = detect_usage(&trace, UsageThresholds::default()) else { continue };
        let subject = Term::Iri(stream.clone());
        let appliance = store
            .object(&subject, &iri(ns::SOSA_HAS_FEATURE_OF_INTEREST))
            .and_then(|foi| lexical(store, &foi, ns::RDFS_LABEL))
            .unwrap_or_default();
        let location = store
            .object(&subject, &iri(ns::IOT_GENERATED_BY))
            .and_then(|device| lexical(store, &device, ns::SHC_LOCATED_IN));
        inputs.extend(events.into_iter().map(|event| ActivityInput {
            event,
            appliance: appliance.clone(),
            location: location.clone(),
        }));
    }
    let mut statements = infer_activities(&inputs, &builtin_rules());
    let mut seen = BTreeSet::new();
    statements.retain(|s| seen.insert(s.clone()));
    render_activities(&statements)
}

/// Resamples onto the smallest observed spacing, holding the previous
/// value across gaps.
fn to_trace(samples: &[(i64, f64)]) -> Option<PowerTrace> {
    let &(start, first) = samples.first()?;
    let period = samples.windows(2).map(|w| w[1].0 - w[0].0).filter(|&d| d > 0).min().unwrap_or(10);
    let end = samples.last()?.0;
    let mut watts = Vec::new();
    let mut current = first;
    let mut next = samples.iter().peekable();
    let mut t = start;
    while t <= end {
        while let Some(&&(ts, v)) = next.peek() {
            if ts > t {
                break;
            }
            current = v;
            next.next();
        }
        watts.push(current);
        t += period;
    }
    PowerTrace::new(u32::try_from(period).ok()?, start, watts).ok()
}

/// `--find-streams`: IRIs of streams matching both criteria.
pub fn find_streams(store: &Store, quantity: Option<&str>, device_type: Option<&str>) -> Result<Vec<String>, CliError> {
    let parse = |s: &str| Iri::new(s).map_err(|e| CliError::Config(e.to_string()));
    let quantity = quantity.map(parse).transpose()?;
    let device_type = device_type.map(parse).transpose()?;
    let index = StreamIndex::build(store);
    Ok(index
        .find_streams(quantity.as_ref(), device_type.as_ref())
        .into_iter()
        .map(|i| i.to_string())
        .collect())
}

/// `--pattern "S P O"`: matching triples in N-Triples-like form.
pub fn match_pattern(store: &Store, pattern: &str) -> Result<Vec<String>, CliError> {
    let pattern = Pattern::parse(pattern).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(store
        .match_pattern(&pattern)
        .into_iter()
        .map(|t| t.to_string())
        .collect())
}
