//! Turns gateway nodes and measurements into device triples and
//! IoTStream metadata, merges devices seen on both discovery paths, and
//! attaches features of interest.

use std::collections::BTreeSet;

use chrono::{FixedOffset, TimeZone};
use percent_encoding::percent_decode_str;
use thiserror::Error;

use crate::clock::format_timestamp;
use crate::gateway::{AttributeTypeRegistry, Node, Sample};
use crate::ids;
use crate::linker::{self, Candidate, LinkResult, LinkerConfig};
use crate::rdf::{Iri, Pattern, PatternTerm, Store, StoreError, Term, Triple};
use crate::vocab::{ns, Category, DeviceOntology, UnitRegistry, VocabError};

#[derive(Debug, Error)]
pub enum NormalizeError {
    #[error("sample unit {found} does not match stream unit {expected}")]
    UnitMismatch { expected: Iri, found: String },
    #[error("unknown stream {0}")]
    UnknownStream(Iri),
    #[error("appliance label is empty")]
    EmptyLabel,
    #[error(transparent)]
    Vocab(#[from] VocabError),
    #[error(transparent)]
    Store(#[from] StoreError),
}

fn iri(s: &'static str) -> Iri {
    Iri::from_static(s)
}

fn uuid_iri(kind: &str, parts: &[&str]) -> Iri {
    Iri::new(ids::mint(kind, parts).to_string()).expect("UUID text is a valid IRI")
}

fn triple(s: &Iri, p: &'static str, o: impl Into<Term>) -> Triple {
    Triple::new(s.clone(), iri(p), o).expect("well-formed triple")
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IotStreamRecord {
    pub stream: Iri,
    pub generated_by: Iri,
    pub observed_property: Iri,
    pub unit: Iri,
    pub unit_class: Iri,
    pub label: String,
    pub node_id: u32,
    pub attribute_id: u32,
    pub attribute_type: u32,
}

impl IotStreamRecord {
    pub fn to_triples(&self) -> Vec<Triple> {
        let s = &self.stream;
        vec![
            triple(s, ns::RDF_TYPE, iri(ns::IOT_STREAM)),
            triple(s, ns::IOT_GENERATED_BY, self.generated_by.clone()),
            triple(s, ns::SOSA_OBSERVED_PROPERTY, self.observed_property.clone()),
            triple(s, ns::QUDT_UNIT, self.unit.clone()),
            triple(s, ns::RDFS_LABEL, Term::string(self.label.as_str())),
            triple(s, ns::SHC_ATTRIBUTE_ID, Term::integer(self.attribute_id.into())),
            triple(s, ns::SHC_ATTRIBUTE_TYPE, Term::integer(self.attribute_type.into())),
            triple(&self.unit, ns::RDF_TYPE, self.unit_class.clone()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedAttribute {
    pub attribute_id: u32,
    pub unit: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct NormalizerConfig {
    /// Network name of the gateway the nodes came from; scopes device IRIs.
    pub gateway_name: String,
    /// The gateway's own device IRI, if it was discovered.
    pub gateway_device: Option<Iri>,
    pub linker: LinkerConfig,
    /// Type ambiguous devices with their top candidate instead of queueing
    /// them for confirmation.
    pub auto_accept_top: bool,
}

#[derive(Debug, Clone)]
pub struct NormalizedNode {
    pub device: Iri,
    pub label: String,
    pub link: LinkResult,
    /// The class asserted as `rdf:type`, if any.
    pub assigned: Option<Candidate>,
    /// Device and stream metadata.
    pub triples: Vec<Triple>,
    /// Link status, type and candidates; see [`record_link`].
    pub link_triples: Vec<Triple>,
    pub streams: Vec<IotStreamRecord>,
    pub skipped: Vec<SkippedAttribute>,
}

pub fn device_iri(gateway_name: &str, node_id: u32) -> Iri {
    uuid_iri("gateway-node", &[gateway_name, &node_id.to_string()])
}

pub const STATUS_LINKED: &str = "linked";
pub const STATUS_ACCEPTED: &str = "accepted";
pub const STATUS_AMBIGUOUS: &str = "ambiguous";
pub const STATUS_NO_MATCH: &str = "nomatch";
pub const STATUS_CONFIRMED: &str = "confirmed";

/// Triples recording a link decision. Linked (or auto-accepted) devices
/// get their `rdf:type`; unresolved ones keep their ranked candidates for
/// later confirmation.
pub fn link_triples(device: &Iri, result: &LinkResult, auto_accept_top: bool) -> (Vec<Triple>, Option<Candidate>) {
    let mut out = Vec::new();
    let (status, assigned) = match result {
        LinkResult::Linked(c) => (STATUS_LINKED, Some(c.clone())),
        LinkResult::Ambiguous(cs) if auto_accept_top => (STATUS_ACCEPTED, cs.first().cloned()),
        LinkResult::Ambiguous(_) => (STATUS_AMBIGUOUS, None),
        LinkResult::NoMatch => (STATUS_NO_MATCH, None),
    };
    out.push(triple(device, ns::SHC_LINK_STATUS, Term::string(status)));
    if let Some(c) = &assigned {
        out.push(triple(device, ns::RDF_TYPE, c.class.clone()));
    }
    if let (LinkResult::Ambiguous(cs), None) = (result, &assigned) {
        for (rank, c) in cs.iter().enumerate() {
            let rank = rank + 1;
            let cand = Iri::new(format!("{device}#candidate-{rank}")).expect("valid IRI");
            out.extend([
                triple(device, ns::SHC_LINK_CANDIDATE, cand.clone()),
                triple(&cand, ns::RDF_TYPE, iri(ns::SHC_LINK_CANDIDATE_CLASS)),
                triple(&cand, ns::SHC_CANDIDATE_CLASS, c.class.clone()),
                triple(&cand, ns::SHC_CANDIDATE_SCORE, Term::decimal(c.score)),
                triple(&cand, ns::SHC_CANDIDATE_RANK, Term::integer(rank as i64)),
            ]);
        }
    }
    (out, assigned)
}

fn is_resolved(store: &Store, device: &Iri) -> bool {
    let status = store.object(&Term::Iri(device.clone()), &iri(ns::SHC_LINK_STATUS));
    matches!(
        status.as_ref().and_then(Term::lexical),
        Some(STATUS_LINKED | STATUS_ACCEPTED | STATUS_CONFIRMED)
    )
}

/// Stores a fresh link decision unless the device already has a settled
/// type, replacing any earlier unresolved status and candidates. Returns
/// whether anything was written.
pub fn record_link(store: &mut Store, device: &Iri, link_triples: Vec<Triple>) -> Result<bool, StoreError> {
    if is_resolved(store, device) {
        return Ok(false);
    }
    clear_link_records(store, device);
    store.extend(link_triples)?;
    Ok(true)
}

fn clear_link_records(store: &mut Store, device: &Iri) {
    let device_term = Term::Iri(device.clone());
    for cand in store.objects(&device_term, &iri(ns::SHC_LINK_CANDIDATE)) {
        store.remove_matching(&Pattern::new(cand, PatternTerm::var("p"), PatternTerm::var("o")));
    }
    store.remove_matching(&Pattern::new(device_term.clone(), iri(ns::SHC_LINK_CANDIDATE), PatternTerm::var("c")));
    store.remove_matching(&Pattern::new(device_term, iri(ns::SHC_LINK_STATUS), PatternTerm::var("s")));
}

/// Device categories that can plausibly produce the given quantity kinds.
/// `None` when the attributes say nothing about the device.
fn plausible_categories(kinds: &BTreeSet<Iri>) -> Option<BTreeSet<Category>> {
    let mut cats = BTreeSet::new();
    for k in kinds {
        match k.as_str() {
            ns::QK_POWER | ns::QK_ENERGY => {
                cats.insert(Category::SmartPlug);
            }
            "qk:Temperature" | "qk:Illuminance" => {
                cats.insert(Category::Sensor);
            }
            _ => {}
        }
    }
    (!cats.is_empty()).then_some(cats)
}

/// Device triples and stream records for one gateway node.
///
/// The name is matched against class labels, restricted to classes whose
/// category fits the quantities the node measures: a node reporting watts
/// is a plug, whatever its user-given name suggests.
pub fn normalize_node(
    node: &Node,
    ontology: &DeviceOntology,
    units: &UnitRegistry,
    types: &AttributeTypeRegistry,
    config: &NormalizerConfig,
) -> NormalizedNode {
    let device = device_iri(&config.gateway_name, node.id);
    let label = percent_decode_str(&node.name).decode_utf8_lossy().into_owned();

    let mut streams = Vec::new();
    let mut skipped = Vec::new();
    for attr in &node.attributes {
        let unit_text = percent_decode_str(&attr.unit).decode_utf8_lossy();
        match units.lookup(&unit_text) {
            Ok(entry) => {
                let type_name = types
                    .name(attr.kind)
                    .map_or_else(|| format!("attribute {}", attr.id), str::to_string);
                streams.push(IotStreamRecord {
                    stream: uuid_iri(
                        "stream",
                        &[&config.gateway_name, &node.id.to_string(), &attr.id.to_string()],
                    ),
                    generated_by: device.clone(),
                    observed_property: entry.quantity_kind.clone(),
                    unit: entry.iri.clone(),
                    unit_class: entry.unit_class.clone(),
                    label: format!("{label} {type_name}"),
                    node_id: node.id,
                    attribute_id: attr.id,
                    attribute_type: attr.kind,
                });
            }
            Err(e) => skipped.push(SkippedAttribute {
                attribute_id: attr.id,
                unit: attr.unit.clone(),
                reason: e.to_string(),
            }),
        }
    }

    let kinds: BTreeSet<Iri> = streams.iter().map(|s| s.observed_property.clone()).collect();
    let link = match plausible_categories(&kinds) {
        Some(cats) => linker::link_filtered(&label, ontology, &config.linker, |c| cats.contains(&c.category)),
        None => linker::link(&label, ontology, &config.linker),
    };
    let (link_triples, assigned) = link_triples(&device, &link, config.auto_accept_top);
    let mut triples = Vec::new();
    triples.push(triple(&device, ns::RDFS_LABEL, Term::string(label.as_str())));
    triples.push(triple(&device, ns::SHC_NODE_ID, Term::integer(node.id.into())));
    if let Some(gw) = &config.gateway_device {
        triples.push(triple(&device, ns::SHC_CONNECTED_VIA, gw.clone()));
    }
    if let Some(ip) = &node.ip {
        triples.push(triple(&device, ns::SHC_HAS_IP_ADDRESS, Term::string(ip.as_str())));
    }
    if let Some(room) = &node.room {
        triples.push(triple(&device, ns::SHC_LOCATED_IN, Term::string(room.as_str())));
    }
    for s in &streams {
        triples.extend(s.to_triples());
    }
    NormalizedNode {
        device,
        label,
        link,
        assigned,
        triples,
        link_triples,
        streams,
        skipped,
    }
}

/// Observation triples for one sample of a stream. The result is a
/// `qudt:QuantityValue` whose unit carries the registry's unit class.
pub fn normalize_observation(
    stream: &IotStreamRecord,
    sample: &Sample,
    units: &UnitRegistry,
    offset: FixedOffset,
) -> Result<Vec<Triple>, NormalizeError> {
    let entry = units.lookup(&percent_decode_str(&sample.unit).decode_utf8_lossy())?;
    if entry.iri != stream.unit {
        return Err(NormalizeError::UnitMismatch {
            expected: stream.unit.clone(),
            found: sample.unit.clone(),
        });
    }
    let time = offset
        .timestamp_opt(sample.timestamp, 0)
        .single()
        .ok_or_else(|| StoreError::InvalidTriple(format!("timestamp {} out of range", sample.timestamp)))?;
    let time = format_timestamp(&time);
    let obs = uuid_iri("observation", &[stream.stream.as_str(), &sample.timestamp.to_string()]);
    let result = Iri::new(format!("{obs}#result")).expect("valid IRI");
    let (obs_class, result_class) = match stream.observed_property.as_str() {
        ns::QK_POWER => (ns::SHC_ELECTRIC_POWER_OBSERVATION, ns::SHC_ELECTRIC_POWER_RESULT),
        ns::QK_ENERGY => (ns::SHC_ELECTRIC_ENERGY_OBSERVATION, ns::SHC_ELECTRIC_ENERGY_RESULT),
        _ => (ns::SOSA_OBSERVATION, ns::SOSA_RESULT),
    };
    Ok(vec![
        triple(&obs, ns::RDF_TYPE, iri(obs_class)),
        triple(&obs, ns::IOT_BELONGS_TO, stream.stream.clone()),
        triple(&obs, ns::SOSA_HAS_RESULT, result.clone()),
        triple(&obs, ns::SOSA_RESULT_TIME, Term::typed(time, iri(ns::XSD_DATETIME))),
        triple(&result, ns::RDF_TYPE, iri(result_class)),
        triple(&result, ns::RDF_TYPE, iri(ns::QUDT_QUANTITY_VALUE)),
        triple(&result, ns::QUDT_NUMERIC_VALUE, Term::decimal(sample.value)),
        triple(&result, ns::QUDT_UNIT, entry.iri.clone()),
        triple(&entry.iri, ns::RDF_TYPE, entry.unit_class.clone()),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum MergeReason {
    IpMatch,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MergeRecord {
    pub kept: Iri,
    pub merged: Iri,
    pub reason: MergeReason,
}

/// Links every network-discovered device to the gateway node reporting
/// the same IP address with `owl:sameAs`, keeping the gateway-side IRI.
/// Devices without IP evidence are left as separate instances.
pub fn deduplicate(store: &mut Store) -> Result<Vec<MergeRecord>, NormalizeError> {
    let ip = iri(ns::SHC_HAS_IP_ADDRESS);
    let by_ip = store.match_pattern(&Pattern::new(PatternTerm::var("d"), ip, PatternTerm::var("ip")));
    let is_gateway_side = |s: &Term| store.object(s, &iri(ns::SHC_NODE_ID)).is_some();
    let is_network_side = |s: &Term| store.object(s, &iri(ns::SHC_HAS_NETWORK_NAME)).is_some();
    let mut records = BTreeSet::new();
    for g in by_ip.iter().filter(|t| is_gateway_side(&t.subject)) {
        for n in by_ip.iter().filter(|t| is_network_side(&t.subject)) {
            if g.object != n.object || g.subject == n.subject {
                continue;
            }
            if let (Term::Iri(kept), Term::Iri(merged)) = (&g.subject, &n.subject) {
                records.insert(MergeRecord {
                    kept: kept.clone(),
                    merged: merged.clone(),
                    reason: MergeReason::IpMatch,
                });
            }
        }
    }
    for r in &records {
        store.insert(triple(&r.kept, ns::OWL_SAME_AS, r.merged.clone()))?;
    }
    Ok(records.into_iter().collect())
}

pub fn feature_of_interest(stream: &Iri, appliance: &str) -> Iri {
    uuid_iri("feature-of-interest", &[stream.as_str(), appliance])
}

/// Points the stream at a feature of interest labelled with the
/// appliance type, replacing any earlier association.
pub fn associate_entity(store: &mut Store, stream: &Iri, appliance: &str) -> Result<Triple, NormalizeError> {
    let stream_term = Term::Iri(stream.clone());
    let is_stream = store.contains(&triple(stream, ns::RDF_TYPE, iri(ns::IOT_STREAM)));
    if !is_stream {
        return Err(NormalizeError::UnknownStream(stream.clone()));
    }
    if appliance.trim().is_empty() {
        return Err(NormalizeError::EmptyLabel);
    }
    let foi = feature_of_interest(stream, appliance);
    let link = triple(stream, ns::SOSA_HAS_FEATURE_OF_INTEREST, foi.clone());
    for old in store.objects(&stream_term, &iri(ns::SOSA_HAS_FEATURE_OF_INTEREST)) {
        if old != Term::Iri(foi.clone()) {
            store.remove(&Triple::new(stream.clone(), iri(ns::SOSA_HAS_FEATURE_OF_INTEREST), old)?);
        }
    }
    store.extend([
        triple(&foi, ns::RDF_TYPE, iri(ns::SOSA_FEATURE_OF_INTEREST)),
        triple(&foi, ns::RDFS_LABEL, Term::string(appliance)),
        link.clone(),
    ])?;
    Ok(link)
}

/// A device whose link awaits confirmation.
#[derive(Debug, Clone, PartialEq)]
pub struct PendingLink {
    pub device: Iri,
    pub label: String,
    pub status: String,
    pub candidates: Vec<Candidate>,
}

pub fn pending_links(store: &Store) -> Vec<PendingLink> {
    let status_pred = iri(ns::SHC_LINK_STATUS);
    let mut out = Vec::new();
    for status in [STATUS_AMBIGUOUS, STATUS_NO_MATCH] {
        for device in store.subjects(&status_pred, &Term::string(status)) {
            let Term::Iri(device_iri) = &device else { continue };
            let label = store
                .object(&device, &iri(ns::RDFS_LABEL))
                .and_then(|t| t.lexical().map(str::to_string))
                .unwrap_or_default();
            let mut candidates: Vec<(i64, Candidate)> = store
                .objects(&device, &iri(ns::SHC_LINK_CANDIDATE))
                .into_iter()
                .filter_map(|cand| {
                    let class = store.object(&cand, &iri(ns::SHC_CANDIDATE_CLASS))?;
                    let score = store.object(&cand, &iri(ns::SHC_CANDIDATE_SCORE))?;
                    let rank = store.object(&cand, &iri(ns::SHC_CANDIDATE_RANK))?;
                    Some((
                        rank.lexical()?.parse().ok()?,
                        Candidate {
                            class: class.as_iri()?.clone(),
                            score: score.lexical()?.parse().ok()?,
                        },
                    ))
                })
                .collect();
            candidates.sort_by_key(|(rank, _)| *rank);
            out.push(PendingLink {
                device: device_iri.clone(),
                label,
                status: status.to_string(),
                candidates: candidates.into_iter().map(|(_, c)| c).collect(),
            });
        }
    }
    out.sort_by(|a, b| a.device.cmp(&b.device));
    out
}

/// Applies a confirmed class and clears the candidate records.
pub fn confirm_link(store: &mut Store, ontology: &DeviceOntology, device: &Iri, class: &Iri) -> Result<(), linker::LinkError> {
    linker::apply_link(store, ontology, device, class)?;
    clear_link_records(store, device);
    store.insert(triple(device, ns::SHC_LINK_STATUS, Term::string(STATUS_CONFIRMED)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{parse_node_reply, Attribute};

    fn config(auto: bool) -> NormalizerConfig {
        NormalizerConfig {
            gateway_name: "homee-0005510F1A3D".into(),
            gateway_device: None,
            linker: LinkerConfig::default(),
            auto_accept_top: auto,
        }
    }

    fn node8() -> Node {
        let mut n = parse_node_reply(r#"{"node":{"added":1550568947,"attributes":[{"current_value":2.9,"id":64,"last_changed":1550570278,"node_id":8,"type":3,"unit":"W"}]}}"#).unwrap();
        n.id = 8;
        n.name = "Fibaro%20Kitchen".into();
        n
    }

    fn registries() -> (DeviceOntology, UnitRegistry, AttributeTypeRegistry) {
        (DeviceOntology::builtin(), UnitRegistry::builtin(), AttributeTypeRegistry::default())
    }

    #[test]
    fn node_8_auto_accepted_as_wall_plug() {
        let (onto, units, types) = registries();
        let out = normalize_node(&node8(), &onto, &units, &types, &config(true));
        assert!(matches!(out.link, LinkResult::Ambiguous(_)));
        assert!(out.link_triples.contains(&triple(&out.device, ns::RDF_TYPE, iri("devices:FibaroWallPlug"))));
        assert!(out.triples.contains(&triple(&out.device, ns::RDFS_LABEL, Term::string("Fibaro Kitchen"))));
        assert_eq!(out.streams.len(), 1);
        assert_eq!(out.streams[0].observed_property.as_str(), ns::QK_POWER);
        assert_eq!(out.streams[0].unit.as_str(), "unit:W");
    }

    #[test]
    fn node_8_without_auto_accept_is_queued() {
        let (onto, units, types) = registries();
        let out = normalize_node(&node8(), &onto, &units, &types, &config(false));
        assert!(out.assigned.is_none());
        let typed = |ts: &[Triple]| ts.iter().any(|t| t.predicate == Term::Iri(iri(ns::RDF_TYPE)) && t.subject == Term::Iri(out.device.clone()));
        assert!(!typed(&out.triples) && !typed(&out.link_triples));
        let mut store = Store::new();
        store.extend(out.triples.clone()).unwrap();
        assert!(record_link(&mut store, &out.device, out.link_triples.clone()).unwrap());
        let pending = pending_links(&store);
        assert_eq!(pending.len(), 1);
        assert_eq!(pending[0].label, "Fibaro Kitchen");
        assert_eq!(pending[0].candidates[0].class.as_str(), "devices:FibaroWallPlug");
        confirm_link(&mut store, &onto, &out.device, &iri("devices:FibaroWallPlug")).unwrap();
        assert!(pending_links(&store).is_empty());
        assert!(store.contains(&triple(&out.device, ns::RDF_TYPE, iri("devices:FibaroWallPlug"))));
        // A later crawl does not reopen the confirmed link.
        let snapshot = store.clone();
        assert!(!record_link(&mut store, &out.device, out.link_triples.clone()).unwrap());
        assert_eq!(store, snapshot);
    }

    #[test]
    fn energy_units_and_skips() {
        let (onto, units, types) = registries();
        let mut node = node8();
        node.attributes.push(Attribute { current_value: 1.5, id: 65, last_changed: 1, node_id: 8, kind: 4, unit: "kWh".into() });
        node.attributes.push(Attribute { current_value: 0.0, id: 66, last_changed: 1, node_id: 8, kind: 9, unit: "furlong".into() });
        let out = normalize_node(&node, &onto, &units, &types, &config(true));
        assert_eq!(out.streams.len(), 2);
        assert_eq!(out.streams[1].observed_property.as_str(), ns::QK_ENERGY);
        assert_eq!(out.skipped.len(), 1);
        assert_eq!(out.skipped[0].attribute_id, 66);

        node.attributes.clear();
        let out = normalize_node(&node, &onto, &units, &types, &config(true));
        assert!(out.streams.is_empty());
        assert!(out.triples.contains(&triple(&out.device, ns::RDFS_LABEL, Term::string("Fibaro Kitchen"))));
    }

    #[test]
    fn observation_triples() {
        let (onto, units, types) = registries();
        let out = normalize_node(&node8(), &onto, &units, &types, &config(true));
        let offset = FixedOffset::east_opt(3600).unwrap();
        let sample = Sample { timestamp: 1550570278, value: 2.9, unit: "W".into() };
        let triples = normalize_observation(&out.streams[0], &sample, &units, offset).unwrap();
        assert!(triples.iter().any(|t| t.object == Term::decimal(2.9)));
        assert!(triples.iter().any(|t| t.object == Term::Iri(iri("qudt:PowerUnit"))));
        assert!(triples.iter().any(|t| t.object == Term::Iri(iri(ns::SHC_ELECTRIC_POWER_OBSERVATION))));
        assert!(triples.iter().any(|t| t.object.lexical() == Some("2019-02-19T10:57:58+01:00")));

        let zero = Sample { value: 0.0, ..sample.clone() };
        assert!(normalize_observation(&out.streams[0], &zero, &units, offset).unwrap().iter().any(|t| t.object == Term::decimal(0.0)));
        let wrong = Sample { unit: "kWh".into(), ..sample };
        assert!(matches!(
            normalize_observation(&out.streams[0], &wrong, &units, offset),
            Err(NormalizeError::UnitMismatch { .. })
        ));
    }

    #[test]
    fn associate_is_idempotent_and_checks_stream() {
        let (onto, units, types) = registries();
        let out = normalize_node(&node8(), &onto, &units, &types, &config(true));
        let mut store = Store::new();
        store.extend(out.triples).unwrap();
        let stream = out.streams[0].stream.clone();
        associate_entity(&mut store, &stream, "kettle").unwrap();
        let snapshot = store.clone();
        associate_entity(&mut store, &stream, "kettle").unwrap();
        assert_eq!(store, snapshot);
        assert!(matches!(
            associate_entity(&mut store, &iri("nope"), "kettle"),
            Err(NormalizeError::UnknownStream(_))
        ));
        associate_entity(&mut store, &stream, "toaster").unwrap();
        let fois = store.objects(&Term::Iri(stream), &iri(ns::SOSA_HAS_FEATURE_OF_INTEREST));
        assert_eq!(fois.len(), 1);
    }
}
