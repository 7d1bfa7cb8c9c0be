//! A small JSON-LD subset: one subject per document, a fixed context.
//!
//! Keys other than `@id`/`@type` resolve through [`CONTEXT`]. A key that
//! already looks like a compact IRI (contains `:`) is used as the
//! predicate verbatim. Nested objects become separate resources
//! referenced by `@id` (or a generated blank node when they have none).

use serde_json::{Map, Value};

use super::term::{Iri, Term, Triple};
use super::{Store, StoreError};
use crate::vocab::ns;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coercion {
    None,
    /// String values are IRIs (`"@type": "@id"` in a JSON-LD context).
    Id,
    /// String values are literals of this datatype.
    Datatype(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct ContextEntry {
    pub key: &'static str,
    pub predicate: &'static str,
    pub coercion: Coercion,
}

const fn entry(key: &'static str, predicate: &'static str, coercion: Coercion) -> ContextEntry {
    ContextEntry {
        key,
        predicate,
        coercion,
    }
}

/// Key to predicate table. The first entry for a predicate is the key used
/// on output; later entries are input aliases.
pub const CONTEXT: &[ContextEntry] = &[
    entry("label", ns::RDFS_LABEL, Coercion::None),
    entry("hasTimeStamp", ns::SHC_HAS_TIMESTAMP, Coercion::Datatype(ns::XSD_DATETIME)),
    entry("hasNetworkName", ns::SHC_HAS_NETWORK_NAME, Coercion::None),
    entry("hasIpAddress", ns::SHC_HAS_IP_ADDRESS, Coercion::None),
    entry("manufacturer", ns::SHC_MANUFACTURER, Coercion::None),
    entry("locationUrl", ns::SHC_LOCATION_URL, Coercion::None),
    entry("serviceType", ns::SHC_SERVICE_TYPE, Coercion::None),
    entry("servicePort", ns::SHC_SERVICE_PORT, Coercion::None),
    entry("discoverySource", ns::SHC_DISCOVERY_SOURCE, Coercion::None),
    entry("resultTime", ns::SOSA_RESULT_TIME, Coercion::Datatype(ns::XSD_DATETIME)),
    entry("hasResult", ns::SOSA_HAS_RESULT, Coercion::Id),
    entry("discoveredDevice", ns::SHC_DISCOVERED_DEVICE, Coercion::Id),
    entry("observedDevice", ns::SHC_OBSERVED_DEVICE, Coercion::Id),
    entry("observedProperty", ns::SOSA_OBSERVED_PROPERTY, Coercion::Id),
    entry("hasFeatureOfInterest", ns::SOSA_HAS_FEATURE_OF_INTEREST, Coercion::Id),
    entry("generatedBy", ns::IOT_GENERATED_BY, Coercion::Id),
    entry("belongsTo", ns::IOT_BELONGS_TO, Coercion::Id),
    entry("unit", ns::QUDT_UNIT, Coercion::Id),
    entry("numericValue", ns::QUDT_NUMERIC_VALUE, Coercion::Datatype(ns::XSD_DECIMAL)),
    entry("sameAs", ns::OWL_SAME_AS, Coercion::Id),
    entry("nodeId", ns::SHC_NODE_ID, Coercion::None),
    entry("connectedVia", ns::SHC_CONNECTED_VIA, Coercion::Id),
    entry("locatedIn", ns::SHC_LOCATED_IN, Coercion::None),
    entry("attributeId", ns::SHC_ATTRIBUTE_ID, Coercion::None),
    entry("attributeType", ns::SHC_ATTRIBUTE_TYPE, Coercion::None),
    entry("linkStatus", ns::SHC_LINK_STATUS, Coercion::None),
    entry("linkCandidate", ns::SHC_LINK_CANDIDATE, Coercion::Id),
    entry("candidateClass", ns::SHC_CANDIDATE_CLASS, Coercion::Id),
    entry("candidateScore", ns::SHC_CANDIDATE_SCORE, Coercion::Datatype(ns::XSD_DECIMAL)),
    entry("candidateRank", ns::SHC_CANDIDATE_RANK, Coercion::None),
    entry("applianceDetection", ns::SHC_APPLIANCE_DETECTION, Coercion::None),
    // Alias seen in hand-written discovery documents.
    entry("@label", ns::RDFS_LABEL, Coercion::None),
];

fn by_key(key: &str) -> Option<&'static ContextEntry> {
    CONTEXT.iter().find(|e| e.key == key)
}

fn by_predicate(predicate: &str) -> Option<&'static ContextEntry> {
    CONTEXT.iter().find(|e| e.predicate == predicate)
}

fn id_term(text: &str) -> Result<Term, StoreError> {
    match text.strip_prefix("_:") {
        Some(label) => Term::blank(label),
        None => Term::iri(text),
    }
}

fn id_text(term: &Term) -> String {
    match term {
        Term::Iri(i) => i.to_string(),
        Term::Blank(b) => format!("_:{b}"),
        Term::Literal { .. } => unreachable!("literal used as node id"),
    }
}

/// Parse a single-subject document into triples.
pub fn from_jsonld(doc: &Value) -> Result<Vec<Triple>, StoreError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| StoreError::InvalidJsonLd("document must be an object".into()))?;
    let id = obj.get("@id").ok_or(StoreError::MissingId)?;
    let id = id
        .as_str()
        .ok_or_else(|| StoreError::InvalidJsonLd("@id must be a string".into()))?;
    let mut triples = Vec::new();
    let mut blank_counter = 0usize;
    let subject = id_term(id)?;
    node_triples(&subject, obj, &mut triples, &mut blank_counter)?;
    triples.sort();
    triples.dedup();
    Ok(triples)
}

fn node_triples(
    subject: &Term,
    obj: &Map<String, Value>,
    out: &mut Vec<Triple>,
    blanks: &mut usize,
) -> Result<(), StoreError> {
    for (key, value) in obj {
        match key.as_str() {
            "@id" => continue,
            "@context" => {
                return Err(StoreError::InvalidJsonLd(
                    "inline @context is not supported".into(),
                ))
            }
            "@type" => {
                for v in as_list(value) {
                    let t = v.as_str().ok_or_else(|| {
                        StoreError::InvalidJsonLd("@type values must be strings".into())
                    })?;
                    out.push(Triple::new(
                        subject.clone(),
                        Iri::from_static(ns::RDF_TYPE),
                        Term::iri(t)?,
                    )?);
                }
            }
            _ => {
                let (predicate, coercion) = match by_key(key) {
                    Some(e) => (Iri::new(e.predicate)?, e.coercion),
                    None if key.contains(':') && !key.starts_with('@') => {
                        (Iri::new(key.as_str())?, Coercion::None)
                    }
                    None => return Err(StoreError::UnknownContextKey(key.clone())),
                };
                for v in as_list(value) {
                    let object = value_term(v, coercion, out, blanks)?;
                    out.push(Triple::new(subject.clone(), predicate.clone(), object)?);
                }
            }
        }
    }
    Ok(())
}

fn as_list(value: &Value) -> Vec<&Value> {
    match value {
        Value::Array(items) => items.iter().collect(),
        other => vec![other],
    }
}

fn value_term(
    value: &Value,
    coercion: Coercion,
    out: &mut Vec<Triple>,
    blanks: &mut usize,
) -> Result<Term, StoreError> {
    match value {
        Value::String(s) => match coercion {
            Coercion::Id => id_term(s),
            Coercion::Datatype(dt) => Ok(Term::typed(s.clone(), Iri::new(dt)?)),
            Coercion::None => Ok(Term::string(s.clone())),
        },
        Value::Number(n) => {
            if let Coercion::Datatype(dt) = coercion {
                return Ok(Term::typed(n.to_string(), Iri::new(dt)?));
            }
            if n.is_i64() || n.is_u64() {
                Ok(Term::typed(n.to_string(), Iri::from_static(ns::XSD_INTEGER)))
            } else {
                Ok(Term::typed(n.to_string(), Iri::from_static(ns::XSD_DECIMAL)))
            }
        }
        Value::Bool(b) => Ok(Term::typed(b.to_string(), Iri::from_static(ns::XSD_BOOLEAN))),
        Value::Object(map) => {
            if let Some(v) = map.get("@value") {
                let lexical = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    Value::Bool(b) => b.to_string(),
                    _ => return Err(StoreError::InvalidJsonLd("bad @value".into())),
                };
                let datatype = match map.get("@type") {
                    Some(Value::String(dt)) => Iri::new(dt.as_str())?,
                    Some(_) => return Err(StoreError::InvalidJsonLd("bad @type".into())),
                    None => Iri::from_static(ns::XSD_STRING),
                };
                return Ok(Term::typed(lexical, datatype));
            }
            let node = match map.get("@id") {
                Some(Value::String(id)) => id_term(id)?,
                Some(_) => return Err(StoreError::InvalidJsonLd("@id must be a string".into())),
                None => {
                    let label = format!("genid{blanks}");
                    *blanks += 1;
                    Term::blank(label)?
                }
            };
            node_triples(&node, map, out, blanks)?;
            Ok(node)
        }
        Value::Null | Value::Array(_) => {
            Err(StoreError::InvalidJsonLd("unsupported value".into()))
        }
    }
}

/// Serialise the triples whose subject is `subject`. Objects that are
/// resources are emitted as `@id` references, never inlined.
pub fn to_jsonld(store: &Store, subject: &Term) -> Result<Value, StoreError> {
    if !store.has_subject(subject) {
        return Err(StoreError::UnknownSubject(subject.to_string()));
    }
    let mut doc = Map::new();
    doc.insert("@id".into(), Value::String(id_text(subject)));
    let mut grouped: Vec<(String, Vec<Value>)> = Vec::new();
    let mut types = Vec::new();
    let rdf_type = Term::Iri(Iri::from_static(ns::RDF_TYPE));
    for t in store.match_pattern(&super::Pattern::new(
        subject.clone(),
        super::PatternTerm::var("p"),
        super::PatternTerm::var("o"),
    )) {
        if t.predicate == rdf_type {
            if let Term::Iri(i) = &t.object {
                types.push(Value::String(i.to_string()));
                continue;
            }
        }
        let predicate = t.predicate.as_iri().expect("validated predicate").as_str();
        let (key, coercion) = match by_predicate(predicate) {
            Some(e) => (e.key.to_string(), e.coercion),
            None => (predicate.to_string(), Coercion::None),
        };
        let value = object_value(&t.object, coercion);
        match grouped.iter_mut().find(|(k, _)| *k == key) {
            Some((_, vals)) => vals.push(value),
            None => grouped.push((key, vec![value])),
        }
    }
    match types.len() {
        0 => {}
        1 => {
            doc.insert("@type".into(), types.pop().unwrap());
        }
        _ => {
            doc.insert("@type".into(), Value::Array(types));
        }
    }
    for (key, mut vals) in grouped {
        let v = if vals.len() == 1 {
            vals.pop().unwrap()
        } else {
            Value::Array(vals)
        };
        doc.insert(key, v);
    }
    Ok(Value::Object(doc))
}

fn object_value(term: &Term, coercion: Coercion) -> Value {
    match term {
        Term::Iri(_) | Term::Blank(_) => {
            if coercion == Coercion::Id {
                Value::String(id_text(term))
            } else {
                let mut m = Map::new();
                m.insert("@id".into(), Value::String(id_text(term)));
                Value::Object(m)
            }
        }
        Term::Literal { lexical, datatype } => {
            let dt = datatype.as_str();
            if let Coercion::Datatype(c) = coercion {
                if c == dt {
                    return Value::String(lexical.clone());
                }
            }
            if coercion == Coercion::None {
                if dt == ns::XSD_STRING {
                    return Value::String(lexical.clone());
                }
                if dt == ns::XSD_INTEGER {
                    if let Ok(n) = lexical.parse::<i64>() {
                        if n.to_string() == *lexical {
                            return Value::from(n);
                        }
                    }
                }
                if dt == ns::XSD_BOOLEAN && (lexical == "true" || lexical == "false") {
                    return Value::Bool(lexical == "true");
                }
            }
            let mut m = Map::new();
            m.insert("@value".into(), Value::String(lexical.clone()));
            m.insert("@type".into(), Value::String(dt.to_string()));
            Value::Object(m)
        }
    }
}
