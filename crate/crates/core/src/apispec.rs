//! Endpoint inventories from OpenAPI documents, plus a separate
//! developer-written enrichment file saying which endpoints carry device
//! metadata and which carry measurements.
//!
//! Only paths, methods, summaries and parameters are read. Request and
//! response schemas are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("document has no paths object")]
    MissingPaths,
    #[error("document has no openapi version field")]
    MissingVersion,
    #[error("unsupported non-local reference {0:?}")]
    UnsupportedRef(String),
    #[error("unresolved reference {0:?}")]
    UnresolvedRef(String),
    #[error("malformed parameter: {0}")]
    MalformedParameter(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("enrichment names unknown endpoint {method} {path}")]
    UnknownEndpoint { method: Method, path: String },
    #[error("duplicate enrichment for {method} {path}")]
    DuplicateEntry { method: Method, path: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Get,
    Post,
    Put,
    Delete,
    Patch,
}

impl Method {
    const ALL: [(&'static str, Method); 5] = [
        ("get", Method::Get),
        ("post", Method::Post),
        ("put", Method::Put),
        ("delete", Method::Delete),
        ("patch", Method::Patch),
    ];

    fn from_key(key: &str) -> Option<Method> {
        Self::ALL.iter().find(|(k, _)| *k == key).map(|(_, m)| *m)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, _) = Self::ALL.iter().find(|(_, m)| m == self).expect("listed");
        f.write_str(&name.to_ascii_uppercase())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamLocation {
    Path,
    Query,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameter {
    pub name: String,
    pub location: ParamLocation,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointDescriptor {
    pub method: Method,
    pub path: String,
    pub summary: String,
    pub parameters: Vec<Parameter>,
}

fn path_variables(template: &str) -> Result<Vec<&str>, ApiError> {
    let mut vars = Vec::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        let close = rest[open..]
            .find('}')
            .ok_or_else(|| ApiError::InvalidDocument(format!("unbalanced braces in {template}")))?;
        vars.push(&rest[open + 1..open + close]);
        rest = &rest[open + close + 1..];
    }
    Ok(vars)
}

fn resolve<'a>(doc: &'a Value, value: &'a Value) -> Result<&'a Value, ApiError> {
    let Some(reference) = value.get("$ref") else {
        return Ok(value);
    };
    let reference = reference
        .as_str()
        .ok_or_else(|| ApiError::InvalidDocument("$ref is not a string".into()))?;
    let Some(pointer) = reference.strip_prefix('#') else {
        return Err(ApiError::UnsupportedRef(reference.to_string()));
    };
    let target = doc
        .pointer(pointer)
        .ok_or_else(|| ApiError::UnresolvedRef(reference.to_string()))?;
    // One level only.
    if target.get("$ref").is_some() {
        return Err(ApiError::UnsupportedRef(reference.to_string()));
    }
    Ok(target)
}

/// `None` for header and cookie parameters, which are not modelled.
fn parse_parameter(doc: &Value, raw: &Value) -> Result<Option<Parameter>, ApiError> {
    let p = resolve(doc, raw)?;
    let name = p
        .get("name")
        .and_then(Value::as_str)
        .filter(|n| !n.is_empty())
        .ok_or_else(|| ApiError::MalformedParameter(format!("missing name in {p}")))?;
    let location = match p.get("in").and_then(Value::as_str) {
        Some("path") => ParamLocation::Path,
        Some("query") => ParamLocation::Query,
        Some("header" | "cookie") => return Ok(None),
        _ => return Err(ApiError::MalformedParameter(format!("bad location for {name}"))),
    };
    let required = match p.get("required") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(ApiError::MalformedParameter(format!("required of {name} is not a boolean"))),
    };
    Ok(Some(Parameter {
        name: name.to_string(),
        // path parameters are always required
        required: required || location == ParamLocation::Path,
        location,
    }))
}

fn parse_parameter_list(doc: &Value, list: Option<&Value>) -> Result<Vec<Parameter>, ApiError> {
    let Some(list) = list else {
        return Ok(Vec::new());
    };
    let items = list
        .as_array()
        .ok_or_else(|| ApiError::MalformedParameter("parameters is not an array".into()))?;
    let mut out = Vec::new();
    for item in items {
        if let Some(p) = parse_parameter(doc, item)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// One descriptor per (path, method), sorted by path then method.
/// Path-level parameters apply to every operation unless an operation
/// redeclares the same name and location.
pub fn parse_openapi(doc: &Value) -> Result<Vec<EndpointDescriptor>, ApiError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| ApiError::InvalidDocument("not an object".into()))?;
    if !obj.get("openapi").is_some_and(Value::is_string) {
        return Err(ApiError::MissingVersion);
    }
    let paths = obj
        .get("paths")
        .and_then(Value::as_object)
        .ok_or(ApiError::MissingPaths)?;
    let mut out = Vec::new();
    for (path, item) in paths {
        let item = resolve(doc, item)?;
        let item_obj = item
            .as_object()
            .ok_or_else(|| ApiError::InvalidDocument(format!("path item {path} is not an object")))?;
        let shared = parse_parameter_list(doc, item_obj.get("parameters"))?;
        let vars = path_variables(path)?;
        for (key, op) in item_obj {
            let Some(method) = Method::from_key(key) else {
                continue;
            };
            if !op.is_object() {
                return Err(ApiError::InvalidDocument(format!("{key} {path} is not an object")));
            }
            let own = parse_parameter_list(doc, op.get("parameters"))?;
            let mut parameters: Vec<Parameter> = shared
                .iter()
                .filter(|s| !own.iter().any(|o| o.name == s.name && o.location == s.location))
                .cloned()
                .collect();
            parameters.extend(own);
            for v in &vars {
                if !parameters
                    .iter()
                    .any(|p| p.location == ParamLocation::Path && p.name == *v)
                {
                    return Err(ApiError::MalformedParameter(format!(
                        "{method} {path} declares no path parameter {v:?}"
                    )));
                }
            }
            let summary = op
                .get("summary")
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_string();
            out.push(EndpointDescriptor {
                method,
                path: path.clone(),
                summary,
                parameters,
            });
        }
    }
    out.sort_by(|a, b| (&a.path, a.method).cmp(&(&b.path, b.method)));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    DeviceMetadata,
    MeasurementData,
    Control,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnrichmentEntry {
    pub method: Method,
    pub path: String,
    pub role: Role,
    /// JSON pointers such as `deviceListPointer` or `unitFieldPointer`.
    #[serde(default)]
    pub hints: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Enrichment {
    pub entries: Vec<EnrichmentEntry>,
}

impl Enrichment {
    pub fn load(path: &Path, spec: &[EndpointDescriptor]) -> Result<Self, ApiError> {
        Self::from_json(&std::fs::read_to_string(path)?, spec)
    }

    pub fn from_json(text: &str, spec: &[EndpointDescriptor]) -> Result<Self, ApiError> {
        let entries: Vec<EnrichmentEntry> =
            serde_json::from_str(text).map_err(|e| ApiError::Parse(e.to_string()))?;
        Self::new(entries, spec)
    }

    /// Every entry must name an endpoint of `spec`, at most once.
    pub fn new(entries: Vec<EnrichmentEntry>, spec: &[EndpointDescriptor]) -> Result<Self, ApiError> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !spec.iter().any(|d| d.method == e.method && d.path == e.path) {
                return Err(ApiError::UnknownEndpoint {
                    method: e.method,
                    path: e.path.clone(),
                });
            }
            if !seen.insert((e.method, e.path.as_str())) {
                return Err(ApiError::DuplicateEntry {
                    method: e.method,
                    path: e.path.clone(),
                });
            }
        }
        Ok(Enrichment { entries })
    }

    pub fn entry_for(&self, endpoint: &EndpointDescriptor) -> Option<&EnrichmentEntry> {
        self.entries
            .iter()
            .find(|e| e.method == endpoint.method && e.path == endpoint.path)
    }
}

/// Endpoint order is preserved.
pub fn endpoints_with_role<'a>(
    spec: &'a [EndpointDescriptor],
    enrichment: &Enrichment,
    role: Role,
) -> Vec<&'a EndpointDescriptor> {
    spec.iter()
        .filter(|d| enrichment.entry_for(d).is_some_and(|e| e.role == role))
        .collect()
}

const HOMEE_SPEC: &str = include_str!("../data/homee-openapi.json");
const HOMEE_ENRICHMENT: &str = include_str!("../data/homee-enrichment.json");

/// The bundled description of the simulated gateway's API and its
/// enrichment.
pub fn bundled_homee() -> (Vec<EndpointDescriptor>, Enrichment) {
    let doc: Value = serde_json::from_str(HOMEE_SPEC).expect("bundled spec is JSON");
    let spec = parse_openapi(&doc).expect("bundled spec is valid");
    let enrichment = Enrichment::from_json(HOMEE_ENRICHMENT, &spec).expect("bundled enrichment is valid");
    (spec, enrichment)
}
