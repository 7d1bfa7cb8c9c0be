//! Links discovered device names to ontology classes by token-level
//! string similarity.
//!
//! The score of a name against a class label is the mean, over label
//! tokens, of the best normalised Levenshtein similarity to any name
//! token. It measures how well the label is covered by the name, so a
//! long vendor string still scores 1.0 against a short canonical label.

use percent_encoding::percent_decode_str;
use thiserror::Error;

use crate::rdf::{Iri, Store, StoreError, Triple};
use crate::vocab::{ns, DeviceClass, DeviceOntology};

#[derive(Debug, Error)]
pub enum LinkError {
    #[error("class label has no tokens")]
    EmptyLabel,
    #[error("unknown class {0}")]
    UnknownClass(Iri),
    #[error("invalid linker config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkerConfig {
    pub tau_high: f64,
    pub tau_low: f64,
    pub margin: f64,
    pub top_k: usize,
}

impl Default for LinkerConfig {
    fn default() -> Self {
        LinkerConfig {
            tau_high: 0.55,
            tau_low: 0.35,
            margin: 0.15,
            top_k: 3,
        }
    }
}

impl LinkerConfig {
    pub fn validate(&self) -> Result<(), LinkError> {
        let in_unit = |x: f64| (0.0..=1.0).contains(&x);
        if !(in_unit(self.tau_low) && in_unit(self.tau_high) && self.tau_low <= self.tau_high) {
            return Err(LinkError::InvalidConfig(
                "need 0 <= tau_low <= tau_high <= 1".into(),
            ));
        }
        if self.margin.is_nan() || self.margin < 0.0 {
            return Err(LinkError::InvalidConfig("margin must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub class: Iri,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinkResult {
    Linked(Candidate),
    /// Ranked by descending score, then class IRI.
    Ambiguous(Vec<Candidate>),
    NoMatch,
}

impl LinkResult {
    /// The class a fully automatic pipeline would pick.
    pub fn top(&self) -> Option<&Candidate> {
        match self {
            LinkResult::Linked(c) => Some(c),
            LinkResult::Ambiguous(cs) => cs.first(),
            LinkResult::NoMatch => None,
        }
    }
}

/// Percent-decode, split into lowercase alphanumeric tokens. Splits on
/// every non-alphanumeric run and on lower-to-upper case boundaries.
pub fn normalize_name(raw: &str) -> Vec<String> {
    let decoded = percent_decode_str(raw).decode_utf8_lossy();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut prev_lower = false;
    for c in decoded.chars() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            prev_lower = false;
            continue;
        }
        if c.is_uppercase() && prev_lower && !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
        prev_lower = c.is_lowercase();
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Edit distance over Unicode scalar values, two-row dynamic programme.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.chars().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(ca != *cb);
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn token_similarity(a: &str, b: &str) -> f64 {
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / longest as f64
}

pub fn similarity<S: AsRef<str>, T: AsRef<str>>(
    name_tokens: &[S],
    label_tokens: &[T],
) -> Result<f64, LinkError> {
    if label_tokens.is_empty() {
        return Err(LinkError::EmptyLabel);
    }
    if name_tokens.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = label_tokens
        .iter()
        .map(|l| {
            name_tokens
                .iter()
                .map(|n| token_similarity(n.as_ref(), l.as_ref()))
                .fold(0.0, f64::max)
        })
        .sum();
    Ok(total / label_tokens.len() as f64)
}

/// Score every class accepted by `filter`, sorted by descending score
/// then class IRI.
pub fn rank_classes<F>(raw_name: &str, ontology: &DeviceOntology, filter: F) -> Vec<Candidate>
where
    F: Fn(&DeviceClass) -> bool,
{
    let name = normalize_name(raw_name);
    let mut scored: Vec<Candidate> = ontology
        .classes()
        .filter(|c| filter(c))
        .filter_map(|c| {
            let label = normalize_name(&c.label);
            similarity(&name, &label).ok().map(|score| Candidate {
                class: c.id.clone(),
                score,
            })
        })
        .collect();
    scored.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.class.cmp(&b.class))
    });
    scored
}

pub fn decide(ranked: &[Candidate], config: &LinkerConfig) -> LinkResult {
    let Some(best) = ranked.first() else {
        return LinkResult::NoMatch;
    };
    let second = ranked.get(1).map_or(0.0, |c| c.score);
    if best.score >= config.tau_high && best.score - second >= config.margin && best.score > second {
        return LinkResult::Linked(best.clone());
    }
    if best.score >= config.tau_low {
        return LinkResult::Ambiguous(
            ranked
                .iter()
                .take_while(|c| c.score >= config.tau_low)
                .take(config.top_k.max(1))
                .cloned()
                .collect(),
        );
    }
    LinkResult::NoMatch
}

pub fn link(raw_name: &str, ontology: &DeviceOntology, config: &LinkerConfig) -> LinkResult {
    decide(&rank_classes(raw_name, ontology, |_| true), config)
}

/// Like [`link`] but only considers classes accepted by `filter`.
pub fn link_filtered<F>(
    raw_name: &str,
    ontology: &DeviceOntology,
    config: &LinkerConfig,
    filter: F,
) -> LinkResult
where
    F: Fn(&DeviceClass) -> bool,
{
    decide(&rank_classes(raw_name, ontology, filter), config)
}

/// Assert `device rdf:type class`. Idempotent.
pub fn apply_link(
    store: &mut Store,
    ontology: &DeviceOntology,
    device: &Iri,
    class: &Iri,
) -> Result<Triple, LinkError> {
    if !ontology.contains(class) {
        return Err(LinkError::UnknownClass(class.clone()));
    }
    let triple = Triple::new(device.clone(), Iri::from_static(ns::RDF_TYPE), class.clone())?;
    store.insert(triple.clone())?;
    Ok(triple)
}
