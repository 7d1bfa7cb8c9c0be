//! Metadata repository: an in-memory triple store with pattern matching,
//! basic graph pattern joins, a stream index, JSON-LD subset I/O, line
//! format persistence and parent/child federation.

mod federation;
mod index;
pub mod jsonld;
pub mod ntriples;
mod pattern;
mod store;
mod term;

pub use federation::{FederatedMatch, FederatedStore, SourceId, TripleSource};
pub use index::StreamIndex;
pub use jsonld::{from_jsonld, to_jsonld};
pub use ntriples::{load, persist};
pub use pattern::{Binding, Pattern, PatternTerm};
pub use store::Store;
pub use term::{format_decimal, Iri, Term, Triple};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("invalid pattern {0:?}")]
    InvalidPattern(String),
    #[error("JSON-LD document has no @id")]
    MissingId,
    #[error("unknown JSON-LD key {0:?}")]
    UnknownContextKey(String),
    #[error("invalid JSON-LD: {0}")]
    InvalidJsonLd(String),
    #[error("no triples with subject {0}")]
    UnknownSubject(String),
    #[error("federation would contain a cycle")]
    FederationCycle,
    #[error("store unavailable: {0}")]
    Unavailable(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
