//! Device ontology and unit registry.

pub mod ns;
mod ontology;
mod units;

pub use ontology::{Category, DeviceClass, DeviceOntology};
pub use units::{UnitEntry, UnitRegistry};

use thiserror::Error;

use crate::rdf::Iri;

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("class hierarchy contains a cycle through {0}")]
    CycleDetected(Iri),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("duplicate class {0}")]
    DuplicateClass(Iri),
    #[error("class {class} has unknown parent {parent}")]
    DanglingParent { class: Iri, parent: Iri },
    #[error("ontology has no devices:Device root")]
    MissingRoot,
    #[error("root class must not have a parent")]
    RootHasParent,
    #[error("class {0} has no parent but is not the root")]
    UnexpectedRoot(Iri),
    #[error("unknown class {0}")]
    UnknownClass(Iri),
    #[error("unknown unit {0:?}")]
    UnknownUnit(String),
    #[error("unit {0:?} is ambiguous between {1:?}")]
    AmbiguousUnit(String, Vec<String>),
    #[error("duplicate unit symbol {0:?}")]
    DuplicateUnit(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
