use std::fmt;

use crate::vocab::ns;

use super::StoreError;

/// An IRI. Stored verbatim; compact forms such as `devices:HomeeGateway`
/// and bare identifiers such as a UUID are both accepted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, StoreError> {
        let value = value.into();
        if value.is_empty() {
            return Err(StoreError::InvalidIri(value));
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
        {
            return Err(StoreError::InvalidIri(value));
        }
        Ok(Iri(value))
    }

    /// For compile-time vocabulary constants.
    pub fn from_static(value: &'static str) -> Self {
        Iri::new(value).expect("invalid static IRI")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// An RDF term.
///
/// Variant order is significant: the derived `Ord` gives the canonical
/// ordering `Iri < Blank < Literal`, then lexicographic by fields.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal { lexical: String, datatype: Iri },
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, StoreError> {
        Ok(Term::Iri(Iri::new(value)?))
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, StoreError> {
        let label = label.into();
        if label.is_empty()
            || !label
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return Err(StoreError::InvalidBlankLabel(label));
        }
        Ok(Term::Blank(label))
    }

    /// Plain string literal (`xsd:string`).
    pub fn string(lexical: impl Into<String>) -> Self {
        Term::Literal {
            lexical: lexical.into(),
            datatype: Iri::from_static(ns::XSD_STRING),
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Term::Literal {
            lexical: lexical.into(),
            datatype,
        }
    }

    pub fn decimal(value: f64) -> Self {
        Term::typed(format_decimal(value), Iri::from_static(ns::XSD_DECIMAL))
    }

    pub fn integer(value: i64) -> Self {
        Term::typed(value.to_string(), Iri::from_static(ns::XSD_INTEGER))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn lexical(&self) -> Option<&str> {
        match self {
            Term::Literal { lexical, .. } => Some(lexical),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal { .. })
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<&Iri> for Term {
    fn from(iri: &Iri) -> Self {
        Term::Iri(iri.clone())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(label) => write!(f, "_:{label}"),
            Term::Literal { lexical, datatype } => {
                write!(f, "\"{}\"^^<{datatype}>", escape_literal(lexical))
            }
        }
    }
}

/// Shortest round-tripping decimal form: `2.9`, `0`, `2000`.
pub fn format_decimal(value: f64) -> String {
    if value == 0.0 {
        // collapses -0
        return "0".to_string();
    }
    format!("{value}")
}

pub(crate) fn escape_literal(lexical: &str) -> String {
    let mut out = String::with_capacity(lexical.len());
    for c in lexical.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

/// A statement. Construct through [`Triple::new`] so the subject and
/// predicate positions are checked.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(
        subject: impl Into<Term>,
        predicate: impl Into<Term>,
        object: impl Into<Term>,
    ) -> Result<Self, StoreError> {
        let triple = Triple {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        };
        triple.validate()?;
        Ok(triple)
    }

    pub fn validate(&self) -> Result<(), StoreError> {
        if self.subject.is_literal() {
            return Err(StoreError::InvalidTriple("literal subject".into()));
        }
        if !matches!(self.predicate, Term::Iri(_)) {
            return Err(StoreError::InvalidTriple("predicate must be an IRI".into()));
        }
        Ok(())
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
