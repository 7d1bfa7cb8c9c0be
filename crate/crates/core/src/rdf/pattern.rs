use std::collections::BTreeMap;
use std::fmt;

use super::term::{Iri, Term, Triple};
use super::StoreError;

/// Variable name to bound term. `BTreeMap` keeps the serialisation
/// canonical, so the derived ordering is the result order of joins.
pub type Binding = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Var(String),
    Term(Term),
}

impl PatternTerm {
    pub fn var(name: impl Into<String>) -> Self {
        PatternTerm::Var(name.into())
    }

    fn resolve<'a>(&'a self, binding: &'a Binding) -> Option<&'a Term> {
        match self {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(v) => binding.get(v),
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl From<Iri> for PatternTerm {
    fn from(iri: Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri))
    }
}

impl From<&Iri> for PatternTerm {
    fn from(iri: &Iri) -> Self {
        PatternTerm::Term(Term::Iri(iri.clone()))
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Term(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl Pattern {
    pub fn new(
        subject: impl Into<PatternTerm>,
        predicate: impl Into<PatternTerm>,
        object: impl Into<PatternTerm>,
    ) -> Self {
        Pattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    /// `?s ?p ?o`
    pub fn any() -> Self {
        Pattern::new(
            PatternTerm::var("s"),
            PatternTerm::var("p"),
            PatternTerm::var("o"),
        )
    }

    pub fn variables(&self) -> Vec<&str> {
        let mut vars = Vec::new();
        for pt in [&self.subject, &self.predicate, &self.object] {
            if let PatternTerm::Var(v) = pt {
                if !vars.contains(&v.as_str()) {
                    vars.push(v.as_str());
                }
            }
        }
        vars
    }

    /// Replace variables already bound in `binding` by their terms.
    pub fn substitute(&self, binding: &Binding) -> Pattern {
        let sub = |pt: &PatternTerm| match pt.resolve(binding) {
            Some(t) => PatternTerm::Term(t.clone()),
            None => pt.clone(),
        };
        Pattern {
            subject: sub(&self.subject),
            predicate: sub(&self.predicate),
            object: sub(&self.object),
        }
    }

    /// Extend `binding` so that the pattern equals `triple`, or return
    /// `None` when they do not unify (including repeated variables bound
    /// to different terms).
    pub fn unify(&self, triple: &Triple, binding: &Binding) -> Option<Binding> {
        let mut out = binding.clone();
        for (pt, term) in [
            (&self.subject, &triple.subject),
            (&self.predicate, &triple.predicate),
            (&self.object, &triple.object),
        ] {
            match pt {
                PatternTerm::Term(t) => {
                    if t != term {
                        return None;
                    }
                }
                PatternTerm::Var(v) => match out.get(v) {
                    Some(bound) if bound != term => return None,
                    Some(_) => {}
                    None => {
                        out.insert(v.clone(), term.clone());
                    }
                },
            }
        }
        Some(out)
    }

    pub fn matches(&self, triple: &Triple) -> bool {
        self.unify(triple, &Binding::new()).is_some()
    }

    /// Parse the textual `S P O` form used on the command line.
    ///
    /// `?x` is a variable, `<iri>` or a bare token is an IRI, `_:b` a blank
    /// node and `"text"` (optionally `^^<dt>`) a literal.
    pub fn parse(text: &str) -> Result<Pattern, StoreError> {
        let mut rest = text.trim();
        let mut parts = Vec::with_capacity(3);
        while !rest.is_empty() && parts.len() < 3 {
            let (pt, tail) = parse_pattern_term(rest)?;
            parts.push(pt);
            rest = tail.trim_start();
        }
        let rest = rest.trim_start_matches('.').trim();
        if parts.len() != 3 || !rest.is_empty() {
            return Err(StoreError::InvalidPattern(text.to_string()));
        }
        let object = parts.pop().unwrap();
        let predicate = parts.pop().unwrap();
        let subject = parts.pop().unwrap();
        Ok(Pattern {
            subject,
            predicate,
            object,
        })
    }
}

fn parse_pattern_term(input: &str) -> Result<(PatternTerm, &str), StoreError> {
    if let Some(var) = input.strip_prefix('?') {
        let end = var.find(char::is_whitespace).unwrap_or(var.len());
        if end == 0 {
            return Err(StoreError::InvalidPattern(input.to_string()));
        }
        return Ok((PatternTerm::var(&var[..end]), &var[end..]));
    }
    if input.starts_with('<') || input.starts_with('"') || input.starts_with("_:") {
        let (term, rest) = super::ntriples::parse_term_with(input, false)
            .map_err(|_| StoreError::InvalidPattern(input.to_string()))?;
        return Ok((PatternTerm::Term(term), rest));
    }
    let end = input.find(char::is_whitespace).unwrap_or(input.len());
    let iri = Iri::new(&input[..end])?;
    Ok((PatternTerm::Term(Term::Iri(iri)), &input[end..]))
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cli_pattern() {
        let p = Pattern::parse("?d rdf:type devices:HomeeGateway").unwrap();
        assert_eq!(p.subject, PatternTerm::var("d"));
        assert_eq!(p.object, PatternTerm::Term(Term::iri("devices:HomeeGateway").unwrap()));

        let p = Pattern::parse("?d <rdfs:label> \"Fibaro Kitchen\" .").unwrap();
        assert_eq!(p.object, PatternTerm::Term(Term::string("Fibaro Kitchen")));

        assert!(Pattern::parse("?a ?b").is_err());
        assert!(Pattern::parse("?a ?b ?c ?d").is_err());
    }

    #[test]
    fn repeated_variable_must_agree() {
        let p = Pattern::new(PatternTerm::var("x"), PatternTerm::var("p"), PatternTerm::var("x"));
        let a = Iri::from_static("a");
        let t1 = Triple::new(a.clone(), a.clone(), a.clone()).unwrap();
        let t2 = Triple::new(a.clone(), a.clone(), Iri::from_static("b")).unwrap();
        assert!(p.matches(&t1));
        assert!(!p.matches(&t2));
    }
}
