//! Random graphs and brute-force reference implementations of pattern
//! matching and joins, shared by the store tests and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use homecrawl_core::rdf::{Binding, Iri, Pattern, PatternTerm, Store, Term, Triple};
use proptest::prelude::*;

/// Small vocabularies so random patterns and joins actually hit.
fn subject() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => (0..8u8).prop_map(|i| Term::Iri(Iri::new(format!("ex:s{i}")).unwrap())),
        1 => (0..3u8).prop_map(|i| Term::blank(format!("b{i}")).unwrap()),
    ]
}

fn predicate() -> impl Strategy<Value = Term> {
    (0..5u8).prop_map(|i| Term::Iri(Iri::new(format!("ex:p{i}")).unwrap()))
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![
        3 => subject(),
        1 => (0..4u8).prop_map(|i| Term::string(format!("l{i}"))),
        1 => (0..3i64).prop_map(Term::integer),
    ]
}

pub fn triple() -> impl Strategy<Value = Triple> {
    (subject(), predicate(), object()).prop_map(|(s, p, o)| Triple::new(s, p, o).unwrap())
}

pub fn graph(max: usize) -> impl Strategy<Value = Vec<Triple>> {
    prop::collection::vec(triple(), 0..=max)
}

fn slot(term: impl Strategy<Value = Term> + 'static) -> BoxedStrategy<PatternTerm> {
    prop_oneof![
        1 => prop::sample::select(vec!["x", "y", "z"]).prop_map(PatternTerm::var),
        1 => term.prop_map(PatternTerm::Term),
    ]
    .boxed()
}

pub fn pattern() -> impl Strategy<Value = Pattern> {
    (slot(subject()), slot(predicate()), slot(object())).prop_map(|(s, p, o)| Pattern::new(s, p, o))
}

pub fn store_of(triples: &[Triple]) -> Store {
    let mut store = Store::new();
    store.extend(triples.iter().cloned()).unwrap();
    store
}

/// Unification written out position by position.
pub fn unify(pattern: &Pattern, t: &Triple, binding: &Binding) -> Option<Binding> {
    let mut b = binding.clone();
    for (pt, term) in [(&pattern.subject, &t.subject), (&pattern.predicate, &t.predicate), (&pattern.object, &t.object)] {
        match pt {
            PatternTerm::Term(fixed) if fixed == term => {}
            PatternTerm::Term(_) => return None,
            PatternTerm::Var(v) => match b.get(v) {
                Some(bound) if bound != term => return None,
                Some(_) => {}
                None => {
                    b.insert(v.clone(), term.clone());
                }
            },
        }
    }
    Some(b)
}

/// Linear scan over the distinct triples.
pub fn match_oracle(triples: &[Triple], pattern: &Pattern) -> Vec<Triple> {
    let all: BTreeSet<&Triple> = triples.iter().collect();
    all.into_iter().filter(|t| unify(pattern, t, &BTreeMap::new()).is_some()).cloned().collect()
}

/// Nested loops: every pattern scans every triple under every partial
/// binding.
pub fn join_oracle(triples: &[Triple], patterns: &[Pattern]) -> Vec<Binding> {
    if patterns.is_empty() {
        return Vec::new();
    }
    let all: BTreeSet<&Triple> = triples.iter().collect();
    let mut partial = vec![Binding::new()];
    for p in patterns {
        let mut next = Vec::new();
        for b in &partial {
            for t in &all {
                if let Some(nb) = unify(p, t, b) {
                    next.push(nb);
                }
            }
        }
        partial = next;
    }
    let unique: BTreeSet<Binding> = partial.into_iter().collect();
    unique.into_iter().collect()
}
