use std::collections::{BTreeMap, BTreeSet};

use super::pattern::{Binding, Pattern, PatternTerm};
use super::term::{Iri, Term, Triple};
use super::StoreError;

type Index = BTreeMap<Term, BTreeMap<Term, BTreeSet<Term>>>;

/// In-memory triple store with set semantics.
///
/// Three nested indexes (SPO, POS, OSP) answer any pattern with at most
/// one bound position resolved by lookup.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Store {
    spo: Index,
    pos: Index,
    osp: Index,
    len: usize,
}

fn index_insert(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    index
        .entry(a.clone())
        .or_default()
        .entry(b.clone())
        .or_default()
        .insert(c.clone())
}

fn index_remove(index: &mut Index, a: &Term, b: &Term, c: &Term) -> bool {
    let Some(level1) = index.get_mut(a) else {
        return false;
    };
    let Some(level2) = level1.get_mut(b) else {
        return false;
    };
    let removed = level2.remove(c);
    if level2.is_empty() {
        level1.remove(b);
    }
    if level1.is_empty() {
        index.remove(a);
    }
    removed
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns `true` iff the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> Result<bool, StoreError> {
        triple.validate()?;
        let Triple {
            subject: s,
            predicate: p,
            object: o,
        } = &triple;
        if !index_insert(&mut self.spo, s, p, o) {
            return Ok(false);
        }
        index_insert(&mut self.pos, p, o, s);
        index_insert(&mut self.osp, o, s, p);
        self.len += 1;
        Ok(true)
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) -> Result<usize, StoreError> {
        let mut added = 0;
        for t in triples {
            if self.insert(t)? {
                added += 1;
            }
        }
        Ok(added)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let Triple {
            subject: s,
            predicate: p,
            object: o,
        } = triple;
        if !index_remove(&mut self.spo, s, p, o) {
            return false;
        }
        index_remove(&mut self.pos, p, o, s);
        index_remove(&mut self.osp, o, s, p);
        self.len -= 1;
        true
    }

    /// Remove every triple matching `pattern`; returns how many were removed.
    pub fn remove_matching(&mut self, pattern: &Pattern) -> usize {
        let doomed = self.match_pattern(pattern);
        doomed.iter().filter(|t| self.remove(t)).count()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|m| m.get(&triple.predicate))
            .is_some_and(|objs| objs.contains(&triple.object))
    }

    /// All triples in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, pm)| {
            pm.iter().flat_map(move |(p, objs)| {
                objs.iter().map(move |o| Triple {
                    subject: s.clone(),
                    predicate: p.clone(),
                    object: o.clone(),
                })
            })
        })
    }

    pub fn has_subject(&self, subject: &Term) -> bool {
        self.spo.contains_key(subject)
    }

    /// Objects of `subject predicate ?o`, canonical order.
    pub fn objects(&self, subject: &Term, predicate: &Iri) -> Vec<Term> {
        self.spo
            .get(subject)
            .and_then(|m| m.get(&Term::Iri(predicate.clone())))
            .map(|objs| objs.iter().cloned().collect())
            .unwrap_or_default()
    }

    pub fn object(&self, subject: &Term, predicate: &Iri) -> Option<Term> {
        self.objects(subject, predicate).into_iter().next()
    }

    /// Subjects of `?s predicate object`, canonical order.
    pub fn subjects(&self, predicate: &Iri, object: &Term) -> Vec<Term> {
        self.pos
            .get(&Term::Iri(predicate.clone()))
            .and_then(|m| m.get(object))
            .map(|subs| subs.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// Triples unifying with `pattern`, in canonical order.
    pub fn match_pattern(&self, pattern: &Pattern) -> Vec<Triple> {
        let bound = |pt: &PatternTerm| match pt {
            PatternTerm::Term(t) => Some(t.clone()),
            PatternTerm::Var(_) => None,
        };
        let (s, p, o) = (
            bound(&pattern.subject),
            bound(&pattern.predicate),
            bound(&pattern.object),
        );
        let mut out: Vec<Triple> = Vec::new();
        let mut push = |s: &Term, p: &Term, o: &Term| {
            let t = Triple {
                subject: s.clone(),
                predicate: p.clone(),
                object: o.clone(),
            };
            if pattern.matches(&t) {
                out.push(t);
            }
        };
        match (&s, &p, &o) {
            (Some(s), _, _) => {
                if let Some(pm) = self.spo.get(s) {
                    for (pp, objs) in pm {
                        if p.as_ref().is_some_and(|p| p != pp) {
                            continue;
                        }
                        for oo in objs {
                            push(s, pp, oo);
                        }
                    }
                }
            }
            (None, Some(p), _) => {
                if let Some(om) = self.pos.get(p) {
                    for (oo, subs) in om {
                        if o.as_ref().is_some_and(|o| o != oo) {
                            continue;
                        }
                        for ss in subs {
                            push(ss, p, oo);
                        }
                    }
                }
            }
            (None, None, Some(o)) => {
                if let Some(sm) = self.osp.get(o) {
                    for (ss, preds) in sm {
                        for pp in preds {
                            push(ss, pp, o);
                        }
                    }
                }
            }
            (None, None, None) => {
                for (ss, pm) in &self.spo {
                    for (pp, objs) in pm {
                        for oo in objs {
                            push(ss, pp, oo);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Basic graph pattern evaluation: every binding under which all
    /// `patterns` match. Shared variable names join. Deduplicated and
    /// sorted by the canonical binding order.
    pub fn query_join(&self, patterns: &[Pattern]) -> Vec<Binding> {
        if patterns.is_empty() {
            return Vec::new();
        }
        let mut partial = vec![Binding::new()];
        for pattern in patterns {
            let mut next = Vec::new();
            for binding in &partial {
                let concrete = pattern.substitute(binding);
                for triple in self.match_pattern(&concrete) {
                    if let Some(b) = pattern.unify(&triple, binding) {
                        next.push(b);
                    }
                }
            }
            if next.is_empty() {
                return Vec::new();
            }
            partial = next;
        }
        let unique: BTreeSet<Binding> = partial.into_iter().collect();
        unique.into_iter().collect()
    }
}
