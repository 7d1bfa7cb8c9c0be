use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use super::pattern::Pattern;
use super::term::Triple;
use super::{Store, StoreError};

static NEXT_SOURCE_ID: AtomicU64 = AtomicU64::new(1);

pub type SourceId = u64;

/// Anything a federation can fan a pattern out to.
pub trait TripleSource: Send + Sync {
    fn try_match(&self, pattern: &Pattern) -> Result<Vec<Triple>, StoreError>;

    /// Identity plus the identities of everything reachable below it;
    /// used to refuse cyclic federations.
    fn reachable_ids(&self) -> Vec<SourceId> {
        Vec::new()
    }
}

impl TripleSource for Store {
    fn try_match(&self, pattern: &Pattern) -> Result<Vec<Triple>, StoreError> {
        Ok(self.match_pattern(pattern))
    }
}

impl TripleSource for RwLock<Store> {
    fn try_match(&self, pattern: &Pattern) -> Result<Vec<Triple>, StoreError> {
        let guard = self.read().map_err(|_| StoreError::Unavailable("lock poisoned".into()))?;
        Ok(guard.match_pattern(pattern))
    }
}

/// A local store with an ordered list of child repositories. Queries fan
/// out to every child; a failing child is skipped and reported.
pub struct FederatedStore {
    id: SourceId,
    local: Arc<RwLock<Store>>,
    children: Vec<Arc<dyn TripleSource>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FederatedMatch {
    pub triples: Vec<Triple>,
    /// Indices of children that could not answer.
    pub unavailable: Vec<usize>,
}

impl FederatedStore {
    pub fn new(local: Store) -> Self {
        Self::with_shared(Arc::new(RwLock::new(local)))
    }

    pub fn with_shared(local: Arc<RwLock<Store>>) -> Self {
        FederatedStore {
            id: NEXT_SOURCE_ID.fetch_add(1, Ordering::Relaxed),
            local,
            children: Vec::new(),
        }
    }

    pub fn id(&self) -> SourceId {
        self.id
    }

    pub fn local(&self) -> &Arc<RwLock<Store>> {
        &self.local
    }

    pub fn children(&self) -> usize {
        self.children.len()
    }

    pub fn add_child(&mut self, child: Arc<dyn TripleSource>) -> Result<(), StoreError> {
        if child.reachable_ids().contains(&self.id) {
            return Err(StoreError::FederationCycle);
        }
        self.children.push(child);
        Ok(())
    }

    /// Deduplicated union over the local store and every reachable child,
    /// in canonical order.
    pub fn federated_match(&self, pattern: &Pattern) -> Result<FederatedMatch, StoreError> {
        let mut all: BTreeSet<Triple> = self.local.try_match(pattern)?.into_iter().collect();
        let mut unavailable = Vec::new();
        for (i, child) in self.children.iter().enumerate() {
            match child.try_match(pattern) {
                Ok(ts) => all.extend(ts),
                Err(_) => unavailable.push(i),
            }
        }
        Ok(FederatedMatch {
            triples: all.into_iter().collect(),
            unavailable,
        })
    }
}

impl TripleSource for FederatedStore {
    fn try_match(&self, pattern: &Pattern) -> Result<Vec<Triple>, StoreError> {
        Ok(self.federated_match(pattern)?.triples)
    }

    fn reachable_ids(&self) -> Vec<SourceId> {
        let mut ids = vec![self.id];
        for c in &self.children {
            ids.extend(c.reachable_ids());
        }
        ids
    }
}
