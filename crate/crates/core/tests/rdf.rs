#[path = "support/store_oracle.rs"]
mod store_oracle;

use std::sync::Arc;

use homecrawl_core::discovery::{observation_to_triples, DiscoveryObservation, Source};
use homecrawl_core::rdf::{self, FederatedStore, Pattern, PatternTerm, Store, Term, TripleSource};
use proptest::prelude::*;
use store_oracle::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn match_equals_linear_scan(triples in graph(300), p in pattern()) {
        let store = store_of(&triples);
        prop_assert_eq!(store.match_pattern(&p), match_oracle(&triples, &p));
    }

    #[test]
    fn join_equals_nested_loops(triples in graph(150), ps in prop::collection::vec(pattern(), 1..=3)) {
        let store = store_of(&triples);
        prop_assert_eq!(store.query_join(&ps), join_oracle(&triples, &ps));
    }

    #[test]
    fn len_counts_distinct_and_insert_is_idempotent(triples in graph(100)) {
        let mut store = store_of(&triples);
        let distinct: std::collections::BTreeSet<_> = triples.iter().collect();
        prop_assert_eq!(store.len(), distinct.len());
        for t in &triples {
            prop_assert!(!store.insert(t.clone()).unwrap());
        }
        prop_assert_eq!(store.len(), distinct.len());
    }

    #[test]
    fn remove_restores_prior_state(triples in graph(80), extra in triple()) {
        let mut store = store_of(&triples);
        let before: Vec<_> = store.iter().collect();
        if store.insert(extra.clone()).unwrap() {
            prop_assert!(store.remove(&extra));
        }
        prop_assert_eq!(store.iter().collect::<Vec<_>>(), before);
        for p in [Pattern::new(extra.subject.clone(), PatternTerm::var("p"), PatternTerm::var("o")),
                  Pattern::new(PatternTerm::var("s"), extra.predicate.clone(), extra.object.clone())] {
            prop_assert_eq!(store.match_pattern(&p), match_oracle(&triples, &p));
        }
    }

    #[test]
    fn federation_over_partitions_equals_whole(
        triples in graph(200),
        parts in prop::collection::vec(0..3usize, 200),
        p in pattern(),
    ) {
        let mut shards = [Store::new(), Store::new(), Store::new()];
        for (t, &k) in triples.iter().zip(&parts) {
            shards[k].insert(t.clone()).unwrap();
        }
        let [local, a, b] = shards;
        let mut fed = FederatedStore::new(local);
        fed.add_child(Arc::new(a)).unwrap();
        fed.add_child(Arc::new(b)).unwrap();
        let got = fed.federated_match(&p).unwrap();
        prop_assert!(got.unavailable.is_empty());
        prop_assert_eq!(got.triples, store_of(&triples).match_pattern(&p));
    }

    #[test]
    fn persisted_store_reloads_identically(triples in graph(120)) {
        let store = store_of(&triples);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.nt");
        rdf::persist(&store, &path).unwrap();
        let first = std::fs::read(&path).unwrap();
        let back = rdf::load(&path).unwrap();
        prop_assert_eq!(back.iter().collect::<Vec<_>>(), store.iter().collect::<Vec<_>>());
        rdf::persist(&back, &path).unwrap();
        prop_assert_eq!(std::fs::read(&path).unwrap(), first);
    }

    #[test]
    fn discovery_subject_survives_jsonld(
        name in "[A-Za-z][A-Za-z0-9 %-]{0,20}",
        ip in prop::option::of(any::<[u8; 4]>()),
        port in prop::option::of(1u16..),
    ) {
        let mut obs = DiscoveryObservation {
            identity_key: format!("uuid:{name}"),
            device_id: DiscoveryObservation::device_id_for(&name),
            timestamp: "2018-10-29T12:13:01+01:00".into(),
            network_name: name.clone(),
            address: ip.map(std::net::IpAddr::from),
            source: Source::Ssdp,
            extras: Default::default(),
        };
        if let Some(port) = port {
            obs.extras.insert("servicePort".into(), port.to_string());
        }
        let store = store_of(&observation_to_triples(&obs));
        let subject = Term::Iri(obs.device_iri());
        let doc = rdf::to_jsonld(&store, &subject).unwrap();
        let expected = store.match_pattern(&Pattern::new(subject, PatternTerm::var("p"), PatternTerm::var("o")));
        prop_assert_eq!(rdf::from_jsonld(&doc).unwrap(), expected);
    }
}

/// A child claiming to reach a given federation, as a cycle would.
struct Reaches(u64);

impl TripleSource for Reaches {
    fn try_match(&self, _: &Pattern) -> Result<Vec<homecrawl_core::rdf::Triple>, rdf::StoreError> {
        Ok(Vec::new())
    }

    fn reachable_ids(&self) -> Vec<u64> {
        vec![self.0]
    }
}

#[test]
fn cyclic_federation_is_refused() {
    let inner = Arc::new(FederatedStore::new(Store::new()));
    let mut outer = FederatedStore::new(Store::new());
    outer.add_child(inner.clone()).unwrap();
    assert!(outer.reachable_ids().contains(&inner.id()));
    let back_edge = Arc::new(Reaches(outer.id()));
    assert!(matches!(outer.add_child(back_edge), Err(rdf::StoreError::FederationCycle)));
    assert_eq!(outer.children(), 1);
}
