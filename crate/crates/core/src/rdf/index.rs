use std::collections::{BTreeMap, BTreeSet};

use super::term::{Iri, Term};
use super::Store;
use crate::vocab::ns;

/// Lookup from quantity kind and device class to stream IRIs.
///
/// The device-type side uses the direct `rdf:type` of the stream's
/// `iot-stream:generatedBy` device; no subclass closure is applied.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreamIndex {
    pub by_quantity_kind: BTreeMap<Iri, BTreeSet<Iri>>,
    pub by_device_type: BTreeMap<Iri, BTreeSet<Iri>>,
}

impl StreamIndex {
    pub fn build(store: &Store) -> Self {
        let mut index = StreamIndex::default();
        let stream_class = Term::Iri(Iri::from_static(ns::IOT_STREAM));
        let observed = Iri::from_static(ns::SOSA_OBSERVED_PROPERTY);
        let generated_by = Iri::from_static(ns::IOT_GENERATED_BY);
        let rdf_type = Iri::from_static(ns::RDF_TYPE);
        for stream in store.subjects(&rdf_type, &stream_class) {
            let Term::Iri(stream_iri) = &stream else {
                continue;
            };
            for qk in store.objects(&stream, &observed) {
                if let Term::Iri(qk) = qk {
                    index
                        .by_quantity_kind
                        .entry(qk)
                        .or_default()
                        .insert(stream_iri.clone());
                }
            }
            for device in store.objects(&stream, &generated_by) {
                for class in store.objects(&device, &rdf_type) {
                    if let Term::Iri(class) = class {
                        index
                            .by_device_type
                            .entry(class)
                            .or_default()
                            .insert(stream_iri.clone());
                    }
                }
            }
        }
        index
    }

    pub fn is_empty(&self) -> bool {
        self.by_quantity_kind.is_empty() && self.by_device_type.is_empty()
    }

    /// Streams satisfying every given criterion. With no criteria, every
    /// indexed stream.
    pub fn find_streams(
        &self,
        quantity_kind: Option<&Iri>,
        device_type: Option<&Iri>,
    ) -> BTreeSet<Iri> {
        let all = || -> BTreeSet<Iri> {
            self.by_quantity_kind
                .values()
                .chain(self.by_device_type.values())
                .flatten()
                .cloned()
                .collect()
        };
        let by_qk = quantity_kind.map(|qk| self.by_quantity_kind.get(qk).cloned().unwrap_or_default());
        let by_dt = device_type.map(|dt| self.by_device_type.get(dt).cloned().unwrap_or_default());
        match (by_qk, by_dt) {
            (Some(a), Some(b)) => a.intersection(&b).cloned().collect(),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => all(),
        }
    }
}
