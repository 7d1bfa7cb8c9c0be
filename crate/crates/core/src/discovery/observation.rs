use std::collections::BTreeMap;
use std::net::IpAddr;

use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};

use crate::ids;
use crate::rdf::{Iri, Pattern, PatternTerm, Store, StoreError, Term, Triple};
use crate::vocab::ns;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Ssdp,
    Mdns,
    /// Reserved; no radio scanner exists.
    Bluetooth,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Ssdp => "ssdp",
            Source::Mdns => "mdns",
            Source::Bluetooth => "bluetooth",
        }
    }
}

/// One sighting of a device on the network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryObservation {
    pub identity_key: String,
    pub device_id: String,
    pub timestamp: String,
    pub network_name: String,
    pub address: Option<IpAddr>,
    pub source: Source,
    /// `manufacturer`, `locationUrl`, `serviceType`, `servicePort`.
    pub extras: BTreeMap<String, String>,
}

impl DiscoveryObservation {
    pub fn device_id_for(identity_key: &str) -> String {
        ids::mint("discovered-device", &[identity_key]).to_string()
    }

    pub fn device_iri(&self) -> Iri {
        Iri::new(self.device_id.as_str()).expect("UUID text is a valid IRI")
    }
}

const NAME_ESCAPES: &AsciiSet = &CONTROLS.add(b' ').add(b'"').add(b'<').add(b'>').add(b'%');

/// `#homee-0005510F1A3D`: the name-based device reference used inside
/// discovery results.
pub fn discovered_device_ref(network_name: &str) -> Iri {
    let encoded = utf8_percent_encode(network_name, NAME_ESCAPES).to_string();
    Iri::new(format!("#{encoded}")).expect("percent-encoded name is a valid IRI")
}

fn extra_predicate(key: &str) -> Option<&'static str> {
    Some(match key {
        "manufacturer" => ns::SHC_MANUFACTURER,
        "locationUrl" => ns::SHC_LOCATION_URL,
        "serviceType" => ns::SHC_SERVICE_TYPE,
        "servicePort" => ns::SHC_SERVICE_PORT,
        _ => return None,
    })
}

/// Device description plus a discovery observation resource pointing at
/// it through its network name.
pub fn observation_to_triples(obs: &DiscoveryObservation) -> Vec<Triple> {
    let device = obs.device_iri();
    let p = Iri::from_static;
    let timestamp = Term::typed(obs.timestamp.as_str(), p(ns::XSD_DATETIME));
    let t = |s: &Iri, pred: &'static str, o: Term| {
        Triple::new(s.clone(), p(pred), o).expect("well-formed triple")
    };
    let mut out = vec![
        t(&device, ns::SHC_HAS_TIMESTAMP, timestamp.clone()),
        t(&device, ns::RDFS_LABEL, Term::string(obs.network_name.as_str())),
        t(&device, ns::SHC_HAS_NETWORK_NAME, Term::string(obs.network_name.as_str())),
        t(&device, ns::SHC_DISCOVERY_SOURCE, Term::string(obs.source.as_str())),
    ];
    if let Some(ip) = obs.address {
        out.push(t(&device, ns::SHC_HAS_IP_ADDRESS, Term::string(ip.to_string())));
    }
    for (key, value) in &obs.extras {
        if let Some(pred) = extra_predicate(key) {
            let object = match (key.as_str(), value.parse::<i64>()) {
                ("servicePort", Ok(port)) => Term::integer(port),
                _ => Term::string(value.as_str()),
            };
            out.push(t(&device, pred, object));
        }
    }

    let obs_iri = Iri::new(ids::mint("discovery-observation", &[&obs.device_id, &obs.timestamp]).to_string())
        .expect("UUID text is a valid IRI");
    let result = Iri::new(format!("{obs_iri}#result")).expect("valid IRI");
    out.extend([
        t(&obs_iri, ns::RDF_TYPE, Term::Iri(p(ns::SHC_DISCOVERY_OBSERVATION))),
        t(&obs_iri, ns::SOSA_HAS_RESULT, Term::Iri(result.clone())),
        t(&obs_iri, ns::SOSA_RESULT_TIME, timestamp),
        t(&obs_iri, ns::SHC_OBSERVED_DEVICE, Term::Iri(device)),
        t(&result, ns::RDF_TYPE, Term::Iri(p(ns::SHC_DISCOVERY_RESULT))),
        t(&result, ns::SHC_DISCOVERED_DEVICE, Term::Iri(discovered_device_ref(&obs.network_name))),
    ]);
    out
}

/// Adds the observation to the store. The device's single-valued facts
/// (timestamp, name, address) are replaced, so a re-sighting updates the
/// device, while each observation resource is appended.
/// Returns the number of new triples.
pub fn record_observation(store: &mut Store, obs: &DiscoveryObservation) -> Result<usize, StoreError> {
    let device = Term::Iri(obs.device_iri());
    let triples = observation_to_triples(obs);
    for pred in [
        ns::SHC_HAS_TIMESTAMP,
        ns::SHC_HAS_NETWORK_NAME,
        ns::RDFS_LABEL,
        ns::SHC_HAS_IP_ADDRESS,
    ] {
        let pattern = Pattern::new(device.clone(), Iri::from_static(pred), PatternTerm::var("o"));
        for old in store.match_pattern(&pattern) {
            if !triples.contains(&old) {
                store.remove(&old);
            }
        }
    }
    store.extend(triples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gateway_observation() -> DiscoveryObservation {
        DiscoveryObservation {
            identity_key: "uuid:homee".into(),
            device_id: "57bc95d6-4ed4-4b46-9101-f1d52871f872".into(),
            timestamp: "2018-10-29T12:13:01+01:00".into(),
            network_name: "homee-0005510F1A3D".into(),
            address: None,
            source: Source::Ssdp,
            extras: BTreeMap::new(),
        }
    }

    #[test]
    fn gateway_observation_triples() {
        let triples = observation_to_triples(&gateway_observation());
        let objects: Vec<String> = triples
            .iter()
            .filter(|t| t.subject == Term::iri("57bc95d6-4ed4-4b46-9101-f1d52871f872").unwrap())
            .filter_map(|t| t.object.lexical().map(str::to_string))
            .collect();
        assert!(objects.contains(&"2018-10-29T12:13:01+01:00".to_string()));
        assert!(objects.contains(&"homee-0005510F1A3D".to_string()));
        assert!(!triples
            .iter()
            .any(|t| t.predicate == Term::Iri(Iri::from_static(ns::SHC_HAS_IP_ADDRESS))));

        let discovered: Vec<&Triple> = triples
            .iter()
            .filter(|t| t.predicate == Term::Iri(Iri::from_static(ns::SHC_DISCOVERED_DEVICE)))
            .collect();
        assert_eq!(discovered.len(), 1);
        assert_eq!(discovered[0].object, Term::iri("#homee-0005510F1A3D").unwrap());
    }

    #[test]
    fn resighting_updates_timestamp() {
        let mut store = Store::new();
        let mut obs = gateway_observation();
        obs.address = Some("192.168.1.10".parse().unwrap());
        record_observation(&mut store, &obs).unwrap();
        obs.timestamp = "2018-10-29T12:14:01+01:00".into();
        record_observation(&mut store, &obs).unwrap();
        let device = Term::Iri(obs.device_iri());
        let stamps = store.objects(&device, &Iri::from_static(ns::SHC_HAS_TIMESTAMP));
        assert_eq!(stamps.len(), 1);
        assert_eq!(stamps[0].lexical(), Some("2018-10-29T12:14:01+01:00"));
        let observations = store.subjects(
            &Iri::from_static(ns::RDF_TYPE),
            &Term::Iri(Iri::from_static(ns::SHC_DISCOVERY_OBSERVATION)),
        );
        assert_eq!(observations.len(), 2);
    }

    #[test]
    fn names_with_spaces_become_valid_refs() {
        assert_eq!(discovered_device_ref("Living Room TV").as_str(), "#Living%20Room%20TV");
    }
}
