use std::collections::BTreeMap;
use std::net::{IpAddr, SocketAddr};
use std::time::Duration;

use super::mdns::{parse_mdns, RData};
use super::observation::{DiscoveryObservation, Source};
use super::ssdp::{encode_msearch, parse_ssdp, SsdpKind, SsdpMessage};
use super::transport::{Transport, MDNS_GROUP, SSDP_GROUP};
use super::{encode_mdns_query, DiscoveryError};
use crate::clock::{format_timestamp, Clock};

pub const DEFAULT_SERVICES: [&str; 3] = ["_hap._tcp.local", "_http._tcp.local", "_ssh._tcp.local"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub search_target: String,
    pub mx: u32,
    pub services: Vec<String>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            search_target: "ssdp:all".into(),
            mx: 2,
            services: DEFAULT_SERVICES.iter().map(|s| s.to_string()).collect(),
        }
    }
}

struct Sighting {
    key: String,
    name: String,
    address: Option<IpAddr>,
    source: Source,
    extras: BTreeMap<String, String>,
}

/// Send one M-SEARCH and one PTR query per service, then collect replies
/// until `duration` has elapsed on `clock`.
///
/// Sightings with the same identity key, or the same IP address, collapse
/// into one observation that keeps the first-seen name and key and gains
/// any extras it did not have. Unparseable datagrams are ignored.
pub fn scan(
    transport: &mut dyn Transport,
    duration: Duration,
    clock: &dyn Clock,
    config: &ScanConfig,
) -> Result<Vec<DiscoveryObservation>, DiscoveryError> {
    if duration.is_zero() {
        return Err(DiscoveryError::InvalidDuration);
    }
    let deadline = clock.now() + chrono::Duration::from_std(duration).map_err(|_| DiscoveryError::InvalidDuration)?;
    transport.send(SSDP_GROUP.into(), &encode_msearch(&config.search_target, config.mx)?)?;
    for service in &config.services {
        transport.send(MDNS_GROUP.into(), &encode_mdns_query(service)?)?;
    }

    let mut observations: Vec<DiscoveryObservation> = Vec::new();
    loop {
        let remaining = match (deadline - clock.now()).to_std() {
            Ok(d) if !d.is_zero() => d,
            _ => break,
        };
        let Some((from, bytes)) = transport.receive(remaining)? else {
            break;
        };
        for s in sightings(from, &bytes, &config.services) {
            merge(&mut observations, s, clock);
        }
    }
    Ok(observations)
}

fn merge(observations: &mut Vec<DiscoveryObservation>, s: Sighting, clock: &dyn Clock) {
    let existing = observations.iter_mut().find(|o| {
        o.identity_key == s.key || (s.address.is_some() && o.address == s.address)
    });
    match existing {
        Some(o) => {
            for (k, v) in s.extras {
                o.extras.entry(k).or_insert(v);
            }
            if o.address.is_none() {
                o.address = s.address;
            }
        }
        None => observations.push(DiscoveryObservation {
            device_id: DiscoveryObservation::device_id_for(&s.key),
            identity_key: s.key,
            timestamp: format_timestamp(&clock.now()),
            network_name: s.name,
            address: s.address,
            source: s.source,
            extras: s.extras,
        }),
    }
}

fn sightings(from: SocketAddr, bytes: &[u8], services: &[String]) -> Vec<Sighting> {
    if bytes.starts_with(b"HTTP/") || bytes.starts_with(b"NOTIFY") {
        return parse_ssdp(bytes)
            .ok()
            .and_then(|m| ssdp_sighting(from, &m))
            .into_iter()
            .collect();
    }
    if bytes.starts_with(b"M-SEARCH") {
        return Vec::new();
    }
    parse_mdns(bytes)
        .map(|p| mdns_sightings(from, &p, services))
        .unwrap_or_default()
}

fn ssdp_sighting(from: SocketAddr, msg: &SsdpMessage) -> Option<Sighting> {
    let usn = msg.header("USN")?;
    let target = match msg.kind {
        SsdpKind::Response => msg.header("ST"),
        SsdpKind::Notify => {
            if msg.header("NTS") == Some("ssdp:byebye") {
                return None;
            }
            msg.header("NT")
        }
        SsdpKind::MSearch => return None,
    };
    let mut extras = BTreeMap::new();
    if let Some(server) = msg.header("SERVER") {
        extras.insert("manufacturer".into(), server_product(server));
    }
    let location = msg.header("LOCATION");
    if let Some(loc) = location {
        extras.insert("locationUrl".into(), loc.to_string());
    }
    if let Some(st) = target {
        extras.insert("serviceType".into(), st.to_string());
    }
    let name = location
        .and_then(location_host)
        .unwrap_or_else(|| usn.to_string());
    Some(Sighting {
        key: usn.to_string(),
        name,
        address: Some(from.ip()),
        source: Source::Ssdp,
        extras,
    })
}

/// `Linux/4.1 UPnP/1.0 homee/2.25` -> `homee`.
fn server_product(server: &str) -> String {
    let last = server.split_whitespace().last().unwrap_or(server);
    last.split('/').next().unwrap_or(last).to_string()
}

/// Host part of a LOCATION URL when it is a name rather than an address,
/// without a trailing `.local`.
fn location_host(url: &str) -> Option<String> {
    let rest = url.split_once("://").map_or(url, |(_, r)| r);
    let authority = rest.split('/').next()?;
    let host = match authority.rsplit_once(':') {
        Some((h, port)) if port.chars().all(|c| c.is_ascii_digit()) => h,
        _ => authority,
    };
    if host.is_empty() || host.trim_matches(['[', ']']).parse::<IpAddr>().is_ok() {
        return None;
    }
    Some(host.strip_suffix(".local").unwrap_or(host).to_string())
}

fn mdns_sightings(from: SocketAddr, packet: &super::MdnsPacket, services: &[String]) -> Vec<Sighting> {
    if !packet.is_response() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rec in packet.records() {
        let RData::Ptr(instance) = &rec.data else { continue };
        let Some(service) = services.iter().find(|s| s.eq_ignore_ascii_case(&rec.name)) else {
            continue;
        };
        let name = instance
            .strip_suffix(&format!(".{service}"))
            .unwrap_or_else(|| instance.split('.').next().unwrap_or(instance))
            .to_string();
        let mut extras = BTreeMap::new();
        extras.insert("serviceType".to_string(), service.clone());
        let mut address = None;
        let srv = packet.records().find_map(|r| match &r.data {
            RData::Srv { port, target, .. } if r.name.eq_ignore_ascii_case(instance) => Some((*port, target)),
            _ => None,
        });
        if let Some((port, host)) = srv {
            extras.insert("servicePort".into(), port.to_string());
            address = packet.records().find_map(|r| match r.data {
                RData::A(ip) if r.name.eq_ignore_ascii_case(host) => Some(IpAddr::V4(ip)),
                _ => None,
            });
        }
        for r in packet.records().filter(|r| r.name.eq_ignore_ascii_case(instance)) {
            for (k, v) in r.txt_pairs() {
                if k == "manufacturer" {
                    extras.insert("manufacturer".into(), v);
                }
            }
        }
        out.push(Sighting {
            key: instance.clone(),
            name,
            address: address.or(Some(from.ip())),
            source: Source::Mdns,
            extras,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn location_hosts() {
        assert_eq!(
            location_host("http://homee-0005510F1A3D.local:7681/description.xml").as_deref(),
            Some("homee-0005510F1A3D")
        );
        assert_eq!(location_host("http://192.168.1.10:7681/x"), None);
        assert_eq!(location_host("http://[fe80::1]:80/x"), None);
        assert_eq!(server_product("Linux/4.1 UPnP/1.0 homee/2.25"), "homee");
    }
}
