use std::net::{IpAddr, SocketAddr};
use std::time::Duration;

use super::scenario::Scenario;
use crate::discovery::mdns::{CLASS_IN, TYPE_PTR};
use crate::discovery::{parse_mdns, parse_ssdp, MdnsPacket, RData, Record, Reply, SimBus, SsdpKind, SsdpMessage};
use crate::ids;

pub const GATEWAY_SERVICE: &str = "_http._tcp.local";
pub const DEVICE_SERVICE: &str = "_hap._tcp.local";
const SSDP_DELAY: Duration = Duration::from_millis(120);
const MDNS_DELAY: Duration = Duration::from_millis(40);
const TTL: u32 = 120;

pub fn gateway_usn(gateway_name: &str) -> String {
    format!("uuid:{}::upnp:rootdevice", ids::mint("sim-gateway", &[gateway_name]))
}

fn ssdp_response(scenario: &Scenario, st: &str) -> Vec<u8> {
    SsdpMessage::new(SsdpKind::Response)
        .with_header("CACHE-CONTROL", "max-age=1800")
        .with_header("EXT", "")
        .with_header(
            "LOCATION",
            &format!("http://{}.local:{}/description.xml", scenario.gateway_name, scenario.gateway_port),
        )
        .with_header("SERVER", "Linux/4.9 UPnP/1.0 homee/2.25")
        .with_header("ST", st)
        .with_header("USN", &gateway_usn(&scenario.gateway_name))
        .to_bytes()
}

/// DNS-SD answer: PTR to the instance plus SRV, A and TXT in the
/// additional section.
fn mdns_answer(service: &str, instance_label: &str, host: &str, ip: std::net::Ipv4Addr, port: u16, maker: &str) -> Vec<u8> {
    let instance = format!("{instance_label}.{service}");
    let host = format!("{host}.local");
    let rec = |name: &str, data: RData| Record { name: name.to_string(), class: CLASS_IN, ttl: TTL, data };
    MdnsPacket {
        id: 0,
        flags: MdnsPacket::RESPONSE_FLAGS,
        questions: Vec::new(),
        answers: vec![rec(service, RData::Ptr(instance.clone()))],
        authority: Vec::new(),
        additional: vec![
            rec(&instance, RData::Srv { priority: 0, weight: 0, port, target: host.clone() }),
            rec(&host, RData::A(ip)),
            rec(&instance, RData::Txt(vec![format!("manufacturer={maker}").into_bytes()])),
        ],
    }
    .to_bytes()
    .expect("short labels encode")
}

/// DNS host label for a device name: alphanumerics kept, the rest dashed.
fn host_label(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' }).collect()
}

/// Makes the scenario's gateway answer SSDP searches and `_http._tcp`
/// queries from its address, and every device with `announce` set answer
/// `_hap._tcp` queries from its own address.
pub fn announce(bus: &mut SimBus, scenario: &Scenario) {
    if scenario.devices.is_empty() {
        return;
    }
    let scenario = scenario.clone();
    let gateway = SocketAddr::new(IpAddr::V4(scenario.gateway_ip), 1900);
    let gateway_mdns = SocketAddr::new(IpAddr::V4(scenario.gateway_ip), 5353);
    bus.add_responder(move |_to: SocketAddr, bytes: &[u8]| {
        let mut out = Vec::new();
        if let Ok(msg) = parse_ssdp(bytes) {
            if msg.kind == SsdpKind::MSearch {
                let st = msg.header("ST").unwrap_or("ssdp:all");
                let st = if st == "ssdp:all" { "upnp:rootdevice" } else { st };
                out.push(Reply { from: gateway, delay: SSDP_DELAY, bytes: ssdp_response(&scenario, st) });
            }
            return out;
        }
        let Ok(query) = parse_mdns(bytes) else { return out };
        if query.is_response() {
            return out;
        }
        for q in query.questions.iter().filter(|q| q.qtype == TYPE_PTR) {
            if q.name.eq_ignore_ascii_case(GATEWAY_SERVICE) {
                let bytes = mdns_answer(
                    GATEWAY_SERVICE,
                    &scenario.gateway_name,
                    &scenario.gateway_name,
                    scenario.gateway_ip,
                    scenario.gateway_port,
                    "homee",
                );
                out.push(Reply { from: gateway_mdns, delay: MDNS_DELAY, bytes });
            }
            if q.name.eq_ignore_ascii_case(DEVICE_SERVICE) {
                for d in scenario.devices.iter().filter(|d| d.announce) {
                    let Some(ip) = d.ip else { continue };
                    let name = percent_encoding::percent_decode_str(&d.node_name).decode_utf8_lossy().into_owned();
                    let bytes = mdns_answer(DEVICE_SERVICE, &name, &host_label(&name), ip, 80, "Fibar Group");
                    out.push(Reply { from: SocketAddr::new(IpAddr::V4(ip), 5353), delay: MDNS_DELAY, bytes });
                }
            }
        }
        out
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn host_labels() {
        assert_eq!(host_label("Fibaro Kitchen"), "fibaro-kitchen");
    }
}
