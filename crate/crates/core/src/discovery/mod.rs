//! Network discovery over SSDP (UPnP) and mDNS-SD.
//!
//! Codecs are pure; [`scan`] drives them over an abstract [`Transport`]
//! with an injected clock, so the same loop runs against real multicast
//! sockets and against the simulated bus.

pub mod mdns;
mod observation;
mod scan;
pub mod ssdp;
mod transport;

pub use mdns::{encode_mdns_query, parse_mdns, MdnsPacket, Question, RData, Record};
pub use observation::{discovered_device_ref, observation_to_triples, record_observation, DiscoveryObservation, Source};
pub use scan::{scan, ScanConfig, DEFAULT_SERVICES};
pub use ssdp::{encode_msearch, parse_ssdp, SsdpKind, SsdpMessage};
pub use transport::{Reply, Responder, SimBus, Transport, UdpTransport, MDNS_GROUP, SSDP_GROUP};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("MX must be between 1 and 5, got {0}")]
    InvalidMx(u32),
    #[error("malformed start line {0:?}")]
    MalformedStartLine(String),
    #[error("malformed header line {0:?}")]
    MalformedHeader(String),
    #[error("missing required header {0}")]
    MissingRequiredHeader(&'static str),
    #[error("packet truncated")]
    Truncated,
    #[error("compression pointer loop")]
    PointerLoop,
    #[error("label longer than 63 bytes")]
    LabelTooLong,
    #[error("name longer than 255 bytes")]
    NameTooLong,
    #[error("malformed {0} record")]
    MalformedRecord(&'static str),
    #[error("scan duration must be positive")]
    InvalidDuration,
    #[error("transport: {0}")]
    Transport(#[from] std::io::Error),
}
