//! Wire-format fixtures and generators for SSDP and mDNS round trips,
//! shared by the discovery tests and the acceptance suite.

#![allow(dead_code)]

use std::net::Ipv4Addr;

use homecrawl_core::discovery::{MdnsPacket, Question, RData, Record};
use proptest::prelude::*;

/// Response to a `_http._tcp.local` query for `homee-0005510F1A3D`,
/// assembled byte by byte with compression pointers: the PTR target
/// points into the question-less answer name, the SRV owner points at
/// the PTR target and the SRV target reuses the `local` label.
pub const COMPRESSED_FIXTURE: &str = "000084000000000100000002055f68747470045f746370056c6f63616c00000c000100001194001512686f6d65652d303030353531304631413344c00cc0280021800100000078001b000000001e0112686f6d65652d303030353531304631413344c017c04f00018001000000780004c0a8010a";

pub fn hex(s: &str) -> Vec<u8> {
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap())
        .collect()
}

/// A question whose name is a compression pointer to itself.
pub fn self_pointer_packet() -> Vec<u8> {
    let mut b = vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0];
    b.extend([0xc0, 12, 0, 12, 0, 1]);
    b
}

pub fn label() -> impl Strategy<Value = String> {
    "[a-z0-9_-]{1,20}"
}

pub fn name() -> impl Strategy<Value = String> {
    prop::collection::vec(label(), 0..5).prop_map(|ls| ls.join("."))
}

pub fn rdata() -> impl Strategy<Value = RData> {
    prop_oneof![
        any::<[u8; 4]>().prop_map(|o| RData::A(Ipv4Addr::from(o))),
        name().prop_map(RData::Ptr),
        (any::<u16>(), any::<u16>(), any::<u16>(), name()).prop_map(|(priority, weight, port, target)| {
            RData::Srv { priority, weight, port, target }
        }),
        prop::collection::vec(prop::collection::vec(any::<u8>(), 0..30), 0..4).prop_map(RData::Txt),
        (1000u16..2000, prop::collection::vec(any::<u8>(), 0..40))
            .prop_map(|(rtype, bytes)| RData::Other { rtype, bytes }),
    ]
}

pub fn record() -> impl Strategy<Value = Record> {
    (name(), any::<u16>(), any::<u32>(), rdata()).prop_map(|(name, class, ttl, data)| Record {
        name,
        class,
        ttl,
        data,
    })
}

pub fn packet() -> impl Strategy<Value = MdnsPacket> {
    (
        any::<u16>(),
        any::<u16>(),
        prop::collection::vec((name(), any::<u16>(), any::<u16>()), 0..3),
        prop::collection::vec(record(), 0..4),
        prop::collection::vec(record(), 0..2),
        prop::collection::vec(record(), 0..3),
    )
        .prop_map(|(id, flags, qs, answers, authority, additional)| MdnsPacket {
            id,
            flags,
            questions: qs
                .into_iter()
                .map(|(name, qtype, qclass)| Question { name, qtype, qclass })
                .collect(),
            answers,
            authority,
            additional,
        })
}

pub fn header_value() -> impl Strategy<Value = String> {
    "[!-~]([ -~]{0,30}[!-~])?"
}

