//! Client for the gateway's line protocol: one request line, one JSON
//! reply line.
//!
//! ```text
//! > GET:nodes/
//! < {"nodes":[{"added":1548863167,"id":7,"name":"FIBARO System FGWPE/F Wall Plug Gen5"}]}
//! > GET:nodes/8
//! < {"node":{"added":1550568947,"attributes":[{"current_value":2.9,"id":64,...}]}}
//! < {"error":{"code":404,"message":"node not found"}}
//! ```

use std::collections::BTreeMap;
use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpStream};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::clock::Clock;

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("connection closed by gateway")]
    ConnectionClosed,
    #[error("timed out waiting for gateway")]
    Timeout,
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("node {0} not found")]
    NodeNotFound(u32),
    #[error("node {node} has no attribute of type {code}")]
    AttributeMissing { node: u32, code: u32 },
    #[error("gateway error {code}: {message}")]
    Gateway { code: i64, message: String },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error(transparent)]
    Io(io::Error),
}

impl From<io::Error> for GatewayError {
    fn from(e: io::Error) -> Self {
        match e.kind() {
            io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => GatewayError::Timeout,
            io::ErrorKind::UnexpectedEof
            | io::ErrorKind::ConnectionReset
            | io::ErrorKind::ConnectionAborted
            | io::ErrorKind::BrokenPipe => GatewayError::ConnectionClosed,
            _ => GatewayError::Io(e),
        }
    }
}

/// Fields are declared alphabetically so serialisation reproduces the
/// gateway's key order. Absent `id`/`name` (as in single-node replies)
/// stay absent on re-serialisation; unknown keys are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub added: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<Attribute>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub room: Option<String>,
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Attribute {
    pub current_value: f64,
    pub id: u32,
    pub last_changed: i64,
    pub node_id: u32,
    #[serde(rename = "type")]
    pub kind: u32,
    #[serde(default)]
    pub unit: String,
}

impl Node {
    pub fn attribute_of_type(&self, code: u32) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.kind == code)
    }
}

#[derive(Serialize, Deserialize)]
struct NodesReply {
    nodes: Vec<Node>,
}

#[derive(Serialize, Deserialize)]
struct NodeReply {
    node: Node,
}

#[derive(Serialize, Deserialize)]
struct ErrorBody {
    code: i64,
    message: String,
}

#[derive(Serialize, Deserialize)]
struct ErrorReply {
    error: ErrorBody,
}

pub fn nodes_reply(nodes: &[Node]) -> String {
    serde_json::to_string(&NodesReply { nodes: nodes.to_vec() }).expect("serialisable")
}

pub fn node_reply(node: &Node) -> String {
    serde_json::to_string(&NodeReply { node: node.clone() }).expect("serialisable")
}

pub fn error_reply(code: i64, message: &str) -> String {
    serde_json::to_string(&ErrorReply {
        error: ErrorBody {
            code,
            message: message.to_string(),
        },
    })
    .expect("serialisable")
}

pub fn parse_nodes_reply(line: &str) -> Result<Vec<Node>, GatewayError> {
    let value = parse_reply(line)?;
    serde_json::from_value::<NodesReply>(value)
        .map(|r| r.nodes)
        .map_err(|e| GatewayError::MalformedResponse(e.to_string()))
}

pub fn parse_node_reply(line: &str) -> Result<Node, GatewayError> {
    let value = parse_reply(line)?;
    serde_json::from_value::<NodeReply>(value)
        .map(|r| r.node)
        .map_err(|e| GatewayError::MalformedResponse(e.to_string()))
}

fn parse_reply(line: &str) -> Result<Value, GatewayError> {
    let value: Value =
        serde_json::from_str(line).map_err(|e| GatewayError::MalformedResponse(e.to_string()))?;
    if let Some(err) = value.get("error") {
        let body: ErrorBody = serde_json::from_value(err.clone())
            .map_err(|e| GatewayError::MalformedResponse(e.to_string()))?;
        return Err(GatewayError::Gateway {
            code: body.code,
            message: body.message,
        });
    }
    Ok(value)
}

/// Integer attribute type codes to names. Only the names matter to the
/// crawler as secondary labels; units carry the semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeTypeRegistry {
    names: BTreeMap<u32, String>,
}

pub const CURRENT_ENERGY_USE: u32 = 3;
pub const ACCUMULATED_ENERGY_USE: u32 = 4;

impl Default for AttributeTypeRegistry {
    fn default() -> Self {
        let mut names = BTreeMap::new();
        names.insert(CURRENT_ENERGY_USE, "CurrentEnergyUse".to_string());
        names.insert(ACCUMULATED_ENERGY_USE, "AccumulatedEnergyUse".to_string());
        AttributeTypeRegistry { names }
    }
}

impl AttributeTypeRegistry {
    /// `{"3":"CurrentEnergyUse", ...}`
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        Ok(AttributeTypeRegistry {
            names: serde_json::from_str(text)?,
        })
    }

    pub fn name(&self, code: u32) -> Option<&str> {
        self.names.get(&code).map(String::as_str)
    }
}

/// A line-oriented duplex channel to a gateway.
pub trait Connection {
    fn send_line(&mut self, line: &str) -> Result<(), GatewayError>;

    fn recv_line(&mut self) -> Result<String, GatewayError>;

    /// One request, one reply; never interleaved.
    fn request(&mut self, line: &str) -> Result<String, GatewayError> {
        self.send_line(line)?;
        self.recv_line()
    }
}

pub struct TcpConnection {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
}

impl TcpConnection {
    pub fn connect(addr: SocketAddr, timeout: Duration) -> Result<Self, GatewayError> {
        let stream = TcpStream::connect_timeout(&addr, timeout)?;
        stream.set_read_timeout(Some(timeout))?;
        stream.set_nodelay(true)?;
        Ok(TcpConnection {
            reader: BufReader::new(stream.try_clone()?),
            writer: stream,
        })
    }
}

impl Connection for TcpConnection {
    fn send_line(&mut self, line: &str) -> Result<(), GatewayError> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        Ok(())
    }

    fn recv_line(&mut self) -> Result<String, GatewayError> {
        let mut line = String::new();
        if self.reader.read_line(&mut line)? == 0 {
            return Err(GatewayError::ConnectionClosed);
        }
        if !line.ends_with('\n') {
            return Err(GatewayError::ConnectionClosed);
        }
        line.pop();
        if line.ends_with('\r') {
            line.pop();
        }
        Ok(line)
    }
}

/// Inventory: sends `GET:nodes/`.
pub fn request_nodes(conn: &mut dyn Connection) -> Result<Vec<Node>, GatewayError> {
    parse_nodes_reply(&conn.request("GET:nodes/")?)
}

/// Full node with attributes: sends `GET:nodes/<id>`. A reply without an
/// `id` is taken to be the requested node.
pub fn request_node(conn: &mut dyn Connection, id: u32) -> Result<Node, GatewayError> {
    if id == 0 {
        return Err(GatewayError::InvalidRequest("node ids start at 1".into()));
    }
    let mut node = match parse_node_reply(&conn.request(&format!("GET:nodes/{id}"))?) {
        Err(GatewayError::Gateway { code: 404, .. }) => return Err(GatewayError::NodeNotFound(id)),
        other => other?,
    };
    if node.id == 0 {
        node.id = id;
    } else if node.id != id {
        return Err(GatewayError::MalformedResponse(format!(
            "asked for node {id}, got node {}",
            node.id
        )));
    }
    Ok(node)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Unix seconds, the attribute's `last_changed`.
    pub timestamp: i64,
    pub value: f64,
    pub unit: String,
}

/// `count` polls of one attribute, `period` apart on `clock`. A sample is
/// emitted only when `last_changed` moves forward.
pub fn poll_measurements(
    conn: &mut dyn Connection,
    clock: &dyn Clock,
    node_id: u32,
    attr_code: u32,
    period: Duration,
    count: usize,
) -> Result<Vec<Sample>, GatewayError> {
    let mut out = poll_many(conn, clock, &[(node_id, attr_code)], period, count)?;
    Ok(out.pop().unwrap_or_default())
}

/// Like [`poll_measurements`] for several (node, attribute type) targets
/// sharing one schedule; targets are requested in order on each tick.
pub fn poll_many(
    conn: &mut dyn Connection,
    clock: &dyn Clock,
    targets: &[(u32, u32)],
    period: Duration,
    count: usize,
) -> Result<Vec<Vec<Sample>>, GatewayError> {
    if period.is_zero() {
        return Err(GatewayError::InvalidRequest("poll period must be positive".into()));
    }
    let mut out: Vec<Vec<Sample>> = vec![Vec::new(); targets.len()];
    for tick in 0..count {
        if tick > 0 {
            clock.sleep(period);
        }
        for (series, &(node_id, code)) in out.iter_mut().zip(targets) {
            let node = request_node(conn, node_id)?;
            let attr = node
                .attribute_of_type(code)
                .ok_or(GatewayError::AttributeMissing { node: node_id, code })?;
            if series.last().is_some_and(|s| attr.last_changed <= s.timestamp) {
                continue;
            }
            series.push(Sample {
                timestamp: attr.last_changed,
                value: attr.current_value,
                unit: attr.unit.clone(),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::VecDeque;

    pub(crate) const DEMO_NODES: &str = r#"{"nodes":[{"added":1548863167,"id":7,"name":"FIBARO System FGWPE/F Wall Plug Gen5"},{"added":1550568947,"id":8,"name":"Fibaro%20Kitchen"}]}"#;
    pub(crate) const DEMO_NODE_8: &str = r#"{"node":{"added":1550568947,"attributes":[{"current_value":2.9,"id":64,"last_changed":1550570278,"node_id":8,"type":3,"unit":"W"}]}}"#;

    /// Replays canned reply lines and records requests.
    struct Script {
        replies: VecDeque<String>,
        sent: Vec<String>,
    }

    impl Script {
        fn new(replies: &[&str]) -> Self {
            Script {
                replies: replies.iter().map(|s| s.to_string()).collect(),
                sent: Vec::new(),
            }
        }
    }

    impl Connection for Script {
        fn send_line(&mut self, line: &str) -> Result<(), GatewayError> {
            self.sent.push(line.to_string());
            Ok(())
        }

        fn recv_line(&mut self) -> Result<String, GatewayError> {
            self.replies.pop_front().ok_or(GatewayError::ConnectionClosed)
        }
    }

    #[test]
    fn demo_inventory() {
        let mut conn = Script::new(&[DEMO_NODES, r#"{"nodes":[]}"#, "not json"]);
        let nodes = request_nodes(&mut conn).unwrap();
        assert_eq!(conn.sent, ["GET:nodes/"]);
        assert_eq!(nodes.len(), 2);
        assert_eq!((nodes[0].added, nodes[0].id), (1548863167, 7));
        assert_eq!(nodes[0].name, "FIBARO System FGWPE/F Wall Plug Gen5");
        assert_eq!((nodes[1].added, nodes[1].id), (1550568947, 8));
        assert_eq!(nodes[1].name, "Fibaro%20Kitchen");
        assert!(nodes.iter().all(|n| n.attributes.is_empty()));
        assert!(request_nodes(&mut conn).unwrap().is_empty());
        assert!(matches!(request_nodes(&mut conn), Err(GatewayError::MalformedResponse(_))));
        assert!(matches!(request_nodes(&mut conn), Err(GatewayError::ConnectionClosed)));
    }

    #[test]
    fn demo_node_8() {
        let mut conn = Script::new(&[DEMO_NODE_8, &error_reply(404, "node not found")]);
        let node = request_node(&mut conn, 8).unwrap();
        assert_eq!(conn.sent, ["GET:nodes/8"]);
        assert_eq!(node.id, 8);
        assert_eq!(
            node.attributes,
            [Attribute {
                current_value: 2.9,
                id: 64,
                last_changed: 1550570278,
                node_id: 8,
                kind: 3,
                unit: "W".into()
            }]
        );
        assert!(matches!(request_node(&mut conn, 99), Err(GatewayError::NodeNotFound(99))));
    }

    #[test]
    fn reply_payloads_are_fixed_points() {
        let nodes = parse_nodes_reply(DEMO_NODES).unwrap();
        assert_eq!(nodes_reply(&nodes), DEMO_NODES);
        let node = parse_node_reply(DEMO_NODE_8).unwrap();
        assert_eq!(node_reply(&node), DEMO_NODE_8);
    }

    #[test]
    fn unknown_keys_ignored() {
        let line = r#"{"node":{"added":5,"favorite":1,"id":3,"attributes":[{"current_value":1,"id":1,"last_changed":2,"node_id":3,"type":4,"unit":"kWh","editable":0}]}}"#;
        let node = parse_node_reply(line).unwrap();
        assert_eq!(node.attributes[0].unit, "kWh");
    }

    fn power_reply(value: f64, changed: i64) -> String {
        node_reply(&Node {
            added: 1,
            attributes: vec![Attribute {
                current_value: value,
                id: 64,
                last_changed: changed,
                node_id: 8,
                kind: CURRENT_ENERGY_USE,
                unit: "W".into(),
            }],
            id: 8,
            ip: None,
            name: String::new(),
            room: None,
        })
    }

    #[test]
    fn polling_suppresses_repeats() {
        let clock = crate::clock::SimClock::parse("2019-02-19T10:57:58+01:00").unwrap();
        let replies = [
            power_reply(0.0, 100),
            power_reply(0.0, 100),
            power_reply(2000.0, 120),
            power_reply(2000.0, 120),
        ];
        let refs: Vec<&str> = replies.iter().map(String::as_str).collect();
        let mut conn = Script::new(&refs);
        let samples = poll_measurements(&mut conn, &clock, 8, 3, Duration::from_secs(10), 4).unwrap();
        let values: Vec<(i64, f64)> = samples.iter().map(|s| (s.timestamp, s.value)).collect();
        assert_eq!(values, [(100, 0.0), (120, 2000.0)]);
        assert_eq!(conn.sent.len(), 4);
        assert_eq!(clock.now_millis(), 1550570278000 + 30_000);

        let mut conn = Script::new(&refs[..1]);
        assert!(matches!(
            poll_measurements(&mut conn, &clock, 8, 4, Duration::from_secs(10), 1),
            Err(GatewayError::AttributeMissing { node: 8, code: 4 })
        ));
    }

    #[test]
    fn registry_codes() {
        let r = AttributeTypeRegistry::default();
        assert_eq!(r.name(3), Some("CurrentEnergyUse"));
        assert_eq!(r.name(4), Some("AccumulatedEnergyUse"));
        assert_eq!(r.name(99), None);
    }
}
