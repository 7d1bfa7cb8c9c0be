use std::collections::VecDeque;
use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use super::scenario::{Scenario, SimDevice};
use super::SimError;
use crate::clock::Clock;
use crate::gateway::{
    error_reply, node_reply, nodes_reply, Attribute, Connection, GatewayError, Node, ACCUMULATED_ENERGY_USE,
    CURRENT_ENERGY_USE,
};

pub fn power_attribute_id(node_id: u32) -> u32 {
    node_id * 8
}

pub fn energy_attribute_id(node_id: u32) -> u32 {
    node_id * 8 + 1
}

fn round_to(v: f64, digits: i32) -> f64 {
    let f = 10f64.powi(digits);
    (v * f).round() / f
}

/// Gateway answering node requests from a scenario's generated traces.
/// Attribute values follow the trace sample current at `clock` time and
/// hold the last sample once the trace ends.
pub struct SimGateway {
    devices: Vec<SimDevice>,
    /// Cumulative kWh after each sample, per device.
    energy: Vec<Vec<f64>>,
    clock: Arc<dyn Clock>,
}

impl SimGateway {
    pub fn new(scenario: &Scenario, clock: Arc<dyn Clock>) -> Result<Self, SimError> {
        let devices = scenario.materialise()?;
        let energy = devices
            .iter()
            .map(|d| {
                let step_kwh = f64::from(d.trace.period_sec) / 3600.0 / 1000.0;
                d.trace
                    .watts
                    .iter()
                    .scan(0.0, |acc, w| {
                        *acc += w * step_kwh;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        Ok(SimGateway { devices, energy, clock })
    }

    pub fn devices(&self) -> &[SimDevice] {
        &self.devices
    }

    fn summary(d: &SimDevice) -> Node {
        Node {
            added: d.spec.added,
            attributes: Vec::new(),
            id: d.spec.node_id,
            ip: d.spec.ip.filter(|_| d.spec.report_ip).map(|ip| ip.to_string()),
            name: d.spec.node_name.clone(),
            room: d.spec.location.clone(),
        }
    }

    fn node_at(&self, index: usize, now: i64) -> Node {
        let d = &self.devices[index];
        let t = &d.trace;
        let elapsed = (now - t.start_time).max(0) / i64::from(t.period_sec);
        let i = (elapsed as usize).min(t.len() - 1);
        let last_changed = t.timestamp(i);
        let id = d.spec.node_id;
        let mut node = Self::summary(d);
        node.attributes = vec![
            Attribute {
                current_value: round_to(t.watts[i], 1),
                id: power_attribute_id(id),
                last_changed,
                node_id: id,
                kind: CURRENT_ENERGY_USE,
                unit: "W".into(),
            },
            Attribute {
                current_value: round_to(self.energy[index][i], 4),
                id: energy_attribute_id(id),
                last_changed,
                node_id: id,
                kind: ACCUMULATED_ENERGY_USE,
                unit: "kWh".into(),
            },
        ];
        node
    }

    /// Reply line for one request line.
    pub fn handle(&self, request: &str) -> String {
        let request = request.trim();
        if request == "GET:nodes/" || request == "GET:nodes" {
            let nodes: Vec<Node> = self.devices.iter().map(Self::summary).collect();
            return nodes_reply(&nodes);
        }
        if let Some(id) = request.strip_prefix("GET:nodes/") {
            return match id.parse::<u32>() {
                Ok(id) => match self.devices.iter().position(|d| d.spec.node_id == id) {
                    Some(i) => node_reply(&self.node_at(i, self.clock.unix_seconds())),
                    None => error_reply(404, &format!("node {id} not found")),
                },
                Err(_) => error_reply(400, &format!("bad node id {id:?}")),
            };
        }
        error_reply(400, &format!("unsupported request {request:?}"))
    }

    pub fn connect(self: &Arc<Self>) -> SimConnection {
        SimConnection { gateway: Arc::clone(self), replies: VecDeque::new() }
    }
}

/// In-process connection to a [`SimGateway`].
pub struct SimConnection {
    gateway: Arc<SimGateway>,
    replies: VecDeque<String>,
}

impl Connection for SimConnection {
    fn send_line(&mut self, line: &str) -> Result<(), GatewayError> {
        self.replies.push_back(self.gateway.handle(line));
        Ok(())
    }

    fn recv_line(&mut self) -> Result<String, GatewayError> {
        self.replies.pop_front().ok_or(GatewayError::ConnectionClosed)
    }
}

/// A gateway served over TCP on a background thread.
pub struct GatewayHandle {
    addr: SocketAddr,
    stop: Arc<AtomicBool>,
    thread: Option<JoinHandle<()>>,
}

impl GatewayHandle {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn stop(mut self) {
        self.shutdown();
    }

    /// Blocks until the server thread exits, which it only does after
    /// [`GatewayHandle::stop`] from elsewhere or an accept failure.
    pub fn wait(mut self) {
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }

    fn shutdown(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

impl Drop for GatewayHandle {
    fn drop(&mut self) {
        self.shutdown();
    }
}

const POLL_INTERVAL: Duration = Duration::from_millis(20);

/// Serves newline-framed requests, one connection at a time.
pub fn run_gateway(gateway: Arc<SimGateway>, addr: SocketAddr) -> Result<GatewayHandle, SimError> {
    let listener = TcpListener::bind(addr).map_err(|e| SimError::Bind(addr, e))?;
    let addr = listener.local_addr()?;
    listener.set_nonblocking(true)?;
    let stop = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&stop);
    let thread = std::thread::spawn(move || {
        while !flag.load(Ordering::SeqCst) {
            match listener.accept() {
                Ok((stream, _)) => {
                    let _ = serve(&gateway, stream, &flag);
                }
                Err(e) if e.kind() == io::ErrorKind::WouldBlock => std::thread::sleep(POLL_INTERVAL),
                Err(_) => break,
            }
        }
    });
    Ok(GatewayHandle { addr, stop, thread: Some(thread) })
}

fn serve(gateway: &SimGateway, stream: TcpStream, stop: &AtomicBool) -> io::Result<()> {
    stream.set_nonblocking(false)?;
    stream.set_read_timeout(Some(POLL_INTERVAL * 10))?;
    let mut writer = stream.try_clone()?;
    let mut reader = BufReader::new(stream);
    let mut line = String::new();
    while !stop.load(Ordering::SeqCst) {
        match reader.read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {
                let reply = gateway.handle(&line);
                writer.write_all(reply.as_bytes())?;
                writer.write_all(b"\n")?;
                line.clear();
            }
            Err(e) if matches!(e.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(())
}
