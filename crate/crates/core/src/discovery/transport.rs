use std::collections::BTreeMap;
use std::io;
use std::net::{Ipv4Addr, SocketAddr, SocketAddrV4, UdpSocket};
use std::sync::Arc;
use std::time::Duration;

use crate::clock::SimClock;

pub const SSDP_GROUP: SocketAddrV4 = SocketAddrV4::new(Ipv4Addr::new(239, 255, 255, 250), 1900);
pub const MDNS_GROUP: SocketAddrV4 = SocketAddrV4::new(Ipv4Addr::new(224, 0, 0, 251), 5353);

/// Datagram transport. `receive` returns `Ok(None)` once `timeout`
/// elapses without traffic; it never blocks indefinitely.
pub trait Transport {
    fn send(&mut self, to: SocketAddr, bytes: &[u8]) -> io::Result<()>;

    fn receive(&mut self, timeout: Duration) -> io::Result<Option<(SocketAddr, Vec<u8>)>>;
}

pub struct UdpTransport {
    socket: UdpSocket,
}

impl UdpTransport {
    /// Binds an ephemeral port; multicast replies arrive as unicast.
    pub fn bind() -> io::Result<Self> {
        let socket = UdpSocket::bind((Ipv4Addr::UNSPECIFIED, 0))?;
        socket.set_multicast_ttl_v4(2)?;
        Ok(UdpTransport { socket })
    }
}

impl Transport for UdpTransport {
    fn send(&mut self, to: SocketAddr, bytes: &[u8]) -> io::Result<()> {
        self.socket.send_to(bytes, to).map(|_| ())
    }

    fn receive(&mut self, timeout: Duration) -> io::Result<Option<(SocketAddr, Vec<u8>)>> {
        // A zero read timeout means "block forever" to the OS.
        self.socket
            .set_read_timeout(Some(timeout.max(Duration::from_millis(1))))?;
        let mut buf = vec![0u8; 9000];
        match self.socket.recv_from(&mut buf) {
            Ok((n, from)) => {
                buf.truncate(n);
                Ok(Some((from, buf)))
            }
            Err(e) if matches!(e.kind(), io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub from: SocketAddr,
    pub delay: Duration,
    pub bytes: Vec<u8>,
}

/// Simulated device: sees every datagram sent on the bus and may answer.
pub trait Responder: Send {
    fn respond(&mut self, to: SocketAddr, bytes: &[u8]) -> Vec<Reply>;
}

impl<F> Responder for F
where
    F: FnMut(SocketAddr, &[u8]) -> Vec<Reply> + Send,
{
    fn respond(&mut self, to: SocketAddr, bytes: &[u8]) -> Vec<Reply> {
        self(to, bytes)
    }
}

/// In-process scripted network. Delivery order is (due time, enqueue
/// order), and `receive` advances the shared logical clock, so a scan is
/// a pure function of the script.
pub struct SimBus {
    clock: Arc<SimClock>,
    responders: Vec<Box<dyn Responder>>,
    queue: BTreeMap<(i64, u64), (SocketAddr, Vec<u8>)>,
    seq: u64,
    sent: Vec<(SocketAddr, Vec<u8>)>,
}

impl SimBus {
    pub fn new(clock: Arc<SimClock>) -> Self {
        SimBus {
            clock,
            responders: Vec::new(),
            queue: BTreeMap::new(),
            seq: 0,
            sent: Vec::new(),
        }
    }

    pub fn clock(&self) -> &Arc<SimClock> {
        &self.clock
    }

    pub fn add_responder(&mut self, responder: impl Responder + 'static) {
        self.responders.push(Box::new(responder));
    }

    /// Unsolicited datagram delivered `delay` after the current time.
    pub fn schedule(&mut self, from: SocketAddr, delay: Duration, bytes: Vec<u8>) {
        let due = self.clock.now_millis() + delay.as_millis() as i64;
        self.queue.insert((due, self.seq), (from, bytes));
        self.seq += 1;
    }

    /// Every datagram sent through the bus, in order.
    pub fn sent(&self) -> &[(SocketAddr, Vec<u8>)] {
        &self.sent
    }
}

impl Transport for SimBus {
    fn send(&mut self, to: SocketAddr, bytes: &[u8]) -> io::Result<()> {
        self.sent.push((to, bytes.to_vec()));
        let mut replies = Vec::new();
        for r in &mut self.responders {
            replies.extend(r.respond(to, bytes));
        }
        for reply in replies {
            self.schedule(reply.from, reply.delay, reply.bytes);
        }
        Ok(())
    }

    fn receive(&mut self, timeout: Duration) -> io::Result<Option<(SocketAddr, Vec<u8>)>> {
        let deadline = self.clock.now_millis() + timeout.as_millis() as i64;
        match self.queue.first_key_value() {
            Some((&(due, _), _)) if due <= deadline => {
                let ((due, _), msg) = self.queue.pop_first().expect("non-empty queue");
                self.clock.advance_to_millis(due);
                Ok(Some(msg))
            }
            _ => {
                self.clock.advance_to_millis(deadline);
                Ok(None)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bus_orders_by_due_time_and_times_out() {
        let clock = Arc::new(SimClock::parse("2018-10-29T12:13:01+01:00").unwrap());
        let mut bus = SimBus::new(clock.clone());
        let a: SocketAddr = "192.168.1.10:1900".parse().unwrap();
        let b: SocketAddr = "192.168.1.20:5353".parse().unwrap();
        bus.add_responder(move |_to: SocketAddr, _b: &[u8]| {
            vec![
                Reply { from: a, delay: Duration::from_millis(300), bytes: b"late".to_vec() },
                Reply { from: b, delay: Duration::ZERO, bytes: b"early".to_vec() },
            ]
        });
        bus.send(SSDP_GROUP.into(), b"q").unwrap();
        let start = clock.now_millis();
        assert_eq!(bus.receive(Duration::from_secs(1)).unwrap().unwrap().1, b"early");
        assert_eq!(clock.now_millis(), start);
        assert!(bus.receive(Duration::from_millis(100)).unwrap().is_none());
        assert_eq!(clock.now_millis(), start + 100);
        assert_eq!(bus.receive(Duration::from_secs(1)).unwrap().unwrap().0, a);
        assert_eq!(clock.now_millis(), start + 300);
        assert!(bus.receive(Duration::from_secs(1)).unwrap().is_none());
    }
}
