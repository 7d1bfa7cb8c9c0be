//! DNS wire format as used by mDNS-SD. The encoder writes names
//! uncompressed; the decoder follows compression pointers.

use std::collections::HashSet;
use std::net::Ipv4Addr;

use super::DiscoveryError;

pub const TYPE_A: u16 = 1;
pub const TYPE_PTR: u16 = 12;
pub const TYPE_TXT: u16 = 16;
pub const TYPE_SRV: u16 = 33;
pub const CLASS_IN: u16 = 1;

const MAX_LABEL: usize = 63;
const MAX_NAME: usize = 255;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    /// Dotted, without the trailing root dot.
    pub name: String,
    pub qtype: u16,
    pub qclass: u16,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RData {
    A(Ipv4Addr),
    Ptr(String),
    Srv {
        priority: u16,
        weight: u16,
        port: u16,
        target: String,
    },
    Txt(Vec<Vec<u8>>),
    Other { rtype: u16, bytes: Vec<u8> },
}

impl RData {
    pub fn rtype(&self) -> u16 {
        match self {
            RData::A(_) => TYPE_A,
            RData::Ptr(_) => TYPE_PTR,
            RData::Srv { .. } => TYPE_SRV,
            RData::Txt(_) => TYPE_TXT,
            RData::Other { rtype, .. } => *rtype,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub name: String,
    pub class: u16,
    pub ttl: u32,
    pub data: RData,
}

impl Record {
    /// `key=value` TXT entries; entries without `=` map to an empty value.
    pub fn txt_pairs(&self) -> Vec<(String, String)> {
        let RData::Txt(entries) = &self.data else {
            return Vec::new();
        };
        entries
            .iter()
            .filter(|e| !e.is_empty())
            .map(|e| {
                let s = String::from_utf8_lossy(e);
                match s.split_once('=') {
                    Some((k, v)) => (k.to_string(), v.to_string()),
                    None => (s.into_owned(), String::new()),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MdnsPacket {
    pub id: u16,
    pub flags: u16,
    pub questions: Vec<Question>,
    pub answers: Vec<Record>,
    pub authority: Vec<Record>,
    pub additional: Vec<Record>,
}

impl MdnsPacket {
    pub const RESPONSE_FLAGS: u16 = 0x8400;

    pub fn is_response(&self) -> bool {
        self.flags & 0x8000 != 0
    }

    /// Answers then additional records.
    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.answers.iter().chain(&self.additional)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, DiscoveryError> {
        let mut out = Vec::with_capacity(512);
        out.extend_from_slice(&self.id.to_be_bytes());
        out.extend_from_slice(&self.flags.to_be_bytes());
        for n in [
            self.questions.len(),
            self.answers.len(),
            self.authority.len(),
            self.additional.len(),
        ] {
            let n = u16::try_from(n).map_err(|_| DiscoveryError::MalformedRecord("section"))?;
            out.extend_from_slice(&n.to_be_bytes());
        }
        for q in &self.questions {
            write_name(&mut out, &q.name)?;
            out.extend_from_slice(&q.qtype.to_be_bytes());
            out.extend_from_slice(&q.qclass.to_be_bytes());
        }
        for r in self.answers.iter().chain(&self.authority).chain(&self.additional) {
            write_record(&mut out, r)?;
        }
        Ok(out)
    }
}

/// A one-question PTR query, id 0, standard query flags.
pub fn encode_mdns_query(service: &str) -> Result<Vec<u8>, DiscoveryError> {
    MdnsPacket {
        questions: vec![Question {
            name: service.to_string(),
            qtype: TYPE_PTR,
            qclass: CLASS_IN,
        }],
        ..Default::default()
    }
    .to_bytes()
}

fn write_name(out: &mut Vec<u8>, name: &str) -> Result<(), DiscoveryError> {
    let mut total = 1;
    if !name.is_empty() {
        for label in name.split('.') {
            if label.is_empty() {
                return Err(DiscoveryError::MalformedRecord("name"));
            }
            if label.len() > MAX_LABEL {
                return Err(DiscoveryError::LabelTooLong);
            }
            total += label.len() + 1;
            if total > MAX_NAME {
                return Err(DiscoveryError::NameTooLong);
            }
            out.push(label.len() as u8);
            out.extend_from_slice(label.as_bytes());
        }
    }
    out.push(0);
    Ok(())
}

fn write_record(out: &mut Vec<u8>, r: &Record) -> Result<(), DiscoveryError> {
    write_name(out, &r.name)?;
    out.extend_from_slice(&r.data.rtype().to_be_bytes());
    out.extend_from_slice(&r.class.to_be_bytes());
    out.extend_from_slice(&r.ttl.to_be_bytes());
    let mut rdata = Vec::new();
    match &r.data {
        RData::A(ip) => rdata.extend_from_slice(&ip.octets()),
        RData::Ptr(target) => write_name(&mut rdata, target)?,
        RData::Srv {
            priority,
            weight,
            port,
            target,
        } => {
            rdata.extend_from_slice(&priority.to_be_bytes());
            rdata.extend_from_slice(&weight.to_be_bytes());
            rdata.extend_from_slice(&port.to_be_bytes());
            write_name(&mut rdata, target)?;
        }
        RData::Txt(entries) => {
            for e in entries {
                let len = u8::try_from(e.len()).map_err(|_| DiscoveryError::MalformedRecord("TXT"))?;
                rdata.push(len);
                rdata.extend_from_slice(e);
            }
        }
        RData::Other { bytes, .. } => rdata.extend_from_slice(bytes),
    }
    let len = u16::try_from(rdata.len()).map_err(|_| DiscoveryError::MalformedRecord("rdata"))?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(&rdata);
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DiscoveryError> {
        let end = self.pos.checked_add(n).ok_or(DiscoveryError::Truncated)?;
        let s = self.buf.get(self.pos..end).ok_or(DiscoveryError::Truncated)?;
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16, DiscoveryError> {
        let b = self.take(2)?;
        Ok(u16::from_be_bytes([b[0], b[1]]))
    }

    fn u32(&mut self) -> Result<u32, DiscoveryError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn name(&mut self) -> Result<String, DiscoveryError> {
        let (name, next) = read_name(self.buf, self.pos)?;
        self.pos = next;
        Ok(name)
    }
}

/// Returns the name and the offset just past it in the original stream
/// (i.e. after the first pointer, if any).
fn read_name(buf: &[u8], start: usize) -> Result<(String, usize), DiscoveryError> {
    let mut labels: Vec<String> = Vec::new();
    let mut pos = start;
    let mut resume = None;
    let mut seen = HashSet::new();
    let mut total = 1;
    loop {
        let len = *buf.get(pos).ok_or(DiscoveryError::Truncated)? as usize;
        match len & 0xC0 {
            0x00 if len == 0 => {
                pos += 1;
                break;
            }
            0x00 => {
                let label = buf.get(pos + 1..pos + 1 + len).ok_or(DiscoveryError::Truncated)?;
                total += len + 1;
                if total > MAX_NAME {
                    return Err(DiscoveryError::NameTooLong);
                }
                labels.push(String::from_utf8_lossy(label).into_owned());
                pos += 1 + len;
            }
            0xC0 => {
                let lo = *buf.get(pos + 1).ok_or(DiscoveryError::Truncated)? as usize;
                if !seen.insert(pos) {
                    return Err(DiscoveryError::PointerLoop);
                }
                resume.get_or_insert(pos + 2);
                pos = ((len & 0x3F) << 8) | lo;
            }
            // 0x40 and 0x80 prefixes would encode lengths above 63.
            _ => return Err(DiscoveryError::LabelTooLong),
        }
    }
    Ok((labels.join("."), resume.unwrap_or(pos)))
}

fn read_record(r: &mut Reader<'_>) -> Result<Record, DiscoveryError> {
    let name = r.name()?;
    let rtype = r.u16()?;
    let class = r.u16()?;
    let ttl = r.u32()?;
    let len = r.u16()? as usize;
    let start = r.pos;
    let bytes = r.take(len)?;
    let end = r.pos;
    let buf = r.buf;
    // Names inside rdata may point anywhere in the packet.
    let name_in_rdata = |offset: usize, what| -> Result<String, DiscoveryError> {
        let (n, next) = read_name(buf, offset)?;
        if next != end {
            return Err(DiscoveryError::MalformedRecord(what));
        }
        Ok(n)
    };
    let data = match rtype {
        TYPE_A => {
            let o: [u8; 4] = bytes.try_into().map_err(|_| DiscoveryError::MalformedRecord("A"))?;
            RData::A(Ipv4Addr::from(o))
        }
        TYPE_PTR => RData::Ptr(name_in_rdata(start, "PTR")?),
        TYPE_SRV => {
            if len < 7 {
                return Err(DiscoveryError::MalformedRecord("SRV"));
            }
            let f = |i: usize| u16::from_be_bytes([bytes[i], bytes[i + 1]]);
            RData::Srv {
                priority: f(0),
                weight: f(2),
                port: f(4),
                target: name_in_rdata(start + 6, "SRV")?,
            }
        }
        TYPE_TXT => {
            let mut entries = Vec::new();
            let mut i = 0;
            while i < bytes.len() {
                let n = bytes[i] as usize;
                let e = bytes
                    .get(i + 1..i + 1 + n)
                    .ok_or(DiscoveryError::MalformedRecord("TXT"))?;
                entries.push(e.to_vec());
                i += 1 + n;
            }
            RData::Txt(entries)
        }
        other => RData::Other {
            rtype: other,
            bytes: bytes.to_vec(),
        },
    };
    Ok(Record {
        name,
        class,
        ttl,
        data,
    })
}

pub fn parse_mdns(bytes: &[u8]) -> Result<MdnsPacket, DiscoveryError> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let id = r.u16()?;
    let flags = r.u16()?;
    let counts = [r.u16()?, r.u16()?, r.u16()?, r.u16()?];
    let mut packet = MdnsPacket {
        id,
        flags,
        ..Default::default()
    };
    for _ in 0..counts[0] {
        let name = r.name()?;
        packet.questions.push(Question {
            name,
            qtype: r.u16()?,
            qclass: r.u16()?,
        });
    }
    for (section, n) in [
        (&mut packet.answers, counts[1]),
        (&mut packet.authority, counts[2]),
        (&mut packet.additional, counts[3]),
    ] {
        for _ in 0..n {
            section.push(read_record(&mut r)?);
        }
    }
    Ok(packet)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_round_trip() {
        let bytes = encode_mdns_query("_hap._tcp.local").unwrap();
        let p = parse_mdns(&bytes).unwrap();
        assert_eq!(p.questions.len(), 1);
        assert_eq!(p.questions[0].name, "_hap._tcp.local");
        assert_eq!(p.questions[0].qtype, TYPE_PTR);
        assert!(p.answers.is_empty());
        assert!(!p.is_response());
    }

    #[test]
    fn self_pointer_is_a_loop() {
        // header with one question whose name is a pointer to itself
        let mut b = vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0];
        b.extend_from_slice(&[0xC0, 12, 0, 12, 0, 1]);
        assert!(matches!(parse_mdns(&b), Err(DiscoveryError::PointerLoop)));
    }

    #[test]
    fn length_guards() {
        assert!(matches!(encode_mdns_query(&"a".repeat(64)), Err(DiscoveryError::LabelTooLong)));
        let long = vec!["abcdefghij"; 24].join(".");
        assert!(matches!(encode_mdns_query(&long), Err(DiscoveryError::NameTooLong)));
        assert!(matches!(parse_mdns(&[0, 0, 0]), Err(DiscoveryError::Truncated)));
        let mut b = vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0x40];
        b.extend_from_slice(&[0; 70]);
        assert!(matches!(parse_mdns(&b), Err(DiscoveryError::LabelTooLong)));
    }
}
