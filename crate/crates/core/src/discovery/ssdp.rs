//! SSDP messages: HTTP-shaped text over UDP.

use std::fmt::Write as _;

use super::DiscoveryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsdpKind {
    MSearch,
    Notify,
    Response,
}

impl SsdpKind {
    fn start_line(self) -> &'static str {
        match self {
            SsdpKind::MSearch => "M-SEARCH * HTTP/1.1",
            SsdpKind::Notify => "NOTIFY * HTTP/1.1",
            SsdpKind::Response => "HTTP/1.1 200 OK",
        }
    }
}

/// Header names are stored upper-cased, in first-seen order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SsdpMessage {
    pub kind: SsdpKind,
    headers: Vec<(String, String)>,
}

impl SsdpMessage {
    pub fn new(kind: SsdpKind) -> Self {
        SsdpMessage {
            kind,
            headers: Vec::new(),
        }
    }

    pub fn with_header(mut self, name: &str, value: &str) -> Self {
        self.set_header(name, value);
        self
    }

    /// Replaces an existing value in place, so the first position wins
    /// and the last value wins.
    pub fn set_header(&mut self, name: &str, value: &str) {
        let name = name.to_ascii_uppercase();
        match self.headers.iter_mut().find(|(n, _)| *n == name) {
            Some((_, v)) => *v = value.to_string(),
            None => self.headers.push((name, value.to_string())),
        }
    }

    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn headers(&self) -> &[(String, String)] {
        &self.headers
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str(self.kind.start_line());
        out.push_str("\r\n");
        for (name, value) in &self.headers {
            let _ = write!(out, "{name}: {value}\r\n");
        }
        out.push_str("\r\n");
        out.into_bytes()
    }

    fn check_required(&self) -> Result<(), DiscoveryError> {
        match self.kind {
            SsdpKind::MSearch => {
                if self.header("MAN") != Some("\"ssdp:discover\"") {
                    return Err(DiscoveryError::MissingRequiredHeader("MAN"));
                }
                if self.header("ST").is_none() {
                    return Err(DiscoveryError::MissingRequiredHeader("ST"));
                }
            }
            SsdpKind::Response | SsdpKind::Notify => {
                if self.header("USN").is_none() {
                    return Err(DiscoveryError::MissingRequiredHeader("USN"));
                }
            }
        }
        Ok(())
    }
}

pub fn encode_msearch(st: &str, mx: u32) -> Result<Vec<u8>, DiscoveryError> {
    if !(1..=5).contains(&mx) {
        return Err(DiscoveryError::InvalidMx(mx));
    }
    if st.trim().is_empty() || st.trim() != st || st.contains(['\r', '\n']) {
        return Err(DiscoveryError::MalformedHeader(format!("ST: {st}")));
    }
    Ok(format!(
        "M-SEARCH * HTTP/1.1\r\nHOST: 239.255.255.250:1900\r\nMAN: \"ssdp:discover\"\r\nMX: {mx}\r\nST: {st}\r\n\r\n"
    )
    .into_bytes())
}

pub fn parse_ssdp(bytes: &[u8]) -> Result<SsdpMessage, DiscoveryError> {
    let text = String::from_utf8_lossy(bytes);
    let mut lines = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l));
    let start = lines.next().unwrap_or_default();
    let kind = match start.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["M-SEARCH", "*", "HTTP/1.1"] => SsdpKind::MSearch,
        ["NOTIFY", "*", "HTTP/1.1"] => SsdpKind::Notify,
        ["HTTP/1.1", "200", ..] => SsdpKind::Response,
        _ => return Err(DiscoveryError::MalformedStartLine(start.to_string())),
    };
    let mut msg = SsdpMessage::new(kind);
    for line in lines {
        if line.is_empty() {
            break;
        }
        let Some((name, value)) = line.split_once(':') else {
            return Err(DiscoveryError::MalformedHeader(line.to_string()));
        };
        if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c.is_control()) {
            return Err(DiscoveryError::MalformedHeader(line.to_string()));
        }
        msg.set_header(name, value.trim());
    }
    msg.check_required()?;
    Ok(msg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn msearch_bytes_exact() {
        let bytes = encode_msearch("ssdp:all", 2).unwrap();
        assert_eq!(
            bytes,
            b"M-SEARCH * HTTP/1.1\r\nHOST: 239.255.255.250:1900\r\nMAN: \"ssdp:discover\"\r\nMX: 2\r\nST: ssdp:all\r\n\r\n"
        );
        let msg = parse_ssdp(&bytes).unwrap();
        assert_eq!(msg.kind, SsdpKind::MSearch);
        assert_eq!(msg.header("st"), Some("ssdp:all"));
        assert_eq!(msg.to_bytes(), bytes);
        assert!(matches!(encode_msearch("ssdp:all", 0), Err(DiscoveryError::InvalidMx(0))));
        assert!(matches!(encode_msearch("ssdp:all", 6), Err(DiscoveryError::InvalidMx(6))));
    }

    #[test]
    fn response_headers() {
        let raw = b"HTTP/1.1 200 OK\r\nCACHE-CONTROL: max-age=1800\r\nusn: uuid:abc::upnp:rootdevice\r\nServer: homee\r\nSERVER: homee/2.25\r\n\r\n";
        let msg = parse_ssdp(raw).unwrap();
        assert_eq!(msg.kind, SsdpKind::Response);
        assert_eq!(msg.header("USN"), Some("uuid:abc::upnp:rootdevice"));
        assert_eq!(msg.header("SERVER"), Some("homee/2.25"));
        let names: Vec<&str> = msg.headers().iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(names, ["CACHE-CONTROL", "USN", "SERVER"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_ssdp(b"HTTP/1.1"), Err(DiscoveryError::MalformedStartLine(_))));
        assert!(matches!(parse_ssdp(b""), Err(DiscoveryError::MalformedStartLine(_))));
        assert!(matches!(
            parse_ssdp(b"HTTP/1.1 200 OK\r\nno colon here\r\n\r\n"),
            Err(DiscoveryError::MalformedHeader(_))
        ));
        assert!(matches!(
            parse_ssdp(b"HTTP/1.1 200 OK\r\nST: x\r\n\r\n"),
            Err(DiscoveryError::MissingRequiredHeader("USN"))
        ));
        assert!(matches!(
            parse_ssdp(b"M-SEARCH * HTTP/1.1\r\nMAN: ssdp:discover\r\nST: x\r\n\r\n"),
            Err(DiscoveryError::MissingRequiredHeader("MAN"))
        ));
    }
}
