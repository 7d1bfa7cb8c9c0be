//! Deterministic identifiers. Every IRI the crawler mints is a UUIDv5
//! over a kind tag and the identifying parts, so re-running a crawl over
//! an unchanged world reproduces the same subjects.

use uuid::Uuid;

pub fn mint(kind: &str, parts: &[&str]) -> Uuid {
    let mut name = format!("homecrawl:{kind}");
    for p in parts {
        name.push('/');
        name.push_str(p);
    }
    Uuid::new_v5(&Uuid::NAMESPACE_URL, name.as_bytes())
}
