//! Line-per-triple persistence.
//!
//! ```text
//! <s> <p> <o> .
//! <s> <p> "lexical"^^<datatype> .
//! _:b0 <p> <o> .
//! ```
//!
//! Literal escapes: `\"`, `\\`, `\n`, `\t` (and `\r` on output).

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::term::{Iri, Term, Triple};
use super::{Store, StoreError};

pub fn write_triples<W: Write>(store: &Store, mut out: W) -> std::io::Result<()> {
    for t in store.iter() {
        writeln!(out, "{t}")?;
    }
    out.flush()
}

/// Writes the store in canonical order, so equal stores give identical files.
pub fn persist(store: &Store, path: &Path) -> Result<(), StoreError> {
    let file = fs::File::create(path)?;
    write_triples(store, BufWriter::new(file))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<Store, StoreError> {
    let file = fs::File::open(path)?;
    read_triples(BufReader::new(file))
}

pub fn read_triples<R: BufRead>(reader: R) -> Result<Store, StoreError> {
    let mut store = Store::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => StoreError::Parse {
                line: line_no,
                message: "invalid UTF-8".into(),
            },
            _ => StoreError::Io(e),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let triple = parse_line(trimmed).map_err(|message| StoreError::Parse {
            line: line_no,
            message,
        })?;
        store.insert(triple).map_err(|e| StoreError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
    }
    Ok(store)
}

pub fn parse_line(line: &str) -> Result<Triple, String> {
    let (subject, rest) = parse_term(line)?;
    let (predicate, rest) = parse_term(rest.trim_start())?;
    let (object, rest) = parse_term(rest.trim_start())?;
    if rest.trim() != "." {
        return Err("expected terminating '.'".into());
    }
    let triple = Triple {
        subject,
        predicate,
        object,
    };
    triple.validate().map_err(|e| e.to_string())?;
    Ok(triple)
}

fn parse_term(input: &str) -> Result<(Term, &str), String> {
    parse_term_with(input, true)
}

/// With `require_datatype == false`, a bare `"text"` is an `xsd:string`.
pub(crate) fn parse_term_with(input: &str, require_datatype: bool) -> Result<(Term, &str), String> {
    if let Some(rest) = input.strip_prefix('<') {
        let (iri, rest) = parse_iri_body(rest)?;
        return Ok((Term::Iri(iri), rest));
    }
    if let Some(rest) = input.strip_prefix("_:") {
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-'))
            .unwrap_or(rest.len());
        let term = Term::blank(&rest[..end]).map_err(|e| e.to_string())?;
        return Ok((term, &rest[end..]));
    }
    if let Some(rest) = input.strip_prefix('"') {
        let mut lexical = String::new();
        let mut chars = rest.char_indices();
        let end = loop {
            let Some((i, c)) = chars.next() else {
                return Err("unterminated literal".into());
            };
            match c {
                '"' => break i,
                '\\' => match chars.next() {
                    Some((_, '"')) => lexical.push('"'),
                    Some((_, '\\')) => lexical.push('\\'),
                    Some((_, 'n')) => lexical.push('\n'),
                    Some((_, 't')) => lexical.push('\t'),
                    Some((_, 'r')) => lexical.push('\r'),
                    Some((_, other)) => return Err(format!("unknown escape \\{other}")),
                    None => return Err("dangling escape".into()),
                },
                c => lexical.push(c),
            }
        };
        let rest = &rest[end + 1..];
        if !require_datatype && !rest.starts_with("^^") {
            return Ok((Term::string(lexical), rest));
        }
        let rest = rest
            .strip_prefix("^^<")
            .ok_or_else(|| "literal without ^^<datatype>".to_string())?;
        let (datatype, rest) = parse_iri_body(rest)?;
        return Ok((Term::Literal { lexical, datatype }, rest));
    }
    Err(format!(
        "unexpected input at {:?}",
        input.chars().take(16).collect::<String>()
    ))
}

fn parse_iri_body(input: &str) -> Result<(Iri, &str), String> {
    let end = input.find('>').ok_or("unterminated IRI")?;
    let iri = Iri::new(&input[..end]).map_err(|e| e.to_string())?;
    Ok((iri, &input[end + 1..]))
}
