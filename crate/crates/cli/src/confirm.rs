use std::io::{BufRead, Write};
use std::path::Path;

use homecrawl_core::linker::{rank_classes, Candidate};
use homecrawl_core::normalizer::{confirm_link, pending_links};
use homecrawl_core::rdf::{self, Iri};
use homecrawl_core::vocab::DeviceOntology;

use crate::crawl::load_store;
use crate::error::CliError;

/// Suggestions offered for devices the linker found no match for.
const NO_MATCH_SUGGESTIONS: usize = 5;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct ConfirmSummary {
    pub confirmed: usize,
    pub skipped: usize,
}

/// Walks every unresolved link. Each answer is a candidate number, a
/// class IRI, or `s` to skip; end of input skips the rest. The store is
/// persisted whenever anything was pending.
pub fn confirm(store_path: &Path, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<ConfirmSummary, CliError> {
    let mut store = load_store(store_path)?;
    let pending = pending_links(&store);
    let io = |e: std::io::Error| CliError::Config(e.to_string());
    if pending.is_empty() {
        writeln!(out, "nothing to confirm").map_err(io)?;
        return Ok(ConfirmSummary::default());
    }
    let ontology = DeviceOntology::builtin();
    let mut summary = ConfirmSummary::default();
    let mut eof = false;
    for link in &pending {
        if eof {
            summary.skipped += 1;
            continue;
        }
        let candidates: Vec<Candidate> = if link.candidates.is_empty() {
            rank_classes(&link.label, &ontology, |_| true).into_iter().take(NO_MATCH_SUGGESTIONS).collect()
        } else {
            link.candidates.clone()
        };
        let name = if link.label.is_empty() { link.device.as_str() } else { link.label.as_str() };
        writeln!(out, "{name} ({}):", link.status).map_err(io)?;
        for (i, c) in candidates.iter().enumerate() {
            writeln!(out, "  {}. {} ({:.3})", i + 1, c.class, c.score).map_err(io)?;
        }
        let choice = loop {
            write!(out, "choose 1-{}, a class IRI, or s to skip: ", candidates.len()).map_err(io)?;
            out.flush().map_err(io)?;
            let mut line = String::new();
            if input.read_line(&mut line).map_err(io)? == 0 {
                eof = true;
                break None;
            }
            match parse_choice(line.trim(), &candidates, &ontology) {
                Ok(choice) => break choice,
                Err(msg) => writeln!(out, "{msg}").map_err(io)?,
            }
        };
        match choice {
            Some(class) => {
                confirm_link(&mut store, &ontology, &link.device, &class)?;
                writeln!(out, "{name} is a {class}").map_err(io)?;
                summary.confirmed += 1;
            }
            None => summary.skipped += 1,
        }
    }
    rdf::persist(&store, store_path)?;
    Ok(summary)
}

fn parse_choice(answer: &str, candidates: &[Candidate], ontology: &DeviceOntology) -> Result<Option<Iri>, String> {
    if answer.eq_ignore_ascii_case("s") || answer.is_empty() {
        return Ok(None);
    }
    if let Ok(n) = answer.parse::<usize>() {
        return match n.checked_sub(1).and_then(|i| candidates.get(i)) {
            Some(c) => Ok(Some(c.class.clone())),
            None => Err(format!("no candidate {n}")),
        };
    }
    match Iri::new(answer) {
        Ok(class) if ontology.contains(&class) => Ok(Some(class)),
        _ => Err(format!("unknown class {answer:?}")),
    }
}
