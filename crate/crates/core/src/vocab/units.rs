use std::collections::BTreeSet;
use std::path::Path;

use serde::Deserialize;

use super::VocabError;
use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitEntry {
    pub symbol: String,
    pub iri: Iri,
    pub quantity_kind: Iri,
    pub unit_class: Iri,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawUnit {
    symbol: String,
    iri: String,
    quantity_kind: String,
    unit_class: String,
}

/// Unit symbol to quantity kind, QUDT style.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRegistry {
    entries: Vec<UnitEntry>,
}

const DEFAULT_UNITS: &str = include_str!("../../data/units.json");

impl UnitRegistry {
    pub fn builtin() -> Self {
        Self::from_json(DEFAULT_UNITS).expect("shipped unit registry is valid")
    }

    pub fn load(path: &Path) -> Result<Self, VocabError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self, VocabError> {
        let raw: Vec<RawUnit> =
            serde_json::from_str(text).map_err(|e| VocabError::Parse(e.to_string()))?;
        let parse = |s: String| Iri::new(s).map_err(|e| VocabError::Parse(e.to_string()));
        let mut entries = Vec::with_capacity(raw.len());
        for r in raw {
            entries.push(UnitEntry {
                symbol: r.symbol,
                iri: parse(r.iri)?,
                quantity_kind: parse(r.quantity_kind)?,
                unit_class: parse(r.unit_class)?,
            });
        }
        Self::from_entries(entries)
    }

    pub fn from_entries(entries: Vec<UnitEntry>) -> Result<Self, VocabError> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.symbol.as_str()) {
                return Err(VocabError::DuplicateUnit(e.symbol.clone()));
            }
        }
        Ok(UnitRegistry { entries })
    }

    pub fn entries(&self) -> &[UnitEntry] {
        &self.entries
    }

    /// Exact match first, then a unique case-insensitive match.
    pub fn lookup(&self, symbol: &str) -> Result<&UnitEntry, VocabError> {
        if let Some(e) = self.entries.iter().find(|e| e.symbol == symbol) {
            return Ok(e);
        }
        let folded = symbol.to_lowercase();
        let candidates: Vec<&UnitEntry> = self
            .entries
            .iter()
            .filter(|e| e.symbol.to_lowercase() == folded)
            .collect();
        match candidates.as_slice() {
            [] => Err(VocabError::UnknownUnit(symbol.to_string())),
            [one] => Ok(one),
            many => Err(VocabError::AmbiguousUnit(
                symbol.to_string(),
                many.iter().map(|e| e.symbol.clone()).collect(),
            )),
        }
    }

    /// Reverse lookup by unit IRI.
    pub fn by_iri(&self, iri: &Iri) -> Option<&UnitEntry> {
        self.entries.iter().find(|e| &e.iri == iri)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn watt_and_kilowatt_hour() {
        let units = UnitRegistry::builtin();
        let w = units.lookup("W").unwrap();
        assert_eq!(w.quantity_kind.as_str(), "qk:Power");
        assert_eq!(w.unit_class.as_str(), "qudt:PowerUnit");
        let kwh = units.lookup("kWh").unwrap();
        assert_eq!(kwh.quantity_kind.as_str(), "qk:Energy");
        assert_ne!(w.quantity_kind, kwh.quantity_kind);
    }

    #[test]
    fn case_insensitive_fallback() {
        let units = UnitRegistry::builtin();
        assert_eq!(units.lookup("KWH").unwrap().symbol, "kWh");
        assert_eq!(units.lookup("w").unwrap().symbol, "W");
        assert!(matches!(units.lookup("XYZ"), Err(VocabError::UnknownUnit(_))));
    }

    #[test]
    fn ambiguous_and_duplicates() {
        let json = r#"[
            {"symbol":"mW","iri":"unit:MilliW","quantityKind":"qk:Power","unitClass":"qudt:PowerUnit"},
            {"symbol":"MW","iri":"unit:MegaW","quantityKind":"qk:Power","unitClass":"qudt:PowerUnit"}]"#;
        let units = UnitRegistry::from_json(json).unwrap();
        assert_eq!(units.lookup("MW").unwrap().iri.as_str(), "unit:MegaW");
        assert!(matches!(units.lookup("mw"), Err(VocabError::AmbiguousUnit(_, c)) if c.len() == 2));

        let dup = r#"[
            {"symbol":"W","iri":"unit:W","quantityKind":"qk:Power","unitClass":"qudt:PowerUnit"},
            {"symbol":"W","iri":"unit:W2","quantityKind":"qk:Power","unitClass":"qudt:PowerUnit"}]"#;
        assert!(matches!(UnitRegistry::from_json(dup), Err(VocabError::DuplicateUnit(_))));
    }
}
