use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ns, VocabError};
use crate::rdf::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Gateway,
    SmartPlug,
    Sensor,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceClass {
    pub id: Iri,
    pub label: String,
    pub parent: Option<Iri>,
    pub category: Category,
}

#[derive(Deserialize)]
struct RawOntology {
    classes: Vec<RawClass>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    id: String,
    label: String,
    #[serde(default)]
    parent: Option<String>,
    category: Category,
}

/// Device class tree rooted at `devices:Device`. Immutable once loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviceOntology {
    classes: BTreeMap<Iri, DeviceClass>,
}

const DEFAULT_ONTOLOGY: &str = include_str!("../../data/ontology.json");

impl DeviceOntology {
    /// The shipped ontology (gateways and smart plugs the crawler knows).
    pub fn builtin() -> Self {
        Self::from_json(DEFAULT_ONTOLOGY).expect("shipped ontology is valid")
    }

    pub fn load(path: &Path) -> Result<Self, VocabError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, VocabError> {
        let raw: RawOntology =
            serde_json::from_str(text).map_err(|e| VocabError::Parse(e.to_string()))?;
        let mut classes = Vec::with_capacity(raw.classes.len());
        for c in raw.classes {
            let id = Iri::new(c.id).map_err(|e| VocabError::Parse(e.to_string()))?;
            let parent = c
                .parent
                .map(Iri::new)
                .transpose()
                .map_err(|e| VocabError::Parse(e.to_string()))?;
            classes.push(DeviceClass {
                id,
                label: c.label,
                parent,
                category: c.category,
            });
        }
        Self::from_classes(classes)
    }

    pub fn from_classes(list: Vec<DeviceClass>) -> Result<Self, VocabError> {
        let root = Iri::from_static(ns::DEVICES_ROOT);
        let mut classes = BTreeMap::new();
        let mut labels = BTreeSet::new();
        for c in list {
            if !labels.insert(c.label.to_lowercase()) {
                return Err(VocabError::DuplicateLabel(c.label));
            }
            if classes.contains_key(&c.id) {
                return Err(VocabError::DuplicateClass(c.id));
            }
            classes.insert(c.id.clone(), c);
        }
        match classes.get(&root) {
            None => return Err(VocabError::MissingRoot),
            Some(r) if r.parent.is_some() => return Err(VocabError::RootHasParent),
            Some(_) => {}
        }
        for c in classes.values() {
            match &c.parent {
                None if c.id != root => return Err(VocabError::UnexpectedRoot(c.id.clone())),
                Some(p) if !classes.contains_key(p) => {
                    return Err(VocabError::DanglingParent {
                        class: c.id.clone(),
                        parent: p.clone(),
                    })
                }
                _ => {}
            }
        }
        // Every parent resolves, so a walk that takes more steps than there
        // are classes has revisited one.
        for c in classes.values() {
            let mut cursor = c.parent.as_ref();
            let mut steps = 0;
            while let Some(p) = cursor {
                if p == &c.id || steps > classes.len() {
                    return Err(VocabError::CycleDetected(c.id.clone()));
                }
                steps += 1;
                cursor = classes[p].parent.as_ref();
            }
        }
        Ok(DeviceOntology { classes })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, id: &Iri) -> Option<&DeviceClass> {
        self.classes.get(id)
    }

    pub fn contains(&self, id: &Iri) -> bool {
        self.classes.contains_key(id)
    }

    pub fn classes(&self) -> impl Iterator<Item = &DeviceClass> {
        self.classes.values()
    }

    /// One `(class, label)` per class, ordered by class IRI.
    pub fn labels(&self) -> Vec<(&Iri, &str)> {
        self.classes
            .values()
            .map(|c| (&c.id, c.label.as_str()))
            .collect()
    }

    /// Reflexive: `is_subclass(a, a)` holds.
    pub fn is_subclass(&self, a: &Iri, b: &Iri) -> Result<bool, VocabError> {
        if !self.contains(a) {
            return Err(VocabError::UnknownClass(a.clone()));
        }
        if !self.contains(b) {
            return Err(VocabError::UnknownClass(b.clone()));
        }
        let mut cursor = Some(a);
        while let Some(c) = cursor {
            if c == b {
                return Ok(true);
            }
            cursor = self.classes[c].parent.as_ref();
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn builtin_has_demo_devices() {
        let onto = DeviceOntology::builtin();
        let labels: Vec<&str> = onto.labels().into_iter().map(|(_, l)| l).collect();
        for l in ["Homee Gateway", "Fibaro Wall Plug", "Vera Secure Gateway", "Fibaro Motion Sensor"] {
            assert!(labels.contains(&l), "{l}");
        }
        assert_eq!(labels.len(), onto.len());
        assert!(onto
            .is_subclass(&iri("devices:FibaroWallPlug"), &iri("devices:Device"))
            .unwrap());
        assert!(onto
            .is_subclass(&iri("devices:HomeeGateway"), &iri("devices:HomeeGateway"))
            .unwrap());
        assert!(!onto
            .is_subclass(&iri("devices:HomeeGateway"), &iri("devices:SmartHomeDevice"))
            .unwrap());
    }

    #[test]
    fn four_named_classes_plus_root() {
        let json = r#"{"classes":[
            {"id":"devices:Device","label":"Device","category":"Other"},
            {"id":"devices:HomeeGateway","label":"Homee Gateway","parent":"devices:Device","category":"Gateway"},
            {"id":"devices:FibaroWallPlug","label":"Fibaro Wall Plug","parent":"devices:Device","category":"SmartPlug"},
            {"id":"devices:VeraSecureGateway","label":"Vera Secure Gateway","parent":"devices:Device","category":"Gateway"},
            {"id":"devices:FibaroMotionSensor","label":"Fibaro Motion Sensor","parent":"devices:Device","category":"Sensor"}]}"#;
        assert_eq!(DeviceOntology::from_json(json).unwrap().len(), 5);
    }

    #[test]
    fn root_only() {
        let json = r#"{"classes":[{"id":"devices:Device","label":"Device","category":"Other"}]}"#;
        assert_eq!(DeviceOntology::from_json(json).unwrap().len(), 1);
    }

    #[test]
    fn validation_errors() {
        let self_loop = r#"{"classes":[
            {"id":"devices:Device","label":"Device","category":"Other"},
            {"id":"devices:X","label":"X","parent":"devices:X","category":"Other"}]}"#;
        assert!(matches!(DeviceOntology::from_json(self_loop), Err(VocabError::CycleDetected(_))));

        let two_cycle = r#"{"classes":[
            {"id":"devices:Device","label":"Device","category":"Other"},
            {"id":"devices:A","label":"A","parent":"devices:B","category":"Other"},
            {"id":"devices:B","label":"B","parent":"devices:A","category":"Other"}]}"#;
        assert!(matches!(DeviceOntology::from_json(two_cycle), Err(VocabError::CycleDetected(_))));

        let dup = r#"{"classes":[
            {"id":"devices:Device","label":"Device","category":"Other"},
            {"id":"devices:A","label":"Plug","parent":"devices:Device","category":"Other"},
            {"id":"devices:B","label":"PLUG","parent":"devices:Device","category":"Other"}]}"#;
        assert!(matches!(DeviceOntology::from_json(dup), Err(VocabError::DuplicateLabel(_))));

        let dangling = r#"{"classes":[
            {"id":"devices:Device","label":"Device","category":"Other"},
            {"id":"devices:A","label":"A","parent":"devices:Nope","category":"Other"}]}"#;
        assert!(matches!(DeviceOntology::from_json(dangling), Err(VocabError::DanglingParent { .. })));

        assert!(matches!(DeviceOntology::from_json("{"), Err(VocabError::Parse(_))));
        assert!(matches!(
            DeviceOntology::from_json(r#"{"classes":[]}"#),
            Err(VocabError::MissingRoot)
        ));
    }

    #[test]
    fn unknown_class() {
        let onto = DeviceOntology::builtin();
        assert!(matches!(
            onto.is_subclass(&iri("devices:Toaster"), &iri("devices:Device")),
            Err(VocabError::UnknownClass(_))
        ));
    }
}
