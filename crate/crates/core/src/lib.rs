//! Smart home crawler: discovers devices on a home network, links them to
//! a device ontology, pulls metadata through a gateway protocol and
//! normalises it into stream metadata held in a triple store.

pub mod apispec;
pub mod clock;
pub mod discovery;
pub mod gateway;
pub mod ids;
pub mod linker;
pub mod ml;
pub mod normalizer;
pub mod rdf;
pub mod sim;
pub mod vocab;
