//! Deterministic smart home: appliance power generators, a gateway that
//! serves them over the node protocol, scripted network announcements
//! and labelled training data.

pub mod announce;
pub mod appliance;
pub mod dataset;
pub mod gateway;
pub mod scenario;

use std::net::SocketAddr;

use thiserror::Error;

pub use announce::{announce, gateway_usn};
pub use appliance::{
    default_appliances, generate_trace, generate_trace_with, resolve_appliance, ActiveWindow, ApplianceModel,
    DutyStyle,
};
pub use dataset::{make_dataset, stratified_split, Dataset};
pub use gateway::{energy_attribute_id, power_attribute_id, run_gateway, GatewayHandle, SimConnection, SimGateway};
pub use scenario::{DeviceSpec, Scenario, SimDevice};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("duration {duration_sec} s is shorter than the {period_sec} s period")]
    InvalidDuration { duration_sec: u32, period_sec: u32 },
    #[error("appliance {0:?}: {1}")]
    InvalidModel(String, String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("cannot bind {0}: {1}")]
    Bind(SocketAddr, std::io::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
