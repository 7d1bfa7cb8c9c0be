use std::collections::BTreeSet;
use std::net::Ipv4Addr;
use std::path::Path;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::appliance::{generate_trace_with, resolve_appliance, ActiveWindow, ApplianceModel};
use super::SimError;
use crate::ml::{rng, PowerTrace};

pub const DEFAULT_START_TIME: &str = "2018-10-29T12:13:01+01:00";
pub const DEFAULT_GATEWAY_IP: Ipv4Addr = Ipv4Addr::new(192, 168, 1, 10);
pub const DEFAULT_GATEWAY_PORT: u16 = 7681;

fn default_start() -> String {
    DEFAULT_START_TIME.into()
}

fn default_period() -> u32 {
    10
}

fn default_duration() -> u32 {
    3600
}

fn default_gateway_ip() -> Ipv4Addr {
    DEFAULT_GATEWAY_IP
}

fn default_gateway_port() -> u16 {
    DEFAULT_GATEWAY_PORT
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DeviceSpec {
    pub node_id: u32,
    /// As the gateway reports it, percent-encoding included.
    pub node_name: String,
    #[serde(default)]
    pub ip: Option<Ipv4Addr>,
    /// Whether the gateway includes `ip` in its node metadata.
    #[serde(default = "yes")]
    pub report_ip: bool,
    /// Whether the device answers mDNS queries itself from `ip`.
    #[serde(default)]
    pub announce: bool,
    #[serde(default)]
    pub location: Option<String>,
    #[serde(default)]
    pub added: i64,
    pub appliance: Value,
    #[serde(default)]
    pub schedule: Vec<ActiveWindow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    pub seed: u64,
    pub gateway_name: String,
    #[serde(default = "default_period")]
    pub sample_period_sec: u32,
    #[serde(default = "default_start")]
    pub start_time: String,
    /// Length of the generated traces; values hold at their last sample
    /// afterwards.
    #[serde(default = "default_duration")]
    pub duration_sec: u32,
    #[serde(default = "default_gateway_ip")]
    pub gateway_ip: Ipv4Addr,
    #[serde(default = "default_gateway_port")]
    pub gateway_port: u16,
    #[serde(default)]
    pub devices: Vec<DeviceSpec>,
}

/// A device with its appliance resolved and its trace generated.
#[derive(Debug, Clone, PartialEq)]
pub struct SimDevice {
    pub spec: DeviceSpec,
    pub appliance: ApplianceModel,
    pub trace: PowerTrace,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, SimError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| SimError::InvalidScenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, SimError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn empty(seed: u64, gateway_name: &str) -> Self {
        Scenario {
            seed,
            gateway_name: gateway_name.into(),
            sample_period_sec: default_period(),
            start_time: default_start(),
            duration_sec: default_duration(),
            gateway_ip: DEFAULT_GATEWAY_IP,
            gateway_port: DEFAULT_GATEWAY_PORT,
            devices: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.start()?;
        if self.gateway_name.is_empty() {
            return Err(SimError::InvalidScenario("gatewayName is empty".into()));
        }
        if self.sample_period_sec == 0 || self.duration_sec < self.sample_period_sec {
            return Err(SimError::InvalidDuration {
                duration_sec: self.duration_sec,
                period_sec: self.sample_period_sec,
            });
        }
        let mut ids = BTreeSet::new();
        for d in &self.devices {
            if d.node_id == 0 || !ids.insert(d.node_id) {
                return Err(SimError::InvalidScenario(format!("node id {} is zero or repeated", d.node_id)));
            }
            resolve_appliance(&d.appliance)?;
        }
        Ok(())
    }

    pub fn start(&self) -> Result<DateTime<FixedOffset>, SimError> {
        DateTime::parse_from_rfc3339(&self.start_time)
            .map_err(|e| SimError::InvalidScenario(format!("startTime {:?}: {e}", self.start_time)))
    }

    /// Resolves appliances and generates each device's trace. Device
    /// traces use independent seeds derived from the scenario seed and the
    /// node id.
    pub fn materialise(&self) -> Result<Vec<SimDevice>, SimError> {
        let start = self.start()?.timestamp();
        self.devices
            .iter()
            .map(|d| {
                let appliance = resolve_appliance(&d.appliance)?;
                let trace = generate_trace_with(
                    &appliance,
                    self.duration_sec,
                    self.sample_period_sec,
                    rng::derive_seed(self.seed, u64::from(d.node_id)),
                    start,
                    &d.schedule,
                )?;
                Ok(SimDevice { spec: d.clone(), appliance, trace })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_defaults() {
        let s = Scenario::from_json(
            r#"{"seed":42,"gatewayName":"homee-0005510F1A3D","devices":[{"nodeId":8,"nodeName":"Fibaro%20Kitchen","ip":"192.168.1.20","location":"kitchen","appliance":{"type":"kettle"}}]}"#,
        )
        .unwrap();
        assert_eq!(s.sample_period_sec, 10);
        assert_eq!(s.start_time, DEFAULT_START_TIME);
        assert!(s.devices[0].report_ip && !s.devices[0].announce);
        let devices = s.materialise().unwrap();
        assert_eq!(devices[0].trace.len(), 360);
        assert_eq!(devices[0].trace.start_time, 1540811581);
        assert_eq!(devices, s.materialise().unwrap());
    }

    #[test]
    fn rejects_bad_scenarios() {
        let dup = r#"{"seed":1,"gatewayName":"g","devices":[
            {"nodeId":3,"nodeName":"a","appliance":{"type":"kettle"}},
            {"nodeId":3,"nodeName":"b","appliance":{"type":"fridge"}}]}"#;
        assert!(Scenario::from_json(dup).is_err());
        assert!(Scenario::from_json(r#"{"seed":1,"gatewayName":"g","startTime":"yesterday"}"#).is_err());
        assert!(Scenario::from_json(r#"{"seed":1}"#).is_err());
        assert!(Scenario::from_json(r#"{"seed":1,"gatewayName":"g","bogus":true}"#).is_err());
    }
}
