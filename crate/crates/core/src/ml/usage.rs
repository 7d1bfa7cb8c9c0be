use std::path::Path;

use serde::{Deserialize, Serialize};

use super::features::PowerTrace;
use super::MlError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct UsageEvent {
    pub start: i64,
    pub end: i64,
    pub peak_w: f64,
    pub energy_wh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsageThresholds {
    pub on_w: f64,
    pub off_w: f64,
    pub min_on_sec: i64,
}

impl Default for UsageThresholds {
    fn default() -> Self {
        UsageThresholds { on_w: 5.0, off_w: 3.0, min_on_sec: 30 }
    }
}

/// Hysteresis detector. An event opens on the first sample above `on_w`
/// and closes at the first later sample below `off_w`; that sample's
/// timestamp is the event end. An event still open at the end of the
/// trace closes at the trace end.
pub fn detect_usage(trace: &PowerTrace, t: UsageThresholds) -> Result<Vec<UsageEvent>, MlError> {
    if t.off_w.is_nan() || t.on_w.is_nan() || t.off_w > t.on_w {
        return Err(MlError::InvalidThresholds { on: t.on_w, off: t.off_w });
    }
    let step_wh = f64::from(trace.period_sec) / 3600.0;
    let mut events = Vec::new();
    let mut open: Option<UsageEvent> = None;
    let mut close = |ev: UsageEvent| {
        if ev.end - ev.start >= t.min_on_sec {
            events.push(ev);
        }
    };
    for (i, &w) in trace.watts.iter().enumerate() {
        let ts = trace.timestamp(i);
        match open.as_mut() {
            None if w > t.on_w => {
                open = Some(UsageEvent { start: ts, end: ts, peak_w: w, energy_wh: w * step_wh });
            }
            None => {}
            Some(ev) if w < t.off_w => {
                ev.end = ts;
                close(open.take().expect("open event"));
            }
            Some(ev) => {
                ev.peak_w = ev.peak_w.max(w);
                ev.energy_wh += w * step_wh;
            }
        }
    }
    if let Some(mut ev) = open {
        ev.end = trace.end_time();
        close(ev);
    }
    Ok(events)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityRule {
    pub appliance: String,
    pub phrase: String,
    /// Used when the event itself carries no location.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
}

pub fn load_rules(path: &Path) -> Result<Vec<ActivityRule>, MlError> {
    rules_from_json(&std::fs::read_to_string(path)?)
}

pub fn rules_from_json(text: &str) -> Result<Vec<ActivityRule>, MlError> {
    serde_json::from_str(text).map_err(|e| MlError::Parse(e.to_string()))
}

pub fn builtin_rules() -> Vec<ActivityRule> {
    rules_from_json(include_str!("../../data/rules.json")).expect("bundled rules parse")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActivityInput {
    pub event: UsageEvent,
    pub appliance: String,
    pub location: Option<String>,
}

/// One sentence per event. A rule whose location equals the event's is
/// preferred over one without a location, which is preferred over any
/// other rule for the same appliance.
pub fn infer_activities(events: &[ActivityInput], rules: &[ActivityRule]) -> Vec<String> {
    events
        .iter()
        .map(|e| {
            let same_appliance = || rules.iter().filter(|r| r.appliance == e.appliance);
            let rule = same_appliance()
                .find(|r| r.location.is_some() && r.location == e.location)
                .or_else(|| same_appliance().find(|r| r.location.is_none()))
                .or_else(|| same_appliance().next());
            let phrase = rule.map_or("a device is in use", |r| r.phrase.as_str());
            match e.location.as_ref().or(rule.and_then(|r| r.location.as_ref())) {
                Some(loc) => format!("{phrase} in the {loc}"),
                None => phrase.to_string(),
            }
        })
        .collect()
}

pub fn render_activities(statements: &[String]) -> String {
    if statements.is_empty() {
        return "nothing notable is happening".to_string();
    }
    format!("It looks like {}.", statements.join(" and "))
}
