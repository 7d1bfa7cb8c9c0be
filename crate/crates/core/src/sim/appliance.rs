use rand::RngExt;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SimError;
use crate::ml::{rng, PowerTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DutyStyle {
    /// Short high-power runs separated by long idle gaps.
    Burst,
    /// Active runs that alternate between full and reduced power.
    Cyclic,
    /// Long steady on and off periods.
    ConstantOnOff,
}

/// Length of one full/reduced phase inside a cyclic run.
const CYCLE_PHASE_SEC: i64 = 30;
const CYCLE_LOW_FRACTION: f64 = 0.6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ApplianceModel {
    #[serde(rename = "type")]
    pub kind: String,
    pub idle_w: f64,
    pub active_w: f64,
    pub burst_duration_sec: (u32, u32),
    pub gap_sec: (u32, u32),
    pub noise_std: f64,
    pub duty_style: DutyStyle,
}

impl ApplianceModel {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidModel(self.kind.clone(), m));
        if !(self.idle_w >= 0.0 && self.idle_w < self.active_w && self.active_w.is_finite()) {
            return bad(format!("need 0 <= idleW < activeW, got {} and {}", self.idle_w, self.active_w));
        }
        for (name, (lo, hi)) in [("burstDurationSec", self.burst_duration_sec), ("gapSec", self.gap_sec)] {
            if lo == 0 || lo > hi {
                return bad(format!("{name} must be a positive range, got ({lo}, {hi})"));
            }
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return bad(format!("noiseStd must be non-negative, got {}", self.noise_std));
        }
        Ok(())
    }

    fn active_level(&self, since_on: i64) -> f64 {
        match self.duty_style {
            DutyStyle::Cyclic if (since_on / CYCLE_PHASE_SEC) % 2 == 1 => {
                self.idle_w + (self.active_w - self.idle_w) * CYCLE_LOW_FRACTION
            }
            _ => self.active_w,
        }
    }
}

/// The twelve appliance classes the classifier is trained on.
pub fn default_appliances() -> Vec<ApplianceModel> {
    serde_json::from_str(include_str!("../../data/appliances.json")).expect("bundled appliances parse")
}

/// Resolves a scenario's appliance object. `{"type": "kettle"}` takes the
/// bundled kettle; any further keys override its fields.
pub fn resolve_appliance(spec: &Value) -> Result<ApplianceModel, SimError> {
    let kind = spec
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| SimError::InvalidScenario("appliance needs a \"type\"".into()))?;
    let mut merged = match default_appliances().into_iter().find(|m| m.kind == kind) {
        Some(base) => serde_json::to_value(base).expect("model serialises"),
        None => Value::Object(Default::default()),
    };
    if let (Value::Object(base), Value::Object(over)) = (&mut merged, spec) {
        for (k, v) in over {
            base.insert(k.clone(), v.clone());
        }
    }
    let model: ApplianceModel = serde_json::from_value(merged)
        .map_err(|e| SimError::InvalidScenario(format!("appliance {kind:?}: {e}")))?;
    model.validate()?;
    Ok(model)
}

/// A span, in seconds from the trace start, during which the appliance is
/// forced on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ActiveWindow {
    pub start_sec: i64,
    pub duration_sec: i64,
}

impl ActiveWindow {
    fn contains(&self, t: i64) -> bool {
        t >= self.start_sec && t < self.start_sec + self.duration_sec
    }
}

pub fn generate_trace(model: &ApplianceModel, duration_sec: u32, period_sec: u32, seed: u64) -> Result<PowerTrace, SimError> {
    generate_trace_with(model, duration_sec, period_sec, seed, 0, &[])
}

/// Alternates idle gaps and active runs with lengths drawn uniformly from
/// the model's ranges, starting at a random phase. Gaussian noise is added
/// to every sample and the result clamped at zero. Samples inside a forced
/// window are active regardless of the drawn schedule.
pub fn generate_trace_with(
    model: &ApplianceModel,
    duration_sec: u32,
    period_sec: u32,
    seed: u64,
    start_time: i64,
    forced: &[ActiveWindow],
) -> Result<PowerTrace, SimError> {
    model.validate()?;
    if period_sec == 0 || duration_sec < period_sec {
        return Err(SimError::InvalidDuration { duration_sec, period_sec });
    }
    let mut rng = rng::seeded(seed);
    let noise = Normal::new(0.0, model.noise_std).expect("validated noise");
    let draw = |rng: &mut rng::Rng, (lo, hi): (u32, u32)| i64::from(rng.random_range(lo..=hi));

    let mean_on = f64::from(model.burst_duration_sec.0 + model.burst_duration_sec.1) / 2.0;
    let mean_off = f64::from(model.gap_sec.0 + model.gap_sec.1) / 2.0;
    let mut on = rng.random_bool(mean_on / (mean_on + mean_off));
    let first = draw(&mut rng, if on { model.burst_duration_sec } else { model.gap_sec });
    let mut remaining = rng.random_range(1..=first);
    let mut since_on = if on { first - remaining } else { 0 };

    let period = i64::from(period_sec);
    let n = (duration_sec / period_sec) as usize;
    let mut watts = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as i64 * period;
        while remaining <= 0 {
            on = !on;
            since_on = 0;
            remaining += draw(&mut rng, if on { model.burst_duration_sec } else { model.gap_sec });
        }
        let base = if on {
            model.active_level(since_on)
        } else if let Some(w) = forced.iter().find(|w| w.contains(t)) {
            model.active_level(t - w.start_sec)
        } else {
            model.idle_w
        };
        let jitter = if model.noise_std > 0.0 { noise.sample(&mut rng) } else { 0.0 };
        watts.push((base + jitter).max(0.0));
        remaining -= period;
        if on {
            since_on += period;
        }
    }
    Ok(PowerTrace::new(period_sec, start_time, watts).expect("generated samples are finite and non-negative"))
}
