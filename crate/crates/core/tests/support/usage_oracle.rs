//! Direct-scan reference for usage detection and square/flicker wave
//! generators, shared by the ml tests and the acceptance suite.

#![allow(dead_code)]

use homecrawl_core::ml::{UsageEvent, UsageThresholds};
use proptest::prelude::*;

/// Marks each sample on/off with the hysteresis rule, then cuts runs.
pub fn usage_oracle(w: &[f64], start: i64, period: i64, t: UsageThresholds) -> Vec<UsageEvent> {
    let mut state = vec![false; w.len()];
    for i in 0..w.len() {
        let prev = i > 0 && state[i - 1];
        state[i] = if prev { w[i] >= t.off_w } else { w[i] > t.on_w };
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < w.len() {
        if !state[i] {
            i += 1;
            continue;
        }
        let j = (i..w.len()).find(|&k| !state[k]).unwrap_or(w.len());
        let ev = UsageEvent {
            start: start + i as i64 * period,
            end: start + j as i64 * period,
            peak_w: w[i..j].iter().cloned().fold(f64::MIN, f64::max),
            energy_wh: w[i..j].iter().map(|x| x * period as f64 / 3600.0).sum(),
        };
        if ev.end - ev.start >= t.min_on_sec {
            out.push(ev);
        }
        i = j;
    }
    out
}

pub fn square_or_flicker() -> impl Strategy<Value = Vec<f64>> {
    // Runs of levels below off, between the thresholds, and above on.
    prop::collection::vec((prop_oneof![0.0..49.0f64, 51.0..99.0f64, 101.0..2500.0f64], 1usize..12), 1..20)
        .prop_map(|runs| runs.into_iter().flat_map(|(v, n)| std::iter::repeat_n(v, n)).collect())
}

pub const HYST: UsageThresholds = UsageThresholds { on_w: 100.0, off_w: 50.0, min_on_sec: 30 };

