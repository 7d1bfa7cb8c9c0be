use serde::{Deserialize, Serialize};

use super::MlError;

/// Sampling period assumed for a single-row trace file.
pub const DEFAULT_PERIOD_SEC: u32 = 10;

/// Evenly sampled power readings.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTrace {
    pub period_sec: u32,
    /// Unix seconds of the first sample.
    pub start_time: i64,
    pub watts: Vec<f64>,
}

#[derive(Deserialize, Serialize)]
struct Row {
    timestamp: i64,
    watts: f64,
}

impl PowerTrace {
    pub fn new(period_sec: u32, start_time: i64, watts: Vec<f64>) -> Result<Self, MlError> {
        if period_sec == 0 {
            return Err(MlError::InvalidTrace("period must be positive".into()));
        }
        if let Some(i) = watts.iter().position(|w| !w.is_finite() || *w < 0.0) {
            return Err(MlError::InvalidTrace(format!("sample {i} is {}", watts[i])));
        }
        Ok(PowerTrace { period_sec, start_time, watts })
    }

    pub fn len(&self) -> usize {
        self.watts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.watts.is_empty()
    }

    pub fn timestamp(&self, i: usize) -> i64 {
        self.start_time + i as i64 * i64::from(self.period_sec)
    }

    /// End of the last sample's interval.
    pub fn end_time(&self) -> i64 {
        self.timestamp(self.watts.len())
    }

    /// Reads `timestamp,watts` rows. Timestamps must be evenly spaced.
    pub fn from_csv(text: &str) -> Result<Self, MlError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let rows = reader
            .deserialize::<Row>()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| MlError::Parse(e.to_string()))?;
        let Some(first) = rows.first() else {
            return Err(MlError::EmptyTrace);
        };
        let period = match rows.get(1) {
            Some(second) => u32::try_from(second.timestamp - first.timestamp)
                .ok()
                .filter(|p| *p > 0)
                .ok_or_else(|| MlError::InvalidTrace("timestamps must increase".into()))?,
            None => DEFAULT_PERIOD_SEC,
        };
        for (i, row) in rows.iter().enumerate() {
            if row.timestamp != first.timestamp + i as i64 * i64::from(period) {
                return Err(MlError::InvalidTrace(format!("row {} breaks the {period} s spacing", i + 1)));
            }
        }
        PowerTrace::new(period, first.timestamp, rows.iter().map(|r| r.watts).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        for (i, &watts) in self.watts.iter().enumerate() {
            writer
                .serialize(Row { timestamp: self.timestamp(i), watts })
                .expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("writing to memory")).expect("CSV output is UTF-8")
    }
}

pub const FEATURE_COUNT: usize = 10;

pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "mean", "std", "max", "min", "median", "p90", "onRatio", "edgeCount", "maxRise", "energyWh",
];

pub const MEAN: usize = 0;
pub const STD: usize = 1;
pub const MAX: usize = 2;
pub const MIN: usize = 3;
pub const MEDIAN: usize = 4;
pub const P90: usize = 5;
pub const ON_RATIO: usize = 6;
pub const EDGE_COUNT: usize = 7;
pub const MAX_RISE: usize = 8;
pub const ENERGY_WH: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Nearest-rank percentile of sorted data: the smallest value with at
/// least `p` percent of the samples at or below it.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = ((p / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// `onRatio` counts samples strictly above the threshold; `edgeCount`
/// counts transitions from at-or-below to above, so a trace that starts
/// on has no edge at its first sample. `maxRise` is floored at zero.
pub fn extract_features(trace: &PowerTrace, on_threshold_w: f64) -> Result<FeatureVector, MlError> {
    let w = &trace.watts;
    if w.is_empty() {
        return Err(MlError::EmptyTrace);
    }
    let n = w.len() as f64;
    let mean = w.iter().sum::<f64>() / n;
    let std = (w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    let mut sorted = w.clone();
    sorted.sort_by(f64::total_cmp);
    let on = w.iter().filter(|&&x| x > on_threshold_w).count() as f64;
    let edges = w
        .windows(2)
        .filter(|p| p[0] <= on_threshold_w && p[1] > on_threshold_w)
        .count() as f64;
    let max_rise = w.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max);
    let energy = w.iter().sum::<f64>() * f64::from(trace.period_sec) / 3600.0;

    let mut f = [0.0; FEATURE_COUNT];
    f[MEAN] = mean;
    f[STD] = std;
    f[MAX] = sorted[sorted.len() - 1];
    f[MIN] = sorted[0];
    f[MEDIAN] = percentile(&sorted, 50.0);
    f[P90] = percentile(&sorted, 90.0);
    f[ON_RATIO] = on / n;
    f[EDGE_COUNT] = edges;
    f[MAX_RISE] = max_rise;
    f[ENERGY_WH] = energy;
    Ok(FeatureVector(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_trace() {
        let t = PowerTrace::new(10, 0, vec![0.0; 90]).unwrap();
        let f = extract_features(&t, 5.0).unwrap();
        assert_eq!(f.0, [0.0; FEATURE_COUNT]);
    }

    #[test]
    fn constant_idle_plug() {
        let t = PowerTrace::new(10, 1550570278, vec![2.9; 90]).unwrap();
        let f = extract_features(&t, 5.0).unwrap();
        assert!((f.get(MEAN) - 2.9).abs() < 1e-12);
        assert_eq!(f.get(ON_RATIO), 0.0);
        assert_eq!(f.get(EDGE_COUNT), 0.0);
        assert!(f.get(STD) < 1e-12);
    }

    #[test]
    fn nearest_rank_examples() {
        let s = [15.0, 20.0, 35.0, 40.0, 50.0];
        assert_eq!(percentile(&s, 30.0), 20.0);
        assert_eq!(percentile(&s, 40.0), 20.0);
        assert_eq!(percentile(&s, 50.0), 35.0);
        assert_eq!(percentile(&s, 100.0), 50.0);
        assert_eq!(percentile(&[7.0], 90.0), 7.0);
    }

    #[test]
    fn empty_and_invalid() {
        assert!(matches!(
            extract_features(&PowerTrace { period_sec: 10, start_time: 0, watts: vec![] }, 5.0),
            Err(MlError::EmptyTrace)
        ));
        assert!(PowerTrace::new(10, 0, vec![-1.0]).is_err());
        assert!(PowerTrace::new(10, 0, vec![f64::NAN]).is_err());
        assert!(PowerTrace::new(0, 0, vec![1.0]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = PowerTrace::new(10, 1550570278, vec![2.9, 2000.0, 0.0]).unwrap();
        let text = t.to_csv();
        assert!(text.starts_with("timestamp,watts\n1550570278,2.9\n"));
        assert_eq!(PowerTrace::from_csv(&text).unwrap(), t);
        assert!(PowerTrace::from_csv("timestamp,watts\n0,1\n10,1\n25,1\n").is_err());
        assert!(matches!(PowerTrace::from_csv("timestamp,watts\n"), Err(MlError::EmptyTrace)));
        assert_eq!(PowerTrace::from_csv("timestamp,watts\n5,1\n").unwrap().period_sec, DEFAULT_PERIOD_SEC);
    }
}
