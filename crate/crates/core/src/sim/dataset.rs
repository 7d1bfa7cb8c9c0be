use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::appliance::{generate_trace, ApplianceModel};
use super::SimError;
use crate::ml::{extract_features, rng, FeatureVector, DEFAULT_ON_THRESHOLD_W};

pub type Dataset = Vec<(FeatureVector, String)>;

/// `traces_per_class` labelled feature rows per model. Trace `j` of model
/// `i` is generated from a seed derived from (seed, i, j).
pub fn make_dataset(
    models: &[ApplianceModel],
    traces_per_class: usize,
    duration_sec: u32,
    period_sec: u32,
    seed: u64,
) -> Result<Dataset, SimError> {
    if models.is_empty() {
        return Err(SimError::InvalidScenario("no appliance models".into()));
    }
    models
        .iter()
        .enumerate()
        .flat_map(|(i, m)| (0..traces_per_class).map(move |j| (i, j, m)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, j, m)| {
            let s = rng::derive_seed(rng::derive_seed(seed, i as u64), j as u64);
            let trace = generate_trace(m, duration_sec, period_sec, s)?;
            let features = extract_features(&trace, DEFAULT_ON_THRESHOLD_W).expect("generated traces are non-empty");
            Ok((features, m.kind.clone()))
        })
        .collect()
}

/// Per-class shuffle, then the first `train_fraction` of each class
/// (rounded) goes to training.
pub fn stratified_split(data: &[(FeatureVector, String)], train_fraction: f64, seed: u64) -> (Dataset, Dataset) {
    let mut by_class: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, (_, label)) in data.iter().enumerate() {
        by_class.entry(label).or_default().push(i);
    }
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for (k, (_, mut rows)) in by_class.into_iter().enumerate() {
        rows.shuffle(&mut rng::derive(seed, k as u64));
        let cut = (rows.len() as f64 * train_fraction).round() as usize;
        train.extend(rows[..cut].iter().map(|&i| data[i].clone()));
        test.extend(rows[cut..].iter().map(|&i| data[i].clone()));
    }
    (train, test)
}
