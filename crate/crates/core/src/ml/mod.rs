//! Appliance recognition from smart plug power traces: features, a
//! seeded random forest, threshold-based usage detection and activity
//! sentences.

pub mod features;
pub mod forest;
pub mod rng;
pub mod usage;

use thiserror::Error;

pub use features::{extract_features, FeatureVector, PowerTrace, FEATURE_COUNT, FEATURE_NAMES};
pub use forest::{evaluate, train, ClassMetrics, Evaluation, ForestConfig, Prediction, RandomForest, TreeNode};
pub use usage::{
    builtin_rules, detect_usage, infer_activities, load_rules, render_activities, rules_from_json, ActivityInput,
    ActivityRule, UsageEvent, UsageThresholds,
};

/// Watts above which a plug counts as on for feature extraction.
pub const DEFAULT_ON_THRESHOLD_W: f64 = 5.0;

#[derive(Debug, Error)]
pub enum MlError {
    #[error("power trace is empty")]
    EmptyTrace,
    #[error("invalid power trace: {0}")]
    InvalidTrace(String),
    #[error("training needs at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("class {class:?} has {count} samples, fewer than minLeaf {min}")]
    TooFewSamples { class: String, count: usize, min: usize },
    #[error("all {rows} feature vectors are identical across classes {classes:?}")]
    DegenerateData { rows: usize, classes: Vec<String> },
    #[error("row {0} has a non-finite feature")]
    InvalidFeatures(usize),
    #[error("invalid forest configuration: {0}")]
    InvalidConfig(String),
    #[error("test label {0:?} is not a model class")]
    UnknownLabel(String),
    #[error("off threshold {off} W exceeds on threshold {on} W")]
    InvalidThresholds { on: f64, off: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
