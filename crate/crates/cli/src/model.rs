use std::path::Path;

use homecrawl_core::ml::{evaluate, extract_features, train, Evaluation, ForestConfig, PowerTrace, Prediction, RandomForest, DEFAULT_ON_THRESHOLD_W};
use homecrawl_core::sim::{default_appliances, make_dataset, stratified_split, ApplianceModel};

use crate::error::CliError;

/// Training traces match what a crawl polls: 90 samples, 10 s apart.
pub const TRACE_DURATION_SEC: u32 = 900;
pub const TRACE_PERIOD_SEC: u32 = 10;
pub const TRAIN_FRACTION: f64 = 0.7;

pub fn load_models(path: Option<&Path>) -> Result<Vec<ApplianceModel>, CliError> {
    let Some(path) = path else { return Ok(default_appliances()) };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let models: Vec<ApplianceModel> =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    for m in &models {
        m.validate()?;
    }
    Ok(models)
}

/// Generates the synthetic corpus, trains on a stratified split and
/// evaluates on the held-out part.
pub fn train_and_evaluate(
    models: &[ApplianceModel],
    traces_per_class: usize,
    seed: u64,
) -> Result<(RandomForest, Evaluation), CliError> {
    let data = make_dataset(models, traces_per_class, TRACE_DURATION_SEC, TRACE_PERIOD_SEC, seed)?;
    let (train_set, test_set) = stratified_split(&data, TRAIN_FRACTION, seed);
    let config = ForestConfig { seed, ..ForestConfig::default() };
    let forest = train(&train_set, &config)?;
    let evaluation = evaluate(&forest, &test_set)?;
    Ok((forest, evaluation))
}

pub fn format_evaluation(e: &Evaluation) -> String {
    let pct = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{:.4}", v));
    let mut out = format!(
        "macro precision: {}\nmicro precision: {}\nmacro recall:    {}\nabstention rate: {:.4} ({} of {})",
        pct(e.macro_precision),
        pct(e.micro_precision),
        pct(e.macro_recall),
        e.abstention_rate,
        e.abstained,
        e.total
    );
    for (class, m) in &e.per_class {
        out.push_str(&format!(
            "\n  {class:<16} precision {} recall {} support {}",
            pct(m.precision),
            pct(m.recall),
            m.support
        ));
    }
    out
}

pub fn classify(model: &Path, trace: &Path) -> Result<Prediction, CliError> {
    let forest = RandomForest::load(model).map_err(|e| CliError::Config(format!("{}: {e}", model.display())))?;
    let text = std::fs::read_to_string(trace).map_err(|e| CliError::Config(format!("{}: {e}", trace.display())))?;
    let trace = PowerTrace::from_csv(&text)?;
    Ok(forest.predict(&extract_features(&trace, DEFAULT_ON_THRESHOLD_W)?))
}
