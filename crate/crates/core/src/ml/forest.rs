use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rand::RngExt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::features::{FeatureVector, FEATURE_COUNT};
use super::rng::{self, Rng};
use super::MlError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_leaf: usize,
    pub mtry: usize,
    pub seed: u64,
    pub confidence_threshold: f64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_depth: 12,
            min_leaf: 2,
            mtry: 4,
            seed: 42,
            confidence_threshold: 0.6,
        }
    }
}

impl ForestConfig {
    fn validate(&self) -> Result<(), MlError> {
        let bad = |m: &str| Err(MlError::InvalidConfig(m.into()));
        if self.n_trees == 0 {
            return bad("nTrees must be positive");
        }
        if self.max_depth == 0 || self.min_leaf == 0 {
            return bad("maxDepth and minLeaf must be positive");
        }
        if !(1..=FEATURE_COUNT).contains(&self.mtry) {
            return bad("mtry must be between 1 and the feature count");
        }
        if !(0.0..=1.0).contains(&self.confidence_threshold) {
            return bad("confidenceThreshold must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Samples go left when `value <= threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        counts: Vec<u32>,
    },
}

impl TreeNode {
    pub fn leaf_for(&self, x: &FeatureVector) -> &[u32] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if x.get(*feature) <= *threshold { left } else { right };
                }
                TreeNode::Leaf { counts } => return counts,
            }
        }
    }

    /// Edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
            TreeNode::Leaf { .. } => 0,
        }
    }

    pub fn leaves(&self) -> Vec<&[u32]> {
        match self {
            TreeNode::Split { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
            TreeNode::Leaf { counts } => vec![counts],
        }
    }
}

/// Index of the largest count; ties go to the lower index.
fn majority(counts: &[u32]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    Label { class: String, confidence: f64 },
    NotConfident { top_class: String, confidence: f64 },
}

impl Prediction {
    pub fn confidence(&self) -> f64 {
        match self {
            Prediction::Label { confidence, .. } | Prediction::NotConfident { confidence, .. } => *confidence,
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Prediction::Label { class, .. } => Some(class),
            Prediction::NotConfident { .. } => None,
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Label { class, .. } => f.write_str(class),
            Prediction::NotConfident { .. } => f.write_str("not_confident"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomForest {
    pub config: ForestConfig,
    /// Sorted; leaf histograms are indexed by position in this list.
    pub classes: Vec<String>,
    pub trees: Vec<TreeNode>,
}

fn gini(counts: &[u32], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    1.0 - counts.iter().map(|&c| (f64::from(c) / n).powi(2)).sum::<f64>()
}

struct Grower<'a> {
    xs: &'a [FeatureVector],
    ys: &'a [usize],
    n_classes: usize,
    config: &'a ForestConfig,
}

impl Grower<'_> {
    fn histogram(&self, rows: &[usize]) -> Vec<u32> {
        let mut h = vec![0; self.n_classes];
        for &r in rows {
            h[self.ys[r]] += 1;
        }
        h
    }

    fn grow(&self, rows: &mut [usize], depth: usize, rng: &mut Rng) -> TreeNode {
        let counts = self.histogram(rows);
        let n = rows.len();
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || depth >= self.config.max_depth || n < 2 * self.config.min_leaf {
            return TreeNode::Leaf { counts };
        }
        let parent = gini(&counts, n);

        let mut features: Vec<usize> = (0..FEATURE_COUNT).collect();
        for i in 0..self.config.mtry {
            let j = rng.random_range(i..FEATURE_COUNT);
            features.swap(i, j);
        }

        // (weighted gini, feature, threshold)
        let mut best: Option<(f64, usize, f64)> = None;
        for &f in &features[..self.config.mtry] {
            rows.sort_by(|&a, &b| self.xs[a].get(f).total_cmp(&self.xs[b].get(f)).then(a.cmp(&b)));
            let mut left = vec![0u32; self.n_classes];
            let mut right = counts.clone();
            for i in 0..n - 1 {
                let y = self.ys[rows[i]];
                left[y] += 1;
                right[y] -= 1;
                let (lo, hi) = (self.xs[rows[i]].get(f), self.xs[rows[i + 1]].get(f));
                let (nl, nr) = (i + 1, n - i - 1);
                if lo == hi || nl < self.config.min_leaf || nr < self.config.min_leaf {
                    continue;
                }
                let score = (nl as f64 * gini(&left, nl) + nr as f64 * gini(&right, nr)) / n as f64;
                if best.is_none_or(|(s, _, _)| score < s) {
                    let mid = lo + (hi - lo) / 2.0;
                    let threshold = if mid < hi { mid } else { lo };
                    best = Some((score, f, threshold));
                }
            }
        }
        let Some((score, feature, threshold)) = best else {
            return TreeNode::Leaf { counts };
        };
        if score >= parent - 1e-12 {
            return TreeNode::Leaf { counts };
        }
        rows.sort_by(|&a, &b| {
            let (va, vb) = (self.xs[a].get(feature) > threshold, self.xs[b].get(feature) > threshold);
            va.cmp(&vb).then(a.cmp(&b))
        });
        let split = rows.partition_point(|&r| self.xs[r].get(feature) <= threshold);
        let (l, r) = rows.split_at_mut(split);
        TreeNode::Split {
            feature,
            threshold,
            left: Box::new(self.grow(l, depth + 1, rng)),
            right: Box::new(self.grow(r, depth + 1, rng)),
        }
    }
}

/// Trains a forest of bootstrapped Gini trees. Tree `i` draws only from
/// stream `i` of the seed, so parallel and sequential training agree.
pub fn train(dataset: &[(FeatureVector, String)], config: &ForestConfig) -> Result<RandomForest, MlError> {
    config.validate()?;
    let classes: Vec<String> = dataset
        .iter()
        .map(|(_, l)| l.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if classes.len() < 2 {
        return Err(MlError::TooFewClasses(classes.len()));
    }
    let index: BTreeMap<&str, usize> = classes.iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let ys: Vec<usize> = dataset.iter().map(|(_, l)| index[l.as_str()]).collect();
    for (i, class) in classes.iter().enumerate() {
        let count = ys.iter().filter(|&&y| y == i).count();
        if count < config.min_leaf {
            return Err(MlError::TooFewSamples { class: class.clone(), count, min: config.min_leaf });
        }
    }
    if let Some(row) = dataset.iter().position(|(x, _)| x.0.iter().any(|v| !v.is_finite())) {
        return Err(MlError::InvalidFeatures(row));
    }
    let first = dataset[0].0;
    if dataset.iter().all(|(x, _)| x.0.iter().zip(first.0).all(|(a, b)| a.to_bits() == b.to_bits())) {
        return Err(MlError::DegenerateData { rows: dataset.len(), classes });
    }

    let xs: Vec<FeatureVector> = dataset.iter().map(|(x, _)| *x).collect();
    let grower = Grower { xs: &xs, ys: &ys, n_classes: classes.len(), config };
    let n = xs.len();
    let trees = (0..config.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::derive(config.seed, t as u64);
            let mut rows: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            grower.grow(&mut rows, 0, &mut rng)
        })
        .collect();
    Ok(RandomForest { config: config.clone(), classes, trees })
}

impl RandomForest {
    /// Per-class vote counts, one vote per tree.
    pub fn votes(&self, x: &FeatureVector) -> Vec<u32> {
        let mut votes = vec![0; self.classes.len()];
        for tree in &self.trees {
            votes[majority(tree.leaf_for(x))] += 1;
        }
        votes
    }

    pub fn predict(&self, x: &FeatureVector) -> Prediction {
        let votes = self.votes(x);
        let top = majority(&votes);
        let confidence = f64::from(votes[top]) / self.trees.len() as f64;
        let class = self.classes[top].clone();
        if confidence >= self.config.confidence_threshold {
            Prediction::Label { class, confidence }
        } else {
            Prediction::NotConfident { top_class: class, confidence }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("forest serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, MlError> {
        let forest: RandomForest = serde_json::from_str(text).map_err(|e| MlError::Parse(e.to_string()))?;
        forest.config.validate()?;
        if forest.trees.is_empty() || forest.classes.len() < 2 {
            return Err(MlError::Parse("model has no trees or fewer than two classes".into()));
        }
        for tree in &forest.trees {
            let leaves_ok = tree.leaves().iter().all(|c| c.len() == forest.classes.len());
            if !leaves_ok || !splits_in_range(tree) {
                return Err(MlError::Parse("tree does not match the class list".into()));
            }
        }
        Ok(forest)
    }

    pub fn save(&self, path: &Path) -> Result<(), MlError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, MlError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn splits_in_range(node: &TreeNode) -> bool {
    match node {
        TreeNode::Split { feature, left, right, .. } => {
            *feature < FEATURE_COUNT && splits_in_range(left) && splits_in_range(right)
        }
        TreeNode::Leaf { .. } => true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassMetrics {
    /// `None` when the class was never predicted.
    pub precision: Option<f64>,
    /// `None` when the class has no test samples.
    pub recall: Option<f64>,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Evaluation {
    pub per_class: BTreeMap<String, ClassMetrics>,
    /// Mean over classes with a defined precision.
    pub macro_precision: Option<f64>,
    pub micro_precision: Option<f64>,
    pub macro_recall: Option<f64>,
    pub abstention_rate: f64,
    pub total: usize,
    pub abstained: usize,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Confident predictions feed precision; abstentions are counted apart
/// and still count as misses for recall.
pub fn evaluate(forest: &RandomForest, testset: &[(FeatureVector, String)]) -> Result<Evaluation, MlError> {
    if let Some((_, l)) = testset.iter().find(|(_, l)| !forest.classes.contains(l)) {
        return Err(MlError::UnknownLabel(l.clone()));
    }
    let k = forest.classes.len();
    let (mut predicted, mut correct, mut support) = (vec![0usize; k], vec![0usize; k], vec![0usize; k]);
    let mut abstained = 0;
    for (x, label) in testset {
        let truth = forest.classes.iter().position(|c| c == label).expect("checked above");
        support[truth] += 1;
        match forest.predict(x) {
            Prediction::Label { class, .. } => {
                let p = forest.classes.iter().position(|c| *c == class).expect("own class");
                predicted[p] += 1;
                if p == truth {
                    correct[p] += 1;
                }
            }
            Prediction::NotConfident { .. } => abstained += 1,
        }
    }
    let per_class: BTreeMap<String, ClassMetrics> = forest
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = ClassMetrics {
                precision: (predicted[i] > 0).then(|| correct[i] as f64 / predicted[i] as f64),
                recall: (support[i] > 0).then(|| correct[i] as f64 / support[i] as f64),
                support: support[i],
            };
            (c.clone(), m)
        })
        .collect();
    let confident: usize = predicted.iter().sum();
    let total = testset.len();
    Ok(Evaluation {
        macro_precision: mean(per_class.values().filter_map(|m| m.precision)),
        micro_precision: (confident > 0).then(|| correct.iter().sum::<usize>() as f64 / confident as f64),
        macro_recall: mean(per_class.values().filter_map(|m| m.recall)),
        per_class,
        abstention_rate: if total == 0 { 0.0 } else { abstained as f64 / total as f64 },
        total,
        abstained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: f64) -> FeatureVector {
        let mut a = [0.0; FEATURE_COUNT];
        a[0] = v;
        FeatureVector(a)
    }

    #[test]
    fn rejects_bad_datasets() {
        let cfg = ForestConfig::default();
        let one = vec![(fv(1.0), "a".to_string()), (fv(2.0), "a".to_string())];
        assert!(matches!(train(&one, &cfg), Err(MlError::TooFewClasses(1))));
        let same = vec![
            (fv(1.0), "a".to_string()),
            (fv(1.0), "a".to_string()),
            (fv(1.0), "b".to_string()),
            (fv(1.0), "b".to_string()),
        ];
        assert!(matches!(train(&same, &cfg), Err(MlError::DegenerateData { rows: 4, .. })));
        let thin = vec![(fv(1.0), "a".to_string()), (fv(2.0), "a".to_string()), (fv(3.0), "b".to_string())];
        assert!(matches!(train(&thin, &cfg), Err(MlError::TooFewSamples { count: 1, .. })));
    }

    #[test]
    fn two_point_midpoint_split() {
        // One tree without resampling luck: min_leaf 1 and every feature tried.
        let cfg = ForestConfig { n_trees: 1, min_leaf: 1, mtry: FEATURE_COUNT, ..ForestConfig::default() };
        let data = [(fv(1.0), "a".to_string()), (fv(3.0), "b".to_string())];
        let xs: Vec<FeatureVector> = data.iter().map(|d| d.0).collect();
        let ys = vec![0, 1];
        let g = Grower { xs: &xs, ys: &ys, n_classes: 2, config: &cfg };
        let mut rows = vec![0, 1];
        let tree = g.grow(&mut rows, 0, &mut rng::seeded(1));
        match tree {
            TreeNode::Split { feature, threshold, left, right } => {
                assert_eq!(feature, 0);
                assert_eq!(threshold, 2.0);
                assert_eq!(*left, TreeNode::Leaf { counts: vec![1, 0] });
                assert_eq!(*right, TreeNode::Leaf { counts: vec![0, 1] });
            }
            other => panic!("expected a split, got {other:?}"),
        }
        let score = (gini(&[1, 0], 1) + gini(&[0, 1], 1)) / 2.0;
        assert_eq!(score, 0.0);
    }

    #[test]
    fn confidence_boundary_is_inclusive() {
        let leaf = |c: Vec<u32>| TreeNode::Leaf { counts: c };
        let mut trees = vec![leaf(vec![1, 0]); 3];
        trees.extend(vec![leaf(vec![0, 1]); 2]);
        let forest = RandomForest {
            config: ForestConfig { n_trees: 5, ..ForestConfig::default() },
            classes: vec!["a".into(), "b".into()],
            trees,
        };
        assert_eq!(forest.predict(&fv(0.0)), Prediction::Label { class: "a".into(), confidence: 0.6 });
        let mut tie = forest.clone();
        tie.trees = vec![leaf(vec![0, 1]), leaf(vec![1, 0])];
        let p = tie.predict(&fv(0.0));
        assert_eq!(p, Prediction::NotConfident { top_class: "a".into(), confidence: 0.5 });
        assert_eq!(p.to_string(), "not_confident");
    }

    #[test]
    fn model_json_round_trip() {
        let data: Vec<_> = (0..20)
            .map(|i| (fv(f64::from(i)), if i < 10 { "lamp" } else { "kettle" }.to_string()))
            .collect();
        let cfg = ForestConfig { n_trees: 5, ..ForestConfig::default() };
        let forest = train(&data, &cfg).unwrap();
        let text = forest.to_json();
        assert_eq!(RandomForest::from_json(&text).unwrap(), forest);
        assert_eq!(train(&data, &cfg).unwrap().to_json(), text);
        assert!(RandomForest::from_json("{}").is_err());
    }

    #[test]
    fn evaluation_edge_cases() {
        let leaf = |c: Vec<u32>| TreeNode::Leaf { counts: c };
        let forest = RandomForest {
            config: ForestConfig { n_trees: 2, ..ForestConfig::default() },
            classes: vec!["a".into(), "b".into()],
            trees: vec![leaf(vec![0, 1]), leaf(vec![1, 0])],
        };
        let test = vec![(fv(0.0), "a".to_string()), (fv(0.0), "b".to_string())];
        let e = evaluate(&forest, &test).unwrap();
        assert_eq!(e.abstention_rate, 1.0);
        assert_eq!(e.macro_precision, None);
        assert_eq!(e.micro_precision, None);
        assert!(matches!(evaluate(&forest, &[(fv(0.0), "c".into())]), Err(MlError::UnknownLabel(_))));
    }
}
