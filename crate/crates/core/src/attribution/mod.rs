//! Black-box multiclass authorship attribution: score vectors, the two
//! classifier implementations, training and the grouped/stratified
//! cross-validation protocol (folds split by task, feature selection
//! re-fit inside every fold).

pub mod forest;
pub mod softmax;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::features::{fit_space_kinds, vectorize, FeatureKind, FeatureSpace};
use crate::lang::ast::SourceProgram;
use crate::rng::derive;
use crate::{AuthorLabel, TaskId};

pub use forest::TreeNode;
pub use softmax::SoftmaxModel;

/// Dimension cap used when fitting per-model feature spaces.
pub const SELECTION_CAP: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassifierKind {
    RandomForest,
    LinearSoftmax,
}

impl ClassifierKind {
    /// Feature kinds each classifier consumes: the forest sees lexical
    /// and syntactic features, the softmax lexical only.
    pub fn feature_kinds(self) -> &'static [FeatureKind] {
        match self {
            ClassifierKind::RandomForest => &[FeatureKind::Lexical, FeatureKind::Syntactic],
            ClassifierKind::LinearSoftmax => &[FeatureKind::Lexical],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassifierKind::RandomForest => "random_forest",
            ClassifierKind::LinearSoftmax => "linear_softmax",
        }
    }
}

/// Scores over all authors; entries lie in [0, 1] and sum to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
}

impl ScoreVector {
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.scores.iter().enumerate() {
            if *s > self.scores[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelParams {
    Forest(Vec<TreeNode>),
    Softmax(SoftmaxModel),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ClassifierKind,
    pub space: FeatureSpace,
    pub params: ModelParams,
    pub n_classes: usize,
    pub authors: Vec<AuthorLabel>,
    pub train_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrainError {
    EmptyDataset,
    DegenerateDataset,
    InsufficientTasks,
    SpaceFit(String),
}

impl fmt::Display for TrainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrainError::EmptyDataset => write!(f, "dataset is empty"),
            TrainError::DegenerateDataset => write!(f, "dataset has a single class"),
            TrainError::InsufficientTasks => write!(f, "grouped CV needs one fold per task, at least 2"),
            TrainError::SpaceFit(m) => write!(f, "feature space fit failed: {m}"),
        }
    }
}

/// Train a classifier on an already-fitted feature space.
pub fn train(
    kind: ClassifierKind,
    dataset: &[(SourceProgram, AuthorLabel)],
    space: &FeatureSpace,
    seed: u64,
) -> Result<TrainedModel, TrainError> {
    if dataset.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    let mut authors: Vec<AuthorLabel> = dataset.iter().map(|(_, a)| a.clone()).collect();
    authors.sort_by_key(|a| a.id);
    authors.dedup_by_key(|a| a.id);
    if authors.len() < 2 {
        return Err(TrainError::DegenerateDataset);
    }
    let n_classes = authors.iter().map(|a| a.id).max().unwrap_or(0) + 1;
    let xs: Vec<Vec<f64>> =
        dataset.iter().map(|(p, _)| vectorize(p, space).values).collect();
    let ys: Vec<usize> = dataset.iter().map(|(_, a)| a.id).collect();
    let params = match kind {
        ClassifierKind::RandomForest => {
            ModelParams::Forest(forest::train_forest(&xs, &ys, n_classes, seed))
        }
        ClassifierKind::LinearSoftmax => {
            ModelParams::Softmax(softmax::train_softmax(&xs, &ys, n_classes))
        }
    };
    Ok(TrainedModel { kind, space: space.clone(), params, n_classes, authors, train_seed: seed })
}

/// Fit the kind-appropriate feature space on the dataset, then train.
pub fn fit_and_train(
    kind: ClassifierKind,
    dataset: &[(SourceProgram, AuthorLabel)],
    seed: u64,
) -> Result<TrainedModel, TrainError> {
    let corpus: Vec<SourceProgram> = dataset
        .iter()
        .map(|(p, a)| {
            let mut p = p.clone();
            p.author = Some(a.clone());
            p
        })
        .collect();
    let space = fit_space_kinds(&corpus, SELECTION_CAP, kind.feature_kinds())
        .map_err(|e| TrainError::SpaceFit(alloc::format!("{e}")))?;
    train(kind, dataset, &space, seed)
}

pub fn predict_scores(model: &TrainedModel, program: &SourceProgram) -> ScoreVector {
    let x = vectorize(program, &model.space).values;
    let scores = match &model.params {
        ModelParams::Forest(trees) => forest::forest_scores(trees, &x, model.n_classes),
        ModelParams::Softmax(m) => softmax::softmax(&softmax::logits(m, &x)),
    };
    ScoreVector { scores }
}

/// `argmax` attribution with ties broken toward the lowest author id.
pub fn attribute(model: &TrainedModel, program: &SourceProgram) -> AuthorLabel {
    let scores = predict_scores(model, program);
    let id = scores.argmax();
    model
        .authors
        .iter()
        .find(|a| a.id == id)
        .cloned()
        .unwrap_or(AuthorLabel { id, name: alloc::format!("author_{id}") })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub per_fold: Vec<(TaskId, f64)>,
    pub mean: f64,
    pub std: f64,
}

/// Grouped, stratified k-fold cross-validation: each fold holds out one
/// task entirely; feature selection and training happen inside the fold
/// on the remaining tasks only.
pub fn cross_validate(
    kind: ClassifierKind,
    dataset: &[(SourceProgram, AuthorLabel)],
    k: usize,
    seed: u64,
) -> Result<CvReport, TrainError> {
    let mut tasks: Vec<TaskId> = Vec::new();
    for (p, _) in dataset {
        if let Some(t) = &p.task {
            if !tasks.contains(t) {
                tasks.push(t.clone());
            }
        }
    }
    tasks.sort();
    if tasks.len() < 2 || k != tasks.len() {
        return Err(TrainError::InsufficientTasks);
    }
    let mut per_fold = Vec::with_capacity(k);
    for (fold, held_out) in tasks.iter().enumerate() {
        let train_set: Vec<(SourceProgram, AuthorLabel)> = dataset
            .iter()
            .filter(|(p, _)| p.task.as_ref() != Some(held_out))
            .cloned()
            .collect();
        let test_set: Vec<&(SourceProgram, AuthorLabel)> =
            dataset.iter().filter(|(p, _)| p.task.as_ref() == Some(held_out)).collect();
        let model = fit_and_train(kind, &train_set, derive(seed, &[0xcf, fold as u64]))?;
        let correct = test_set
            .iter()
            .filter(|(p, a)| attribute(&model, p).id == a.id)
            .count();
        let acc = if test_set.is_empty() { 0.0 } else { correct as f64 / test_set.len() as f64 };
        per_fold.push((held_out.clone(), acc));
    }
    let mean = per_fold.iter().map(|(_, a)| a).sum::<f64>() / per_fold.len() as f64;
    let var = per_fold.iter().map(|(_, a)| (a - mean) * (a - mean)).sum::<f64>()
        / per_fold.len() as f64;
    Ok(CvReport { per_fold, mean, std: libm::sqrt(var) })
}

/// Check that no (author, task) pair of any test fold appears in its
/// training split; used by the property suites.
pub fn fold_isolation_violations(
    dataset: &[(SourceProgram, AuthorLabel)],
) -> Vec<(usize, String)> {
    let mut tasks: Vec<TaskId> = Vec::new();
    for (p, _) in dataset {
        if let Some(t) = &p.task {
            if !tasks.contains(t) {
                tasks.push(t.clone());
            }
        }
    }
    tasks.sort();
    let mut violations = Vec::new();
    for (fold, held_out) in tasks.iter().enumerate() {
        let mut train_pairs: BTreeMap<(usize, TaskId), usize> = BTreeMap::new();
        for (p, a) in dataset.iter().filter(|(p, _)| p.task.as_ref() != Some(held_out)) {
            if let Some(t) = &p.task {
                *train_pairs.entry((a.id, t.clone())).or_insert(0) += 1;
            }
        }
        for (p, a) in dataset.iter().filter(|(p, _)| p.task.as_ref() == Some(held_out)) {
            if let Some(t) = &p.task {
                if train_pairs.contains_key(&(a.id, t.clone())) {
                    violations.push((fold, alloc::format!("{}:{}", a.id, t)));
                }
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    fn labeled(src: &str, author: usize, task: &str) -> (SourceProgram, AuthorLabel) {
        let mut p = parse(src).unwrap();
        let label = AuthorLabel { id: author, name: alloc::format!("a{author}") };
        p.author = Some(label.clone());
        p.task = Some(task.into());
        (p, label)
    }

    /// Two authors separated by one lexem: one declares `longlong`,
    /// the other `int`.
    fn separable_dataset() -> Vec<(SourceProgram, AuthorLabel)> {
        let mut data = Vec::new();
        for t in 0..4 {
            data.push(labeled(
                &alloc::format!(
                    "int main() {{ longlong x = {t}; output << x + {t}; return 0; }}"
                ),
                0,
                &alloc::format!("t{t}"),
            ));
            data.push(labeled(
                &alloc::format!("int main() {{ int x = {t}; output << x + {t}; return 0; }}"),
                1,
                &alloc::format!("t{t}"),
            ));
        }
        data
    }

    #[test]
    fn separable_authors_classify_perfectly() {
        for kind in [ClassifierKind::RandomForest, ClassifierKind::LinearSoftmax] {
            let data = separable_dataset();
            let train_set = &data[..6];
            let model = fit_and_train(kind, train_set, 11).unwrap();
            for (p, a) in &data[6..] {
                assert_eq!(attribute(&model, p).id, a.id, "{}", kind.name());
            }
        }
    }

    #[test]
    fn single_class_is_degenerate() {
        let data: Vec<_> =
            separable_dataset().into_iter().filter(|(_, a)| a.id == 0).collect();
        assert_eq!(
            fit_and_train(ClassifierKind::RandomForest, &data, 1).unwrap_err(),
            TrainError::DegenerateDataset
        );
    }

    #[test]
    fn training_is_deterministic() {
        let data = separable_dataset();
        let a = fit_and_train(ClassifierKind::RandomForest, &data, 5).unwrap();
        let b = fit_and_train(ClassifierKind::RandomForest, &data, 5).unwrap();
        assert_eq!(a.params, b.params);
    }

    #[test]
    fn scores_are_normalized_for_every_program() {
        let data = separable_dataset();
        for kind in [ClassifierKind::RandomForest, ClassifierKind::LinearSoftmax] {
            let model = fit_and_train(kind, &data, 3).unwrap();
            for (p, _) in &data {
                let s = predict_scores(&model, p);
                assert_eq!(s.scores.len(), model.n_classes);
                assert!((s.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(s.scores.iter().all(|v| (0.0..=1.0).contains(v)));
            }
        }
    }

    #[test]
    fn argmax_tie_breaks_to_lowest_id() {
        let s = ScoreVector { scores: alloc::vec![0.5, 0.5] };
        assert_eq!(s.argmax(), 0);
        let s = ScoreVector { scores: alloc::vec![0.1, 0.7, 0.2] };
        assert_eq!(s.argmax(), 1);
    }

    #[test]
    fn grouped_cv_isolates_tasks() {
        let data = separable_dataset();
        let report = cross_validate(ClassifierKind::RandomForest, &data, 4, 9).unwrap();
        assert_eq!(report.per_fold.len(), 4);
        assert!(report.mean > 0.99);
        assert!(fold_isolation_violations(&data).is_empty());
        assert!(matches!(
            cross_validate(ClassifierKind::RandomForest, &data, 3, 9),
            Err(TrainError::InsufficientTasks)
        ));
    }
}
