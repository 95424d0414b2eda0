//! Predicting one human metric from other metrics: regression designs,
//! lasso and boosted-tree regressors, seeded k-fold evaluation, MSE-ratio
//! curves and the release-date timeline.

mod analysis;
mod cv;
mod gbt;
mod lasso;

pub use analysis::{human_ids, mse_ratio, timeline_fit, MseRatioCurve, Timeline, TimelineConfig, TimelinePoint};
pub use cv::{kfold_cv, predict_human, CvResult, FittedModel, PredictionReport, RegressorConfig};
pub use gbt::{gbt_fit, BoostedTreesModel, GbtConfig, RegressionTree};
pub use lasso::{
    alpha_max, kkt_residual, lasso_fit, lasso_path, soft_threshold, LassoConfig, LassoModel, LassoPath,
};

use serde::{Deserialize, Serialize};

use crate::ranking::{representation, Level, RankingError};
use crate::scoreset::{MetricKind, ScoreTensor};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PredictionError {
    #[error("metric `{0}` not in tensor")]
    UnknownMetric(String),
    #[error("target `{0}` is not a human metric")]
    TargetNotHuman(String),
    #[error("feature set {0:?} is empty for target `{1}`")]
    NoFeatures(FeatureSet, String),
    #[error("feature list is empty")]
    EmptyFeatureList,
    #[error("target `{0}` cannot also be a feature")]
    TargetAsFeature(String),
    #[error("{rows} rows cannot be split into {folds} folds of at least two rows")]
    TooFewRows { rows: usize, folds: usize },
    #[error("need at least two folds, got {0}")]
    InvalidFolds(usize),
    #[error("alpha grid must be non-empty, nonnegative and sorted descending")]
    BadAlphaGrid,
    #[error("no human metric other than `{0}` is available")]
    NoOtherHumans(String),
    #[error("automatic metric `{0}` has no release date")]
    MissingReleaseDate(String),
    #[error("design contains a non-finite value")]
    NonFinite,
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    AutoOnly,
    HumanOnly,
    Both,
}

impl FeatureSet {
    pub const ALL: [FeatureSet; 3] = [FeatureSet::AutoOnly, FeatureSet::HumanOnly, FeatureSet::Both];

    pub fn name(self) -> &'static str {
        match self {
            FeatureSet::AutoOnly => "auto_only",
            FeatureSet::HumanOnly => "human_only",
            FeatureSet::Both => "both",
        }
    }
}

/// What a design row stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignMode {
    /// One row per (system, utterance) with oriented scores.
    #[default]
    RawScores,
    /// One row per system with system-level Borda values.
    SystemRanks,
    /// One row per utterance with utterance-level Borda values.
    UtteranceRanks,
}

impl std::str::FromStr for DesignMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" | "raw_scores" => Ok(DesignMode::RawScores),
            "system" | "system_ranks" => Ok(DesignMode::SystemRanks),
            "utterance" | "utterance_ranks" => Ok(DesignMode::UtteranceRanks),
            other => Err(format!("unknown design mode `{other}` (expected raw|system|utterance)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionDesign {
    pub target_id: String,
    pub mode: DesignMode,
    pub feature_ids: Vec<String>,
    /// `(system, utterance)`; `*` marks an aggregated axis.
    pub row_keys: Vec<(String, String)>,
    /// Row-major `P x F`.
    pub features: Vec<Vec<f64>>,
    pub target: Vec<f64>,
}

impl RegressionDesign {
    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn feature_count(&self) -> usize {
        self.feature_ids.len()
    }

    /// Rows selected by `index`, in that order.
    pub fn subset(&self, index: &[usize]) -> (Vec<Vec<f64>>, Vec<f64>) {
        (
            index.iter().map(|&i| self.features[i].clone()).collect(),
            index.iter().map(|&i| self.target[i]).collect(),
        )
    }
}

/// Metric ids of `tensor` used as features for `target` under `set`, in
/// tensor order.
pub fn feature_ids(
    tensor: &ScoreTensor,
    target: &str,
    set: FeatureSet,
) -> Result<Vec<String>, PredictionError> {
    let profile = tensor
        .profile(target)
        .ok_or_else(|| PredictionError::UnknownMetric(target.to_owned()))?;
    if profile.kind != MetricKind::Human {
        return Err(PredictionError::TargetNotHuman(target.to_owned()));
    }
    let ids: Vec<String> = tensor
        .metrics()
        .iter()
        .filter(|p| p.id != target)
        .filter(|p| match set {
            FeatureSet::AutoOnly => p.kind == MetricKind::Automatic,
            FeatureSet::HumanOnly => p.kind == MetricKind::Human,
            FeatureSet::Both => true,
        })
        .map(|p| p.id.clone())
        .collect();
    if ids.is_empty() {
        return Err(PredictionError::NoFeatures(set, target.to_owned()));
    }
    Ok(ids)
}

/// Raw-score design for predicting `target` from the metrics in `set`.
pub fn build_design(
    tensor: &ScoreTensor,
    target: &str,
    set: FeatureSet,
) -> Result<RegressionDesign, PredictionError> {
    build_design_mode(tensor, target, set, DesignMode::RawScores)
}

pub fn build_design_mode(
    tensor: &ScoreTensor,
    target: &str,
    set: FeatureSet,
    mode: DesignMode,
) -> Result<RegressionDesign, PredictionError> {
    let ids = feature_ids(tensor, target, set)?;
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    design_from_features(tensor, target, &refs, mode)
}

/// Design with an explicit feature list.
pub fn design_from_features(
    tensor: &ScoreTensor,
    target: &str,
    features: &[&str],
    mode: DesignMode,
) -> Result<RegressionDesign, PredictionError> {
    if features.is_empty() {
        return Err(PredictionError::EmptyFeatureList);
    }
    if features.contains(&target) {
        return Err(PredictionError::TargetAsFeature(target.to_owned()));
    }
    let index = |id: &str| {
        tensor
            .metric_index(id)
            .ok_or_else(|| PredictionError::UnknownMetric(id.to_owned()))
    };
    let t = index(target)?;
    let cols: Vec<usize> = features.iter().map(|f| index(f)).collect::<Result<_, _>>()?;
    let (_, n, k) = tensor.shape();

    let (row_keys, columns, target_col): (Vec<(String, String)>, Vec<Vec<f64>>, Vec<f64>) = match mode {
        DesignMode::RawScores => {
            let keys = (0..n)
                .flat_map(|s| (0..k).map(move |u| (s, u)))
                .map(|(s, u)| (tensor.systems()[s].clone(), tensor.utterances()[u].clone()))
                .collect();
            let column = |m: usize| -> Vec<f64> {
                (0..n).flat_map(|s| tensor.system_row(m, s).to_vec()).collect()
            };
            (keys, cols.iter().map(|&c| column(c)).collect(), column(t))
        }
        DesignMode::SystemRanks | DesignMode::UtteranceRanks => {
            let level = if mode == DesignMode::SystemRanks {
                Level::System
            } else {
                Level::Utterance
            };
            let keys = match level {
                Level::System => tensor.systems().iter().map(|s| (s.clone(), "*".to_owned())).collect(),
                Level::Utterance => tensor
                    .utterances()
                    .iter()
                    .map(|u| ("*".to_owned(), u.clone()))
                    .collect(),
            };
            let column = |id: &str| -> Result<Vec<f64>, PredictionError> {
                Ok(representation(tensor, id, level)?.values)
            };
            let columns = features.iter().map(|f| column(f)).collect::<Result<_, _>>()?;
            (keys, columns, column(target)?)
        }
    };
    let rows = target_col.len();
    let features_rows: Vec<Vec<f64>> = (0..rows)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect();
    if features_rows.iter().flatten().chain(&target_col).any(|v| !v.is_finite()) {
        return Err(PredictionError::NonFinite);
    }
    Ok(RegressionDesign {
        target_id: target.to_owned(),
        mode,
        feature_ids: features.iter().map(|s| (*s).to_owned()).collect(),
        row_keys,
        features: features_rows,
        target: target_col,
    })
}
