use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gbt::{self, BoostedTreesModel, GbtConfig};
use super::lasso::{self, LassoConfig, LassoModel};
use super::{build_design_mode, DesignMode, FeatureSet, PredictionError, RegressionDesign};
use crate::ranking::{kendall_tau, rank_slice};
use crate::scoreset::ScoreTensor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegressorConfig {
    Lasso(LassoConfig),
    Gbt(GbtConfig),
}

impl Default for RegressorConfig {
    fn default() -> Self {
        RegressorConfig::Gbt(GbtConfig::default())
    }
}

impl RegressorConfig {
    pub fn name(&self) -> &'static str {
        match self {
            RegressorConfig::Lasso(_) => "lasso",
            RegressorConfig::Gbt(_) => "gbt",
        }
    }

    pub fn fit(&self, features: &[Vec<f64>], target: &[f64]) -> FittedModel {
        match self {
            RegressorConfig::Lasso(cfg) => FittedModel::Lasso(lasso::fit_rows(features, target, cfg)),
            RegressorConfig::Gbt(cfg) => FittedModel::Gbt(gbt::fit_rows(features, target, cfg)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Lasso(LassoModel),
    Gbt(BoostedTreesModel),
}

impl FittedModel {
    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        match self {
            FittedModel::Lasso(m) => m.predict(rows),
            FittedModel::Gbt(m) => m.predict(rows),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvResult {
    pub folds: usize,
    pub seed: u64,
    pub regressor: RegressorConfig,
    pub fold_tau: Vec<f64>,
    pub mean_tau: f64,
}

/// Seeded shuffle of `0..rows` cut into `folds` contiguous blocks; the
/// first `rows % folds` blocks get one extra row.
pub(crate) fn fold_blocks(rows: usize, folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut index: Vec<usize> = (0..rows).collect();
    index.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (base, extra) = (rows / folds, rows % folds);
    let mut blocks = Vec::with_capacity(folds);
    let mut start = 0;
    for f in 0..folds {
        let size = base + usize::from(f < extra);
        blocks.push(index[start..start + size].to_vec());
        start += size;
    }
    blocks
}

/// k-fold cross-validation scored by Kendall's tau between the ranked test
/// predictions and the ranked test targets.
pub fn kfold_cv(
    design: &RegressionDesign,
    regressor: &RegressorConfig,
    folds: usize,
    seed: u64,
) -> Result<CvResult, PredictionError> {
    if folds < 2 {
        return Err(PredictionError::InvalidFolds(folds));
    }
    let rows = design.rows();
    if rows < 2 * folds {
        return Err(PredictionError::TooFewRows { rows, folds });
    }
    let blocks = fold_blocks(rows, folds, seed);
    let mut fold_tau = Vec::with_capacity(folds);
    for (f, test) in blocks.iter().enumerate() {
        let train: Vec<usize> = blocks
            .iter()
            .enumerate()
            .filter(|(g, _)| *g != f)
            .flat_map(|(_, b)| b.iter().copied())
            .collect();
        let (x_train, y_train) = design.subset(&train);
        let (x_test, y_test) = design.subset(test);
        let predictions = regressor.fit(&x_train, &y_train).predict(&x_test);
        if predictions.windows(2).all(|w| w[0] == w[1]) {
            log::warn!("fold {f}: constant predictions; tau counts no discordant pair");
        }
        fold_tau.push(kendall_tau(&rank_slice(&predictions), &rank_slice(&y_test))?);
    }
    let mean_tau = fold_tau.iter().sum::<f64>() / folds as f64;
    Ok(CvResult {
        folds,
        seed,
        regressor: *regressor,
        fold_tau,
        mean_tau,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionReport {
    pub target_id: String,
    pub feature_set: FeatureSet,
    pub mode: DesignMode,
    pub feature_ids: Vec<String>,
    pub rows: usize,
    #[serde(flatten)]
    pub cv: CvResult,
}

/// Cross-validated predictability of `target` from one feature set.
pub fn predict_human(
    tensor: &ScoreTensor,
    target: &str,
    set: FeatureSet,
    mode: DesignMode,
    regressor: &RegressorConfig,
    folds: usize,
    seed: u64,
) -> Result<PredictionReport, PredictionError> {
    let design = build_design_mode(tensor, target, set, mode)?;
    let cv = kfold_cv(&design, regressor, folds, seed)?;
    Ok(PredictionReport {
        target_id: target.to_owned(),
        feature_set: set,
        mode,
        feature_ids: design.feature_ids.clone(),
        rows: design.rows(),
        cv,
    })
}
