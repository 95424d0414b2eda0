use chrono::NaiveDate;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cv::{kfold_cv, RegressorConfig};
use super::lasso::{path_models, LassoConfig, LassoModel, Standardized};
use super::{design_from_features, feature_ids, DesignMode, FeatureSet, PredictionError};
use crate::scoreset::{MetricKind, ScoreTensor};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MseRatioCurve {
    pub target_id: String,
    pub mode: DesignMode,
    pub seed: u64,
    pub holdout_rows: usize,
    pub alphas: Vec<f64>,
    /// Held-out MSE with automatic plus other human features.
    pub mse_with_humans: Vec<f64>,
    /// Held-out MSE with automatic features only.
    pub mse_auto_only: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Whether every human-feature weight is zero at each alpha.
    pub human_weights_zero: Vec<bool>,
}

/// Share of rows held out for the MSE comparison.
pub const HOLDOUT_FRACTION: f64 = 0.2;

fn held_out_mse(model: &LassoModel, rows: &[Vec<f64>], target: &[f64]) -> f64 {
    model
        .predict(rows)
        .iter()
        .zip(target)
        .map(|(p, y)| (p - y).powi(2))
        .sum::<f64>()
        / target.len() as f64
}

/// Held-out lasso MSE with `auto ∪ other humans` divided by the MSE with
/// automatic metrics alone, for each alpha. Both regressions share one
/// seeded split.
pub fn mse_ratio(
    tensor: &ScoreTensor,
    target: &str,
    alphas: &[f64],
    mode: DesignMode,
    seed: u64,
) -> Result<MseRatioCurve, PredictionError> {
    let autos = feature_ids(tensor, target, FeatureSet::AutoOnly)?;
    let humans = feature_ids(tensor, target, FeatureSet::HumanOnly)
        .map_err(|_| PredictionError::NoOtherHumans(target.to_owned()))?;
    // automatic columns first so both fits share the same leading columns
    let combined: Vec<&str> = autos.iter().chain(&humans).map(String::as_str).collect();
    let auto_refs: Vec<&str> = autos.iter().map(String::as_str).collect();
    let with_humans = design_from_features(tensor, target, &combined, mode)?;
    let auto_only = design_from_features(tensor, target, &auto_refs, mode)?;

    let rows = with_humans.rows();
    let holdout = ((rows as f64 * HOLDOUT_FRACTION).ceil() as usize).clamp(1, rows.saturating_sub(2));
    if rows < 3 || holdout == 0 {
        return Err(PredictionError::TooFewRows { rows, folds: 2 });
    }
    let mut index: Vec<usize> = (0..rows).collect();
    index.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (test, train) = index.split_at(holdout);

    let base = LassoConfig::default();
    let fit = |design: &super::RegressionDesign| -> Result<(Vec<LassoModel>, Vec<Vec<f64>>, Vec<f64>), PredictionError> {
        let (x_train, y_train) = design.subset(train);
        let (x_test, y_test) = design.subset(test);
        let s = Standardized::new(&x_train, &y_train);
        Ok((path_models(&s, alphas, &base)?, x_test, y_test))
    };
    let (num_models, num_x, num_y) = fit(&with_humans)?;
    let (den_models, den_x, den_y) = fit(&auto_only)?;

    let mut curve = MseRatioCurve {
        target_id: target.to_owned(),
        mode,
        seed,
        holdout_rows: holdout,
        alphas: alphas.to_vec(),
        mse_with_humans: Vec::new(),
        mse_auto_only: Vec::new(),
        ratios: Vec::new(),
        human_weights_zero: Vec::new(),
    };
    for (num, den) in num_models.iter().zip(&den_models) {
        let a = held_out_mse(num, &num_x, &num_y);
        let b = held_out_mse(den, &den_x, &den_y);
        let ratio = if b > 0.0 {
            a / b
        } else if a == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
        curve.mse_with_humans.push(a);
        curve.mse_auto_only.push(b);
        curve.ratios.push(ratio);
        curve
            .human_weights_zero
            .push(num.weights[autos.len()..].iter().all(|w| *w == 0.0));
    }
    Ok(curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimelineConfig {
    pub folds: usize,
    pub seed: u64,
    pub regressor: RegressorConfig,
    pub mode: DesignMode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelinePoint {
    pub release_date: NaiveDate,
    /// Metrics entering at this point (one family).
    pub added: Vec<String>,
    pub feature_ids: Vec<String>,
    pub fold_tau: Vec<f64>,
    pub mean_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timeline {
    pub target_id: String,
    pub config: TimelineConfig,
    pub points: Vec<TimelinePoint>,
}

/// Cross-validated fit of `target` using, at each release point, every
/// automatic metric released so far. Metrics sharing a family enter
/// together at the family's earliest release date.
pub fn timeline_fit(
    tensor: &ScoreTensor,
    target: &str,
    config: &TimelineConfig,
) -> Result<Timeline, PredictionError> {
    let autos = feature_ids(tensor, target, FeatureSet::AutoOnly)?;
    let profiles: Vec<_> = autos
        .iter()
        .map(|id| tensor.profile(id).expect("id comes from the tensor"))
        .collect();
    if let Some(p) = profiles.iter().find(|p| p.release_date.is_none()) {
        return Err(PredictionError::MissingReleaseDate(p.id.clone()));
    }

    // (earliest date, family key, members in tensor order)
    let mut groups: Vec<(NaiveDate, String, Vec<String>)> = Vec::new();
    for p in &profiles {
        let date = p.release_date.expect("checked above");
        match groups.iter_mut().find(|g| g.1 == p.family_key()) {
            Some(g) => {
                g.0 = g.0.min(date);
                g.2.push(p.id.clone());
            }
            None => groups.push((date, p.family_key().to_owned(), vec![p.id.clone()])),
        }
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));

    let mut included: Vec<&str> = Vec::new();
    let mut points = Vec::with_capacity(groups.len());
    for (date, _, members) in &groups {
        included.extend(members.iter().map(String::as_str));
        // feature columns follow tensor order so the last point equals AutoOnly
        let features: Vec<&str> = autos
            .iter()
            .map(String::as_str)
            .filter(|id| included.contains(id))
            .collect();
        let design = design_from_features(tensor, target, &features, config.mode)?;
        let cv = kfold_cv(&design, &config.regressor, config.folds, config.seed)?;
        points.push(TimelinePoint {
            release_date: *date,
            added: members.clone(),
            feature_ids: design.feature_ids,
            fold_tau: cv.fold_tau,
            mean_tau: cv.mean_tau,
        });
    }
    Ok(Timeline {
        target_id: target.to_owned(),
        config: *config,
        points,
    })
}

/// Human metrics of a tensor, in tensor order.
pub fn human_ids(tensor: &ScoreTensor) -> Vec<String> {
    tensor
        .metrics()
        .iter()
        .filter(|p| p.kind == MetricKind::Human)
        .map(|p| p.id.clone())
        .collect()
}
