//! Lasso by cyclic coordinate descent on standardized features.
//!
//! Objective: `(1/2P) * ||y - b - Xw||^2 + alpha * ||w||_1` where each column
//! of `X` has zero mean and unit population variance. The intercept is not
//! penalized, so it is the target mean.

use serde::{Deserialize, Serialize};

use super::{PredictionError, RegressionDesign};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LassoConfig {
    pub alpha: f64,
    /// Maximum number of full sweeps over the coordinates.
    pub max_iter: usize,
    /// Stop once the largest coordinate change in a sweep falls below this.
    pub tol: f64,
}

impl Default for LassoConfig {
    /// A light penalty: a fully shrunk model predicts a constant, and a
    /// constant ranking has no discordant pairs, so its test tau reads 1.
    fn default() -> Self {
        Self {
            alpha: 1e-4,
            max_iter: 10_000,
            tol: 1e-10,
        }
    }
}

impl LassoConfig {
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }
}

pub fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LassoModel {
    /// Weights on the standardized features.
    pub weights: Vec<f64>,
    /// Intercept on the standardized scale (the training target mean).
    pub intercept: f64,
    pub alpha: f64,
    pub feature_means: Vec<f64>,
    /// Population standard deviations; 1 for constant columns.
    pub feature_scales: Vec<f64>,
    /// Columns with zero variance, whose weight is pinned to 0.
    pub constant: Vec<bool>,
    pub converged: bool,
    pub iterations: usize,
}

impl LassoModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut y = self.intercept;
        for (j, x) in row.iter().enumerate() {
            if self.weights[j] != 0.0 {
                y += self.weights[j] * (x - self.feature_means[j]) / self.feature_scales[j];
            }
        }
        y
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        rows.iter().map(|r| self.predict_row(r)).collect()
    }

    /// Weights on the original feature scale.
    pub fn raw_weights(&self) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.feature_scales)
            .map(|(w, s)| w / s)
            .collect()
    }

    pub fn raw_intercept(&self) -> f64 {
        self.intercept
            - self
                .raw_weights()
                .iter()
                .zip(&self.feature_means)
                .map(|(w, m)| w * m)
                .sum::<f64>()
    }
}

/// Column-major standardized copy of a design.
pub(crate) struct Standardized {
    pub columns: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
    pub constant: Vec<bool>,
    pub y_mean: f64,
    pub y_centered: Vec<f64>,
}

impl Standardized {
    pub fn new(features: &[Vec<f64>], target: &[f64]) -> Self {
        let p = target.len() as f64;
        let f = features.first().map_or(0, Vec::len);
        let mut columns = Vec::with_capacity(f);
        let mut means = Vec::with_capacity(f);
        let mut scales = Vec::with_capacity(f);
        let mut constant = Vec::with_capacity(f);
        for j in 0..f {
            let col: Vec<f64> = features.iter().map(|r| r[j]).collect();
            let mean = col.iter().sum::<f64>() / p;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / p;
            let sd = var.sqrt();
            let is_constant = sd <= f64::EPSILON * (1.0 + mean.abs());
            let scale = if is_constant { 1.0 } else { sd };
            columns.push(
                col.iter()
                    .map(|v| if is_constant { 0.0 } else { (v - mean) / scale })
                    .collect(),
            );
            means.push(mean);
            scales.push(scale);
            constant.push(is_constant);
        }
        let y_mean = target.iter().sum::<f64>() / p;
        Self {
            columns,
            means,
            scales,
            constant,
            y_mean,
            y_centered: target.iter().map(|y| y - y_mean).collect(),
        }
    }

    fn rows(&self) -> usize {
        self.y_centered.len()
    }

    /// `max_j |<x_j, y - mean(y)>| / P`.
    pub fn alpha_max(&self) -> f64 {
        let p = self.rows() as f64;
        self.columns
            .iter()
            .map(|c| dot(c, &self.y_centered).abs() / p)
            .fold(0.0, f64::max)
    }

    pub fn residual(&self, weights: &[f64]) -> Vec<f64> {
        let mut r = self.y_centered.clone();
        for (c, w) in self.columns.iter().zip(weights) {
            if *w != 0.0 {
                for (ri, xi) in r.iter_mut().zip(c) {
                    *ri -= w * xi;
                }
            }
        }
        r
    }

    pub fn fit(&self, config: &LassoConfig, warm: Option<&[f64]>) -> LassoModel {
        let p = self.rows() as f64;
        let f = self.columns.len();
        let mut w = warm.map_or_else(|| vec![0.0; f], <[f64]>::to_vec);
        for (wj, c) in w.iter_mut().zip(&self.constant) {
            if *c {
                *wj = 0.0;
            }
        }
        let norms: Vec<f64> = self.columns.iter().map(|c| dot(c, c) / p).collect();
        let mut r = self.residual(&w);
        let mut converged = false;
        let mut iterations = 0;
        while iterations < config.max_iter {
            iterations += 1;
            let mut max_step: f64 = 0.0;
            for j in 0..f {
                if self.constant[j] {
                    continue;
                }
                let col = &self.columns[j];
                let rho = dot(col, &r) / p + norms[j] * w[j];
                let updated = soft_threshold(rho, config.alpha) / norms[j];
                let step = updated - w[j];
                if step != 0.0 {
                    for (ri, xi) in r.iter_mut().zip(col) {
                        *ri -= step * xi;
                    }
                    w[j] = updated;
                    max_step = max_step.max(step.abs());
                }
            }
            if max_step < config.tol {
                converged = true;
                break;
            }
        }
        if !converged {
            log::warn!(
                "lasso did not converge in {} sweeps (alpha = {})",
                config.max_iter,
                config.alpha
            );
        }
        LassoModel {
            weights: w,
            intercept: self.y_mean,
            alpha: config.alpha,
            feature_means: self.means.clone(),
            feature_scales: self.scales.clone(),
            constant: self.constant.clone(),
            converged,
            iterations,
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn fit_rows(features: &[Vec<f64>], target: &[f64], config: &LassoConfig) -> LassoModel {
    Standardized::new(features, target).fit(config, None)
}

pub fn lasso_fit(design: &RegressionDesign, config: &LassoConfig) -> LassoModel {
    fit_rows(&design.features, &design.target, config)
}

/// Smallest `alpha` at which every weight is zero.
pub fn alpha_max(design: &RegressionDesign) -> f64 {
    Standardized::new(&design.features, &design.target).alpha_max()
}

/// Largest violation of the lasso optimality conditions, measured on the
/// standardized problem.
pub fn kkt_residual(design: &RegressionDesign, model: &LassoModel) -> f64 {
    let s = Standardized::new(&design.features, &design.target);
    let p = design.rows() as f64;
    let r = s.residual(&model.weights);
    let mut worst: f64 = 0.0;
    for (j, col) in s.columns.iter().enumerate() {
        if s.constant[j] {
            worst = worst.max(model.weights[j].abs());
            continue;
        }
        let grad = dot(col, &r) / p;
        let w = model.weights[j];
        let violation = if w != 0.0 {
            (grad - model.alpha * w.signum()).abs()
        } else {
            (grad.abs() - model.alpha).max(0.0)
        };
        worst = worst.max(violation);
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LassoPath {
    pub feature_ids: Vec<String>,
    pub alphas: Vec<f64>,
    /// Standardized weights, one vector per alpha.
    pub weights: Vec<Vec<f64>>,
    pub converged: Vec<bool>,
}

pub(crate) fn check_grid(alphas: &[f64]) -> Result<(), PredictionError> {
    let ok = !alphas.is_empty()
        && alphas.iter().all(|a| a.is_finite() && *a >= 0.0)
        && alphas.windows(2).all(|w| w[0] >= w[1]);
    if ok {
        Ok(())
    } else {
        Err(PredictionError::BadAlphaGrid)
    }
}

pub(crate) fn path_models(
    s: &Standardized,
    alphas: &[f64],
    base: &LassoConfig,
) -> Result<Vec<LassoModel>, PredictionError> {
    check_grid(alphas)?;
    let mut models: Vec<LassoModel> = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let warm = models.last().map(|m| m.weights.as_slice());
        models.push(s.fit(&base.with_alpha(alpha), warm));
    }
    Ok(models)
}

/// Warm-started fits along a descending `alphas` grid.
pub fn lasso_path(
    design: &RegressionDesign,
    alphas: &[f64],
    base: &LassoConfig,
) -> Result<LassoPath, PredictionError> {
    let s = Standardized::new(&design.features, &design.target);
    let models = path_models(&s, alphas, base)?;
    Ok(LassoPath {
        feature_ids: design.feature_ids.clone(),
        alphas: alphas.to_vec(),
        converged: models.iter().map(|m| m.converged).collect(),
        weights: models.into_iter().map(|m| m.weights).collect(),
    })
}
