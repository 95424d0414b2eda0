use nalgebra::DMatrix;
use serde::Serialize;

use super::{MetricMatrix, StructureError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcaResult {
    /// Share of total variance per component, non-increasing, summing to 1.
    pub explained_ratio: Vec<f64>,
    /// Variance along each component (covariance eigenvalues).
    pub variances: Vec<f64>,
    /// Unit principal axes, expressed over `kept_columns`.
    pub components: Vec<Vec<f64>>,
    /// Coordinates of every row on every component.
    pub scores: Vec<Vec<f64>>,
    /// First two coordinates of every row (zero-padded).
    pub scores2d: Vec<[f64; 2]>,
    pub kept_columns: Vec<usize>,
    pub dropped_columns: Vec<usize>,
    pub standardized: bool,
}

impl PcaResult {
    /// `scores * components^T`, i.e. the centered (and scaled) input over
    /// the kept columns when every component is used.
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let d = self.kept_columns.len();
        self.scores
            .iter()
            .map(|row| {
                let mut out = vec![0.0; d];
                for (s, comp) in row.iter().zip(&self.components) {
                    for (o, c) in out.iter_mut().zip(comp) {
                        *o += s * c;
                    }
                }
                out
            })
            .collect()
    }
}

/// Centers the columns (and scales them to unit variance with
/// `standardize`), drops zero-variance columns, and returns the
/// eigen-structure of the column covariance.
///
/// The decomposition is taken from the SVD of the centered data, which
/// yields the covariance eigenpairs without forming `X^T X`.
pub fn pca(matrix: &MetricMatrix, standardize: bool) -> Result<PcaResult, StructureError> {
    let m = matrix.rows();
    if m < 2 {
        return Err(StructureError::TooFewRows(m));
    }
    let d = matrix.cols();
    for (i, row) in matrix.data.iter().enumerate() {
        if row.len() != d {
            return Err(StructureError::Ragged(i, row.len(), d));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(StructureError::NonFinite);
        }
    }

    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for j in 0..d {
        let col: Vec<f64> = matrix.data.iter().map(|r| r[j]).collect();
        let mean = col.iter().sum::<f64>() / m as f64;
        let centered: Vec<f64> = col.iter().map(|v| v - mean).collect();
        let var = centered.iter().map(|v| v * v).sum::<f64>() / (m - 1) as f64;
        if var <= f64::EPSILON * f64::EPSILON * (1.0 + mean * mean) {
            dropped.push(j);
            continue;
        }
        let scale = if standardize { var.sqrt() } else { 1.0 };
        kept.push(j);
        columns.push(centered.into_iter().map(|v| v / scale).collect());
    }
    if kept.is_empty() {
        return Err(StructureError::DegenerateMatrix);
    }
    if standardize && !dropped.is_empty() {
        log::warn!("dropped {} zero-variance column(s) before standardizing", dropped.len());
    }

    let x = DMatrix::from_fn(m, kept.len(), |i, j| columns[j][i]);
    let svd = x.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .total_cmp(&svd.singular_values[a])
            .then(a.cmp(&b))
    });

    let variances: Vec<f64> = order
        .iter()
        .map(|&i| svd.singular_values[i].powi(2) / (m - 1) as f64)
        .collect();
    let total: f64 = variances.iter().sum();
    if total <= 0.0 {
        return Err(StructureError::DegenerateMatrix);
    }
    let explained_ratio = variances.iter().map(|v| v / total).collect();

    let components: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut axis: Vec<f64> = v_t.row(i).iter().copied().collect();
            let lead = axis
                .iter()
                .enumerate()
                .fold(0, |best, (j, v)| if v.abs() > axis[best].abs() { j } else { best });
            if axis[lead] < 0.0 {
                axis.iter_mut().for_each(|v| *v = -*v);
            }
            axis
        })
        .collect();

    let scores: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            components
                .iter()
                .map(|axis| axis.iter().enumerate().map(|(j, a)| a * x[(i, j)]).sum())
                .collect()
        })
        .collect();
    let scores2d = scores
        .iter()
        .map(|s: &Vec<f64>| [s[0], s.get(1).copied().unwrap_or(0.0)])
        .collect();

    Ok(PcaResult {
        explained_ratio,
        variances,
        components,
        scores,
        scores2d,
        kept_columns: kept,
        dropped_columns: dropped,
        standardized: standardize,
    })
}

/// Smallest number of leading components whose cumulative share reaches
/// `threshold`.
pub fn effective_dimension(ratios: &[f64], threshold: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, r) in ratios.iter().enumerate() {
        cumulative += r;
        if cumulative >= threshold - 1e-12 {
            return i + 1;
        }
    }
    ratios.len()
}
