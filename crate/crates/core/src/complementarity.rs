//! Complementarity: how differently two metrics rank the systems, averaged
//! over utterances. 0 means identical per-utterance rankings, 1 means
//! reversed ones.

use serde::Serialize;

use crate::ranking::{normalized_kendall, rank_slice, RankVector, RankingError};
use crate::scoreset::{MetricKind, MetricProfile, ScoreTensor};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplementarityError {
    #[error("metric `{0}` not in tensor")]
    UnknownMetric(String),
    #[error("complementarity needs at least two systems, got {0}")]
    DegenerateSystems(usize),
    #[error("the comparison set is empty")]
    EmptySet,
    #[error("metric `{0}` cannot be compared against a set containing itself")]
    SelfInSet(String),
    #[error("a complementarity matrix needs at least two metrics, got {0}")]
    TooFewMetrics(usize),
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

/// Per-utterance system rankings of one metric.
fn utterance_rankings(tensor: &ScoreTensor, metric: usize) -> Vec<RankVector> {
    let (_, _, k) = tensor.shape();
    (0..k)
        .map(|u| rank_slice(&tensor.utterance_column(metric, u)))
        .collect()
}

fn mean_distance(a: &[RankVector], b: &[RankVector]) -> Result<f64, ComplementarityError> {
    let mut total = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        total += normalized_kendall(ra, rb)?;
    }
    Ok(total / a.len() as f64)
}

fn lookup(tensor: &ScoreTensor, id: &str) -> Result<usize, ComplementarityError> {
    let (_, n, _) = tensor.shape();
    if n < 2 {
        return Err(ComplementarityError::DegenerateSystems(n));
    }
    tensor
        .metric_index(id)
        .ok_or_else(|| ComplementarityError::UnknownMetric(id.to_owned()))
}

/// Mean over utterances of the normalized Kendall distance between the two
/// metrics' rankings of the systems.
pub fn pairwise(tensor: &ScoreTensor, m0: &str, m1: &str) -> Result<f64, ComplementarityError> {
    let a = lookup(tensor, m0)?;
    let b = lookup(tensor, m1)?;
    mean_distance(&utterance_rankings(tensor, a), &utterance_rankings(tensor, b))
}

/// Mean pairwise complementarity of `m0` against each metric in `others`.
pub fn vs_set(tensor: &ScoreTensor, m0: &str, others: &[&str]) -> Result<f64, ComplementarityError> {
    if others.is_empty() {
        return Err(ComplementarityError::EmptySet);
    }
    if others.contains(&m0) {
        return Err(ComplementarityError::SelfInSet(m0.to_owned()));
    }
    let base = utterance_rankings(tensor, lookup(tensor, m0)?);
    let mut total = 0.0;
    for other in others {
        let r = utterance_rankings(tensor, lookup(tensor, other)?);
        total += mean_distance(&base, &r)?;
    }
    Ok(total / others.len() as f64)
}

/// Symmetric matrix of pairwise complementarities; human metrics first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementarityMatrix {
    pub metric_ids: Vec<String>,
    pub kinds: Vec<MetricKind>,
    pub values: Vec<Vec<f64>>,
}

impl ComplementarityMatrix {
    pub fn len(&self) -> usize {
        self.metric_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric_ids.is_empty()
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.metric_ids.iter().position(|m| m == a)?;
        let j = self.metric_ids.iter().position(|m| m == b)?;
        Some(self.values[i][j])
    }

    /// Number of leading human metrics.
    pub fn human_count(&self) -> usize {
        self.kinds.iter().take_while(|k| **k == MetricKind::Human).count()
    }

    /// Square CSV with metric ids along both axes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric");
        for id in &self.metric_ids {
            out.push(',');
            out.push_str(&csv_field(id));
        }
        out.push('\n');
        for (id, row) in self.metric_ids.iter().zip(&self.values) {
            out.push_str(&csv_field(id));
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Human metrics first, then automatic ones, each in tensor order.
pub fn display_order(metrics: &[MetricProfile]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..metrics.len()).filter(|&i| metrics[i].is_human()).collect();
    order.extend((0..metrics.len()).filter(|&i| !metrics[i].is_human()));
    order
}

pub fn full_matrix(tensor: &ScoreTensor) -> Result<ComplementarityMatrix, ComplementarityError> {
    let (m, n, _) = tensor.shape();
    if m < 2 {
        return Err(ComplementarityError::TooFewMetrics(m));
    }
    if n < 2 {
        return Err(ComplementarityError::DegenerateSystems(n));
    }
    let order = display_order(tensor.metrics());
    let rankings: Vec<Vec<RankVector>> = order
        .iter()
        .map(|&mi| utterance_rankings(tensor, mi))
        .collect();
    let mut values = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let c = mean_distance(&rankings[i], &rankings[j])?;
            values[i][j] = c;
            values[j][i] = c;
        }
    }
    Ok(ComplementarityMatrix {
        metric_ids: order.iter().map(|&i| tensor.metrics()[i].id.clone()).collect(),
        kinds: order.iter().map(|&i| tensor.metrics()[i].kind).collect(),
        values,
    })
}

/// Mean and standard error of one group of off-diagonal pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStat {
    pub mean: f64,
    /// `None` with a single pair.
    pub sem: Option<f64>,
    pub pairs: Vec<f64>,
}

impl GroupStat {
    fn from_pairs(pairs: Vec<f64>) -> Option<Self> {
        if pairs.is_empty() {
            return None;
        }
        let n = pairs.len() as f64;
        let mean = pairs.iter().sum::<f64>() / n;
        let sem = (pairs.len() > 1).then(|| {
            let var = pairs.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        });
        Some(Self { mean, sem, pairs })
    }
}

/// Group averages; a group without any pair is `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub human_human: Option<GroupStat>,
    pub auto_auto: Option<GroupStat>,
    pub cross: Option<GroupStat>,
}

/// Splits the upper triangle by metric kinds taken from `profiles`; metrics
/// without a profile fall back to the kind recorded in the matrix.
pub fn group_summary(matrix: &ComplementarityMatrix, profiles: &[MetricProfile]) -> GroupSummary {
    let kind_of = |i: usize| {
        profiles
            .iter()
            .find(|p| p.id == matrix.metric_ids[i])
            .map_or(matrix.kinds[i], |p| p.kind)
    };
    let (mut hh, mut aa, mut cross) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..matrix.len() {
        for j in i + 1..matrix.len() {
            let v = matrix.values[i][j];
            match (kind_of(i), kind_of(j)) {
                (MetricKind::Human, MetricKind::Human) => hh.push(v),
                (MetricKind::Automatic, MetricKind::Automatic) => aa.push(v),
                _ => cross.push(v),
            }
        }
    }
    GroupSummary {
        human_human: GroupStat::from_pairs(hh),
        auto_auto: GroupStat::from_pairs(aa),
        cross: GroupStat::from_pairs(cross),
    }
}
