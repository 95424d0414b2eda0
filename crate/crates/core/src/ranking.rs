//! Rankings induced by scores, Borda representations, and Kendall distance.
//!
//! Conventions: rank 1 is best; tied items share the mid-rank; a pair tied
//! in either ranking is never discordant, and normalization always divides
//! by `L(L-1)/2`. Under these conventions `tau = 1 - 2 * d_tau` exactly.

use std::cmp::Ordering;

use serde::Serialize;

use crate::scoreset::ScoreTensor;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankingError {
    #[error("rankings have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rankings need at least two items, got {0}")]
    TooShort(usize),
    #[error("metric `{0}` not in tensor")]
    UnknownMetric(String),
}

/// Ranks of `L` items; `ranks[i]` is the position of item `i` (1 = best).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RankVector(Vec<f64>);

impl RankVector {
    /// Wraps precomputed ranks without checking them.
    pub fn from_ranks(ranks: Vec<f64>) -> Self {
        Self(ranks)
    }

    /// Tie-free ranking from a 1-based permutation.
    pub fn from_permutation(perm: &[usize]) -> Self {
        Self(perm.iter().map(|&r| r as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn has_ties(&self) -> bool {
        has_ties(&self.0)
    }

    /// `true` when the ranks are exactly a permutation of `1..=L`.
    pub fn is_permutation(&self) -> bool {
        let l = self.0.len();
        let mut seen = vec![false; l];
        self.0.iter().all(|&r| {
            if r.fract() != 0.0 || r < 1.0 || r > l as f64 {
                return false;
            }
            let i = r as usize - 1;
            !std::mem::replace(&mut seen[i], true)
        })
    }

    /// The same ranking read from the other end.
    pub fn reversed(&self) -> Self {
        let top = self.0.len() as f64 + 1.0;
        Self(self.0.iter().map(|r| top - r).collect())
    }
}

fn has_ties(values: &[f64]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Ranks scores so that the largest gets rank 1; equal scores share the
/// average of the positions they span.
pub fn rank_slice(scores: &[f64]) -> RankVector {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; scores.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end share their mean
        let mid = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = mid;
        }
        start = end;
    }
    RankVector(ranks)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// One value per system: ranks summed over utterances.
    System,
    /// One value per utterance: ranks summed over systems.
    Utterance,
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Level::System => "system",
            Level::Utterance => "utterance",
        })
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "system" => Ok(Level::System),
            "utterance" => Ok(Level::Utterance),
            other => Err(format!("unknown level `{other}` (expected system|utterance)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BordaRepresentation {
    pub values: Vec<f64>,
    pub level: Level,
    pub metric_id: String,
}

/// Elementwise sum of the rankings of each slice.
pub fn sum_of_ranks<'a, I>(slices: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut total: Vec<f64> = Vec::new();
    for slice in slices {
        let ranks = rank_slice(slice);
        if total.is_empty() {
            total = ranks.into_inner();
        } else {
            for (t, r) in total.iter_mut().zip(ranks.as_slice()) {
                *t += r;
            }
        }
    }
    total
}

/// Sum over utterances of each system's rank.
pub fn system_representation(
    tensor: &ScoreTensor,
    metric_id: &str,
) -> Result<BordaRepresentation, RankingError> {
    let m = tensor
        .metric_index(metric_id)
        .ok_or_else(|| RankingError::UnknownMetric(metric_id.to_owned()))?;
    let (_, _, k) = tensor.shape();
    let columns: Vec<Vec<f64>> = (0..k).map(|u| tensor.utterance_column(m, u)).collect();
    Ok(BordaRepresentation {
        values: sum_of_ranks(columns.iter().map(Vec::as_slice)),
        level: Level::System,
        metric_id: metric_id.to_owned(),
    })
}

/// Sum over systems of each utterance's rank.
pub fn utterance_representation(
    tensor: &ScoreTensor,
    metric_id: &str,
) -> Result<BordaRepresentation, RankingError> {
    let m = tensor
        .metric_index(metric_id)
        .ok_or_else(|| RankingError::UnknownMetric(metric_id.to_owned()))?;
    let (_, n, _) = tensor.shape();
    Ok(BordaRepresentation {
        values: sum_of_ranks((0..n).map(|s| tensor.system_row(m, s))),
        level: Level::Utterance,
        metric_id: metric_id.to_owned(),
    })
}

pub fn representation(
    tensor: &ScoreTensor,
    metric_id: &str,
    level: Level,
) -> Result<BordaRepresentation, RankingError> {
    match level {
        Level::System => system_representation(tensor, metric_id),
        Level::Utterance => utterance_representation(tensor, metric_id),
    }
}

fn check_pair(a: &RankVector, b: &RankVector) -> Result<usize, RankingError> {
    if a.len() != b.len() {
        return Err(RankingError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(RankingError::TooShort(a.len()));
    }
    Ok(a.len())
}

/// Number of pairs ordered strictly oppositely by `a` and `b`.
///
/// Tie-free inputs go through merge-based inversion counting; inputs with
/// ties fall back to pairwise enumeration.
pub fn kendall_distance(a: &RankVector, b: &RankVector) -> Result<u64, RankingError> {
    check_pair(a, b)?;
    if a.has_ties() || b.has_ties() {
        Ok(discordant_pairs_quadratic(a.as_slice(), b.as_slice()))
    } else {
        Ok(discordant_pairs_merge(a.as_slice(), b.as_slice()))
    }
}

fn discordant_pairs_quadratic(a: &[f64], b: &[f64]) -> u64 {
    let mut count = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] - a[j]) * (b[i] - b[j]) < 0.0 {
                count += 1;
            }
        }
    }
    count
}

fn discordant_pairs_merge(a: &[f64], b: &[f64]) -> u64 {
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[i].total_cmp(&a[j]));
    let mut seq: Vec<f64> = order.iter().map(|&i| b[i]).collect();
    let mut scratch = vec![0.0; seq.len()];
    count_inversions(&mut seq, &mut scratch)
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn count_inversions(v: &mut [f64], scratch: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = v.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        count_inversions(left, sl) + count_inversions(right, sr)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j].total_cmp(&v[i]) == Ordering::Less {
            scratch[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        } else {
            scratch[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    scratch[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    scratch[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&scratch[..n]);
    count
}

pub fn pair_count(len: usize) -> u64 {
    (len as u64) * (len as u64 - 1) / 2
}

/// Kendall distance divided by the number of pairs.
pub fn normalized_kendall(a: &RankVector, b: &RankVector) -> Result<f64, RankingError> {
    let d = kendall_distance(a, b)?;
    Ok(d as f64 / pair_count(a.len()) as f64)
}

/// Kendall's tau as `1 - 2 * normalized_kendall`.
pub fn kendall_tau(a: &RankVector, b: &RankVector) -> Result<f64, RankingError> {
    Ok(1.0 - 2.0 * normalized_kendall(a, b)?)
}
