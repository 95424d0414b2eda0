//! Kemeny consensus by branch-and-bound, Borda consensus, and a randomized
//! audit of the Borda approximation ratio.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ranking::{kendall_distance, RankVector, RankingError};

/// Largest item count accepted by the exact solver.
pub const MAX_EXACT_ITEMS: usize = 10;

/// Approximation factor guaranteed for Borda consensus.
pub const BORDA_BOUND: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KemenyError {
    #[error("exact Kemeny search is capped at {MAX_EXACT_ITEMS} items, got {0}")]
    InstanceTooLarge(usize),
    #[error("a ranking family needs at least one member")]
    EmptyFamily,
    #[error("member {0} is not a permutation of 1..={1}")]
    NotAPermutation(usize, usize),
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

/// `p >= 1` tie-free rankings of the same `L` items.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingFamily {
    members: Vec<RankVector>,
    len: usize,
}

impl RankingFamily {
    pub fn new(members: Vec<RankVector>) -> Result<Self, KemenyError> {
        let len = members.first().ok_or(KemenyError::EmptyFamily)?.len();
        for (i, m) in members.iter().enumerate() {
            if m.len() != len || !m.is_permutation() {
                return Err(KemenyError::NotAPermutation(i, len));
            }
        }
        Ok(Self { members, len })
    }

    /// Builds a family from 1-based rank permutations.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self, KemenyError> {
        Self::new(perms.iter().map(|p| RankVector::from_permutation(p)).collect())
    }

    pub fn members(&self) -> &[RankVector] {
        &self.members
    }

    /// Number of ranked items `L`.
    pub fn item_count(&self) -> usize {
        self.len
    }

    /// `prefer[i][j]` = number of members ranking item `i` above item `j`.
    fn preference_counts(&self) -> Vec<Vec<u64>> {
        let l = self.len;
        let mut prefer = vec![vec![0u64; l]; l];
        for m in &self.members {
            let r = m.as_slice();
            for i in 0..l {
                for j in 0..l {
                    if r[i] < r[j] {
                        prefer[i][j] += 1;
                    }
                }
            }
        }
        prefer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsensusMethod {
    Exact,
    Borda,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsensusResult {
    pub consensus: RankVector,
    pub cost: u64,
    pub method: ConsensusMethod,
}

/// Total Kendall distance from `candidate` to every member.
pub fn family_cost(candidate: &RankVector, family: &RankingFamily) -> Result<u64, KemenyError> {
    if candidate.len() != family.len {
        return Err(RankingError::LengthMismatch(candidate.len(), family.len).into());
    }
    if family.len < 2 {
        return Ok(0);
    }
    family
        .members
        .iter()
        .map(|m| kendall_distance(candidate, m).map_err(KemenyError::from))
        .sum()
}

struct Search<'a> {
    prefer: &'a [Vec<u64>],
    len: usize,
    order: Vec<usize>,
    placed: Vec<bool>,
    best_cost: u64,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    /// Admissible bound: each unplaced pair costs at least its minority count.
    fn remaining_bound(&self) -> u64 {
        let mut bound = 0;
        for i in 0..self.len {
            if self.placed[i] {
                continue;
            }
            for j in i + 1..self.len {
                if !self.placed[j] {
                    bound += self.prefer[i][j].min(self.prefer[j][i]);
                }
            }
        }
        bound
    }

    fn ranks_of(&self, order: &[usize]) -> Vec<usize> {
        let mut ranks = vec![0; self.len];
        for (pos, &item) in order.iter().enumerate() {
            ranks[item] = pos + 1;
        }
        ranks
    }

    fn descend(&mut self, cost: u64) {
        if self.order.len() == self.len {
            let ranks = self.ranks_of(&self.order);
            let better = match &self.best {
                None => true,
                Some(best) => cost < self.best_cost || (cost == self.best_cost && ranks < *best),
            };
            if better {
                self.best_cost = cost;
                self.best = Some(ranks);
            }
            return;
        }
        if cost + self.remaining_bound() > self.best_cost {
            return;
        }
        for item in 0..self.len {
            if self.placed[item] {
                continue;
            }
            // placing `item` next puts it above every other unplaced item
            let added: u64 = (0..self.len)
                .filter(|&j| j != item && !self.placed[j])
                .map(|j| self.prefer[j][item])
                .sum();
            self.placed[item] = true;
            self.order.push(item);
            self.descend(cost + added);
            self.order.pop();
            self.placed[item] = false;
        }
    }
}

/// A Kemeny consensus: a permutation minimizing [`family_cost`]. Among
/// co-optimal permutations the lexicographically smallest rank vector wins.
pub fn exact_kemeny(family: &RankingFamily) -> Result<ConsensusResult, KemenyError> {
    let l = family.len;
    if l > MAX_EXACT_ITEMS {
        return Err(KemenyError::InstanceTooLarge(l));
    }
    let prefer = family.preference_counts();
    let borda = borda_consensus(family)?;
    let mut search = Search {
        prefer: &prefer,
        len: l,
        order: Vec::with_capacity(l),
        placed: vec![false; l],
        // Borda seeds the incumbent cost; ties are still explored.
        best_cost: borda.cost,
        best: None,
    };
    search.descend(0);
    let ranks = search.best.expect("the Borda cost is always attainable");
    let consensus = RankVector::from_permutation(&ranks);
    let cost = family_cost(&consensus, family)?;
    debug_assert_eq!(cost, search.best_cost);
    Ok(ConsensusResult {
        consensus,
        cost,
        method: ConsensusMethod::Exact,
    })
}

/// Orders items by ascending rank sum, breaking ties by item index.
pub fn borda_consensus(family: &RankingFamily) -> Result<ConsensusResult, KemenyError> {
    let l = family.len;
    let mut sums = vec![0.0; l];
    for m in &family.members {
        for (s, r) in sums.iter_mut().zip(m.as_slice()) {
            *s += r;
        }
    }
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| sums[a].total_cmp(&sums[b]).then(a.cmp(&b)));
    let mut ranks = vec![0; l];
    for (pos, &item) in order.iter().enumerate() {
        ranks[item] = pos + 1;
    }
    let consensus = RankVector::from_permutation(&ranks);
    let cost = family_cost(&consensus, family)?;
    Ok(ConsensusResult {
        consensus,
        cost,
        method: ConsensusMethod::Borda,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Approximation {
    /// `borda_cost / exact_cost` for a positive exact cost.
    Ratio { value: f64, borda_cost: u64, exact_cost: u64 },
    /// Exact and Borda consensus both cost zero (unanimous family).
    ExactZero,
    /// Exact cost zero but Borda cost positive.
    Unbounded { borda_cost: u64 },
}

impl Approximation {
    pub fn within(&self, bound: f64) -> bool {
        match *self {
            Approximation::Ratio { value, .. } => value <= bound,
            Approximation::ExactZero => true,
            Approximation::Unbounded { .. } => false,
        }
    }
}

pub fn approximation_ratio(family: &RankingFamily) -> Result<Approximation, KemenyError> {
    let exact = exact_kemeny(family)?;
    let borda = borda_consensus(family)?;
    Ok(match (exact.cost, borda.cost) {
        (0, 0) => Approximation::ExactZero,
        (0, b) => Approximation::Unbounded { borda_cost: b },
        (e, b) => Approximation::Ratio {
            value: b as f64 / e as f64,
            borda_cost: b,
            exact_cost: e,
        },
    })
}

/// Uniformly random family with `voters` members over `items` items.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, voters: usize, items: usize) -> RankingFamily {
    let mut members = Vec::with_capacity(voters);
    for _ in 0..voters {
        let mut perm: Vec<usize> = (1..=items).collect();
        perm.shuffle(rng);
        members.push(RankVector::from_permutation(&perm));
    }
    RankingFamily::new(members).expect("shuffled permutations are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct AuditConfig {
    pub samples: usize,
    pub max_voters: usize,
    pub max_items: usize,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            samples: 10_000,
            max_voters: 7,
            max_items: 6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditViolation {
    pub sample: usize,
    pub members: Vec<RankVector>,
    pub outcome: Approximation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub bound: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub ratio_samples: usize,
    pub exact_zero: usize,
    pub borda_optimal: usize,
    pub violations: Vec<AuditViolation>,
}

/// Samples families with `1..=max_voters` members over `2..=max_items`
/// items and compares Borda against the exact consensus on each.
pub fn audit(config: &AuditConfig) -> Result<AuditReport, KemenyError> {
    if config.max_items > MAX_EXACT_ITEMS {
        return Err(KemenyError::InstanceTooLarge(config.max_items));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut max_ratio: f64 = 1.0;
    let mut ratio_sum = 0.0;
    let mut ratio_samples = 0;
    let mut exact_zero = 0;
    let mut borda_optimal = 0;
    let mut violations = Vec::new();
    for sample in 0..config.samples {
        let voters = rng.random_range(1..=config.max_voters.max(1));
        let items = rng.random_range(2..=config.max_items.max(2));
        let family = random_family(&mut rng, voters, items);
        let outcome = approximation_ratio(&family)?;
        match outcome {
            Approximation::Ratio { value, .. } => {
                max_ratio = max_ratio.max(value);
                ratio_sum += value;
                ratio_samples += 1;
                if value == 1.0 {
                    borda_optimal += 1;
                }
            }
            Approximation::ExactZero => {
                exact_zero += 1;
                borda_optimal += 1;
            }
            Approximation::Unbounded { .. } => max_ratio = f64::INFINITY,
        }
        if !outcome.within(BORDA_BOUND) {
            violations.push(AuditViolation {
                sample,
                members: family.members.clone(),
                outcome,
            });
        }
    }
    Ok(AuditReport {
        config: *config,
        bound: BORDA_BOUND,
        max_ratio,
        mean_ratio: if ratio_samples > 0 {
            ratio_sum / ratio_samples as f64
        } else {
            1.0
        },
        ratio_samples,
        exact_zero,
        borda_optimal,
        violations,
    })
}
