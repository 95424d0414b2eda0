//! Gradient-boosted regression trees on squared loss with exact greedy
//! splits.

use serde::{Deserialize, Serialize};

use super::RegressionDesign;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbtConfig {
    pub rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_samples_leaf: usize,
}

impl Default for GbtConfig {
    fn default() -> Self {
        Self {
            rounds: 200,
            max_depth: 3,
            learning_rate: 0.1,
            min_samples_leaf: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionTree {
    nodes: Vec<Node>,
}

impl RegressionTree {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    /// A tree without any split.
    pub fn is_stump_leaf(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf(_))).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoostedTreesModel {
    pub base_prediction: f64,
    pub learning_rate: f64,
    pub trees: Vec<RegressionTree>,
    /// Training MSE before the first tree and after each one.
    pub train_mse: Vec<f64>,
}

impl BoostedTreesModel {
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.base_prediction
            + self
                .trees
                .iter()
                .map(|t| self.learning_rate * t.predict_row(row))
                .sum::<f64>()
    }

    pub fn predict(&self, rows: &[Vec<f64>]) -> Vec<f64> {
        rows.iter().map(|r| self.predict_row(r)).collect()
    }
}

struct TreeBuilder<'a> {
    features: &'a [Vec<f64>],
    residual: &'a [f64],
    /// Row indices sorted by each feature's value.
    sorted: &'a [Vec<usize>],
    config: &'a GbtConfig,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl TreeBuilder<'_> {
    fn best_split(&self, member: &[bool], count: usize, sum: f64) -> Option<BestSplit> {
        let min_leaf = self.config.min_samples_leaf.max(1);
        if count < 2 * min_leaf {
            return None;
        }
        let parent = sum * sum / count as f64;
        let scale: f64 = sum.abs() + 1.0;
        let mut best: Option<BestSplit> = None;
        for (f, order) in self.sorted.iter().enumerate() {
            let (mut left_n, mut left_sum) = (0usize, 0.0);
            let rows: Vec<usize> = order.iter().copied().filter(|&i| member[i]).collect();
            for w in rows.windows(2) {
                let (i, next) = (w[0], w[1]);
                left_n += 1;
                left_sum += self.residual[i];
                let (v, v_next) = (self.features[i][f], self.features[next][f]);
                if v == v_next || left_n < min_leaf || count - left_n < min_leaf {
                    continue;
                }
                let right_sum = sum - left_sum;
                let gain = left_sum * left_sum / left_n as f64
                    + right_sum * right_sum / (count - left_n) as f64
                    - parent;
                if gain > 1e-12 * scale * scale && best.as_ref().map_or(true, |b| gain > b.gain) {
                    let mid = v + (v_next - v) / 2.0;
                    let threshold = if mid < v_next { mid } else { v };
                    best = Some(BestSplit {
                        feature: f,
                        threshold,
                        gain,
                    });
                }
            }
        }
        best
    }

    fn grow(&mut self, member: Vec<bool>, depth: usize) -> usize {
        let (count, sum) = member
            .iter()
            .zip(self.residual)
            .filter(|(m, _)| **m)
            .fold((0usize, 0.0), |(n, s), (_, r)| (n + 1, s + r));
        let id = self.nodes.len();
        let leaf_value = if count == 0 { 0.0 } else { sum / count as f64 };
        self.nodes.push(Node::Leaf(leaf_value));
        if depth >= self.config.max_depth {
            return id;
        }
        let Some(split) = self.best_split(&member, count, sum) else {
            return id;
        };
        let goes_left: Vec<bool> = member
            .iter()
            .enumerate()
            .map(|(i, m)| *m && self.features[i][split.feature] <= split.threshold)
            .collect();
        let goes_right: Vec<bool> = member
            .iter()
            .zip(&goes_left)
            .map(|(m, l)| *m && !*l)
            .collect();
        let left = self.grow(goes_left, depth + 1);
        let right = self.grow(goes_right, depth + 1);
        self.nodes[id] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        id
    }
}

fn mse(residual: &[f64]) -> f64 {
    residual.iter().map(|r| r * r).sum::<f64>() / residual.len() as f64
}

pub(crate) fn fit_rows(features: &[Vec<f64>], target: &[f64], config: &GbtConfig) -> BoostedTreesModel {
    let p = target.len();
    let f = features.first().map_or(0, Vec::len);
    let base = target.iter().sum::<f64>() / p as f64;
    let mut residual: Vec<f64> = target.iter().map(|y| y - base).collect();
    let sorted: Vec<Vec<usize>> = (0..f)
        .map(|j| {
            let mut order: Vec<usize> = (0..p).collect();
            order.sort_by(|&a, &b| features[a][j].total_cmp(&features[b][j]).then(a.cmp(&b)));
            order
        })
        .collect();
    let mut trees = Vec::with_capacity(config.rounds);
    let mut train_mse = vec![mse(&residual)];
    for _ in 0..config.rounds {
        let mut builder = TreeBuilder {
            features,
            residual: &residual,
            sorted: &sorted,
            config,
            nodes: Vec::new(),
        };
        builder.grow(vec![true; p], 0);
        let tree = RegressionTree { nodes: builder.nodes };
        for (r, row) in residual.iter_mut().zip(features) {
            *r -= config.learning_rate * tree.predict_row(row);
        }
        train_mse.push(mse(&residual));
        trees.push(tree);
    }
    BoostedTreesModel {
        base_prediction: base,
        learning_rate: config.learning_rate,
        trees,
        train_mse,
    }
}

pub fn gbt_fit(design: &RegressionDesign, config: &GbtConfig) -> BoostedTreesModel {
    fit_rows(&design.features, &design.target, config)
}
