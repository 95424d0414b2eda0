//! Geometry of the metric space: PCA of Borda representations and Louvain
//! clustering of the complementarity-derived similarity graph.

mod louvain;
mod pca;

pub use louvain::{louvain, modularity, ClusterAssignment, LouvainResult, WeightedGraph};
pub use pca::{effective_dimension, pca, PcaResult};

use serde::Serialize;

use crate::complementarity::ComplementarityMatrix;
use crate::ranking::{representation, Level};
use crate::scoreset::{MetricKind, ScoreTensor};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructureError {
    #[error("PCA needs at least two metrics, got {0}")]
    TooFewRows(usize),
    #[error("every column has zero variance")]
    DegenerateMatrix,
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("ragged matrix: row {0} has {1} columns, expected {2}")]
    Ragged(usize, usize, usize),
}

/// One row per metric: its Borda representation at the chosen level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricMatrix {
    pub metric_ids: Vec<String>,
    pub kinds: Vec<MetricKind>,
    pub level: Level,
    pub data: Vec<Vec<f64>>,
}

impl MetricMatrix {
    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }
}

pub fn build_metric_matrix(tensor: &ScoreTensor, level: Level) -> MetricMatrix {
    let data = tensor
        .metrics()
        .iter()
        .map(|p| {
            representation(tensor, &p.id, level)
                .expect("metric taken from the tensor itself")
                .values
        })
        .collect();
    MetricMatrix {
        metric_ids: tensor.metrics().iter().map(|p| p.id.clone()).collect(),
        kinds: tensor.metrics().iter().map(|p| p.kind).collect(),
        level,
        data,
    }
}

/// Complete graph over metrics weighted by `1 - complementarity`; edges of
/// weight zero are omitted.
pub fn similarity_graph(matrix: &ComplementarityMatrix) -> WeightedGraph {
    let n = matrix.len();
    let mut graph = WeightedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let w = 1.0 - matrix.values[i][j];
            if w > 0.0 {
                graph.add_edge(i, j, w);
            }
        }
    }
    graph
}
