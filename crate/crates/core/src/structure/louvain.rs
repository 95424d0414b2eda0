use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Undirected weighted graph stored as symmetric adjacency maps. A self
/// loop of weight `w` contributes `w` to the node's degree.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    adjacency: Vec<BTreeMap<usize, f64>>,
}

impl WeightedGraph {
    pub fn new(nodes: usize) -> Self {
        Self {
            adjacency: vec![BTreeMap::new(); nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Adds `w` to the edge `{a, b}`. Negative or non-finite weights panic.
    pub fn add_edge(&mut self, a: usize, b: usize, w: f64) {
        assert!(w.is_finite() && w >= 0.0, "edge weights must be finite and nonnegative");
        *self.adjacency[a].entry(b).or_insert(0.0) += w;
        if a != b {
            *self.adjacency[b].entry(a).or_insert(0.0) += w;
        }
    }

    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.adjacency[a].get(&b).copied().unwrap_or(0.0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains_key(&b)
    }

    pub fn edge_count(&self) -> usize {
        let loops = (0..self.node_count()).filter(|&i| self.has_edge(i, i)).count();
        (self.adjacency.iter().map(BTreeMap::len).sum::<usize>() + loops) / 2
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency[node].iter().map(|(&j, &w)| (j, w))
    }

    fn degree(&self, node: usize) -> f64 {
        self.adjacency[node].values().sum()
    }

    /// Sum of all degrees (`2m`).
    fn total_degree(&self) -> f64 {
        (0..self.node_count()).map(|i| self.degree(i)).sum()
    }

    /// Collapses each community into one node; internal weight becomes a
    /// self loop.
    fn aggregate(&self, community: &[usize], count: usize) -> Self {
        let mut out = Self::new(count);
        for (i, adj) in self.adjacency.iter().enumerate() {
            for (&j, &w) in adj {
                let (ci, cj) = (community[i], community[j]);
                // each off-diagonal entry is visited from both ends
                *out.adjacency[ci].entry(cj).or_insert(0.0) += w;
            }
        }
        out
    }
}

/// Newman modularity of a labelling, with resolution `gamma`.
pub fn modularity(graph: &WeightedGraph, labels: &[usize], gamma: f64) -> f64 {
    let two_m = graph.total_degree();
    if two_m <= 0.0 {
        return 0.0;
    }
    let groups = labels.iter().max().map_or(0, |m| m + 1);
    let mut internal = vec![0.0; groups];
    let mut total = vec![0.0; groups];
    for i in 0..graph.node_count() {
        total[labels[i]] += graph.degree(i);
        for (j, w) in graph.neighbors(i) {
            if labels[i] == labels[j] {
                internal[labels[i]] += w;
            }
        }
    }
    internal
        .iter()
        .zip(&total)
        .map(|(inside, tot)| inside / two_m - gamma * (tot / two_m).powi(2))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterAssignment {
    /// Cluster of each node, numbered from 0 in order of first appearance.
    pub labels: Vec<usize>,
    pub cluster_count: usize,
    pub modularity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LouvainResult {
    pub assignment: ClusterAssignment,
    /// Modularity on the input graph after each aggregation level.
    pub pass_modularity: Vec<f64>,
}

/// Moves single nodes between communities until no move strictly improves
/// modularity. Returns whether anything moved.
fn local_moves(graph: &WeightedGraph, community: &mut [usize], gamma: f64, order: &[usize]) -> bool {
    let n = graph.node_count();
    let two_m = graph.total_degree();
    let degree: Vec<f64> = (0..n).map(|i| graph.degree(i)).collect();
    let mut totals = vec![0.0; n];
    for i in 0..n {
        totals[community[i]] += degree[i];
    }
    let mut moved_any = false;
    loop {
        let mut moved = false;
        for &node in order {
            let home = community[node];
            totals[home] -= degree[node];
            let mut links: BTreeMap<usize, f64> = BTreeMap::new();
            links.insert(home, 0.0);
            for (j, w) in graph.neighbors(node) {
                if j != node {
                    *links.entry(community[j]).or_insert(0.0) += w;
                }
            }
            let gain = |c: usize, k_in: f64| k_in - gamma * totals[c] * degree[node] / two_m;
            let stay = gain(home, links[&home]);
            let mut best = (home, stay);
            // ascending community index; strict improvement only
            for (&c, &k_in) in &links {
                let g = gain(c, k_in);
                if g > best.1 + 1e-12 * (1.0 + best.1.abs()) {
                    best = (c, g);
                }
            }
            community[node] = best.0;
            totals[best.0] += degree[node];
            if best.0 != home {
                moved = true;
                moved_any = true;
            }
        }
        if !moved {
            return moved_any;
        }
    }
}

/// Renumbers labels to `0..count` by first appearance.
fn compact(labels: &mut [usize]) -> usize {
    let mut map = BTreeMap::new();
    let mut next = 0;
    for l in labels.iter_mut() {
        let id = *map.entry(*l).or_insert_with(|| {
            next += 1;
            next - 1
        });
        *l = id;
    }
    next
}

/// Two-phase Louvain: local moves followed by aggregation, repeated until
/// a level produces no move. Node visit order is a seeded shuffle.
pub fn louvain(graph: &WeightedGraph, resolution: f64, seed: u64) -> LouvainResult {
    let n = graph.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut level = graph.clone();
    let mut pass_modularity = Vec::new();
    if graph.total_degree() > 0.0 {
        loop {
            let size = level.node_count();
            let mut community: Vec<usize> = (0..size).collect();
            let mut order: Vec<usize> = (0..size).collect();
            order.shuffle(&mut rng);
            if !local_moves(&level, &mut community, resolution, &order) {
                break;
            }
            let count = compact(&mut community);
            for l in labels.iter_mut() {
                *l = community[*l];
            }
            pass_modularity.push(modularity(graph, &labels, resolution));
            if count == size {
                break;
            }
            level = level.aggregate(&community, count);
        }
    }
    let cluster_count = compact(&mut labels);
    let q = modularity(graph, &labels, resolution);
    LouvainResult {
        assignment: ClusterAssignment {
            labels,
            cluster_count,
            modularity: q,
        },
        pass_modularity,
    }
}
