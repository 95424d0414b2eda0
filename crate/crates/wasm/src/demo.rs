use serde::Serialize;
use serde_json::json;

use rankcomp::complementarity::{full_matrix, group_summary};
use rankcomp::kemeny::{audit, AuditConfig};
use rankcomp::plot::{heatmap_svg, scatter_svg, ScatterPoint};
use rankcomp::structure::{build_metric_matrix, effective_dimension, louvain, pca, similarity_graph};
use rankcomp::synth::{generate, SynthConfig};
use rankcomp::{Level, MetricKind, ScoreTensor};

// keep a click in the page under a second or so
pub const MAX_UTTERANCES: usize = 400;
pub const MAX_SYSTEMS: usize = 30;
pub const MAX_SAMPLES: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub seed: u64,
    pub humans: usize,
    pub automatics: usize,
    pub systems: usize,
    pub utterances: usize,
    pub rho: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        let d = SynthConfig::default();
        Self {
            seed: d.seed,
            humans: d.humans,
            automatics: d.automatics,
            systems: d.systems,
            utterances: d.utterances,
            rho: d.rho,
        }
    }
}

fn tensor(p: &SynthParams) -> Result<ScoreTensor, String> {
    let bounded = |name: &str, v: usize, lo: usize, hi: usize| {
        if (lo..=hi).contains(&v) {
            Ok(())
        } else {
            Err(format!("{name} must be between {lo} and {hi}, got {v}"))
        }
    };
    bounded("humans", p.humans, 1, 6)?;
    bounded("automatic metrics", p.automatics, 1, 12)?;
    bounded("systems", p.systems, 2, MAX_SYSTEMS)?;
    bounded("utterances", p.utterances, 1, MAX_UTTERANCES)?;
    if !(-1.0..=1.0).contains(&p.rho) {
        return Err(format!("rho must lie in [-1, 1], got {}", p.rho));
    }
    let cfg = SynthConfig {
        humans: p.humans,
        automatics: p.automatics,
        systems: p.systems,
        utterances: p.utterances,
        rho: p.rho,
        ..SynthConfig::default().with_seed(p.seed)
    };
    generate(&cfg).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn complementarity(p: &SynthParams) -> Result<String, String> {
    let t = tensor(p)?;
    let matrix = full_matrix(&t).map_err(|e| e.to_string())?;
    let groups = group_summary(&matrix, t.metrics());
    let mean = |g: &Option<rankcomp::complementarity::GroupStat>| g.as_ref().map(|s| s.mean);
    let sem = |g: &Option<rankcomp::complementarity::GroupStat>| g.as_ref().and_then(|s| s.sem);
    to_json(&json!({
        "svg": heatmap_svg(&matrix, None),
        "metrics": matrix.metric_ids,
        "groups": {
            "human_human": { "mean": mean(&groups.human_human), "sem": sem(&groups.human_human) },
            "auto_auto": { "mean": mean(&groups.auto_auto), "sem": sem(&groups.auto_auto) },
            "cross": { "mean": mean(&groups.cross), "sem": sem(&groups.cross) },
        },
    }))
}

pub fn structure(p: &SynthParams, utterance_level: bool, resolution: f64) -> Result<String, String> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(format!("resolution must be positive, got {resolution}"));
    }
    let t = tensor(p)?;
    let level = if utterance_level { Level::Utterance } else { Level::System };
    let matrix = build_metric_matrix(&t, level);
    let result = pca(&matrix, false).map_err(|e| e.to_string())?;
    let comp = full_matrix(&t).map_err(|e| e.to_string())?;
    let clusters = louvain(&similarity_graph(&comp), resolution, p.seed);
    let points: Vec<ScatterPoint> = matrix
        .metric_ids
        .iter()
        .zip(&matrix.kinds)
        .zip(&result.scores2d)
        .map(|((id, kind), xy)| {
            let i = comp.metric_ids.iter().position(|m| m == id).expect("same metric set");
            ScatterPoint {
                label: id.clone(),
                x: xy[0],
                y: xy[1],
                cluster: clusters.assignment.labels[i],
                human: *kind == MetricKind::Human,
            }
        })
        .collect();
    let clusters_by_metric: Vec<_> = points.iter().map(|pt| json!({ "metric": pt.label, "cluster": pt.cluster })).collect();
    to_json(&json!({
        "svg": scatter_svg(&points, "PC1", "PC2", None),
        "explained_ratio": result.explained_ratio,
        "effective_dimension": effective_dimension(&result.explained_ratio, 0.8),
        "cluster_count": clusters.assignment.cluster_count,
        "modularity": clusters.assignment.modularity,
        "clusters": clusters_by_metric,
    }))
}

pub fn kemeny(samples: usize, max_voters: usize, max_items: usize, seed: u64) -> Result<String, String> {
    if samples == 0 || samples > MAX_SAMPLES {
        return Err(format!("samples must be between 1 and {MAX_SAMPLES}, got {samples}"));
    }
    if max_voters == 0 || max_items < 2 {
        return Err("need at least one voter and two items".into());
    }
    let report = audit(&AuditConfig {
        samples,
        max_voters,
        max_items,
        seed,
    })
    .map_err(|e| e.to_string())?;
    to_json(&json!({
        "samples": samples,
        "bound": report.bound,
        "max_ratio": report.max_ratio,
        "mean_ratio": report.mean_ratio,
        "ratio_samples": report.ratio_samples,
        "exact_zero": report.exact_zero,
        "borda_optimal": report.borda_optimal,
        "violations": report.violations.len(),
    }))
}
