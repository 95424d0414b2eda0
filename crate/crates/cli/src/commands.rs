use std::fs;
use std::path::Path;

use serde::Serialize;

use rankcomp::complementarity::{full_matrix, group_summary, GroupSummary};
use rankcomp::kemeny::{audit, AuditConfig};
use rankcomp::plot::{heatmap_svg, scatter_svg, ScatterPoint};
use rankcomp::prediction::{
    build_design_mode, human_ids, lasso_path, mse_ratio, predict_human, timeline_fit, FeatureSet, GbtConfig,
    LassoConfig, PredictionError, PredictionReport, RegressorConfig, TimelineConfig,
};
use rankcomp::scoreset::{parse_profiles, profiles_to_toml, read_long_tables, select_dataset, DropReport};
use rankcomp::structure::{
    build_metric_matrix, effective_dimension, louvain, pca, similarity_graph,
};
use rankcomp::synth::{self, SynthConfig};
use rankcomp::{Level, MetricKind, ScoreTensor};

use crate::output::{io_error, num, CliError, Meta, OutDir};
use crate::{AuditOpts, InputArgs, OutArgs, PredictOpts, RegressorArg, StructureOpts, SynthOpts};

struct Loaded {
    tensor: ScoreTensor,
    dropped: DropReport,
    input_bytes: Vec<u8>,
    profile_bytes: Vec<u8>,
}

impl Loaded {
    fn meta<T: Serialize>(&self, command: &str, input: &InputArgs, options: &T, seed: u64) -> Meta {
        #[derive(Serialize)]
        struct Hashed<'a, T> {
            dataset: &'a Option<String>,
            ingestion: rankcomp::Ingestion,
            options: &'a T,
        }
        let hashed = Hashed {
            dataset: &input.dataset,
            ingestion: input.ingestion(),
            options,
        };
        Meta::new(command, &hashed, seed, &[&self.input_bytes, &self.profile_bytes])
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| io_error(path, e))
}

fn load(input: &InputArgs) -> Result<Loaded, CliError> {
    let input_bytes = read(&input.input)?;
    let profile_bytes = read(&input.profiles)?;
    let text = std::str::from_utf8(&profile_bytes)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.profiles.display())))?;
    let profiles = parse_profiles(text)?;
    let tables = read_long_tables(input_bytes.as_slice(), &profiles)?;
    let table = select_dataset(tables, input.dataset.as_deref())?;
    let (tensor, dropped) = table.finish(input.ingestion())?;
    Ok(Loaded {
        tensor,
        dropped,
        input_bytes,
        profile_bytes,
    })
}

pub fn validate(input: &InputArgs) -> Result<(), CliError> {
    let input_bytes = read(&input.input)?;
    let text = String::from_utf8(read(&input.profiles)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", input.profiles.display())))?;
    let profiles = parse_profiles(&text)?;
    let tables = read_long_tables(input_bytes.as_slice(), &profiles)?;
    let table = select_dataset(tables, input.dataset.as_deref())?;
    let missing = table.missing_cells();
    for (m, s, u) in &missing {
        println!("missing cell: metric={m} system={s} utterance={u}");
    }
    let (tensor, dropped) = table.finish(input.ingestion())?;
    let (m, n, k) = tensor.shape();
    println!("dataset={}", tensor.dataset_id());
    println!("M={m} N={n} K={k}");
    if !dropped.dropped_utterances.is_empty() {
        println!("dropped utterances: {}", dropped.dropped_utterances.join(","));
    }
    Ok(())
}

#[derive(Serialize)]
struct ComplementarityDoc<'a> {
    dataset: &'a str,
    shape: [usize; 3],
    dropped_utterances: &'a [String],
    groups: &'a GroupSummary,
}

pub fn complementarity(input: &InputArgs, out: &OutArgs) -> Result<(), CliError> {
    let data = load(input)?;
    let meta = data.meta("complementarity", input, &(), out.seed);
    let t = &data.tensor;
    let matrix = full_matrix(t)?;
    let groups = group_summary(&matrix, t.metrics());
    let (m, n, k) = t.shape();

    let mut dir = OutDir::create(&out.out, meta)?;
    dir.hashed_text("complementarity.csv", &matrix.to_csv())?;
    dir.json(
        "group_summary.json",
        &ComplementarityDoc {
            dataset: t.dataset_id(),
            shape: [m, n, k],
            dropped_utterances: &data.dropped.dropped_utterances,
            groups: &groups,
        },
    )?;
    dir.svg("heatmap.svg", |c| heatmap_svg(&matrix, Some(c)))?;
    dir.report();
    Ok(())
}

#[derive(Serialize)]
struct ClusterInfo<'a> {
    metric: &'a str,
    kind: MetricKind,
    cluster: usize,
}

#[derive(Serialize)]
struct StructureDoc<'a> {
    dataset: &'a str,
    level: Level,
    standardized: bool,
    threshold: f64,
    effective_dimension: usize,
    explained_ratio: &'a [f64],
    dropped_columns: &'a [usize],
    cluster_count: usize,
    modularity: f64,
    pass_modularity: &'a [f64],
    clusters: Vec<ClusterInfo<'a>>,
}

pub fn structure(input: &InputArgs, out: &OutArgs, opts: &StructureOpts) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&opts.threshold) {
        return Err(CliError::Validation(format!("threshold {} is outside [0, 1]", opts.threshold)));
    }
    let data = load(input)?;
    let meta = data.meta("structure", input, opts, out.seed);
    let t = &data.tensor;
    let level = Level::from(opts.level);
    let matrix = build_metric_matrix(t, level);
    let result = pca(&matrix, opts.standardize)?;
    let dim = effective_dimension(&result.explained_ratio, opts.threshold);

    let comp = full_matrix(t)?;
    let clusters = louvain(&similarity_graph(&comp), opts.resolution, out.seed);
    // the complementarity matrix lists humans first; PCA rows follow the tensor
    let cluster_of = |id: &str| {
        let i = comp.metric_ids.iter().position(|m| m == id).expect("same metric set");
        clusters.assignment.labels[i]
    };

    let mut dir = OutDir::create(&out.out, meta)?;
    let mut cumulative = 0.0;
    let rows: Vec<Vec<String>> = result
        .explained_ratio
        .iter()
        .zip(&result.variances)
        .enumerate()
        .map(|(i, (r, v))| {
            cumulative += r;
            vec![(i + 1).to_string(), num(*r), num(cumulative), num(*v)]
        })
        .collect();
    dir.csv("explained_variance.csv", &["component", "explained_ratio", "cumulative", "variance"], &rows)?;

    let points: Vec<ScatterPoint> = matrix
        .metric_ids
        .iter()
        .zip(&matrix.kinds)
        .zip(&result.scores2d)
        .map(|((id, kind), xy)| ScatterPoint {
            label: id.clone(),
            x: xy[0],
            y: xy[1],
            cluster: cluster_of(id),
            human: *kind == MetricKind::Human,
        })
        .collect();
    let rows: Vec<Vec<String>> = points
        .iter()
        .zip(&matrix.kinds)
        .map(|(p, k)| vec![p.label.clone(), num(p.x), num(p.y), p.cluster.to_string(), k.to_string()])
        .collect();
    dir.csv("embedding.csv", &["metric", "x", "y", "cluster", "kind"], &rows)?;

    dir.json(
        "structure.json",
        &StructureDoc {
            dataset: t.dataset_id(),
            level,
            standardized: result.standardized,
            threshold: opts.threshold,
            effective_dimension: dim,
            explained_ratio: &result.explained_ratio,
            dropped_columns: &result.dropped_columns,
            cluster_count: clusters.assignment.cluster_count,
            modularity: clusters.assignment.modularity,
            pass_modularity: &clusters.pass_modularity,
            clusters: matrix
                .metric_ids
                .iter()
                .zip(&matrix.kinds)
                .map(|(id, kind)| ClusterInfo {
                    metric: id,
                    kind: *kind,
                    cluster: cluster_of(id),
                })
                .collect(),
        },
    )?;
    let ratio = |i: usize| result.explained_ratio.get(i).copied().unwrap_or(0.0) * 100.0;
    let (xl, yl) = (format!("PC1 ({:.1}%)", ratio(0)), format!("PC2 ({:.1}%)", ratio(1)));
    dir.svg("scatter.svg", |c| scatter_svg(&points, &xl, &yl, Some(c)))?;
    dir.report();
    Ok(())
}

#[derive(Serialize)]
struct Skipped {
    target: String,
    step: String,
    reason: String,
}

#[derive(Serialize)]
struct PredictionDoc<'a> {
    dataset: &'a str,
    reports: &'a [PredictionReport],
    skipped: &'a [Skipped],
}

fn regressor(opts: &PredictOpts) -> RegressorConfig {
    match opts.regressor {
        RegressorArg::Lasso => RegressorConfig::Lasso(LassoConfig::default().with_alpha(opts.lasso_alpha)),
        RegressorArg::Gbt => RegressorConfig::Gbt(GbtConfig {
            rounds: opts.rounds,
            max_depth: opts.depth,
            ..GbtConfig::default()
        }),
    }
}

pub fn predict(input: &InputArgs, out: &OutArgs, opts: &PredictOpts) -> Result<(), CliError> {
    let data = load(input)?;
    let meta = data.meta("predict", input, opts, out.seed);
    let t = &data.tensor;
    let mode = opts.design.into();
    let reg = regressor(opts);
    let targets = match &opts.target {
        Some(id) => vec![id.clone()],
        None => human_ids(t),
    };
    if targets.is_empty() {
        return Err(CliError::Validation("no human metric to predict".into()));
    }

    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    let skip = |target: &str, step: &str, e: PredictionError| Skipped {
        target: target.to_owned(),
        step: step.to_owned(),
        reason: e.to_string(),
    };
    let mut summary = Vec::new();
    let mut path_rows = Vec::new();
    let mut ratio_rows = Vec::new();
    let mut timeline_rows = Vec::new();
    let dated = t
        .metrics()
        .iter()
        .all(|p| p.is_human() || p.release_date.is_some());

    for target in &targets {
        for set in FeatureSet::ALL {
            match predict_human(t, target, set, mode, &reg, opts.folds, out.seed) {
                Ok(r) => {
                    let fold_tau: Vec<String> = r.cv.fold_tau.iter().map(|v| num(*v)).collect();
                    summary.push(vec![
                        target.clone(),
                        set.name().to_owned(),
                        reg.name().to_owned(),
                        r.cv.folds.to_string(),
                        r.rows.to_string(),
                        num(r.cv.mean_tau),
                        fold_tau.join(";"),
                    ]);
                    reports.push(r);
                }
                Err(e @ PredictionError::NoFeatures(..)) => skipped.push(skip(target, set.name(), e)),
                Err(e) => return Err(e.into()),
            }
        }

        let design = build_design_mode(t, target, FeatureSet::Both, mode)?;
        let path = lasso_path(&design, &opts.alphas, &LassoConfig::default())?;
        for (alpha, weights) in path.alphas.iter().zip(&path.weights) {
            for (feature, w) in path.feature_ids.iter().zip(weights) {
                path_rows.push(vec![target.clone(), num(*alpha), feature.clone(), num(*w)]);
            }
        }

        match mse_ratio(t, target, &opts.alphas, mode, out.seed) {
            Ok(c) => {
                for i in 0..c.alphas.len() {
                    ratio_rows.push(vec![
                        target.clone(),
                        num(c.alphas[i]),
                        num(c.mse_with_humans[i]),
                        num(c.mse_auto_only[i]),
                        num(c.ratios[i]),
                        c.human_weights_zero[i].to_string(),
                    ]);
                }
            }
            Err(e @ (PredictionError::NoOtherHumans(_) | PredictionError::NoFeatures(..))) => {
                skipped.push(skip(target, "mse_ratio", e));
            }
            Err(e) => return Err(e.into()),
        }

        if dated {
            let cfg = TimelineConfig {
                folds: opts.folds,
                seed: out.seed,
                regressor: reg,
                mode,
            };
            match timeline_fit(t, target, &cfg) {
                Ok(tl) => {
                    for p in tl.points {
                        timeline_rows.push(vec![
                            target.clone(),
                            p.release_date.to_string(),
                            p.added.join(";"),
                            p.feature_ids.len().to_string(),
                            num(p.mean_tau),
                        ]);
                    }
                }
                Err(e @ PredictionError::NoFeatures(..)) => skipped.push(skip(target, "timeline", e)),
                Err(e) => return Err(e.into()),
            }
        }
    }

    let mut dir = OutDir::create(&out.out, meta)?;
    dir.json(
        "predictions.json",
        &PredictionDoc {
            dataset: t.dataset_id(),
            reports: &reports,
            skipped: &skipped,
        },
    )?;
    dir.csv(
        "predictions.csv",
        &["target", "feature_set", "regressor", "folds", "rows", "mean_tau", "fold_tau"],
        &summary,
    )?;
    dir.csv("lasso_path.csv", &["target", "alpha", "feature", "weight"], &path_rows)?;
    dir.csv(
        "mse_ratio.csv",
        &["target", "alpha", "mse_with_humans", "mse_auto_only", "ratio", "human_weights_zero"],
        &ratio_rows,
    )?;
    if dated {
        dir.csv(
            "timeline.csv",
            &["target", "release_date", "added", "feature_count", "mean_tau"],
            &timeline_rows,
        )?;
    } else {
        println!("timeline skipped: some automatic metric has no release date");
    }
    dir.report();
    Ok(())
}

pub fn kemeny_audit(out: &OutArgs, opts: &AuditOpts) -> Result<(), CliError> {
    let config = AuditConfig {
        samples: opts.samples,
        max_voters: opts.max_voters,
        max_items: opts.max_items,
        seed: out.seed,
    };
    let report = audit(&config)?;
    let meta = Meta::new("kemeny-audit", opts, out.seed, &[]);
    let mut dir = OutDir::create(&out.out, meta)?;
    dir.json("kemeny_audit.json", &report)?;
    println!(
        "samples={} max_ratio={} mean_ratio={} violations={}",
        config.samples,
        report.max_ratio,
        report.mean_ratio,
        report.violations.len()
    );
    dir.report();
    Ok(())
}

pub fn synth(out: &OutArgs, opts: &SynthOpts) -> Result<(), CliError> {
    let config = SynthConfig {
        humans: opts.humans,
        automatics: opts.automatics,
        systems: opts.systems,
        utterances: opts.utterances,
        seed: out.seed,
        ..SynthConfig::default()
    };
    let tensor = synth::generate(&config)?;
    let meta = Meta::new("synth", opts, out.seed, &[]);
    let mut dir = OutDir::create(&out.out, meta)?;
    dir.hashed_text("scores.csv", &tensor.to_long_string())?;
    dir.hashed_text("profiles.toml", &profiles_to_toml(tensor.metrics()))?;
    dir.report();
    Ok(())
}
