//! Acceptance suite: one PASS/FAIL line per criterion. Oracles here are
//! written from the definitions and share no code with the library beyond
//! the function under test.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rankcomp::complementarity::{full_matrix, group_summary, pairwise};
use rankcomp::kemeny::{audit, borda_consensus, exact_kemeny, AuditConfig, RankingFamily};
use rankcomp::prediction::{
    alpha_max, human_ids, kfold_cv, lasso_fit, predict_human, DesignMode, FeatureSet, LassoConfig,
    RegressionDesign, RegressorConfig,
};
use rankcomp::ranking::{kendall_distance, kendall_tau, normalized_kendall, Level, RankVector};
use rankcomp::structure::{louvain, pca, MetricMatrix, WeightedGraph};
use rankcomp::synth::{generate, SynthConfig};
use rankcomp::{MetricKind, MetricProfile, ScoreTensor};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64, what: &str) -> Result<(), String> {
    check(elapsed.as_secs_f64() < limit_s, || {
        format!("{what} took {:.2}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

// ---------- oracles ----------

/// Pairs ordered oppositely, counted by enumeration.
fn brute_discordant(a: &[f64], b: &[f64]) -> u64 {
    let mut d = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] - a[j]) * (b[i] - b[j]) < 0.0 {
                d += 1;
            }
        }
    }
    d
}

fn brute_concordant(a: &[f64], b: &[f64]) -> u64 {
    let mut c = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if (a[i] - a[j]) * (b[i] - b[j]) > 0.0 {
                c += 1;
            }
        }
    }
    c
}

fn random_perm(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (1..=len).map(|r| r as f64).collect();
    p.shuffle(rng);
    p
}

/// Every permutation of `0..n` (Heap's algorithm).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        heap(k - 1, a, out);
        for i in 0..k - 1 {
            if k % 2 == 0 {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
            heap(k - 1, a, out);
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out
}

fn enumerated_kemeny_cost(members: &[Vec<f64>], all: &[Vec<usize>]) -> u64 {
    all.iter()
        .map(|p| {
            let cand: Vec<f64> = p.iter().map(|&r| (r + 1) as f64).collect();
            members.iter().map(|m| brute_discordant(&cand, m)).sum::<u64>()
        })
        .min()
        .unwrap()
}

/// Descending mid-ranks, computed by comparison counting.
fn oracle_ranks(scores: &[f64]) -> Vec<f64> {
    scores
        .iter()
        .map(|&s| {
            let above = scores.iter().filter(|&&o| o > s).count() as f64;
            let equal = scores.iter().filter(|&&o| o == s).count() as f64;
            above + (equal + 1.0) / 2.0
        })
        .collect()
}

fn oracle_complementarity(t: &ScoreTensor, a: usize, b: usize) -> f64 {
    let (_, n, k) = t.shape();
    let pairs = (n * (n - 1) / 2) as f64;
    let mut total = 0.0;
    for u in 0..k {
        let ra = oracle_ranks(&(0..n).map(|s| t.score(a, s, u)).collect::<Vec<_>>());
        let rb = oracle_ranks(&(0..n).map(|s| t.score(b, s, u)).collect::<Vec<_>>());
        total += brute_discordant(&ra, &rb) as f64 / pairs;
    }
    total / k as f64
}

fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize, tie_free: bool) -> ScoreTensor {
    let metrics: Vec<MetricProfile> = (0..m)
        .map(|i| {
            if i % 3 == 0 {
                MetricProfile::human(format!("H:m{i}"))
            } else {
                MetricProfile::automatic(format!("m{i}"))
            }
        })
        .collect();
    let raw: Vec<f64> = (0..m * n * k)
        .map(|_| {
            if tie_free {
                rng.random_range(-1.0..1.0)
            } else {
                f64::from(rng.random_range(0..4u8))
            }
        })
        .collect();
    ScoreTensor::from_raw(
        "t",
        metrics,
        (0..n).map(|s| format!("s{s}")).collect(),
        (0..k).map(|u| format!("u{u:02}")).collect(),
        raw,
    )
    .unwrap()
}

// ---------- criteria ----------

fn kendall_pairs() -> Vec<(RankVector, RankVector)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..1000)
        .map(|_| {
            let len = rng.random_range(2..=200);
            (
                RankVector::from_ranks(random_perm(&mut rng, len)),
                RankVector::from_ranks(random_perm(&mut rng, len)),
            )
        })
        .collect()
}

fn c1_kendall_oracle() -> Outcome {
    let pairs = kendall_pairs();
    let start = Instant::now();
    let fast: Vec<u64> = pairs.iter().map(|(a, b)| kendall_distance(a, b).unwrap()).collect();
    let elapsed = start.elapsed();
    for (i, ((a, b), d)) in pairs.iter().zip(&fast).enumerate() {
        let slow = brute_discordant(a.as_slice(), b.as_slice());
        check(*d == slow, || format!("pair {i}: {d} vs enumeration {slow}"))?;
    }
    within(elapsed, 5.0, "1000 distances")?;
    Ok(format!("1000 pairs equal, {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn c2_tau_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, (a, b)) in kendall_pairs().iter().enumerate() {
        let tau = kendall_tau(a, b).unwrap();
        let d = normalized_kendall(a, b).unwrap();
        check(tau == 1.0 - 2.0 * d, || format!("pair {i}: tau {tau} != 1 - 2*{d}"))?;
        // textbook definition on tie-free data: (concordant - discordant) / pairs
        let l = a.len() as f64;
        let c = brute_concordant(a.as_slice(), b.as_slice()) as f64;
        let disc = brute_discordant(a.as_slice(), b.as_slice()) as f64;
        let textbook = (c - disc) / (l * (l - 1.0) / 2.0);
        worst = worst.max((tau - textbook).abs());
    }
    check(worst < 1e-12, || format!("tau differs from (C-D)/pairs by {worst:e}"))?;
    Ok(format!("identity exact on 1000 pairs, max dev from (C-D)/pairs {worst:.1e}"))
}

fn c3_kemeny_audit() -> Outcome {
    let start = Instant::now();
    let perms: Vec<Vec<Vec<usize>>> = (0..=6).map(permutations).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        let voters = rng.random_range(1..=7);
        let items = rng.random_range(2..=6);
        let members: Vec<Vec<f64>> = (0..voters).map(|_| random_perm(&mut rng, items)).collect();
        let family = RankingFamily::new(members.iter().cloned().map(RankVector::from_ranks).collect()).unwrap();
        let exact = exact_kemeny(&family).unwrap();
        let oracle = enumerated_kemeny_cost(&members, &perms[items]);
        check(exact.cost == oracle, || format!("family {i}: exact {} vs enumeration {oracle}", exact.cost))?;
        let borda = borda_consensus(&family).unwrap();
        check(borda.cost <= 5 * exact.cost, || {
            format!("family {i}: Borda {} > 5 x {}", borda.cost, exact.cost)
        })?;
        if exact.cost > 0 {
            worst = worst.max(borda.cost as f64 / exact.cost as f64);
        }
    }
    let report = audit(&AuditConfig {
        samples: 10_000,
        max_voters: 7,
        max_items: 6,
        seed: 3,
    })
    .map_err(|e| e.to_string())?;
    check(report.violations.is_empty(), || format!("{} audit violations", report.violations.len()))?;
    within(start.elapsed(), 60.0, "audit")?;
    Ok(format!(
        "10000 families match enumeration; max Borda/exact {worst:.3} (library audit {:.3}); {:.1} s",
        report.max_ratio,
        start.elapsed().as_secs_f64()
    ))
}

fn c4_complementarity_structure() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..100 {
        let m = rng.random_range(2..=8);
        let n = rng.random_range(2..=6);
        let k = rng.random_range(1..=50);
        let tie_free = case % 2 == 0;
        let t = random_tensor(&mut rng, m, n, k, tie_free);
        let mat = full_matrix(&t).map_err(|e| e.to_string())?;
        for i in 0..m {
            check(mat.values[i][i] == 0.0, || format!("case {case}: diagonal {i} nonzero"))?;
            for j in 0..m {
                let v = mat.values[i][j];
                check(v == mat.values[j][i], || format!("case {case}: asymmetric at {i},{j}"))?;
                check((0.0..=1.0).contains(&v), || format!("case {case}: {v} outside [0,1]"))?;
                let (a, b) = (
                    t.metric_index(&mat.metric_ids[i]).unwrap(),
                    t.metric_index(&mat.metric_ids[j]).unwrap(),
                );
                let o = oracle_complementarity(&t, a, b);
                check((v - o).abs() < 1e-12, || format!("case {case}: {v} vs oracle {o}"))?;
            }
            let id = &t.metrics()[i].id;
            check(pairwise(&t, id, id).unwrap() == 0.0, || format!("case {case}: C(m,m) != 0"))?;
        }

        // reversed copy and a monotone rescaling of metric 0
        let (_, n, k) = t.shape();
        let mut profiles = t.metrics().to_vec();
        profiles.push(MetricProfile::automatic("reversed"));
        profiles.push(MetricProfile::automatic("rescaled"));
        let mut raw: Vec<f64> = Vec::new();
        for mi in 0..m {
            for s in 0..n {
                raw.extend((0..k).map(|u| t.raw_score(mi, s, u)));
            }
        }
        for s in 0..n {
            raw.extend((0..k).map(|u| -t.score(0, s, u)));
        }
        for s in 0..n {
            raw.extend((0..k).map(|u| (3.0 * t.score(0, s, u)).exp() + 7.0));
        }
        let ext = ScoreTensor::from_raw("t", profiles, t.systems().to_vec(), t.utterances().to_vec(), raw)
            .map_err(|e| e.to_string())?;
        let first = &t.metrics()[0].id;
        if tie_free {
            let r = pairwise(&ext, first, "reversed").unwrap();
            check(r == 1.0, || format!("case {case}: C(m, reversed m) = {r}"))?;
        }
        for other in t.metrics() {
            let a = pairwise(&ext, first, &other.id).unwrap();
            let b = pairwise(&ext, "rescaled", &other.id).unwrap();
            check(a == b, || format!("case {case}: rescaling changed C: {a} vs {b}"))?;
        }
    }
    Ok("100 tensors: symmetric, zero diagonal, in [0,1], oracle-equal, reversal 1, rescaling exact".into())
}

fn metric_matrix(data: Vec<Vec<f64>>) -> MetricMatrix {
    MetricMatrix {
        metric_ids: (0..data.len()).map(|i| format!("m{i}")).collect(),
        kinds: vec![MetricKind::Automatic; data.len()],
        level: Level::System,
        data,
    }
}

fn c5_pca() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_rec: f64 = 0.0;
    for case in 0..50 {
        let rows = rng.random_range(2..=20);
        let cols = rng.random_range(1..=15);
        let data: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-50.0..50.0)).collect())
            .collect();
        let r = pca(&metric_matrix(data.clone()), false).map_err(|e| e.to_string())?;
        let sum: f64 = r.explained_ratio.iter().sum();
        check((sum - 1.0).abs() <= 1e-9, || format!("case {case}: ratios sum to {sum}"))?;
        check(r.explained_ratio.windows(2).all(|w| w[0] >= w[1]), || {
            format!("case {case}: ratios increase: {:?}", r.explained_ratio)
        })?;
        let means: Vec<f64> = (0..cols)
            .map(|c| data.iter().map(|row| row[c]).sum::<f64>() / rows as f64)
            .collect();
        let rec = r.reconstruct();
        for (i, row) in data.iter().enumerate() {
            for (j, &c) in r.kept_columns.iter().enumerate() {
                worst_rec = worst_rec.max((rec[i][j] - (row[c] - means[c])).abs());
            }
        }
    }
    check(worst_rec <= 1e-8, || format!("reconstruction deviation {worst_rec:e}"))?;

    // rows on an affine line
    let dir: Vec<f64> = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
    let offset: Vec<f64> = (0..6).map(|_| rng.random_range(-5.0..5.0)).collect();
    let line: Vec<Vec<f64>> = (0..12)
        .map(|_| {
            let t: f64 = rng.random_range(-3.0..3.0);
            dir.iter().zip(&offset).map(|(d, o)| o + t * d).collect()
        })
        .collect();
    let r = pca(&metric_matrix(line), false).map_err(|e| e.to_string())?;
    check((r.explained_ratio[0] - 1.0).abs() <= 1e-9, || {
        format!("rank-1 ratio[0] = {}", r.explained_ratio[0])
    })?;
    Ok(format!("50 random matrices, max reconstruction dev {worst_rec:.1e}; rank-1 ratio[0] = {:.12}", r.explained_ratio[0]))
}

fn c6_louvain() -> Outcome {
    let mut graph = WeightedGraph::new(40);
    for i in 0..40 {
        for j in i + 1..40 {
            graph.add_edge(i, j, if (i < 20) == (j < 20) { 0.9 } else { 0.05 });
        }
    }
    let mut recovered = 0;
    for seed in 0..100 {
        let r = louvain(&graph, 1.0, seed);
        check(r.pass_modularity.windows(2).all(|w| w[1] >= w[0] - 1e-12), || {
            format!("seed {seed}: modularity decreased {:?}", r.pass_modularity)
        })?;
        let l = &r.assignment.labels;
        if l[..20].iter().all(|&x| x == l[0]) && l[20..].iter().all(|&x| x == l[20]) && l[0] != l[20] {
            recovered += 1;
        }
    }
    check(recovered >= 95, || format!("planted partition recovered in {recovered}/100 seeds"))?;
    Ok(format!("recovered in {recovered}/100 seeds; modularity non-decreasing in all runs"))
}

fn design(features: Vec<Vec<f64>>, target: Vec<f64>) -> RegressionDesign {
    RegressionDesign {
        target_id: "H:t".into(),
        mode: DesignMode::RawScores,
        feature_ids: (0..features[0].len()).map(|j| format!("f{j}")).collect(),
        row_keys: (0..target.len()).map(|i| (i.to_string(), "*".into())).collect(),
        features,
        target,
    }
}

/// Standardized columns (population sd) and centered target.
fn standardize(d: &RegressionDesign) -> (Vec<Vec<f64>>, Vec<f64>) {
    let p = d.rows() as f64;
    let cols: Vec<Vec<f64>> = (0..d.feature_count())
        .map(|j| {
            let col: Vec<f64> = d.features.iter().map(|r| r[j]).collect();
            let mean = col.iter().sum::<f64>() / p;
            let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / p).sqrt();
            col.iter().map(|v| if sd > 0.0 { (v - mean) / sd } else { 0.0 }).collect()
        })
        .collect();
    let ybar = d.target.iter().sum::<f64>() / p;
    (cols, d.target.iter().map(|y| y - ybar).collect())
}

fn c7_lasso() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let p = rng.random_range(20..200);
        let f = rng.random_range(1..12);
        let x: Vec<Vec<f64>> = (0..p).map(|_| (0..f).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let w: Vec<f64> = (0..f).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|r| r.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() + rng.random_range(-0.5..0.5))
            .collect();
        let d = design(x, y);
        let alpha = rng.random_range(0.0..0.5);
        let model = lasso_fit(&d, &LassoConfig::default().with_alpha(alpha));
        let (z, yc) = standardize(&d);
        let resid: Vec<f64> = (0..p)
            .map(|i| yc[i] - (0..f).map(|j| model.weights[j] * z[j][i]).sum::<f64>())
            .collect();
        for j in 0..f {
            let g = z[j].iter().zip(&resid).map(|(a, b)| a * b).sum::<f64>() / p as f64;
            let viol = if model.weights[j] != 0.0 {
                (g - alpha * model.weights[j].signum()).abs()
            } else {
                (g.abs() - alpha).max(0.0)
            };
            worst = worst.max(viol);
        }
        check(worst <= 1e-6, || format!("case {case}: KKT violation {worst:e}"))?;
    }

    // univariate closed form on one standardized feature
    let mut worst_uni: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.random_range(-3.0..3.0)]).collect();
        let y: Vec<f64> = x.iter().map(|r| 0.7 * r[0] + rng.random_range(-1.0..1.0)).collect();
        let d = design(x, y);
        let (z, yc) = standardize(&d);
        let rho = z[0].iter().zip(&yc).map(|(a, b)| a * b).sum::<f64>() / 60.0;
        let alpha = rng.random_range(0.0..rho.abs() * 1.5);
        let expect = rho.signum() * (rho.abs() - alpha).max(0.0);
        let got = lasso_fit(&d, &LassoConfig::default().with_alpha(alpha)).weights[0];
        worst_uni = worst_uni.max((got - expect).abs());
    }
    check(worst_uni <= 1e-8, || format!("univariate deviation {worst_uni:e}"))?;

    // above the derived threshold every weight is zero
    let x: Vec<Vec<f64>> = (0..80).map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let y: Vec<f64> = x.iter().map(|r| r[0] - 2.0 * r[3] + rng.random_range(-0.1..0.1)).collect();
    let d = design(x, y);
    let (z, yc) = standardize(&d);
    let threshold = z
        .iter()
        .map(|col| (col.iter().zip(&yc).map(|(a, b)| a * b).sum::<f64>() / 80.0).abs())
        .fold(0.0, f64::max);
    check((alpha_max(&d) - threshold).abs() < 1e-12, || "threshold mismatch".into())?;
    let above = lasso_fit(&d, &LassoConfig::default().with_alpha(threshold * 1.0001));
    check(above.weights.iter().all(|w| *w == 0.0), || format!("weights {:?}", above.weights))?;
    let below = lasso_fit(&d, &LassoConfig::default().with_alpha(threshold * 0.99));
    check(below.weights.iter().any(|w| *w != 0.0), || "nothing active just below threshold".into())?;
    Ok(format!("KKT max violation {worst:.1e}; univariate max dev {worst_uni:.1e}; zero above alpha_max"))
}

fn c8_cv_sanity() -> Outcome {
    let lasso = RegressorConfig::Lasso(LassoConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..1.0)).collect();
    let other: Vec<f64> = (0..200).map(|_| rng.random_range(0.0..1.0)).collect();
    let d = design(x.iter().zip(&other).map(|(a, b)| vec![*b, *a]).collect(), x.clone());
    let r = kfold_cv(&d, &lasso, 5, 0).map_err(|e| e.to_string())?;
    check(r.mean_tau == 1.0, || format!("target = feature gives mean tau {}", r.mean_tau))?;

    let mut total = 0.0;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
        let x: Vec<Vec<f64>> = (0..500).map(|_| (0..4).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let y: Vec<f64> = (0..500).map(|_| rng.random_range(0.0..1.0)).collect();
        total += kfold_cv(&design(x, y), &lasso, 5, seed).map_err(|e| e.to_string())?.mean_tau;
    }
    let mean = total / 20.0;
    check(mean.abs() < 0.1, || format!("noise target mean tau {mean}"))?;
    Ok(format!("copy target tau = 1.0; noise target mean tau {mean:+.4} over 20 seeds"))
}

fn c9_finding_one() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for seed in 0..10 {
        let t = generate(&SynthConfig::default().with_seed(seed)).map_err(|e| e.to_string())?;
        check(t.shape() == (13, 10, 100), || format!("shape {:?}", t.shape()))?;
        let g = group_summary(&full_matrix(&t).map_err(|e| e.to_string())?, t.metrics());
        let (hh, aa, ha) = (
            g.human_human.unwrap().mean,
            g.auto_auto.unwrap().mean,
            g.cross.unwrap().mean,
        );
        check(aa - hh >= 0.03 && ha - aa >= 0.03, || {
            format!("seed {seed}: C(h,h)={hh:.3} C(a,a)={aa:.3} C(h,a)={ha:.3}")
        })?;
        if seed == 0 {
            lines.push(format!("C(h,h)={hh:.3} < C(a,a)={aa:.3} < C(h,a)={ha:.3}"));
        }
    }
    within(start.elapsed(), 30.0, "generation and matrices")?;
    Ok(format!("{} at seed 0; ordered with gaps >= 0.03 on 10 seeds; {:.2} s", lines[0], start.elapsed().as_secs_f64()))
}

fn c10_finding_two() -> Outcome {
    let reg = RegressorConfig::default();
    let mut min_gap = f64::INFINITY;
    for seed in 0..10 {
        let t = generate(&SynthConfig::default().with_seed(seed)).map_err(|e| e.to_string())?;
        for target in human_ids(&t) {
            let run = |set| {
                predict_human(&t, &target, set, DesignMode::RawScores, &reg, 5, seed)
                    .map(|r| r.cv.mean_tau)
                    .map_err(|e| e.to_string())
            };
            let (human, auto) = (run(FeatureSet::HumanOnly)?, run(FeatureSet::AutoOnly)?);
            check(human >= auto + 0.1, || {
                format!("seed {seed} {target}: HumanOnly {human:.3} vs AutoOnly {auto:.3}")
            })?;
            min_gap = min_gap.min(human - auto);
        }
    }
    Ok(format!("HumanOnly beats AutoOnly on all 50 (seed, target) pairs; smallest gap {min_gap:.3}"))
}

fn strip_version(bytes: &[u8]) -> String {
    let text = String::from_utf8_lossy(bytes);
    let v = env!("CARGO_PKG_VERSION");
    text.replace(&format!("version={v}"), "version=*")
        .replace(&format!("\"version\": \"{v}\""), "\"version\": \"*\"")
}

fn snapshot(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), strip_version(&fs::read(&p).unwrap()))
        })
        .collect();
    files.sort();
    files
}

fn c11_determinism() -> Outcome {
    let tmp = std::env::temp_dir().join(format!("rankcomp-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&tmp);
    let bin = env!("CARGO_BIN_EXE_rankcomp");
    let run = |args: &[&str]| -> Result<(), String> {
        let o = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        check(o.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))
    };
    let data = tmp.join("data");
    let data_s = data.to_str().unwrap();
    run(&["synth", "--out", data_s, "--seed", "11", "--utterances", "30"])?;
    let (table, profiles) = (data.join("scores.csv"), data.join("profiles.toml"));
    let io = ["--input", table.to_str().unwrap(), "--profiles", profiles.to_str().unwrap()];
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("complementarity", [&["complementarity"][..], &io].concat()),
        ("structure", [&["structure", "--seed", "4"][..], &io].concat()),
        ("predict", [&["predict", "--seed", "4", "--rounds", "50"][..], &io].concat()),
        ("kemeny-audit", vec!["kemeny-audit", "--samples", "2000", "--seed", "4"]),
        ("synth", vec!["synth", "--seed", "4"]),
    ];
    let mut total = 0;
    for (name, cmd) in &commands {
        let mut snaps = Vec::new();
        for rep in 0..2 {
            let out = tmp.join(format!("{name}-{rep}"));
            let mut args = cmd.clone();
            args.extend(["--out", out.to_str().unwrap()]);
            run(&args)?;
            snaps.push(snapshot(&out));
        }
        check(!snaps[0].is_empty() && snaps[0] == snaps[1], || format!("{name}: outputs differ"))?;
        total += snaps[0].len();
    }
    let _ = fs::remove_dir_all(&tmp);
    Ok(format!("5 subcommands x 2 runs, {total} files byte-identical modulo version"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("C1 Kendall oracle equivalence", c1_kendall_oracle),
        ("C2 tau identity", c2_tau_identity),
        ("C3 Kemeny audit", c3_kemeny_audit),
        ("C4 complementarity structure", c4_complementarity_structure),
        ("C5 PCA", c5_pca),
        ("C6 Louvain planted partition", c6_louvain),
        ("C7 lasso", c7_lasso),
        ("C8 CV sanity", c8_cv_sanity),
        ("C9 synthetic finding 1", c9_finding_one),
        ("C10 synthetic finding 2", c10_finding_two),
        ("C11 CLI determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| (*s).to_owned()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {}/11 passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
