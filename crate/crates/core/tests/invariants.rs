//! Property tests for the analysis layers, driven through the public API.

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use rankcomp::complementarity::{full_matrix, pairwise};
use rankcomp::prediction::{alpha_max, kfold_cv, kkt_residual, lasso_fit, DesignMode, LassoConfig, RegressionDesign, RegressorConfig};
use rankcomp::structure::{louvain, modularity, pca, MetricMatrix, WeightedGraph};
use rankcomp::{Level, MetricKind, MetricProfile, ScoreTensor};

fn tensor(m: usize, n: usize, k: usize, raw: Vec<f64>) -> ScoreTensor {
    let metrics = (0..m)
        .map(|i| {
            if i < m / 2 {
                MetricProfile::human(format!("H:{i}"))
            } else {
                MetricProfile::automatic(format!("a{i}"))
            }
        })
        .collect();
    let systems = (0..n).map(|s| format!("s{s}")).collect();
    let utts = (0..k).map(|u| format!("u{u}")).collect();
    ScoreTensor::from_raw("p", metrics, systems, utts, raw).unwrap()
}

fn tensor_strategy() -> impl Strategy<Value = ScoreTensor> {
    (2usize..6, 2usize..6, 1usize..12).prop_flat_map(|(m, n, k)| {
        // a small integer alphabet makes ties common
        proptest::collection::vec(0i8..5, m * n * k)
            .prop_map(move |v| tensor(m, n, k, v.into_iter().map(f64::from).collect()))
    })
}

fn design_strategy() -> impl Strategy<Value = RegressionDesign> {
    (10usize..60, 1usize..6).prop_flat_map(|(p, f)| {
        (
            proptest::collection::vec(proptest::collection::vec(-3.0f64..3.0, f), p),
            proptest::collection::vec(-3.0f64..3.0, p),
        )
            .prop_map(move |(features, target)| RegressionDesign {
                target_id: "H:y".into(),
                mode: DesignMode::RawScores,
                feature_ids: (0..f).map(|j| format!("x{j}")).collect(),
                row_keys: (0..p).map(|i| (format!("s{i}"), "*".into())).collect(),
                features,
                target,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complementarity_matrix_is_a_bounded_dissimilarity(t in tensor_strategy()) {
        let c = full_matrix(&t).unwrap();
        for i in 0..c.len() {
            prop_assert_eq!(c.values[i][i], 0.0);
            for j in 0..c.len() {
                prop_assert_eq!(c.values[i][j], c.values[j][i]);
                prop_assert!((0.0..=1.0).contains(&c.values[i][j]));
            }
        }
    }

    #[test]
    fn complementarity_ignores_increasing_transforms(t in tensor_strategy(), scale in 0.1f64..10.0, shift in -5.0f64..5.0) {
        let (m, n, k) = t.shape();
        let mut raw = Vec::with_capacity(m * n * k);
        for mi in 0..m {
            for s in 0..n {
                raw.extend((0..k).map(|u| (t.raw_score(mi, s, u) * scale + shift).powi(3)));
            }
        }
        let warped = ScoreTensor::from_raw("p", t.metrics().to_vec(), t.systems().to_vec(), t.utterances().to_vec(), raw).unwrap();
        prop_assert_eq!(full_matrix(&t).unwrap().values, full_matrix(&warped).unwrap().values);
    }

    #[test]
    fn complementarity_with_self_is_zero(t in tensor_strategy()) {
        let id = &t.metrics()[0].id;
        prop_assert_eq!(pairwise(&t, id, id).unwrap(), 0.0);
    }

    #[test]
    fn pca_ratios_form_a_distribution(rows in 2usize..15, cols in 1usize..8, seed in proptest::collection::vec(-10.0f64..10.0, 120), standardize in any::<bool>()) {
        let data: Vec<Vec<f64>> = (0..cols).map(|c| (0..rows).map(|r| seed[(c * rows + r) % seed.len()] + (r * c) as f64 * 0.37).collect()).collect();
        let m = MetricMatrix {
            metric_ids: (0..cols).map(|c| format!("m{c}")).collect(),
            kinds: vec![MetricKind::Automatic; cols],
            level: Level::System,
            data: data.clone(),
        };
        // constant columns may be dropped; an all-constant matrix is an error
        if let Ok(r) = pca(&m, standardize) {
            assert_abs_diff_eq!(r.explained_ratio.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
            prop_assert!(r.explained_ratio.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(r.explained_ratio.iter().all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn louvain_never_loses_modularity(n in 3usize..16, weights in proptest::collection::vec(0.0f64..1.0, 120), seed in any::<u64>()) {
        let mut g = WeightedGraph::new(n);
        let mut w = weights.iter().cycle();
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b, *w.next().unwrap());
            }
        }
        let r = louvain(&g, 1.0, seed);
        prop_assert!(r.pass_modularity.windows(2).all(|p| p[1] >= p[0] - 1e-12));
        assert_abs_diff_eq!(r.assignment.modularity, modularity(&g, &r.assignment.labels, 1.0), epsilon = 1e-12);
        let singletons: Vec<usize> = (0..n).collect();
        prop_assert!(r.assignment.modularity >= modularity(&g, &singletons, 1.0) - 1e-12);
    }

    #[test]
    fn lasso_satisfies_optimality_conditions(d in design_strategy(), frac in 0.0f64..1.2) {
        let alpha = alpha_max(&d) * frac;
        let model = lasso_fit(&d, &LassoConfig::default().with_alpha(alpha));
        prop_assert!(kkt_residual(&d, &model) <= 1e-6);
        if frac > 1.0 {
            prop_assert!(model.weights.iter().all(|w| *w == 0.0));
        }
    }

    #[test]
    fn cv_tau_is_a_correlation(d in design_strategy(), seed in any::<u64>()) {
        prop_assume!(d.rows() >= 6);
        let r = kfold_cv(&d, &RegressorConfig::Lasso(LassoConfig::default()), 3, seed).unwrap();
        prop_assert!(r.fold_tau.iter().all(|t| (-1.0..=1.0).contains(t)));
        prop_assert_eq!(r.fold_tau.len(), 3);
    }
}
