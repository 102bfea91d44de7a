mod support;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use revstream::analysis::{Dataset, GaussianNb};
use revstream::features::FeatureVector;
use revstream::profile::ProfileStore;
use revstream::stream::{
    compute_metrics, prequential_run, ConfusionMatrix, EvalWindow, HoeffdingConfig, HoeffdingTree, IncrementalNb,
    OnlineForest, OnlineForestConfig, PrequentialConfig, StreamModel,
};

fn labelled_rows() -> impl Strategy<Value = Vec<(Vec<f64>, usize)>> {
    prop::collection::vec((prop::collection::vec(-5.0f64..5.0, 3), 0usize..2), 2..60)
}

fn fast_tree() -> HoeffdingConfig {
    HoeffdingConfig {
        grace_period: 10.0,
        split_confidence: 0.05,
        tie_threshold: 0.2,
        ..HoeffdingConfig::default()
    }
}

fn check_proba<M: StreamModel>(model: &mut M, rows: &[(Vec<f64>, usize)]) -> Result<(), TestCaseError> {
    for (x, y) in rows {
        let x = FeatureVector::from_dense(x.clone());
        if let Some(p) = model.predict_proba(&x) {
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9, "{p:?}");
            prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        }
        model.learn(&x, *y).unwrap();
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn probabilities_sum_to_one(rows in labelled_rows(), seed in any::<u64>()) {
        check_proba(&mut IncrementalNb::new(2), &rows)?;
        check_proba(&mut HoeffdingTree::new(2, fast_tree()), &rows)?;
        let cfg = OnlineForestConfig { n_trees: 3, seed, tree: fast_tree(), ..OnlineForestConfig::default() };
        check_proba(&mut OnlineForest::new(2, cfg).unwrap(), &rows)?;
    }

    #[test]
    fn micro_averages_equal_accuracy(tn in 0u64..1000, fp in 0u64..1000, fn_ in 0u64..1000, tp in 0u64..1000) {
        let cm = ConfusionMatrix::from_cells(tn, fp, fn_, tp);
        prop_assume!(cm.total() > 0);
        let m = compute_metrics(&cm).unwrap();
        prop_assert_eq!(m.micro_avg.precision, m.accuracy);
        prop_assert_eq!(m.micro_avg.recall, m.accuracy);
        prop_assert_eq!(m.n_scored, cm.total());
    }

    #[test]
    fn incremental_nb_equals_batch_fit_on_every_prefix(rows in labelled_rows(), probes in prop::collection::vec(prop::collection::vec(-6.0f64..6.0, 3), 1..10)) {
        let mut nb = IncrementalNb::new(2);
        for t in 1..=rows.len() {
            let (x, y) = &rows[t - 1];
            nb.learn(&FeatureVector::from_dense(x.clone()), *y).unwrap();
            let prefix = &rows[..t];
            let batch = GaussianNb::fit(&Dataset::new(
                prefix.iter().map(|r| r.0.clone()).collect(),
                prefix.iter().map(|r| r.1).collect(),
                2,
            ).unwrap()).unwrap();
            for p in &probes {
                let inc = nb.joint_log_likelihood(&FeatureVector::from_dense(p.clone()));
                let bat: Vec<f64> = batch.joint_log_likelihood(p).into_iter().map(|s| s.unwrap_or(f64::NEG_INFINITY)).collect();
                for (a, b) in inc.iter().zip(&bat) {
                    if a.is_finite() || b.is_finite() {
                        prop_assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "{inc:?} vs {bat:?}");
                    }
                }
                let margin = (bat[0] - bat[1]).abs();
                if margin > 1e-6 || !margin.is_finite() {
                    prop_assert_eq!(nb.predict(&FeatureVector::from_dense(p.clone())), Some(batch.predict(p)));
                }
            }
        }
    }

    #[test]
    fn predictions_ignore_the_future(seed in any::<u64>(), cut in 1usize..79) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let records = support::separable_stream(&mut rng, 80, 8, 30);
        let cfg = PrequentialConfig { warmup: 1, window: EvalWindow::All, vocab_len: 0 };
        let run = |recs: &[revstream::data::DailyRecord]| {
            let mut model = HoeffdingTree::new(2, fast_tree());
            prequential_run(recs, &mut model, &mut ProfileStore::new(), &cfg).unwrap()
        };
        let base = run(&records);
        // from the cut on every label flips; after it the features are shuffled too
        let mut altered = records.clone();
        let mut tail: Vec<_> = altered[cut + 1..].to_vec();
        tail.shuffle(&mut rng);
        for (slot, mut r) in altered[cut + 1..].iter_mut().zip(tail) {
            r.date = slot.date;
            *slot = r;
        }
        for r in &mut altered[cut..] {
            r.revert_label = !r.revert_label;
        }
        let other = run(&altered);
        for t in 0..=cut {
            prop_assert_eq!(base.steps[t].prediction, other.steps[t].prediction, "step {}", t);
        }
        let scored = base.steps.iter().filter(|s| s.scored).count() as u64;
        prop_assert_eq!(base.report.confusion.total(), scored);
        prop_assert_eq!(base.report.n_scored, scored);
    }
}
