use gssl_core::experiment::{
    aggregate_path, alpha_sweep, random_label_trials, read_csv, run_cell, trial_labels,
    write_csv, EvalSet, SweepResult, SweepSpec,
};
use gssl_core::fixtures::les_miserables;
use gssl_core::ssl::{build_label_matrix, solve};
use gssl_core::synth::{planted_partition, PlantedPartitionSpec};
use gssl_core::{LabelSet, MethodParams, SolveMode};

fn small_spec() -> SweepSpec {
    SweepSpec {
        alphas: vec![0.5, 0.9],
        sigmas: vec![0.0, 0.5, 1.0],
        trials: 2,
        labels_per_class: 1,
        seed: 17,
        evaluation: EvalSet::Unlabeled,
    }
}

#[test]
fn row_count_order_and_csv_round_trip() {
    let (g, truth) = les_miserables().unwrap();
    let result = random_label_trials(&g, &truth, &small_spec()).unwrap();
    assert_eq!(result.rows.len(), 12);
    assert_eq!(result.aggregates.len(), 6);
    let keys: Vec<(f64, f64, usize)> = result.rows.iter().map(|r| (r.sigma, r.alpha, r.trial)).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    write_csv(&result, &path).unwrap();
    assert_eq!(read_csv(&path).unwrap(), result.rows);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("sigma,alpha,trial,modularity,precision,iterations\n"));
    let agg = std::fs::read_to_string(aggregate_path(&path)).unwrap();
    assert_eq!(agg.lines().count(), 7);
}

#[test]
fn empty_result_writes_headers_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    write_csv(&SweepResult::default(), &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "sigma,alpha,trial,modularity,precision,iterations\n"
    );
    assert!(read_csv(&path).unwrap().is_empty());
}

#[test]
fn write_csv_reports_path_on_failure() {
    let err = write_csv(&SweepResult::default(), std::path::Path::new("/nonexistent/dir/x.csv"))
        .unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
}

#[test]
fn aggregates_are_trial_means() {
    let (g, truth) = les_miserables().unwrap();
    let spec = SweepSpec {
        trials: 5,
        ..small_spec()
    };
    let result = random_label_trials(&g, &truth, &spec).unwrap();
    for agg in &result.aggregates {
        let cell: Vec<_> = result
            .rows
            .iter()
            .filter(|r| r.sigma == agg.sigma && r.alpha == agg.alpha)
            .collect();
        assert_eq!(cell.len(), 5);
        let mean = cell.iter().map(|r| r.modularity).sum::<f64>() / 5.0;
        assert!((agg.modularity_mean - mean).abs() < 1e-12);
        let pmean = cell.iter().map(|r| r.precision.unwrap()).sum::<f64>() / 5.0;
        assert!((agg.precision_mean.unwrap() - pmean).abs() < 1e-12);
    }
}

#[test]
fn trials_are_paired_and_reproducible() {
    let (g, truth) = les_miserables().unwrap();
    let spec = small_spec();
    let a = random_label_trials(&g, &truth, &spec).unwrap();
    let b = random_label_trials(&g, &truth, &spec).unwrap();
    assert_eq!(a, b);

    for row in &a.rows {
        let labels = trial_labels(&truth, 1, spec.seed, row.trial).unwrap();
        let cell = run_cell(&g, &labels, Some(&truth), row.sigma, row.alpha, EvalSet::Unlabeled)
            .unwrap();
        assert_eq!(cell.modularity, row.modularity);
        assert_eq!(cell.precision, row.precision);
    }
    assert_ne!(
        trial_labels(&truth, 1, spec.seed, 0).unwrap(),
        trial_labels(&truth, 1, spec.seed, 1).unwrap()
    );
}

#[test]
fn too_many_labels_rejected() {
    let (g, truth) = les_miserables().unwrap();
    let spec = SweepSpec {
        labels_per_class: 11,
        ..small_spec()
    };
    assert!(random_label_trials(&g, &truth, &spec).is_err());
}

#[test]
fn tiny_alpha_reproduces_labels() {
    let (g, truth) = les_miserables().unwrap();
    let labels = trial_labels(&truth, 1, 3, 0).unwrap();
    let spec = SweepSpec {
        alphas: vec![0.001],
        sigmas: vec![0.0, 1.0],
        ..small_spec()
    };
    let result = alpha_sweep(&g, &labels, Some(&truth), &spec).unwrap();
    assert_eq!(result.rows.len(), 2);
    assert!(result.rows.iter().all(|r| r.trial == 0));

    let y = build_label_matrix(&labels, g.node_count()).unwrap();
    for sigma in [0.0, 1.0] {
        let p = MethodParams::new(sigma, 0.001).unwrap();
        let r = solve(&g, &y, &p, SolveMode::Iterative).unwrap();
        assert!((&r.scores - &y).abs().max() < 1e-2);
        for (node, class) in labels.iter() {
            assert_eq!(r.labels[node], class);
        }
    }
}

#[test]
fn alpha_sweep_without_truth_has_no_precision() {
    let (g, _) = les_miserables().unwrap();
    let v = g.index_of("Valjean").unwrap();
    let c = g.index_of("Cosette").unwrap();
    let labels = LabelSet::from_pairs(2, [(v, 0), (c, 1)]).unwrap();
    let r = alpha_sweep(&g, &labels, None, &small_spec()).unwrap();
    assert_eq!(r.rows.len(), 6);
    assert!(r.rows.iter().all(|row| row.precision.is_none()));
}

#[test]
fn more_labels_do_not_hurt_modularity() {
    let spec = PlantedPartitionSpec {
        sizes: vec![120, 120],
        p_in: vec![0.15, 0.1],
        p_out: 0.04,
        seed: 8,
    };
    let (g, truth) = planted_partition(&spec).unwrap();
    let mut previous: Option<(f64, f64)> = None;
    for per_class in [5, 10, 25, 50, 100] {
        let sweep = SweepSpec {
            alphas: vec![0.9],
            sigmas: vec![0.0],
            trials: 10,
            labels_per_class: per_class,
            seed: 4,
            evaluation: EvalSet::Unlabeled,
        };
        let r = random_label_trials(&g, &truth, &sweep).unwrap();
        let agg = &r.aggregates[0];
        if let Some((mean, std)) = previous {
            assert!(
                agg.modularity_mean >= mean - std,
                "{per_class} labels: {} after {mean} +- {std}",
                agg.modularity_mean
            );
        }
        previous = Some((agg.modularity_mean, agg.modularity_std));
    }
}
