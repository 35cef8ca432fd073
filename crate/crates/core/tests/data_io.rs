//! Dataset generation, file formats, splits and batches.

use std::fs;

use glif_core::datasets::{
    burst_window, encode_idx, load_csv, load_idx, parse_idx, rate_class_means, write_csv, write_idx, IdxArray, IdxType,
    SyntheticTaskSpec, TaskKind,
};
use glif_core::Error;
use proptest::prelude::*;

fn task(kind: TaskKind, num_classes: usize, noise_std: f64, seed: u64) -> SyntheticTaskSpec {
    SyntheticTaskSpec {
        kind,
        dim: 16,
        time_steps: 8,
        num_classes,
        samples_per_class: 40,
        noise_std,
        seed,
    }
}

#[test]
fn csv_fixture_loads_exact_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fixture.csv");
    fs::write(&path, "label,f0,f1,f2\n0,0.25,0.5,1\n2,0.125,0,0.75\n1, 0.1 ,0.2,0.3\n").unwrap();
    let data = load_csv(&path, 3).unwrap();
    assert_eq!((data.len(), data.num_classes, data.dim, data.time_steps), (3, 3, 3, 3));
    assert_eq!(data.samples.iter().map(|s| s.label).collect::<Vec<_>>(), [0, 2, 1]);
    assert_eq!(data.samples[0].input, vec![vec![0.25, 0.5, 1.0]; 3]);
    assert_eq!(data.samples[1].input[2], [0.125, 0.0, 0.75]);
    assert_eq!(data.samples[2].input[0], [0.1, 0.2, 0.3]);
}

#[test]
fn csv_outside_unit_interval_is_rescaled_globally() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.csv");
    fs::write(&path, "label,f0,f1\n0,-2,0\n1,2,1\n").unwrap();
    let data = load_csv(&path, 1).unwrap();
    assert_eq!(data.samples[0].input[0], [0.0, 0.5]);
    assert_eq!(data.samples[1].input[0], [1.0, 0.75]);
}

#[test]
fn empty_and_malformed_csv_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert!(matches!(load_csv(&empty, 2), Err(Error::Dataset(_))));

    let header_only = dir.path().join("header.csv");
    fs::write(&header_only, "label,f0\n").unwrap();
    assert!(matches!(load_csv(&header_only, 2), Err(Error::Dataset(_))));

    let bad_header = dir.path().join("bad_header.csv");
    fs::write(&bad_header, "y,x\n0,1\n").unwrap();
    assert!(matches!(load_csv(&bad_header, 2), Err(Error::Parse { location, .. }) if location == "line 1"));

    let bad_value = dir.path().join("bad_value.csv");
    fs::write(&bad_value, "label,f0,f1\n0,0.1,0.2\n1,0.3,oops\n").unwrap();
    let err = load_csv(&bad_value, 2).unwrap_err();
    assert!(matches!(&err, Error::Parse { location, .. } if location == "line 3"), "{err}");
    assert!(err.to_string().contains("oops"));

    let ragged = dir.path().join("ragged.csv");
    fs::write(&ragged, "label,f0,f1\n0,0.1,0.2\n1,0.3\n").unwrap();
    assert!(matches!(load_csv(&ragged, 2), Err(Error::Parse { location, .. }) if location == "line 3"));

    let missing = dir.path().join("missing.csv");
    assert!(matches!(load_csv(&missing, 2), Err(Error::Io { .. })));
}

#[test]
fn idx_u8_images_scale_by_255() {
    let dir = tempfile::tempdir().unwrap();
    let (img, lab) = (dir.path().join("img.idx"), dir.path().join("lab.idx"));
    let images = IdxArray { kind: IdxType::U8, dims: vec![2, 2, 2], values: vec![0.0, 51.0, 102.0, 255.0, 255.0, 0.0, 0.0, 0.0] };
    let labels = IdxArray { kind: IdxType::U8, dims: vec![2], values: vec![1.0, 0.0] };
    fs::write(&img, encode_idx(&images)).unwrap();
    fs::write(&lab, encode_idx(&labels)).unwrap();
    let data = load_idx(&img, &lab, 4).unwrap();
    assert_eq!((data.dim, data.time_steps, data.num_classes), (4, 4, 2));
    assert_eq!(data.samples[0].input[3], [0.0, 0.2, 0.4, 1.0]);
    assert_eq!(data.samples[0].label, 1);
}

#[test]
fn malformed_idx_files_are_rejected() {
    let p = std::path::Path::new("x.idx");
    assert!(matches!(parse_idx(&[], p), Err(Error::Dataset(_))));
    assert!(matches!(parse_idx(&[1, 0, 8, 1], p), Err(Error::Parse { .. })));
    assert!(matches!(parse_idx(&[0, 0, 0x42, 1, 0, 0, 0, 0], p), Err(Error::Parse { .. })));
    let mut bytes = encode_idx(&IdxArray { kind: IdxType::I16, dims: vec![3], values: vec![1.0, -2.0, 300.0] });
    assert_eq!(parse_idx(&bytes, p).unwrap().values, [1.0, -2.0, 300.0]);
    bytes.pop();
    let err = parse_idx(&bytes, p).unwrap_err();
    assert!(err.to_string().contains("expected 14 bytes, found 13"), "{err}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn csv_and_idx_round_trip(seed in any::<u64>(), classes in 1..5usize, noise in 0.0..0.3f64) {
        let data = task(TaskKind::RatePatterns, classes, noise, seed).generate().unwrap();
        let dir = tempfile::tempdir().unwrap();
        let csv = dir.path().join("d.csv");
        write_csv(&data, &csv).unwrap();
        prop_assert_eq!(&load_csv(&csv, data.time_steps).unwrap(), &data);
        let (img, lab) = (dir.path().join("i.idx"), dir.path().join("l.idx"));
        write_idx(&data, &img, &lab).unwrap();
        prop_assert_eq!(&load_idx(&img, &lab, data.time_steps).unwrap(), &data);
    }

    #[test]
    fn idx_encoding_round_trips(values in proptest::collection::vec(-1000i32..1000, 1..40)) {
        for kind in [IdxType::I16, IdxType::I32, IdxType::F32, IdxType::F64] {
            let a = IdxArray { kind, dims: vec![values.len()], values: values.iter().map(|&v| v as f64).collect() };
            prop_assert_eq!(parse_idx(&encode_idx(&a), std::path::Path::new("p")).unwrap(), a);
        }
    }

    #[test]
    fn temporal_classes_carry_equal_energy(seed in any::<u64>(), classes in 2..5usize) {
        let data = task(TaskKind::TemporalPositionPatterns, classes, 0.0, seed).generate().unwrap();
        let base = &data.samples[0].input;
        let (s0, _) = burst_window(0, classes, 8);
        for s in &data.samples {
            let (start, end) = burst_window(s.label, classes, 8);
            prop_assert_eq!(end - start, 8 / classes);
            // Shifting the burst back to window 0 recovers class 0's sample.
            for (t, want) in base.iter().enumerate() {
                let src = if (s0..s0 + end - start).contains(&t) { &s.input[t - s0 + start] } else { &vec![0.0; 16] };
                prop_assert_eq!(src, want);
            }
            let total: f64 = s.input.iter().flatten().sum();
            let base_total: f64 = base.iter().flatten().sum();
            prop_assert!((total - base_total).abs() <= 1e-12);
        }
    }

    #[test]
    fn splits_and_batches_are_seeded_partitions(seed in any::<u64>(), frac in 0.0..0.9f64, bs in 1..50usize) {
        let data = task(TaskKind::RatePatterns, 3, 0.1, 1).generate().unwrap();
        let (a_train, a_eval) = data.split(frac, seed).unwrap();
        let (b_train, b_eval) = data.split(frac, seed).unwrap();
        prop_assert_eq!(&a_train, &b_train);
        prop_assert_eq!(&a_eval, &b_eval);
        prop_assert_eq!(a_eval.len(), (frac * data.len() as f64).round() as usize);
        prop_assert_eq!(a_train.len() + a_eval.len(), data.len());

        let batches = data.batches(bs, seed);
        prop_assert_eq!(&batches, &data.batches(bs, seed));
        prop_assert!(batches.iter().all(|b| !b.is_empty() && b.len() <= bs));
        let mut all: Vec<usize> = batches.concat();
        all.sort_unstable();
        prop_assert_eq!(all, (0..data.len()).collect::<Vec<_>>());
    }
}

#[test]
fn rate_task_is_separable_by_nearest_class_mean() {
    for seed in 0..5 {
        let spec = task(TaskKind::RatePatterns, 3, 0.1, seed);
        let data = spec.generate().unwrap();
        let means = rate_class_means(&spec);
        let dist = |x: &[f64], m: &[f64]| x.iter().zip(m).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        let correct = data
            .samples
            .iter()
            .filter(|s| {
                let x = &s.input[0];
                let best = (0..3).min_by(|&a, &b| dist(x, &means[a]).total_cmp(&dist(x, &means[b]))).unwrap();
                best == s.label
            })
            .count();
        assert!(correct as f64 / data.len() as f64 >= 0.99, "seed {seed}: {correct}/{}", data.len());
    }
}

#[test]
fn generation_is_seeded_and_inputs_lie_in_unit_interval() {
    for kind in [TaskKind::RatePatterns, TaskKind::TemporalPositionPatterns] {
        let a = task(kind, 3, 0.2, 4).generate().unwrap();
        assert_eq!(a, task(kind, 3, 0.2, 4).generate().unwrap());
        assert_ne!(a, task(kind, 3, 0.2, 5).generate().unwrap());
        assert!(a.samples.iter().flat_map(|s| s.input.iter().flatten()).all(|v| (0.0..=1.0).contains(v)));
    }
}

#[test]
fn degenerate_tasks_are_rejected() {
    let mut spec = task(TaskKind::TemporalPositionPatterns, 9, 0.1, 0);
    assert!(matches!(spec.generate(), Err(Error::Dataset(_))));
    spec.num_classes = 2;
    spec.noise_std = -1.0;
    assert!(matches!(spec.generate(), Err(Error::Dataset(_))));
}
