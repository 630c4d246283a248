use std::sync::Arc;

use rinx_cli::bench::{median, read_csv, run_benchmark, summary, write_csv, BenchConfig, EventKind, CSV_HEADER};
use rinx_core::analytics::Measure;
use rinx_core::synthetic::lattice_protein;
use rinx_core::{DistanceCriterion, Trajectory};

fn toy(frames: usize) -> Arc<Trajectory> {
    Arc::new(lattice_protein(30, frames, 0.5, 4).unwrap())
}

fn small_config() -> BenchConfig {
    let mut config = BenchConfig::new("toy");
    config.criterion = DistanceCriterion::CAlpha;
    config.cutoffs = vec![5.0, 7.0];
    config.measures = vec![Measure::Degree, Measure::Betweenness, Measure::Plm];
    config.repetitions = 3;
    config.layout.max_rounds = 20;
    config
}

#[test]
fn one_record_per_cell_and_event_kind() {
    let config = small_config();
    let report = run_benchmark(toy(2), &config).unwrap();
    assert!(report.failures.is_empty());
    assert_eq!(report.records.len(), 2 * 3 * 3);
    for r in &report.records {
        assert_eq!(r.repetitions, 3);
        assert_eq!(r.n_nodes, 30);
        assert_eq!(r.protein_id, "toy");
        assert!(r.total_ms >= 0.0);
        match r.event_kind {
            EventKind::MeasureSwitch => {
                assert_eq!(r.edge_update_ms, 0.0);
                assert_eq!(r.layout_ms, 0.0);
            }
            EventKind::CutoffSwitch | EventKind::FrameSwitch => {
                assert!(r.edge_update_ms > 0.0);
                assert!(r.layout_ms > 0.0);
            }
        }
    }
    let low = report.records.iter().find(|r| r.cutoff == 5.0).unwrap();
    let high = report.records.iter().find(|r| r.cutoff == 7.0).unwrap();
    assert!(high.n_edges > low.n_edges);
    for (cutoff, measure, kind) in [(5.0, Measure::Plm, EventKind::FrameSwitch), (7.0, Measure::Degree, EventKind::MeasureSwitch)] {
        let hits = report.records.iter().filter(|r| r.cutoff == cutoff && r.measure == measure && r.event_kind == kind).count();
        assert_eq!(hits, 1);
    }
    assert!(report.records.iter().all(|r| r.event_kind != EventKind::MeasureSwitch || r.total_ms > 0.0));
}

#[test]
fn cold_runs_complete() {
    let mut config = small_config();
    config.cold = true;
    config.cutoffs = vec![6.0];
    config.measures = vec![Measure::Closeness];
    let report = run_benchmark(toy(3), &config).unwrap();
    assert_eq!(report.records.len(), 3);
    assert!(report.records.iter().all(|r| r.repetitions == 3));
}

#[test]
fn preconditions() {
    let config = small_config();
    assert!(run_benchmark(toy(1), &config).is_err());
    let mut few = small_config();
    few.repetitions = 2;
    assert!(run_benchmark(toy(2), &few).is_err());
    let mut same_frame = small_config();
    same_frame.frames = vec![1, 1];
    assert!(run_benchmark(toy(2), &same_frame).is_err());
    let mut far = small_config();
    far.frames = vec![0, 5];
    assert!(run_benchmark(toy(2), &far).is_err());
    let mut bad_cutoff = small_config();
    bad_cutoff.cutoffs = vec![5.0, -1.0];
    assert!(run_benchmark(toy(2), &bad_cutoff).is_err());
    let mut none = small_config();
    none.measures.clear();
    assert!(run_benchmark(toy(2), &none).is_err());
}

#[test]
fn failing_cells_do_not_abort_the_run() {
    let mut config = small_config();
    config.measures = vec![Measure::Degree, Measure::PageRank];
    config.analysis.damping = 1.5;
    let report = run_benchmark(toy(2), &config).unwrap();
    assert_eq!(report.records.len(), 2 * 3);
    assert!(report.records.iter().all(|r| r.measure == Measure::Degree));
    assert_eq!(report.failures.len(), 2 * 3);
    assert!(report.failures.iter().all(|f| f.measure == Measure::PageRank && !f.error.is_empty()));
}

#[test]
fn csv_schema_and_round_trip() {
    let report = run_benchmark(toy(2), &small_config()).unwrap();
    let mut bytes = Vec::new();
    write_csv(&report.records, &mut bytes).unwrap();
    let text = String::from_utf8(bytes.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    assert_eq!(lines.count(), report.records.len());
    assert!(text.contains(",MeasureSwitch,") && text.contains(",CutoffSwitch,") && text.contains(",FrameSwitch,"));
    assert!(text.contains(",betweenness,"));
    assert_eq!(read_csv(bytes.as_slice()).unwrap(), report.records);

    let mut empty = Vec::new();
    write_csv(&[], &mut empty).unwrap();
    assert_eq!(String::from_utf8(empty).unwrap().trim_end(), CSV_HEADER);
}

#[test]
fn summary_splits_cutoffs() {
    let report = run_benchmark(toy(2), &small_config()).unwrap();
    let text = summary(&report.records);
    assert!(text.contains("5 Å") && text.contains("7 Å"));
    assert_eq!(text.matches("total_ms").count(), 3);
}

#[test]
fn medians() {
    assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
    assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    assert_eq!(median(&mut [7.0]), 7.0);
}
