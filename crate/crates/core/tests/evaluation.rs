use payscan::evalharness::{
    evaluate, load_manifest, run_samples, sweep, threshold_sweep, timing_bench,
    write_synthetic_dataset, EvalReport, Machine, Metric,
};
use payscan::pipeline::PipelineConfig;
use payscan::synth::{Polarity, PosScene};

fn dataset(dir: &std::path::Path) -> Vec<payscan::evalharness::DatasetSample> {
    let scenes: Vec<(Machine, PosScene)> = (0..6)
        .map(|i| {
            let mut s = PosScene::random(i, &["CREDITO", "DEBITO", "VOUCHER"], 20.0);
            if i >= 4 {
                s.polarity = Polarity::DarkOnBright;
                (Machine::Pinpad, s)
            } else {
                (Machine::Pos, s)
            }
        })
        .collect();
    load_manifest(write_synthetic_dataset(dir, &scenes, 1200).unwrap()).unwrap()
}

#[test]
fn report_rows_cover_every_sample() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dataset(dir.path());
    let cfg = PipelineConfig { parallel: true, ..PipelineConfig::default() };
    let results = run_samples(&samples, &cfg).unwrap();
    assert!(results.windows(2).all(|w| w[0].image_path < w[1].image_path));
    let report = EvalReport::from_results(&results, &[0.0, 70.0]);
    assert_eq!(report.rows.len(), 2 * 2 * 2);
    for row in &report.rows {
        let expected = if row.machine == Machine::Pos { 4 } else { 2 };
        assert_eq!(row.counts.total(), expected);
        let (c, i, u) = row.counts.percentages();
        assert!((c + i + u - 100.0).abs() < 1e-9);
    }
    let pos = report.row(Machine::Pos, Metric::Value, 0.0).unwrap();
    assert_eq!(pos.counts.correct, 4);
    assert_eq!(report, evaluate(&samples, &cfg, &[0.0, 70.0]).unwrap());

    let rows = sweep(&results, 0..=100);
    let at_zero = EvalReport::from_results(&results, &[0.0]);
    let sum_zero: usize = at_zero.rows.iter().filter(|r| r.metric == Metric::Value).map(|r| r.counts.correct).sum();
    assert_eq!(rows[0].counts.correct, sum_zero);
    assert_eq!(rows[0].counts.unrecognized, results.iter().filter(|r| r.value.is_none()).count());
    assert_eq!(rows, threshold_sweep(&samples, &cfg).unwrap());
}

#[test]
fn timing_of_one_run() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dataset(dir.path());
    let report = timing_bench(&samples[..1], &PipelineConfig::default(), 1).unwrap();
    assert_eq!(report.min, report.max);
    assert_eq!(report.median, report.min);
    assert_eq!(report.stddev, 0.0);
    assert!(report.min > 0.0);
}
