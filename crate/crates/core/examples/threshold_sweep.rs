//! Value accuracy as the confidence threshold rises from 0 to 100, over one
//! cached recognition pass of a synthetic POS dataset.
//!
//! cargo run --release --example threshold_sweep > sweep.csv

use payscan::evalharness::{run_samples, load_manifest, sweep, write_sweep_csv, write_synthetic_dataset, Machine};
use payscan::pipeline::PipelineConfig;
use payscan::synth::PosScene;

fn main() -> payscan::Result<()> {
    let tmp = tempfile::tempdir()?;
    let scenes: Vec<(Machine, PosScene)> = (100..140)
        .map(|i| {
            let mut s = PosScene::random(i, &["CREDITO", "DEBITO"], 35.0);
            // Heavier noise so the sweep has something to show.
            s.noise.gaussian_sigma += 14.0;
            s.noise.salt_pepper += 0.01;
            (Machine::Pos, s)
        })
        .collect();
    let manifest = write_synthetic_dataset(tmp.path(), &scenes, 1600)?;
    let cfg = PipelineConfig { parallel: true, ..Default::default() };
    let results = run_samples(&load_manifest(manifest)?, &cfg)?;
    write_sweep_csv(&sweep(&results, 0..=100), std::io::stdout())
}
