//! Recognition wall time on a full-resolution 2880×3840 frame.
//!
//! cargo run --release --example timing_bench -- [repetitions]

use payscan::evalharness::{time_frames, TimingReport};
use payscan::pipeline::PipelineConfig;
use payscan::synth::{render, PosScene};

fn main() -> payscan::Result<()> {
    let reps = std::env::args().nth(1).map_or(10, |s| s.parse().expect("repetitions"));
    let mut scene = PosScene::new(1_234_567, "CREDITO");
    scene.angle = 12.0;
    let frame = render(&scene.spec(3840))?.frame;
    assert_eq!(frame.dimensions(), (2880, 3840));
    let times = time_frames(&[frame], &PipelineConfig::default(), reps)?;
    let report = TimingReport::from_samples(&times)?;
    println!("runs {reps}: {times:.3?}");
    report.write_csv(std::io::stdout())
}
