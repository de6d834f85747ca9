//! Accuracy table over a manifest. Without arguments a small synthetic
//! dataset of POS (bright on dark) and PIN pad (dark on bright, thin font)
//! screens is generated first.
//!
//! cargo run --release --example evaluate_dataset -- [manifest.jsonl]

use payscan::evalharness::{evaluate, load_manifest, write_synthetic_dataset, Machine};
use payscan::pipeline::PipelineConfig;
use payscan::synth::{Polarity, PosScene, StrokeWeight};

fn main() -> payscan::Result<()> {
    let tmp = tempfile::tempdir()?;
    let manifest = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let scenes: Vec<(Machine, PosScene)> = (0..24)
                .map(|i| {
                    let mut s = PosScene::random(i, &["CREDITO", "DEBITO", "VOUCHER"], 30.0);
                    if i % 3 == 0 {
                        s.polarity = Polarity::DarkOnBright;
                        s.weight = StrokeWeight::Thin;
                        (Machine::Pinpad, s)
                    } else {
                        (Machine::Pos, s)
                    }
                })
                .collect();
            write_synthetic_dataset(tmp.path(), &scenes, 1600)?
        }
    };
    let samples = load_manifest(&manifest)?;
    let report = evaluate(&samples, &PipelineConfig { parallel: true, ..Default::default() }, &[0.0, 70.0])?;
    print!("{report}");
    report.write_csv(std::io::stdout())?;
    Ok(())
}
