//! Full recognition of one frame: detection, straightening, regions, the
//! two OCR passes and field selection.
//!
//! cargo run --release --example recognize -- [frame.png] [config.txt]

use payscan::pipeline::{PipelineConfig, Recognizer};
use payscan::synth::{render, PosScene};

fn main() -> payscan::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let frame = match args.first() {
        Some(path) => payscan::io::load_png(path)?,
        None => {
            let mut scene = PosScene::new(25_990, "DEBITO");
            scene.angle = 18.0;
            scene.noise.gaussian_sigma = 6.0;
            render(&scene.spec(1600))?.frame
        }
    };
    let cfg = match args.get(1) {
        Some(path) => PipelineConfig::from_file(path)?,
        None => PipelineConfig::default(),
    };
    let rec = Recognizer::new(cfg)?;
    let Some((det, outcome)) = rec.detect_and_recognize(&frame)? else {
        println!("no screen found");
        return Ok(());
    };
    println!("screen {:?} angle {:.1}", det.rect, det.angle);
    for p in &outcome.debug {
        println!("  region at ({}, {}) pass {}: {:?}", p.rect.x, p.rect.y, p.pass, p.text);
    }
    match outcome.value {
        Some(v) => println!("value {} (conf {:.1})", payscan::synth::format_cents(v.cents), v.conf),
        None => println!("value unrecognized"),
    }
    println!("operation {} (conf {:.1})", outcome.operation.label_or_unknown(), outcome.operation.conf);
    Ok(())
}
