//! Text-line regions of a straightened screen, with the intermediate
//! top-hat, dilation and threshold images written to a directory.
//!
//! cargo run --example regions -- [out_dir]

use payscan::pipeline::{PipelineConfig, Recognizer};
use payscan::roi::detect_regions_staged;
use payscan::synth::{render, PosScene};

fn main() -> payscan::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "regions_out".into());
    std::fs::create_dir_all(&out)?;
    let mut scene = PosScene::new(870, "VOUCHER");
    scene.angle = -15.0;
    let frame = render(&scene.spec(1600))?.frame;

    let rec = Recognizer::new(PipelineConfig::default())?;
    let det = rec.detect(&frame)?.expect("screen");
    let screen = rec.prepare_screen(&frame, &det)?;
    let (regions, stages) = detect_regions_staged(&screen, &rec.config().roi)?;

    for (name, img) in [
        ("screen", &screen),
        ("half", &stages.half),
        ("tophat", &stages.tophat),
        ("dilated", &stages.dilated),
        ("binary", &stages.binary),
    ] {
        payscan::io::save_png(img, format!("{out}/{name}.png"))?;
    }
    for (i, r) in regions.iter().enumerate() {
        println!("region {i}: {:?}", r.rect);
        payscan::io::save_png(&r.image, format!("{out}/region_{i}.png"))?;
    }
    Ok(())
}
