//! Rotates one straight-screen frame by ±1..50 degrees, cropped and
//! uncropped, and reports how often the value is still read.
//!
//! cargo run --release --example rotation_suite [frame.png cents] [out_dir]

use payscan::evalharness::{Rotation, Variant};
use payscan::pipeline::{PipelineConfig, Recognizer};
use payscan::synth::{render, PosScene};
use rayon::prelude::*;

fn main() -> payscan::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (src, cents) = match args.as_slice() {
        [path, cents, ..] => (
            payscan::io::load_png(path)?,
            cents.parse().expect("cents must be an integer"),
        ),
        _ => {
            let scene = PosScene::new(123456, "CREDITO");
            (render(&scene.spec(1600))?.frame, scene.value_cents)
        }
    };
    if let Some(dir) = args.get(2) {
        let paths = payscan::evalharness::generate_rotations(&src, dir)?;
        println!("wrote {} images to {dir}", paths.len());
    }

    let rec = Recognizer::new(PipelineConfig::default())?;
    let results: Vec<(Rotation, Option<u64>)> = Rotation::suite()
        .into_par_iter()
        .map(|r| {
            let frame = r.apply(&src);
            let got = rec
                .detect_and_recognize(&frame)
                .ok()
                .flatten()
                .and_then(|(_, o)| o.value.map(|v| v.cents));
            (r, got)
        })
        .collect();

    for variant in [Variant::Cropped, Variant::Uncropped] {
        let mut ok = 0;
        let mut misses = Vec::new();
        for (r, got) in results.iter().filter(|(r, _)| r.variant == variant) {
            if *got == Some(cents) {
                ok += 1;
            } else {
                misses.push(r.angle);
            }
        }
        misses.sort();
        println!("{:<9} {ok}/100 correct, misses at {misses:?}", variant.as_str());
    }
    let total = results.iter().filter(|(_, g)| *g == Some(cents)).count();
    println!("overall   {total}/200 ({:.1}%)", total as f64 / 2.0);
    Ok(())
}
