//! Recognition through an external OCR program instead of the built-in
//! matcher. The program gets a PNG path and prints `<char>\t<conf>` rows.
//!
//! cargo run --example external_ocr -- scripts/tesseract_shim.py

use payscan::pipeline::{OcrSelection, PipelineConfig, Recognizer};
use payscan::synth::{render, PosScene};

fn main() -> payscan::Result<()> {
    let Some(program) = std::env::args().nth(1) else {
        eprintln!("usage: external_ocr <program>");
        std::process::exit(2);
    };
    let cfg = PipelineConfig {
        ocr: OcrSelection::External { program: program.into() },
        ..Default::default()
    };
    let rec = Recognizer::new(cfg)?;
    let frame = render(&PosScene::new(5000, "VOUCHER").spec(1600))?.frame;
    match rec.detect_and_recognize(&frame)? {
        Some((_, o)) => println!("{:?} {}", o.value, o.operation.label_or_unknown()),
        None => println!("no screen"),
    }
    Ok(())
}
