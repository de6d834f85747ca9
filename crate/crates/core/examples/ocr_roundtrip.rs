//! Renders strings with the built-in font and reads them back with the
//! built-in matcher, clean and with pixel noise.

use payscan::imgproc::BinaryImage;
use payscan::ocr::{BuiltinOcr, OcrEngine};
use payscan::synth::{render_line, StrokeWeight};
use rand::{Rng, SeedableRng};

fn main() -> payscan::Result<()> {
    let ocr = BuiltinOcr::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for text in ["VALOR: 1.234,56", "CRÉDITO A VISTA", "R$ 0,99", "DÉBITO"] {
        for noise in [0.0, 0.05] {
            let line = match render_line(text, ocr.atlas(), 2, StrokeWeight::Normal) {
                Ok(l) => l,
                Err(e) => {
                    println!("{text:?}: {e}");
                    break;
                }
            };
            let (w, h) = line.mask.dimensions();
            let img = BinaryImage::from_fn(w, h, |x, y| line.mask.is_set(x, y) ^ rng.random_bool(noise));
            let r = ocr.recognize(&img)?;
            let confs: Vec<u8> = r.chars().iter().map(|c| c.conf).collect();
            println!("{text:?} noise {noise}: {:?} {confs:?}", r.text());
        }
    }
    Ok(())
}
