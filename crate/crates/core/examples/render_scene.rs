//! Renders a synthetic payment screen and its ground truth.
//!
//! cargo run --example render_scene -- [cents] [operation] [angle] [out.png]

use payscan::synth::{render, Polarity, PosScene};

fn main() -> payscan::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let cents = args.first().map_or(123456, |s| s.parse().expect("cents"));
    let operation = args.get(1).map_or("CREDITO", String::as_str);
    let mut scene = PosScene::new(cents, operation);
    scene.angle = args.get(2).map_or(12.0, |s| s.parse().expect("angle"));
    scene.polarity = Polarity::DarkOnBright;
    scene.noise.gaussian_sigma = 4.0;
    let out = args.get(3).map_or("scene.png", String::as_str);

    let rendered = render(&scene.spec(1600))?;
    payscan::io::save_png(&rendered.frame, out)?;
    println!("wrote {out}, screen box {:?}", rendered.screen_box);
    for line in &rendered.lines {
        println!("{:<20} frame box {:?}", line.text, line.frame_box);
    }
    Ok(())
}
