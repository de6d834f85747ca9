//! Blur sweep used to pick the default focus threshold.
//!
//! Renders a clean synthetic scene at the detector's work height, blurs it
//! with box radii 0 to 6 and prints the focus score of each. The threshold is
//! the geometric mean of the radius-1 and radius-2 scores.
//!
//! cargo run --example calibrate_focus

use payscan::imgproc::{box_blur, laplacian_variance};
use payscan::screen::{ScreenConfig, DEFAULT_FOCUS_MIN};
use payscan::synth::{render, PosScene};

fn main() -> payscan::Result<()> {
    let work_h = ScreenConfig::default().work_height;
    let scene = render(&PosScene::new(12345, "CREDITO").spec(work_h))?;
    let mut scores = Vec::new();
    println!("radius,focus");
    for r in 0..=6 {
        let f = laplacian_variance(&box_blur(&scene.frame, r))?;
        println!("{r},{f:.2}");
        scores.push(f);
    }
    let knee = (scores[1] * scores[2]).sqrt();
    println!("knee {knee:.1} (shipped default {DEFAULT_FOCUS_MIN})");
    Ok(())
}
