//! Screen detection and positioning feedback over a short burst of frames.
//!
//! The burst zooms in on a synthetic terminal: far away, then well framed for
//! five frames, then too close. The tracker fires once five valid frames in
//! a row have been seen.
//!
//! cargo run --example detect_screen -- [frame.png]

use payscan::screen::{assess_frame, detect_screen, FeedbackTracker, ScreenConfig, REQUIRED_VALID_FRAMES};
use payscan::synth::{render, PosScene};

fn main() -> payscan::Result<()> {
    let cfg = ScreenConfig::default();
    if let Some(path) = std::env::args().nth(1) {
        let frame = payscan::io::load_png(&path)?;
        let det = detect_screen(&frame, &cfg)?;
        println!("{:?}", det);
        println!("{}", assess_frame(det.as_ref(), frame.dimensions(), &cfg));
        return Ok(());
    }

    let scene = PosScene::new(4990, "DEBITO");
    let mut tracker = FeedbackTracker::new(REQUIRED_VALID_FRAMES);
    for (i, zoom) in [0.2, 1.0, 1.0, 1.0, 1.0, 1.0, 2.2].into_iter().enumerate() {
        let mut spec = scene.spec(1600);
        let s = &mut spec.screen;
        let (cx, cy) = (s.x + s.w as i32 / 2, s.y + s.h as i32 / 2);
        s.w = (s.w as f64 * zoom) as u32;
        s.h = (s.h as f64 * zoom) as u32;
        s.x = cx - s.w as i32 / 2;
        s.y = cy - s.h as i32 / 2;
        spec.lines.clear();
        let frame = render(&spec)?.frame;
        let det = detect_screen(&frame, &cfg)?;
        let fb = assess_frame(det.as_ref(), frame.dimensions(), &cfg);
        let fired;
        (tracker, fired) = tracker.update(fb);
        let rect = det.map(|d| format!("{:?} angle {:.1} focus {:.0}", d.rect, d.angle, d.focus));
        println!("frame {i}: {fb:<12} streak {} {}{}", tracker.consecutive(), rect.unwrap_or_default(),
            if fired { "  -> recognize" } else { "" });
    }
    Ok(())
}
