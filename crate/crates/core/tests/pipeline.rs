use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use payscan::imgproc::{median_filter, BinaryImage, GrayImage};
use payscan::ocr::{OcrEngine, OcrResult};
use payscan::pipeline::{PipelineConfig, Recognizer};
use payscan::screen::ScreenDetection;
use payscan::synth::{render, Polarity, PosScene, StrokeWeight};
use payscan::Error;

fn frame(scene: &PosScene, h: u32) -> GrayImage {
    render(&scene.spec(h)).unwrap().frame
}

fn read(rec: &Recognizer, frame: &GrayImage) -> (ScreenDetection, payscan::extract::RecognitionOutcome) {
    rec.detect_and_recognize(frame).unwrap().expect("screen")
}

#[test]
fn straight_scene() {
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    let (det, out) = read(&rec, &frame(&PosScene::new(12345, "CREDITO"), 1600));
    assert_eq!(det.angle, 0.0);
    assert_eq!(out.value.unwrap().cents, 12345);
    assert!(out.value.unwrap().conf >= 85.0, "{:?}", out.value);
    assert_eq!(out.operation.label.as_deref(), Some("CREDITO"));
    assert_eq!(out.regions_examined, 2);
    assert_eq!(out.debug.len(), 4);
}

#[test]
fn tilted_scene_is_straightened() {
    let mut scene = PosScene::new(987_654, "VOUCHER");
    scene.angle = 25.0;
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    let (det, out) = read(&rec, &frame(&scene, 1600));
    assert!((det.angle - 25.0).abs() < 1.0);
    assert_eq!(out.value.unwrap().cents, 987_654);
    assert_eq!(out.operation.label.as_deref(), Some("VOUCHER"));
}

#[test]
fn dark_on_bright_scene() {
    let mut scene = PosScene::new(4200, "DEBITO");
    scene.polarity = Polarity::DarkOnBright;
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    let (_, out) = read(&rec, &frame(&scene, 1600));
    assert_eq!(out.value.unwrap().cents, 4200);
    assert_eq!(out.operation.label.as_deref(), Some("DEBITO"));
}

#[test]
fn thin_font_needs_the_second_pass() {
    let mut scene = PosScene::new(123_456, "CREDITO");
    scene.weight = StrokeWeight::Thin;
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    let (_, out) = read(&rec, &frame(&scene, 1200));
    let value_pass = |pass: usize| {
        out.debug
            .iter()
            .filter(|p| p.pass == pass)
            .filter_map(|p| p.value)
            .map(|v| v.conf)
            .fold(None::<f64>, |a, c| Some(a.map_or(c, |a| a.max(c))))
    };
    let threshold = rec.config().extract.value_threshold;
    assert!(value_pass(1).is_none_or(|c| c < threshold), "pass 1 read {:?}", value_pass(1));
    assert!(value_pass(2).unwrap() >= threshold);
    assert_eq!(out.value.unwrap().cents, 123_456);
    assert_eq!(out.operation.label.as_deref(), Some("CREDITO"));
    let op_pass1 = out.debug.iter().filter(|p| p.pass == 1).map(|p| p.operation.conf).fold(0.0, f64::max);
    assert!(op_pass1 < rec.config().extract.operation_threshold);
}

#[test]
fn only_one_pass_when_configured() {
    let mut scene = PosScene::new(123_456, "CREDITO");
    scene.weight = StrokeWeight::Thin;
    let cfg = PipelineConfig { passes: 1, ..PipelineConfig::default() };
    let rec = Recognizer::new(cfg).unwrap();
    let (_, out) = read(&rec, &frame(&scene, 1200));
    assert!(out.debug.iter().all(|p| p.pass == 1));
    assert!(out.value.is_none());
}

#[test]
fn parallel_matches_serial_and_repeats() {
    let scene = PosScene::random(17, &["CREDITO", "DEBITO", "VOUCHER"], 30.0);
    let f = frame(&scene, 1600);
    let serial = Recognizer::new(PipelineConfig::default()).unwrap();
    let parallel = Recognizer::new(PipelineConfig { parallel: true, ..PipelineConfig::default() }).unwrap();
    let a = read(&serial, &f);
    assert_eq!(a, read(&parallel, &f));
    assert_eq!(a, read(&serial, &f));
}

#[test]
fn small_tilt_skips_rotation() {
    let mut scene = PosScene::new(500, "DEBITO");
    scene.angle = 3.0;
    let f = frame(&scene, 1600);
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    let det = rec.detect(&f).unwrap().unwrap();
    assert!(det.angle.abs() <= rec.config().rotation_gate);
    let expected = median_filter(&f.crop(det.rect).unwrap(), 3).unwrap();
    assert_eq!(rec.prepare_screen(&f, &det).unwrap(), expected);

    let mut det = det;
    det.angle = 46.0;
    assert!(matches!(rec.prepare_screen(&f, &det), Err(Error::AngleOutOfRange(_))));
}

#[test]
fn confidences_stay_in_range() {
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    for seed in 40..44 {
        let (_, out) = read(&rec, &frame(&PosScene::random(seed, &["CREDITO", "DEBITO"], 30.0), 1200));
        for p in &out.debug {
            assert!(p.value.is_none_or(|v| (0.0..=100.0).contains(&v.conf)));
            assert!((0.0..=100.0).contains(&p.operation.conf));
        }
    }
}

#[test]
fn blank_frame_has_no_screen() {
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    assert!(rec.detect_and_recognize(&GrayImage::filled(300, 400, 0)).unwrap().is_none());
}

struct Failing(AtomicUsize);

impl OcrEngine for Failing {
    fn recognize(&self, _: &BinaryImage) -> payscan::Result<OcrResult> {
        self.0.fetch_add(1, Ordering::SeqCst);
        Err(Error::Engine("boom".into()))
    }
}

#[test]
fn engine_failures_give_an_empty_outcome() {
    let engine = Arc::new(Failing(AtomicUsize::new(0)));
    let rec = Recognizer::with_engine(PipelineConfig::default(), engine.clone()).unwrap();
    let (_, out) = read(&rec, &frame(&PosScene::new(1, "DEBITO"), 1600));
    assert!(out.value.is_none());
    assert!(out.operation.is_unknown());
    assert!(out.debug.is_empty());
    // One attempt per region; the failing region skips its second pass.
    assert_eq!(engine.0.load(Ordering::SeqCst), out.regions_examined);
}

#[test]
fn traced_run_keeps_every_pass() {
    let rec = Recognizer::new(PipelineConfig::default()).unwrap();
    let f = frame(&PosScene::new(777, "VOUCHER"), 1600);
    let det = rec.detect(&f).unwrap().unwrap();
    let (out, trace) = rec.recognize_traced(&f, &det).unwrap();
    assert_eq!(out, rec.recognize(&f, &det).unwrap());
    assert_eq!(trace.regions.len(), out.regions_examined);
    assert_eq!(trace.passes.len(), out.debug.len());
    assert!(trace.screen.is_some());
}
