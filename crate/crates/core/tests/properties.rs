use payscan::extract::{
    extract_value, levenshtein, match_operation, select_best, value_confidence, ExtractConfig,
    OperationCandidate, PassResult, ValueCandidate,
};
use payscan::imgproc::{
    box_blur, laplacian_variance, resize_nearest, rotate_about_center, GrayImage, RectI,
};
use payscan::ocr::{BuiltinOcr, OcrChar, OcrEngine, OcrResult};
use payscan::roi::{detect_regions, RoiConfig};
use payscan::screen::{
    assess_frame, detect_screen, FeedbackTracker, FrameFeedback, ScreenConfig,
    REQUIRED_VALID_FRAMES,
};
use payscan::synth::{render, PosScene};
use proptest::prelude::*;

fn arb_gray(max: u32) -> impl Strategy<Value = GrayImage> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), (w * h) as usize)
            .prop_map(move |d| GrayImage::new(w, h, d).unwrap())
    })
}

/// Full-matrix edit distance over chars.
fn levenshtein_oracle(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in d.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in d[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
        }
    }
    d[a.len()][b.len()]
}

fn short_text() -> impl Strategy<Value = String> {
    "[ABCDE]{0,8}"
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resize_adds_no_new_intensities(img in arb_gray(24), h in 1u32..40) {
        let out = resize_nearest(&img, h).unwrap();
        let before: std::collections::HashSet<u8> = img.as_raw().iter().copied().collect();
        prop_assert!(out.as_raw().iter().all(|v| before.contains(v)));
    }

    #[test]
    fn detected_rect_stays_inside_the_frame(img in arb_gray(48)) {
        let cfg = ScreenConfig { work_height: 32, ..ScreenConfig::default() };
        if let Some(det) = detect_screen(&img, &cfg).unwrap() {
            let (w, h) = img.dimensions();
            prop_assert!(RectI::new(0, 0, w, h).contains_rect(&det.rect));
            prop_assert!(det.rect.area() > 0);
            prop_assert!(det.angle > -45.0 && det.angle <= 45.0);
        }
    }

    #[test]
    fn tracker_matches_a_reference_counter(valid in proptest::collection::vec(any::<bool>(), 0..60)) {
        let mut tracker = FeedbackTracker::default();
        let mut run = 0;
        for v in valid {
            let fb = if v { FrameFeedback::Valid } else { FrameFeedback::OffCenter };
            let fired;
            (tracker, fired) = tracker.update(fb);
            run = if v { run + 1 } else { 0 };
            prop_assert_eq!(fired, run == REQUIRED_VALID_FRAMES);
            if fired {
                run = 0;
            }
            prop_assert_eq!(tracker.consecutive(), run);
        }
    }

    #[test]
    fn levenshtein_matches_full_matrix(a in "[a-d]{0,20}", b in "[a-d]{0,20}") {
        prop_assert_eq!(levenshtein(&a, &b), levenshtein_oracle(&a, &b));
        let gap = a.chars().count().abs_diff(b.chars().count());
        prop_assert!(levenshtein(&a, &b) >= gap);
    }

    #[test]
    fn levenshtein_is_a_metric(a in short_text(), b in short_text(), c in short_text()) {
        prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
        prop_assert_eq!(levenshtein(&a, &b) == 0, a == b);
        prop_assert!(levenshtein(&a, &c) <= levenshtein(&a, &b) + levenshtein(&b, &c));
    }

    #[test]
    fn extracted_values_reserialize(text in "[0-9 .,:A-Z]{0,24}") {
        if let Some(v) = extract_value(&OcrResult::uniform(&text, 80)) {
            let s = format!("{},{:02}", v.cents / 100, v.cents % 100);
            prop_assert_eq!(extract_value(&OcrResult::uniform(&s, 80)).map(|w| w.cents), Some(v.cents));
        }
    }

    #[test]
    fn confidence_ignores_digit_order(mut ints in proptest::collection::vec(0u8..=100, 1..8), decs in (0u8..=100, 0u8..=100), seed in any::<u64>()) {
        let f = |v: &[u8]| v.iter().map(|&c| c as f64).collect::<Vec<_>>();
        let before = value_confidence(&f(&ints), &f(&[decs.0, decs.1]));
        let n = ints.len();
        ints.rotate_left(seed as usize % n);
        ints.reverse();
        let after = value_confidence(&f(&ints), &f(&[decs.0, decs.1]));
        prop_assert!((before - after).abs() < 1e-9);
        prop_assert!((0.0..=100.0).contains(&before));
    }

    #[test]
    fn threshold_is_a_post_filter(confs in proptest::collection::vec(0.0f64..=100.0, 1..6), t1 in 0.0f64..=100.0, t2 in 0.0f64..=100.0) {
        let passes: Vec<PassResult> = confs.iter().enumerate().map(|(i, &c)| PassResult {
            rect: RectI::new(0, i as i32 * 10, 50, 8),
            pass: 1,
            text: String::new(),
            value: Some(ValueCandidate { cents: i as u64, conf: c }),
            operation: OperationCandidate { label: Some("DEBITO".into()), conf: c },
        }).collect();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let run = |t: f64| {
            let cfg = ExtractConfig { value_threshold: t, operation_threshold: t, ..ExtractConfig::default() };
            select_best(&passes, passes.len(), &cfg)
        };
        let (a, b) = (run(lo), run(hi));
        if a.value.is_none() {
            prop_assert!(b.value.is_none());
        }
        if let Some(bv) = b.value {
            prop_assert_eq!(a.value, Some(bv));
        }
        let mut reversed = passes.clone();
        reversed.reverse();
        let cfg = ExtractConfig { value_threshold: lo, operation_threshold: lo, ..ExtractConfig::default() };
        prop_assert_eq!(select_best(&reversed, passes.len(), &cfg), a);
    }

    #[test]
    fn blacklist_words_are_never_labels(text in "[A-Z ]{0,20}", black in "[A-Z]{1,8}") {
        let cfg = ExtractConfig {
            operations: vec!["CREDITO".into(), "DEBITO".into(), black.clone()],
            blacklist: vec![black.clone()],
            ..ExtractConfig::default()
        }.normalized().unwrap();
        let m = match_operation(&OcrResult::uniform(&text, 90), &cfg);
        prop_assert_ne!(m.label.as_deref(), Some(black.as_str()));
    }

    #[test]
    fn builtin_ocr_is_deterministic(img in arb_gray(40)) {
        let bin = payscan::imgproc::BinaryImage::threshold(&img, 128);
        let ocr = BuiltinOcr::default();
        prop_assert_eq!(ocr.recognize(&bin).unwrap(), ocr.recognize(&bin).unwrap());
    }
}

#[test]
fn levenshtein_examples() {
    for (a, b, d) in [("kitten", "sitting", 3), ("", "", 0), ("ÇÃO", "CAO", 2), ("flaw", "lawn", 2)] {
        assert_eq!(levenshtein(a, b), d);
        assert_eq!(levenshtein_oracle(a, b), d);
    }
}

#[test]
fn focus_falls_under_repeated_blur() {
    let frame = render(&PosScene::new(31415, "VOUCHER").spec(640)).unwrap().frame;
    let mut img = frame;
    let mut last = laplacian_variance(&img).unwrap();
    for _ in 0..6 {
        img = box_blur(&img, 1);
        let f = laplacian_variance(&img).unwrap();
        assert!(f <= last, "{f} > {last}");
        last = f;
    }
}

#[test]
fn rotation_round_trip_is_close() {
    let frame = render(&PosScene::new(4321, "CREDITO").spec(640)).unwrap().frame;
    let back = rotate_about_center(&rotate_about_center(&frame, 10.0).unwrap(), -10.0).unwrap();
    let (w, h) = frame.dimensions();
    let (x0, y0) = (w / 10, h / 10);
    let (x1, y1) = (w - w / 10, h - h / 10);
    let mut sum = 0u64;
    for y in y0..y1 {
        for x in x0..x1 {
            sum += frame.get(x, y).abs_diff(back.get(x, y)) as u64;
        }
    }
    let mad = sum as f64 / ((x1 - x0) * (y1 - y0)) as f64;
    assert!(mad < 3.0, "mean absolute difference {mad}");
}

#[test]
fn zero_noise_scene_recovers_the_screen() {
    for angle in [0.0, 7.5, -20.0] {
        let mut scene = PosScene::new(100, "DEBITO");
        scene.angle = angle;
        let rendered = render(&scene.spec(1600)).unwrap();
        let det = detect_screen(&rendered.frame, &ScreenConfig::default()).unwrap().unwrap();
        let (a, b) = (det.rect, rendered.screen_box);
        let edges = [a.x - b.x, a.y - b.y, a.right() - b.right(), a.bottom() - b.bottom()];
        assert!(edges.iter().all(|e| e.abs() <= 2), "{angle}: {a:?} vs {b:?}");
        assert!((det.angle - angle).abs() < 1.0, "{angle}: {}", det.angle);
        assert_eq!(assess_frame(Some(&det), rendered.frame.dimensions(), &ScreenConfig::default()), FrameFeedback::Valid);
    }
}

#[test]
fn rendering_is_reproducible() {
    let scene = PosScene::random(99, &["CREDITO"], 30.0);
    let a = render(&scene.spec(800)).unwrap();
    let b = render(&scene.spec(800)).unwrap();
    assert_eq!(a.frame, b.frame);
    assert_eq!(a.lines, b.lines);
}

/// Clean, straight screens of random content, with the line boxes regions
/// should cover.
fn suite_screens() -> Vec<(GrayImage, Vec<RectI>)> {
    (0..6)
        .map(|i| {
            let random = PosScene::random(i, &["CREDITO", "DEBITO", "VOUCHER"], 0.0);
            let scene = PosScene::new(random.value_cents, &random.operation);
            let rendered = render(&scene.spec(1200)).unwrap();
            let screen = rendered.frame.crop(rendered.screen_box).unwrap();
            let boxes = rendered.lines.iter().map(|l| l.screen_box).collect();
            (screen, boxes)
        })
        .collect()
}

#[test]
fn region_invariants() {
    let cfg = RoiConfig::default();
    for (screen, _) in suite_screens() {
        let (w, h) = screen.dimensions();
        let regions = detect_regions(&screen, &cfg).unwrap();
        let area = (w * h) as f64;
        for r in &regions {
            assert!(r.rect.w > r.rect.h);
            assert!(r.rect.area() as f64 >= cfg.area_min_frac * area);
            assert!(r.rect.area() as f64 <= cfg.area_max_frac * area);
            assert!(RectI::new(0, 0, w, h).contains_rect(&r.rect));
            assert_eq!(r.image.dimensions(), (r.rect.w, r.rect.h));
        }
        assert!(regions.windows(2).all(|p| p[0].order_key() <= p[1].order_key()));
    }
}

#[test]
fn more_padding_never_loses_coverage() {
    let covered = |pad: u32| -> usize {
        let cfg = RoiConfig { pad, ..RoiConfig::default() };
        suite_screens()
            .iter()
            .map(|(screen, boxes)| {
                let regions = detect_regions(screen, &cfg).unwrap();
                boxes.iter().filter(|b| regions.iter().any(|r| r.rect.contains_rect(b))).count()
            })
            .sum()
    };
    let (base, doubled) = (covered(10), covered(20));
    assert!(doubled >= base, "{doubled} < {base}");
    assert_eq!(base, 12);
}

#[test]
fn char_confidence_is_clamped() {
    let r = OcrResult::new(vec![OcrChar::new('1', 250), OcrChar::new(',', 0)]);
    assert_eq!(r.chars()[0].conf, 100);
}
