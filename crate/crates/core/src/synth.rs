//! Deterministic synthetic payment-terminal scenes with ground truth.
//!
//! Text is drawn from the same glyph atlas the built-in OCR matches against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgproc::{box_blur, erode, sample_bicubic, BinaryImage, GrayImage, Kernel, RectI};
use crate::ocr::GlyphAtlas;

/// Intensity outside the screen.
pub const SURROUND: u8 = 15;
/// Ink gap between neighboring glyphs, in atlas cell pixels.
pub const GLYPH_GAP: u32 = 4;
/// Extra advance for a space, in atlas cell pixels.
pub const SPACE_ADVANCE: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Light text on a dark backlit panel, typical of POS terminals.
    #[default]
    BrightOnDark,
    /// Dark text on a light LCD, typical of PIN pads.
    DarkOnBright,
}

impl Polarity {
    /// `(background, text)` intensities.
    pub fn levels(self) -> (u8, u8) {
        match self {
            Polarity::BrightOnDark => (90, 235),
            Polarity::DarkOnBright => (215, 35),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrokeWeight {
    #[default]
    Normal,
    /// Strokes eroded once, which disconnects diagonal joints.
    Thin,
}

/// One line of text, positioned in screen coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextSpec {
    pub text: String,
    /// Top-left of the line's cell box.
    pub x: i32,
    pub y: i32,
    /// Pixels per atlas cell pixel.
    pub scale: u32,
    #[serde(default)]
    pub weight: StrokeWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenSpec {
    /// Top-left corner before rotation.
    pub x: i32,
    pub y: i32,
    pub w: u32,
    pub h: u32,
    /// Rotation about the screen center, degrees, clockwise on screen.
    #[serde(default)]
    pub angle: f64,
}

impl ScreenSpec {
    fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + (self.w as f64 - 1.0) / 2.0,
            self.y as f64 + (self.h as f64 - 1.0) / 2.0,
        )
    }

    /// Maps a screen-local point (pixel-center coordinates) into the frame.
    pub fn to_frame(&self, sx: f64, sy: f64) -> (f64, f64) {
        let (sin, cos) = self.angle.to_radians().sin_cos();
        let (lx, ly) = (sx - (self.w as f64 - 1.0) / 2.0, sy - (self.h as f64 - 1.0) / 2.0);
        let (cx, cy) = self.center();
        (cx + cos * lx - sin * ly, cy + sin * lx + cos * ly)
    }

    fn to_local(self, fx: f64, fy: f64) -> (f64, f64) {
        let (sin, cos) = self.angle.to_radians().sin_cos();
        let (cx, cy) = self.center();
        let (dx, dy) = (fx - cx, fy - cy);
        (
            (self.w as f64 - 1.0) / 2.0 + cos * dx + sin * dy,
            (self.h as f64 - 1.0) / 2.0 - sin * dx + cos * dy,
        )
    }

    /// Frame-space bounding box of a screen-local rectangle.
    pub fn project_rect(&self, r: RectI) -> RectI {
        let (x0, y0) = (r.x as f64 - 0.5, r.y as f64 - 0.5);
        let (x1, y1) = (r.right() as f64 - 0.5, r.bottom() as f64 - 0.5);
        let pts = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)].map(|(x, y)| self.to_frame(x, y));
        let min_x = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let max_x = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let min_y = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_y = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let eps = 1e-9;
        RectI::from_edges(
            (min_x + 0.5 + eps).floor() as i32,
            (min_y + 0.5 + eps).floor() as i32,
            (max_x - 0.5 - eps).ceil() as i32 + 1,
            (max_y - 0.5 - eps).ceil() as i32 + 1,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Fraction of pixels replaced by 0 or 255.
    #[serde(default)]
    pub salt_pepper: f64,
    #[serde(default)]
    pub gaussian_sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub width: u32,
    pub height: u32,
    pub screen: ScreenSpec,
    #[serde(default)]
    pub polarity: Polarity,
    pub lines: Vec<TextSpec>,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub blur_radius: u32,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthLine {
    pub text: String,
    /// Ink extent in screen coordinates.
    pub screen_box: RectI,
    /// Ink extent in frame coordinates after rotation.
    pub frame_box: RectI,
}

#[derive(Debug, Clone)]
pub struct RenderedScene {
    pub frame: GrayImage,
    /// Straight bounding box of the rotated screen in the frame.
    pub screen_box: RectI,
    pub lines: Vec<TruthLine>,
}

/// A rendered line of text, foreground = ink.
#[derive(Debug, Clone)]
pub struct LineBitmap {
    pub mask: BinaryImage,
    /// Tight ink extent inside `mask`.
    pub ink: RectI,
}

/// Lays `text` out on one line. The mask has a margin of one cell pixel on
/// each side so thin rendering does not touch the border.
pub fn render_line(
    text: &str,
    atlas: &GlyphAtlas,
    scale: u32,
    weight: StrokeWeight,
) -> Result<LineBitmap> {
    if scale == 0 {
        return Err(Error::InvalidArgument("text scale must be at least 1".into()));
    }
    if weight == StrokeWeight::Thin && scale < 2 {
        return Err(Error::InvalidArgument("thin strokes need scale >= 2".into()));
    }
    let (_, cell_h) = atlas.cell();
    let mut placed = Vec::new();
    let mut pen = 0u32;
    for ch in text.chars() {
        if ch == ' ' {
            pen += SPACE_ADVANCE;
            continue;
        }
        let glyph = atlas.glyph(ch).ok_or(Error::UnsupportedChar(ch))?;
        placed.push((glyph, pen));
        pen += glyph.ink.w + GLYPH_GAP;
    }
    let margin = scale;
    let width = pen.max(1) * scale + 2 * margin;
    let height = cell_h * scale + 2 * margin;
    let mut mask = BinaryImage::empty(width, height);
    for (glyph, left) in placed {
        let ink = glyph.ink;
        for gy in 0..cell_h {
            for gx in 0..ink.w {
                if !glyph.bitmap.is_set(ink.x as u32 + gx, gy) {
                    continue;
                }
                let (x0, y0) = (margin + (left + gx) * scale, margin + gy * scale);
                for y in y0..y0 + scale {
                    for x in x0..x0 + scale {
                        mask.set(x, y, true);
                    }
                }
            }
        }
    }
    if weight == StrokeWeight::Thin {
        mask = erode(&mask, &Kernel::rect(3, 3)?);
    }
    let ink = ink_extent(&mask).unwrap_or(RectI::new(0, 0, 1, 1));
    Ok(LineBitmap { mask, ink })
}

fn ink_extent(mask: &BinaryImage) -> Option<RectI> {
    let (w, h) = mask.dimensions();
    let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
    for y in 0..h {
        for x in 0..w {
            if mask.is_set(x, y) {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x + 1);
                y1 = y1.max(y + 1);
            }
        }
    }
    (x0 != u32::MAX).then(|| RectI::from_edges(x0 as i32, y0 as i32, x1 as i32, y1 as i32))
}

/// Renders a scene with the built-in atlas.
pub fn render(spec: &SceneSpec) -> Result<RenderedScene> {
    render_with(spec, &GlyphAtlas::builtin())
}

pub fn render_with(spec: &SceneSpec, atlas: &GlyphAtlas) -> Result<RenderedScene> {
    if spec.width == 0 || spec.height == 0 || spec.screen.w == 0 || spec.screen.h == 0 {
        return Err(Error::InvalidInput("scene and screen must be non-empty".into()));
    }
    if !spec.screen.angle.is_finite() {
        return Err(Error::InvalidInput("screen angle must be finite".into()));
    }
    let (bg, fg) = spec.polarity.levels();
    let scr = spec.screen;
    let mut screen = GrayImage::filled(scr.w, scr.h, bg);
    let mut lines = Vec::with_capacity(spec.lines.len());
    for line in &spec.lines {
        let bmp = render_line(&line.text, atlas, line.scale, line.weight)?;
        let margin = line.scale as i32;
        let (ox, oy) = (line.x - margin, line.y - margin);
        let (w, h) = bmp.mask.dimensions();
        for y in 0..h {
            for x in 0..w {
                let (sx, sy) = (ox + x as i32, oy + y as i32);
                if bmp.mask.is_set(x, y) {
                    if sx < 0 || sy < 0 || sx >= scr.w as i32 || sy >= scr.h as i32 {
                        return Err(Error::InvalidInput(format!(
                            "line {:?} does not fit on the screen",
                            line.text
                        )));
                    }
                    screen.set(sx as u32, sy as u32, fg);
                }
            }
        }
        let screen_box = RectI::new(ox + bmp.ink.x, oy + bmp.ink.y, bmp.ink.w, bmp.ink.h);
        lines.push(TruthLine {
            text: line.text.clone(),
            screen_box,
            frame_box: scr.project_rect(screen_box),
        });
    }

    let screen_box = scr.project_rect(RectI::new(0, 0, scr.w, scr.h));
    let visible = screen_box.clamp_to(spec.width, spec.height);
    let mut frame = GrayImage::filled(spec.width, spec.height, SURROUND);
    let (max_x, max_y) = (scr.w as f64 - 0.5, scr.h as f64 - 0.5);
    for y in visible.y..visible.bottom() {
        for x in visible.x..visible.right() {
            let (sx, sy) = scr.to_local(x as f64, y as f64);
            if sx >= -0.5 && sy >= -0.5 && sx < max_x && sy < max_y {
                frame.set(x as u32, y as u32, sample_bicubic(&screen, sx, sy));
            }
        }
    }

    let frame = degrade(frame, spec.blur_radius, spec.noise, spec.seed);
    Ok(RenderedScene {
        frame,
        screen_box: visible,
        lines,
    })
}

/// Blur, then Gaussian noise, then salt and pepper.
fn degrade(frame: GrayImage, blur_radius: u32, noise: NoiseSpec, seed: u64) -> GrayImage {
    let mut frame = box_blur(&frame, blur_radius);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if noise.gaussian_sigma > 0.0 {
        let normal = Normal::new(0.0, noise.gaussian_sigma).expect("positive sigma");
        frame = frame.map_with_rng(|v| {
            let n: f64 = normal.sample(&mut rng);
            (v as f64 + n).round().clamp(0.0, 255.0) as u8
        });
    }
    if noise.salt_pepper > 0.0 {
        let p = noise.salt_pepper.min(1.0);
        frame = frame.map_with_rng(|v| {
            if rng.random_bool(p) {
                if rng.random_bool(0.5) {
                    255
                } else {
                    0
                }
            } else {
                v
            }
        });
    }
    frame
}

trait MapWithRng {
    fn map_with_rng(self, f: impl FnMut(u8) -> u8) -> Self;
}

impl MapWithRng for GrayImage {
    fn map_with_rng(self, f: impl FnMut(u8) -> u8) -> Self {
        let (w, h) = self.dimensions();
        let data = self.into_raw().into_iter().map(f).collect();
        GrayImage::new(w, h, data).expect("same dimensions")
    }
}

/// Brazilian currency formatting without symbol: `1.234,56`.
pub fn format_cents(cents: u64) -> String {
    let int = (cents / 100).to_string();
    let mut grouped = String::new();
    for (i, c) in int.chars().enumerate() {
        if i > 0 && (int.len() - i).is_multiple_of(3) {
            grouped.push('.');
        }
        grouped.push(c);
    }
    format!("{grouped},{:02}", cents % 100)
}

/// A payment-terminal scene showing an operation and a value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosScene {
    pub value_cents: u64,
    pub operation: String,
    #[serde(default)]
    pub angle: f64,
    #[serde(default)]
    pub polarity: Polarity,
    #[serde(default)]
    pub weight: StrokeWeight,
    #[serde(default)]
    pub noise: NoiseSpec,
    #[serde(default)]
    pub blur_radius: u32,
    #[serde(default)]
    pub seed: u64,
}

impl PosScene {
    pub fn new(value_cents: u64, operation: &str) -> Self {
        Self {
            value_cents,
            operation: operation.to_string(),
            angle: 0.0,
            polarity: Polarity::BrightOnDark,
            weight: StrokeWeight::Normal,
            noise: NoiseSpec::default(),
            blur_radius: 0,
            seed: 0,
        }
    }

    /// Text of the value line.
    pub fn value_text(&self) -> String {
        format!("VALOR: {}", format_cents(self.value_cents))
    }

    /// Scene on a 3:4 portrait frame of `frame_h` rows; the layout scales
    /// with the frame, the reference being 1200×1600 with text scale 2.
    pub fn spec(&self, frame_h: u32) -> SceneSpec {
        let k = frame_h as f64 / 1600.0;
        let px = |v: f64| (v * k).round() as i32;
        let (w, h) = (px(1200.0) as u32, frame_h);
        let (sw, sh) = (px(700.0) as u32, px(450.0) as u32);
        let scale = ((2.0 * k).round() as u32).max(1);
        SceneSpec {
            width: w,
            height: h,
            screen: ScreenSpec {
                x: (w as i32 - sw as i32) / 2,
                y: (h as i32 - sh as i32) / 2,
                w: sw,
                h: sh,
                angle: self.angle,
            },
            polarity: self.polarity,
            lines: vec![
                TextSpec {
                    text: self.operation.clone(),
                    x: px(60.0),
                    y: px(110.0),
                    scale,
                    weight: self.weight,
                },
                TextSpec {
                    text: self.value_text(),
                    x: px(60.0),
                    y: px(260.0),
                    scale,
                    weight: self.weight,
                },
            ],
            noise: self.noise,
            blur_radius: self.blur_radius,
            seed: self.seed,
        }
    }

    /// Random scene for accuracy runs: value 0,01 to 9.999,99, operation
    /// from `operations`, angle within ±`max_angle`, Gaussian sigma up to 8,
    /// blur radius up to 1.
    pub fn random(seed: u64, operations: &[&str], max_angle: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let op = operations[rng.random_range(0..operations.len())];
        Self {
            value_cents: rng.random_range(1..=999_999),
            operation: op.to_string(),
            angle: rng.random_range(-max_angle..=max_angle),
            polarity: Polarity::BrightOnDark,
            weight: StrokeWeight::Normal,
            noise: NoiseSpec {
                salt_pepper: rng.random_range(0.0..=0.002),
                gaussian_sigma: rng.random_range(0.0..=8.0),
            },
            blur_radius: rng.random_range(0..=1),
            seed: rng.random(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::hash::{DefaultHasher, Hash, Hasher};

    fn hash(img: &GrayImage) -> u64 {
        let mut h = DefaultHasher::new();
        img.hash(&mut h);
        h.finish()
    }

    #[test]
    fn formats_cents() {
        assert_eq!(format_cents(1), "0,01");
        assert_eq!(format_cents(12345), "123,45");
        assert_eq!(format_cents(123456), "1.234,56");
        assert_eq!(format_cents(123456789), "1.234.567,89");
    }

    #[test]
    fn clean_render_is_stable() {
        let spec = PosScene::new(12345, "CREDITO").spec(800);
        let a = render(&spec).unwrap();
        let b = render(&spec).unwrap();
        assert_eq!(hash(&a.frame), hash(&b.frame));
    }

    #[test]
    fn seeds_change_pixels_not_truth() {
        let mut s = PosScene::new(12345, "DEBITO");
        s.noise.gaussian_sigma = 5.0;
        s.seed = 1;
        let a = render(&s.spec(800)).unwrap();
        s.seed = 2;
        let b = render(&s.spec(800)).unwrap();
        assert_ne!(a.frame, b.frame);
        assert_eq!(a.lines, b.lines);
    }

    #[test]
    fn truth_box_is_tight() {
        let spec = PosScene::new(12345, "CREDITO").spec(1600);
        let r = render(&spec).unwrap();
        let (_, fg) = spec.polarity.levels();
        for line in &r.lines {
            let b = line.frame_box;
            let mut tight: Option<RectI> = None;
            for y in 0..r.frame.height() {
                for x in 0..r.frame.width() {
                    let inside_row = y as i32 >= b.y - 30 && (y as i32) < b.bottom() + 30;
                    if inside_row && r.frame.get(x, y) == fg {
                        let p = RectI::new(x as i32, y as i32, 1, 1);
                        tight = Some(match tight {
                            None => p,
                            Some(t) => RectI::from_edges(
                                t.x.min(p.x),
                                t.y.min(p.y),
                                t.right().max(p.right()),
                                t.bottom().max(p.bottom()),
                            ),
                        });
                    }
                }
            }
            assert_eq!(tight, Some(b), "{}", line.text);
        }
    }

    #[test]
    fn unsupported_char() {
        let mut spec = PosScene::new(1, "CREDITO").spec(800);
        spec.lines[0].text = "crédito".into();
        assert!(matches!(render(&spec), Err(Error::UnsupportedChar('c'))));
    }

    #[test]
    fn thin_strokes_are_eroded() {
        let atlas = GlyphAtlas::builtin();
        let normal = render_line("7", &atlas, 2, StrokeWeight::Normal).unwrap();
        let thin = render_line("7", &atlas, 2, StrokeWeight::Thin).unwrap();
        assert_eq!(normal.mask.dimensions(), thin.mask.dimensions());
        let (w, h) = normal.mask.dimensions();
        let mut n = 0;
        let mut t = 0;
        for y in 0..h {
            for x in 0..w {
                n += normal.mask.is_set(x, y) as usize;
                t += thin.mask.is_set(x, y) as usize;
                assert!(!thin.mask.is_set(x, y) || normal.mask.is_set(x, y));
            }
        }
        // 4-px strokes become 2-px strokes.
        assert!(t * 3 < n * 2 && t * 3 > n, "{t} of {n}");
        assert!(render_line("7", &atlas, 1, StrokeWeight::Thin).is_err());
    }

    #[test]
    fn rotated_screen_box_contains_screen() {
        let mut s = PosScene::new(500, "VOUCHER");
        s.angle = 20.0;
        let spec = s.spec(1600);
        let r = render(&spec).unwrap();
        let b = r.screen_box;
        for y in 0..r.frame.height() {
            for x in 0..r.frame.width() {
                if r.frame.get(x, y) != SURROUND {
                    assert!(x as i32 >= b.x && (x as i32) < b.right());
                    assert!(y as i32 >= b.y && (y as i32) < b.bottom());
                }
            }
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = PosScene::random(3, &["CREDITO"], 30.0).spec(1600);
        let json = serde_json::to_string(&spec).unwrap();
        let back: SceneSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
