//! Candidate text-line regions inside a straightened screen image.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgproc::{
    bounding_rect, dilate_gray, find_contours, otsu_threshold, resize_nearest, white_top_hat,
    GrayImage, Kernel, RectI,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoiConfig {
    /// Top-hat kernel height as a fraction of the half-scale screen height.
    pub tophat_kernel_frac: f64,
    /// Top-hat kernel width over height.
    pub tophat_aspect: f64,
    pub tophat_min: (u32, u32),
    /// Dilation kernel width as a fraction of the half-scale screen width.
    pub dilate_w_frac: f64,
    /// Dilation kernel height as a fraction of the half-scale screen height.
    pub dilate_h_frac: f64,
    pub dilate_min: (u32, u32),
    /// Padding added on every side at full scale.
    pub pad: u32,
    pub area_min_frac: f64,
    pub area_max_frac: f64,
}

impl Default for RoiConfig {
    fn default() -> Self {
        Self {
            tophat_kernel_frac: 0.09,
            tophat_aspect: 1.1,
            tophat_min: (9, 9),
            dilate_w_frac: 0.08,
            dilate_h_frac: 0.012,
            dilate_min: (9, 3),
            pad: 10,
            area_min_frac: 0.001,
            area_max_frac: 0.25,
        }
    }
}

fn odd_at_least(v: f64, min: u32) -> u32 {
    let n = (v.ceil().max(0.0) as u32).max(min).max(1);
    if n.is_multiple_of(2) {
        n + 1
    } else {
        n
    }
}

impl RoiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.area_min_frac
            && self.area_min_frac < self.area_max_frac
            && self.area_max_frac <= 1.0)
        {
            return Err(Error::InvalidArgument(
                "need 0 < area_min_frac < area_max_frac <= 1".into(),
            ));
        }
        let fracs = [
            self.tophat_kernel_frac,
            self.tophat_aspect,
            self.dilate_w_frac,
            self.dilate_h_frac,
        ];
        if fracs.iter().any(|f| !f.is_finite() || *f < 0.0) {
            return Err(Error::InvalidArgument("kernel fractions must be non-negative".into()));
        }
        Ok(())
    }

    /// `(top-hat, dilation)` kernels for a half-scale screen of `w`×`h`.
    pub fn kernels(&self, w: u32, h: u32) -> (Kernel, Kernel) {
        let th_h = odd_at_least(self.tophat_kernel_frac * h as f64, self.tophat_min.1);
        let th_w = odd_at_least(th_h as f64 * self.tophat_aspect, self.tophat_min.0);
        let d_w = odd_at_least(self.dilate_w_frac * w as f64, self.dilate_min.0);
        let d_h = odd_at_least(self.dilate_h_frac * h as f64, self.dilate_min.1);
        (
            Kernel::rect(th_w, th_h).expect("odd"),
            Kernel::rect(d_w, d_h).expect("odd"),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TextRegion {
    /// Padded rectangle in full-scale screen coordinates.
    pub rect: RectI,
    pub image: GrayImage,
}

impl TextRegion {
    /// Reading order: top, then left.
    pub fn order_key(&self) -> (i32, i32) {
        (self.rect.y, self.rect.x)
    }
}

/// Intermediate images of region detection, kept for inspection.
#[derive(Debug, Clone)]
pub struct RegionStages {
    pub half: GrayImage,
    pub tophat: GrayImage,
    pub dilated: GrayImage,
    pub binary: GrayImage,
}

pub fn detect_regions(screen: &GrayImage, cfg: &RoiConfig) -> Result<Vec<TextRegion>> {
    detect_regions_staged(screen, cfg).map(|(r, _)| r)
}

pub fn detect_regions_staged(
    screen: &GrayImage,
    cfg: &RoiConfig,
) -> Result<(Vec<TextRegion>, RegionStages)> {
    let (w, h) = screen.dimensions();
    let half = resize_nearest(screen, (h as f64 / 2.0).round().max(1.0) as u32)?;
    let (tophat_k, dilate_k) = cfg.kernels(half.width(), half.height());
    let tophat = white_top_hat(&half, &tophat_k);
    let dilated = dilate_gray(&tophat, &dilate_k);
    let (_, binary) = otsu_threshold(&dilated);

    let sx = w as f64 / half.width() as f64;
    let sy = h as f64 / half.height() as f64;
    let screen_area = w as f64 * h as f64;
    let mut regions = Vec::new();
    for contour in find_contours(&binary) {
        let r = bounding_rect(&contour)?;
        let full = RectI::from_edges(
            (r.x as f64 * sx).floor() as i32,
            (r.y as f64 * sy).floor() as i32,
            (r.right() as f64 * sx).ceil() as i32,
            (r.bottom() as f64 * sy).ceil() as i32,
        )
        .clamp_to(w, h);
        let rect = full.pad_clamped(cfg.pad, w, h);
        let area = rect.area() as f64;
        if rect.w <= rect.h
            || area < cfg.area_min_frac * screen_area
            || area > cfg.area_max_frac * screen_area
        {
            continue;
        }
        regions.push(TextRegion {
            rect,
            image: screen.crop(rect)?,
        });
    }
    regions.sort_by_key(|r| (r.order_key(), r.rect.w, r.rect.h));
    let stages = RegionStages {
        half,
        tophat,
        dilated,
        binary: binary.into_gray(),
    };
    Ok((regions, stages))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{render_line, StrokeWeight};
    use crate::ocr::GlyphAtlas;

    fn screen_with(lines: &[(&str, u32, u32)], w: u32, h: u32) -> (GrayImage, Vec<RectI>) {
        let atlas = GlyphAtlas::builtin();
        let mut img = GrayImage::filled(w, h, 90);
        let mut boxes = Vec::new();
        for &(text, x, y) in lines {
            let l = render_line(text, &atlas, 2, StrokeWeight::Normal).unwrap();
            let (lw, lh) = l.mask.dimensions();
            for yy in 0..lh {
                for xx in 0..lw {
                    if l.mask.is_set(xx, yy) {
                        img.set(x + xx, y + yy, 235);
                    }
                }
            }
            boxes.push(RectI::new(
                x as i32 + l.ink.x,
                y as i32 + l.ink.y,
                l.ink.w,
                l.ink.h,
            ));
        }
        (img, boxes)
    }

    #[test]
    fn kernels_are_odd_with_minimums() {
        let (t, d) = RoiConfig::default().kernels(350, 225);
        assert_eq!((t.width(), t.height()), (25, 21));
        assert_eq!((d.width(), d.height()), (29, 3));
        let (t, d) = RoiConfig::default().kernels(20, 20);
        assert_eq!((t.width(), t.height()), (11, 9));
        assert_eq!((d.width(), d.height()), (9, 3));
    }

    #[test]
    fn blank_screen_has_no_regions() {
        let img = GrayImage::filled(300, 200, 90);
        assert!(detect_regions(&img, &RoiConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn finds_both_lines() {
        let (img, boxes) = screen_with(&[("VALOR:", 60, 60), ("123,45", 60, 200)], 700, 450);
        let regions = detect_regions(&img, &RoiConfig::default()).unwrap();
        assert_eq!(regions.len(), 2, "{:?}", regions.iter().map(|r| r.rect).collect::<Vec<_>>());
        for (r, b) in regions.iter().zip(&boxes) {
            assert!(r.rect.contains_rect(b), "{:?} misses {:?}", r.rect, b);
            assert!(r.rect.w > r.rect.h);
        }
        assert!(regions[0].order_key() < regions[1].order_key());
    }

    #[test]
    fn oversized_band_is_dropped() {
        let img = GrayImage::from_fn(400, 300, |_, y| if (40..100).contains(&y) { 235 } else { 90 });
        let cfg = RoiConfig {
            tophat_kernel_frac: 0.9,
            ..RoiConfig::default()
        };
        for r in detect_regions(&img, &cfg).unwrap() {
            assert!(r.rect.area() as f64 <= 0.25 * 400.0 * 300.0);
        }
    }
}
