//! Screen detection and operator positioning feedback.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgproc::{
    bounding_rect, find_contours, laplacian_variance, min_area_rect, min_area_rect_points,
    otsu_threshold, resize_nearest, GrayImage, RectI, RotatedRect,
};

/// Focus threshold at the knee of the blur sweep run by the
/// `calibrate_focus` example: the geometric mean of the scores at box-blur
/// radius 1 and 2 on a synthetic scene at work height.
pub const DEFAULT_FOCUS_MIN: f64 = 13.1;

/// Frames in a row that must pass before recognition starts.
pub const REQUIRED_VALID_FRAMES: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScreenConfig {
    pub work_height: u32,
    pub focus_min: f64,
    pub area_min_frac: f64,
    pub area_max_frac: f64,
    pub edge_margin_frac: f64,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        Self {
            work_height: 640,
            focus_min: DEFAULT_FOCUS_MIN,
            area_min_frac: 0.10,
            area_max_frac: 0.80,
            edge_margin_frac: 0.03,
        }
    }
}

impl ScreenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.work_height == 0 {
            return bad("work_height must be positive");
        }
        if self.focus_min.is_nan() || self.focus_min < 0.0 {
            return bad("focus_min must be non-negative");
        }
        if !(0.0 < self.area_min_frac
            && self.area_min_frac < self.area_max_frac
            && self.area_max_frac <= 1.0)
        {
            return bad("need 0 < area_min_frac < area_max_frac <= 1");
        }
        if !(0.0..0.5).contains(&self.edge_margin_frac) {
            return bad("edge_margin_frac must be in [0, 0.5)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenDetection {
    /// Straight bounding box in frame coordinates.
    pub rect: RectI,
    /// Minimum-area rectangle in frame coordinates.
    pub rrect: RotatedRect,
    /// Same as `rrect.angle`.
    pub angle: f64,
    /// Laplacian variance of the downscaled frame.
    pub focus: f64,
}

/// Finds the largest bright region of the frame.
pub fn detect_screen(frame: &GrayImage, cfg: &ScreenConfig) -> Result<Option<ScreenDetection>> {
    let small = resize_nearest(frame, cfg.work_height)?;
    // Too narrow to measure counts as unsharp.
    let focus = if small.width() >= 3 && small.height() >= 3 {
        laplacian_variance(&small)?
    } else {
        0.0
    };
    let (_, binary) = otsu_threshold(&small);
    let contours = find_contours(&binary);
    let Some(best) = contours
        .iter()
        .fold(None::<&crate::imgproc::Contour>, |best, c| match best {
            Some(b) if b.area >= c.area => Some(b),
            _ => Some(c),
        })
    else {
        return Ok(None);
    };

    let (fw, fh) = frame.dimensions();
    let sx = fw as f64 / small.width() as f64;
    let sy = fh as f64 / small.height() as f64;

    let r = bounding_rect(best)?;
    let rect = RectI::from_edges(
        (r.x as f64 * sx).floor() as i32,
        (r.y as f64 * sy).floor() as i32,
        (r.right() as f64 * sx).ceil() as i32,
        (r.bottom() as f64 * sy).ceil() as i32,
    )
    .clamp_to(fw, fh);

    // Scale the corners rather than the size so anisotropic ratios stay exact.
    let small_rrect = min_area_rect(best)?;
    let corners = small_rrect
        .corners()
        .map(|(x, y)| ((x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5));
    let rrect = min_area_rect_points(&corners)?;

    Ok(Some(ScreenDetection {
        rect,
        rrect,
        angle: rrect.angle,
        focus,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameFeedback {
    NoScreen,
    OutOfFocus,
    TooFar,
    TooClose,
    OffCenter,
    Valid,
}

impl FrameFeedback {
    pub fn as_str(self) -> &'static str {
        match self {
            FrameFeedback::NoScreen => "NoScreen",
            FrameFeedback::OutOfFocus => "OutOfFocus",
            FrameFeedback::TooFar => "TooFar",
            FrameFeedback::TooClose => "TooClose",
            FrameFeedback::OffCenter => "OffCenter",
            FrameFeedback::Valid => "Valid",
        }
    }
}

impl std::fmt::Display for FrameFeedback {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies one frame. Checks run in precedence order and the first
/// failure wins.
pub fn assess_frame(
    det: Option<&ScreenDetection>,
    frame_dims: (u32, u32),
    cfg: &ScreenConfig,
) -> FrameFeedback {
    let Some(det) = det else {
        return FrameFeedback::NoScreen;
    };
    if det.focus < cfg.focus_min {
        return FrameFeedback::OutOfFocus;
    }
    let (w, h) = frame_dims;
    let frame_area = w as f64 * h as f64;
    let area = det.rect.area() as f64;
    if area < cfg.area_min_frac * frame_area {
        return FrameFeedback::TooFar;
    }
    if area > cfg.area_max_frac * frame_area {
        return FrameFeedback::TooClose;
    }
    let (mx, my) = (cfg.edge_margin_frac * w as f64, cfg.edge_margin_frac * h as f64);
    let r = det.rect;
    let gaps = [
        (r.x as f64, mx),
        (w as f64 - r.right() as f64, mx),
        (r.y as f64, my),
        (h as f64 - r.bottom() as f64, my),
    ];
    if gaps.iter().any(|&(gap, margin)| gap < margin) {
        return FrameFeedback::OffCenter;
    }
    FrameFeedback::Valid
}

/// Counts consecutive valid frames and fires once per full run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackTracker {
    consecutive: u32,
    required: u32,
}

impl Default for FeedbackTracker {
    fn default() -> Self {
        Self::new(REQUIRED_VALID_FRAMES)
    }
}

impl FeedbackTracker {
    pub fn new(required: u32) -> Self {
        Self {
            consecutive: 0,
            required: required.max(1),
        }
    }

    pub fn consecutive(&self) -> u32 {
        self.consecutive
    }

    pub fn required(&self) -> u32 {
        self.required
    }

    /// Returns the next tracker state and whether recognition should start.
    pub fn update(self, fb: FrameFeedback) -> (Self, bool) {
        if fb != FrameFeedback::Valid {
            return (Self { consecutive: 0, ..self }, false);
        }
        let n = self.consecutive + 1;
        if n >= self.required {
            (Self { consecutive: 0, ..self }, true)
        } else {
            (Self { consecutive: n, ..self }, false)
        }
    }
}
