//! Rotation by inverse mapping with bicubic interpolation.
//!
//! Angles are in degrees in image coordinates (x right, y down): a positive
//! angle turns content clockwise on screen, and a straight edge with
//! direction `(cos θ, sin θ)` has angle `θ`.

use super::image::GrayImage;
use crate::error::{Error, Result};

pub const MAX_ROTATION_DEG: f64 = 45.0;

/// Keys cubic convolution kernel with `a = -0.5`.
#[inline]
fn keys(t: f64) -> f64 {
    const A: f64 = -0.5;
    let t = t.abs();
    if t <= 1.0 {
        (A + 2.0) * t * t * t - (A + 3.0) * t * t + 1.0
    } else if t < 2.0 {
        A * t * t * t - 5.0 * A * t * t + 8.0 * A * t - 4.0 * A
    } else {
        0.0
    }
}

/// Bicubic sample at a sub-pixel position inside the image, with edge
/// replication for the 4×4 stencil.
pub fn sample_bicubic(img: &GrayImage, sx: f64, sy: f64) -> u8 {
    let x0 = sx.floor();
    let y0 = sy.floor();
    let (fx, fy) = (sx - x0, sy - y0);
    let (x0, y0) = (x0 as i64, y0 as i64);
    let wx = [keys(1.0 + fx), keys(fx), keys(1.0 - fx), keys(2.0 - fx)];
    let wy = [keys(1.0 + fy), keys(fy), keys(1.0 - fy), keys(2.0 - fy)];
    let mut acc = 0.0;
    for (j, wyj) in wy.iter().enumerate() {
        let yy = y0 - 1 + j as i64;
        let mut row = 0.0;
        for (i, wxi) in wx.iter().enumerate() {
            row += wxi * img.get_clamped(x0 - 1 + i as i64, yy) as f64;
        }
        acc += wyj * row;
    }
    acc.round().clamp(0.0, 255.0) as u8
}

/// Rotates `img` by `angle_deg` about its center onto an `out_w`×`out_h`
/// canvas whose center coincides with the source center. Samples falling
/// outside the source take `fill`.
pub fn rotate_onto(img: &GrayImage, angle_deg: f64, out_w: u32, out_h: u32, fill: u8) -> GrayImage {
    let (w, h) = img.dimensions();
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    let (icx, icy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (ocx, ocy) = ((out_w as f64 - 1.0) / 2.0, (out_h as f64 - 1.0) / 2.0);
    let (max_x, max_y) = (w as f64 - 0.5, h as f64 - 0.5);
    GrayImage::from_fn(out_w, out_h, |x, y| {
        let dx = x as f64 - ocx;
        let dy = y as f64 - ocy;
        let sx = icx + cos * dx + sin * dy;
        let sy = icy - sin * dx + cos * dy;
        if sx < -0.5 || sy < -0.5 || sx >= max_x || sy >= max_y {
            fill
        } else {
            sample_bicubic(img, sx, sy)
        }
    })
}

/// Rotation about the image center keeping the input dimensions; corners
/// that leave the frame are lost and uncovered areas become black.
pub fn rotate_about_center(img: &GrayImage, angle_deg: f64) -> Result<GrayImage> {
    if !angle_deg.is_finite() || angle_deg.abs() > MAX_ROTATION_DEG {
        return Err(Error::AngleOutOfRange(angle_deg));
    }
    if angle_deg == 0.0 {
        return Ok(img.clone());
    }
    Ok(rotate_onto(img, angle_deg, img.width(), img.height(), 0))
}

/// Canvas size that holds the whole `w`×`h` image after rotation.
pub fn rotated_bounds(w: u32, h: u32, angle_deg: f64) -> (u32, u32) {
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    let (sin, cos) = (sin.abs(), cos.abs());
    let bw = w as f64 * cos + h as f64 * sin;
    let bh = w as f64 * sin + h as f64 * cos;
    // Absorb round-off so exact multiples of 90° do not gain a pixel.
    ((bw - 1e-9).ceil() as u32, (bh - 1e-9).ceil() as u32)
}

/// Rotation onto an expanded canvas so no content is cropped.
pub fn rotate_expand(img: &GrayImage, angle_deg: f64) -> GrayImage {
    let (w, h) = rotated_bounds(img.width(), img.height(), angle_deg);
    rotate_onto(img, angle_deg, w, h, 0)
}
