//! Color conversion, resampling and neighborhood filters.

use super::image::{GrayImage, RgbImage};
use crate::error::{Error, Result};

/// Luma from BT.601 weights, rounded to nearest.
pub fn to_grayscale(rgb: &RgbImage) -> Result<GrayImage> {
    let (w, h) = rgb.dimensions();
    let data = rgb
        .as_raw()
        .chunks_exact(3)
        .map(|p| {
            let y = 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64;
            y.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(w, h, data)
}

/// Nearest-neighbor resize to `target_h` rows, keeping the aspect ratio.
pub fn resize_nearest(img: &GrayImage, target_h: u32) -> Result<GrayImage> {
    if target_h == 0 {
        return Err(Error::InvalidArgument("target height must be at least 1".into()));
    }
    let (w, h) = img.dimensions();
    let target_w = ((w as f64 * target_h as f64 / h as f64).round() as u32).max(1);
    Ok(resize_nearest_to(img, target_w, target_h))
}

/// Nearest-neighbor resize to an explicit size. Destination pixel centers are
/// mapped into the source and floored.
pub fn resize_nearest_to(img: &GrayImage, target_w: u32, target_h: u32) -> GrayImage {
    let (w, h) = img.dimensions();
    if (w, h) == (target_w, target_h) {
        return img.clone();
    }
    let xs: Vec<u32> = (0..target_w)
        .map(|x| nearest_source(x, w, target_w))
        .collect();
    let mut data = Vec::with_capacity(target_w as usize * target_h as usize);
    for y in 0..target_h {
        let row = img.row(nearest_source(y, h, target_h));
        data.extend(xs.iter().map(|&sx| row[sx as usize]));
    }
    GrayImage::new(target_w, target_h, data).expect("positive target size")
}

#[inline]
pub(crate) fn nearest_source(dst: u32, src_len: u32, dst_len: u32) -> u32 {
    let s = ((dst as f64 + 0.5) * src_len as f64 / dst_len as f64).floor() as u32;
    s.min(src_len - 1)
}

/// Median over a `k`×`k` window with replicated borders.
pub fn median_filter(img: &GrayImage, k: u32) -> Result<GrayImage> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "median window must be odd and positive, got {k}"
        )));
    }
    if k == 1 {
        return Ok(img.clone());
    }
    let (w, h) = img.dimensions();
    let r = (k / 2) as i64;
    let mid = (k * k / 2) as usize;
    let mut window = Vec::with_capacity((k * k) as usize);
    let mut data = Vec::with_capacity(img.as_raw().len());
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            window.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    window.push(img.get_clamped(x + dx, y + dy));
                }
            }
            let (_, m, _) = window.select_nth_unstable(mid);
            data.push(*m);
        }
    }
    GrayImage::new(w, h, data)
}

/// Mean over a `(2r+1)`×`(2r+1)` window with replicated borders.
pub fn box_blur(img: &GrayImage, radius: u32) -> GrayImage {
    if radius == 0 {
        return img.clone();
    }
    let (w, h) = img.dimensions();
    let r = radius as i64;
    let mut horizontal = vec![0u32; img.as_raw().len()];
    for y in 0..h {
        for x in 0..w as i64 {
            let sum: u32 = (-r..=r)
                .map(|dx| img.get_clamped(x + dx, y as i64) as u32)
                .sum();
            horizontal[y as usize * w as usize + x as usize] = sum;
        }
    }
    let n = ((2 * r + 1) * (2 * r + 1)) as u32;
    let mut data = Vec::with_capacity(horizontal.len());
    for y in 0..h as i64 {
        for x in 0..w as usize {
            let sum: u32 = (-r..=r)
                .map(|dy| {
                    let yy = (y + dy).clamp(0, h as i64 - 1) as usize;
                    horizontal[yy * w as usize + x]
                })
                .sum();
            data.push(((sum + n / 2) / n) as u8);
        }
    }
    GrayImage::new(w, h, data).expect("same dimensions")
}

/// Focus measure: population variance of the 4-neighbor Laplacian response.
pub fn laplacian_variance(img: &GrayImage) -> Result<f64> {
    let (w, h) = img.dimensions();
    if w < 3 || h < 3 {
        return Err(Error::InvalidInput(format!(
            "laplacian needs at least 3x3 pixels, got {w}x{h}"
        )));
    }
    let n = (w as u64 * h as u64) as f64;
    let mut sum = 0f64;
    let mut sum_sq = 0f64;
    for y in 0..h as i64 {
        for x in 0..w as i64 {
            let c = img.get_clamped(x, y) as i32;
            let response = img.get_clamped(x - 1, y) as i32
                + img.get_clamped(x + 1, y) as i32
                + img.get_clamped(x, y - 1) as i32
                + img.get_clamped(x, y + 1) as i32
                - 4 * c;
            sum += response as f64;
            sum_sq += (response as f64) * (response as f64);
        }
    }
    let mean = sum / n;
    Ok((sum_sq / n - mean * mean).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grayscale_weights() {
        let rgb = RgbImage::new(3, 1, vec![255, 255, 255, 0, 0, 0, 255, 0, 0]).unwrap();
        let g = to_grayscale(&rgb).unwrap();
        assert_eq!(g.as_raw(), &[255, 0, 76]);
        // 0.299 * 255 = 76.245
        assert_eq!((0.299f64 * 255.0).round() as u8, 76);
    }

    #[test]
    fn grayscale_rejects_empty() {
        assert!(RgbImage::new(0, 4, vec![]).is_err());
    }

    #[test]
    fn resize_identity_and_work_size() {
        let img = GrayImage::from_fn(100, 200, |x, y| (x * 7 + y * 3) as u8);
        assert_eq!(resize_nearest(&img, 200).unwrap(), img);

        let big = GrayImage::filled(1920, 2560, 9);
        let small = resize_nearest(&big, 640).unwrap();
        assert_eq!(small.dimensions(), (480, 640));
    }

    #[test]
    fn resize_checkerboard_samples() {
        // dst 0 -> floor(0.5 * 2) = 1, dst 1 -> floor(1.5 * 2) = 3
        let board = GrayImage::from_fn(4, 4, |x, y| if (x + y) % 2 == 0 { 200 } else { 10 });
        let small = resize_nearest(&board, 2).unwrap();
        assert_eq!(small.dimensions(), (2, 2));
        for (dx, sx) in [(0, 1), (1, 3)] {
            for (dy, sy) in [(0, 1), (1, 3)] {
                assert_eq!(small.get(dx, dy), board.get(sx, sy));
            }
        }
    }

    #[test]
    fn resize_rejects_zero_height() {
        let img = GrayImage::filled(4, 4, 0);
        assert!(resize_nearest(&img, 0).is_err());
    }

    #[test]
    fn median_cases() {
        let flat = GrayImage::filled(7, 5, 42);
        assert_eq!(median_filter(&flat, 3).unwrap(), flat);

        let mut spot = GrayImage::filled(5, 5, 0);
        spot.set(2, 2, 255);
        assert!(median_filter(&spot, 3).unwrap().as_raw().iter().all(|&v| v == 0));

        let noisy = GrayImage::from_fn(6, 6, |x, y| ((x * 31 + y * 17) % 256) as u8);
        assert_eq!(median_filter(&noisy, 1).unwrap(), noisy);
        assert!(median_filter(&noisy, 4).is_err());
    }

    #[test]
    fn laplacian_cases() {
        assert_eq!(laplacian_variance(&GrayImage::filled(9, 9, 77)).unwrap(), 0.0);

        // Lone bright pixel: response -400 at the center and +100 at its four
        // neighbors, zero mean, so variance = (400² + 4·100²) / 25 = 8000.
        let mut spot = GrayImage::filled(5, 5, 0);
        spot.set(2, 2, 100);
        assert!((laplacian_variance(&spot).unwrap() - 8000.0).abs() < 1e-9);

        assert!(laplacian_variance(&GrayImage::filled(2, 9, 0)).is_err());
    }

    #[test]
    fn checkerboard_sharper_than_blurred() {
        let board = GrayImage::from_fn(32, 32, |x, y| if (x + y) % 2 == 0 { 255 } else { 0 });
        let blurred = box_blur(&board, 2);
        assert!(laplacian_variance(&board).unwrap() > laplacian_variance(&blurred).unwrap());
    }

    #[test]
    fn box_blur_preserves_constant() {
        let flat = GrayImage::filled(10, 6, 133);
        assert_eq!(box_blur(&flat, 3), flat);
    }
}
