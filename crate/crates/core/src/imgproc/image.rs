use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 8-bit single-channel raster, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GrayImage({}x{})", self.width, self.height)
    }
}

impl GrayImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width as usize * height as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width as usize * height as usize,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Panics on zero dimensions.
    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        Self::new(width, height, vec![value; width as usize * height as usize])
            .expect("non-zero dimensions")
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data).expect("non-zero dimensions")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn area(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }

    pub fn into_raw(self) -> Vec<u8> {
        self.data
    }

    pub fn row(&self, y: u32) -> &[u8] {
        let w = self.width as usize;
        let start = y as usize * w;
        &self.data[start..start + w]
    }

    #[inline]
    fn index(&self, x: u32, y: u32) -> usize {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of bounds for {}x{} image",
            self.width,
            self.height
        );
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.data[self.index(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        let i = self.index(x, y);
        self.data[i] = value;
    }

    /// Pixel at signed coordinates with edge replication.
    #[inline]
    pub fn get_clamped(&self, x: i64, y: i64) -> u8 {
        let x = x.clamp(0, self.width as i64 - 1) as usize;
        let y = y.clamp(0, self.height as i64 - 1) as usize;
        self.data[y * self.width as usize + x]
    }

    pub fn map(&self, f: impl Fn(u8) -> u8) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn invert(&self) -> Self {
        self.map(|v| 255 - v)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().map(|&v| v as u64).sum::<u64>() as f64 / self.data.len() as f64
    }

    /// Copies the pixels under `rect`, which must lie inside the image.
    pub fn crop(&self, rect: RectI) -> Result<Self> {
        if !rect.is_within(self.width, self.height) {
            return Err(Error::InvalidArgument(format!(
                "crop {rect:?} escapes {}x{} image",
                self.width, self.height
            )));
        }
        let mut data = Vec::with_capacity(rect.area() as usize);
        for y in rect.y..rect.y + rect.h as i32 {
            let row = self.row(y as u32);
            data.extend_from_slice(&row[rect.x as usize..rect.x as usize + rect.w as usize]);
        }
        Self::new(rect.w, rect.h, data)
    }

    pub fn histogram(&self) -> [u64; 256] {
        let mut hist = [0u64; 256];
        for &v in &self.data {
            hist[v as usize] += 1;
        }
        hist
    }
}

/// Binary raster where every pixel is 0 (background) or 255 (foreground).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage(GrayImage);

impl BinaryImage {
    pub fn from_gray(img: GrayImage) -> Result<Self> {
        if let Some(v) = img.as_raw().iter().find(|&&v| v != 0 && v != 255) {
            return Err(Error::InvalidInput(format!(
                "binary image may only hold 0 or 255, found {v}"
            )));
        }
        Ok(Self(img))
    }

    /// Every pixel strictly above `threshold` becomes foreground.
    pub fn threshold(img: &GrayImage, threshold: u8) -> Self {
        Self(img.map(|v| if v > threshold { 255 } else { 0 }))
    }

    pub fn empty(width: u32, height: u32) -> Self {
        Self(GrayImage::filled(width, height, 0))
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        Self(GrayImage::from_fn(width, height, |x, y| {
            if f(x, y) {
                255
            } else {
                0
            }
        }))
    }

    pub fn width(&self) -> u32 {
        self.0.width()
    }

    pub fn height(&self) -> u32 {
        self.0.height()
    }

    pub fn dimensions(&self) -> (u32, u32) {
        self.0.dimensions()
    }

    #[inline]
    pub fn is_set(&self, x: u32, y: u32) -> bool {
        self.0.get(x, y) != 0
    }

    pub fn set(&mut self, x: u32, y: u32, on: bool) {
        self.0.set(x, y, if on { 255 } else { 0 });
    }

    pub fn complement(&self) -> Self {
        Self(self.0.invert())
    }

    pub fn count(&self) -> usize {
        self.0.as_raw().iter().filter(|&&v| v != 0).count()
    }

    pub fn as_gray(&self) -> &GrayImage {
        &self.0
    }

    pub fn into_gray(self) -> GrayImage {
        self.0
    }

    pub(crate) fn from_gray_unchecked(img: GrayImage) -> Self {
        debug_assert!(img.as_raw().iter().all(|&v| v == 0 || v == 255));
        Self(img)
    }
}

/// Interleaved 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != 3 * width as usize * height as usize {
            return Err(Error::InvalidInput(format!(
                "expected {} bytes of RGB data, got {}",
                3 * width as usize * height as usize,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn as_raw(&self) -> &[u8] {
        &self.data
    }
}

/// Axis-aligned integer rectangle: top-left corner plus extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectI {
    pub x: i32,
    pub y: i32,
    pub w: u32,
    pub h: u32,
}

impl RectI {
    pub fn new(x: i32, y: i32, w: u32, h: u32) -> Self {
        Self { x, y, w, h }
    }

    /// Rectangle spanning `[x0, x1) × [y0, y1)`.
    pub fn from_edges(x0: i32, y0: i32, x1: i32, y1: i32) -> Self {
        Self {
            x: x0,
            y: y0,
            w: (x1 - x0).max(0) as u32,
            h: (y1 - y0).max(0) as u32,
        }
    }

    pub fn right(&self) -> i32 {
        self.x + self.w as i32
    }

    pub fn bottom(&self) -> i32 {
        self.y + self.h as i32
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    pub fn is_within(&self, width: u32, height: u32) -> bool {
        self.x >= 0
            && self.y >= 0
            && self.w > 0
            && self.h > 0
            && self.right() <= width as i32
            && self.bottom() <= height as i32
    }

    /// Grows by `pad` on every side and clamps to `[0, width) × [0, height)`.
    pub fn pad_clamped(&self, pad: u32, width: u32, height: u32) -> Self {
        let pad = pad as i32;
        Self::from_edges(
            (self.x - pad).max(0),
            (self.y - pad).max(0),
            (self.right() + pad).min(width as i32),
            (self.bottom() + pad).min(height as i32),
        )
    }

    pub fn clamp_to(&self, width: u32, height: u32) -> Self {
        self.pad_clamped(0, width, height)
    }

    pub fn contains_rect(&self, other: &RectI) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }
}
