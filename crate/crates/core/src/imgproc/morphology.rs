//! Binary and grayscale morphology with rectangular and elliptical
//! structuring elements.
//!
//! Neighbors outside the image never contribute: erosion takes the minimum
//! and dilation the maximum over the in-bounds part of the kernel only. This
//! keeps erosion and dilation adjoint, so duality and opening idempotence
//! hold exactly, borders included.

use serde::{Deserialize, Serialize};

use super::image::{BinaryImage, GrayImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelShape {
    Rectangle,
    Ellipse,
}

/// Structuring element with odd dimensions, anchored at its center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "KernelFields")]
pub struct Kernel {
    shape: KernelShape,
    width: u32,
    height: u32,
}

#[derive(Deserialize)]
struct KernelFields {
    shape: KernelShape,
    width: u32,
    height: u32,
}

impl TryFrom<KernelFields> for Kernel {
    type Error = Error;

    fn try_from(k: KernelFields) -> Result<Self> {
        Kernel::new(k.shape, k.width, k.height)
    }
}

impl Kernel {
    pub fn new(shape: KernelShape, width: u32, height: u32) -> Result<Self> {
        if width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "kernel dimensions must be odd, got {width}x{height}"
            )));
        }
        Ok(Self {
            shape,
            width,
            height,
        })
    }

    pub fn rect(width: u32, height: u32) -> Result<Self> {
        Self::new(KernelShape::Rectangle, width, height)
    }

    pub fn ellipse(width: u32, height: u32) -> Result<Self> {
        Self::new(KernelShape::Ellipse, width, height)
    }

    pub fn shape(&self) -> KernelShape {
        self.shape
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Whether offset `(dx, dy)` from the anchor belongs to the kernel.
    ///
    /// Ellipse membership tests pixel centers against the ellipse inscribed
    /// in the kernel's bounding box (semi-axes `width/2`, `height/2`).
    pub fn contains(&self, dx: i32, dy: i32) -> bool {
        let rx = (self.width / 2) as i32;
        let ry = (self.height / 2) as i32;
        if dx.abs() > rx || dy.abs() > ry {
            return false;
        }
        match self.shape {
            KernelShape::Rectangle => true,
            KernelShape::Ellipse => {
                let a = self.width as f64 / 2.0;
                let b = self.height as f64 / 2.0;
                let (fx, fy) = (dx as f64 / a, dy as f64 / b);
                fx * fx + fy * fy <= 1.0
            }
        }
    }

    /// `(dy, half_width)` for every kernel row; rows are contiguous runs.
    fn rows(&self) -> Vec<(i32, u32)> {
        let ry = (self.height / 2) as i32;
        (-ry..=ry)
            .map(|dy| {
                let half = (0..=(self.width / 2) as i32)
                    .take_while(|&dx| self.contains(dx, dy))
                    .last()
                    .expect("anchor row always has its center");
                (dy, half as u32)
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
enum Extreme {
    Min,
    Max,
}

impl Extreme {
    #[inline]
    fn apply(self, a: u8, b: u8) -> u8 {
        match self {
            Extreme::Min => a.min(b),
            Extreme::Max => a.max(b),
        }
    }

    fn identity(self) -> u8 {
        match self {
            Extreme::Min => 255,
            Extreme::Max => 0,
        }
    }
}

/// Centered sliding min/max over windows of `2*half+1`, van Herk/Gil-Werman.
fn sliding(src: &[u8], half: usize, op: Extreme, out: &mut [u8]) {
    if half == 0 {
        out.copy_from_slice(src);
        return;
    }
    let k = 2 * half + 1;
    let pad = op.identity();
    let m = src.len() + 2 * half;
    let mut padded = vec![pad; m];
    padded[half..half + src.len()].copy_from_slice(src);

    let mut prefix = padded.clone();
    for i in 1..m {
        if i % k != 0 {
            prefix[i] = op.apply(prefix[i - 1], padded[i]);
        }
    }
    let mut suffix = padded.clone();
    for i in (0..m - 1).rev() {
        if (i + 1) % k != 0 {
            suffix[i] = op.apply(suffix[i + 1], padded[i]);
        }
    }
    for (x, o) in out.iter_mut().enumerate() {
        *o = op.apply(suffix[x], prefix[x + k - 1]);
    }
}

fn rows_pass(img: &GrayImage, half: u32, op: Extreme) -> Vec<u8> {
    let (w, h) = img.dimensions();
    let mut out = vec![0u8; img.as_raw().len()];
    for y in 0..h {
        let start = y as usize * w as usize;
        sliding(img.row(y), half as usize, op, &mut out[start..start + w as usize]);
    }
    out
}

fn columns_pass(data: &[u8], w: u32, h: u32, half: u32, op: Extreme) -> Vec<u8> {
    let (w, h) = (w as usize, h as usize);
    let mut out = vec![0u8; data.len()];
    let mut column = vec![0u8; h];
    let mut result = vec![0u8; h];
    for x in 0..w {
        for y in 0..h {
            column[y] = data[y * w + x];
        }
        sliding(&column, half as usize, op, &mut result);
        for y in 0..h {
            out[y * w + x] = result[y];
        }
    }
    out
}

fn morph(img: &GrayImage, kernel: &Kernel, op: Extreme) -> GrayImage {
    let (w, h) = img.dimensions();
    let data = match kernel.shape {
        KernelShape::Rectangle => {
            let rows = rows_pass(img, kernel.width / 2, op);
            columns_pass(&rows, w, h, kernel.height / 2, op)
        }
        KernelShape::Ellipse => {
            let rows = kernel.rows();
            let mut by_half: Vec<(u32, Vec<u8>)> = Vec::new();
            for &(_, half) in &rows {
                if !by_half.iter().any(|(hw, _)| *hw == half) {
                    by_half.push((half, rows_pass(img, half, op)));
                }
            }
            let mut out = vec![op.identity(); img.as_raw().len()];
            for &(dy, half) in &rows {
                let src = &by_half.iter().find(|(hw, _)| *hw == half).unwrap().1;
                for y in 0..h as i32 {
                    let sy = y + dy;
                    if sy < 0 || sy >= h as i32 {
                        continue;
                    }
                    let dst = &mut out[y as usize * w as usize..(y as usize + 1) * w as usize];
                    let row = &src[sy as usize * w as usize..(sy as usize + 1) * w as usize];
                    for (d, &s) in dst.iter_mut().zip(row) {
                        *d = op.apply(*d, s);
                    }
                }
            }
            out
        }
    };
    GrayImage::new(w, h, data).expect("same dimensions")
}

/// Grayscale erosion: minimum over the kernel footprint.
pub fn erode_gray(img: &GrayImage, kernel: &Kernel) -> GrayImage {
    morph(img, kernel, Extreme::Min)
}

/// Grayscale dilation: maximum over the kernel footprint.
pub fn dilate_gray(img: &GrayImage, kernel: &Kernel) -> GrayImage {
    morph(img, kernel, Extreme::Max)
}

pub fn opening_gray(img: &GrayImage, kernel: &Kernel) -> GrayImage {
    dilate_gray(&erode_gray(img, kernel), kernel)
}

/// `img − opening(img)`, saturating at zero.
pub fn white_top_hat(img: &GrayImage, kernel: &Kernel) -> GrayImage {
    let opened = opening_gray(img, kernel);
    let data = img
        .as_raw()
        .iter()
        .zip(opened.as_raw())
        .map(|(&a, &b)| a.saturating_sub(b))
        .collect();
    GrayImage::new(img.width(), img.height(), data).expect("same dimensions")
}

pub fn erode(img: &BinaryImage, kernel: &Kernel) -> BinaryImage {
    BinaryImage::from_gray_unchecked(erode_gray(img.as_gray(), kernel))
}

pub fn dilate(img: &BinaryImage, kernel: &Kernel) -> BinaryImage {
    BinaryImage::from_gray_unchecked(dilate_gray(img.as_gray(), kernel))
}

pub fn opening(img: &BinaryImage, kernel: &Kernel) -> BinaryImage {
    dilate(&erode(img, kernel), kernel)
}
