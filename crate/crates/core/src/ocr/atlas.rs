use std::sync::{Arc, OnceLock};

use super::font::{glyph_grids, GridBitmap, GRID_H, GRID_W};
use crate::error::{Error, Result};
use crate::imgproc::{nearest_source, BinaryImage, RectI};

pub const DEFAULT_CELL: (u32, u32) = (16, 24);

/// Fixed-size bit pattern compared cell by cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of positions where both patterns agree.
    pub fn agreement(&self, other: &Bits) -> usize {
        let differ: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        self.len - differ as usize
    }
}

/// Stretches the set pixels of a `w`×`h` mask onto a `cell`-sized grid by
/// nearest-neighbor sampling.
pub fn normalize_mask(mask: &[bool], w: u32, h: u32, cell: (u32, u32)) -> Bits {
    let (cw, ch) = cell;
    let mut bits = Bits::new((cw * ch) as usize);
    for cy in 0..ch {
        let sy = nearest_source(cy, h, ch);
        for cx in 0..cw {
            let sx = nearest_source(cx, w, cw);
            if mask[(sy * w + sx) as usize] {
                bits.set((cy * cw + cx) as usize);
            }
        }
    }
    bits
}

#[derive(Debug, Clone)]
pub struct Glyph {
    pub ch: char,
    /// Cell-sized bitmap with the glyph at its natural position.
    pub bitmap: BinaryImage,
    /// Ink extent inside the cell.
    pub ink: RectI,
    /// Ink extent stretched to the full cell; what components are matched
    /// against.
    pub template: Bits,
}

/// Glyph bitmaps shared by the synthetic renderer and the built-in matcher.
#[derive(Debug, Clone)]
pub struct GlyphAtlas {
    cell: (u32, u32),
    glyphs: Vec<Glyph>,
}

impl GlyphAtlas {
    /// Builds an atlas from cell-sized bitmaps. Glyphs are kept in codepoint
    /// order.
    pub fn from_bitmaps(
        cell: (u32, u32),
        bitmaps: impl IntoIterator<Item = (char, BinaryImage)>,
    ) -> Result<Self> {
        let mut glyphs = Vec::new();
        for (ch, bitmap) in bitmaps {
            if bitmap.dimensions() != cell {
                return Err(Error::InvalidInput(format!(
                    "glyph {ch:?} is {:?}, expected cell {cell:?}",
                    bitmap.dimensions()
                )));
            }
            let (w, h) = cell;
            let set: Vec<(i32, i32)> = (0..h)
                .flat_map(|y| (0..w).map(move |x| (x, y)))
                .filter(|&(x, y)| bitmap.is_set(x, y))
                .map(|(x, y)| (x as i32, y as i32))
                .collect();
            let ink = crate::imgproc::points_bounding_rect(&set)
                .map_err(|_| Error::InvalidInput(format!("glyph {ch:?} has no ink")))?;
            let mask: Vec<bool> = (0..ink.h)
                .flat_map(|y| (0..ink.w).map(move |x| (x, y)))
                .map(|(x, y)| bitmap.is_set(ink.x as u32 + x, ink.y as u32 + y))
                .collect();
            let template = normalize_mask(&mask, ink.w, ink.h, cell);
            glyphs.push(Glyph {
                ch,
                bitmap,
                ink,
                template,
            });
        }
        glyphs.sort_by_key(|g| g.ch);
        if let Some(pair) = glyphs.windows(2).find(|p| p[0].ch == p[1].ch) {
            return Err(Error::InvalidInput(format!("duplicate glyph {:?}", pair[0].ch)));
        }
        Ok(Self { cell, glyphs })
    }

    /// The built-in payment-terminal font at the default 16×24 cell.
    pub fn builtin() -> Arc<GlyphAtlas> {
        static ATLAS: OnceLock<Arc<GlyphAtlas>> = OnceLock::new();
        ATLAS
            .get_or_init(|| {
                let (cw, ch) = DEFAULT_CELL;
                let sx = cw as usize / GRID_W;
                let sy = ch as usize / GRID_H;
                let bitmaps = glyph_grids().into_iter().map(|(c, grid)| {
                    let mut img = BinaryImage::from_fn(cw, ch, |x, y| {
                        grid[y as usize / sy][x as usize / sx]
                    });
                    bridge_diagonals(&grid, &mut img);
                    (c, img)
                });
                Arc::new(Self::from_bitmaps(DEFAULT_CELL, bitmaps).expect("built-in font is valid"))
            })
            .clone()
    }

    pub fn cell(&self) -> (u32, u32) {
        self.cell
    }

    pub fn glyphs(&self) -> &[Glyph] {
        &self.glyphs
    }

    pub fn glyph(&self, ch: char) -> Option<&Glyph> {
        self.glyphs
            .binary_search_by_key(&ch, |g| g.ch)
            .ok()
            .map(|i| &self.glyphs[i])
    }

    pub fn contains(&self, ch: char) -> bool {
        self.glyph(ch).is_some()
    }

    pub fn charset(&self) -> impl Iterator<Item = char> + '_ {
        self.glyphs.iter().map(|g| g.ch)
    }
}

/// Grid pixels that touch only at a corner get one cell pixel of ink on each
/// side of the contact point, so the upscaled stroke stays 4-connected and
/// survives resampling. Assumes a 2× upscale.
fn bridge_diagonals(grid: &GridBitmap, img: &mut BinaryImage) {
    let put = |img: &mut BinaryImage, x: isize, y: isize| img.set(x as u32, y as u32, true);
    let on = |x: isize, y: isize| {
        x >= 0 && y >= 0 && (x as usize) < GRID_W && (y as usize) < GRID_H && grid[y as usize][x as usize]
    };
    for gy in 0..GRID_H as isize {
        for gx in 0..GRID_W as isize {
            if !on(gx, gy) {
                continue;
            }
            // Down-right neighbor, contact at cell corner (2gx+2, 2gy+2).
            if on(gx + 1, gy + 1) && !on(gx + 1, gy) && !on(gx, gy + 1) {
                put(img, 2 * gx + 2, 2 * gy + 1);
                put(img, 2 * gx + 1, 2 * gy + 2);
            }
            // Down-left neighbor, contact at (2gx, 2gy+2).
            if on(gx - 1, gy + 1) && !on(gx - 1, gy) && !on(gx, gy + 1) {
                put(img, 2 * gx - 1, 2 * gy + 1);
                put(img, 2 * gx, 2 * gy + 2);
            }
        }
    }
}
