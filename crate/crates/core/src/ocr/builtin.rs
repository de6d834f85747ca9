//! Template matcher over the glyph atlas.

use super::atlas::{normalize_mask, Bits, GlyphAtlas};
use super::{OcrChar, OcrResult};
use crate::imgproc::{connected_components, BinaryImage, RectI};

/// Components below this many pixels are treated as specks.
pub const MIN_COMPONENT_PIXELS: usize = 4;
/// A gap of at least this fraction of the median component width is a space.
pub const SPACE_GAP_FACTOR: f64 = 0.5;
/// Components whose horizontal overlap covers this fraction of the narrower
/// one are stacked parts of the same glyph (accents, colon dots).
pub const STACK_OVERLAP: f64 = 0.6;

#[derive(Debug, Clone)]
struct Blob {
    bbox: RectI,
    pixels: Vec<(u32, u32)>,
}

fn horizontal_overlap(a: &RectI, b: &RectI) -> f64 {
    let overlap = (a.right().min(b.right()) - a.x.max(b.x)).max(0) as f64;
    overlap / a.w.min(b.w) as f64
}

fn union(a: &RectI, b: &RectI) -> RectI {
    RectI::from_edges(
        a.x.min(b.x),
        a.y.min(b.y),
        a.right().max(b.right()),
        a.bottom().max(b.bottom()),
    )
}

/// Foreground blobs sorted left to right, with vertically stacked pieces
/// merged.
fn segment(img: &BinaryImage) -> Vec<Blob> {
    let mut blobs: Vec<Blob> = connected_components(img)
        .into_iter()
        .filter(|c| c.pixels.len() >= MIN_COMPONENT_PIXELS)
        .map(|c| Blob {
            bbox: c.bbox,
            pixels: c.pixels,
        })
        .collect();

    // Merging grows boxes, which can enable further merges.
    loop {
        let pair = (0..blobs.len()).find_map(|i| {
            (i + 1..blobs.len())
                .find(|&j| horizontal_overlap(&blobs[i].bbox, &blobs[j].bbox) >= STACK_OVERLAP)
                .map(|j| (i, j))
        });
        let Some((i, j)) = pair else { break };
        let b = blobs.swap_remove(j);
        let a = &mut blobs[i];
        a.bbox = union(&a.bbox, &b.bbox);
        a.pixels.extend(b.pixels);
    }
    blobs.sort_by_key(|b| (b.bbox.x, b.bbox.y, b.bbox.w, b.bbox.h));
    blobs
}

fn blob_bits(blob: &Blob, cell: (u32, u32)) -> Bits {
    let RectI { x, y, w, h } = blob.bbox;
    let mut mask = vec![false; (w * h) as usize];
    for &(px, py) in &blob.pixels {
        mask[((py - y as u32) * w + (px - x as u32)) as usize] = true;
    }
    normalize_mask(&mask, w, h, cell)
}

/// Best glyph for a normalized pattern: `(char, matching cells)`. Ties go to
/// the lower codepoint.
pub fn best_glyph(bits: &Bits, atlas: &GlyphAtlas) -> Option<(char, usize)> {
    let mut best: Option<(char, usize)> = None;
    for g in atlas.glyphs() {
        let score = g.template.agreement(bits);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((g.ch, score));
        }
    }
    best
}

/// Confidence in 0–100 of `bits` matching the glyph for `ch`.
pub fn glyph_score(bits: &Bits, atlas: &GlyphAtlas, ch: char) -> Option<f64> {
    let g = atlas.glyph(ch)?;
    Some(100.0 * g.template.agreement(bits) as f64 / bits.len() as f64)
}

/// Normalizes the set pixels of `mask` (row-major, `w`×`h`, already cropped
/// to the glyph) to the atlas cell.
pub fn mask_bits(mask: &[bool], w: u32, h: u32, atlas: &GlyphAtlas) -> Bits {
    normalize_mask(mask, w, h, atlas.cell())
}

pub fn builtin_match(img: &BinaryImage, atlas: &GlyphAtlas) -> OcrResult {
    let blobs = segment(img);
    if blobs.is_empty() {
        return OcrResult::default();
    }
    let mut widths: Vec<u32> = blobs.iter().map(|b| b.bbox.w).collect();
    widths.sort_unstable();
    let median = if widths.len() % 2 == 1 {
        widths[widths.len() / 2] as f64
    } else {
        (widths[widths.len() / 2 - 1] + widths[widths.len() / 2]) as f64 / 2.0
    };
    let space_gap = SPACE_GAP_FACTOR * median;

    let total = (atlas.cell().0 * atlas.cell().1) as f64;
    let mut chars = Vec::with_capacity(blobs.len());
    let mut prev_right: Option<i32> = None;
    for blob in &blobs {
        if let Some(right) = prev_right {
            if (blob.bbox.x - right) as f64 >= space_gap {
                chars.push(OcrChar::new(' ', 100));
            }
        }
        prev_right = Some(prev_right.map_or(blob.bbox.right(), |r| r.max(blob.bbox.right())));
        let bits = blob_bits(blob, atlas.cell());
        if let Some((ch, score)) = best_glyph(&bits, atlas) {
            let conf = (100.0 * score as f64 / total).round() as u8;
            chars.push(OcrChar::new(ch, conf));
        }
    }
    OcrResult::new(chars)
}
