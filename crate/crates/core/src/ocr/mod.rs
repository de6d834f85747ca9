//! Character recognition behind a common engine interface.

mod atlas;
mod builtin;
mod external;
mod font;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use atlas::{normalize_mask, Bits, Glyph, GlyphAtlas, DEFAULT_CELL};
pub use builtin::{
    best_glyph, builtin_match, glyph_score, mask_bits, MIN_COMPONENT_PIXELS, SPACE_GAP_FACTOR,
    STACK_OVERLAP,
};
pub use external::{external_parse, ExternalOcr, DEFAULT_TIMEOUT};

use crate::error::Result;
use crate::imgproc::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcrChar {
    pub ch: char,
    /// 0–100.
    pub conf: u8,
}

impl OcrChar {
    pub fn new(ch: char, conf: u8) -> Self {
        Self {
            ch,
            conf: conf.min(100),
        }
    }
}

/// Recognized characters in reading order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OcrResult {
    chars: Vec<OcrChar>,
}

impl OcrResult {
    /// Whitespace characters always carry full confidence.
    pub fn new(chars: Vec<OcrChar>) -> Self {
        let chars = chars
            .into_iter()
            .map(|c| if c.ch.is_whitespace() { OcrChar::new(c.ch, 100) } else { c })
            .collect();
        Self { chars }
    }

    /// Every character of `text` with the same confidence.
    pub fn uniform(text: &str, conf: u8) -> Self {
        Self::new(text.chars().map(|ch| OcrChar::new(ch, conf)).collect())
    }

    pub fn chars(&self) -> &[OcrChar] {
        &self.chars
    }

    pub fn text(&self) -> String {
        self.chars.iter().map(|c| c.ch).collect()
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
}

/// Anything that turns a binarized text line (ink = 255) into characters.
pub trait OcrEngine: Send + Sync {
    fn recognize(&self, img: &BinaryImage) -> Result<OcrResult>;
}

/// Template matcher over a glyph atlas; needs no external process.
#[derive(Debug, Clone)]
pub struct BuiltinOcr {
    atlas: Arc<GlyphAtlas>,
}

impl BuiltinOcr {
    pub fn new(atlas: Arc<GlyphAtlas>) -> Self {
        Self { atlas }
    }

    pub fn atlas(&self) -> &GlyphAtlas {
        &self.atlas
    }
}

impl Default for BuiltinOcr {
    fn default() -> Self {
        Self::new(GlyphAtlas::builtin())
    }
}

impl OcrEngine for BuiltinOcr {
    fn recognize(&self, img: &BinaryImage) -> Result<OcrResult> {
        Ok(builtin_match(img, &self.atlas))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_confidence_is_full() {
        let r = OcrResult::new(vec![OcrChar::new('A', 40), OcrChar::new(' ', 3)]);
        assert_eq!(r.chars()[1].conf, 100);
        assert_eq!(r.text(), "A ");
        assert_eq!(r.len(), r.text().chars().count());
    }

    #[test]
    fn blank_image_reads_nothing() {
        let r = BuiltinOcr::default()
            .recognize(&BinaryImage::empty(40, 20))
            .unwrap();
        assert!(r.is_empty());
    }
}
