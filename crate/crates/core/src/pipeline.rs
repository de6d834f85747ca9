//! Full recognition over a frame whose screen has been detected.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{parse_settings, Setting};
use crate::error::{Error, Result};
use crate::extract::{
    extract_value, match_operation, select_best, ExtractConfig, PassResult, RecognitionOutcome,
};
use crate::imgproc::{
    dilate, erode, median_filter, otsu_threshold, rotate_about_center, BinaryImage, GrayImage,
    Kernel, MAX_ROTATION_DEG,
};
use crate::ocr::{BuiltinOcr, ExternalOcr, OcrEngine, DEFAULT_TIMEOUT};
use crate::roi::{detect_regions, RoiConfig, TextRegion};
use crate::screen::{detect_screen, ScreenConfig, ScreenDetection};

/// How later OCR passes reshape the strokes of the first binarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SecondPass {
    /// Dilate the ink, joining thin and broken strokes.
    #[default]
    Thicken,
    /// Erode the ink.
    Thin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OcrSelection {
    Builtin,
    External { program: PathBuf },
}

impl std::str::FromStr for OcrSelection {
    type Err = Error;

    /// `builtin` or `external:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            None if s == "builtin" => Ok(OcrSelection::Builtin),
            Some(("external", path)) if !path.is_empty() => Ok(OcrSelection::External {
                program: PathBuf::from(path),
            }),
            _ => Err(Error::InvalidArgument(format!(
                "ocr must be `builtin` or `external:<path>`, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Screens tilted at most this much are not rotated.
    pub rotation_gate: f64,
    pub median_k: u32,
    pub thicken_kernel: Kernel,
    pub passes: usize,
    pub second_pass: SecondPass,
    pub screen: ScreenConfig,
    pub roi: RoiConfig,
    pub extract: ExtractConfig,
    pub ocr: OcrSelection,
    pub ocr_timeout: Duration,
    /// Process regions on the rayon pool.
    pub parallel: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            rotation_gate: 4.0,
            median_k: 3,
            thicken_kernel: Kernel::ellipse(3, 3).expect("odd"),
            passes: 2,
            second_pass: SecondPass::Thicken,
            screen: ScreenConfig::default(),
            roi: RoiConfig::default(),
            extract: ExtractConfig::default().normalized().expect("valid defaults"),
            ocr: OcrSelection::Builtin,
            ocr_timeout: DEFAULT_TIMEOUT,
            parallel: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=MAX_ROTATION_DEG).contains(&self.rotation_gate) {
            return Err(Error::InvalidArgument(format!(
                "rotation_gate must be within 0-{MAX_ROTATION_DEG}"
            )));
        }
        if self.median_k.is_multiple_of(2) {
            return Err(Error::InvalidArgument("median_k must be odd".into()));
        }
        if self.passes == 0 {
            return Err(Error::InvalidArgument("passes must be at least 1".into()));
        }
        self.screen.validate()?;
        self.roi.validate()?;
        self.extract.clone().normalized().map(|_| ())
    }

    /// Reads a `key = value` file. Unknown keys are errors.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for s in parse_settings(text)? {
            if !cfg.apply(&s)? {
                return Err(s.error("unknown key"));
            }
        }
        cfg.extract = cfg.extract.normalized()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    fn apply(&mut self, s: &Setting) -> Result<bool> {
        if self.extract.apply(s)? {
            return Ok(true);
        }
        match s.key.as_str() {
            "rotation_gate" => self.rotation_gate = s.parse()?,
            "median_k" => self.median_k = s.parse()?,
            "thicken_kernel" => {
                // `ellipse 3x3` or `rectangle 5x3`.
                let (shape, dims) = s.value.split_once(' ').ok_or_else(|| s.error("expected `<shape> <w>x<h>`"))?;
                let (w, h) = dims
                    .trim()
                    .split_once('x')
                    .and_then(|(w, h)| Some((w.parse().ok()?, h.parse().ok()?)))
                    .ok_or_else(|| s.error("expected `<w>x<h>`"))?;
                self.thicken_kernel = match shape {
                    "ellipse" => Kernel::ellipse(w, h),
                    "rectangle" => Kernel::rect(w, h),
                    _ => return Err(s.error("shape must be ellipse or rectangle")),
                }
                .map_err(|e| s.error(e.to_string()))?;
            }
            "passes" => self.passes = s.parse()?,
            "second_pass" => {
                self.second_pass = match s.value.as_str() {
                    "thicken" => SecondPass::Thicken,
                    "thin" => SecondPass::Thin,
                    _ => return Err(s.error("expected thicken or thin")),
                }
            }
            "ocr" => self.ocr = s.value.parse().map_err(|e: Error| s.error(e.to_string()))?,
            "ocr_timeout_secs" => self.ocr_timeout = Duration::from_secs_f64(s.parse()?),
            "parallel" => self.parallel = s.parse()?,
            "work_height" => self.screen.work_height = s.parse()?,
            "focus_min" => self.screen.focus_min = s.parse()?,
            "area_min_frac" => self.screen.area_min_frac = s.parse()?,
            "area_max_frac" => self.screen.area_max_frac = s.parse()?,
            "edge_margin_frac" => self.screen.edge_margin_frac = s.parse()?,
            "tophat_kernel_frac" => self.roi.tophat_kernel_frac = s.parse()?,
            "dilate_w_frac" => self.roi.dilate_w_frac = s.parse()?,
            "dilate_h_frac" => self.roi.dilate_h_frac = s.parse()?,
            "roi_pad" => self.roi.pad = s.parse()?,
            "roi_area_min_frac" => self.roi.area_min_frac = s.parse()?,
            "roi_area_max_frac" => self.roi.area_max_frac = s.parse()?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// Intermediate images of one recognition, for inspection.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    /// Cropped, filtered and, when needed, rotated screen.
    pub screen: Option<GrayImage>,
    pub regions: Vec<TextRegion>,
    /// Binarized input of every OCR pass: `(region index, pass, image)`.
    pub passes: Vec<(usize, usize, BinaryImage)>,
}

/// Configuration plus the OCR engine it selects.
#[derive(Clone)]
pub struct Recognizer {
    cfg: PipelineConfig,
    engine: Arc<dyn OcrEngine>,
}

impl std::fmt::Debug for Recognizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Recognizer").field("cfg", &self.cfg).finish_non_exhaustive()
    }
}

impl Recognizer {
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        cfg.validate()?;
        let engine: Arc<dyn OcrEngine> = match &cfg.ocr {
            OcrSelection::Builtin => Arc::new(BuiltinOcr::default()),
            OcrSelection::External { program } => {
                Arc::new(ExternalOcr::new(program).with_timeout(cfg.ocr_timeout))
            }
        };
        Ok(Self { cfg, engine })
    }

    /// Uses a caller-supplied engine regardless of `cfg.ocr`.
    pub fn with_engine(cfg: PipelineConfig, engine: Arc<dyn OcrEngine>) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { cfg, engine })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn detect(&self, frame: &GrayImage) -> Result<Option<ScreenDetection>> {
        detect_screen(frame, &self.cfg.screen)
    }

    /// Detection followed by recognition; `None` when no screen is found.
    pub fn detect_and_recognize(
        &self,
        frame: &GrayImage,
    ) -> Result<Option<(ScreenDetection, RecognitionOutcome)>> {
        let Some(det) = self.detect(frame)? else {
            return Ok(None);
        };
        let outcome = self.recognize(frame, &det)?;
        Ok(Some((det, outcome)))
    }

    pub fn recognize(&self, frame: &GrayImage, det: &ScreenDetection) -> Result<RecognitionOutcome> {
        self.run(frame, det, None)
    }

    pub fn recognize_traced(
        &self,
        frame: &GrayImage,
        det: &ScreenDetection,
    ) -> Result<(RecognitionOutcome, Trace)> {
        let mut trace = Trace::default();
        let outcome = self.run(frame, det, Some(&mut trace))?;
        Ok((outcome, trace))
    }

    /// The straightened screen that regions are searched in.
    pub fn prepare_screen(&self, frame: &GrayImage, det: &ScreenDetection) -> Result<GrayImage> {
        if !det.angle.is_finite() || det.angle.abs() > MAX_ROTATION_DEG {
            return Err(Error::AngleOutOfRange(det.angle));
        }
        let crop = frame.crop(det.rect)?;
        let filtered = median_filter(&crop, self.cfg.median_k)?;
        if det.angle.abs() > self.cfg.rotation_gate {
            rotate_about_center(&filtered, -det.angle)
        } else {
            Ok(filtered)
        }
    }

    fn run(
        &self,
        frame: &GrayImage,
        det: &ScreenDetection,
        mut trace: Option<&mut Trace>,
    ) -> Result<RecognitionOutcome> {
        let screen = self.prepare_screen(frame, det)?;
        let regions = detect_regions(&screen, &self.cfg.roi)?;

        let per_region = |(i, r): (usize, &TextRegion)| self.read_region(i, r);
        let results: Vec<Vec<(PassResult, BinaryImage)>> = if self.cfg.parallel {
            regions.par_iter().enumerate().map(per_region).collect()
        } else {
            regions.iter().enumerate().map(per_region).collect()
        };

        let mut passes = Vec::new();
        for (i, region) in results.into_iter().enumerate() {
            for (p, bin) in region {
                if let Some(t) = trace.as_deref_mut() {
                    t.passes.push((i, p.pass, bin));
                }
                passes.push(p);
            }
        }
        let outcome = select_best(&passes, regions.len(), &self.cfg.extract);
        if let Some(t) = trace {
            t.screen = Some(screen);
            t.regions = regions;
        }
        Ok(outcome)
    }

    /// Every OCR pass over one region. Engine failures end the region early.
    fn read_region(&self, index: usize, region: &TextRegion) -> Vec<(PassResult, BinaryImage)> {
        let img = if region.image.mean() > 128.0 {
            region.image.invert()
        } else {
            region.image.clone()
        };
        let (_, mut bin) = otsu_threshold(&img);
        let mut out = Vec::with_capacity(self.cfg.passes);
        for pass in 1..=self.cfg.passes {
            if pass > 1 {
                bin = match self.cfg.second_pass {
                    SecondPass::Thicken => dilate(&bin, &self.cfg.thicken_kernel),
                    SecondPass::Thin => erode(&bin, &self.cfg.thicken_kernel),
                };
            }
            let ocr = match self.engine.recognize(&bin) {
                Ok(r) => r,
                Err(e) => {
                    log::warn!("region {index} pass {pass}: {e}");
                    break;
                }
            };
            let result = PassResult {
                rect: region.rect,
                pass,
                text: ocr.text(),
                value: extract_value(&ocr),
                operation: match_operation(&ocr, &self.cfg.extract),
            };
            out.push((result, bin.clone()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ocr_selection_parses() {
        assert_eq!("builtin".parse::<OcrSelection>().unwrap(), OcrSelection::Builtin);
        assert_eq!(
            "external:/usr/bin/x".parse::<OcrSelection>().unwrap(),
            OcrSelection::External {
                program: "/usr/bin/x".into()
            }
        );
        assert!("external:".parse::<OcrSelection>().is_err());
        assert!("tesseract".parse::<OcrSelection>().is_err());
    }

    #[test]
    fn config_file() {
        let cfg = PipelineConfig::from_text(
            "rotation_gate = 2\nsecond_pass = thin\nthicken_kernel = rectangle 5x3\nvalue_threshold = 55\nocr = external:/bin/true\n",
        )
        .unwrap();
        assert_eq!(cfg.rotation_gate, 2.0);
        assert_eq!(cfg.second_pass, SecondPass::Thin);
        assert_eq!((cfg.thicken_kernel.width(), cfg.thicken_kernel.height()), (5, 3));
        assert_eq!(cfg.extract.value_threshold, 55.0);
        assert!(matches!(cfg.ocr, OcrSelection::External { .. }));
        assert!(PipelineConfig::from_text("rotation_gate = 50").is_err());
        assert!(matches!(
            PipelineConfig::from_text("median_k = 3\nbogus = 1"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn rejects_steep_detection() {
        let r = Recognizer::new(PipelineConfig::default()).unwrap();
        let frame = GrayImage::filled(50, 50, 100);
        let det = ScreenDetection {
            rect: crate::imgproc::RectI::new(0, 0, 50, 50),
            rrect: crate::imgproc::RotatedRect {
                center: (25.0, 25.0),
                size: (50.0, 50.0),
                angle: 50.0,
            },
            angle: 50.0,
            focus: 0.0,
        };
        assert!(matches!(r.recognize(&frame, &det), Err(Error::AngleOutOfRange(_))));
    }
}
