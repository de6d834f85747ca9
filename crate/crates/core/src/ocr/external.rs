//! Adapter for OCR engines run as a subprocess.
//!
//! The engine receives the path of a PNG as its only argument and prints one
//! `<char>\t<confidence>` row per recognized character on stdout, confidence
//! already on a 0–100 scale.

use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::Duration;

use wait_timeout::ChildExt;

use super::{OcrChar, OcrEngine, OcrResult};
use crate::error::{Error, Result};
use crate::imgproc::BinaryImage;

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

/// Parses engine TSV output. Blank lines are skipped; line numbers in errors
/// are 1-based.
pub fn external_parse(raw: &[u8]) -> Result<OcrResult> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::Parse {
        line: 1 + raw[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count(),
        message: "output is not valid UTF-8".into(),
    })?;
    let mut chars = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (glyph, conf) = line
            .split_once('\t')
            .ok_or_else(|| err(format!("expected `<char>\\t<confidence>`, got {line:?}")))?;
        let mut it = glyph.chars();
        let ch = match (it.next(), it.next()) {
            (Some(c), None) => c,
            _ => return Err(err(format!("expected a single character, got {glyph:?}"))),
        };
        let conf: f64 = conf
            .trim()
            .parse()
            .map_err(|_| err(format!("unparsable confidence {conf:?}")))?;
        if !conf.is_finite() || !(0.0..=100.0).contains(&conf) {
            return Err(err(format!("confidence {conf} outside 0–100")));
        }
        // Round half up.
        chars.push(OcrChar::new(ch, (conf + 0.5).floor() as u8));
    }
    Ok(OcrResult::new(chars))
}

/// Runs an external program per region.
#[derive(Debug, Clone)]
pub struct ExternalOcr {
    program: PathBuf,
    timeout: Duration,
}

impl ExternalOcr {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        Self {
            program: program.into(),
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn program(&self) -> &std::path::Path {
        &self.program
    }
}

impl OcrEngine for ExternalOcr {
    fn recognize(&self, img: &BinaryImage) -> Result<OcrResult> {
        let file = tempfile::Builder::new()
            .prefix("payscan-region-")
            .suffix(".png")
            .tempfile()?;
        // Engines expect dark text on a light page.
        crate::io::save_png(&img.complement().into_gray(), file.path())?;

        let mut child = Command::new(&self.program)
            .arg(file.path())
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| Error::Engine(format!("cannot start {}: {e}", self.program.display())))?;

        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = std::thread::spawn(move || {
            let mut buf = Vec::new();
            stdout.read_to_end(&mut buf).map(|_| buf)
        });

        let status = match child.wait_timeout(self.timeout)? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(Error::Engine(format!(
                    "{} timed out after {:?}",
                    self.program.display(),
                    self.timeout
                )));
            }
        };
        let output = reader
            .join()
            .map_err(|_| Error::Engine("stdout reader panicked".into()))??;
        if !status.success() {
            let mut stderr = String::new();
            if let Some(mut e) = child.stderr.take() {
                let _ = e.read_to_string(&mut stderr);
            }
            return Err(Error::Engine(format!(
                "{} exited with {status}: {}",
                self.program.display(),
                stderr.trim()
            )));
        }
        external_parse(&output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_rows() {
        let r = external_parse(b"1\t91.5\n2\t88.0\n").unwrap();
        assert_eq!(r.text(), "12");
        let confs: Vec<u8> = r.chars().iter().map(|c| c.conf).collect();
        assert_eq!(confs, vec![92, 88]);
    }

    #[test]
    fn empty_payload() {
        assert!(external_parse(b"").unwrap().is_empty());
    }

    #[test]
    fn nan_is_error_with_line() {
        let err = external_parse(b"1\t90\nA\tNaN\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn malformed_rows() {
        assert!(matches!(external_parse(b"12\t90"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(external_parse(b"\n\nx 90"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(external_parse(b"x\t101"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn space_rows_and_unicode() {
        let r = external_parse(" \t100\nÉ\t77.49\n".as_bytes()).unwrap();
        assert_eq!(r.text(), " É");
        assert_eq!(r.chars()[1].conf, 77);
    }
}
