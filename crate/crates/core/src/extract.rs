//! Monetary value and operation extraction from OCR text.

use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use unicode_normalization::{char::is_combining_mark, UnicodeNormalization};

use crate::config::Setting;
use crate::error::{Error, Result};
use crate::imgproc::RectI;
use crate::ocr::OcrResult;

pub const INTEGER_WEIGHT: f64 = 0.75;
pub const DECIMAL_WEIGHT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueCandidate {
    pub cents: u64,
    pub conf: f64,
}

/// Operation label, `None` meaning unknown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperationCandidate {
    pub label: Option<String>,
    pub conf: f64,
}

impl OperationCandidate {
    pub fn unknown() -> Self {
        Self {
            label: None,
            conf: 0.0,
        }
    }

    pub fn is_unknown(&self) -> bool {
        self.label.is_none()
    }

    pub fn label_or_unknown(&self) -> &str {
        self.label.as_deref().unwrap_or("UNKNOWN")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractConfig {
    pub operations: Vec<String>,
    pub blacklist: Vec<String>,
    pub value_threshold: f64,
    pub operation_threshold: f64,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            operations: vec!["CREDITO".into(), "DEBITO".into(), "VOUCHER".into()],
            blacklist: vec!["DIGITE".into()],
            value_threshold: 70.0,
            operation_threshold: 50.0,
        }
    }
}

impl ExtractConfig {
    /// Normalizes labels and checks the thresholds.
    pub fn normalized(mut self) -> Result<Self> {
        for t in [self.value_threshold, self.operation_threshold] {
            if !(0.0..=100.0).contains(&t) {
                return Err(Error::InvalidArgument(format!("threshold {t} outside 0-100")));
            }
        }
        let norm = |v: Vec<String>| {
            let mut out: Vec<String> = Vec::new();
            for s in v.iter().map(|s| normalize(s)).filter(|s| !s.is_empty()) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            out
        };
        self.operations = norm(self.operations);
        self.blacklist = norm(self.blacklist);
        Ok(self)
    }

    /// Applies one config-file setting; returns false for keys it does not
    /// own.
    pub fn apply(&mut self, s: &Setting) -> Result<bool> {
        match s.key.as_str() {
            "operations" => self.operations = s.list(),
            "blacklist" => self.blacklist = s.list(),
            "value_threshold" => self.value_threshold = s.parse()?,
            "operation_threshold" => self.operation_threshold = s.parse()?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for s in crate::config::parse_settings(text)? {
            if !cfg.apply(&s)? {
                return Err(s.error("unknown key"));
            }
        }
        cfg.normalized()
    }
}

/// Uppercase with diacritics removed.
pub fn normalize(text: &str) -> String {
    text.nfd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_uppercase)
        .collect()
}

fn value_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        // Not preceded by a digit; 1-7 integer digits, optionally grouped in
        // threes by '.' or ' ' when ',' is the decimal separator; optional
        // spaces around the separator; two decimals not followed by a digit.
        Regex::new(
            r"(?:^|[^0-9])([0-9]{1,3}(?:\.[0-9]{3}){1,2} ?, ?|[0-9]{1,3}(?: [0-9]{3}){1,2} ?, ?|[0-9]{1,7} ?[,.] ?)([0-9]{2})(?:[^0-9]|$)",
        )
        .expect("valid pattern")
    })
}

/// Best-scoring value in the text: the match maximizing the weighted digit
/// confidence, leftmost on ties.
pub fn extract_value(r: &OcrResult) -> Option<ValueCandidate> {
    let text = r.text();
    let confs: Vec<f64> = r.chars().iter().map(|c| c.conf as f64).collect();
    // Byte offset to char index.
    let mut char_at = vec![0usize; text.len() + 1];
    for (i, (b, _)) in text.char_indices().enumerate() {
        char_at[b] = i;
    }
    char_at[text.len()] = confs.len();

    let re = value_regex();
    let mut best: Option<ValueCandidate> = None;
    let mut pos = 0;
    while pos <= text.len() {
        let Some(caps) = re.captures_at(&text, pos) else {
            break;
        };
        let int = caps.get(1).expect("group 1");
        let dec = caps.get(2).expect("group 2");
        // A leading "<digit>." or "<digit>," means the amount continues to
        // the left and this is only its tail.
        let before = &text.as_bytes()[..int.start()];
        if before.len() >= 2
            && matches!(before[before.len() - 1], b'.' | b',')
            && before[before.len() - 2].is_ascii_digit()
        {
            pos = int.start() + 1;
            continue;
        }
        let digits = |m: regex::Match| -> (u64, Vec<f64>) {
            let mut v = 0u64;
            let mut cs = Vec::new();
            for (b, c) in m.as_str().char_indices() {
                if let Some(d) = c.to_digit(10) {
                    v = v * 10 + d as u64;
                    cs.push(confs[char_at[m.start() + b]]);
                }
            }
            (v, cs)
        };
        let (iv, ic) = digits(int);
        let (dv, dc) = digits(dec);
        let cand = ValueCandidate {
            cents: iv * 100 + dv,
            conf: value_confidence(&ic, &dc),
        };
        if best.is_none_or(|b| cand.conf > b.conf) {
            best = Some(cand);
        }
        pos = dec.end();
    }
    best
}

/// `0.75·mean(integer digits) + 0.25·mean(decimal digits)`.
pub fn value_confidence(integer: &[f64], decimal: &[f64]) -> f64 {
    let mean = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    INTEGER_WEIGHT * mean(integer) + DECIMAL_WEIGHT * mean(decimal)
}

/// Unit-cost edit distance over characters, two rows of memory.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// `100·(1 − distance / longer length)`; two empty strings score 100.
pub fn similarity(a: &str, b: &str) -> f64 {
    let n = a.chars().count().max(b.chars().count());
    if n == 0 {
        return 100.0;
    }
    100.0 * (1.0 - levenshtein(a, b) as f64 / n as f64)
}

/// Single tokens and joined adjacent pairs of the normalized text.
fn windows(text: &str) -> Vec<String> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let mut out: Vec<String> = tokens.iter().map(|t| t.to_string()).collect();
    out.extend(tokens.windows(2).map(|p| format!("{}{}", p[0], p[1])));
    out
}

/// Closest known operation, or unknown when a blacklisted word matches
/// better. Labels that are also blacklisted are never reported. Labels in
/// `cfg` must already be normalized.
pub fn match_operation(r: &OcrResult, cfg: &ExtractConfig) -> OperationCandidate {
    let ws = windows(&normalize(&r.text()));
    if ws.is_empty() {
        return OperationCandidate::unknown();
    }
    let mut best: Option<(&str, f64)> = None;
    for label in cfg.operations.iter().filter(|l| !cfg.blacklist.contains(l)) {
        for w in &ws {
            let s = similarity(w, label);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((label, s));
            }
        }
    }
    let black = cfg
        .blacklist
        .iter()
        .flat_map(|b| ws.iter().map(move |w| similarity(w, b)))
        .fold(f64::NEG_INFINITY, f64::max);
    match best {
        Some((label, score)) if black <= score => OperationCandidate {
            label: Some(label.to_string()),
            conf: score,
        },
        _ => OperationCandidate::unknown(),
    }
}

/// What one OCR pass over one region produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassResult {
    pub rect: RectI,
    pub pass: usize,
    pub text: String,
    pub value: Option<ValueCandidate>,
    pub operation: OperationCandidate,
}

impl PassResult {
    fn order(&self) -> (i32, i32, usize) {
        (self.rect.y, self.rect.x, self.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognitionOutcome {
    pub value: Option<ValueCandidate>,
    pub operation: OperationCandidate,
    pub regions_examined: usize,
    pub debug: Vec<PassResult>,
}

impl RecognitionOutcome {
    pub fn empty() -> Self {
        Self {
            value: None,
            operation: OperationCandidate::unknown(),
            regions_examined: 0,
            debug: Vec::new(),
        }
    }
}

/// Highest-confidence value and operation across all passes, then
/// thresholded. Ties go to the earlier region in reading order, then the
/// earlier pass, so the input order does not matter.
pub fn select_best(
    passes: &[PassResult],
    regions_examined: usize,
    cfg: &ExtractConfig,
) -> RecognitionOutcome {
    let better = |conf: f64, order, best: Option<(f64, (i32, i32, usize))>| {
        best.is_none_or(|(bc, bo)| conf > bc || (conf == bc && order < bo))
    };

    let mut value: Option<(ValueCandidate, (i32, i32, usize))> = None;
    let mut op: Option<(&OperationCandidate, (i32, i32, usize))> = None;
    for p in passes {
        if let Some(v) = p.value {
            if better(v.conf, p.order(), value.map(|(b, o)| (b.conf, o))) {
                value = Some((v, p.order()));
            }
        }
        if !p.operation.is_unknown()
            && better(p.operation.conf, p.order(), op.map(|(b, o)| (b.conf, o)))
        {
            op = Some((&p.operation, p.order()));
        }
    }

    let mut debug = passes.to_vec();
    debug.sort_by_key(|p| p.order());
    RecognitionOutcome {
        value: value
            .map(|(v, _)| v)
            .filter(|v| v.conf >= cfg.value_threshold),
        operation: op
            .map(|(o, _)| o.clone())
            .filter(|o| o.conf >= cfg.operation_threshold)
            .unwrap_or_else(OperationCandidate::unknown),
        regions_examined,
        debug,
    }
}
