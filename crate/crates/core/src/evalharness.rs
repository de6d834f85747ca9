//! Dataset evaluation: manifests, accuracy tables, threshold sweeps, the
//! rotation suite and recognition timing.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{normalize, OperationCandidate, ValueCandidate};
use crate::imgproc::{rotate_expand, rotate_onto, GrayImage};
use crate::io::{load_png, save_png};
use crate::pipeline::{PipelineConfig, Recognizer};
use crate::synth::{render, PosScene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Machine {
    #[serde(rename = "POS")]
    Pos,
    #[serde(rename = "PINPAD")]
    Pinpad,
}

impl Machine {
    pub const ALL: [Machine; 2] = [Machine::Pos, Machine::Pinpad];

    pub fn as_str(self) -> &'static str {
        match self {
            Machine::Pos => "POS",
            Machine::Pinpad => "PINPAD",
        }
    }
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Machine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "POS" => Ok(Machine::Pos),
            "PINPAD" => Ok(Machine::Pinpad),
            other => Err(format!("unknown machine {other:?}, expected POS or PINPAD")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSample {
    pub image_path: PathBuf,
    pub machine: Machine,
    pub truth_cents: u64,
    /// Normalized label; `None` when the screen shows no known operation.
    pub truth_operation: Option<String>,
    /// 1-based manifest line.
    pub line: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestLine {
    file: PathBuf,
    machine: String,
    value_cents: i64,
    operation: Option<String>,
}

/// Reads a JSON-lines manifest. Relative `file` paths are resolved against
/// the manifest's directory. Blank lines are skipped.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<DatasetSample>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_manifest(&text, path)
}

/// `origin` names the manifest in errors and anchors relative paths.
pub fn parse_manifest(text: &str, origin: &Path) -> Result<Vec<DatasetSample>> {
    let base = origin.parent().unwrap_or(Path::new(""));
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Manifest {
            path: origin.to_path_buf(),
            line,
            message,
        };
        if raw.trim().is_empty() {
            continue;
        }
        let entry: ManifestLine = serde_json::from_str(raw).map_err(|e| err(e.to_string()))?;
        let machine = entry.machine.parse().map_err(err)?;
        let truth_cents =
            u64::try_from(entry.value_cents).map_err(|_| err("value_cents is negative".into()))?;
        let image_path = base.join(&entry.file);
        if !image_path.is_file() {
            return Err(err(format!("{} does not exist", image_path.display())));
        }
        let truth_operation = entry
            .operation
            .map(|o| normalize(&o))
            .filter(|o| !o.is_empty() && o != "UNKNOWN");
        out.push(DatasetSample {
            image_path,
            machine,
            truth_cents,
            truth_operation,
            line,
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    file: &'a str,
    machine: Machine,
    value_cents: u64,
    operation: &'a str,
}

/// Renders each scene at `frame_h` into `dir` as `NNNN.png` and writes
/// `manifest.jsonl` next to them. Returns the manifest path.
pub fn write_synthetic_dataset(
    dir: impl AsRef<Path>,
    scenes: &[(Machine, PosScene)],
    frame_h: u32,
) -> Result<PathBuf> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let names: Vec<String> = (0..scenes.len()).map(|i| format!("{i:04}.png")).collect();
    scenes
        .par_iter()
        .zip(&names)
        .try_for_each(|((_, scene), name)| save_png(&render(&scene.spec(frame_h))?.frame, dir.join(name)))?;
    let mut manifest = String::new();
    for ((machine, scene), name) in scenes.iter().zip(&names) {
        manifest += &serde_json::to_string(&ManifestEntry {
            file: name,
            machine: *machine,
            value_cents: scene.value_cents,
            operation: &scene.operation,
        })?;
        manifest.push('\n');
    }
    let path = dir.join("manifest.jsonl");
    std::fs::write(&path, manifest)?;
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grade {
    Correct,
    Incorrect,
    Unrecognized,
}

/// Unthresholded recognition of one sample, graded later at any threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult {
    pub image_path: PathBuf,
    pub machine: Machine,
    pub truth_cents: u64,
    pub truth_operation: Option<String>,
    pub screen_found: bool,
    pub value: Option<ValueCandidate>,
    pub operation: OperationCandidate,
}

impl SampleResult {
    /// Wrong digits anywhere make the value incorrect.
    pub fn value_grade(&self, threshold: f64) -> Grade {
        match self.value {
            Some(v) if v.conf >= threshold => {
                if v.cents == self.truth_cents {
                    Grade::Correct
                } else {
                    Grade::Incorrect
                }
            }
            _ => Grade::Unrecognized,
        }
    }

    /// A screen without a known operation is correct when nothing is
    /// reported and incorrect when a label is.
    pub fn operation_grade(&self, threshold: f64) -> Grade {
        let reported = self
            .operation
            .label
            .as_deref()
            .filter(|_| self.operation.conf >= threshold);
        match (reported, self.truth_operation.as_deref()) {
            (Some(got), Some(want)) if got == want => Grade::Correct,
            (Some(_), _) => Grade::Incorrect,
            (None, None) => Grade::Correct,
            (None, Some(_)) => Grade::Unrecognized,
        }
    }
}

/// Recognizes every sample once with thresholds disabled. Results are sorted
/// by image path.
pub fn run_samples(samples: &[DatasetSample], cfg: &PipelineConfig) -> Result<Vec<SampleResult>> {
    let mut cfg = cfg.clone();
    cfg.extract.value_threshold = 0.0;
    cfg.extract.operation_threshold = 0.0;
    let rec = Recognizer::new(cfg)?;
    let run = |s: &DatasetSample| -> Result<SampleResult> {
        let frame = load_png(&s.image_path)?;
        let found = rec.detect_and_recognize(&frame)?;
        if found.is_none() {
            log::info!("{}: no screen detected", s.image_path.display());
        }
        let (value, operation) = match &found {
            Some((_, o)) => (o.value, o.operation.clone()),
            None => (None, OperationCandidate::unknown()),
        };
        Ok(SampleResult {
            image_path: s.image_path.clone(),
            machine: s.machine,
            truth_cents: s.truth_cents,
            truth_operation: s.truth_operation.clone(),
            screen_found: found.is_some(),
            value,
            operation,
        })
    };
    let mut results = if rec.config().parallel {
        samples.par_iter().map(run).collect::<Result<Vec<_>>>()?
    } else {
        samples.iter().map(run).collect::<Result<Vec<_>>>()?
    };
    results.sort_by(|a, b| a.image_path.cmp(&b.image_path));
    Ok(results)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Value,
    Operation,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Value => "value",
            Metric::Operation => "operation",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub correct: usize,
    pub incorrect: usize,
    pub unrecognized: usize,
}

impl Counts {
    pub fn add(&mut self, g: Grade) {
        match g {
            Grade::Correct => self.correct += 1,
            Grade::Incorrect => self.incorrect += 1,
            Grade::Unrecognized => self.unrecognized += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.correct + self.incorrect + self.unrecognized
    }

    /// `(correct, incorrect, unrecognized)` as percentages of the total.
    pub fn percentages(&self) -> (f64, f64, f64) {
        let n = self.total().max(1) as f64;
        (
            100.0 * self.correct as f64 / n,
            100.0 * self.incorrect as f64 / n,
            100.0 * self.unrecognized as f64 / n,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub machine: Machine,
    pub metric: Metric,
    pub threshold: f64,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
}

impl EvalReport {
    /// Grades cached results. The same threshold applies to both metrics.
    /// Machines without samples get no rows.
    pub fn from_results(results: &[SampleResult], thresholds: &[f64]) -> Self {
        let mut rows = Vec::new();
        for machine in Machine::ALL {
            let of_machine: Vec<&SampleResult> =
                results.iter().filter(|r| r.machine == machine).collect();
            if of_machine.is_empty() {
                continue;
            }
            for &threshold in thresholds {
                for metric in [Metric::Value, Metric::Operation] {
                    let mut counts = Counts::default();
                    for r in &of_machine {
                        counts.add(match metric {
                            Metric::Value => r.value_grade(threshold),
                            Metric::Operation => r.operation_grade(threshold),
                        });
                    }
                    rows.push(EvalRow {
                        machine,
                        metric,
                        threshold,
                        counts,
                    });
                }
            }
        }
        Self { rows }
    }

    pub fn row(&self, machine: Machine, metric: Metric, threshold: f64) -> Option<&EvalRow> {
        self.rows
            .iter()
            .find(|r| r.machine == machine && r.metric == metric && r.threshold == threshold)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["machine", "metric", "threshold", "correct", "incorrect", "unrecognized"])?;
        for r in &self.rows {
            w.write_record([
                r.machine.as_str().to_string(),
                r.metric.as_str().to_string(),
                r.threshold.to_string(),
                r.counts.correct.to_string(),
                r.counts.incorrect.to_string(),
                r.counts.unrecognized.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<7} {:<9} {:>5}  {:>14} {:>14} {:>14}",
            "machine", "metric", "thr", "correct", "incorrect", "unrecognized"
        )?;
        for r in &self.rows {
            let (c, i, u) = r.counts.percentages();
            writeln!(
                f,
                "{:<7} {:<9} {:>5}  {:>5} ({:>5.1}%) {:>5} ({:>5.1}%) {:>5} ({:>5.1}%)",
                r.machine.as_str(),
                r.metric.as_str(),
                r.threshold,
                r.counts.correct,
                c,
                r.counts.incorrect,
                i,
                r.counts.unrecognized,
                u
            )?;
        }
        Ok(())
    }
}

pub fn evaluate(
    samples: &[DatasetSample],
    cfg: &PipelineConfig,
    thresholds: &[f64],
) -> Result<EvalReport> {
    Ok(EvalReport::from_results(&run_samples(samples, cfg)?, thresholds))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: u32,
    #[serde(flatten)]
    pub counts: Counts,
}

/// Value grades over cached results at every threshold in `thresholds`.
pub fn sweep(results: &[SampleResult], thresholds: impl IntoIterator<Item = u32>) -> Vec<SweepRow> {
    thresholds
        .into_iter()
        .map(|t| {
            let mut counts = Counts::default();
            for r in results {
                counts.add(r.value_grade(t as f64));
            }
            SweepRow { t, counts }
        })
        .collect()
}

/// Value accuracy at thresholds 0 through 100, recognizing each sample once.
pub fn threshold_sweep(samples: &[DatasetSample], cfg: &PipelineConfig) -> Result<Vec<SweepRow>> {
    Ok(sweep(&run_samples(samples, cfg)?, 0..=100))
}

pub fn write_sweep_csv(rows: &[SweepRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "correct", "incorrect", "unrecognized"])?;
    for r in rows {
        w.write_record([
            r.t.to_string(),
            r.counts.correct.to_string(),
            r.counts.incorrect.to_string(),
            r.counts.unrecognized.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const MAX_SUITE_ANGLE: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Original dimensions; corners leave the frame.
    Cropped,
    /// Canvas grown to hold the whole rotated image.
    Uncropped,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Cropped => "cropped",
            Variant::Uncropped => "uncropped",
        }
    }
}

/// One member of the rotation suite. Positive angles are clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rotation {
    pub angle: i32,
    pub variant: Variant,
}

impl Rotation {
    /// ±1° to ±50° in 1° steps, both variants: 200 entries.
    pub fn suite() -> Vec<Rotation> {
        let mut out = Vec::new();
        for variant in [Variant::Cropped, Variant::Uncropped] {
            for sign in [1, -1] {
                for deg in 1..=MAX_SUITE_ANGLE as i32 {
                    out.push(Rotation {
                        angle: sign * deg,
                        variant,
                    });
                }
            }
        }
        out
    }

    /// For example `rot_cw_25_cropped.png`.
    pub fn file_name(&self) -> String {
        let dir = if self.angle >= 0 { "cw" } else { "ccw" };
        format!("rot_{dir}_{:02}_{}.png", self.angle.unsigned_abs(), self.variant.as_str())
    }

    /// Inverse of `file_name`.
    pub fn parse_file_name(name: &str) -> Option<Rotation> {
        let rest = name.strip_prefix("rot_")?.strip_suffix(".png")?;
        let mut parts = rest.split('_');
        let sign = match parts.next()? {
            "cw" => 1,
            "ccw" => -1,
            _ => return None,
        };
        let deg: i32 = parts.next()?.parse().ok()?;
        let variant = match parts.next()? {
            "cropped" => Variant::Cropped,
            "uncropped" => Variant::Uncropped,
            _ => return None,
        };
        parts.next().is_none().then_some(Rotation {
            angle: sign * deg,
            variant,
        })
    }

    pub fn apply(&self, src: &GrayImage) -> GrayImage {
        let a = self.angle as f64;
        match self.variant {
            Variant::Cropped => rotate_onto(src, a, src.width(), src.height(), 0),
            Variant::Uncropped => rotate_expand(src, a),
        }
    }
}

/// Writes the 200-image rotation suite of `src` into `out_dir`.
pub fn generate_rotations(src: &GrayImage, out_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir)?;
    Rotation::suite()
        .into_par_iter()
        .map(|r| {
            let path = out_dir.join(r.file_name());
            save_png(&r.apply(src), &path)?;
            Ok(path)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub median: f64,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

impl TimingReport {
    /// Population statistics of `seconds`, which must not be empty.
    pub fn from_samples(seconds: &[f64]) -> Result<Self> {
        if seconds.is_empty() {
            return Err(Error::InvalidArgument("no timings".into()));
        }
        let mut s = seconds.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let median = if n % 2 == 1 {
            s[n / 2]
        } else {
            (s[n / 2 - 1] + s[n / 2]) / 2.0
        };
        let mean = s.iter().sum::<f64>() / n as f64;
        let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        Ok(Self {
            median,
            mean,
            stddev: var.sqrt(),
            min: s[0],
            max: s[n - 1],
        })
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["median", "mean", "stddev", "min", "max"])?;
        w.write_record([self.median, self.mean, self.stddev, self.min, self.max].map(|v| format!("{v:.6}")))?;
        w.flush()?;
        Ok(())
    }
}

/// Wall-clock seconds of `Recognizer::recognize` on each frame, `repetitions`
/// times each, run serially. Detection is done once per frame and not timed;
/// frames without a screen are skipped.
pub fn time_frames(frames: &[GrayImage], cfg: &PipelineConfig, repetitions: usize) -> Result<Vec<f64>> {
    if repetitions == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1".into()));
    }
    let rec = Recognizer::new(cfg.clone())?;
    let mut times = Vec::new();
    for frame in frames {
        let Some(det) = rec.detect(frame)? else {
            log::warn!("timing: frame without a screen skipped");
            continue;
        };
        for _ in 0..repetitions {
            let t0 = Instant::now();
            rec.recognize(frame, &det)?;
            times.push(t0.elapsed().as_secs_f64());
        }
    }
    Ok(times)
}

pub fn timing_bench(
    samples: &[DatasetSample],
    cfg: &PipelineConfig,
    repetitions: usize,
) -> Result<TimingReport> {
    let frames = samples
        .iter()
        .map(|s| load_png(&s.image_path))
        .collect::<Result<Vec<_>>>()?;
    TimingReport::from_samples(&time_frames(&frames, cfg, repetitions)?)
}

pub fn write_timings_csv(seconds: &[f64], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["run", "seconds"])?;
    for (i, s) in seconds.iter().enumerate() {
        w.write_record([i.to_string(), format!("{s:.6}")])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgproc::rotated_bounds;

    fn result(cents: Option<(u64, f64)>, truth: u64) -> SampleResult {
        SampleResult {
            image_path: PathBuf::from("x.png"),
            machine: Machine::Pos,
            truth_cents: truth,
            truth_operation: Some("CREDITO".into()),
            screen_found: true,
            value: cents.map(|(cents, conf)| ValueCandidate { cents, conf }),
            operation: OperationCandidate::unknown(),
        }
    }

    fn manifest_dir() -> tempfile::TempDir {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.png"), b"").unwrap();
        dir
    }

    #[test]
    fn manifest_lines() {
        let dir = manifest_dir();
        let m = dir.path().join("m.jsonl");
        assert!(parse_manifest("", &m).unwrap().is_empty());
        let one = r#"{"file":"a.png","machine":"PINPAD","value_cents":1250,"operation":"Crédito"}"#;
        let s = parse_manifest(one, &m).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].machine, Machine::Pinpad);
        assert_eq!(s[0].truth_cents, 1250);
        assert_eq!(s[0].truth_operation.as_deref(), Some("CREDITO"));
        assert_eq!(s[0].image_path, dir.path().join("a.png"));
        let unknown = r#"{"file":"a.png","machine":"POS","value_cents":1,"operation":null}"#;
        assert_eq!(parse_manifest(unknown, &m).unwrap()[0].truth_operation, None);
    }

    #[test]
    fn manifest_errors_name_the_line() {
        let dir = manifest_dir();
        let m = dir.path().join("m.jsonl");
        let good = r#"{"file":"a.png","machine":"POS","value_cents":1,"operation":"DEBITO"}"#;
        let cases = [
            r#"{"file":"a.png","machine":"ATM","value_cents":1,"operation":"DEBITO"}"#,
            r#"{"file":"a.png","machine":"POS","value_cents":-5,"operation":"DEBITO"}"#,
            r#"{"file":"b.png","machine":"POS","value_cents":1,"operation":"DEBITO"}"#,
            r#"{"file":"a.png","machine":"POS"}"#,
            "not json",
        ];
        for bad in cases {
            let text = format!("{good}\n\n{bad}\n");
            match parse_manifest(&text, &m) {
                Err(Error::Manifest { line, .. }) => assert_eq!(line, 3, "{bad}"),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn synthetic_dataset_loads_back() {
        let dir = tempfile::tempdir().unwrap();
        let scenes = [
            (Machine::Pos, PosScene::new(1234, "CREDITO")),
            (Machine::Pinpad, PosScene::new(99, "DEBITO")),
        ];
        let manifest = write_synthetic_dataset(dir.path(), &scenes, 800).unwrap();
        let samples = load_manifest(manifest).unwrap();
        assert_eq!(samples.len(), 2);
        assert_eq!(samples[1].machine, Machine::Pinpad);
        assert_eq!(samples[1].truth_cents, 99);
        assert_eq!(load_png(&samples[0].image_path).unwrap().height(), 800);
    }

    #[test]
    fn value_trichotomy() {
        assert_eq!(result(Some((100, 50.0)), 100).value_grade(0.0), Grade::Correct);
        assert_eq!(result(Some((65, 65.0)), 100).value_grade(0.0), Grade::Incorrect);
        assert_eq!(result(Some((100, 65.0)), 100).value_grade(70.0), Grade::Unrecognized);
        assert_eq!(result(None, 100).value_grade(0.0), Grade::Unrecognized);
    }

    #[test]
    fn operation_grades() {
        let mut r = result(None, 1);
        assert_eq!(r.operation_grade(0.0), Grade::Unrecognized);
        r.operation = OperationCandidate { label: Some("CREDITO".into()), conf: 80.0 };
        assert_eq!(r.operation_grade(50.0), Grade::Correct);
        assert_eq!(r.operation_grade(90.0), Grade::Unrecognized);
        r.operation.label = Some("DEBITO".into());
        assert_eq!(r.operation_grade(50.0), Grade::Incorrect);
        r.truth_operation = None;
        assert_eq!(r.operation_grade(50.0), Grade::Incorrect);
        assert_eq!(r.operation_grade(90.0), Grade::Correct);
    }

    #[test]
    fn nine_of_ten() {
        let mut results: Vec<SampleResult> = (0..9).map(|i| result(Some((i, 90.0)), i)).collect();
        results.push(result(Some((12346, 90.0)), 12345));
        let report = EvalReport::from_results(&results, &[0.0]);
        let row = report.row(Machine::Pos, Metric::Value, 0.0).unwrap();
        assert_eq!((row.counts.correct, row.counts.incorrect, row.counts.unrecognized), (9, 1, 0));
        assert_eq!(row.counts.percentages(), (90.0, 10.0, 0.0));
        assert!(report.row(Machine::Pinpad, Metric::Value, 0.0).is_none());
    }

    #[test]
    fn sweep_matches_report_and_is_monotone() {
        let results: Vec<SampleResult> = (0..40)
            .map(|i| result(Some((i % 3, (i * 7 % 101) as f64)), 0))
            .chain([result(None, 0)])
            .collect();
        let rows = sweep(&results, 0..=100);
        assert_eq!(rows.len(), 101);
        assert_eq!(rows[0].counts.unrecognized, 1);
        let report = EvalReport::from_results(&results, &[0.0]);
        assert_eq!(report.row(Machine::Pos, Metric::Value, 0.0).unwrap().counts, rows[0].counts);
        for w in rows.windows(2) {
            assert!(w[1].counts.correct <= w[0].counts.correct);
            assert!(w[1].counts.unrecognized >= w[0].counts.unrecognized);
            assert_eq!(w[1].counts.total(), results.len());
        }
        let below_100 = results.iter().filter(|r| r.value.is_none_or(|v| v.conf < 100.0)).count();
        assert_eq!(rows[100].counts.unrecognized, below_100);
    }

    #[test]
    fn csv_layouts() {
        let results = vec![result(Some((1, 80.0)), 1)];
        let mut buf = Vec::new();
        EvalReport::from_results(&results, &[0.0, 70.0]).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "machine,metric,threshold,correct,incorrect,unrecognized");
        assert_eq!(lines[1], "POS,value,0,1,0,0");
        assert_eq!(lines[2], "POS,operation,0,0,0,1");
        assert_eq!(lines.len(), 5);
        let mut buf = Vec::new();
        write_sweep_csv(&sweep(&results, [0, 90]), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,correct,incorrect,unrecognized\n0,1,0,0\n90,0,0,1\n");
    }

    #[test]
    fn rotation_suite_shape() {
        let suite = Rotation::suite();
        assert_eq!(suite.len(), 200);
        assert!(suite.iter().all(|r| r.angle != 0 && r.angle.abs() <= 50));
        let names: std::collections::HashSet<String> = suite.iter().map(Rotation::file_name).collect();
        assert_eq!(names.len(), 200);
        for r in &suite {
            assert_eq!(Rotation::parse_file_name(&r.file_name()), Some(*r));
        }
        let r = Rotation { angle: 25, variant: Variant::Cropped };
        assert_eq!(r.file_name(), "rot_cw_25_cropped.png");
        assert_eq!(Rotation::parse_file_name("rot_up_25_cropped.png"), None);
    }

    #[test]
    fn uncropped_canvas_holds_the_rotated_bounds() {
        let src = GrayImage::filled(40, 30, 200);
        let out = Rotation { angle: 45, variant: Variant::Uncropped }.apply(&src);
        let half = std::f64::consts::FRAC_1_SQRT_2;
        let side = ((40.0 + 30.0) * half - 1e-9).ceil() as u32;
        assert_eq!(out.dimensions(), (side, side));
        assert_eq!(out.dimensions(), rotated_bounds(40, 30, 45.0));
        let cropped = Rotation { angle: -45, variant: Variant::Cropped }.apply(&src);
        assert_eq!(cropped.dimensions(), (40, 30));
    }

    #[test]
    fn generates_200_files() {
        let dir = tempfile::tempdir().unwrap();
        let src = GrayImage::from_fn(24, 16, |x, y| (x * 10 + y) as u8);
        let paths = generate_rotations(&src, dir.path()).unwrap();
        assert_eq!(paths.len(), 200);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 200);
        let img = load_png(dir.path().join("rot_ccw_50_uncropped.png")).unwrap();
        assert_eq!(img.dimensions(), rotated_bounds(24, 16, 50.0));
    }

    #[test]
    fn timing_statistics() {
        let one = TimingReport::from_samples(&[0.25]).unwrap();
        assert_eq!((one.min, one.median, one.max, one.stddev), (0.25, 0.25, 0.25, 0.0));
        let r = TimingReport::from_samples(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!((r.min, r.median, r.max, r.mean), (1.0, 2.5, 4.0, 2.5));
        assert!((r.stddev - 1.25f64.sqrt()).abs() < 1e-12);
        assert!(TimingReport::from_samples(&[]).is_err());
        assert!(time_frames(&[], &PipelineConfig::default(), 0).is_err());
    }
}
