//! Subcommands of the `payscan` binary.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use payscan::evalharness::{
    generate_rotations, load_manifest, run_samples, sweep, time_frames, write_sweep_csv,
    write_timings_csv, EvalReport, TimingReport,
};
use payscan::extract::RecognitionOutcome;
use payscan::io::load_png;
use payscan::pipeline::{OcrSelection, PipelineConfig, Recognizer};
use payscan::screen::{assess_frame, FrameFeedback, ScreenDetection};
use payscan::synth::format_cents;

/// Stable exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const NO_SCREEN: i32 = 2;
    pub const UNRECOGNIZED: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "payscan", version, about = "Reads the value and operation off payment-terminal screens")]
pub struct Cli {
    /// Pipeline settings file (`key = value` lines).
    #[arg(long, global = true, env = "PAYSCAN_CONFIG")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Overrides {
    /// Minimum value confidence, 0 to 100.
    #[arg(long)]
    pub thr_value: Option<f64>,

    /// Minimum operation confidence, 0 to 100.
    #[arg(long)]
    pub thr_op: Option<f64>,

    /// `builtin` or `external:<path>`.
    #[arg(long)]
    pub ocr: Option<OcrSelection>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Locate the screen and print positioning feedback as JSON.
    Detect { image: PathBuf },

    /// Read value and operation from a frame.
    Recognize {
        image: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Print the full outcome, including every pass, as JSON.
        #[arg(long)]
        json: bool,
    },

    /// Accuracy table over a dataset manifest, as CSV.
    Eval {
        manifest: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Write the CSV here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Value accuracy at every threshold from 0 to 100, as CSV.
    Sweep {
        manifest: PathBuf,
        #[arg(long)]
        ocr: Option<OcrSelection>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Write the 200-image rotation suite of one frame.
    Rotgen { image: PathBuf, out_dir: PathBuf },

    /// Time recognition over a manifest; per-run CSV and a summary.
    Bench {
        manifest: PathBuf,
        #[arg(long)]
        ocr: Option<OcrSelection>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Per-run seconds go here; the summary goes to stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        ocr: Option<OcrSelection>,
    },
}

pub fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(p) => PipelineConfig::from_file(p).with_context(|| format!("reading config {}", p.display())),
        None => Ok(PipelineConfig::default()),
    }
}

impl Overrides {
    pub fn apply(&self, mut cfg: PipelineConfig) -> Result<PipelineConfig> {
        if let Some(t) = self.thr_value {
            cfg.extract.value_threshold = t;
        }
        if let Some(t) = self.thr_op {
            cfg.extract.operation_threshold = t;
        }
        if let Some(ocr) = &self.ocr {
            cfg.ocr = ocr.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn ocr_only(ocr: &Option<OcrSelection>) -> Overrides {
    Overrides {
        ocr: ocr.clone(),
        ..Overrides::default()
    }
}

#[derive(Debug, Serialize)]
pub struct DetectReport {
    pub status: FrameFeedback,
    pub detection: Option<ScreenDetection>,
}

/// One-line summary, e.g. `VALUE 123,45 (conf 91) OPERATION CREDITO (conf 88)`.
pub fn human_outcome(o: &RecognitionOutcome) -> String {
    let value = match o.value {
        Some(v) => format!("{} (conf {:.0})", format_cents(v.cents), v.conf),
        None => "UNRECOGNIZED".to_string(),
    };
    let op = match &o.operation.label {
        Some(l) => format!("{l} (conf {:.0})", o.operation.conf),
        None => "UNKNOWN".to_string(),
    };
    format!("VALUE {value} OPERATION {op}")
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Runs one command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let base = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Detect { image } => {
            let frame = load_png(&image).with_context(|| format!("reading {}", image.display()))?;
            let rec = Recognizer::new(base)?;
            let det = rec.detect(&frame)?;
            let status = assess_frame(det.as_ref(), frame.dimensions(), &rec.config().screen);
            let report = DetectReport { status, detection: det };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if status == FrameFeedback::NoScreen { exit::NO_SCREEN } else { exit::OK })
        }
        Command::Recognize { image, overrides, json } => {
            let frame = load_png(&image).with_context(|| format!("reading {}", image.display()))?;
            let rec = Recognizer::new(overrides.apply(base)?)?;
            let outcome = rec
                .detect_and_recognize(&frame)?
                .map(|(_, o)| o)
                .unwrap_or_else(RecognitionOutcome::empty);
            if json {
                println!("{}", serde_json::to_string_pretty(&outcome)?);
            } else {
                println!("{}", human_outcome(&outcome));
            }
            Ok(if outcome.value.is_some() { exit::OK } else { exit::UNRECOGNIZED })
        }
        Command::Eval { manifest, overrides, out } => {
            let cfg = overrides.apply(base)?;
            let samples = load_manifest(&manifest)?;
            let results = run_samples(&samples, &cfg)?;
            let mut thresholds = vec![0.0, cfg.extract.value_threshold];
            thresholds.dedup();
            let report = EvalReport::from_results(&results, &thresholds);
            eprint!("{report}");
            report.write_csv(output(out.as_deref())?)?;
            Ok(exit::OK)
        }
        Command::Sweep { manifest, ocr, out } => {
            let cfg = ocr_only(&ocr).apply(base)?;
            let results = run_samples(&load_manifest(&manifest)?, &cfg)?;
            write_sweep_csv(&sweep(&results, 0..=100), output(out.as_deref())?)?;
            Ok(exit::OK)
        }
        Command::Rotgen { image, out_dir } => {
            let src = load_png(&image).with_context(|| format!("reading {}", image.display()))?;
            let files = generate_rotations(&src, &out_dir)?;
            println!("wrote {} files to {}", files.len(), out_dir.display());
            Ok(exit::OK)
        }
        Command::Bench { manifest, ocr, reps, out } => {
            let cfg = ocr_only(&ocr).apply(base)?;
            let frames = load_manifest(&manifest)?
                .iter()
                .map(|s| load_png(&s.image_path))
                .collect::<payscan::Result<Vec<_>>>()?;
            let seconds = time_frames(&frames, &cfg, reps)?;
            if let Some(p) = &out {
                write_timings_csv(&seconds, output(Some(p))?)?;
            }
            TimingReport::from_samples(&seconds)?.write_csv(io::stdout().lock())?;
            Ok(exit::OK)
        }
        Command::Serve { port, ocr } => {
            let cfg = ocr_only(&ocr).apply(base)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::service::serve(port, cfg))?;
            Ok(exit::OK)
        }
    }
}
