pub mod config;
pub mod error;
pub mod evalharness;
pub mod extract;
pub mod imgproc;
pub mod io;
pub mod ocr;
pub mod pipeline;
pub mod roi;
pub mod screen;
pub mod synth;

pub use error::{Error, Result};
