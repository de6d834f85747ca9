//! Command line and HTTP front end over the `payscan` pipeline.

pub mod cli;
pub mod service;
