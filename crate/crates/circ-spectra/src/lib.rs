//! Command-line front end, file formats and parallel ensemble drivers for
//! [`circ_spectra_core`].
//!
//! The `circ-spectra` binary has five subcommands: `law`, `density`,
//! `simulate`, `graph` and `compare`. Every file it writes gets a
//! `<name>.meta.json` sidecar recording the configuration, seed, params
//! hash and tool version. Data files depend only on the configuration, not
//! on the thread count (`CIRC_SPECTRA_THREADS`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod output;
pub mod parallel;
pub mod params;
pub mod presets;

pub use error::{CliError, Result};
