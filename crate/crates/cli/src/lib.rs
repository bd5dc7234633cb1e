//! File formats and subcommands behind the `ulam` binary.

pub mod commands;
pub mod formats;

pub use commands::{run, Cli, CliError};

/// Sizes the global rayon pool from `ULAM_THREADS` when it is set.
pub fn init_threads() {
    if let Some(n) = std::env::var("ULAM_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
