//! Configuration files, CSV serialization and binary snapshots.

pub mod config;
pub mod csv;
pub mod snapshot;

pub use config::{config_to_text, parse_config, LabParams, ResolvedConfig};
pub use csv::{parse_diagnostics_csv, write_diagnostics_csv, DiagnosticsRow, DIAGNOSTICS_HEADER};
pub use snapshot::Snapshot;
