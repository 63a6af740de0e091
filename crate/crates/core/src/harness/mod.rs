//! Seeded experiments: configuration, scenario runs, records and CDFs.
//!
//! Runs are deterministic for a fixed configuration: trials draw from keyed
//! random streams and records are sorted by key before output, so thread
//! scheduling never changes the bytes written.

mod config;
mod records;
mod run;

pub use config::{
    parse_config, ExperimentConfig, PropagationConfig, ScattererArc, ScenarioConfig, Scheme, SchemeKind, Sweep,
    SPEED_OF_LIGHT,
};
pub use records::{
    aggregate_cdf, emit_cdf, emit_records, emit_records_to, parse_records, parse_records_from, CdfKey, CdfTable,
    ResultRecord, CDF_HEADER, RECORD_HEADER,
};
pub use run::{arrays, run_scenario, scatterer_arc, scheme_placement, trial_scenario};
