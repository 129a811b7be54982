//! Configuration-driven front end: run configs, result tables, and the
//! sweep / audit / compare operations the CLI binary dispatches to.

pub mod config;
pub mod run;
pub mod table;

pub use config::{load_config, Grid, Quantity, RunConfig, SchemeTag};
pub use run::{audit_verdict, nernst_audit, run_sweep, scheme_compare, Verdict};
pub use table::{emit_table, ResultTable};
