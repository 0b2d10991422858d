//! Statistical toolkit for occupation-by-item score tables.
//!
//! The crate takes a table of occupations scored 0–100 on a set of survey
//! items and runs a fixed analysis pipeline over it:
//!
//! 1. **Ingest** ([`dataset`]): load and validate the table, report dropped
//!    rows, compute per-item descriptive statistics.
//! 2. **Factor analysis** ([`efa`]): iterated principal-axis factoring with
//!    varimax rotation, eigenvalue-based factor retention, and a pruning
//!    loop that removes weakly- and cross-loading items until the item set
//!    is stable.
//! 3. **Scales** ([`scales`]): unweighted item-mean scales (optionally
//!    reverse-coded), Cronbach-alpha reliability with conventional gates,
//!    and named alternate definitions for scales that only clear the lower
//!    gate.
//! 4. **Correlation and regression** ([`statcore`], [`regression`]):
//!    Pearson correlation tables, simple and multiple OLS on standardized
//!    variables, stepwise predictor selection, and collinearity
//!    diagnostics (VIF, sign flips).
//! 5. **Reporting** ([`report`]): quadrant classification of occupations
//!    against score thresholds, directional hypothesis checks, and
//!    deterministic Markdown/CSV renderings of every table.
//!
//! The [`pipeline`] module wires the stages together behind a single TOML
//! configuration file; the `proxistat` binary exposes each stage as a CLI
//! subcommand.

pub mod config;
pub mod dataset;
pub mod efa;
pub mod error;
pub mod pipeline;
pub mod regression;
pub mod report;
pub mod scales;
pub mod special;
pub mod statcore;

pub use error::{Error, Result};
