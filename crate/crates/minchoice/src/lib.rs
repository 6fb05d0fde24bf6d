//! Experiment driver for min-choice preferential attachment trees: seeded
//! parallel trials, checkpoint CSV files, summaries, exact small-tree laws
//! and the recurrence table.

pub mod config;
pub mod enumerate;
mod error;
pub mod experiment;
pub mod records;
pub mod summary;
pub mod table;

pub use error::Error;
