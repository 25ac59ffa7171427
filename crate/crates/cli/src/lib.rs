//! Scenario runner behind `gerbetool`.

pub mod config;
pub mod report;
pub mod run;

pub use config::{schema, ConfigError, Scenario};
pub use report::{Check, Report, Status};
pub use run::run;
