//! Command-line front end for the ETD toolkit.

pub mod catalog;
pub mod commands;
pub mod format;
pub mod report;
