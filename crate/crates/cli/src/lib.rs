//! Experiment driver and command-line front end for `tikpoly`.

pub mod commands;
pub mod config;
pub mod experiments;
pub mod names;
pub mod svg;
pub mod table;
