//! Command-line front end and socket server for `presstype-core`.

pub mod config;
pub mod service;
