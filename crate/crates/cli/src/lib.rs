//! Library surface of the tabattr experiment driver; the binary in
//! `main.rs` is a thin wrapper so integration tests can call everything
//! in-process.

pub mod config;
pub mod manifest;
pub mod plotdata;
pub mod runner;
