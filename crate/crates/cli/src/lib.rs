//! Library surface of the verification harness.
//!
//! The binary is a thin wrapper over these modules so that integration
//! tests (including the acceptance gate) can drive the same sampling,
//! suite, and reporting code paths directly.

pub mod config;
pub mod report;
pub mod sample;
pub mod suites;
