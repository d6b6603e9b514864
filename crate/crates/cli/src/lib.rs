//! Verification suites and JSON reports behind the `weylnet` command.

pub mod report;
pub mod suites;
