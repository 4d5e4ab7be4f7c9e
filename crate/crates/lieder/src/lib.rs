//! File formats, subcommands and the self-test suite for the `lieder` tool.

pub mod commands;
pub mod format;
pub mod selftest;
