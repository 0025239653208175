//! Operator CLI and HTTP service over `jobham-core`.

pub mod cli;
pub mod server;
