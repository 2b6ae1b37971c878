//! Holds the `acceptance` test target, which runs every acceptance criterion
//! through `qshutter::selftest` and exits non-zero if any fails.
//!
//! It lives in its own package so that `cargo test --workspace` runs it after
//! the unit and integration suites of the other crates.
