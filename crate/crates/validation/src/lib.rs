//! Holds the `acceptance` test target only; see `tests/acceptance.rs`.
//! Kept as its own package so that its run comes after every other test
//! target in the workspace.
