//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use flagqk::FlagVariety;

/// `(type, Δ_P)` pairs of increasing size.
pub const SPACES: [(&str, &str); 5] = [
    ("A2", "2"),
    ("A3", "1,3"),
    ("A3", ""),
    ("B3", "1"),
    ("D4", "1,3,4"),
];

pub fn space(t: &str, dp: &str) -> Arc<FlagVariety> {
    FlagVariety::parse(t, dp).expect("benchmark space")
}
