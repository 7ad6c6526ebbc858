//! Shared fixtures for the criterion benchmarks.

use filippov_core::ModelParams;

/// The two built-in presets with the thresholds used throughout the benches.
pub fn fixtures() -> [(&'static str, ModelParams); 2] {
    [
        ("A1", ModelParams::preset_a1()),
        ("A2", ModelParams::preset_a2()),
    ]
}
