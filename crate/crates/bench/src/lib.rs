//! Shared fixtures for the criterion benchmarks.

use hill4bp::hill::MassRatio;
use hill4bp::{Settings, SpatialState};

/// Mass ratio used by benchmarks that do not sweep it.
pub fn bench_mu() -> MassRatio {
    MassRatio::new(0.25).expect("in range")
}

/// The bounded orbit used for propagation benchmarks.
pub fn bench_orbit() -> (MassRatio, SpatialState, Settings) {
    let mu = MassRatio::new(0.00095).expect("in range");
    let start = SpatialState::new(0.3, 0.0, 0.0, 0.0, 1.5278, 0.0);
    let settings = Settings {
        rel_tol: 1e-9,
        abs_tol: 1e-9,
        ..Settings::default()
    };
    (mu, start, settings)
}
