//! Exact periodicity conditions (Hankel ranks of normalised series) and
//! the numeric integral relation satisfied by periodic trajectories.

pub mod cayley;
pub mod darboux;
pub mod params;
pub mod series;

pub use cayley::{blocks_for, cayley_test, double_caustic_test, lightlike_test, threshold_note, Block};
pub use darboux::{darboux_integrals, darboux_residual};
pub use params::{HyperellipticParams, RatParams, G2};
pub use series::{divided_series, hankel_rank, series_of_kind, sqrt_series, NormalizedSeries, SeriesKind};
